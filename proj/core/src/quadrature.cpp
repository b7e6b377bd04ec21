#include "gpbg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gpbg {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
struct LegendreEval {
    double p;
    double dp;
};

LegendreEval legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

}  // namespace

GaussLegendre gauss_legendre(int order) {
    if (order < 2) throw Error("gauss_legendre: order must be >= 2");
    GaussLegendre out;
    out.nodes.resize(static_cast<std::size_t>(order));
    out.weights.resize(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        LegendreEval ev{};
        for (int it = 0; it < 64; ++it) {
            ev = legendre(order, x);
            const double dx = ev.p / ev.dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                ev = legendre(order, x);
                break;
            }
        }
        out.nodes[static_cast<std::size_t>(i)] = 0.5 * (x + 1.0);
        out.weights[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - x * x) * ev.dp * ev.dp);
    }
    std::vector<std::size_t> perm(out.nodes.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t a, std::size_t b) { return out.nodes[a] < out.nodes[b]; });
    GaussLegendre sorted;
    for (std::size_t i : perm) {
        sorted.nodes.push_back(out.nodes[i]);
        sorted.weights.push_back(out.weights[i]);
    }
    return sorted;
}

SimplexQuadrature::SimplexQuadrature(int order_, int dim_) : order(order_), dim(dim_) {
    if (order < 2) throw Error("SimplexQuadrature: order must be >= 2");
    if (dim < 1) throw Error("SimplexQuadrature: dimension must be >= 1");
}

}  // namespace gpbg
