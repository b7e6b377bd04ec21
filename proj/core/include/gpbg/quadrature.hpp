#pragma once

#include <vector>

#include "gpbg/grid.hpp"

namespace gpbg {

// Gauss-Legendre nodes and weights on [0, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendre gauss_legendre(int order);

// Quadrature over the ordered simplex {t >= s_1 >= ... >= s_dim >= 0} via
// the substitution s_i = t * u_1 * ... * u_i with a tensor Gauss-Legendre
// rule in each u_j; the Jacobian is t^dim * prod_j u_j^(dim-j). The
// integrand stays smooth, so convergence is spectral in the order.
struct SimplexQuadrature {
    int order = 6;
    int dim = 1;

    SimplexQuadrature(int order_, int dim_);
};

template <class F>
cdouble integrate_ordered_simplex(const SimplexQuadrature& q, double t, F&& f) {
    const GaussLegendre gl = gauss_legendre(q.order);
    std::vector<int> idx(static_cast<std::size_t>(q.dim), 0);
    std::vector<double> s(static_cast<std::size_t>(q.dim), 0.0);
    std::vector<cdouble> parts;
    parts.reserve(static_cast<std::size_t>(1));
    while (true) {
        double w = 1.0, prefix = t;
        for (int j = 0; j < q.dim; ++j) {
            const double u = gl.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
            w *= gl.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])] * t;
            for (int rep = 0; rep < q.dim - 1 - j; ++rep) w *= u;
            prefix *= u;
            s[static_cast<std::size_t>(j)] = prefix;
        }
        parts.push_back(w * f(std::span<const double>(s)));
        int j = q.dim - 1;
        while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == q.order) {
            idx[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
    }
    return pairwise_sum(std::span<const cdouble>(parts));
}

}  // namespace gpbg
