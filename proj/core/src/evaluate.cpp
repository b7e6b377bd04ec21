#include "gpbg/evaluate.hpp"

#include <unordered_map>

namespace gpbg {

namespace {

using Cache = std::unordered_map<const Expr*, GridFunction>;

const GridFunction& eval_cached(const Expr* e, std::span<const double> times,
                                const GridFunction& phi, Cache& cache) {
    if (auto it = cache.find(e); it != cache.end()) return it->second;
    GridFunction out;
    switch (e->op) {
        case Op::Phi:
            out = phi;
            break;
        case Op::Cubic:
            out = cubic_term(phi);
            break;
        case Op::Conj:
            out = conjugate(eval_cached(e->a, times, phi, cache));
            break;
        case Op::Prop: {
            const double dt = times[static_cast<std::size_t>(e->from)] -
                              times[static_cast<std::size_t>(e->to)];
            out = propagate(eval_cached(e->a, times, phi, cache), dt);
            break;
        }
        case Op::Prod: {
            out = multiply(multiply(eval_cached(e->a, times, phi, cache),
                                    eval_cached(e->b, times, phi, cache)),
                           eval_cached(e->c, times, phi, cache));
            break;
        }
    }
    return cache.emplace(e, std::move(out)).first->second;
}

}  // namespace

GridFunction evaluate_expr(const Expr* e, std::span<const double> times, const GridFunction& phi) {
    Cache cache;
    return eval_cached(e, times, phi, cache);
}

std::vector<FactorKernel> factorize(const TreeForest& f, ExprPool& pool) {
    std::vector<FactorKernel> out;
    for (FactorMap& fm : extract_factor_maps(f)) {
        FactorKernel fk;
        fk.fm = std::move(fm);
        if (fk.fm.sigma_j.n >= 1) fk.tower = build_kernel_tower(fk.fm, pool);
        out.push_back(std::move(fk));
    }
    return out;
}

DensityTensor evaluate_factor(const FactorKernel& fk, std::span<const double> times,
                              const GridFunction& phi) {
    const int n_pts = phi.grid.size;
    DensityTensor out = make_density_tensor(phi.grid, 1);

    // A bare factor is the state pair carried through the whole expansion.
    if (fk.fm.sigma_j.n == 0) {
        const double lead = times[0] - times[static_cast<std::size_t>(fk.fm.n_global)];
        const GridFunction u = propagate(phi, lead);
        for (int x = 0; x < n_pts; ++x) {
            for (int xp = 0; xp < n_pts; ++xp) {
                out.values[static_cast<std::size_t>(x * n_pts + xp)] =
                    u.values[static_cast<std::size_t>(x)] * std::conj(u.values[static_cast<std::size_t>(xp)]);
            }
        }
        return out;
    }

    const double lead = times[0] - times[static_cast<std::size_t>(fk.fm.time_slots.front())];
    Cache cache;
    for (const KernelTerm& term : fk.tower.top().terms) {
        const GridFunction psi = propagate(eval_cached(term.psi, times, phi, cache), lead);
        const GridFunction chi = propagate(eval_cached(term.chi, times, phi, cache), lead);
        const double s = term.sign;
        for (int x = 0; x < n_pts; ++x) {
            const cdouble px = s * psi.values[static_cast<std::size_t>(x)];
            for (int xp = 0; xp < n_pts; ++xp) {
                out.values[static_cast<std::size_t>(x * n_pts + xp)] +=
                    px * std::conj(chi.values[static_cast<std::size_t>(xp)]);
            }
        }
    }
    return out;
}

std::vector<DensityTensor> evaluate_J_factorized(const TreeForest& f,
                                                 const std::vector<FactorKernel>& kernels,
                                                 std::span<const double> times,
                                                 const GridFunction& phi) {
    if (static_cast<int>(kernels.size()) != f.k) {
        throw Error("evaluate_J_factorized: expected one kernel per tree");
    }
    if (static_cast<int>(times.size()) != f.n + 1) {
        throw Error("evaluate_J_factorized: need n+1 time values");
    }
    constexpr std::size_t kTermCap = std::size_t{1} << 12;
    std::size_t total_terms = 0;
    for (const auto& fk : kernels) {
        total_terms += fk.fm.sigma_j.n == 0 ? 1 : fk.tower.top().terms.size();
    }
    if (total_terms > kTermCap) {
        throw TermCapExceeded("evaluate_J_factorized: " + std::to_string(total_terms) +
                              " expanded terms exceeds the cap of 2^12");
    }
    std::vector<DensityTensor> out;
    out.reserve(kernels.size());
    for (const auto& fk : kernels) out.push_back(evaluate_factor(fk, times, phi));
    return out;
}

KernelFunctionals kernel_functionals(const std::vector<DensityTensor>& factors, int xi, int xpi) {
    KernelFunctionals f{1.0, 1.0};
    for (const auto& t : factors) {
        const int n = t.grid.size;
        f.probe *= t.values[static_cast<std::size_t>(xi * n + xpi)];
        std::vector<cdouble> diag(static_cast<std::size_t>(n));
        for (int x = 0; x < n; ++x) diag[static_cast<std::size_t>(x)] = t.values[static_cast<std::size_t>(x * n + x)];
        f.trace *= pairwise_sum(std::span<const cdouble>(diag)) * t.grid.dx();
    }
    return f;
}

}  // namespace gpbg
