#pragma once

// Test-only oracles, independent of the code paths they check.

#include <vector>

#include "gpbg/collision.hpp"
#include "gpbg/grid.hpp"
#include "gpbg/tensor.hpp"

namespace gpbg::oracle {

inline DensityTensor outer_pair(const GridFunction& a, const GridFunction& b) {
    DensityTensor out = make_density_tensor(a.grid, 1);
    const int n = a.grid.size;
    for (int x = 0; x < n; ++x) {
        for (int xp = 0; xp < n; ++xp) {
            out.values[static_cast<std::size_t>(x * n + xp)] =
                a.values[static_cast<std::size_t>(x)] *
                std::conj(b.values[static_cast<std::size_t>(xp)]);
        }
    }
    return out;
}

// Direct sequential simulation of the operator chain on a list of
// one-particle kernels: start from k+n state pairs, contract the pair
// (mu(k+i), k+i) level by level, propagating every surviving kernel in
// between. No trees, towers or expression DAGs involved; only the chain
// semantics itself. Returns the k surviving kernels.
inline std::vector<DensityTensor> direct_kernel_chain(const CollisionMap& m,
                                                      std::span<const double> times,
                                                      const GridFunction& phi) {
    const int n_pts = phi.grid.size;
    std::vector<DensityTensor> slot;
    std::vector<bool> alive(static_cast<std::size_t>(m.k + m.n) + 1, true);
    slot.push_back(make_density_tensor(phi.grid, 1));  // unused slot 0
    for (int i = 1; i <= m.k + m.n; ++i) slot.push_back(outer_pair(phi, phi));

    for (int i = m.n; i >= 1; --i) {
        const int j = m.at(i);
        const int c = m.k + i;
        DensityTensor merged = make_density_tensor(phi.grid, 1);
        for (int x = 0; x < n_pts; ++x) {
            const cdouble diag_x = slot[static_cast<std::size_t>(c)]
                                       .values[static_cast<std::size_t>(x * n_pts + x)];
            for (int xp = 0; xp < n_pts; ++xp) {
                const cdouble diag_xp = slot[static_cast<std::size_t>(c)]
                                            .values[static_cast<std::size_t>(xp * n_pts + xp)];
                merged.values[static_cast<std::size_t>(x * n_pts + xp)] =
                    slot[static_cast<std::size_t>(j)].values[static_cast<std::size_t>(x * n_pts + xp)] *
                    (diag_x - diag_xp);
            }
        }
        slot[static_cast<std::size_t>(j)] = std::move(merged);
        alive[static_cast<std::size_t>(c)] = false;

        const double tau = times[static_cast<std::size_t>(i) - 1] - times[static_cast<std::size_t>(i)];
        for (int s = 1; s <= m.k + m.n; ++s) {
            if (alive[static_cast<std::size_t>(s)]) {
                slot[static_cast<std::size_t>(s)] =
                    propagate_tensor(slot[static_cast<std::size_t>(s)], tau);
            }
        }
    }
    std::vector<DensityTensor> out;
    for (int j = 1; j <= m.k; ++j) out.push_back(std::move(slot[static_cast<std::size_t>(j)]));
    return out;
}

}  // namespace gpbg::oracle
