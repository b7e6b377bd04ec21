#pragma once

#include "gpbg/collision.hpp"
#include "gpbg/grid.hpp"

namespace gpbg {

// A k-particle density kernel gamma(x_1..x_k; x'_1..x'_k) sampled on the
// grid: a rank-2k tensor of N^(2k) complex entries, x_1 slowest. Guarded
// at 2^24 entries.
struct DensityTensor {
    Grid grid;
    int particles = 0;
    std::vector<cdouble> values;

    std::size_t axis_count() const { return static_cast<std::size_t>(2 * particles); }
};

DensityTensor make_density_tensor(const Grid& g, int particles);

// (|phi><phi|)^(tensor k): prod_j phi(x_j) conj(phi)(x'_j).
DensityTensor factorized_density(const GridFunction& phi, int k);

// U^(k)(dt) = exp(i dt (Laplacian_x - Laplacian_x')): the free flow forward
// on unprimed axes and backward on primed axes.
DensityTensor propagate_tensor(const DensityTensor& t, double dt);

// B^+_{j;k+1} (sign +1) evaluates the k+1 particle kernel at
// x_{k+1} = x'_{k+1} = x_j; B^- (sign -1) uses x'_j. Pointwise diagonal
// restriction, no dx weights.
DensityTensor contract_B(const DensityTensor& t, int j, int sign);

// B_{j;k+1} = B^+ - B^-.
DensityTensor contract_B_pm(const DensityTensor& t, int j);

// Full-tensor evaluation of the depth-n expansion term selected by the
// collision map: alternate multi-particle propagation and contraction from
// the factorized state at time t_n. `times` is (t_0, ..., t_n); no ordering
// is required. n = 0 degenerates to the factorized state itself.
DensityTensor evaluate_J_full(const CollisionMap& m, std::span<const double> times,
                              const GridFunction& phi);

cdouble tensor_trace(const DensityTensor& t);          // dx^k-weighted diagonal sum
cdouble tensor_entry(const DensityTensor& t, std::span<const int> xs, std::span<const int> xps);

// Outer product of one-particle kernels into a k-particle tensor.
DensityTensor tensor_product(const std::vector<DensityTensor>& factors);

double max_abs(const DensityTensor& t);
double max_abs_diff(const DensityTensor& a, const DensityTensor& b);

}  // namespace gpbg
