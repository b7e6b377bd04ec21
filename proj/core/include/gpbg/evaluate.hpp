#pragma once

#include "gpbg/kernel.hpp"
#include "gpbg/tensor.hpp"

namespace gpbg {

// Numeric value of a symbolic function expression at the given global
// times; `times` is (t_0, ..., t_n).
GridFunction evaluate_expr(const Expr* e, std::span<const double> times, const GridFunction& phi);

// One factor's kernel tower together with its relabeled map. The tower is
// empty for a bare factor (m_j = 0).
struct FactorKernel {
    FactorMap fm;
    KernelTower tower;
};

std::vector<FactorKernel> factorize(const TreeForest& f, ExprPool& pool);

// The one-particle kernel of a factor, with the leading propagator from
// t_0 to the factor's first time slot applied. N x N matrix, x slowest.
DensityTensor evaluate_factor(const FactorKernel& fk, std::span<const double> times,
                              const GridFunction& phi);

// All k one-particle kernels of the expansion term; their tensor product
// equals the full-tensor evaluation. Guarded at 2^12 expanded terms.
std::vector<DensityTensor> evaluate_J_factorized(const TreeForest& f,
                                                 const std::vector<FactorKernel>& kernels,
                                                 std::span<const double> times,
                                                 const GridFunction& phi);

// Linear functionals of a product kernel, computed factor-wise: the kernel
// value at probe indices (xi, xpi) and the dx^k-weighted trace.
struct KernelFunctionals {
    cdouble probe;
    cdouble trace;
};

KernelFunctionals kernel_functionals(const std::vector<DensityTensor>& factors, int xi, int xpi);

}  // namespace gpbg
