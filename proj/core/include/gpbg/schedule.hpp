#pragma once

#include <string>
#include <vector>

#include "gpbg/kernel.hpp"

namespace gpbg {

// Which dimension's norms label the bound. The exponent arithmetic is the
// same in all three modes; only the norm names and the time unit change.
enum class DimMode { D1, D2, D3Plus };

struct ModeNorms {
    std::string time_unit;  // "T^eps", "T^{1/3}", "T^{1/2}"
    std::string base_norm;  // the norm carried by regular functions
    std::string weak_norm;  // the norm carried by the distinguished chain
};

ModeNorms mode_norms(DimMode mode);
std::string mode_name(DimMode mode);

// Exponent bookkeeping for one factor (or a product of factors):
//   prefactor 2^prefactor_log2, time factor (C * time_unit)^time_power,
//   state factor ||phi||^phi_power in the mode's base norm.
// For distinguished factors, terminal_norm records which norm held the
// final cubic term before it was converted to ||phi||^3.
struct NormBound {
    int time_power = 0;
    int phi_power = 0;
    std::string terminal_norm;
    int prefactor_log2 = 0;
    bool distinguished = false;
};

// Replays the inductive estimate on every term of Theta_1: each cubic
// product consumes one trilinear application (one time integral), linear
// propagator chains are merged and cost nothing, and the terminal rule
// fires when the distinguished chain bottoms out at |phi|^2 phi.
// Throws SchedulerStuck if any term has no applicable rule.
NormBound schedule_bounds(const KernelExpr& k, DimMode mode, bool is_distinguished);

// Product of per-factor bounds for a depth-n expansion over k particles.
// Exactly one bound must be distinguished; the sums must come out at
// time_power n-1 and phi_power 2(k+n). Throws InconsistentForest.
NormBound combine_factors(const std::vector<NormBound>& bounds, int k, int n);

std::string pretty(const NormBound& b, DimMode mode);
ojson to_json(const NormBound& b);

// Whole pipeline for one map: forest, per-factor kernel towers, per-factor
// bounds, and the combined bound.
struct FactorAnalysis {
    FactorMap fm;
    KernelTower tower;  // empty for a bare factor
    NormBound bound;
};

struct MapAnalysis {
    TreeForest forest;
    std::vector<FactorAnalysis> factors;
    NormBound combined;
};

MapAnalysis analyze_map(const CollisionMap& m, DimMode mode, ExprPool& pool);

}  // namespace gpbg
