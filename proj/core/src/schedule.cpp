#include "gpbg/schedule.hpp"

#include <sstream>

namespace gpbg {

ModeNorms mode_norms(DimMode mode) {
    switch (mode) {
        case DimMode::D1:
            return ModeNorms{"T^{1/2}", "L^2", "L^1"};
        case DimMode::D2:
            return ModeNorms{"T^{1/3}", "H^{1/3}", "W^{-(1/3-eps/2),2/(2-eps)}"};
        case DimMode::D3Plus:
            return ModeNorms{"T^eps", "H^{s_eps}", "W^{-(s_c+eps/2),r_eps}"};
    }
    return {};
}

std::string mode_name(DimMode mode) {
    switch (mode) {
        case DimMode::D1:
            return "d=1";
        case DimMode::D2:
            return "d=2";
        case DimMode::D3Plus:
            return "d>=3";
    }
    return {};
}

namespace {

struct TermTally {
    int applications = 0;
    int phis = 0;
    bool terminal_fired = false;
};

// The from-time shared by a product's factors; every factor must be a
// propagated function off the same time, or the product has no trilinear
// rule to consume it.
int shared_from_time(const Expr* factor) {
    const Expr* e = factor;
    if (e->op == Op::Conj) e = e->a;
    if (e->op != Op::Prop) {
        throw SchedulerStuck("product factor is not a propagated function: " + pretty(factor));
    }
    return e->from;
}

void schedule_function(const Expr* f, bool allow_cubic, TermTally& tally) {
    const Expr* e = f;
    // Outer propagators are free: the bookkeeping norms are invariant under
    // the free evolution, and merged chains were already collapsed by the
    // group-property normalization.
    while (e->op == Op::Prop || e->op == Op::Conj) e = e->a;
    switch (e->op) {
        case Op::Phi:
            ++tally.phis;
            return;
        case Op::Cubic:
            if (!allow_cubic || tally.terminal_fired) {
                throw SchedulerStuck("unexpected distinguished cubic in " + pretty(f));
            }
            tally.terminal_fired = true;
            return;
        case Op::Prod: {
            const int t = shared_from_time(e->a);
            if (shared_from_time(e->b) != t || shared_from_time(e->c) != t) {
                throw SchedulerStuck("product factors do not share a time: " + pretty(e));
            }
            // One trilinear application: integrates the shared time and
            // hands the three factors on.
            ++tally.applications;
            schedule_function(e->a, allow_cubic, tally);
            schedule_function(e->b, allow_cubic, tally);
            schedule_function(e->c, allow_cubic, tally);
            return;
        }
        default:
            throw SchedulerStuck("no rule for " + pretty(f));
    }
}

}  // namespace

NormBound schedule_bounds(const KernelExpr& k, DimMode mode, bool is_distinguished) {
    if (k.distinguished != is_distinguished) {
        throw SchedulerStuck("kernel distinguished flag does not match the request");
    }
    if (k.terms.empty()) throw SchedulerStuck("empty kernel");

    TermTally expected{};
    bool first = true;
    for (const auto& term : k.terms) {
        TermTally tally{};
        schedule_function(term.psi, is_distinguished, tally);
        schedule_function(term.chi, is_distinguished, tally);
        if (tally.terminal_fired != is_distinguished) {
            throw SchedulerStuck("distinguished chain did not terminate at |phi|^2 phi");
        }
        if (first) {
            expected = tally;
            first = false;
        } else if (tally.applications != expected.applications || tally.phis != expected.phis) {
            throw SchedulerStuck("terms of one kernel scheduled to different exponents");
        }
    }

    const int expected_apps = is_distinguished ? k.m_j - 1 : k.m_j;
    if (expected.applications != expected_apps) {
        throw SchedulerStuck("application count " + std::to_string(expected.applications) +
                             " does not match the tree size");
    }

    // Power-of-two term count by construction; log2 is exact.
    int log2_terms = 0;
    while ((std::size_t{1} << log2_terms) < k.terms.size()) ++log2_terms;
    if ((std::size_t{1} << log2_terms) != k.terms.size()) {
        throw SchedulerStuck("term count is not a power of two");
    }

    NormBound b;
    b.distinguished = is_distinguished;
    b.time_power = expected.applications;
    b.phi_power = expected.phis + (is_distinguished ? 3 : 0);
    b.terminal_norm = is_distinguished ? mode_norms(mode).weak_norm : std::string{};
    b.prefactor_log2 = log2_terms;
    return b;
}

NormBound combine_factors(const std::vector<NormBound>& bounds, int k, int n) {
    if (static_cast<int>(bounds.size()) != k) {
        throw InconsistentForest("combine_factors: expected one bound per particle");
    }
    NormBound out;
    int distinguished_count = 0;
    for (const auto& b : bounds) {
        out.time_power += b.time_power;
        out.phi_power += b.phi_power;
        out.prefactor_log2 += b.prefactor_log2;
        if (b.distinguished) {
            ++distinguished_count;
            out.terminal_norm = b.terminal_norm;
        }
    }
    if (distinguished_count != 1) {
        throw InconsistentForest("combine_factors: exactly one factor must be distinguished");
    }
    if (out.time_power != n - 1 || out.phi_power != 2 * (k + n)) {
        throw InconsistentForest("combine_factors: exponents do not match the expansion size");
    }
    if (out.prefactor_log2 > k + 2 * n) {
        throw InconsistentForest("combine_factors: prefactor exceeds 2^(k+2n)");
    }
    out.distinguished = true;
    return out;
}

std::string pretty(const NormBound& b, DimMode mode) {
    const ModeNorms norms = mode_norms(mode);
    std::ostringstream os;
    os << "2^" << b.prefactor_log2 << " (C " << norms.time_unit << ")^" << b.time_power
       << " ||phi||_{" << norms.base_norm << "}^" << b.phi_power;
    return os.str();
}

ojson to_json(const NormBound& b) {
    return ojson{{"time_power", b.time_power},
                 {"phi_power", b.phi_power},
                 {"terminal_norm", b.terminal_norm},
                 {"prefactor_log2", b.prefactor_log2},
                 {"distinguished", b.distinguished}};
}

MapAnalysis analyze_map(const CollisionMap& m, DimMode mode, ExprPool& pool) {
    MapAnalysis out;
    out.forest = build_forest(m);
    std::vector<NormBound> bounds;
    for (FactorMap& fm : extract_factor_maps(out.forest)) {
        FactorAnalysis fa;
        fa.fm = std::move(fm);
        if (fa.fm.sigma_j.n >= 1) {
            fa.tower = build_kernel_tower(fa.fm, pool);
            fa.bound = schedule_bounds(fa.tower.top(), mode, fa.fm.distinguished);
        } else {
            fa.bound = schedule_bounds(leaf_kernel(pool), mode, false);
        }
        bounds.push_back(fa.bound);
        out.factors.push_back(std::move(fa));
    }
    out.combined = combine_factors(bounds, m.k, m.n);
    return out;
}

}  // namespace gpbg
