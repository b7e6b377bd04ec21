#include "gpbg/suite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "gpbg/parallel.hpp"

namespace gpbg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Report symbolic_report(const std::string& name, const ojson& params, int failures,
                       ojson details = {}) {
    Report r;
    r.check = name;
    r.params = params;
    r.value_key = "failures";
    r.value = failures;
    r.pass = failures == 0;
    r.details = std::move(details);
    return r;
}

std::uint64_t recursive_count(int k, int n) {
    return n == 0 ? 1 : recursive_count(k, n - 1) * static_cast<std::uint64_t>(k + n - 1);
}

}  // namespace

Report criterion_enumeration_counts() {
    int failures = 0;
    ojson counts = ojson::array();
    for (int k = 1; k <= 3; ++k) {
        for (int n = 1; n <= 6; ++n) {
            const auto maps = enumerate_maps(k, n);
            const std::uint64_t closed = count_maps(k, n);
            const std::uint64_t recursive = recursive_count(k, n);
            if (maps.size() != closed || closed != recursive) ++failures;
            for (const auto& m : maps) {
                if (!m.valid()) ++failures;
            }
            counts.push_back(ojson{{"k", k}, {"n", n}, {"count", maps.size()}});
        }
    }
    return symbolic_report("enumeration-counts", ojson{{"k_max", 3}, {"n_max", 6}}, failures,
                           ojson{{"counts", counts}});
}

Report criterion_echelon_class_bound() {
    int failures = 0;
    ojson counts = ojson::array();
    for (int k = 1; k <= 3; ++k) {
        for (int n = 1; n <= 5; ++n) {
            const auto classes = partition_classes(k, n);
            const std::uint64_t bound = std::uint64_t{1} << (k + 2 * n - 2);
            if (classes.size() > bound) ++failures;
            counts.push_back(
                ojson{{"k", k}, {"n", n}, {"classes", classes.size()}, {"bound", bound}});
        }
    }
    return symbolic_report("echelon-class-bound", ojson{{"k_max", 3}, {"n_max", 5}}, failures,
                           ojson{{"counts", counts}});
}

Report criterion_partition_exactness() {
    int failures = 0;
    for (int k = 1; k <= 2; ++k) {
        for (int n = 1; n <= 5; ++n) {
            const auto classes = partition_classes(k, n);
            std::set<std::vector<int>> seen;
            std::size_t members = 0;
            for (const auto& cls : classes) {
                if (!is_upper_echelon(cls.representative)) ++failures;
                std::set<std::vector<int>> sigmas;
                for (const auto& mem : cls.members) {
                    ++members;
                    if (!seen.insert(mem.map.mu).second) ++failures;  // map in two classes
                    if (!sigmas.insert(mem.sigma.sigma).second) ++failures;  // duplicate sigma
                }
                if (sigmas.size() != cls.domain.size()) ++failures;
            }
            if (members != enumerate_maps(k, n).size()) ++failures;
        }
    }
    return symbolic_report("partition-exactness", ojson{{"k_max", 2}, {"n_max", 5}}, failures);
}

Report criterion_worked_example() {
    int failures = 0;
    const CollisionMap m{2, 4, {1, 2, 3, 3}};
    const TreeForest f = build_forest(m);
    const auto expect = [&](bool ok) {
        if (!ok) ++failures;
    };
    expect(f.distinguished_index == 1);
    expect(f.m == std::vector<int>({3, 1}));
    expect(f.tree(1).internals == std::vector<int>({1, 3, 4}));
    expect(f.tree(1).leaves == std::vector<int>({1, 3, 5, 6}));
    expect(f.tree(2).internals == std::vector<int>({2}));
    expect(f.tree(2).leaves == std::vector<int>({2, 4}));

    ExprPool pool;
    const MapAnalysis analysis = analyze_map(m, DimMode::D3Plus, pool);
    const auto& dist = analysis.factors[0];
    const auto& reg = analysis.factors[1];
    expect(dist.tower.theta.size() == 3);
    expect(dist.tower.theta[0].terms.size() == 8);
    expect(dist.tower.theta[1].terms.size() == 4);
    expect(dist.tower.theta[2].terms.size() == 2);
    expect(reg.tower.theta.size() == 1);
    expect(reg.tower.theta[0].terms.size() == 2);

    expect(dist.bound.time_power == 2 && dist.bound.phi_power == 8 &&
           dist.bound.prefactor_log2 == 3 && dist.bound.distinguished);
    expect(reg.bound.time_power == 1 && reg.bound.phi_power == 4 &&
           reg.bound.prefactor_log2 == 1 && !reg.bound.distinguished);
    expect(analysis.combined.time_power == 3 && analysis.combined.phi_power == 12 &&
           analysis.combined.prefactor_log2 == 4);

    return symbolic_report("worked-example", ojson{{"k", 2}, {"n", 4}, {"mu", m.mu}}, failures,
                           ojson{{"combined", to_json(analysis.combined)}});
}

Report criterion_power_counting() {
    int failures = 0;
    int checked = 0;
    for (int k = 1; k <= 3; ++k) {
        for (int n = 1; n <= 5; ++n) {
            for (const auto& cls : partition_classes(k, n)) {
                const CollisionMap rep = matrix_to_map(cls.representative);
                for (DimMode mode : {DimMode::D1, DimMode::D2, DimMode::D3Plus}) {
                    ExprPool pool;
                    try {
                        const MapAnalysis a = analyze_map(rep, mode, pool);
                        if (a.combined.time_power != n - 1 ||
                            a.combined.phi_power != 2 * (k + n)) {
                            ++failures;
                        }
                    } catch (const Error&) {
                        ++failures;
                    }
                    ++checked;
                }
            }
        }
    }
    return symbolic_report("power-counting", ojson{{"k_max", 3}, {"n_max", 5}}, failures,
                           ojson{{"cases", checked}});
}

Report factorization_sweep(int n_max, int n_points, int phis, int tuples,
                           const SuiteConfig& cfg) {
    const Grid g(n_points, kTwoPi);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uniform(0.0, 0.3);

    double worst = 0.0;
    int cases = 0;
    for (int trial = 0; trial < phis; ++trial) {
        const GridFunction phi = random_band_limited(g, 2, rng);
        for (int tuple = 0; tuple < tuples; ++tuple) {
            for (int n = 1; n <= n_max; ++n) {
                std::vector<double> times(static_cast<std::size_t>(n) + 1);
                for (auto& t : times) t = uniform(rng);
                for (const auto& m : enumerate_maps(1, n)) {
                    const DensityTensor full = evaluate_J_full(m, times, phi);
                    ExprPool pool;
                    const TreeForest forest = build_forest(m);
                    const auto kernels = factorize(forest, pool);
                    const auto factors = evaluate_J_factorized(forest, kernels, times, phi);
                    const DensityTensor prod = tensor_product(factors);
                    const double err =
                        max_abs_diff(full, prod) / std::max(max_abs(full), 1e-300);
                    worst = std::max(worst, err);
                    ++cases;
                }
            }
        }
    }

    Report r;
    r.check = "oracle-equivalence";
    r.params = ojson{{"k", 1},        {"n_max", n_max}, {"N", n_points},
                     {"phis", phis},  {"tuples", tuples}, {"seed", cfg.seed}};
    r.value_key = "relative_difference";
    r.value = worst;
    r.pass = worst <= 1e-10;
    r.details = ojson{{"cases", cases}};
    return r;
}

Report criterion_oracle_equivalence(const SuiteConfig& cfg) {
    return factorization_sweep(2, 8, 5, 10, cfg);
}

Report move_invariance_sweep(int k_max, int n_max, int n_points, double t, int order,
                             int confirm_order, const SuiteConfig& cfg) {
    const Grid g(n_points, kTwoPi);
    std::mt19937_64 rng(cfg.seed);
    const GridFunction phi = random_band_limited(g, 3, rng);

    struct Case {
        BoardState before, after;
    };
    std::vector<Case> cases;
    for (int k = 1; k <= k_max; ++k) {
        for (int n = 2; n <= n_max; ++n) {
            for (const auto& m : enumerate_maps(k, n)) {
                const BoardState b = BoardState::initial(m);
                for (int j = 1; j < n; ++j) {
                    if (move_applicable(b, j)) cases.push_back(Case{b, acceptable_move(b, j)});
                }
            }
        }
    }

    double worst = 0.0, worst_confirm = 0.0;
    std::vector<std::array<double, 2>> results(cases.size());
    parallel_for(cases.size(), cfg.jobs, [&](std::size_t i) {
        results[i][0] =
            verify_move_invariance(cases[i].before, cases[i].after, phi, order, t).value;
        results[i][1] =
            verify_move_invariance(cases[i].before, cases[i].after, phi, confirm_order, t).value;
    });
    for (const auto& v : results) {
        worst = std::max(worst, v[0]);
        worst_confirm = std::max(worst_confirm, v[1]);
    }

    Report r;
    r.check = "move-invariance";
    r.params = ojson{{"k_max", k_max}, {"n_max", n_max}, {"N", n_points}, {"t", t},
                     {"orders", {order, confirm_order}}, {"seed", cfg.seed}};
    r.value_key = "relative_difference";
    r.value = std::max(worst, worst_confirm);
    r.pass = worst <= 1e-6 && worst_confirm <= 1e-6;
    r.details = ojson{{"moves", cases.size()},
                      {"worst", worst},
                      {"worst_confirm", worst_confirm}};
    return r;
}

Report criterion_move_invariance(const SuiteConfig& cfg) {
    return move_invariance_sweep(2, 3, 16, 0.1, 6, 8, cfg);
}

Report domain_union_sweep(int k, int n, int n_points, double t, int order,
                          const SuiteConfig& cfg) {
    const Grid g(n_points, kTwoPi);
    std::mt19937_64 rng(cfg.seed);
    const GridFunction phi = random_band_limited(g, 3, rng);

    const auto classes = partition_classes(k, n);
    double worst = 0.0;
    std::vector<double> results(classes.size());
    parallel_for(classes.size(), cfg.jobs, [&](std::size_t i) {
        results[i] = verify_domain_union(classes[i], phi, order, t).value;
    });
    for (double v : results) worst = std::max(worst, v);

    Report r;
    r.check = "domain-union";
    r.params = ojson{{"k", k},     {"n", n},         {"N", n_points},
                     {"t", t},     {"order", order}, {"seed", cfg.seed}};
    r.value_key = "relative_difference";
    r.value = worst;
    r.pass = worst <= 1e-5;
    r.details = ojson{{"classes", classes.size()}};
    return r;
}

Report criterion_domain_union(const SuiteConfig& cfg) {
    return domain_union_sweep(1, 3, 16, 0.1, 6, cfg);
}

Report criterion_hierarchy_solution(const SuiteConfig& cfg) {
    return verify_hierarchy_solution(Grid(32, kTwoPi), 1, -1, 0.1, 1e-3, cfg.seed);
}

Report dispersive_check(int n_points, double length, double envelope_s, double t_min,
                        double t_max, int samples) {
    const Grid g(n_points, length);
    const GridFunction f = gaussian(g, g.length / 2.0, envelope_s);
    Report flat =
        check_dispersive(f, t_min, t_max, samples, std::numeric_limits<double>::infinity(), 0.05);
    const Report unit = check_dispersive(f, t_min, t_max, 3, 2.0, 0.0);

    Report r = flat;
    r.check = "dispersive";
    r.pass = flat.pass && unit.pass;
    r.details["unitarity_deviation"] = unit.value;
    return r;
}

Report criterion_dispersive(const SuiteConfig&) {
    return dispersive_check(16384, 2048.0, 1.0, 13.0, 130.0, 9);
}

Report trilinear_check(int n_points, double length, int count, double t_window, int order,
                       const SuiteConfig& cfg) {
    const TrilinearCorpusResult base =
        trilinear_corpus(n_points, length, count, t_window, order, cfg.seed, cfg.jobs);
    const TrilinearCorpusResult fine =
        trilinear_corpus(2 * n_points, length, count, t_window, order, cfg.seed, cfg.jobs);

    const double drift_l1 = std::abs(fine.max_l1 / base.max_l1 - 1.0);
    const double drift_l2 = std::abs(fine.max_l2 / base.max_l2 - 1.0);
    const bool bounded = base.max_l1 <= kTrilinearBaselineL1 &&
                         base.max_l2 <= kTrilinearBaselineL2 &&
                         fine.max_l1 <= kTrilinearBaselineL1 &&
                         fine.max_l2 <= kTrilinearBaselineL2;
    const bool stable = drift_l1 <= 0.3 && drift_l2 <= 0.3;

    Report r;
    r.check = "trilinear";
    r.params = ojson{{"corpus", count}, {"L", length},
                     {"T", t_window},   {"order", order},
                     {"N", {n_points, 2 * n_points}}, {"seed", cfg.seed}};
    r.value_key = "ratio";
    r.value = std::max(base.max_l1, base.max_l2);
    r.pass = bounded && stable;
    r.details = ojson{{"max_l1", base.max_l1},
                      {"max_l2", base.max_l2},
                      {"max_l1_fine", fine.max_l1},
                      {"max_l2_fine", fine.max_l2},
                      {"baseline_l1", kTrilinearBaselineL1},
                      {"baseline_l2", kTrilinearBaselineL2},
                      {"drift_l1", drift_l1},
                      {"drift_l2", drift_l2}};
    return r;
}

Report criterion_trilinear(const SuiteConfig& cfg) {
    return trilinear_check(1024, 64.0, 100, 0.5, 8, cfg);
}

std::vector<Report> run_verification_suite(const SuiteConfig& cfg) {
    std::vector<Report> out;
    out.push_back(criterion_enumeration_counts());
    out.push_back(criterion_echelon_class_bound());
    out.push_back(criterion_partition_exactness());
    out.push_back(criterion_worked_example());
    out.push_back(criterion_power_counting());
    out.push_back(criterion_oracle_equivalence(cfg));
    out.push_back(criterion_move_invariance(cfg));
    out.push_back(criterion_domain_union(cfg));
    out.push_back(criterion_hierarchy_solution(cfg));
    out.push_back(criterion_dispersive(cfg));
    out.push_back(criterion_trilinear(cfg));
    return out;
}

ojson suite_report_json(const std::vector<Report>& reports) {
    ojson arr = ojson::array();
    bool all = true;
    for (const auto& r : reports) {
        arr.push_back(r.to_json());
        all = all && r.pass;
    }
    return ojson{{"suite", "verify-all"}, {"criteria", arr}, {"pass", all}};
}

}  // namespace gpbg
