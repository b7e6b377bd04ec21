#pragma once

#include <array>

#include "gpbg/board.hpp"
#include "gpbg/evaluate.hpp"
#include "gpbg/quadrature.hpp"

namespace gpbg {

// Machine-readable outcome of one verification run.
struct Report {
    std::string check;
    ojson params;
    std::string value_key = "ratio";  // "ratio", "residual", or "relative_difference"
    double value = 0.0;
    bool pass = false;
    ojson details;

    ojson to_json() const;
};

// The simplex integral of the expansion term selected by `mu` over the
// time domain {t >= t_sigma(1) >= ... >= t_sigma(n) >= 0}, reduced to two
// scalar linear functionals of the kernel: a probe-point value and the
// trace. Both are computed through the factorized route.
std::array<cdouble, 2> ordered_time_integral(const CollisionMap& mu, const Permutation& sigma,
                                             const GridFunction& phi, double t, int quad_order);

// Checks that an adjacent exchange leaves the simplex integral unchanged:
// the two boards' integrals agree to a relative difference <= 1e-6 at
// quadrature order >= 6.
Report verify_move_invariance(const BoardState& before, const BoardState& after,
                              const GridFunction& phi, int quad_order, double t);

// Checks the class's time-domain identity: the sum of the members' standard
// simplex integrals equals the representative integrated over the union of
// the class's ordered simplices. Tolerance 1e-5 at order >= 6.
Report verify_domain_union(const EchelonClass& cls, const GridFunction& phi, int quad_order,
                           double t);

// Strang split-step integrator for i d/dt phi = -Lap phi + lambda |phi|^2 phi.
// Returns the trajectory including the initial state; round(t_end/dt) steps.
std::vector<GridFunction> solve_nls(const GridFunction& phi0, int lambda, double t_end, double dt);

// Relative defect of the factorized k-particle kernel built from the
// trajectory in the integral form of the hierarchy, max over the half-time
// and final-time checkpoints. `lambda` is the coupling used in the residual
// formula (pass the solver's value; a mismatch is the sign sentinel).
double hierarchy_residual(const std::vector<GridFunction>& traj, int k, double dt, int lambda);

// Runs the dt-halving convergence study plus the coupling-sign sentinel.
Report verify_hierarchy_solution(const Grid& g, int k, int lambda, double t_end, double dt,
                                 std::uint64_t seed);

// Throws WraparoundRisk if the dispersed support of f could reach the box
// boundary within |t| <= max_time (estimated from the spectral radius).
void ensure_no_wraparound(const GridFunction& f, double max_time);

// ||exp(it Lap) f||_{L^r} |t|^(1/2 - 1/r) / ||f||_{L^r'}, the d=1 decay
// ratio. r = infinity is allowed; r = 2 is exact unitarity.
double dispersive_ratio(const GridFunction& f, double t, double r);

// Sweeps the ratio over a log-spaced time range; for r = infinity on decaying
// data the ratio must be flat within `flatness` across the sweep. For r = 2
// it checks unitarity to 1e-12 instead.
Report check_dispersive(const GridFunction& f, double t_min, double t_max, int samples, double r,
                        double flatness);

// The trilinear form (U_{t-t1} f)(U_{t-t2} g)(U_{t-t3} h) integrated over
// t in [0, T): ratios of ||.||_{L1_t L1_x} and ||.||_{L1_t L2_x} to
// T^(1/2) ||f||_{L1 or L2} ||g||_{L2} ||h||_{L2}.
struct TrilinearResult {
    double ratio_l1 = 0.0;
    double ratio_l2 = 0.0;
};

TrilinearResult trilinear_ratios(const GridFunction& f, const GridFunction& g,
                                 const GridFunction& h, double t1, double t2, double t3,
                                 double t_window, int quad_order);

// A grid-independent localized test function: Gaussian envelope times a
// trigonometric polynomial, synthesizable on any grid over the same box.
struct LocalizedSpec {
    double length = 0.0;
    double center = 0.0;
    double envelope_s = 1.0;
    std::vector<cdouble> coef;  // modes -M..M

    GridFunction synthesize(const Grid& g) const;
};

LocalizedSpec random_localized(double length, double envelope_s, int max_mode,
                               std::mt19937_64& rng);

struct TrilinearCorpusResult {
    std::vector<TrilinearResult> items;
    double max_l1 = 0.0;
    double max_l2 = 0.0;
};

// Seed-fixed corpus of random triples; items are deterministic functions of
// (seed, count, max_mode) and independent of N, so reruns at doubled N see
// the same continuum functions.
TrilinearCorpusResult trilinear_corpus(int n_points, double length, int count, double t_window,
                                       int quad_order, std::uint64_t seed, int jobs);

// CSV helpers for sweep outputs.
std::string sweep_csv(const std::vector<double>& xs, const std::vector<double>& ys,
                      const std::string& x_name, const std::string& y_name);

}  // namespace gpbg
