#pragma once

#include "deltashell/coupling.hpp"
#include "deltashell/geometry/curve.hpp"
#include "deltashell/numerics/fit.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace deltashell::harness {

using Complex = std::complex<double>;

/// Parsed problem description (the JSON schema of the CLI).
struct ProblemSpec {
    enum class Kind { OneDim, Radial, Curve };
    Kind kind = Kind::OneDim;
    Coupling coupling;

    // radial
    int dimension = 2;
    double R = 1.0;
    int angular_index = 0;

    // boundary-integral geometry
    std::optional<geometry::ClosedCurve> curve;
    int nodes = 256;

    std::optional<Complex> seed;
    double epsilon = 0.0; // single-solve separation

    std::string solver_name() const;
};

ProblemSpec parse_problem(const std::string& json_text);
ProblemSpec load_problem(const std::string& path);

struct SweepRow {
    double epsilon = 0.0;
    Complex lambda;
    Complex kappa;
    double residual = 0.0;
    std::string solver;
    bool ok = false;
    std::string error;
};

struct SweepReport {
    std::string problem; // one-line echo of the swept problem
    std::vector<SweepRow> rows; // sorted by decreasing eps
    Complex lambda0;
    Complex predicted_slope;
    numerics::FitResult fitted; // degree-2 fit of (eps, lambda)
    /// slope extracted from the degree-2 fit of (lambda - lambda0)/eps, which
    /// uses the exactly known limit eigenvalue and absorbs the quadratic and
    /// cubic terms of the expansion
    Complex fitted_slope;
    double slope_rel_error = 0.0;
    double remainder_order = 0.0;  // log-log order of |lambda - lambda0 - slope*eps|
    double lambda_gap_order = 0.0; // log-log order of |lambda_eps - lambda_0|
    double tol_slope = 0.01;
    double order_lo = 1.9;
    double order_hi = 2.1;
    bool pass_slope = false;
    bool pass_order = false;
    bool pass = false;
};

SweepReport run_sweep(const ProblemSpec& spec, const std::vector<double>& epsilons,
                      double tol_slope = 0.01);

struct SingleSolve {
    Complex lambda;
    Complex kappa;
    double residual = 0.0;
    std::string solver;
};

SingleSolve run_single(const ProblemSpec& spec);

struct CrosscheckReport {
    Complex lambda_radial;
    Complex lambda_bs;
    double lambda_discrepancy = 0.0; // relative
    double trace_discrepancy = 0.0;  // relative, max over nodes
    double tol = 1e-6;
    bool pass = false;
};

/// Radial vs boundary-integral equivalence on a circle problem.
CrosscheckReport run_crosscheck(const ProblemSpec& spec, int N, double eps, double tol = 1e-6);

struct UniformRow {
    double epsilon = 0.0;
    double sup_difference = 0.0;
};

struct UniformReport {
    std::vector<UniformRow> rows;
    double order = 0.0;
    double order_lo = 0.9;
    double order_hi = 1.1;
    bool pass = false;
};

/// sup |psi_eps - psi_0| on the shells, fitted convergence order.
UniformReport run_uniform_check(const ProblemSpec& spec, const std::vector<double>& epsilons);

/// Geometric ladder (ratio 1/2) inside the solver's admissible range.
std::vector<double> default_epsilons(const ProblemSpec& spec, int count = 4);

std::string to_csv(const SweepReport& report);
std::string to_json(const SweepReport& report);
std::string to_csv(const UniformReport& report);
std::string to_json(const CrosscheckReport& report);

/// TraceBundle JSON entry point of the `asymptotics` subcommand: bundle
/// arrays plus couplings in one document; returns the evaluated slope.
Complex slope_from_bundle_json(const std::string& json_text);

} // namespace deltashell::harness
