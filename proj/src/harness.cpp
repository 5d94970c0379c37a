#include "deltashell/harness/harness.hpp"

#include "deltashell/asymptotics/asymptotics.hpp"
#include "deltashell/bsintegral/bsintegral.hpp"
#include "deltashell/errors.hpp"
#include "deltashell/onedim/onedim.hpp"
#include "deltashell/radial/radial.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace deltashell::harness {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

Complex parse_complex(const json& j, const char* field) {
    const auto& v = j.at(field);
    if (v.is_number()) return Complex(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2)
        return Complex(v[0].get<double>(), v[1].get<double>());
    throw DomainError(std::string("problem JSON: field '") + field + "' must be [re, im]");
}

geometry::ClosedCurve parse_geometry(const json& g, int default_samples) {
    const std::string kind = g.at("kind").get<std::string>();
    const int samples = g.value("samples", default_samples);
    if (kind == "circle") return geometry::ClosedCurve::circle(g.at("R").get<double>(), samples);
    if (kind == "ellipse")
        return geometry::ClosedCurve::ellipse(g.at("a").get<double>(), g.at("b").get<double>(),
                                              samples);
    if (kind == "fourier") {
        std::vector<double> fc = g.value("cos", std::vector<double>{});
        std::vector<double> fs = g.value("sin", std::vector<double>{});
        return geometry::ClosedCurve::fourier(std::move(fc), std::move(fs), samples);
    }
    throw DomainError("problem JSON: unknown geometry kind '" + kind + "'");
}

double log_slope(const std::vector<std::pair<double, double>>& pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& [e, v] : pts) {
        if (!(v > 0.0)) continue;
        const double x = std::log(e), y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return std::numeric_limits<double>::infinity();
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

radial::RadialProblem make_radial(const ProblemSpec& s, double eps) {
    radial::RadialProblem p;
    p.dimension = s.dimension;
    p.R = s.R;
    p.epsilon = eps;
    p.coupling = s.coupling;
    p.angular_index = s.angular_index;
    return p;
}

} // namespace

std::string ProblemSpec::solver_name() const {
    switch (kind) {
    case Kind::OneDim: return "onedim";
    case Kind::Radial: return "radial";
    default: return "curve";
    }
}

namespace {

std::string describe(const ProblemSpec& s) {
    std::ostringstream os;
    os << s.solver_name() << " alpha_plus=(" << fmt(s.coupling.alpha_plus.real()) << ","
       << fmt(s.coupling.alpha_plus.imag()) << ") alpha_minus=("
       << fmt(s.coupling.alpha_minus.real()) << "," << fmt(s.coupling.alpha_minus.imag()) << ")";
    if (s.kind == ProblemSpec::Kind::Radial)
        os << " d=" << s.dimension << " R=" << fmt(s.R) << " m=" << s.angular_index;
    if (s.kind == ProblemSpec::Kind::Curve && s.curve) {
        switch (s.curve->kind()) {
        case geometry::ClosedCurve::Kind::Circle:
            os << " circle R=" << fmt(s.curve->circle_radius());
            break;
        case geometry::ClosedCurve::Kind::Ellipse:
            os << " ellipse a=" << fmt(s.curve->ellipse_a()) << " b=" << fmt(s.curve->ellipse_b());
            break;
        default:
            os << " fourier";
        }
        os << " nodes=" << s.nodes;
    }
    return os.str();
}

} // namespace

static ProblemSpec parse_problem_impl(const std::string& json_text) {
    json j = json::parse(json_text);
    ProblemSpec s;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "onedim") {
        s.kind = ProblemSpec::Kind::OneDim;
    } else if (kind == "radial") {
        s.kind = ProblemSpec::Kind::Radial;
    } else if (kind == "curve") {
        s.kind = ProblemSpec::Kind::Curve;
    } else {
        throw DomainError("problem JSON: unknown kind '" + kind + "'");
    }
    s.coupling.alpha_plus = parse_complex(j, "alpha_plus");
    s.coupling.alpha_minus = parse_complex(j, "alpha_minus");
    s.dimension = j.value("d", 2);
    s.R = j.value("R", 1.0);
    s.angular_index = j.value("m", 0);
    s.nodes = j.value("nodes", 256);
    s.epsilon = j.value("epsilon", 0.0);
    if (j.contains("seed")) s.seed = parse_complex(j, "seed");
    if (j.contains("geometry")) s.curve = parse_geometry(j.at("geometry"), s.nodes);
    if (s.kind == ProblemSpec::Kind::Curve && !s.curve)
        throw DomainError("problem JSON: curve problems need a geometry object");
    return s;
}

ProblemSpec parse_problem(const std::string& json_text) {
    try {
        return parse_problem_impl(json_text);
    } catch (const DomainError&) {
        throw;
    } catch (const GeometryError&) {
        throw;
    } catch (const std::exception& e) {
        throw DomainError(std::string("problem JSON: ") + e.what());
    }
}

ProblemSpec load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open problem file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

std::vector<double> default_epsilons(const ProblemSpec& spec, int count) {
    double start = 1e-2;
    if (spec.kind == ProblemSpec::Kind::OneDim) {
        const Complex k0 = -0.5 * spec.coupling.sum();
        const double pr = std::abs(spec.coupling.product());
        if (pr > 0.0) start = std::min(start, 0.05 * std::abs(k0) / pr);
    } else if (spec.kind == ProblemSpec::Kind::Radial) {
        start = std::min(start, 0.1 * 0.9 * spec.R);
    } else if (spec.curve) {
        start = std::min(start, 0.1 * geometry::max_parallel_range(*spec.curve));
    }
    std::vector<double> eps(count);
    for (int i = 0; i < count; ++i) eps[i] = start * std::pow(0.5, i);
    return eps;
}

SingleSolve run_single(const ProblemSpec& spec) {
    SingleSolve out;
    out.solver = spec.solver_name();
    switch (spec.kind) {
    case ProblemSpec::Kind::OneDim: {
        if (spec.epsilon == 0.0) {
            out.lambda = onedim::limit_eigenvalue(spec.coupling);
            out.kappa = std::sqrt(-out.lambda);
            out.residual = std::abs(onedim::secular_residual(out.kappa, 0.0, spec.coupling));
        } else {
            out.kappa = onedim::solve_kappa(spec.epsilon, spec.coupling);
            out.lambda = -out.kappa * out.kappa;
            out.residual = std::abs(onedim::secular_residual(out.kappa, spec.epsilon, spec.coupling));
        }
        return out;
    }
    case ProblemSpec::Kind::Radial: {
        const radial::RadialProblem p = make_radial(spec, spec.epsilon);
        const Complex seed = spec.seed.value_or(radial::default_seed(p));
        const radial::RadialEigenData d = radial::solve_eigenvalue(p, seed);
        out.kappa = d.kappa;
        out.lambda = d.lambda;
        out.residual = std::abs(radial::secular_det(d.kappa, p));
        return out;
    }
    default: {
        const Complex seed = spec.seed.value_or(-0.5 * spec.coupling.sum());
        const auto sol =
            bsintegral::find_eigenvalue(*spec.curve, spec.epsilon, spec.coupling, seed, spec.nodes);
        out.kappa = sol.kappa;
        out.lambda = sol.lambda;
        out.residual = sol.sigma_ratio;
        return out;
    }
    }
}

SweepReport run_sweep(const ProblemSpec& spec, const std::vector<double>& epsilons,
                      double tol_slope) {
    if (epsilons.size() < 4) throw DomainError("run_sweep: need at least 4 eps values");
    SweepReport rep;
    rep.problem = describe(spec);
    rep.tol_slope = tol_slope;

    std::vector<double> eps = epsilons;
    std::sort(eps.begin(), eps.end(), std::greater<double>());

    // limit problem: lambda_0 and the predicted slope
    switch (spec.kind) {
    case ProblemSpec::Kind::OneDim:
        rep.lambda0 = onedim::limit_eigenvalue(spec.coupling);
        rep.predicted_slope = onedim::first_order_coefficient(spec.coupling);
        break;
    case ProblemSpec::Kind::Radial: {
        const radial::RadialProblem p0 = make_radial(spec, 0.0);
        const Complex seed = spec.seed.value_or(radial::default_seed(p0));
        const radial::RadialEigenData d0 = radial::solve_eigenvalue(p0, seed);
        rep.lambda0 = d0.lambda;
        rep.predicted_slope =
            asymptotics::slope_simple(radial::to_trace_bundle(p0, d0, 256), spec.coupling);
        break;
    }
    default: {
        const Complex seed = spec.seed.value_or(-0.5 * spec.coupling.sum());
        const auto sol0 = bsintegral::find_eigenvalue(*spec.curve, 0.0, spec.coupling, seed,
                                                      spec.nodes);
        rep.lambda0 = sol0.lambda;
        const auto traces =
            bsintegral::eigen_traces(*spec.curve, spec.coupling, sol0.kappa, spec.nodes);
        rep.predicted_slope = asymptotics::slope_simple(
            bsintegral::to_trace_bundle(*spec.curve, traces), spec.coupling);
        break;
    }
    }

    Complex chain_seed = std::sqrt(-rep.lambda0);
    for (const double e : eps) {
        SweepRow row;
        row.epsilon = e;
        row.solver = spec.solver_name();
        try {
            switch (spec.kind) {
            case ProblemSpec::Kind::OneDim: {
                row.kappa = onedim::solve_kappa(e, spec.coupling);
                row.lambda = -row.kappa * row.kappa;
                row.residual = std::abs(onedim::secular_residual(row.kappa, e, spec.coupling));
                break;
            }
            case ProblemSpec::Kind::Radial: {
                const radial::RadialProblem p = make_radial(spec, e);
                const radial::RadialEigenData d = radial::solve_eigenvalue(p, chain_seed);
                row.kappa = d.kappa;
                row.lambda = d.lambda;
                row.residual = std::abs(radial::secular_det(d.kappa, p));
                chain_seed = d.kappa;
                break;
            }
            default: {
                // seed on the predicted branch: the block determinant sees
                // every angular family at once, and a seed chained across eps
                // can drift into a neighbouring branch
                const Complex predicted_kappa =
                    std::sqrt(-(rep.lambda0 + rep.predicted_slope * e));
                const auto sol = bsintegral::find_eigenvalue(*spec.curve, e, spec.coupling,
                                                             predicted_kappa, spec.nodes);
                row.kappa = sol.kappa;
                row.lambda = sol.lambda;
                row.residual = sol.sigma_ratio;
                break;
            }
            }
            row.ok = true;
        } catch (const std::exception& ex) {
            row.ok = false;
            row.error = ex.what();
        }
        rep.rows.push_back(std::move(row));
    }

    std::vector<std::pair<double, Complex>> pts, divided;
    std::vector<std::pair<double, double>> gaps;
    for (const auto& r : rep.rows) {
        if (!r.ok) continue;
        pts.emplace_back(r.epsilon, r.lambda);
        divided.emplace_back(r.epsilon, (r.lambda - rep.lambda0) / r.epsilon);
        gaps.emplace_back(r.epsilon, std::abs(r.lambda - rep.lambda0));
    }
    if (pts.size() >= 4) {
        rep.fitted = numerics::fit_expansion(pts, 2);
        rep.fitted_slope = numerics::fit_expansion(divided, 2).coefficients[0];

        std::vector<std::pair<double, double>> rem;
        for (const auto& [e, lam] : pts)
            rem.emplace_back(e, std::abs(lam - rep.lambda0 - rep.fitted_slope * e));
        rep.remainder_order = log_slope(rem);

        const double denom = std::abs(rep.predicted_slope);
        rep.slope_rel_error = denom > 0.0
                                  ? std::abs(rep.fitted_slope - rep.predicted_slope) / denom
                                  : std::abs(rep.fitted_slope - rep.predicted_slope);
        rep.lambda_gap_order = log_slope(gaps);
        rep.pass_slope = rep.slope_rel_error <= rep.tol_slope;
        rep.pass_order = rep.remainder_order >= rep.order_lo && rep.remainder_order <= rep.order_hi;
        rep.pass = rep.pass_slope && rep.pass_order;
    }
    return rep;
}

CrosscheckReport run_crosscheck(const ProblemSpec& spec, int N, double eps, double tol) {
    if (!spec.curve || spec.curve->kind() != geometry::ClosedCurve::Kind::Circle)
        throw DomainError("run_crosscheck: circle geometry required");
    const double R = spec.curve->circle_radius();

    CrosscheckReport rep;
    rep.tol = tol;

    radial::RadialProblem p;
    p.dimension = 2;
    p.R = R;
    p.epsilon = eps;
    p.coupling = spec.coupling;
    p.angular_index = 0;

    const Complex seed0 = spec.seed.value_or(radial::default_seed(p));
    radial::RadialProblem p0 = p;
    p0.epsilon = 0.0;
    const radial::RadialEigenData d0 = radial::solve_eigenvalue(p0, seed0);
    const radial::RadialEigenData d = (eps == 0.0) ? d0 : radial::solve_eigenvalue(p, d0.kappa);
    rep.lambda_radial = d.lambda;

    const auto sol = bsintegral::find_eigenvalue(*spec.curve, eps, spec.coupling, d.kappa, N);
    rep.lambda_bs = sol.lambda;
    rep.lambda_discrepancy = std::abs(rep.lambda_bs - rep.lambda_radial) / std::abs(rep.lambda_radial);

    // trace comparison, both sides bilinearly normalised, sign aligned
    const Complex rs = 1.0 / std::sqrt(d.norm_sq);
    if (eps == 0.0) {
        const auto traces = bsintegral::eigen_traces(*spec.curve, spec.coupling, sol.kappa, N);
        const Complex bs_scale = 1.0 / std::sqrt(traces.norm_sq);
        const Complex ref_val = rs * d.trace_psi0;
        const Complex ref_dp = rs * d.trace_dn_plus;
        const Complex ref_dm = -rs * d.trace_dn_minus; // inner-side derivative along n
        double worst = 0.0;
        for (std::size_t i = 0; i < traces.psi0.size(); ++i) {
            const Complex v = bs_scale * traces.psi0[i];
            const Complex dp = bs_scale * traces.dn_plus[i];
            const Complex dm = bs_scale * traces.dn_minus[i];
            const double sign = std::abs(v - ref_val) <= std::abs(v + ref_val) ? 1.0 : -1.0;
            worst = std::max(worst, std::abs(sign * v - ref_val) / std::abs(ref_val));
            worst = std::max(worst, std::abs(sign * dp - ref_dp) / std::abs(ref_dp));
            worst = std::max(worst, std::abs(sign * dm - ref_dm) / std::abs(ref_dm));
        }
        rep.trace_discrepancy = worst;
    } else {
        const auto shells = bsintegral::shell_traces(*spec.curve, eps, spec.coupling, sol.kappa, N);
        const Complex ref_out = rs * radial::radial_value(p, d, R + eps);
        const Complex ref_in = rs * radial::radial_value(p, d, R - eps);
        double worst = 0.0;
        const double sign =
            std::abs(shells.outer[0] - ref_out) <= std::abs(shells.outer[0] + ref_out) ? 1.0 : -1.0;
        for (std::size_t i = 0; i < shells.outer.size(); ++i) {
            worst = std::max(worst, std::abs(sign * shells.outer[i] - ref_out) / std::abs(ref_out));
            worst = std::max(worst, std::abs(sign * shells.inner[i] - ref_in) / std::abs(ref_in));
        }
        rep.trace_discrepancy = worst;
    }
    rep.pass = rep.lambda_discrepancy <= tol && rep.trace_discrepancy <= tol;
    return rep;
}

UniformReport run_uniform_check(const ProblemSpec& spec, const std::vector<double>& epsilons) {
    UniformReport rep;
    std::vector<double> eps = epsilons;
    std::sort(eps.begin(), eps.end(), std::greater<double>());

    if (spec.kind == ProblemSpec::Kind::OneDim) {
        for (const double e : eps)
            rep.rows.push_back({e, e == 0.0 ? 0.0 : onedim::uniform_difference(e, spec.coupling)});
    } else if (spec.kind == ProblemSpec::Kind::Radial) {
        const radial::RadialProblem p0 = make_radial(spec, 0.0);
        const Complex seed = spec.seed.value_or(radial::default_seed(p0));
        const radial::RadialEigenData d0 = radial::solve_eigenvalue(p0, seed);
        const Complex s0 = 1.0 / std::sqrt(d0.norm_sq);
        Complex chain = d0.kappa;
        for (const double e : eps) {
            if (e == 0.0) {
                rep.rows.push_back({0.0, 0.0});
                continue;
            }
            const radial::RadialProblem p = make_radial(spec, e);
            const radial::RadialEigenData d = radial::solve_eigenvalue(p, chain);
            chain = d.kappa;
            const Complex se = 1.0 / std::sqrt(d.norm_sq);
            double worst = 0.0;
            for (const double r : {spec.R - e, spec.R + e}) {
                const Complex ve = se * radial::radial_value(p, d, r);
                const Complex v0 = s0 * radial::radial_value(p0, d0, r);
                const double plusd = std::abs(ve - v0), minusd = std::abs(ve + v0);
                worst = std::max(worst, std::min(plusd, minusd));
            }
            rep.rows.push_back({e, worst});
        }
    } else {
        throw DomainError("run_uniform_check: onedim or radial problems only");
    }

    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rep.rows)
        if (r.epsilon > 0.0) pts.emplace_back(r.epsilon, r.sup_difference);
    rep.order = log_slope(pts);
    rep.pass = rep.order >= rep.order_lo && rep.order <= rep.order_hi;
    return rep;
}

std::string to_csv(const SweepReport& rep) {
    std::ostringstream os;
    os << "# deltashell sweep report\n";
    os << "# problem: " << rep.problem << "\n";
    os << "# lambda0_re=" << fmt(rep.lambda0.real()) << " lambda0_im=" << fmt(rep.lambda0.imag())
       << "\n";
    os << "# predicted_slope_re=" << fmt(rep.predicted_slope.real())
       << " predicted_slope_im=" << fmt(rep.predicted_slope.imag()) << "\n";
    for (std::size_t j = 0; j < rep.fitted.coefficients.size(); ++j) {
        os << "# fitted_c" << j << "_re=" << fmt(rep.fitted.coefficients[j].real()) << " fitted_c"
           << j << "_im=" << fmt(rep.fitted.coefficients[j].imag()) << "\n";
    }
    os << "# fitted_slope_re=" << fmt(rep.fitted_slope.real())
       << " fitted_slope_im=" << fmt(rep.fitted_slope.imag()) << "\n";
    os << "# slope_rel_error=" << fmt(rep.slope_rel_error) << " tol_slope=" << fmt(rep.tol_slope)
       << " pass_slope=" << (rep.pass_slope ? 1 : 0) << "\n";
    os << "# remainder_order=" << fmt(rep.remainder_order) << " order_lo=" << fmt(rep.order_lo)
       << " order_hi=" << fmt(rep.order_hi) << " pass_order=" << (rep.pass_order ? 1 : 0) << "\n";
    os << "# lambda_gap_order=" << fmt(rep.lambda_gap_order) << "\n";
    os << "# pass=" << (rep.pass ? 1 : 0) << "\n";
    os << "epsilon,lambda_re,lambda_im,kappa_re,kappa_im,residual,solver\n";
    for (const auto& r : rep.rows) {
        if (!r.ok) {
            os << fmt(r.epsilon) << ",nan,nan,nan,nan,nan," << r.solver << "\n";
            continue;
        }
        os << fmt(r.epsilon) << "," << fmt(r.lambda.real()) << "," << fmt(r.lambda.imag()) << ","
           << fmt(r.kappa.real()) << "," << fmt(r.kappa.imag()) << "," << fmt(r.residual) << ","
           << r.solver << "\n";
    }
    return os.str();
}

std::string to_json(const SweepReport& rep) {
    json j;
    j["problem"] = rep.problem;
    j["lambda0"] = {rep.lambda0.real(), rep.lambda0.imag()};
    j["predicted_slope"] = {rep.predicted_slope.real(), rep.predicted_slope.imag()};
    json coeffs = json::array();
    for (const auto& c : rep.fitted.coefficients) coeffs.push_back({c.real(), c.imag()});
    j["fitted_coefficients"] = coeffs;
    j["fitted_slope"] = {rep.fitted_slope.real(), rep.fitted_slope.imag()};
    j["fit_residual_norm"] = rep.fitted.residual_norm;
    j["slope_rel_error"] = rep.slope_rel_error;
    j["tol_slope"] = rep.tol_slope;
    j["remainder_order"] = rep.remainder_order;
    j["order_window"] = {rep.order_lo, rep.order_hi};
    j["lambda_gap_order"] = rep.lambda_gap_order;
    j["pass_slope"] = rep.pass_slope;
    j["pass_order"] = rep.pass_order;
    j["pass"] = rep.pass;
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json row;
        row["epsilon"] = r.epsilon;
        row["solver"] = r.solver;
        row["ok"] = r.ok;
        if (r.ok) {
            row["lambda"] = {r.lambda.real(), r.lambda.imag()};
            row["kappa"] = {r.kappa.real(), r.kappa.imag()};
            row["residual"] = r.residual;
        } else {
            row["error"] = r.error;
        }
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

std::string to_csv(const UniformReport& rep) {
    std::ostringstream os;
    os << "# deltashell uniform-convergence report\n";
    os << "# order=" << fmt(rep.order) << " order_lo=" << fmt(rep.order_lo)
       << " order_hi=" << fmt(rep.order_hi) << " pass=" << (rep.pass ? 1 : 0) << "\n";
    os << "epsilon,sup_difference\n";
    for (const auto& r : rep.rows) os << fmt(r.epsilon) << "," << fmt(r.sup_difference) << "\n";
    return os.str();
}

std::string to_json(const CrosscheckReport& rep) {
    json j;
    j["lambda_radial"] = {rep.lambda_radial.real(), rep.lambda_radial.imag()};
    j["lambda_bs"] = {rep.lambda_bs.real(), rep.lambda_bs.imag()};
    j["lambda_discrepancy"] = rep.lambda_discrepancy;
    j["trace_discrepancy"] = rep.trace_discrepancy;
    j["tol"] = rep.tol;
    j["pass"] = rep.pass;
    return j.dump(2) + "\n";
}

Complex slope_from_bundle_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw DomainError(std::string("bundle JSON: parse failure: ") + e.what());
    }
    asymptotics::TraceBundle b;
    b.dimension = j.value("dimension", 2);
    auto read_cvec = [&](const char* name, std::vector<Complex>& out) {
        for (const auto& v : j.at(name)) {
            if (v.is_number())
                out.emplace_back(v.get<double>(), 0.0);
            else
                out.emplace_back(v[0].get<double>(), v[1].get<double>());
        }
    };
    read_cvec("psi0", b.psi0);
    read_cvec("dn_plus", b.dn_plus);
    read_cvec("dn_minus", b.dn_minus);
    b.K1 = j.at("K1").get<std::vector<double>>();
    b.weight = j.at("weight").get<std::vector<double>>();
    b.norm_sq = parse_complex(j, "norm_sq");
    Coupling c;
    c.alpha_plus = parse_complex(j, "alpha_plus");
    c.alpha_minus = parse_complex(j, "alpha_minus");
    return asymptotics::slope_simple(b, c);
}

} // namespace deltashell::harness
