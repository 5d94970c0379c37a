// deltashell: spectral laboratory for Schrodinger operators with delta
// interactions on two parallel shells. Solves the exact 1D, radial-Bessel
// and boundary-integral models, sweeps the shell separation and checks the
// first-order eigenvalue expansion lambda_eps = lambda_0 + lambda_0' eps.

#include "deltashell/harness/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using deltashell::harness::ProblemSpec;

std::vector<double> parse_eps_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string single_report(const deltashell::harness::SingleSolve& s, const std::string& format) {
    char buf[256];
    if (format == "json") {
        std::snprintf(buf, sizeof(buf),
                      "{\n  \"solver\": \"%s\",\n  \"lambda\": [%.16e, %.16e],\n"
                      "  \"kappa\": [%.16e, %.16e],\n  \"residual\": %.16e\n}\n",
                      s.solver.c_str(), s.lambda.real(), s.lambda.imag(), s.kappa.real(),
                      s.kappa.imag(), s.residual);
        return buf;
    }
    std::snprintf(buf, sizeof(buf), "lambda_re,lambda_im,kappa_re,kappa_im,residual,solver\n"
                                    "%.16e,%.16e,%.16e,%.16e,%.16e,%s\n",
                  s.lambda.real(), s.lambda.imag(), s.kappa.real(), s.kappa.imag(), s.residual,
                  s.solver.c_str());
    return buf;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deltashell - two-shell delta-interaction spectral laboratory"};
    app.require_subcommand(1);

    std::string spec_path, eps_csv, out_path, format = "csv";
    double tol_slope = 0.01;
    int nodes = 0;

    auto add_common = [&](CLI::App* sub, bool needs_spec = true) {
        if (needs_spec) sub->add_option("--spec", spec_path, "problem JSON path")->required();
        sub->add_option("--eps", eps_csv, "comma-separated eps values");
        sub->add_option("--out", out_path, "output path (stdout when omitted)");
        sub->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--tol-slope", tol_slope, "relative slope tolerance");
        sub->add_option("--nodes", nodes, "boundary-integral nodes per curve");
    };

    CLI::App* cmd_onedim = app.add_subcommand("onedim", "solve the two-point line problem");
    CLI::App* cmd_radial = app.add_subcommand("radial", "solve the concentric-shell problem");
    CLI::App* cmd_curve = app.add_subcommand("curve", "solve the boundary-integral problem");
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "eps sweep with expansion fit");
    CLI::App* cmd_cross = app.add_subcommand("crosscheck", "radial vs boundary-integral equivalence");
    CLI::App* cmd_asym = app.add_subcommand("asymptotics", "evaluate the slope formula on a trace bundle");
    CLI::App* cmd_uniform = app.add_subcommand("uniform", "trace convergence order check");
    for (CLI::App* sub : {cmd_onedim, cmd_radial, cmd_curve, cmd_sweep, cmd_cross, cmd_uniform})
        add_common(sub);
    add_common(cmd_asym);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_asym->parsed()) {
            const auto slope = deltashell::harness::slope_from_bundle_json(read_file(spec_path));
            char buf[128];
            std::snprintf(buf, sizeof(buf), "slope_re,slope_im\n%.16e,%.16e\n", slope.real(),
                          slope.imag());
            write_output(out_path, buf);
            return 0;
        }

        ProblemSpec spec = deltashell::harness::load_problem(spec_path);
        if (nodes > 0) spec.nodes = nodes;

        if (cmd_onedim->parsed() || cmd_radial->parsed() || cmd_curve->parsed()) {
            write_output(out_path, single_report(deltashell::harness::run_single(spec), format));
            return 0;
        }

        std::vector<double> eps = eps_csv.empty() ? deltashell::harness::default_epsilons(spec)
                                                  : parse_eps_list(eps_csv);

        if (cmd_sweep->parsed()) {
            const auto rep = deltashell::harness::run_sweep(spec, eps, tol_slope);
            write_output(out_path, format == "json" ? deltashell::harness::to_json(rep)
                                                    : deltashell::harness::to_csv(rep));
            return rep.pass ? 0 : 1;
        }
        if (cmd_cross->parsed()) {
            const double e = eps_csv.empty() ? 0.0 : parse_eps_list(eps_csv).front();
            const auto rep = deltashell::harness::run_crosscheck(
                spec, spec.nodes, e, 1e-6);
            write_output(out_path, deltashell::harness::to_json(rep));
            return rep.pass ? 0 : 1;
        }
        if (cmd_uniform->parsed()) {
            const auto rep = deltashell::harness::run_uniform_check(spec, eps);
            write_output(out_path, deltashell::harness::to_csv(rep));
            return rep.pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
