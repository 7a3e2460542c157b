// Command-line front end: manifold configuration in, JSON/CSV reports out.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wv/checks.hpp"
#include "wv/config.hpp"
#include "wv/report.hpp"
#include "wv/verify.hpp"

namespace {

struct ManifoldOpts {
    std::string name;
    std::string config_path;
    double mass = 2.0;
    double charge = 1.0;
    double slope = 1.0;
    double offset = 1.0;
    int dim = 3;
};

struct CommonOpts {
    double tol = 1e-10;
    std::string output = "-";
    std::string format = "json";
};

void add_manifold_flags(CLI::App* cmd, ManifoldOpts& m) {
    cmd->add_option("--manifold", m.name, "builtin manifold: schwarzschild | reissner-nordstrom | cone");
    cmd->add_option("--config", m.config_path, "manifold configuration file (JSON)");
    cmd->add_option("--mass", m.mass, "mass parameter");
    cmd->add_option("--charge", m.charge, "charge parameter (reissner-nordstrom)");
    cmd->add_option("--slope", m.slope, "warp slope (cone)");
    cmd->add_option("--offset", m.offset, "warp offset at r = 0 (cone)");
    cmd->add_option("--dim", m.dim, "ambient dimension (default 3)");
}

void add_common_flags(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--tol", c.tol, "working tolerance (1e-14 .. 1e-4)");
    cmd->add_option("--output", c.output, "output file path, or - for stdout");
    cmd->add_option("--format", c.format, "json | human");
}

wv::ManifoldConfig build_manifold(const ManifoldOpts& m) {
    const bool has_builtin = !m.name.empty();
    const bool has_config = !m.config_path.empty();
    if (has_builtin == has_config)
        throw wv::InvalidParameters("exactly one of --manifold and --config is required");
    if (has_config) return wv::load_config(m.config_path);

    wv::ManifoldConfig cfg;
    if (m.name == "schwarzschild")
        cfg.manifold = wv::schwarzschild(m.mass, m.dim);
    else if (m.name == "reissner-nordstrom")
        cfg.manifold = wv::reissner_nordstrom(m.mass, m.charge, m.dim);
    else if (m.name == "cone")
        cfg.manifold = wv::cone(m.slope, m.offset, wv::FiberManifold::unit_sphere(m.dim - 1));
    else
        throw wv::InvalidParameters("unknown builtin manifold: " + m.name);
    return cfg;
}

wv::VerificationOptions make_options(const wv::ManifoldConfig& cfg, const CommonOpts& common) {
    if (!(common.tol >= 1e-14 && common.tol <= 1e-4))
        throw wv::InvalidParameters("--tol must lie in [1e-14, 1e-4]");
    wv::VerificationOptions opt;
    opt.ode_rel_tol = std::min(common.tol, 1e-4);
    opt.quad_abs_tol = common.tol;
    opt.probes = cfg.probes;
    if (!cfg.avr_radii_scales.empty()) opt.avr.radii_scales = cfg.avr_radii_scales;
    return opt;
}

void emit(const CommonOpts& common, const std::string& text) {
    if (common.output == "-" || common.output.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(common.output, std::ios::binary);
    if (!out) throw wv::InputError("cannot open output file: " + common.output);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

int cmd_constants(const ManifoldOpts& mopts, const CommonOpts& common) {
    auto cfg = build_manifold(mopts);
    auto opt = make_options(cfg, common);
    const auto& W = cfg.manifold;

    auto flags = wv::check_conditions(W, opt.probes);
    if (!flags.envelope_admissible)
        throw wv::ConditionsFailed("no admissible envelope: " + flags.probe_log);
    wv::DecayConstants c;
    if (flags.lambda1_positive_somewhere)
        c = wv::decay_constants(wv::envelope_lambda(W, opt.probes), opt.quad_abs_tol);
    auto avr = wv::estimate_avr(W, opt.avr, opt.probes);

    if (common.format == "human") {
        std::ostringstream out;
        out << "b0  = " << wv::format_double(c.b0) << " +/- " << wv::format_double(c.b0_error)
            << "\nb1  = " << wv::format_double(c.b1) << " +/- " << wv::format_double(c.b1_error)
            << "\navr = " << wv::format_double(avr.value) << " +/- "
            << wv::format_double(avr.error_estimate) << " (" << wv::to_string(avr.method) << ")\n"
            << flags.probe_log;
        emit(common, out.str());
    } else {
        emit(common, wv::constants_json(c, avr, flags));
    }
    return 0;
}

int cmd_verify(const ManifoldOpts& mopts, const CommonOpts& common, double slice) {
    auto cfg = build_manifold(mopts);
    auto opt = make_options(cfg, common);
    auto report = wv::verify_inequality(cfg.manifold, slice, opt);
    if (common.format == "human") {
        std::ostringstream out;
        out << "lhs = " << wv::format_double(report.lhs) << "\nrhs = " << wv::format_double(report.rhs)
            << "\ngap = " << wv::format_double(report.gap) << "\nclass = "
            << wv::to_string(report.equality_class) << "\n";
        emit(common, out.str());
    } else {
        emit(common, wv::to_json(report));
    }
    if (report.violated) {
        std::cerr << "inequality violated beyond the numerical budget (gap = " << report.gap
                  << ")\n";
        return 3;
    }
    return 0;
}

int cmd_sweep(const ManifoldOpts& mopts, const CommonOpts& common, double r0_min, double r0_max,
              int steps) {
    auto cfg = build_manifold(mopts);
    auto opt = make_options(cfg, common);
    auto sweep = wv::run_sweep(cfg.manifold, r0_min, r0_max, steps, opt);
    emit(common, wv::to_csv(sweep));
    return 0;
}

int cmd_check(const CommonOpts& common, std::uint64_t seed, int cases, const std::string& fault) {
    if (!fault.empty()) {
        if (fault != "increasing-lambda")
            throw wv::InvalidParameters("unknown fault injection: " + fault);
        wv::AssociatedFunction bad([](double t) { return 0.1 + t; },
                                   wv::TailDescriptor::probe(),
                                   wv::AssociatedFunction::Provenance::user_supplied);
        try {
            bad.validate();
        } catch (const wv::InvalidParameters& e) {
            emit(common, std::string("rejected: ") + e.what());
            return 2;
        }
        emit(common, "fault injection was not rejected");
        return 1;
    }

    auto outcomes = wv::checks::run_property_suite(seed, cases);
    std::ostringstream out;
    bool all_pass = true;
    for (const auto& o : outcomes) {
        all_pass = all_pass && o.pass;
        out << (o.pass ? "PASS " : "FAIL ") << o.name << " (worst margin "
            << wv::format_double(o.worst_margin) << ", " << o.detail << ")\n";
    }
    out << (all_pass ? "all properties hold" : "property failures detected") << " [seed "
        << seed << ", cases " << cases << "]\n";
    emit(common, out.str());
    return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Comparison-geometry verification toolkit for warped products"};
    app.require_subcommand(1);

    ManifoldOpts mopts;
    CommonOpts common;
    if (const char* env = std::getenv("WV_DEFAULT_TOL")) common.tol = std::atof(env);

    double slice = 0.0;
    double r0_min = 0.0, r0_max = 5.0;
    int steps = 51;
    std::uint64_t seed = 42;
    int cases = 200;
    std::string fault;

    auto* constants = app.add_subcommand("constants", "decay constants and asymptotic volume ratio");
    add_manifold_flags(constants, mopts);
    add_common_flags(constants, common);

    auto* verify = app.add_subcommand("verify", "verify the inequality for one slice");
    add_manifold_flags(verify, mopts);
    add_common_flags(verify, common);
    verify->add_option("--slice", slice, "slice radius r0 (default 0)");

    auto* sweep = app.add_subcommand("sweep", "sweep slices and emit CSV");
    add_manifold_flags(sweep, mopts);
    add_common_flags(sweep, common);
    sweep->add_option("--r0-min", r0_min, "first slice radius");
    sweep->add_option("--r0-max", r0_max, "last slice radius");
    sweep->add_option("--steps", steps, "number of rows");

    auto* check = app.add_subcommand("check", "run the seeded property suite");
    add_common_flags(check, common);
    check->add_option("--seed", seed, "random seed");
    check->add_option("--cases", cases, "number of random cases");
    check->add_option("--inject-fault", fault, "negative control (increasing-lambda)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (constants->parsed()) return cmd_constants(mopts, common);
        if (verify->parsed()) return cmd_verify(mopts, common, slice);
        if (sweep->parsed()) return cmd_sweep(mopts, common, r0_min, r0_max, steps);
        if (check->parsed()) return cmd_check(common, seed, cases, fault);
    } catch (const wv::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const wv::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
