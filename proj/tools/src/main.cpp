#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

#include "geoindex/errors.hpp"
#include "geoindex/expression.hpp"
#include "geoindex/geometry.hpp"
#include "geoindex/indexform.hpp"
#include "geoindex/jacobi.hpp"
#include "geoindex/report.hpp"
#include "geoindex/spec_io.hpp"
#include "geoindex/spectral.hpp"
#include "geoindex/suite.hpp"

namespace {

using namespace geoindex;

struct Options {
    std::string builtin;
    std::string spec_path;
    std::string const_expr;
    int const_dim = 1;
    std::string length;
    int steps = 0;  // 0 = spec-file value if present, else the module default
    int modes = indexform::Defaults::modes;
    int panels = indexform::Defaults::quad_panels;
    double tol_kernel = 0.0;  // 0 = per-module default
    double tol_zero = indexform::Defaults::zero_tol;
    std::string format = "text";
    std::string out_path;
    int random_trials = 0;
    std::uint64_t seed = 0;
};

void add_common_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--builtin", o.builtin, "built-in example name (see README)");
    cmd->add_option("--spec", o.spec_path, "manifold specification file (JSON)");
    cmd->add_option("--const", o.const_expr,
                    "inline constant profile: S = value * Id (constant expression)");
    cmd->add_option("--dim", o.const_dim, "fiber dimension for --const (default 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--length", o.length,
                    "geodesic length, e.g. 2.5pi (constant-curvature sources; rescales "
                    "the direction of metric2d sources)");
    cmd->add_option("--steps", o.steps, "integration steps (default 2000)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--modes", o.modes, "Galerkin modes per fiber dimension (default 128)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--panels", o.panels, "Simpson quadrature panels (default 4096)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol-kernel", o.tol_kernel, "kernel detection tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol-zero", o.tol_zero, "eigenvalue zero tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--format", o.format, "output format: text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    cmd->add_option("--out", o.out_path, "write the report to this file instead of stdout");
}

void write_output(const Options& o, const std::string& document) {
    if (o.out_path.empty()) {
        std::cout << document;
        return;
    }
    std::ofstream out(o.out_path);
    if (!out) throw ConfigError("cannot open output file '" + o.out_path + "'");
    out << document;
    if (!out.flush()) throw ConfigError("cannot write output file '" + o.out_path + "'");
}

// Resolved input: the curvature profile plus the step count every downstream
// integration should use.
struct Input {
    CurvatureProfile profile;
    int steps = geom::Defaults::steps;
};

Input resolve_input(const Options& o) {
    const int sources = (o.builtin.empty() ? 0 : 1) + (o.spec_path.empty() ? 0 : 1) +
                        (o.const_expr.empty() ? 0 : 1);
    if (sources != 1)
        throw ConfigError("exactly one of --builtin, --spec or --const is required");

    Input input;
    if (!o.const_expr.empty()) {
        if (!o.length.empty())
            throw ConfigError("--length does not apply to --const (S is given outright)");
        const double value = expr::evaluate_constant(o.const_expr);
        input.profile = CurvatureProfile::constant(
            SymMatrix(value * Eigen::MatrixXd::Identity(o.const_dim, o.const_dim)));
        if (o.steps > 0) input.steps = o.steps;
        return input;
    }

    geom::ManifoldSpec spec;
    Eigen::Vector2d start = Eigen::Vector2d::Zero();
    Eigen::Vector2d direction = Eigen::Vector2d::Zero();
    if (!o.builtin.empty()) {
        const geom::CatalogEntry& entry = geom::catalog_entry(o.builtin);
        spec = entry.spec;
        start = entry.start;
        direction = entry.direction;
    } else {
        spec_io::ManifoldFile file = spec_io::load_manifold(o.spec_path);
        spec = std::move(file.spec);
        start = file.start;
        direction = file.direction;
        if (file.steps) input.steps = *file.steps;
    }
    if (o.steps > 0) input.steps = o.steps;

    if (const auto* cc = std::get_if<geom::ConstantCurvature>(&spec)) {
        const double length = o.length.empty() ? 1.0 : expr::parse_length(o.length);
        const geom::GeodesicRecord record =
            geom::synthetic_record(cc->dim, length, input.steps);
        input.profile = geom::curvature_profile(spec, record);
    } else if (const auto* m = std::get_if<geom::Metric2D>(&spec)) {
        if (!o.length.empty()) {
            const Eigen::Matrix2d g = geom::metric_at(*m, start);
            const double now = std::sqrt(direction.dot(g * direction));
            direction *= expr::parse_length(o.length) / now;
        }
        geom::GeodesicRecord record = geom::shoot_geodesic(*m, start, direction, input.steps);
        geom::parallel_frame(*m, record);
        input.profile = geom::curvature_profile(spec, record);
    } else {
        if (!o.length.empty())
            throw ConfigError("--length does not apply to direct profiles");
        input.profile = std::get<geom::DirectProfile>(spec).profile;
    }
    return input;
}

double kernel_tol_or(const Options& o, double module_default) {
    return o.tol_kernel > 0.0 ? o.tol_kernel : module_default;
}

int run_conjugate(const Options& o) {
    const Input input = resolve_input(o);
    const jacobi::JacobiSolution sol = jacobi::solve_jacobi(input.profile, input.steps);
    if (o.format == "csv") {
        write_output(o, report::conjugate_csv(sol));
        return 0;
    }
    const jacobi::ConjugateReport rep =
        jacobi::conjugate_points(sol, kernel_tol_or(o, jacobi::Defaults::kernel_tol));
    write_output(o, o.format == "json" ? report::conjugate_json(rep)
                                       : report::conjugate_text(rep));
    return 0;
}

int run_index(const Options& o) {
    const Input input = resolve_input(o);
    const indexform::GalerkinBasis basis{input.profile.n_normal, o.modes, o.panels};
    const int mu = indexform::galerkin_index(input.profile, 1.0, basis, o.tol_zero);
    if (o.format == "json")
        write_output(o, report::index_json(mu));
    else if (o.format == "csv")
        write_output(o, report::index_csv(mu));
    else
        write_output(o, report::index_text(mu));
    return 0;
}

int run_crossings(const Options& o) {
    const Input input = resolve_input(o);
    const indexform::GalerkinBasis basis{input.profile.n_normal, o.modes, o.panels};
    const SymMatrixPath path = indexform::assemble_path(input.profile, basis);
    if (o.format == "csv") {
        write_output(o, report::crossings_csv(path, spectral::Defaults::grid_size));
        return 0;
    }
    const std::vector<Crossing> crossings = spectral::find_crossings(
        path, spectral::Defaults::grid_size, kernel_tol_or(o, spectral::Defaults::kernel_tol));
    write_output(o, o.format == "json" ? report::crossings_json(crossings)
                                       : report::crossings_text(crossings));
    return 0;
}

int run_verify(const Options& o) {
    if (o.random_trials > 0) {
        if (!o.builtin.empty() || !o.spec_path.empty() || !o.const_expr.empty())
            throw ConfigError("--random draws its own profiles; drop the input source");
        suite::SuiteOptions sopts;
        sopts.modes = o.modes;
        sopts.quad_panels = o.panels;
        if (o.steps > 0) sopts.verify.steps = o.steps;
        sopts.verify.kernel_tol = kernel_tol_or(o, jacobi::Defaults::kernel_tol);
        sopts.verify.zero_tol = o.tol_zero;
        const suite::SuiteReport rep =
            suite::run_random_verification(o.random_trials, o.seed, sopts);
        if (o.format == "json")
            write_output(o, report::suite_json(rep));
        else if (o.format == "csv")
            write_output(o, report::suite_csv(rep));
        else
            write_output(o, report::suite_text(rep));
        return rep.all_agree ? 0 : 1;
    }

    const Input input = resolve_input(o);
    const indexform::GalerkinBasis basis{input.profile.n_normal, o.modes, o.panels};
    indexform::VerifyOptions vopts;
    vopts.steps = input.steps;
    vopts.kernel_tol = kernel_tol_or(o, jacobi::Defaults::kernel_tol);
    vopts.zero_tol = o.tol_zero;
    const indexform::IndexReport rep = indexform::verify_theorem(input.profile, basis, vopts);
    if (o.format == "json")
        write_output(o, report::verify_json(rep));
    else if (o.format == "csv")
        write_output(o, report::verify_csv(rep));
    else
        write_output(o, report::verify_text(rep));
    return rep.agree ? 0 : 1;
}

int exit_code_for(const Error& e) {
    if (dynamic_cast<const DegenerateError*>(&e)) return 2;
    if (dynamic_cast<const ResolutionError*>(&e)) return 3;
    if (dynamic_cast<const ConfigError*>(&e)) return 4;
    return 1;
}

int emit_error(const Options& o, const std::string& kind, const std::string& message,
               int code) {
    if (o.format == "json")
        std::cout << report::error_json(kind, message);
    else
        std::cerr << report::error_text(kind, message);
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Morse index verification for geodesics: conjugate points, Galerkin "
                 "index and crossing signatures"};
    app.require_subcommand(1);

    Options o;
    CLI::App* conjugate =
        app.add_subcommand("conjugate", "conjugate instants of the Jacobi equation");
    CLI::App* index = app.add_subcommand("index", "Morse index of the energy Hessian");
    CLI::App* crossings =
        app.add_subcommand("crossings", "crossings of the Galerkin form path in lambda");
    CLI::App* verify =
        app.add_subcommand("verify", "check index == conjugate count == -signature sum");
    for (CLI::App* cmd : {conjugate, index, crossings, verify}) add_common_options(cmd, o);
    verify->add_option("--random", o.random_trials,
                       "run this many random verification trials instead of one input")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", o.seed, "seed for --random (default 0)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return emit_error(o, "config", e.what(), 4);
    }

    try {
        if (conjugate->parsed()) return run_conjugate(o);
        if (index->parsed()) return run_index(o);
        if (crossings->parsed()) return run_crossings(o);
        return run_verify(o);
    } catch (const Error& e) {
        return emit_error(o, e.kind(), e.message(), exit_code_for(e));
    } catch (const std::invalid_argument& e) {
        return emit_error(o, "config", e.what(), 4);
    } catch (const std::exception& e) {
        return emit_error(o, "internal", e.what(), 1);
    }
}
