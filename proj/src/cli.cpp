#include "linform/cli.hpp"

#include "linform/acceptance.hpp"
#include "linform/errors.hpp"
#include "linform/io.hpp"
#include "linform/linear_form.hpp"
#include "linform/montecarlo.hpp"
#include "linform/operator_algebra.hpp"
#include "linform/verifier.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>

namespace linform {

namespace {

const std::vector<std::string> kCommands = {"derive-pde", "atoms", "density", "cf",
                                            "simulate",   "verify", "kac",    "selftest"};

// Destination for the primary artifact: the --out file or the given stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback, bool binary) : stream_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, binary ? std::ios::binary : std::ios::out);
            if (!*file_) throw Error(ErrorKind::domain, "cannot open output file " + path);
            stream_ = file_.get();
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

void emit_json(const RunConfig& cfg, std::ostream& out, const json& doc) {
    Sink sink(cfg.out_path, out, false);
    sink.get() << doc.dump(2) << '\n';
}

std::string csv_number(double v) { return shortest_decimal(v); }

int derive_pde(const RunConfig& cfg, const ModelSpec& spec, std::ostream& out) {
    const OperatorPoly op = governing_operator(spec, cfg.cap.value_or(kGoverningOperatorCap));
    const Rational total = lambda_total_exact(spec);

    // Largest k in {1, 2} with (T + total rate)^k dividing the operator.
    json factor = {{"divisor_base", (OperatorPoly::T() + OperatorPoly(total)).to_string()}, {"power", 0}};
    for (unsigned k = 2; k >= 1; --k) {
        if (auto q = poly_divides(shifted_time_power(total, k), op)) {
            factor["power"] = k;
            factor["divisor"] = shifted_time_power(total, k).to_string();
            factor["quotient"] = q->to_string();
            factor["quotient_terms"] = operator_to_json(*q);
            break;
        }
    }

    if (cfg.format == "csv") {
        Sink sink(cfg.out_path, out, false);
        sink.get() << metadata_csv({spec_hash(spec), std::nullopt}) << "dt,dx,coef\n";
        for (const auto& term : operator_to_json(op)) {
            sink.get() << term["dt"].get<unsigned>() << ',' << term["dx"].get<unsigned>() << ','
                       << term["coef"].get<std::string>() << '\n';
        }
        return 0;
    }
    json doc = {{"meta", metadata_json({spec_hash(spec), std::nullopt})},
                {"n", spec.size()},
                {"order", op.total_degree()},
                {"terms", operator_to_json(op)},
                {"rendering", op.to_string()},
                {"latex", op.to_latex()},
                {"factor_check", factor}};
    emit_json(cfg, out, doc);
    return 0;
}

int atoms_cmd(const RunConfig& cfg, const ModelSpec& spec, std::ostream& out) {
    const auto atoms = singular_atoms(spec, cfg.t);
    double total = 0.0;
    for (const auto& a : atoms) total += a.mass;
    if (cfg.format == "csv") {
        Sink sink(cfg.out_path, out, false);
        sink.get() << metadata_csv({spec_hash(spec), std::nullopt}) << "# t=" << csv_number(cfg.t)
                   << "\nlocation,mass,multiplicity\n";
        for (const auto& a : atoms) {
            sink.get() << csv_number(a.location) << ',' << csv_number(a.mass) << ',' << a.multiplicity << '\n';
        }
        return 0;
    }
    emit_json(cfg, out,
              {{"meta", metadata_json({spec_hash(spec), std::nullopt})},
               {"t", cfg.t},
               {"total_mass", total},
               {"atoms", atoms_to_json(atoms)}});
    return 0;
}

int density_cmd(const RunConfig& cfg, const ModelSpec& spec, std::ostream& out, std::ostream& err) {
    AcDensityOptions opts;
    opts.points = cfg.points;
    opts.half_width_factor = cfg.half_width;
    const DistributionGrid grid = ac_density(spec, cfg.t, opts);
    for (const auto& w : grid.warnings) err << "warning: " << w << '\n';
    const Metadata meta{spec_hash(spec), std::nullopt};
    if (cfg.format == "csv") {
        Sink sink(cfg.out_path, out, false);
        write_grid_csv(sink.get(), grid, meta);
        return 0;
    }
    json doc = grid_to_json(grid);
    doc["meta"] = metadata_json(meta);
    emit_json(cfg, out, doc);
    return 0;
}

int cf_cmd(const RunConfig& cfg, const ModelSpec& spec, std::ostream& out) {
    std::vector<double> alphas = cfg.alphas;
    if (alphas.empty()) alphas = {0.0, 0.5, 1.0, 2.0, 4.0};
    const Metadata meta{spec_hash(spec), std::nullopt};
    if (cfg.format == "csv") {
        Sink sink(cfg.out_path, out, false);
        sink.get() << metadata_csv(meta) << "# t=" << csv_number(cfg.t) << "\nalpha,re,im\n";
        for (double a : alphas) {
            const auto v = char_fn_L(spec, a, cfg.t);
            sink.get() << csv_number(a) << ',' << csv_number(v.real()) << ',' << csv_number(v.imag()) << '\n';
        }
        return 0;
    }
    json rows = json::array();
    for (double a : alphas) {
        const auto v = char_fn_L(spec, a, cfg.t);
        rows.push_back({{"alpha", a}, {"re", v.real()}, {"im", v.imag()}});
    }
    emit_json(cfg, out, {{"meta", metadata_json(meta)}, {"t", cfg.t}, {"values", rows}});
    return 0;
}

int simulate_cmd(const RunConfig& cfg, const ModelSpec& spec, std::ostream& out) {
    const SampleSet s = sample_linear_form(spec, cfg.t, cfg.samples, cfg.seed);
    const Metadata meta{spec_hash(spec), cfg.seed};
    json summary = {{"meta", metadata_json(meta)},
                    {"t", cfg.t},
                    {"count", s.size()},
                    {"zero_event_fraction", zero_event_fraction(s)}};
    if (cfg.format == "bin") {
        if (cfg.out_path.empty()) throw Error(ErrorKind::domain, "--format bin needs --out");
        Sink sink(cfg.out_path, out, true);
        write_samples_binary(sink.get(), s);
    } else if (cfg.format == "csv") {
        Sink sink(cfg.out_path, out, false);
        write_samples_csv(sink.get(), s, meta);
    } else {
        json doc = summary;
        doc["values"] = s.values;
        doc["event_counts"] = s.event_counts;
        doc["initial_signs"] = s.initial_signs;
        Sink sink(cfg.out_path, out, false);
        sink.get() << doc.dump() << '\n';
    }
    if (!cfg.out_path.empty()) {
        summary["out"] = cfg.out_path;
        summary["format"] = cfg.format;
        out << summary.dump(2) << '\n';
    }
    return 0;
}

int verify_cmd(const RunConfig& cfg, const ModelSpec& spec, std::ostream& out) {
    std::vector<double> alphas = cfg.alphas;
    if (alphas.empty()) {
        for (int i = 0; i <= 10; ++i) alphas.push_back(-2.5 + 0.5 * i);
    }
    std::vector<VerificationReport> reports;
    json skipped = json::array();
    reports.push_back(symbol_root_check(spec, alphas, 1e-8, cfg.cap.value_or(kGoverningOperatorCap)));
    if (spec.size() <= 6) {
        reports.push_back(system_cf_check(spec, alphas, cfg.t));
    } else {
        skipped.push_back("system_cf_check (n > 6)");
    }
    if (spec.size() == 2 && spec[0].exact.coef == 1 && abs(spec[1].exact.coef) == 1) {
        const int sign = spec[1].exact.coef > 0 ? 1 : -1;
        reports.push_back(initial_condition_check(spec[0].params, spec[1].params, sign, alphas));
    } else {
        skipped.push_back("initial_condition_check (needs n = 2 with coefficients 1, +-1)");
    }
    if (cfg.advisory) {
        if (spec.size() <= 2) {
            FdOptions fd;
            fd.t = cfg.t;
            reports.push_back(fd_residual(spec, fd));
        } else {
            skipped.push_back("fd_residual (n > 2)");
        }
    }
    bool ok = true;
    json checks = json::array();
    for (const auto& r : reports) {
        if (!r.advisory) ok = ok && r.passed;
        checks.push_back(report_to_json(r));
    }
    emit_json(cfg, out,
              {{"meta", metadata_json({spec_hash(spec), std::nullopt})},
               {"passed", ok},
               {"checks", checks},
               {"skipped", skipped}});
    return ok ? 0 : 1;
}

int kac_cmd(const RunConfig& cfg, const ModelSpec& spec, std::ostream& out) {
    std::vector<double> rhos = cfg.rhos;
    if (rhos.empty()) rhos.assign(spec.size(), 1.0);
    std::vector<double> scales = cfg.scales;
    if (scales.empty()) scales = {1.0, 10.0, 100.0};
    const KacTable table = kac_convergence(spec, rhos, scales, cfg.t, cfg.samples, cfg.seed);
    const Metadata meta{spec_hash(spec), cfg.seed};
    if (cfg.format == "csv") {
        Sink sink(cfg.out_path, out, false);
        sink.get() << metadata_csv(meta) << "# limit_mean=" << csv_number(table.limit_mean)
                   << "\n# limit_variance=" << csv_number(table.limit_variance) << "\nscale,ks,count\n";
        for (const auto& r : table.rows) sink.get() << csv_number(r.scale) << ',' << csv_number(r.ks) << ',' << r.count << '\n';
        return 0;
    }
    json rows = json::array();
    for (const auto& r : table.rows) rows.push_back({{"scale", r.scale}, {"ks", r.ks}, {"count", r.count}});
    emit_json(cfg, out,
              {{"meta", metadata_json(meta)},
               {"t", cfg.t},
               {"rhos", rhos},
               {"limit_mean", table.limit_mean},
               {"limit_variance", table.limit_variance},
               {"rows", rows}});
    return 0;
}

int selftest_cmd(const RunConfig& cfg, std::ostream& out) {
    AcceptanceOptions opts;
    opts.on_result = [&](const CriterionResult& r) { out << format_result_line(r) << std::endl; };
    (void)cfg;
    const auto results = run_acceptance(opts);
    const bool ok = all_required_passed(results);
    out << (ok ? "selftest: all required criteria passed" : "selftest: FAILED") << '\n';
    return ok ? 0 : 1;
}

}  // namespace

void validate(const RunConfig& cfg) {
    if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end()) {
        throw Error(ErrorKind::domain, "unknown command '" + cfg.command + "'");
    }
    if (cfg.command == "selftest") return;
    if (cfg.spec_path.empty()) throw Error(ErrorKind::domain, cfg.command + " requires --spec");
    if (!std::isfinite(cfg.t) || cfg.t < 0.0) throw Error(ErrorKind::domain, "--t must be >= 0");
    const bool needs_positive_t = cfg.command == "atoms" || cfg.command == "density" || cfg.command == "simulate" ||
                                  cfg.command == "verify" || cfg.command == "kac";
    if (needs_positive_t && cfg.t == 0.0) throw Error(ErrorKind::domain, cfg.command + " requires --t > 0");
    if (cfg.samples < 1) throw Error(ErrorKind::domain, "--samples must be >= 1");
    const bool bin_ok = cfg.command == "simulate";
    if (cfg.format != "json" && cfg.format != "csv" && !(bin_ok && cfg.format == "bin")) {
        throw Error(ErrorKind::domain, "unsupported --format '" + cfg.format + "' for " + cfg.command);
    }
    if (cfg.cap && *cfg.cap < 1) throw Error(ErrorKind::domain, "--cap must be >= 1");
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate(cfg);
        if (cfg.command == "selftest") return selftest_cmd(cfg, out);
        const ModelSpec spec = load_spec(cfg.spec_path);
        const std::size_t cap = cfg.cap.value_or(kDefaultComponentCap);
        if (spec.size() > cap) {
            throw Error(ErrorKind::size_limit, "spec has " + std::to_string(spec.size()) +
                                                   " components; the limit is " + std::to_string(cap) + " (--cap)");
        }
        if (cfg.command == "derive-pde") return derive_pde(cfg, spec, out);
        if (cfg.command == "atoms") return atoms_cmd(cfg, spec, out);
        if (cfg.command == "density") return density_cmd(cfg, spec, out, err);
        if (cfg.command == "cf") return cf_cmd(cfg, spec, out);
        if (cfg.command == "simulate") return simulate_cmd(cfg, spec, out);
        if (cfg.command == "verify") return verify_cmd(cfg, spec, out);
        return kac_cmd(cfg, spec, out);
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return e.is_numerical() ? 2 : 1;
    }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Linear forms of telegraph processes: atoms, CFs, densities, governing PDEs, simulation"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::size_t cap = 0;

    for (const auto& name : kCommands) {
        CLI::App* sub = app.add_subcommand(name);
        if (name != "selftest") {
            sub->add_option("--spec", cfg.spec_path, "model spec JSON file")->required();
            sub->add_option("--t", cfg.t, "time");
            sub->add_option("--seed", cfg.seed, "RNG seed");
            sub->add_option("--samples", cfg.samples, "number of draws");
            sub->add_option("--alpha", cfg.alphas, "comma-separated frequencies")->delimiter(',');
            sub->add_option("--points", cfg.points, "FFT grid size (power of two >= 256; 0 = automatic)");
            sub->add_option("--half-width", cfg.half_width, "grid half-width / support half-width");
            sub->add_option("--format", cfg.format, "json, csv (or bin for simulate)");
            sub->add_option("--out", cfg.out_path, "output file (default stdout)");
            sub->add_option("--cap", cap, "component limit override");
            sub->add_flag("--advisory", cfg.advisory, "include the finite-difference residual check");
            sub->add_option("--rho", cfg.rhos, "Kac diffusion ratios, comma-separated")->delimiter(',');
            sub->add_option("--scales", cfg.scales, "Kac scale factors, comma-separated")->delimiter(',');
        }
        sub->callback([&cfg, &cap, name, sub] {
            cfg.command = name;
            if (name != "selftest" && sub->count("--cap") > 0) cfg.cap = cap;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }
    return run(cfg, out, err);
}

}  // namespace linform
