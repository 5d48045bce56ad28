// furstenberg — command-line front end: loads model specs, dispatches the
// interval/scan/lyapunov/genericity computations, and writes CSV/JSON results
// with embedded run manifests.

#include "furstenberg/errors.hpp"
#include "furstenberg/interval.hpp"
#include "furstenberg/liealg.hpp"
#include "furstenberg/lyapunov.hpp"
#include "furstenberg/manifest.hpp"
#include "furstenberg/model.hpp"
#include "furstenberg/scanner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitSpec = 3;
constexpr int kExitNumerical = 4;

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string timestamp_utc() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// --workers flag, FURSTENBERG_WORKERS, then auto (0 = one per hardware thread).
int resolve_workers(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("FURSTENBERG_WORKERS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    return 0;
}

std::vector<double> linspace(double lo, double hi, int points) {
    std::vector<double> grid;
    grid.reserve(points);
    if (points == 1) {
        grid.push_back(lo);
        return grid;
    }
    for (int i = 0; i < points; ++i)
        grid.push_back(lo + (hi - lo) * static_cast<double>(i) / (points - 1));
    return grid;
}

furstenberg::RunManifest make_manifest(
    const std::string& command, const std::string& spec_path,
    std::map<std::string, std::string> parameters, const std::string& out_path) {
    furstenberg::RunManifest m;
    m.command = command;
    m.spec_path = spec_path;
    m.parameters = std::move(parameters);
    m.output_path = out_path;
    m.artifact_version = furstenberg::artifact_version();
    m.timestamp = timestamp_utc();
    return m;
}

int write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) {
        std::cerr << "error: cannot write output file: " << path << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

furstenberg::ModelSpec load_spec_or_exit(const std::string& path) {
    try {
        return furstenberg::ModelSpec::load(path);
    } catch (const std::exception& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        std::exit(kExitSpec);
    }
}

int cmd_interval(const std::string& spec_path, double delta_O) {
    const furstenberg::ModelSpec spec = load_spec_or_exit(spec_path);
    const furstenberg::SpectralBounds bounds = furstenberg::spectral_bounds(spec);
    const double ell_C = furstenberg::critical_length_given(bounds.delta, delta_O);
    const bool feasible = spec.ell < ell_C;

    std::cout << "lambda_min = " << fmt_double(bounds.lambda_min) << "\n"
              << "lambda_max = " << fmt_double(bounds.lambda_max) << "\n"
              << "delta      = " << fmt_double(bounds.delta) << "\n"
              << "ell_C      = " << fmt_double(ell_C) << "\n"
              << "ell        = " << fmt_double(spec.ell) << "\n";

    nlohmann::json doc;
    doc["lambda_min"] = bounds.lambda_min;
    doc["lambda_max"] = bounds.lambda_max;
    doc["delta"] = bounds.delta;
    doc["ell_C"] = ell_C;
    doc["ell"] = spec.ell;
    doc["delta_O"] = delta_O;

    if (!feasible) {
        std::cout << "I(N,ell)   : undefined, ell (" << fmt_double(spec.ell)
                  << ") >= ell_C (" << fmt_double(ell_C) << ")\n";
        doc["interval"] = nullptr;
        std::cout << doc.dump() << "\n";
        std::cerr << "error: ell (" << fmt_double(spec.ell) << ") >= ell_C ("
                  << fmt_double(ell_C) << ")\n";
        return kExitNumerical;
    }

    const furstenberg::EnergyInterval interval =
        furstenberg::energy_interval(spec, delta_O);
    std::cout << "I(N,ell)   = [" << fmt_double(interval.lo) << ", "
              << fmt_double(interval.hi) << "]\n";
    doc["interval"] = {{"lo", interval.lo}, {"hi", interval.hi}};
    std::cout << doc.dump() << "\n";
    return kExitOk;
}

int cmd_scan(const std::string& spec_path, double e_lo, double e_hi, int points,
             double delta_O, const std::string& out_path, int workers) {
    const furstenberg::ModelSpec spec = load_spec_or_exit(spec_path);
    const std::vector<double> grid = linspace(e_lo, e_hi, points);
    const std::vector<furstenberg::ScanRecord> records =
        furstenberg::scan_energies(spec, grid, delta_O, workers);

    const auto manifest = make_manifest(
        "scan", spec_path,
        {{"E_lo", fmt_double(e_lo)},
         {"E_hi", fmt_double(e_hi)},
         {"points", std::to_string(points)},
         {"delta_O", fmt_double(delta_O)}},
        out_path);
    const int rc = write_file(
        out_path, furstenberg::with_manifest(manifest,
                                             furstenberg::scan_csv(records)));
    if (rc != kExitOk) return rc;

    int failures = 0;
    for (const auto& rec : records)
        if (!rec.error.empty()) ++failures;
    if (failures > 0) {
        std::cerr << "error: " << failures
                  << " energies failed; see marker rows in " << out_path << "\n";
        return kExitNumerical;
    }
    std::cout << "wrote " << records.size() << " records to " << out_path << "\n";
    return kExitOk;
}

int cmd_lyapunov(const std::string& spec_path, double e_lo, double e_hi,
                 int points, long long steps, std::uint64_t seed,
                 int reorth_period, double z_threshold,
                 const std::string& out_path, int workers) {
    const furstenberg::ModelSpec spec = load_spec_or_exit(spec_path);
    const std::vector<double> grid = linspace(e_lo, e_hi, points);
    const std::vector<furstenberg::SweepEntry> entries = furstenberg::energy_sweep(
        spec, grid, steps, seed, reorth_period, workers);
    const std::vector<furstenberg::SweepRow> rows =
        furstenberg::sweep_rows(entries, spec.N, z_threshold);

    const auto manifest = make_manifest(
        "lyapunov", spec_path,
        {{"E_lo", fmt_double(e_lo)},
         {"E_hi", fmt_double(e_hi)},
         {"points", std::to_string(points)},
         {"steps", std::to_string(steps)},
         {"seed", std::to_string(seed)},
         {"reorth_period", std::to_string(reorth_period)},
         {"z_threshold", fmt_double(z_threshold)}},
        out_path);
    const int rc = write_file(
        out_path, furstenberg::with_manifest(
                      manifest, furstenberg::sweep_csv(rows, spec.N)));
    if (rc != kExitOk) return rc;

    int failures = 0;
    for (const auto& entry : entries)
        if (!entry.error.empty()) ++failures;
    if (failures > 0) {
        std::cerr << "error: " << failures
                  << " energies failed; see failed rows in " << out_path << "\n";
        return kExitNumerical;
    }
    std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    return kExitOk;
}

int cmd_genericity(int N, double e_lo, double e_hi, int points, int samples,
                   std::uint64_t seed, const std::string& out_path, int workers) {
    const std::vector<double> grid = linspace(e_lo, e_hi, points);
    const furstenberg::GenericityReport report =
        furstenberg::genericity_trial(N, grid, samples, seed, workers);

    const auto manifest = make_manifest(
        "genericity", "",
        {{"N", std::to_string(N)},
         {"E_lo", fmt_double(e_lo)},
         {"E_hi", fmt_double(e_hi)},
         {"points", std::to_string(points)},
         {"samples", std::to_string(samples)},
         {"seed", std::to_string(seed)}},
        out_path);
    const int rc = write_file(
        out_path, furstenberg::with_manifest(
                      manifest, furstenberg::genericity_json(report)));
    if (rc != kExitOk) return rc;
    std::cout << "success_fraction = " << fmt_double(report.success_fraction)
              << " (" << report.failures.size() << " failures), report in "
              << out_path << "\n";
    return kExitOk;
}

int cmd_lie_check(const std::string& spec_path, double E, double tol) {
    const furstenberg::ModelSpec spec = load_spec_or_exit(spec_path);
    std::vector<furstenberg::SpAlgebraElement> generators;
    for (const furstenberg::CellConfig& omega : furstenberg::vertex_configs(spec.N))
        generators.push_back(furstenberg::build_X(spec, omega, E));
    const furstenberg::LieSpan span = furstenberg::lie_closure(generators, tol);

    const bool generates = span.dim == span.target_dim;
    std::cout << "E             = " << fmt_double(E) << "\n"
              << "closure_dim   = " << span.dim << "\n"
              << "target_dim    = " << span.target_dim << "\n"
              << "generates     = " << (generates ? "true" : "false") << "\n"
              << "indeterminate = " << (span.indeterminate ? "true" : "false")
              << "\n";
    nlohmann::json doc;
    doc["E"] = E;
    doc["closure_dim"] = span.dim;
    doc["target_dim"] = span.target_dim;
    doc["generates"] = generates;
    doc["indeterminate"] = span.indeterminate;
    std::cout << doc.dump() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transfer-matrix laboratory for matrix-valued "
                 "Anderson-Bernoulli models"};
    app.require_subcommand(1);

    std::string spec_path, out_path;
    double delta_O = 1.0, e_lo = 0.0, e_hi = 0.0, z_threshold = 3.0, tol = 1e-9;
    double energy = 0.0;
    int points = 2, samples = 1, n_channels = 1, reorth_period = 1, workers = 0;
    long long steps = 1000;
    std::uint64_t seed = 1;

    auto* c_interval = app.add_subcommand(
        "interval", "Spectral bounds, critical length, and the energy interval");
    c_interval->add_option("--spec", spec_path, "Model spec JSON file")->required();
    c_interval->add_option("--delta-O", delta_O, "Log-neighborhood radius")
        ->check(CLI::PositiveNumber);

    auto* c_scan = app.add_subcommand(
        "scan", "Lie-closure verdicts across an energy grid (CSV)");
    c_scan->add_option("--spec", spec_path, "Model spec JSON file")->required();
    c_scan->add_option("--e-lo", e_lo, "Grid lower endpoint")->required();
    c_scan->add_option("--e-hi", e_hi, "Grid upper endpoint")->required();
    c_scan->add_option("--points", points, "Grid size (>= 2)")
        ->required()
        ->check(CLI::Range(2, 1000000));
    c_scan->add_option("--delta-O", delta_O, "Log-neighborhood radius")
        ->check(CLI::PositiveNumber);
    c_scan->add_option("--out", out_path, "Output CSV path")->required();
    c_scan->add_option("--workers", workers, "Worker threads (0 = auto)");

    auto* c_lyap = app.add_subcommand(
        "lyapunov", "Lyapunov spectrum sweep with separability verdicts (CSV)");
    c_lyap->add_option("--spec", spec_path, "Model spec JSON file")->required();
    c_lyap->add_option("--e-lo", e_lo, "Grid lower endpoint")->required();
    c_lyap->add_option("--e-hi", e_hi, "Grid upper endpoint")->required();
    c_lyap->add_option("--points", points, "Grid size (>= 1)")
        ->required()
        ->check(CLI::Range(1, 1000000));
    c_lyap->add_option("--steps", steps, "Cells per estimate (>= 100)")
        ->required()
        ->check(CLI::Range(100LL, 1000000000LL));
    c_lyap->add_option("--seed", seed, "Master seed");
    c_lyap->add_option("--reorth-period", reorth_period,
                       "Steps between QR reorthonormalizations (1..10)")
        ->check(CLI::Range(1, 10));
    c_lyap->add_option("--z-threshold", z_threshold, "Separability z threshold")
        ->check(CLI::PositiveNumber);
    c_lyap->add_option("--out", out_path, "Output CSV path")->required();
    c_lyap->add_option("--workers", workers, "Worker threads (0 = auto)");

    auto* c_gen = app.add_subcommand(
        "genericity", "Monte Carlo over Gaussian potentials (JSON report)");
    c_gen->add_option("--N", n_channels, "Channel count")
        ->required()
        ->check(CLI::Range(1, 20));
    c_gen->add_option("--e-lo", e_lo, "Grid lower endpoint")->required();
    c_gen->add_option("--e-hi", e_hi, "Grid upper endpoint")->required();
    c_gen->add_option("--points", points, "Energies per sample (>= 1)")
        ->required()
        ->check(CLI::Range(1, 1000000));
    c_gen->add_option("--samples", samples, "Number of sampled potentials (>= 1)")
        ->required()
        ->check(CLI::Range(1, 1000000));
    c_gen->add_option("--seed", seed, "Master seed");
    c_gen->add_option("--out", out_path, "Output JSON path")->required();
    c_gen->add_option("--workers", workers, "Worker threads (0 = auto)");

    auto* c_lie = app.add_subcommand(
        "lie-check", "Closure test of the vertex family at one energy");
    c_lie->add_option("--spec", spec_path, "Model spec JSON file")->required();
    c_lie->add_option("--E", energy, "Energy")->required();
    c_lie->add_option("--tol", tol, "Closure residual tolerance")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    // Grid endpoints must be ordered whenever a real grid is requested.
    const bool needs_grid = c_scan->parsed() || c_lyap->parsed() || c_gen->parsed();
    if (needs_grid && points >= 2 && !(e_lo < e_hi)) {
        std::cerr << "usage error: --e-lo must be < --e-hi\n";
        return kExitUsage;
    }

    try {
        if (c_interval->parsed()) return cmd_interval(spec_path, delta_O);
        if (c_scan->parsed())
            return cmd_scan(spec_path, e_lo, e_hi, points, delta_O, out_path,
                            resolve_workers(workers));
        if (c_lyap->parsed())
            return cmd_lyapunov(spec_path, e_lo, e_hi, points, steps, seed,
                                reorth_period, z_threshold, out_path,
                                resolve_workers(workers));
        if (c_gen->parsed())
            return cmd_genericity(n_channels, e_lo, e_hi, points, samples, seed,
                                  out_path, resolve_workers(workers));
        if (c_lie->parsed()) return cmd_lie_check(spec_path, energy, tol);
    } catch (const furstenberg::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
