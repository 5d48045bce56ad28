#include "furstenberg/scanner.hpp"

#include "furstenberg/interval.hpp"
#include "furstenberg/matexp.hpp"
#include "furstenberg/seeds.hpp"

#include "csv_util.hpp"

#include <json.hpp>

#include <atomic>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace furstenberg {

namespace {

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void run_indexed(std::size_t count, int workers,
                 const std::function<void(std::size_t)>& body) {
    std::atomic<std::size_t> next{0};
    auto loop = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            body(i);
        }
    };
    const int nworkers = static_cast<int>(
        std::min<std::size_t>(resolve_workers(workers), count));
    std::vector<std::thread> pool;
    for (int w = 0; w < nworkers; ++w) pool.emplace_back(loop);
    for (auto& t : pool) t.join();
}

// Vertex generator family {X_omega(E, V)}.
std::vector<SpAlgebraElement> vertex_generators(const ModelSpec& spec, double E) {
    std::vector<SpAlgebraElement> generators;
    for (const CellConfig& omega : vertex_configs(spec.N))
        generators.push_back(build_X(spec, omega, E));
    return generators;
}

// "Solidly generates": full dimension and no near-threshold residual.
bool solid_generation(const ModelSpec& spec, double E) {
    const LieSpan span = lie_closure(vertex_generators(spec, E));
    return span.dim == span.target_dim && !span.indeterminate;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

bool parse_bool(const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw std::invalid_argument("CSV: bad boolean: " + s);
}

}  // namespace

std::vector<ScanRecord> scan_energies(const ModelSpec& spec,
                                      const std::vector<double>& grid,
                                      double delta_O, int workers) {
    spec.validate();
    if (grid.empty()) throw std::invalid_argument("scan_energies: empty grid");
    if (!(delta_O > 0.0))
        throw std::invalid_argument("scan_energies: delta_O must be > 0");

    // Interval endpoints evaluated directly: an empty interval (ell >= ell_C)
    // simply never contains a grid energy.
    const SpectralBounds bounds = spectral_bounds(spec);
    const double lo = bounds.lambda_max - delta_O / spec.ell;
    const double hi = bounds.lambda_min + delta_O / spec.ell;
    const std::vector<CellConfig> configs = vertex_configs(spec.N);

    std::vector<ScanRecord> records(grid.size());
    run_indexed(grid.size(), workers, [&](std::size_t i) {
        ScanRecord& rec = records[i];
        const double E = grid[i];
        rec.E = E;
        try {
            std::vector<SpAlgebraElement> generators;
            bool norm_ok = true;
            for (const CellConfig& omega : configs) {
                generators.push_back(build_X(spec, omega, E));
                norm_ok = norm_ok &&
                          spec.ell * operator_norm(generators.back().mat()) <=
                              delta_O;
            }
            const LieSpan span = lie_closure(generators);
            rec.closure_dim = span.dim;
            rec.generates = span.dim == span.target_dim;
            rec.indeterminate = span.indeterminate;
            rec.in_interval = lo <= E && E <= hi;
            rec.norm_check = norm_ok;
        } catch (const std::exception& e) {
            rec.closure_dim = -1;
            rec.error = e.what();
        }
    });
    return records;
}

double bisect_verdict(const std::function<bool(double)>& verdict, double lo,
                      double hi, double tol_E) {
    if (!(tol_E > 0.0))
        throw std::invalid_argument("bisect_verdict: tol_E must be > 0");
    if (!(lo < hi)) throw std::invalid_argument("bisect_verdict: need lo < hi");
    const bool at_lo = verdict(lo);
    if (at_lo == verdict(hi))
        throw std::invalid_argument(
            "bisect_verdict: verdict does not change across the bracket");
    while (hi - lo > tol_E) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket at floating-point limit
        if (verdict(mid) == at_lo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double refine_critical(const ModelSpec& spec, double bracket_lo,
                       double bracket_hi, double tol_E) {
    spec.validate();
    return bisect_verdict([&](double E) { return solid_generation(spec, E); },
                          bracket_lo, bracket_hi, tol_E);
}

GenericityReport genericity_trial(int N, const std::vector<double>& energy_grid,
                                  int samples, std::uint64_t master_seed,
                                  int workers) {
    if (samples < 1)
        throw std::invalid_argument("genericity_trial: samples must be >= 1");
    if (energy_grid.empty())
        throw std::invalid_argument("genericity_trial: empty energy grid");
    if (N < 1 || N > 20)
        throw std::invalid_argument("genericity_trial: N must lie in [1, 20]");

    // Per-sample failure lists, merged by index afterwards so the report is
    // independent of scheduling.
    std::vector<std::vector<std::pair<std::uint64_t, double>>> failures(samples);
    run_indexed(static_cast<std::size_t>(samples), workers, [&](std::size_t s) {
        const std::uint64_t seed = split_seed(master_seed, s);
        ModelSpec spec;
        spec.N = N;
        spec.ell = 1.0;
        spec.V = sample_symmetric(N, seed);
        for (double E : energy_grid) {
            if (!generates_sp(vertex_generators(spec, E)))
                failures[s].emplace_back(seed, E);
        }
    });

    GenericityReport report;
    report.samples = samples;
    report.energies_per_sample = static_cast<int>(energy_grid.size());
    for (auto& list : failures)
        report.failures.insert(report.failures.end(), list.begin(), list.end());
    report.success_fraction =
        1.0 - static_cast<double>(report.failures.size()) /
                  (static_cast<double>(samples) * energy_grid.size());
    return report;
}

std::string scan_csv(const std::vector<ScanRecord>& records) {
    std::ostringstream out;
    out << "E,closure_dim,generates,indeterminate,in_interval,norm_check\n";
    for (const ScanRecord& rec : records) {
        out << detail::fmt_double(rec.E) << ',' << rec.closure_dim << ','
            << bool_str(rec.generates) << ',' << bool_str(rec.indeterminate)
            << ',' << bool_str(rec.in_interval) << ',' << bool_str(rec.norm_check);
        if (!rec.error.empty()) out << ',' << detail::sanitize_field(rec.error);
        out << '\n';
    }
    return out.str();
}

std::vector<ScanRecord> parse_scan_csv(const std::string& text) {
    const std::vector<std::string> lines = detail::data_lines(text);
    if (lines.empty()) throw std::invalid_argument("scan CSV: missing header");
    std::vector<ScanRecord> records;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const std::vector<std::string> f = detail::split(lines[li], ',');
        if (f.size() != 6 && f.size() != 7)
            throw std::invalid_argument("scan CSV: wrong field count in row");
        ScanRecord rec;
        rec.E = detail::parse_double(f[0]);
        rec.closure_dim = std::stoi(f[1]);
        rec.generates = parse_bool(f[2]);
        rec.indeterminate = parse_bool(f[3]);
        rec.in_interval = parse_bool(f[4]);
        rec.norm_check = parse_bool(f[5]);
        if (f.size() == 7) rec.error = f[6];
        records.push_back(std::move(rec));
    }
    return records;
}

std::string genericity_json(const GenericityReport& report) {
    nlohmann::json doc;
    doc["samples"] = report.samples;
    doc["energies_per_sample"] = report.energies_per_sample;
    auto failures = nlohmann::json::array();
    for (const auto& [seed, E] : report.failures)
        failures.push_back({{"seed", seed}, {"E", E}});
    doc["failures"] = std::move(failures);
    doc["success_fraction"] = report.success_fraction;
    return doc.dump(2) + "\n";
}

GenericityReport parse_genericity_json(const std::string& text) {
    std::string payload;
    for (const std::string& line : detail::data_lines(text)) payload += line + "\n";
    const nlohmann::json doc = nlohmann::json::parse(payload);
    GenericityReport report;
    report.samples = doc.at("samples").get<int>();
    report.energies_per_sample = doc.at("energies_per_sample").get<int>();
    for (const auto& item : doc.at("failures"))
        report.failures.emplace_back(item.at("seed").get<std::uint64_t>(),
                                     item.at("E").get<double>());
    report.success_fraction = doc.at("success_fraction").get<double>();
    return report;
}

}  // namespace furstenberg
