#include "furstenberg/lyapunov.hpp"

#include "furstenberg/errors.hpp"
#include "furstenberg/seeds.hpp"

#include "csv_util.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace furstenberg {

namespace {

bool equal_or_both_nan(double a, double b) {
    return a == b || (std::isnan(a) && std::isnan(b));
}

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::separated: return "separated";
        case Verdict::not_separated: return "not_separated";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

LyapunovEstimate lyapunov_spectrum(const ModelSpec& spec, double E,
                                   long long steps, std::uint64_t seed,
                                   int reorth_period) {
    spec.validate();
    if (reorth_period < 1 || steps < reorth_period)
        throw std::invalid_argument(
            "lyapunov_spectrum: need steps >= reorth_period >= 1");

    const int n2 = 2 * spec.N;
    // Only 2^N distinct transfer matrices exist per energy; build them once.
    std::vector<Matrix> transfer;
    for (const CellConfig& omega : vertex_configs(spec.N))
        transfer.push_back(transfer_matrix(spec, omega, E).mat());

    std::mt19937_64 rng(seed);
    const double p = spec.bernoulli_p;

    const long long total_events = (steps + reorth_period - 1) / reorth_period;
    const int nbatches =
        total_events < 20 ? static_cast<int>(total_events) : 20;

    Matrix frame = Matrix::Identity(n2, n2);
    Vector accum = Vector::Zero(n2);
    Matrix batch_accum = Matrix::Zero(nbatches, n2);
    std::vector<long long> batch_steps(nbatches, 0);
    long long event = 0;
    long long steps_since_qr = 0;

    for (long long step = 1; step <= steps; ++step) {
        std::uint64_t idx = 0;
        for (int j = 0; j < spec.N; ++j) {
            const double u = to_unit_interval(rng());
            idx = (idx << 1) | (u < p ? 1u : 0u);
        }
        frame = transfer[idx] * frame;
        ++steps_since_qr;

        if (step % reorth_period == 0 || step == steps) {
            if (!frame.allFinite()) {
                std::ostringstream msg;
                msg << "lyapunov_spectrum: overflow between reorthonormalizations "
                       "at step " << step << " (reorth_period " << reorth_period
                    << " too large)";
                throw NumericalError(msg.str());
            }
            Eigen::HouseholderQR<Matrix> qr(frame);
            Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
            frame = qr.householderQ();
            const int batch =
                static_cast<int>(event * nbatches / total_events);
            for (int i = 0; i < n2; ++i) {
                double d = R(i, i);
                if (d < 0.0) {
                    frame.col(i) = -frame.col(i);
                    d = -d;
                }
                if (!(d > 0.0)) {
                    std::ostringstream msg;
                    msg << "lyapunov_spectrum: degenerate QR factor at step "
                        << step;
                    throw NumericalError(msg.str());
                }
                const double lg = std::log(d);
                accum(i) += lg;
                batch_accum(batch, i) += lg;
            }
            batch_steps[batch] += steps_since_qr;
            steps_since_qr = 0;
            ++event;
        }
    }

    const double total_length = static_cast<double>(steps) * spec.ell;
    std::vector<double> exponents(n2), errors(n2, 0.0);
    for (int i = 0; i < n2; ++i) exponents[i] = accum(i) / total_length;

    if (nbatches >= 2) {
        for (int i = 0; i < n2; ++i) {
            double mean = 0.0;
            std::vector<double> means(nbatches);
            for (int b = 0; b < nbatches; ++b) {
                means[b] = batch_accum(b, i) /
                           (static_cast<double>(batch_steps[b]) * spec.ell);
                mean += means[b];
            }
            mean /= nbatches;
            double ss = 0.0;
            for (int b = 0; b < nbatches; ++b)
                ss += (means[b] - mean) * (means[b] - mean);
            errors[i] = std::sqrt(ss / (static_cast<double>(nbatches) *
                                        (nbatches - 1)));
        }
    }

    // Descending exponents with their standard errors kept paired.
    std::vector<int> order(n2);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return exponents[a] > exponents[b];
    });

    LyapunovEstimate est;
    est.exponents.resize(n2);
    est.std_errors.resize(n2);
    for (int i = 0; i < n2; ++i) {
        est.exponents[i] = exponents[order[i]];
        est.std_errors[i] = errors[order[i]];
    }
    est.steps = steps;
    est.seed = seed;
    est.E = E;
    est.reorth_period = reorth_period;
    return est;
}

SeparabilityReport separability_check(const LyapunovEstimate& estimate, int N,
                                      double z_threshold) {
    if (static_cast<int>(estimate.exponents.size()) != 2 * N ||
        estimate.std_errors.size() != estimate.exponents.size())
        throw std::invalid_argument("separability_check: estimate is not 2N long");

    SeparabilityReport report;
    bool bad_error = false;
    for (int i = 0; i < N; ++i) {
        const double upper = estimate.exponents[i];
        const double lower = i + 1 < N ? estimate.exponents[i + 1] : 0.0;
        const double se_upper = estimate.std_errors[i];
        const double se_lower = i + 1 < N ? estimate.std_errors[i + 1] : 0.0;
        const double gap = upper - lower;
        const double combined =
            std::sqrt(se_upper * se_upper + se_lower * se_lower);
        report.gaps.push_back(gap);
        if (combined == 0.0 || !std::isfinite(combined) || !std::isfinite(gap)) {
            bad_error = true;
            report.z_scores.push_back(std::numeric_limits<double>::quiet_NaN());
        } else {
            report.z_scores.push_back(gap / combined);
        }
    }

    if (bad_error) {
        report.verdict = Verdict::inconclusive;
    } else {
        const bool all_clear =
            std::all_of(report.z_scores.begin(), report.z_scores.end(),
                        [&](double z) { return z >= z_threshold; });
        report.verdict = all_clear ? Verdict::separated : Verdict::not_separated;
    }
    return report;
}

std::vector<SweepEntry> energy_sweep(const ModelSpec& spec,
                                     const std::vector<double>& grid,
                                     long long steps, std::uint64_t master_seed,
                                     int reorth_period, int workers) {
    spec.validate();
    if (grid.empty()) throw std::invalid_argument("energy_sweep: empty grid");

    std::vector<SweepEntry> entries(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) break;
            SweepEntry& entry = entries[i];
            entry.E = grid[i];
            entry.seed = split_seed(master_seed, i);
            try {
                entry.estimate = lyapunov_spectrum(spec, grid[i], steps,
                                                   entry.seed, reorth_period);
            } catch (const std::exception& e) {
                entry.error = e.what();
            }
        }
    };

    const int nworkers =
        std::min<std::size_t>(resolve_workers(workers), grid.size());
    std::vector<std::thread> pool;
    for (int w = 0; w < nworkers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return entries;
}

bool SweepRow::operator==(const SweepRow& other) const {
    if (!equal_or_both_nan(E, other.E) || steps != other.steps ||
        seed != other.seed || verdict != other.verdict ||
        gammas.size() != other.gammas.size() || ses.size() != other.ses.size())
        return false;
    for (std::size_t i = 0; i < gammas.size(); ++i)
        if (!equal_or_both_nan(gammas[i], other.gammas[i])) return false;
    for (std::size_t i = 0; i < ses.size(); ++i)
        if (!equal_or_both_nan(ses[i], other.ses[i])) return false;
    return true;
}

std::vector<SweepRow> sweep_rows(const std::vector<SweepEntry>& entries, int N,
                                 double z_threshold) {
    std::vector<SweepRow> rows;
    rows.reserve(entries.size());
    for (const SweepEntry& entry : entries) {
        SweepRow row;
        row.E = entry.E;
        row.seed = entry.seed;
        if (entry.estimate) {
            row.gammas = entry.estimate->exponents;
            row.ses = entry.estimate->std_errors;
            row.steps = entry.estimate->steps;
            row.verdict =
                to_string(separability_check(*entry.estimate, N, z_threshold)
                              .verdict);
        } else {
            row.gammas.assign(2 * N, std::numeric_limits<double>::quiet_NaN());
            row.ses.assign(2 * N, std::numeric_limits<double>::quiet_NaN());
            row.steps = 0;
            row.verdict = "failed: " + detail::sanitize_field(entry.error);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, int N) {
    std::ostringstream out;
    out << "E";
    for (int i = 1; i <= 2 * N; ++i) out << ",gamma_" << i;
    for (int i = 1; i <= 2 * N; ++i) out << ",se_" << i;
    out << ",steps,seed,verdict\n";
    for (const SweepRow& row : rows) {
        out << detail::fmt_double(row.E);
        for (double g : row.gammas) out << ',' << detail::fmt_double(g);
        for (double s : row.ses) out << ',' << detail::fmt_double(s);
        out << ',' << row.steps << ',' << row.seed << ','
            << detail::sanitize_field(row.verdict) << '\n';
    }
    return out.str();
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
    const std::vector<std::string> lines = detail::data_lines(text);
    if (lines.empty()) throw std::invalid_argument("sweep CSV: missing header");
    const std::vector<std::string> header = detail::split(lines[0], ',');
    int n2 = 0;
    for (const std::string& h : header)
        if (h.rfind("gamma_", 0) == 0) ++n2;
    if (n2 == 0 || header.size() != 4 + 2 * static_cast<std::size_t>(n2))
        throw std::invalid_argument("sweep CSV: malformed header");

    std::vector<SweepRow> rows;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const std::vector<std::string> f = detail::split(lines[li], ',');
        if (f.size() != header.size())
            throw std::invalid_argument("sweep CSV: wrong field count in row");
        SweepRow row;
        std::size_t k = 0;
        row.E = detail::parse_double(f[k++]);
        for (int i = 0; i < n2; ++i) row.gammas.push_back(detail::parse_double(f[k++]));
        for (int i = 0; i < n2; ++i) row.ses.push_back(detail::parse_double(f[k++]));
        row.steps = std::stoll(f[k++]);
        row.seed = std::stoull(f[k++]);
        row.verdict = f[k++];
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace furstenberg
