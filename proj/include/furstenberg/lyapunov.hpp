// lyapunov.hpp — QR-reorthonormalized estimator for the Lyapunov spectrum of
// random transfer-matrix products, and the separability verdict.
#pragma once

#include "furstenberg/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace furstenberg {

// Exponent estimates per unit length, sorted descending, with batch-means
// standard errors.
struct LyapunovEstimate {
    std::vector<double> exponents;
    std::vector<double> std_errors;
    long long steps = 0;
    std::uint64_t seed = 0;
    double E = 0.0;
    int reorth_period = 1;
};

enum class Verdict { separated, not_separated, inconclusive };

std::string to_string(Verdict v);

// Gaps (gamma_1 - gamma_2, ..., gamma_{N-1} - gamma_N, gamma_N - 0) and their
// z-scores (gap over combined standard error).
struct SeparabilityReport {
    std::vector<double> gaps;
    std::vector<double> z_scores;
    Verdict verdict = Verdict::inconclusive;
};

// Propagates an orthonormal 2N x 2N frame through i.i.d. Bernoulli(p)
// transfer matrices, re-factorizing (QR, positive diagonal) every
// reorth_period steps and accumulating the log diagonal.  Deterministic
// given the seed.  Throws NumericalError on overflow between
// reorthonormalizations, naming the step.
LyapunovEstimate lyapunov_spectrum(const ModelSpec& spec, double E,
                                   long long steps, std::uint64_t seed,
                                   int reorth_period = 1);

// Verdict "separated" iff every z-score >= z_threshold; "inconclusive" when
// a combined standard error is zero or non-finite.
SeparabilityReport separability_check(const LyapunovEstimate& estimate, int N,
                                      double z_threshold = 3.0);

// One grid entry of an energy sweep; `error` is set when the per-energy
// estimate failed (the sweep itself continues).  The derived seed is recorded
// even for failures so every entry can be reproduced in isolation.
struct SweepEntry {
    double E = 0.0;
    std::uint64_t seed = 0;
    std::optional<LyapunovEstimate> estimate;
    std::string error;
};

// One estimate per energy, seeded by split_seed(master, index): results are
// independent of evaluation order and worker count.  workers <= 0 means one
// worker per hardware thread.
std::vector<SweepEntry> energy_sweep(const ModelSpec& spec,
                                     const std::vector<double>& grid,
                                     long long steps, std::uint64_t master_seed,
                                     int reorth_period = 1, int workers = 0);

// CSV schema: E, gamma_1..gamma_2N, se_1..se_2N, steps, seed, verdict.
struct SweepRow {
    double E = 0.0;
    std::vector<double> gammas;
    std::vector<double> ses;
    long long steps = 0;
    std::uint64_t seed = 0;
    std::string verdict;

    bool operator==(const SweepRow& other) const;
};

std::vector<SweepRow> sweep_rows(const std::vector<SweepEntry>& entries, int N,
                                 double z_threshold = 3.0);
std::string sweep_csv(const std::vector<SweepRow>& rows, int N);
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

}  // namespace furstenberg
