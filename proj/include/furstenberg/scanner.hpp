// scanner.hpp — Energy-grid scans of the generation verdict, bisection of
// verdict boundaries (candidate critical energies), and the genericity
// Monte Carlo over random symmetric potentials.
#pragma once

#include "furstenberg/liealg.hpp"
#include "furstenberg/model.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace furstenberg {

// Per-energy verdict: closure dimension, generation flag, the near-threshold
// indeterminate flag, and both interval predicates (endpoint membership and
// the log-neighborhood norm bound), reported side by side.
struct ScanRecord {
    double E = 0.0;
    int closure_dim = 0;
    bool generates = false;
    bool indeterminate = false;
    bool in_interval = false;
    bool norm_check = false;
    std::string error;  // nonempty when this energy's computation failed

    bool operator==(const ScanRecord& other) const = default;
};

std::vector<ScanRecord> scan_energies(const ModelSpec& spec,
                                      const std::vector<double>& grid,
                                      double delta_O, int workers = 0);

// Bisection on a boolean verdict function of energy; requires differing
// verdicts at the bracket ends, narrows to width tol_E, returns the midpoint.
double bisect_verdict(const std::function<bool(double)>& verdict, double lo,
                      double hi, double tol_E);

// Bisection of the generation verdict of spec's vertex family ("generates"
// vs "does not or indeterminate").  Precondition: verdict classes differ at
// the bracket ends.
double refine_critical(const ModelSpec& spec, double bracket_lo,
                       double bracket_hi, double tol_E);

// Outcome of the genericity Monte Carlo: Gaussian-sampled V, generation
// tested at each grid energy; failures carry the V seed for reproduction.
struct GenericityReport {
    int samples = 0;
    int energies_per_sample = 0;
    std::vector<std::pair<std::uint64_t, double>> failures;  // (seed, E)
    double success_fraction = 1.0;

    bool operator==(const GenericityReport& other) const = default;
};

GenericityReport genericity_trial(int N, const std::vector<double>& energy_grid,
                                  int samples, std::uint64_t master_seed,
                                  int workers = 0);

// CSV schema: E, closure_dim, generates, indeterminate, in_interval, norm_check.
std::string scan_csv(const std::vector<ScanRecord>& records);
std::vector<ScanRecord> parse_scan_csv(const std::string& text);

std::string genericity_json(const GenericityReport& report);
GenericityReport parse_genericity_json(const std::string& text);

}  // namespace furstenberg
