// interval.hpp — Spectral bounds over the vertex configurations, the critical
// length ell_C, the explicit energy interval I(N, ell), and the
// log-neighborhood membership test.
#pragma once

#include "furstenberg/model.hpp"

#include <map>

namespace furstenberg {

// Eigenvalue extremes of M_omega(0) = V + diag(omega) over all vertices.
struct SpectralBounds {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double delta = 0.0;  // (lambda_max - lambda_min) / 2
    std::map<CellConfig, Vector> per_config;  // sorted eigenvalues per vertex
};

// [lambda_max - delta_O/ell, lambda_min + delta_O/ell].
struct EnergyInterval {
    double lo = 0.0;
    double hi = 0.0;
    double delta_O = 0.0;
    double ell = 0.0;

    bool contains(double E) const { return lo <= E && E <= hi; }
    double midpoint() const { return 0.5 * (lo + hi); }
};

SpectralBounds spectral_bounds(const ModelSpec& spec);

// min(1, delta_O / delta); ell_C = 1 when delta = 0.
double critical_length_given(double delta, double delta_O);
double critical_length(const ModelSpec& spec, double delta_O);

// Requires spec.ell < critical_length(spec, delta_O); otherwise throws
// std::invalid_argument naming both values.
EnergyInterval energy_interval(const ModelSpec& spec, double delta_O);

// ell * ||X_omega(E,V)||_2 <= delta_O, the ball membership behind
// "ell X in log O" with the Euclidean-induced matrix norm.
bool in_log_neighborhood(const ModelSpec& spec, const CellConfig& omega,
                         double E, double delta_O);

}  // namespace furstenberg
