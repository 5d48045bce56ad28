#include "furstenberg/interval.hpp"

#include "furstenberg/matexp.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace furstenberg {

SpectralBounds spectral_bounds(const ModelSpec& spec) {
    spec.validate();
    SpectralBounds bounds;
    bounds.lambda_min = std::numeric_limits<double>::infinity();
    bounds.lambda_max = -std::numeric_limits<double>::infinity();
    for (const CellConfig& omega : vertex_configs(spec.N)) {
        const EigenDecomposition dec = eigh(build_M(spec, omega, 0.0));
        bounds.lambda_min = std::min(bounds.lambda_min, dec.values(0));
        bounds.lambda_max = std::max(bounds.lambda_max, dec.values(spec.N - 1));
        bounds.per_config.emplace(omega, dec.values);
    }
    bounds.delta = 0.5 * (bounds.lambda_max - bounds.lambda_min);
    return bounds;
}

double critical_length_given(double delta, double delta_O) {
    if (!(delta_O > 0.0))
        throw std::invalid_argument("critical_length: delta_O must be > 0");
    if (delta < 0.0) throw std::invalid_argument("critical_length: delta must be >= 0");
    if (delta == 0.0) return 1.0;
    return std::min(1.0, delta_O / delta);
}

double critical_length(const ModelSpec& spec, double delta_O) {
    return critical_length_given(spectral_bounds(spec).delta, delta_O);
}

EnergyInterval energy_interval(const ModelSpec& spec, double delta_O) {
    const SpectralBounds bounds = spectral_bounds(spec);
    const double ell_C = critical_length_given(bounds.delta, delta_O);
    if (!(spec.ell < ell_C)) {
        std::ostringstream msg;
        msg << "energy_interval: ell (" << spec.ell << ") >= ell_C (" << ell_C
            << ")";
        throw std::invalid_argument(msg.str());
    }
    EnergyInterval interval;
    interval.lo = bounds.lambda_max - delta_O / spec.ell;
    interval.hi = bounds.lambda_min + delta_O / spec.ell;
    interval.delta_O = delta_O;
    interval.ell = spec.ell;
    return interval;
}

bool in_log_neighborhood(const ModelSpec& spec, const CellConfig& omega,
                         double E, double delta_O) {
    if (!(delta_O > 0.0))
        throw std::invalid_argument("in_log_neighborhood: delta_O must be > 0");
    const SpAlgebraElement X = build_X(spec, omega, E);
    return spec.ell * operator_norm(X.mat()) <= delta_O;
}

}  // namespace furstenberg
