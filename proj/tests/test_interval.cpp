#include "furstenberg/interval.hpp"

#include "furstenberg/seeds.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace furstenberg;

namespace {

ModelSpec make_spec(int N, Matrix V, double ell) {
    ModelSpec spec;
    spec.N = N;
    spec.ell = ell;
    spec.V = std::move(V);
    return spec;
}

// Independent 2x2 symmetric eigenvalue oracle (characteristic polynomial).
std::pair<double, double> eig2_closed_form(const Matrix& M) {
    const double mean = 0.5 * (M(0, 0) + M(1, 1));
    const double rad = std::sqrt(0.25 * (M(0, 0) - M(1, 1)) * (M(0, 0) - M(1, 1)) +
                                 M(0, 1) * M(0, 1));
    return {mean - rad, mean + rad};
}

}  // namespace

TEST_SUITE("interval") {

TEST_CASE("spectral bounds for the scalar free model") {
    const SpectralBounds b = spectral_bounds(make_spec(1, Matrix::Zero(1, 1), 0.5));
    CHECK(b.lambda_min == 0.0);
    CHECK(b.lambda_max == 1.0);
    CHECK(b.delta == 0.5);
    REQUIRE(b.per_config.size() == 2);
    CHECK(b.per_config.at(CellConfig({0}))(0) == 0.0);
    CHECK(b.per_config.at(CellConfig({1}))(0) == 1.0);
}

TEST_CASE("spectral bounds for V0 match the closed-form eigenvalues") {
    const ModelSpec spec = make_spec(2, canonical_V0(2), 0.1);
    const SpectralBounds b = spectral_bounds(spec);

    const Vector& e00 = b.per_config.at(CellConfig({0, 0}));
    CHECK(e00(0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(e00(1) == doctest::Approx(1.0).epsilon(1e-12));

    double lo = 1e300, hi = -1e300;
    for (const CellConfig& omega : vertex_configs(2)) {
        const auto [emin, emax] = eig2_closed_form(build_M(spec, omega, 0.0));
        lo = std::min(lo, emin);
        hi = std::max(hi, emax);
        const Vector& stored = b.per_config.at(omega);
        CHECK(stored(0) == doctest::Approx(emin).epsilon(1e-12));
        CHECK(stored(1) == doctest::Approx(emax).epsilon(1e-12));
    }
    CHECK(b.lambda_min == doctest::Approx(lo).epsilon(1e-12));
    CHECK(b.lambda_max == doctest::Approx(hi).epsilon(1e-12));
    CHECK(b.delta == doctest::Approx(0.5 * (hi - lo)).epsilon(1e-12));
}

TEST_CASE("critical length arithmetic") {
    CHECK(critical_length(make_spec(1, Matrix::Zero(1, 1), 0.5), 1.0) == 1.0);
    CHECK(critical_length_given(0.5, 0.1) == doctest::Approx(0.2));
    CHECK(critical_length_given(0.0, 0.7) == 1.0);
    CHECK_THROWS_AS(critical_length_given(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("energy interval arithmetic") {
    const EnergyInterval I = energy_interval(make_spec(1, Matrix::Zero(1, 1), 0.5), 1.0);
    CHECK(I.lo == doctest::Approx(-1.0));
    CHECK(I.hi == doctest::Approx(2.0));
    CHECK(I.contains(0.0));
    CHECK_FALSE(I.contains(2.5));

    const EnergyInterval J = energy_interval(make_spec(1, Matrix::Zero(1, 1), 0.99), 1.0);
    CHECK(J.lo == doctest::Approx(1.0 - 1.0 / 0.99));
    CHECK(J.hi == doctest::Approx(1.0 / 0.99));

    // ell = ell_C exactly: the precondition is strict.
    CHECK_THROWS_WITH_AS(energy_interval(make_spec(1, Matrix::Zero(1, 1), 1.0), 1.0),
                         doctest::Contains("ell_C"), std::invalid_argument);
}

TEST_CASE("log-neighborhood membership") {
    const ModelSpec spec = make_spec(2, canonical_V0(2), 0.1);
    const EnergyInterval I = energy_interval(spec, 1.0);
    const double mid = I.midpoint();
    for (const CellConfig& omega : vertex_configs(2))
        CHECK(in_log_neighborhood(spec, omega, mid, 1.0));

    // Norm scales linearly in ell, so membership holds eventually.
    ModelSpec tiny = spec;
    tiny.ell = 1e-4;
    CHECK(in_log_neighborhood(tiny, CellConfig({1, 1}), 50.0, 1.0));

    // Far outside the interval the block norm grows past the radius.
    const SpectralBounds b = spectral_bounds(spec);
    const double far = b.lambda_max + 10.0 / spec.ell;
    CHECK_FALSE(in_log_neighborhood(spec, CellConfig({0, 0}), far, 1.0));
}

TEST_CASE("interval properties over random instances") {
    std::mt19937_64 rng(53);
    int nonempty_seen = 0, empty_seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int N = 1 + static_cast<int>(rng() % 3);
        const double ell = 0.02 + to_unit_interval(rng());
        const double delta_O = 0.1 + 2.0 * to_unit_interval(rng());
        const ModelSpec spec = make_spec(N, sample_symmetric(N, rng()), ell);
        const double ell_C = critical_length(spec, delta_O);

        if (spec.ell < ell_C) {
            ++nonempty_seen;
            const EnergyInterval I = energy_interval(spec, delta_O);
            CHECK(I.lo <= I.hi);

            // Shrinking ell widens the interval.
            ModelSpec shorter = spec;
            shorter.ell = 0.5 * spec.ell;
            const EnergyInterval W = energy_interval(shorter, delta_O);
            CHECK(W.lo <= I.lo);
            CHECK(W.hi >= I.hi);

            // Every eigenvalue is within delta_O/ell of every interior energy.
            const SpectralBounds b = spectral_bounds(spec);
            for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                const double E = I.lo + t * (I.hi - I.lo);
                for (const auto& [omega, values] : b.per_config) {
                    for (int i = 0; i < values.size(); ++i)
                        CHECK(std::abs(values(i) - E) <=
                              delta_O / spec.ell + 1e-10);
                }
            }
        } else {
            ++empty_seen;
            CHECK_THROWS_AS(energy_interval(spec, delta_O), std::invalid_argument);
        }
    }
    CHECK(nonempty_seen > 20);
    CHECK(empty_seen > 20);
}

TEST_CASE("translation covariance under V -> V + cI") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 50; ++trial) {
        const int N = 1 + static_cast<int>(rng() % 3);
        const ModelSpec spec = make_spec(N, sample_symmetric(N, rng()), 0.05);
        const double c = 4.0 * to_unit_interval(rng()) - 2.0;
        ModelSpec shifted = spec;
        shifted.V += c * Matrix::Identity(N, N);

        const SpectralBounds b0 = spectral_bounds(spec);
        const SpectralBounds b1 = spectral_bounds(shifted);
        const double tol = 1e-10 * (1.0 + std::abs(c) + b0.lambda_max - b0.lambda_min);
        CHECK(std::abs(b1.lambda_min - b0.lambda_min - c) <= tol);
        CHECK(std::abs(b1.lambda_max - b0.lambda_max - c) <= tol);

        const EnergyInterval i0 = energy_interval(spec, 1.0);
        const EnergyInterval i1 = energy_interval(shifted, 1.0);
        CHECK(std::abs(i1.lo - i0.lo - c) <= tol);
        CHECK(std::abs(i1.hi - i0.hi - c) <= tol);
    }
}

}  // TEST_SUITE
