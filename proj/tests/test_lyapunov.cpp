#include "furstenberg/lyapunov.hpp"

#include "furstenberg/errors.hpp"
#include "furstenberg/seeds.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace furstenberg;

namespace {

ModelSpec make_spec(int N, Matrix V, double ell, double p) {
    ModelSpec spec;
    spec.N = N;
    spec.ell = ell;
    spec.V = std::move(V);
    spec.bernoulli_p = p;
    return spec;
}

ModelSpec deterministic_free(double ell) {
    return make_spec(1, Matrix::Zero(1, 1), ell, 0.0);
}

LyapunovEstimate make_estimate(std::vector<double> gammas, double se) {
    LyapunovEstimate est;
    est.exponents = std::move(gammas);
    est.std_errors.assign(est.exponents.size(), se);
    est.steps = 1000;
    return est;
}

}  // namespace

TEST_SUITE("lyapunov") {

TEST_CASE("deterministic closed forms: gamma = sqrt(-E)") {
    const LyapunovEstimate a =
        lyapunov_spectrum(deterministic_free(1.0), -1.0, 10000, 7, 1);
    CHECK(std::abs(a.exponents.front() - 1.0) <= 1e-3);

    const LyapunovEstimate b =
        lyapunov_spectrum(deterministic_free(0.5), -4.0, 10000, 7, 1);
    CHECK(std::abs(b.exponents.front() - 2.0) <= 1e-3);
}

TEST_CASE("estimates are deterministic given the seed") {
    const ModelSpec spec = make_spec(2, canonical_V0(2), 0.1, 0.5);
    const LyapunovEstimate a = lyapunov_spectrum(spec, 0.5, 2000, 123, 1);
    const LyapunovEstimate b = lyapunov_spectrum(spec, 0.5, 2000, 123, 1);
    CHECK(a.exponents == b.exponents);
    CHECK(a.std_errors == b.std_errors);
    const LyapunovEstimate c = lyapunov_spectrum(spec, 0.5, 2000, 124, 1);
    CHECK(a.exponents != c.exponents);
}

TEST_CASE("exponents sorted descending with symplectic pairing") {
    const ModelSpec spec = make_spec(2, canonical_V0(2), 0.1, 0.5);
    const LyapunovEstimate est = lyapunov_spectrum(spec, 0.5, 50000, 42, 1);
    REQUIRE(est.exponents.size() == 4);
    for (int i = 0; i + 1 < 4; ++i)
        CHECK(est.exponents[i] >= est.exponents[i + 1]);
    for (int i = 0; i < 4; ++i) {
        const double pair_sum = est.exponents[i] + est.exponents[3 - i];
        const double combined = 3.0 * std::sqrt(est.std_errors[i] * est.std_errors[i] +
                                                est.std_errors[3 - i] *
                                                    est.std_errors[3 - i]);
        CHECK(std::abs(pair_sum) <= combined);
    }
}

TEST_CASE("reorthonormalization period does not change the exponents") {
    const ModelSpec spec = make_spec(2, canonical_V0(2), 0.2, 0.5);
    const LyapunovEstimate a = lyapunov_spectrum(spec, -0.5, 1000, 9, 1);
    const LyapunovEstimate b = lyapunov_spectrum(spec, -0.5, 1000, 9, 5);
    REQUIRE(a.exponents.size() == b.exponents.size());
    for (std::size_t i = 0; i < a.exponents.size(); ++i)
        CHECK(std::abs(a.exponents[i] - b.exponents[i]) <= 1e-9);
}

TEST_CASE("doubling steps moves estimates by few standard errors") {
    const ModelSpec spec = make_spec(2, canonical_V0(2), 0.1, 0.5);
    const LyapunovEstimate a = lyapunov_spectrum(spec, -2.0, 20000, 77, 1);
    const LyapunovEstimate b = lyapunov_spectrum(spec, -2.0, 40000, 77, 1);
    for (std::size_t i = 0; i < a.exponents.size(); ++i) {
        const double combined = std::sqrt(a.std_errors[i] * a.std_errors[i] +
                                          b.std_errors[i] * b.std_errors[i]);
        CHECK(std::abs(a.exponents[i] - b.exponents[i]) <= 5.0 * combined);
    }
}

TEST_CASE("per-unit-length normalization is scale covariant when deterministic") {
    const LyapunovEstimate a =
        lyapunov_spectrum(deterministic_free(0.25), -2.0, 8000, 5, 1);
    const LyapunovEstimate b =
        lyapunov_spectrum(deterministic_free(0.5), -2.0, 4000, 5, 1);
    CHECK(std::abs(a.exponents.front() - std::sqrt(2.0)) <= 1e-3);
    CHECK(std::abs(a.exponents.front() - b.exponents.front()) <= 1e-6);
}

TEST_CASE("overflow between reorthonormalizations names the step") {
    const ModelSpec spec = make_spec(1, Matrix::Zero(1, 1), 1.0, 0.0);
    CHECK_THROWS_WITH_AS(lyapunov_spectrum(spec, -1e4, 100, 1, 10),
                         doctest::Contains("step"), NumericalError);
}

TEST_CASE("argument validation") {
    const ModelSpec spec = deterministic_free(1.0);
    CHECK_THROWS_AS(lyapunov_spectrum(spec, 0.0, 5, 1, 10), std::invalid_argument);
    CHECK_THROWS_AS(lyapunov_spectrum(spec, 0.0, 100, 1, 0), std::invalid_argument);
}

TEST_CASE("separability_check verdicts") {
    const SeparabilityReport sep =
        separability_check(make_estimate({2.0, 1.0, -1.0, -2.0}, 0.01), 2);
    CHECK(sep.verdict == Verdict::separated);
    REQUIRE(sep.gaps.size() == 2);
    CHECK(sep.gaps[0] == doctest::Approx(1.0));
    CHECK(sep.gaps[1] == doctest::Approx(1.0));
    CHECK(sep.z_scores[0] > 3.0);

    CHECK(separability_check(make_estimate({1.0, 1.0, -1.0, -1.0}, 0.01), 2)
              .verdict == Verdict::not_separated);
    CHECK(separability_check(make_estimate({2.0, 1.0, -1.0, -2.0}, 0.0), 2)
              .verdict == Verdict::inconclusive);
    CHECK_THROWS_AS(separability_check(make_estimate({1.0, -1.0}, 0.01), 2),
                    std::invalid_argument);
    CHECK(to_string(Verdict::separated) == "separated");
}

TEST_CASE("sweep of one energy equals a direct call with the derived seed") {
    const ModelSpec spec = make_spec(2, canonical_V0(2), 0.1, 0.5);
    const auto entries = energy_sweep(spec, {0.5}, 2000, 99, 1, 1);
    REQUIRE(entries.size() == 1);
    REQUIRE(entries[0].estimate.has_value());
    const LyapunovEstimate direct =
        lyapunov_spectrum(spec, 0.5, 2000, split_seed(99, 0), 1);
    CHECK(entries[0].estimate->exponents == direct.exponents);
    CHECK(entries[0].estimate->std_errors == direct.std_errors);
    CHECK(entries[0].seed == split_seed(99, 0));
}

TEST_CASE("sweep results are independent of the worker count") {
    const ModelSpec spec = make_spec(2, canonical_V0(2), 0.1, 0.5);
    const std::vector<double> grid{-1.0, -0.5, 0.0, 0.5, 1.0};
    const auto one = energy_sweep(spec, grid, 1000, 7, 1, 1);
    const auto four = energy_sweep(spec, grid, 1000, 7, 1, 4);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        REQUIRE(one[i].estimate.has_value());
        REQUIRE(four[i].estimate.has_value());
        CHECK(one[i].estimate->exponents == four[i].estimate->exponents);
        CHECK(one[i].estimate->std_errors == four[i].estimate->std_errors);
    }
}

TEST_CASE("sweep records per-energy failures and continues") {
    const ModelSpec spec = make_spec(1, Matrix::Zero(1, 1), 1.0, 0.0);
    const auto entries = energy_sweep(spec, {-1.0, -1e9}, 1000, 3, 1, 2);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].estimate.has_value());
    CHECK_FALSE(entries[1].estimate.has_value());
    CHECK_FALSE(entries[1].error.empty());
}

TEST_CASE("sweep CSV round-trips including failure rows") {
    const ModelSpec spec = make_spec(1, Matrix::Zero(1, 1), 1.0, 0.5);
    const auto entries = energy_sweep(spec, {-1.0, -1e9, 0.25}, 1000, 11, 1, 2);
    const auto rows = sweep_rows(entries, spec.N);
    const std::string csv = sweep_csv(rows, spec.N);
    const auto parsed = parse_sweep_csv(csv);
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(parsed[i] == rows[i]);
}

}  // TEST_SUITE
