#include <doctest.h>

#include <cmath>
#include <limits>

#include "ladderjc/fock.hpp"

using namespace ladderjc;

TEST_CASE("coherent amplitudes follow the Poisson weights") {
    const complex alpha{3.0, -1.5};
    const auto psi = coherent_amplitudes(alpha, 60);
    const double r2 = std::norm(alpha);
    for (int n = 0; n <= 60; ++n) {
        const double log_mag = -0.5 * r2 + n * std::log(std::abs(alpha)) - 0.5 * std::lgamma(n + 1.0);
        const complex expected = std::polar(std::exp(log_mag), n * std::arg(alpha));
        CHECK(std::abs(psi[n] - expected) < 1e-14);
    }
    CHECK(psi.norm_squared() == doctest::Approx(1.0 - poisson_tail(r2, 60)).epsilon(1e-14));
}

TEST_CASE("coherent amplitudes at large photon numbers do not overflow") {
    const auto psi = coherent_amplitudes(complex{20.0, 0.0}, 900);
    CHECK(psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    const auto dist = psi.distribution();
    const auto m = distribution_moments(dist);
    CHECK(m.mean == doctest::Approx(400.0).epsilon(1e-10));
    CHECK(m.variance() == doctest::Approx(400.0).epsilon(1e-9));
}

TEST_CASE("zero amplitude gives the vacuum") {
    const auto psi = coherent_amplitudes(complex{}, 5);
    CHECK(psi[0] == complex{1.0, 0.0});
    for (int n = 1; n <= 5; ++n) CHECK(psi[n] == complex{});
}

TEST_CASE("Fock vectors and their checks") {
    const auto f = TruncatedFockVector::fock(3, 6);
    CHECK(f.n_max() == 6);
    CHECK(f[3] == complex{1.0, 0.0});
    CHECK(f[7] == complex{});
    CHECK_THROWS_AS(TruncatedFockVector::fock(7, 6), std::invalid_argument);
    CHECK_THROWS_AS(TruncatedFockVector({}), std::invalid_argument);
    CHECK_THROWS_AS(TruncatedFockVector({1.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(TruncatedFockVector({std::numeric_limits<double>::quiet_NaN()}), std::invalid_argument);
    const auto n = TruncatedFockVector({0.3, 0.4}).normalized();
    CHECK(n.norm_squared() == doctest::Approx(1.0));
    CHECK_THROWS((void)TruncatedFockVector({0.0, 0.0}).normalized());
}

TEST_CASE("photon distribution moments") {
    const PhotonDistribution d({0.25, 0.5, 0.25});
    const auto m = distribution_moments(d);
    CHECK(m.mean == doctest::Approx(1.0));
    CHECK(m.variance() == doctest::Approx(0.5));
    CHECK(d[5] == 0.0);
    CHECK(d[-1] == 0.0);
    CHECK_THROWS(PhotonDistribution({-0.1, 1.1}));
}

TEST_CASE("Poisson tail regression") {
    CHECK(poisson_tail(16.0, 64) == doctest::Approx(3.3318199e-20).epsilon(1e-6));
    CHECK(poisson_tail(0.0, 0) == 0.0);
    CHECK(poisson_tail(1.0, 0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
    CHECK(poisson_tail(400.0, 10) == doctest::Approx(1.0));
}

TEST_CASE("truncation suggestion") {
    CHECK(suggest_truncation(complex{4.0, 0.0}, 1e-12) == 51);
    CHECK(suggest_truncation(complex{0.0, 4.0}, 1e-6) == 41);  // Poisson tail gives 38, the width floor wins
    CHECK(suggest_truncation(complex{}, 1e-12) == 6);
    CHECK(poisson_tail(16.0, suggest_truncation(complex{4.0, 0.0})) < 1e-12);
    CHECK_THROWS_AS(suggest_truncation(complex{1.0, 0.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(suggest_truncation(complex{1.0, 0.0}, 1.0), std::invalid_argument);
}
