#include <doctest.h>

#include <random>

#include "ladderjc/wigner.hpp"
#include "support.hpp"

using namespace ladderjc;

namespace {

FieldSector coherent_sector(complex alpha, int n_max) {
    const auto psi = coherent_amplitudes(alpha, n_max).normalized();
    return {psi.amplitudes().begin(), psi.amplitudes().end()};
}

double gaussian(complex beta, complex center) { return kWignerBound * std::exp(-2.0 * std::norm(beta - center)); }

TriLevelState reference_state(int level, double t) {
    const auto s0 = initial_state(coherent_amplitudes(complex{4.0, 0.0}, 64).normalized(), AtomicPreparation::level(level));
    return evolve(s0, ModelParams{0.3, 0.3, 1.0}, t);
}

}  // namespace

TEST_CASE("vacuum and coherent states are Gaussians") {
    const std::vector<FieldSector> vac{{1.0}};
    CHECK(wigner_series(vac, complex{}).value == doctest::Approx(kWignerBound).epsilon(1e-12));
    CHECK(wigner_series(vac, complex{0.7, -0.2}).value == doctest::Approx(gaussian({0.7, -0.2}, {})).epsilon(1e-12));

    const complex alpha{4.0, 0.0};
    const std::vector<FieldSector> coh{coherent_sector(alpha, 120)};
    for (complex beta : {alpha, complex{3.5, 0.4}, complex{-1.0, 2.0}, complex{4.2, -0.3}}) {
        CHECK(std::abs(wigner_series(coh, beta).value - gaussian(beta, alpha)) < 1e-12);
    }
}

TEST_CASE("single-photon state is negative at the origin") {
    const std::vector<FieldSector> one{{0.0, 1.0}};
    CHECK(wigner_series(one, complex{}).value == doctest::Approx(-kWignerBound).epsilon(1e-12));
    const complex beta{0.4, 0.3};
    const double r2 = std::norm(beta);
    CHECK(wigner_series(one, beta).value == doctest::Approx(kWignerBound * (4.0 * r2 - 1.0) * std::exp(-2.0 * r2)));
}

TEST_CASE("displaced-number overlaps match a dense exponential") {
    const int dim = 160;
    for (complex beta : {complex{0.3, 0.0}, complex{1.2, -0.7}, complex{-2.0, 1.5}}) {
        // D(-beta) = exp(-i H t) with t = 1, H = i(-beta a^dag + beta* a)
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
        for (int k = 0; k + 1 < dim; ++k) {
            const double s = std::sqrt(k + 1.0);
            h(k + 1, k) = complex{0.0, 1.0} * (-beta) * s;
            h(k, k + 1) = complex{0.0, -1.0} * std::conj(-beta) * s;
        }
        const Eigen::MatrixXcd d = testing::expm_taylor(h, 1.0);
        double worst = 0.0;
        for (int k = 0; k <= 60; ++k)
            for (int n = 0; n <= 60; ++n) worst = std::max(worst, std::abs(displaced_number_overlap(beta, k, n) - d(k, n)));
        CHECK(worst < 1e-11);
    }
}

TEST_CASE("overlap rows stay finite far from the origin") {
    const complex beta{9.0, 9.0};
    double row = 0.0;
    for (int n = 0; n < 2500; ++n) {
        const complex c = displaced_number_overlap(beta, 500, n);
        REQUIRE(std::isfinite(c.real()));
        row += std::norm(c);
    }
    CHECK(row == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("series and parity forms agree on random states") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> coord(-4.0, 4.0);
    double worst = 0.0;
    for (int state = 0; state < 4; ++state) {
        std::vector<FieldSector> sectors;
        for (int s = 0; s < 3; ++s) {
            auto amps = testing::random_amplitudes(rng, 15 + 5 * s);
            for (auto& a : amps) a *= std::sqrt(1.0 / 3.0);
            sectors.push_back(amps);
        }
        for (int p = 0; p < 8; ++p) {
            const complex beta{coord(rng), coord(rng)};
            worst = std::max(worst, std::abs(wigner_series(sectors, beta).value - wigner_parity_form(sectors, beta)));
        }
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("reduced Wigner integrates to one and sectors add up") {
    const PhaseSpaceGrid grid{-9.0, 9.0, -9.0, 9.0, 91, 91};
    const auto state = reference_state(3, 18.0);
    const auto fields = wigner_sector_fields(state, grid);
    const auto reduced = combine_reduced(fields);
    CHECK(reduced.integral() == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(reduced.max() <= kWignerBound + 1e-12);
    CHECK(reduced.min() >= -kWignerBound - 1e-12);
    CHECK_FALSE(reduced.tail_warning());
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double sum = fields.sectors[0].values[i] + fields.sectors[1].values[i] + fields.sectors[2].values[i];
        worst = std::max(worst, std::abs(sum - reduced.values[i]));
    }
    CHECK(worst <= 1e-12);
    CHECK(fields.norms[0] + fields.norms[1] + fields.norms[2] == doctest::Approx(1.0).epsilon(1e-12));

    const auto level3 = select_conditioned(fields, 3, true);
    CHECK(level3.integral() == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(level3.kind == WignerKind::level3);
    CHECK(level3.normalized);
}

TEST_CASE("conditioning on an empty level") {
    const PhaseSpaceGrid grid{-1.0, 1.0, -1.0, 1.0, 3, 3};
    const auto s = initial_state(coherent_amplitudes(complex{1.0, 0.0}, 20).normalized(), AtomicPreparation::level(3));
    CHECK_THROWS_AS(wigner_conditioned(s, 1, true, grid), EmptySectorError);
    const auto raw = wigner_conditioned(s, 1, false, grid);
    for (double v : raw.values) CHECK(v == 0.0);
    CHECK_THROWS(wigner_conditioned(s, 4, false, grid));
}

TEST_CASE("lab-frame sampling rotates the interaction-picture field") {
    // with g = 0 a coherent field just rotates at omega_c in the lab frame
    const double omega_c = 0.3;
    const double t = 2.0;
    const complex alpha{2.0, 0.5};
    const auto s0 = initial_state(coherent_amplitudes(alpha, 40).normalized(), AtomicPreparation::level(2));
    const auto s = evolve(s0, ModelParams{omega_c, omega_c, 0.0}, t);
    const complex lab_center = alpha * std::exp(complex{0.0, -omega_c * t});
    const PhaseSpaceGrid grid{lab_center.real(), lab_center.real() + 1.0, lab_center.imag(), lab_center.imag() + 1.0, 2, 2};
    SeriesOptions opts;
    opts.frame_rotation = omega_c * t;
    const auto w = wigner_reduced(s, grid, opts);
    CHECK(w.at(0, 0) == doctest::Approx(kWignerBound).epsilon(1e-10));
    CHECK(w.at(1, 1) == doctest::Approx(gaussian(lab_center + complex{1.0, 1.0}, lab_center)).epsilon(1e-10));
}

TEST_CASE("fixed cutoff, thread count and grid checks") {
    const auto s = reference_state(1, 45.0);
    const PhaseSpaceGrid grid{-6.0, 6.0, -6.0, 6.0, 13, 11};
    SeriesOptions serial;
    SeriesOptions threaded;
    threaded.threads = 3;
    const auto a = wigner_reduced(s, grid, serial);
    const auto b = wigner_reduced(s, grid, threaded);
    CHECK(a.values == b.values);
    SeriesOptions fixed;
    fixed.k_max = 300;
    const auto c = wigner_reduced(s, grid, fixed);
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(std::abs(a.values[i] - c.values[i]) < 1e-12);
    SeriesOptions tiny;
    tiny.k_max = 5;
    CHECK(wigner_reduced(s, grid, tiny).tail_warning());

    CHECK_THROWS(PhaseSpaceGrid{1.0, 0.0, -1.0, 1.0, 3, 3}.validate());
    CHECK_THROWS(PhaseSpaceGrid{-1.0, 1.0, -1.0, 1.0, 1, 3}.validate());
}

TEST_CASE("single occupied sector: conditioned equals reduced") {
    const auto s = reference_state(3, 0.0);
    const PhaseSpaceGrid grid{2.0, 6.0, -2.0, 2.0, 9, 9};
    const auto reduced = wigner_reduced(s, grid);
    const auto level3 = wigner_conditioned(s, 3, true, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(reduced.values[i] - level3.values[i]) < 1e-14);
    CHECK(reduced.max() == doctest::Approx(kWignerBound).epsilon(1e-6));
}
