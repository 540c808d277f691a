#include <doctest.h>

#include <random>

#include "ladderjc/observables.hpp"
#include "ladderjc/oracle.hpp"
#include "support.hpp"

using namespace ladderjc;

namespace {

const ModelParams kResonant{0.3, 0.3, 1.0};

TruncatedFockVector coherent4() { return coherent_amplitudes(complex{4.0, 0.0}, 64).normalized(); }

std::vector<double> times(int count, double t_end) {
    std::vector<double> t(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) t[static_cast<std::size_t>(i)] = t_end * i / (count - 1);
    return t;
}

std::vector<double> direct_means(int level, const std::vector<double>& ts) {
    const auto s0 = initial_state(coherent4(), AtomicPreparation::level(level));
    std::vector<double> out;
    for (double t : ts) out.push_back(photon_moments(evolve(s0, kResonant, t)).mean);
    return out;
}

}  // namespace

TEST_CASE("observables agree with the full-space oracle") {
    std::mt19937_64 rng(5);
    const ModelParams p{0.3, 0.42, 0.9};
    const auto field = TruncatedFockVector(testing::random_amplitudes(rng, 12));
    const auto atom = AtomicPreparation::superposition(complex{0.0, 0.6}, 0.0, 0.8);
    const auto s = evolve(initial_state(field, atom), p, 0.8);
    // Fock levels 0..12 in the blocks spill up to photon 14 after evolution
    const auto h = oracle::build_full_hamiltonian(p, 30);
    std::vector<complex> padded(field.amplitudes().begin(), field.amplitudes().end());
    padded.resize(31);
    const auto psi = oracle::to_interaction_picture(
        oracle::evolve_lab_frame(oracle::product_state(TruncatedFockVector(padded), atom), h, 0.8), p, 0.8);

    const auto pa = level_populations(s);
    const auto po = oracle::level_populations(psi);
    CHECK(pa.p1 == doctest::Approx(po[0]).epsilon(1e-12));
    CHECK(pa.p2 == doctest::Approx(po[1]).epsilon(1e-12));
    CHECK(pa.p3 == doctest::Approx(po[2]).epsilon(1e-12));
    const auto ma = photon_moments(s);
    const auto mo = oracle::photon_moments(psi);
    CHECK(ma.mean == doctest::Approx(mo.mean).epsilon(1e-12));
    CHECK(ma.second_moment == doctest::Approx(mo.second_moment).epsilon(1e-12));
}

TEST_CASE("Mandel Q of reference states") {
    CHECK(std::abs(*mandel_q(distribution_moments(coherent4().distribution()))) < 1e-12);
    CHECK(*mandel_q(distribution_moments(TruncatedFockVector::fock(3, 5).distribution())) == doctest::Approx(-1.0));
    CHECK_FALSE(mandel_q(distribution_moments(TruncatedFockVector::fock(0, 5).distribution())).has_value());
    const auto vac = initial_state(TruncatedFockVector::fock(0, 4), AtomicPreparation::level(1));
    CHECK_FALSE(photon_statistics(vac).mandel_q.has_value());
}

TEST_CASE("Mandel Q starts at zero for coherent fields") {
    for (int level = 1; level <= 3; ++level) {
        const auto s = initial_state(coherent4(), AtomicPreparation::level(level));
        CHECK(std::abs(*photon_statistics(s).mandel_q) <= 1e-9);
    }
}

TEST_CASE("upper-start closed form matches direct evaluation") {
    const auto ts = times(501, 50.0);
    const auto report =
        compare_mean_photon_formulas(coherent4().distribution(), 1.0, ts, direct_means(3, ts), {}, {});
    CHECK(report.at("upper_closed_form").max_abs_deviation <= 1e-6);
    CHECK_THROWS((void)report.at("lower_closed_form"));
}

TEST_CASE("intermediate start: exact form matches, other closed forms are reported") {
    const auto ts = times(501, 50.0);
    const auto dist = coherent4().distribution();
    const auto report =
        compare_mean_photon_formulas(dist, 1.0, ts, {}, direct_means(2, ts), direct_means(1, ts));
    CHECK(report.at("intermediate_exact").max_abs_deviation <= 1e-8);
    CHECK(report.at("intermediate_closed_form").max_abs_deviation >= 0.0);
    CHECK(report.at("lower_closed_form").max_abs_deviation >= 0.0);
    CHECK(report.entries.size() == 3);
    CHECK_THROWS(compare_mean_photon_formulas(dist, 1.0, ts, std::vector<double>(3), {}, {}));
    CHECK_THROWS(closed_form_mean_photon(MeanPhotonCase::upper, dist, 0.0, 1.0));
}

TEST_CASE("intermediate exact form includes the vacuum boundary term") {
    // for a vacuum field in level 2 the only dynamics is the |0,2> <-> |1,1> exchange
    const auto vac = TruncatedFockVector::fock(0, 6);
    const auto s0 = initial_state(vac, AtomicPreparation::level(2));
    for (double t : {0.3, 1.1, 2.0}) {
        const double direct = photon_moments(evolve(s0, kResonant, t)).mean;
        CHECK(mean_photon_intermediate_exact(vac.distribution(), 1.0, t) == doctest::Approx(direct).epsilon(1e-14));
        CHECK(direct == doctest::Approx(std::pow(std::sin(t), 2)));
    }
}

TEST_CASE("intermediate start: dropping the vacuum term costs exactly P0 sin^2(gt)") {
    const auto dist = coherent4().distribution();
    const double t = 2.0;
    const double direct = direct_means(2, {t}).front();
    const double boundary = dist[0] * std::pow(std::sin(t), 2);
    const double without_boundary = mean_photon_intermediate_exact(dist, 1.0, t) - boundary;
    CHECK(std::abs(direct - without_boundary - boundary) < 1e-12);
    CHECK(boundary > 1e-8);
    CHECK(std::abs(closed_form_mean_photon(MeanPhotonCase::intermediate, dist, 1.0, t) - direct) > 0.5);
}
