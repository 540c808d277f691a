#pragma once

// Level populations, photon-number moments and Mandel Q of a block state.
// The direct weighted sums over the state vector are the ground truth; the
// closed-form mean-photon expressions are kept only for comparison reports.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ladderjc/fock.hpp"
#include "ladderjc/propagator.hpp"

namespace ladderjc {

struct LevelPopulations {
    double p1 = 0.0;
    double p2 = 0.0;
    double p3 = 0.0;

    [[nodiscard]] double sum() const noexcept { return p1 + p2 + p3; }
};

struct PopulationRecord {
    double t = 0.0;
    LevelPopulations populations;
};

struct PhotonStats {
    double mean_n = 0.0;
    double variance = 0.0;
    std::optional<double> mandel_q;  // empty for a (near) vacuum field
};

struct PhotonStatsRecord {
    double t = 0.0;
    PhotonStats stats;
};

/// Mean photon number below which Q is reported as undefined.
inline constexpr double kVacuumMeanThreshold = 1e-14;

LevelPopulations level_populations(const TriLevelState& state);

/// <n>, <n^2> with each block amplitude carrying its true photon number.
PhotonMoments photon_moments(const TriLevelState& state);

/// Q = (<n^2> - <n>^2)/<n> - 1, or nullopt when <n> <= 1e-14.
std::optional<double> mandel_q(const PhotonMoments& moments);

PhotonStats photon_statistics(const TriLevelState& state);

/// Initial atomic level selecting one of the closed forms.
enum class MeanPhotonCase { upper = 1, intermediate = 2, lower = 3 };

/// Printed closed forms for <n>(t) at resonance, evaluated as written:
///   upper:        nbar + sum P_n (g/b)^2 (n+1) { sin^2 bt + 2 (g/b)^2 (n+2) (cos bt - 1)^2 }
///   intermediate: nbar + sum P_{n+2} { cos^2 bt + 2 (g/b)^2 (n+2) sin^2 bt }
///   lower:        nbar - sum P_{n+2} (g/b)^2 { (n+2) sin^2 bt + 2 (g/b)^2 [(n+2) cos bt + (n+1)]^2 }
/// with b = g sqrt(2n+3) and nbar the mean of `field`. The intermediate and
/// lower forms disagree with the propagator; see mean_photon_intermediate_exact.
double closed_form_mean_photon(MeanPhotonCase which, const PhotonDistribution& field, double g, double t);

/// Exact resonant <n>(t) for an intermediate-level start:
/// nbar + sum P_{n+1} (g/b_n)^2 sin^2(b_n t) + P_0 sin^2(g t). The last term is
/// the |0,2> -> |1,1> exchange.
double mean_photon_intermediate_exact(const PhotonDistribution& field, double g, double t);

/// Comparison of the closed forms against a directly computed <n>(t) series.
struct FormulaDeviation {
    std::string label;
    double max_abs_deviation = 0.0;
};

struct MeanPhotonFormulaReport {
    std::vector<FormulaDeviation> entries;

    [[nodiscard]] const FormulaDeviation& at(const std::string& label) const;
};

/// `direct_*` hold <n>(times[i]) from the state vector for each start.
/// Pass an empty span to skip a case.
MeanPhotonFormulaReport compare_mean_photon_formulas(const PhotonDistribution& field, double g,
                                                     std::span<const double> times,
                                                     std::span<const double> direct_upper,
                                                     std::span<const double> direct_intermediate,
                                                     std::span<const double> direct_lower);

}  // namespace ladderjc
