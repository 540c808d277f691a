#pragma once

// Truncated single-mode Fock space: pure field states, coherent-state
// preparation and photon-number distributions.

#include <span>
#include <vector>

#include "ladderjc/model.hpp"

namespace ladderjc {

inline constexpr double kDefaultTailTolerance = 1e-12;
inline constexpr int kDefaultTruncation = 64;

struct PhotonMoments {
    double mean = 0.0;
    double second_moment = 0.0;

    [[nodiscard]] double variance() const noexcept { return second_moment - mean * mean; }
};

/// P_0..P_nmax. Entries are in [0, 1] and sum to at most 1 (+1e-12).
class PhotonDistribution {
public:
    explicit PhotonDistribution(std::vector<double> probabilities);

    [[nodiscard]] int n_max() const noexcept { return static_cast<int>(probs_.size()) - 1; }
    [[nodiscard]] std::span<const double> probabilities() const noexcept { return probs_; }
    /// P_n, zero outside the stored range.
    [[nodiscard]] double operator[](int n) const noexcept;
    [[nodiscard]] double total() const noexcept;

private:
    std::vector<double> probs_;
};

/// Amplitudes c_0..c_nmax of a pure single-mode field state.
class TruncatedFockVector {
public:
    /// Throws std::invalid_argument on an empty array, non-finite entries or a
    /// squared norm above 1 + 1e-12.
    explicit TruncatedFockVector(std::vector<complex> amplitudes);

    static TruncatedFockVector fock(int k, int n_max);

    [[nodiscard]] int n_max() const noexcept { return static_cast<int>(amps_.size()) - 1; }
    [[nodiscard]] std::span<const complex> amplitudes() const noexcept { return amps_; }
    /// c_n, zero outside the stored range.
    [[nodiscard]] complex operator[](int n) const noexcept;
    [[nodiscard]] double norm_squared() const noexcept;
    [[nodiscard]] PhotonDistribution distribution() const;
    /// Rescaled copy with unit norm; throws if the vector is zero.
    [[nodiscard]] TruncatedFockVector normalized() const;

private:
    std::vector<complex> amps_;
};

/// c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!) for n = 0..n_max, built with a
/// log-magnitude ratio recurrence so no factorial is ever formed.
TruncatedFockVector coherent_amplitudes(complex alpha, int n_max);

PhotonMoments distribution_moments(const PhotonDistribution& dist);

/// Poisson mass strictly above n_max for mean photon number `mean`.
double poisson_tail(double mean, int n_max);

/// Smallest n_max whose Poisson tail is below `tail_tolerance`, never less
/// than |alpha|^2 + 6 sqrt(|alpha|^2 + 1).
int suggest_truncation(complex alpha, double tail_tolerance = kDefaultTailTolerance);

}  // namespace ladderjc
