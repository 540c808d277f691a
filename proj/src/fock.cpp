#include "ladderjc/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ladderjc {

namespace {

constexpr double kNormSlack = 1e-12;

}  // namespace

PhotonDistribution::PhotonDistribution(std::vector<double> probabilities)
    : probs_(std::move(probabilities)) {
    if (probs_.empty()) {
        throw std::invalid_argument("PhotonDistribution: empty distribution");
    }
    for (std::size_t n = 0; n < probs_.size(); ++n) {
        const double p = probs_[n];
        if (!std::isfinite(p) || p < 0.0 || p > 1.0 + kNormSlack) {
            throw std::invalid_argument("PhotonDistribution: P_" + std::to_string(n) + " outside [0, 1]");
        }
    }
    if (total() > 1.0 + kNormSlack) {
        throw std::invalid_argument("PhotonDistribution: probabilities sum above 1");
    }
}

double PhotonDistribution::operator[](int n) const noexcept {
    if (n < 0 || n > n_max()) return 0.0;
    return probs_[static_cast<std::size_t>(n)];
}

double PhotonDistribution::total() const noexcept {
    return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

TruncatedFockVector::TruncatedFockVector(std::vector<complex> amplitudes)
    : amps_(std::move(amplitudes)) {
    if (amps_.empty()) {
        throw std::invalid_argument("TruncatedFockVector: need at least one amplitude");
    }
    for (const auto& c : amps_) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw std::invalid_argument("TruncatedFockVector: non-finite amplitude");
        }
    }
    if (norm_squared() > 1.0 + kNormSlack) {
        throw std::invalid_argument("TruncatedFockVector: squared norm exceeds 1");
    }
}

TruncatedFockVector TruncatedFockVector::fock(int k, int n_max) {
    if (n_max < 0 || k < 0 || k > n_max) {
        throw std::invalid_argument("TruncatedFockVector::fock: need 0 <= k <= n_max");
    }
    std::vector<complex> amps(static_cast<std::size_t>(n_max) + 1);
    amps[static_cast<std::size_t>(k)] = 1.0;
    return TruncatedFockVector(std::move(amps));
}

complex TruncatedFockVector::operator[](int n) const noexcept {
    if (n < 0 || n > n_max()) return {};
    return amps_[static_cast<std::size_t>(n)];
}

double TruncatedFockVector::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& c : amps_) s += std::norm(c);
    return s;
}

PhotonDistribution TruncatedFockVector::distribution() const {
    std::vector<double> p(amps_.size());
    std::transform(amps_.begin(), amps_.end(), p.begin(), [](complex c) { return std::norm(c); });
    return PhotonDistribution(std::move(p));
}

TruncatedFockVector TruncatedFockVector::normalized() const {
    const double norm = std::sqrt(norm_squared());
    if (norm == 0.0) {
        throw std::invalid_argument("TruncatedFockVector: cannot normalize the zero vector");
    }
    std::vector<complex> amps(amps_);
    for (auto& c : amps) c /= norm;
    return TruncatedFockVector(std::move(amps));
}

TruncatedFockVector coherent_amplitudes(complex alpha, int n_max) {
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
        throw std::invalid_argument("coherent_amplitudes: alpha must be finite");
    }
    if (n_max < 0) {
        throw std::invalid_argument("coherent_amplitudes: n_max must be >= 0");
    }
    std::vector<complex> amps(static_cast<std::size_t>(n_max) + 1);
    const double r = std::abs(alpha);
    if (r == 0.0) {
        amps[0] = 1.0;
        return TruncatedFockVector(std::move(amps));
    }
    const double log_r = std::log(r);
    const double phase = std::arg(alpha);
    // log|c_{n+1}| = log|c_n| + log|alpha| - log(n+1)/2
    double log_mag = -0.5 * r * r;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) log_mag += log_r - 0.5 * std::log(static_cast<double>(n));
        amps[static_cast<std::size_t>(n)] = std::polar(std::exp(log_mag), phase * n);
    }
    return TruncatedFockVector(std::move(amps));
}

PhotonMoments distribution_moments(const PhotonDistribution& dist) {
    PhotonMoments m;
    const auto probs = dist.probabilities();
    for (std::size_t n = 0; n < probs.size(); ++n) {
        const double dn = static_cast<double>(n);
        m.mean += dn * probs[n];
        m.second_moment += dn * dn * probs[n];
    }
    return m;
}

double poisson_tail(double mean, int n_max) {
    if (mean < 0.0 || !std::isfinite(mean)) {
        throw std::invalid_argument("poisson_tail: mean must be finite and non-negative");
    }
    if (n_max < 0) return 1.0;
    if (mean == 0.0) return 0.0;
    const double log_mean = std::log(mean);
    auto log_pmf = [&](int k) { return -mean + k * log_mean - std::lgamma(k + 1.0); };
    if (n_max < mean) {
        // Cutoff below the mode: the head is the small side.
        double head = 0.0;
        for (int k = 0; k <= n_max; ++k) head += std::exp(log_pmf(k));
        return std::clamp(1.0 - head, 0.0, 1.0);
    }
    // Terms decrease monotonically from n_max + 1 on.
    int k = n_max + 1;
    double term = std::exp(log_pmf(k));
    double tail = 0.0;
    while (term > 1e-18 * tail && term > 0.0) {
        tail += term;
        ++k;
        term *= mean / k;
    }
    return std::min(tail, 1.0);
}

int suggest_truncation(complex alpha, double tail_tolerance) {
    if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0)) {
        throw std::invalid_argument("suggest_truncation: tail tolerance must lie in (0, 1)");
    }
    const double mean = std::norm(alpha);
    const int floor_bound = static_cast<int>(std::ceil(mean + 6.0 * std::sqrt(mean + 1.0)));
    int n = 0;
    while (poisson_tail(mean, n) >= tail_tolerance) ++n;
    return std::max(n, floor_bound);
}

}  // namespace ladderjc
