#include "ladderjc/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ladderjc {

LevelPopulations level_populations(const TriLevelState& state) {
    LevelPopulations p;
    for (int n = 0; n <= state.n_max(); ++n) {
        const auto i = static_cast<std::size_t>(n);
        p.p3 += std::norm(state.c3[i]);
        p.p2 += std::norm(state.c2[i]);
        p.p1 += std::norm(state.c1[i]);
    }
    p.p2 += std::norm(state.b2);
    p.p1 += std::norm(state.b1) + std::norm(state.s1);
    return p;
}

PhotonMoments photon_moments(const TriLevelState& state) {
    PhotonMoments m;
    auto add = [&m](double photons, complex amp) {
        const double p = std::norm(amp);
        m.mean += photons * p;
        m.second_moment += photons * photons * p;
    };
    for (int n = 0; n <= state.n_max(); ++n) {
        const auto i = static_cast<std::size_t>(n);
        add(n, state.c3[i]);
        add(n + 1.0, state.c2[i]);
        add(n + 2.0, state.c1[i]);
    }
    add(1.0, state.b1);  // b2 and s1 carry zero photons
    return m;
}

std::optional<double> mandel_q(const PhotonMoments& moments) {
    if (moments.mean <= kVacuumMeanThreshold) return std::nullopt;
    return moments.variance() / moments.mean - 1.0;
}

PhotonStats photon_statistics(const TriLevelState& state) {
    const PhotonMoments m = photon_moments(state);
    return PhotonStats{m.mean, m.variance(), mandel_q(m)};
}

double closed_form_mean_photon(MeanPhotonCase which, const PhotonDistribution& field, double g, double t) {
    if (!(g > 0.0)) throw std::invalid_argument("closed_form_mean_photon: coupling must be positive");
    const double nbar = distribution_moments(field).mean;
    double sum = 0.0;
    for (int n = 0; n <= field.n_max(); ++n) {
        const double beta = g * std::sqrt(2.0 * n + 3.0);
        const double r2 = (g / beta) * (g / beta);
        const double c = std::cos(beta * t);
        const double s = std::sin(beta * t);
        switch (which) {
            case MeanPhotonCase::upper:
                sum += field[n] * r2 * (n + 1.0) * (s * s + 2.0 * r2 * (n + 2.0) * (c - 1.0) * (c - 1.0));
                break;
            case MeanPhotonCase::intermediate:
                sum += field[n + 2] * (c * c + 2.0 * r2 * (n + 2.0) * s * s);
                break;
            case MeanPhotonCase::lower: {
                const double bracket = (n + 2.0) * c + (n + 1.0);
                sum -= field[n + 2] * r2 * ((n + 2.0) * s * s + 2.0 * r2 * bracket * bracket);
                break;
            }
        }
    }
    return nbar + sum;
}

double mean_photon_intermediate_exact(const PhotonDistribution& field, double g, double t) {
    if (!(g > 0.0)) throw std::invalid_argument("mean_photon_intermediate_exact: coupling must be positive");
    const double nbar = distribution_moments(field).mean;
    double sum = 0.0;
    for (int n = 0; n + 1 <= field.n_max(); ++n) {
        const double beta = g * std::sqrt(2.0 * n + 3.0);
        const double s = std::sin(beta * t);
        sum += field[n + 1] * (g / beta) * (g / beta) * s * s;
    }
    const double s0 = std::sin(g * t);
    return nbar + sum + field[0] * s0 * s0;
}

const FormulaDeviation& MeanPhotonFormulaReport::at(const std::string& label) const {
    const auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.label == label; });
    if (it == entries.end()) throw std::out_of_range("no formula report entry '" + label + "'");
    return *it;
}

MeanPhotonFormulaReport compare_mean_photon_formulas(const PhotonDistribution& field, double g,
                                                     std::span<const double> times,
                                                     std::span<const double> direct_upper,
                                                     std::span<const double> direct_intermediate,
                                                     std::span<const double> direct_lower) {
    MeanPhotonFormulaReport report;
    auto deviation = [&](std::span<const double> direct, auto&& formula) {
        if (direct.size() != times.size()) {
            throw std::invalid_argument("compare_mean_photon_formulas: series length does not match times");
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            worst = std::max(worst, std::abs(formula(times[i]) - direct[i]));
        }
        return worst;
    };
    auto closed = [&](MeanPhotonCase c) {
        return [&, c](double t) { return closed_form_mean_photon(c, field, g, t); };
    };

    if (!direct_upper.empty()) {
        report.entries.push_back({"upper_closed_form", deviation(direct_upper, closed(MeanPhotonCase::upper))});
    }
    if (!direct_intermediate.empty()) {
        report.entries.push_back(
            {"intermediate_closed_form", deviation(direct_intermediate, closed(MeanPhotonCase::intermediate))});
        report.entries.push_back({"intermediate_exact", deviation(direct_intermediate, [&](double t) {
                                      return mean_photon_intermediate_exact(field, g, t);
                                  })});
    }
    if (!direct_lower.empty()) {
        report.entries.push_back({"lower_closed_form", deviation(direct_lower, closed(MeanPhotonCase::lower))});
    }
    return report;
}

}  // namespace ladderjc
