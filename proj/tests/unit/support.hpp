#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "ladderjc/model.hpp"

namespace testing {

using ladderjc::complex;

// exp(-i H t) by scaling and squaring of a Taylor series.
inline Eigen::MatrixXcd expm_taylor(const Eigen::MatrixXcd& h, double t) {
    const Eigen::MatrixXcd a = complex{0.0, -t} * h;
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.25) {
        scale *= 0.5;
        ++squarings;
    }
    const Eigen::MatrixXcd x = a * scale;
    Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
    Eigen::MatrixXcd term = result;
    for (int k = 1; k <= 30; ++k) {
        term = term * x / static_cast<double>(k);
        result += term;
    }
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

// Classical RK4 on i dpsi/dt = H psi.
inline Eigen::VectorXcd rk4(const Eigen::MatrixXcd& h, Eigen::VectorXcd psi, double t, double dt) {
    const int steps = static_cast<int>(std::ceil(t / dt));
    const double step = t / steps;
    const complex mi{0.0, -1.0};
    for (int s = 0; s < steps; ++s) {
        const Eigen::VectorXcd k1 = mi * (h * psi);
        const Eigen::VectorXcd k2 = mi * (h * (psi + 0.5 * step * k1));
        const Eigen::VectorXcd k3 = mi * (h * (psi + 0.5 * step * k2));
        const Eigen::VectorXcd k4 = mi * (h * (psi + step * k3));
        psi += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return psi;
}

inline std::vector<complex> random_amplitudes(std::mt19937_64& rng, int size) {
    std::normal_distribution<double> gauss;
    std::vector<complex> v(static_cast<std::size_t>(size));
    double norm = 0.0;
    for (auto& c : v) {
        c = {gauss(rng), gauss(rng)};
        norm += std::norm(c);
    }
    for (auto& c : v) c /= std::sqrt(norm);
    return v;
}

}  // namespace testing
