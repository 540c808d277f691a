#include "ladderjc/propagator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ladderjc {

namespace {

constexpr double kPrepTolerance = 1e-8;
const complex kI{0.0, 1.0};

void require_block_index(int n) {
    if (n < 0) throw std::invalid_argument("block index must be >= 0, got " + std::to_string(n));
}

// exp(-i H t) for real symmetric H.
template <int N>
Eigen::Matrix<complex, N, N> real_symmetric_exponential(const Eigen::Matrix<double, N, N>& h, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>> solver(h);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition of block generator failed");
    }
    const auto& v = solver.eigenvectors();
    Eigen::Matrix<complex, N, 1> phases;
    for (int i = 0; i < N; ++i) phases(i) = std::exp(-kI * (solver.eigenvalues()(i) * t));
    return v.template cast<complex>() * phases.asDiagonal() * v.transpose().template cast<complex>();
}

}  // namespace

TriLevelState TriLevelState::zero(int n_max) {
    if (n_max < 0) throw std::invalid_argument("TriLevelState: n_max must be >= 0");
    TriLevelState s;
    const auto size = static_cast<std::size_t>(n_max) + 1;
    s.c3.assign(size, complex{});
    s.c2.assign(size, complex{});
    s.c1.assign(size, complex{});
    return s;
}

double TriLevelState::norm_squared() const noexcept {
    double s = std::norm(b2) + std::norm(b1) + std::norm(s1);
    for (std::size_t n = 0; n < c3.size(); ++n) s += std::norm(c3[n]) + std::norm(c2[n]) + std::norm(c1[n]);
    return s;
}

double TriLevelState::block_norm_squared(int n) const {
    const auto i = static_cast<std::size_t>(n);
    return std::norm(c3.at(i)) + std::norm(c2.at(i)) + std::norm(c1.at(i));
}

double rabi_frequency(int n, double g) {
    require_block_index(n);
    return g * std::sqrt(2.0 * n + 3.0);
}

BlockPropagator resonant_block_matrix(int n, double g, double t) {
    require_block_index(n);
    if (!(g > 0.0)) throw std::invalid_argument("resonant_block_matrix: coupling must be positive");

    const double beta = rabi_frequency(n, g);
    const double np1 = n + 1.0;
    const double np2 = n + 2.0;
    const double c = std::cos(beta * t);
    const double s = std::sin(beta * t);
    const double ratio = g / beta;
    const double ratio2 = ratio * ratio;

    const double m11 = ratio2 * (np1 * c + np2);
    const double m33 = ratio2 * (np2 * c + np1);
    const double m13 = ratio2 * std::sqrt(np1 * np2) * (c - 1.0);
    const complex m12 = -kI * (ratio * std::sqrt(np1) * s);
    const complex m23 = -kI * (ratio * std::sqrt(np2) * s);

    BlockPropagator p;
    p.block_index = n;
    p.rabi = beta;
    p.entries << m11, m12, m13,
                 m12, c,   m23,
                 m13, m23, m33;
    return p;
}

BlockPropagator detuned_block_matrix(int n, const ModelParams& params, double t) {
    require_block_index(n);
    params.validate();
    const double delta = params.detuning();
    const double a = params.g * std::sqrt(n + 1.0);
    const double b = params.g * std::sqrt(n + 2.0);
    Eigen::Matrix3d h;
    h << delta, a,   0.0,
         a,     0.0, b,
         0.0,   b,   -delta;

    BlockPropagator p;
    p.block_index = n;
    p.rabi = rabi_frequency(n, params.g);
    p.entries = real_symmetric_exponential<3>(h, t);
    return p;
}

BoundaryPropagator boundary_block_matrices(const ModelParams& params, double t) {
    params.validate();
    const double delta = params.detuning();
    BoundaryPropagator p;
    if (delta == 0.0) {
        const double c = std::cos(params.g * t);
        const complex s = -kI * std::sin(params.g * t);
        p.two_by_two << c, s,
                        s, c;
    } else {
        Eigen::Matrix2d h;
        h << 0.0,      params.g,
             params.g, -delta;
        p.two_by_two = real_symmetric_exponential<2>(h, t);
    }
    p.singlet_phase = std::exp(kI * (delta * t));
    return p;
}

TriLevelState initial_state(const TruncatedFockVector& field, const AtomicPreparation& atom) {
    if (std::abs(field.norm_squared() - 1.0) > kPrepTolerance) {
        throw std::invalid_argument("initial_state: field state is not normalized");
    }
    if (std::abs(atom.norm_squared() - 1.0) > kPrepTolerance) {
        throw std::invalid_argument("initial_state: atomic weights are not normalized");
    }
    const complex w1 = atom.weight(1);
    const complex w2 = atom.weight(2);
    const complex w3 = atom.weight(3);

    TriLevelState s = TriLevelState::zero(field.n_max());
    for (int n = 0; n <= field.n_max(); ++n) {
        const auto i = static_cast<std::size_t>(n);
        s.c3[i] = w3 * field[n];
        s.c2[i] = w2 * field[n + 1];
        s.c1[i] = w1 * field[n + 2];
    }
    s.b2 = w2 * field[0];
    s.b1 = w1 * field[1];
    s.s1 = w1 * field[0];
    return s;
}

BlockPropagator block_propagator(int n, const ModelParams& params, double t) {
    if (params.detuning() == 0.0 && params.g > 0.0) return resonant_block_matrix(n, params.g, t);
    return detuned_block_matrix(n, params, t);
}

TriLevelState evolve(const TriLevelState& state0, const ModelParams& params, double t) {
    params.validate();
    TriLevelState out = TriLevelState::zero(state0.n_max());
    for (int n = 0; n <= state0.n_max(); ++n) {
        const auto i = static_cast<std::size_t>(n);
        const Eigen::Vector3cd v(state0.c3[i], state0.c2[i], state0.c1[i]);
        if (v.isZero(0.0)) continue;
        const Eigen::Vector3cd w = block_propagator(n, params, t).entries * v;
        out.c3[i] = w(0);
        out.c2[i] = w(1);
        out.c1[i] = w(2);
    }
    const auto boundary = boundary_block_matrices(params, t);
    const Eigen::Vector2cd pair = boundary.two_by_two * Eigen::Vector2cd(state0.b2, state0.b1);
    out.b2 = pair(0);
    out.b1 = pair(1);
    out.s1 = boundary.singlet_phase * state0.s1;
    return out;
}

double unitarity_defect(const Eigen::Ref<const Eigen::MatrixXcd>& u) {
    const Eigen::MatrixXcd d = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

}  // namespace ladderjc
