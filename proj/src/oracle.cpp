#include "ladderjc/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace ladderjc::oracle {

namespace {

const complex kI{0.0, 1.0};

}  // namespace

Eigen::Matrix3d atomic_raising() {
    Eigen::Matrix3d op = Eigen::Matrix3d::Zero();
    op(2, 1) = 1.0;  // |3><2|
    op(1, 0) = 1.0;  // |2><1|
    return op;
}

Eigen::Matrix3d atomic_lowering() { return atomic_raising().transpose(); }

Eigen::Matrix3d atomic_inversion() { return Eigen::Vector3d(-1.0, 0.0, 1.0).asDiagonal(); }

HamiltonianMatrix build_full_hamiltonian(const ModelParams& params, int n_max) {
    params.validate();
    if (n_max < 2) throw std::invalid_argument("build_full_hamiltonian: n_max must be >= 2");

    const Eigen::Index dim = 3 * (static_cast<Eigen::Index>(n_max) + 1);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    const Eigen::Matrix3d iz = atomic_inversion();
    const Eigen::Matrix3d ip = atomic_raising();

    for (int n = 0; n <= n_max; ++n) {
        for (int l = 1; l <= 3; ++l) {
            h(FullStateVector::index(n, l), FullStateVector::index(n, l)) =
                params.omega_c * n + params.omega_0 * iz(l - 1, l - 1);
        }
    }
    // g I+ a : |n+1, l> -> sqrt(n+1) |n, l+1>. The term leaving the space is dropped.
    for (int n = 0; n < n_max; ++n) {
        for (int l = 1; l <= 3; ++l) {
            for (int lp = 1; lp <= 3; ++lp) {
                if (ip(lp - 1, l - 1) == 0.0) continue;
                const double v = params.g * std::sqrt(n + 1.0) * ip(lp - 1, l - 1);
                const auto row = FullStateVector::index(n, lp);
                const auto col = FullStateVector::index(n + 1, l);
                h(row, col) += v;
                h(col, row) += v;
            }
        }
    }
    return HamiltonianMatrix{h.cast<complex>()};
}

FullStateVector product_state(const TruncatedFockVector& field, const AtomicPreparation& atom) {
    FullStateVector psi;
    psi.amplitudes = Eigen::VectorXcd::Zero(3 * (static_cast<Eigen::Index>(field.n_max()) + 1));
    for (int n = 0; n <= field.n_max(); ++n) {
        for (int l = 1; l <= 3; ++l) psi.amplitudes(FullStateVector::index(n, l)) = field[n] * atom.weight(l);
    }
    return psi;
}

LabFrameEvolver::LabFrameEvolver(const HamiltonianMatrix& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("LabFrameEvolver: eigendecomposition failed");
    }
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
}

FullStateVector LabFrameEvolver::evolve(const FullStateVector& psi0, double t) const {
    if (psi0.amplitudes.size() != vectors_.rows()) {
        throw std::invalid_argument("LabFrameEvolver: state dimension does not match the Hamiltonian");
    }
    Eigen::VectorXcd coeff = vectors_.adjoint() * psi0.amplitudes;
    for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff(i) *= std::exp(-kI * (energies_(i) * t));
    return FullStateVector{vectors_ * coeff};
}

FullStateVector evolve_lab_frame(const FullStateVector& psi0, const HamiltonianMatrix& h, double t) {
    return LabFrameEvolver(h).evolve(psi0, t);
}

FullStateVector to_interaction_picture(const FullStateVector& psi, const ModelParams& params, double t) {
    FullStateVector out = psi;
    for (int n = 0; n <= psi.n_max(); ++n) {
        for (int l = 1; l <= 3; ++l) {
            const double exponent = params.omega_c * t * (n + inversion_eigenvalue(l));
            out.amplitudes(FullStateVector::index(n, l)) *= std::exp(kI * exponent);
        }
    }
    return out;
}

double energy(const FullStateVector& psi, const HamiltonianMatrix& h) {
    return psi.amplitudes.dot(h.matrix * psi.amplitudes).real();
}

std::array<double, 3> level_populations(const FullStateVector& psi) {
    std::array<double, 3> p{};
    for (int n = 0; n <= psi.n_max(); ++n) {
        for (int l = 1; l <= 3; ++l) p[static_cast<std::size_t>(l - 1)] += std::norm(psi.at(n, l));
    }
    return p;
}

PhotonMoments photon_moments(const FullStateVector& psi) {
    PhotonMoments m;
    for (int n = 0; n <= psi.n_max(); ++n) {
        double pn = 0.0;
        for (int l = 1; l <= 3; ++l) pn += std::norm(psi.at(n, l));
        m.mean += n * pn;
        m.second_moment += static_cast<double>(n) * n * pn;
    }
    return m;
}

}  // namespace ladderjc::oracle
