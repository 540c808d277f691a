#pragma once

// Brute-force reference: the full lab-frame Hamiltonian on the truncated
// Fock (x) three-level space, evolved through one dense eigendecomposition.
// Nothing here depends on the block propagator; keep it that way.

#include <Eigen/Dense>

#include <array>

#include "ladderjc/fock.hpp"
#include "ladderjc/model.hpp"

namespace ladderjc::oracle {

/// Amplitudes over |n> (x) |level>, flattened as 3n + (level - 1).
struct FullStateVector {
    Eigen::VectorXcd amplitudes;

    static constexpr Eigen::Index index(int n, int level) noexcept { return 3 * n + (level - 1); }

    [[nodiscard]] int n_max() const noexcept { return static_cast<int>(amplitudes.size() / 3) - 1; }
    [[nodiscard]] complex at(int n, int level) const { return amplitudes(index(n, level)); }
    [[nodiscard]] double norm_squared() const { return amplitudes.squaredNorm(); }
};

struct HamiltonianMatrix {
    Eigen::MatrixXcd matrix;

    [[nodiscard]] int n_max() const noexcept { return static_cast<int>(matrix.rows() / 3) - 1; }
};

/// Atomic operators on (|1>, |2>, |3>):
/// I+ = |3><2| + |2><1|, I- = I+^dagger, Iz = |3><3| - |1><1|.
Eigen::Matrix3d atomic_raising();
Eigen::Matrix3d atomic_lowering();
Eigen::Matrix3d atomic_inversion();

/// H = w0 Iz + wc a^dagger a + g (I+ a + I- a^dagger) truncated at n_max >= 2.
HamiltonianMatrix build_full_hamiltonian(const ModelParams& params, int n_max);

/// field (x) atom on the full basis; the field fixes n_max.
FullStateVector product_state(const TruncatedFockVector& field, const AtomicPreparation& atom);

/// Decomposes H once; evolve() is then a pair of dense products per time.
class LabFrameEvolver {
public:
    explicit LabFrameEvolver(const HamiltonianMatrix& h);

    [[nodiscard]] FullStateVector evolve(const FullStateVector& psi0, double t) const;
    [[nodiscard]] const Eigen::VectorXd& eigenvalues() const noexcept { return energies_; }

private:
    Eigen::VectorXd energies_;
    Eigen::MatrixXcd vectors_;
};

/// exp(-i H t) psi0. Decomposes H on every call; use LabFrameEvolver for many times.
FullStateVector evolve_lab_frame(const FullStateVector& psi0, const HamiltonianMatrix& h, double t);

/// Multiplies |n, l> by exp(i wc t (n + zeta_l)), zeta = (-1, 0, +1).
FullStateVector to_interaction_picture(const FullStateVector& psi, const ModelParams& params, double t);

/// <psi|H|psi>
double energy(const FullStateVector& psi, const HamiltonianMatrix& h);

/// Probabilities of levels 1, 2, 3.
std::array<double, 3> level_populations(const FullStateVector& psi);

/// <n> and <n^2> of the field.
PhotonMoments photon_moments(const FullStateVector& psi);

}  // namespace ladderjc::oracle
