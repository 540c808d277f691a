#pragma once

// Interaction-picture evolution of the ladder atom + cavity mode, block by
// block. The interaction Hamiltonian leaves every span{|n,3>, |n+1,2>, |n+2,1>}
// invariant; the three states |0,2>, |1,1>, |0,1> below the first block form a
// two-dimensional block and a singlet which are evolved here as well.

#include <Eigen/Dense>

#include <vector>

#include "ladderjc/fock.hpp"
#include "ladderjc/model.hpp"

namespace ladderjc {

/// 3x3 propagator over (|n,3>, |n+1,2>, |n+2,1>) for one block index n.
struct BlockPropagator {
    Eigen::Matrix3cd entries = Eigen::Matrix3cd::Identity();
    int block_index = 0;
    double rabi = 0.0;  // g sqrt(2n + 3)
};

/// Propagators for the states outside the three-dimensional block family.
struct BoundaryPropagator {
    Eigen::Matrix2cd two_by_two = Eigen::Matrix2cd::Identity();  // over (|0,2>, |1,1>)
    complex singlet_phase{1.0, 0.0};                              // on |0,1>
};

/// Block amplitudes in the interaction picture.
///   c3[n] : |n,3>     c2[n] : |n+1,2>     c1[n] : |n+2,1>
///   b2 : |0,2>        b1 : |1,1>          s1 : |0,1>
struct TriLevelState {
    std::vector<complex> c3, c2, c1;
    complex b2{}, b1{}, s1{};

    /// Zero state with blocks 0..n_max.
    static TriLevelState zero(int n_max);

    [[nodiscard]] int n_max() const noexcept { return static_cast<int>(c3.size()) - 1; }
    [[nodiscard]] double norm_squared() const noexcept;
    [[nodiscard]] double block_norm_squared(int n) const;
};

/// Generalized Rabi frequency of block n at resonance.
double rabi_frequency(int n, double g);

/// Closed-form resonant propagator. Requires n >= 0 and g > 0.
BlockPropagator resonant_block_matrix(int n, double g, double t);

/// exp(-i H_n t) with H_n = [[D, g sqrt(n+1), 0], [g sqrt(n+1), 0, g sqrt(n+2)], [0, g sqrt(n+2), -D]],
/// from a real-symmetric eigendecomposition.
BlockPropagator detuned_block_matrix(int n, const ModelParams& params, double t);

/// exp(-i t [[0, g], [g, -D]]) on (|0,2>, |1,1>) and exp(+i D t) on |0,1>.
BoundaryPropagator boundary_block_matrices(const ModelParams& params, double t);

/// Product state field (x) atom mapped onto block amplitudes. The block count
/// follows the field truncation. Throws std::invalid_argument unless both
/// inputs are normalized to within 1e-8.
TriLevelState initial_state(const TruncatedFockVector& field, const AtomicPreparation& atom);

/// Propagator of block n for these parameters: the closed form when the
/// system is resonant and coupled, the eigendecomposition otherwise.
BlockPropagator block_propagator(int n, const ModelParams& params, double t);

/// State at time t, always built from a fresh propagator applied to state0.
TriLevelState evolve(const TriLevelState& state0, const ModelParams& params, double t);

/// max_ij |(U^dagger U - I)_ij|
double unitarity_defect(const Eigen::Ref<const Eigen::MatrixXcd>& u);

}  // namespace ladderjc
