#pragma once

// Shared value types for the ladder-type three-level atom coupled to a single
// cavity mode. Both propagation routes (block-analytic and full-space oracle)
// consume these, so this header must not depend on either of them.

#include <array>
#include <complex>

namespace ladderjc {

using complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Cavity frequency, atomic transition frequency and coupling (hbar = 1).
/// The detuning is always derived, never stored.
struct ModelParams {
    double omega_c = 0.0;
    double omega_0 = 0.0;
    double g = 0.0;

    [[nodiscard]] double detuning() const noexcept { return omega_0 - omega_c; }

    /// Throws std::invalid_argument for negative or non-finite values.
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Atomic level labels: 1 = lower, 2 = intermediate, 3 = upper.
enum class AtomicLevel : int { lower = 1, intermediate = 2, upper = 3 };

/// Pure atomic preparation w1|1> + w2|2> + w3|3>.
struct AtomicPreparation {
    std::array<complex, 3> weights{};  // indexed by level - 1

    static AtomicPreparation level(AtomicLevel l);
    static AtomicPreparation level(int l);
    static AtomicPreparation superposition(complex w1, complex w2, complex w3);

    [[nodiscard]] complex weight(int level) const { return weights.at(static_cast<std::size_t>(level - 1)); }
    [[nodiscard]] double norm_squared() const noexcept;

    friend bool operator==(const AtomicPreparation&, const AtomicPreparation&) = default;
};

/// Interaction-picture energy sign of each level under the inversion operator:
/// -1, 0, +1 for levels 1, 2, 3.
constexpr int inversion_eigenvalue(int level) noexcept { return level - 2; }

}  // namespace ladderjc
