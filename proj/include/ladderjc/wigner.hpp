#pragma once

// Wigner functions of the cavity field from the displaced-number-state series
//   W(beta) = (2/pi) sum_k (-1)^k <beta,k| rho |beta,k>,   |beta,k> = D(beta)|k>,
// with rho the field state after tracing out the atom. Each atomic level
// contributes an incoherent sector, so W is a sum of three per-sector series.

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ladderjc/model.hpp"
#include "ladderjc/propagator.hpp"

namespace ladderjc {

inline constexpr double kWignerBound = 2.0 / kPi;
/// Relative k-series tail above which a Wigner evaluation is flagged.
inline constexpr double kSeriesTailWarning = 1e-8;

/// Regular lattice of beta = x + i y with n_re x n_im points, bounds included.
struct PhaseSpaceGrid {
    double re_min = -1.0;
    double re_max = 1.0;
    double im_min = -1.0;
    double im_max = 1.0;
    int n_re = 2;
    int n_im = 2;

    void validate() const;
    [[nodiscard]] double step_re() const noexcept { return (re_max - re_min) / (n_re - 1); }
    [[nodiscard]] double step_im() const noexcept { return (im_max - im_min) / (n_im - 1); }
    [[nodiscard]] complex point(int i_re, int i_im) const noexcept {
        return {re_min + i_re * step_re(), im_min + i_im * step_im()};
    }
    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(n_re) * static_cast<std::size_t>(n_im);
    }

    friend bool operator==(const PhaseSpaceGrid&, const PhaseSpaceGrid&) = default;
};

enum class WignerKind { reduced, level1, level2, level3 };

std::string to_string(WignerKind kind);
WignerKind conditioned_kind(int level);

/// Sampled W on a grid; values are stored re-major: index = i_re * n_im + i_im.
struct WignerField {
    PhaseSpaceGrid grid;
    WignerKind kind = WignerKind::reduced;
    bool normalized = false;
    std::vector<double> values;
    double max_relative_tail = 0.0;  // worst k-series tail over the grid

    [[nodiscard]] double at(int i_re, int i_im) const {
        return values.at(static_cast<std::size_t>(i_re) * static_cast<std::size_t>(grid.n_im) +
                         static_cast<std::size_t>(i_im));
    }
    [[nodiscard]] double min() const;
    [[nodiscard]] double max() const;
    /// Riemann sum of W over the grid cells.
    [[nodiscard]] double integral() const;
    [[nodiscard]] bool tail_warning() const noexcept { return max_relative_tail > kSeriesTailWarning; }
};

/// Thrown when conditioning on a level with (numerically) no population.
class EmptySectorError : public std::runtime_error {
public:
    EmptySectorError(int level, double population);
    [[nodiscard]] int level() const noexcept { return level_; }

private:
    int level_;
};

/// Field amplitudes indexed by true photon number.
using FieldSector = std::vector<complex>;

/// Field kets attached to levels 1, 2, 3 (array index = level - 1). The
/// level-2 sector is (b2, c2[0], c2[1], ...) and the level-1 sector is
/// (s1, b1, c1[0], ...).
std::array<FieldSector, 3> field_sectors(const TriLevelState& state);

/// <beta,k|n> = <k|D(-beta)|n> via the associated-Laguerre closed form, with
/// the prefactor carried through a ratio recurrence along the diagonal.
complex displaced_number_overlap(complex beta, int k, int n);

struct SeriesOptions {
    int k_max = 0;                // 0 chooses the cutoff per point from the tail
    double frame_rotation = 0.0;  // sample W at beta * exp(i rotation); omega_c t gives the lab frame
    int threads = 1;
};

struct SeriesValue {
    double value = 0.0;
    double relative_tail = 0.0;  // discarded sector mass / sector norm, worst sector
    int k_max = 0;
};

/// Series form at one point for the incoherent sum of `sectors`.
SeriesValue wigner_series(std::span<const FieldSector> sectors, complex beta, int k_max = 0);

/// (2/pi) <psi| D(beta) Parity D(-beta) |psi> summed over sectors, with D from
/// a dense Hermitian eigendecomposition on `dim` Fock states (0 = automatic).
double wigner_parity_form(std::span<const FieldSector> sectors, complex beta, int dim = 0);

/// The three unnormalized sector fields of a state, plus their norms.
struct SectorFields {
    std::array<WignerField, 3> sectors;
    std::array<double, 3> norms{};
};

SectorFields wigner_sector_fields(const TriLevelState& state, const PhaseSpaceGrid& grid,
                                  const SeriesOptions& options = {});

WignerField wigner_reduced(const TriLevelState& state, const PhaseSpaceGrid& grid,
                           const SeriesOptions& options = {});

/// Sector of one atomic level. With normalize set the field is divided by the
/// level population, and EmptySectorError is thrown when it is <= 1e-12.
WignerField wigner_conditioned(const TriLevelState& state, int level, bool normalize,
                               const PhaseSpaceGrid& grid, const SeriesOptions& options = {});

/// Sums or normalizes precomputed sector fields (no re-evaluation).
WignerField combine_reduced(const SectorFields& fields);
WignerField select_conditioned(const SectorFields& fields, int level, bool normalize);

}  // namespace ladderjc
