#include "ladderjc/wigner.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"

namespace ladderjc {

namespace {

constexpr double kEmptySector = 1e-12;
// Sector amplitudes past the point where the remaining mass is below this
// fraction of the sector norm are dropped before summation.
constexpr double kSupportTrim = 1e-30;
// Automatic cutoff: grow k_max until the discarded mass is below this.
constexpr double kAutoTailTarget = 1e-13;
constexpr int kMaxAutoCutoff = 8192;
constexpr double kRescale = 1e150;

struct PreparedSectors {
    std::vector<std::vector<complex>> amps;
    std::vector<double> norms;
    int support = 0;  // largest photon number kept in any sector
};

PreparedSectors prepare(std::span<const FieldSector> sectors) {
    PreparedSectors p;
    for (const auto& s : sectors) {
        double norm = 0.0;
        for (const auto& c : s) norm += std::norm(c);
        std::size_t keep = s.size();
        double tail = 0.0;
        while (keep > 0 && tail + std::norm(s[keep - 1]) <= kSupportTrim * norm) {
            tail += std::norm(s[keep - 1]);
            --keep;
        }
        p.amps.emplace_back(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(keep));
        p.norms.push_back(norm);
        p.support = std::max(p.support, static_cast<int>(keep) - 1);
    }
    return p;
}

int automatic_cutoff(int support, double radius) {
    const double reach = std::sqrt(static_cast<double>(std::max(support, 0))) + radius;
    return static_cast<int>(std::ceil(reach * reach + 10.0 * reach + 20.0));
}

// Magnitude factors along one diagonal of the displacement matrix,
//   f(d) = sqrt(d!/(d+m)!) x^{m/2} e^{-x/2} L_d^{(m)}(x),   d = 0, 1, ...
// obtained from the Laguerre three-term recurrence with the prefactor folded in:
//   f(d+1) = [(2d+1+m-x) f(d) - sqrt(d(d+m)) f(d-1)] / sqrt((d+1)(d+m+1)).
// Values are carried as mantissa * scale so large intermediates never overflow.
class DiagonalRecurrence {
public:
    DiagonalRecurrence(int m, double x, std::span<const double> sqrt_table, double log_factorial_m)
        : m_(m), x_(x), sqrt_(sqrt_table) {
        log_scale_ = 0.5 * m * std::log(x) - 0.5 * x - 0.5 * log_factorial_m;
        scale_ = std::exp(log_scale_);
    }

    [[nodiscard]] double value() const noexcept { return cur_ * scale_; }

    void advance() noexcept {
        const double next = ((2.0 * d_ + 1.0 + m_ - x_) * cur_ - sqrt_[d_] * sqrt_[d_ + m_] * prev_) /
                            (sqrt_[d_ + 1] * sqrt_[d_ + m_ + 1]);
        prev_ = cur_;
        cur_ = next;
        ++d_;
        if (std::abs(cur_) > kRescale) {
            cur_ /= kRescale;
            prev_ /= kRescale;
            log_scale_ += std::log(kRescale);
            scale_ = std::exp(log_scale_);
        }
    }

private:
    int m_;
    double x_;
    std::span<const double> sqrt_;
    int d_ = 0;
    double cur_ = 1.0;
    double prev_ = 0.0;
    double log_scale_ = 0.0;
    double scale_ = 1.0;
};

struct Tables {
    std::vector<double> sqrt_int;       // sqrt(i)
    std::vector<double> log_factorial;  // log(i!)

    explicit Tables(int size) : sqrt_int(static_cast<std::size_t>(size) + 1), log_factorial(sqrt_int.size()) {
        for (std::size_t i = 0; i < sqrt_int.size(); ++i) {
            sqrt_int[i] = std::sqrt(static_cast<double>(i));
            log_factorial[i] = std::lgamma(static_cast<double>(i) + 1.0);
        }
    }
};

struct SectorSums {
    std::vector<double> values;         // (2/pi) sum (-1)^k |a_k|^2 per sector
    std::vector<double> relative_tail;  // discarded mass / norm per sector
};

// a_s(k) = sum_n <k|D(-beta)|n> psi_s(n) for k = 0..cutoff, then the parity sums.
SectorSums evaluate_sectors(const PreparedSectors& prep, complex beta, int cutoff) {
    const std::size_t count = prep.amps.size();
    const int support = prep.support;
    const double x = std::norm(beta);
    std::vector<std::vector<complex>> a(count, std::vector<complex>(static_cast<std::size_t>(cutoff) + 1));

    if (x == 0.0) {
        for (std::size_t s = 0; s < count; ++s) {
            for (std::size_t n = 0; n < prep.amps[s].size() && n <= static_cast<std::size_t>(cutoff); ++n) {
                a[s][n] = prep.amps[s][n];
            }
        }
    } else {
        // <k|D(g)|n> = e^{i k th} sgn f e^{-i n th} with th = arg g, g = -beta, and
        // sgn = (-1)^{n-k} above the diagonal. The row phase drops out of |a_k|^2.
        const double theta = std::arg(-beta);
        std::vector<std::vector<complex>> twisted(count);
        for (std::size_t s = 0; s < count; ++s) {
            twisted[s].resize(prep.amps[s].size());
            for (std::size_t n = 0; n < prep.amps[s].size(); ++n) {
                twisted[s][n] = prep.amps[s][n] * std::polar(1.0, -theta * static_cast<double>(n));
            }
        }
        const Tables tables(cutoff + support + 2);
        auto amp = [&](std::size_t s, int n) -> complex {
            return static_cast<std::size_t>(n) < twisted[s].size() ? twisted[s][static_cast<std::size_t>(n)]
                                                                   : complex{};
        };

        // On and below the diagonal: rows k = n + m, degree n.
        for (int m = 0; m <= cutoff; ++m) {
            DiagonalRecurrence rec(m, x, tables.sqrt_int, tables.log_factorial[static_cast<std::size_t>(m)]);
            const int last = std::min(support, cutoff - m);
            for (int n = 0; n <= last; ++n) {
                const double f = rec.value();
                for (std::size_t s = 0; s < count; ++s) a[s][static_cast<std::size_t>(n + m)] += f * amp(s, n);
                rec.advance();
            }
        }
        // Above the diagonal: columns n = k + m, degree k.
        for (int m = 1; m <= support; ++m) {
            DiagonalRecurrence rec(m, x, tables.sqrt_int, tables.log_factorial[static_cast<std::size_t>(m)]);
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            const int last = std::min(cutoff, support - m);
            for (int k = 0; k <= last; ++k) {
                const double f = sign * rec.value();
                for (std::size_t s = 0; s < count; ++s) a[s][static_cast<std::size_t>(k)] += f * amp(s, k + m);
                rec.advance();
            }
        }
    }

    SectorSums out;
    for (std::size_t s = 0; s < count; ++s) {
        double alternating = 0.0;
        double mass = 0.0;
        const auto& v = a[s];
        std::size_t k = 0;
        for (; k + 1 < v.size(); k += 2) {
            const double even = std::norm(v[k]);
            const double odd = std::norm(v[k + 1]);
            alternating += even - odd;
            mass += even + odd;
        }
        if (k < v.size()) {
            alternating += std::norm(v[k]);
            mass += std::norm(v[k]);
        }
        out.values.push_back(kWignerBound * alternating);
        const double norm = prep.norms[s];
        out.relative_tail.push_back(norm > 0.0 ? std::max(0.0, norm - mass) / norm : 0.0);
    }
    return out;
}

struct PointResult {
    SectorSums sums;
    int cutoff = 0;
    double worst_tail = 0.0;
};

PointResult evaluate_point(const PreparedSectors& prep, complex beta, int k_max) {
    const bool automatic = k_max <= 0;
    int cutoff = automatic ? automatic_cutoff(prep.support, std::abs(beta)) : k_max;
    while (true) {
        PointResult r{evaluate_sectors(prep, beta, cutoff), cutoff, 0.0};
        for (double t : r.sums.relative_tail) r.worst_tail = std::max(r.worst_tail, t);
        if (!automatic || r.worst_tail <= kAutoTailTarget || cutoff >= kMaxAutoCutoff) return r;
        cutoff = std::min(2 * cutoff, kMaxAutoCutoff);
    }
}

WignerField empty_field(const PhaseSpaceGrid& grid, WignerKind kind) {
    WignerField f;
    f.grid = grid;
    f.kind = kind;
    f.values.assign(grid.size(), 0.0);
    return f;
}

}  // namespace

void PhaseSpaceGrid::validate() const {
    if (n_re < 2 || n_im < 2) throw std::invalid_argument("PhaseSpaceGrid: need at least 2 points per axis");
    for (double v : {re_min, re_max, im_min, im_max}) {
        if (!std::isfinite(v)) throw std::invalid_argument("PhaseSpaceGrid: bounds must be finite");
    }
    if (!(re_max > re_min) || !(im_max > im_min)) {
        throw std::invalid_argument("PhaseSpaceGrid: max bound must exceed min bound");
    }
}

std::string to_string(WignerKind kind) {
    switch (kind) {
        case WignerKind::reduced: return "reduced";
        case WignerKind::level1: return "level1";
        case WignerKind::level2: return "level2";
        case WignerKind::level3: return "level3";
    }
    return "unknown";
}

WignerKind conditioned_kind(int level) {
    switch (level) {
        case 1: return WignerKind::level1;
        case 2: return WignerKind::level2;
        case 3: return WignerKind::level3;
        default: throw std::invalid_argument("conditioning level must be 1, 2 or 3");
    }
}

double WignerField::min() const {
    return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
}

double WignerField::max() const {
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

double WignerField::integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * grid.step_re() * grid.step_im();
}

EmptySectorError::EmptySectorError(int level, double population)
    : std::runtime_error("empty sector: atomic level " + std::to_string(level) + " has population " +
                         std::to_string(population)),
      level_(level) {}

std::array<FieldSector, 3> field_sectors(const TriLevelState& state) {
    const auto blocks = static_cast<std::size_t>(state.n_max()) + 1;
    std::array<FieldSector, 3> s;
    s[2] = state.c3;
    s[1].reserve(blocks + 1);
    s[1].push_back(state.b2);
    s[1].insert(s[1].end(), state.c2.begin(), state.c2.end());
    s[0].reserve(blocks + 2);
    s[0].push_back(state.s1);
    s[0].push_back(state.b1);
    s[0].insert(s[0].end(), state.c1.begin(), state.c1.end());
    return s;
}

complex displaced_number_overlap(complex beta, int k, int n) {
    if (k < 0 || n < 0) throw std::invalid_argument("displaced_number_overlap: k and n must be >= 0");
    const double x = std::norm(beta);
    if (x == 0.0) return k == n ? complex{1.0} : complex{};
    const int m = std::abs(k - n);
    const int degree = std::min(k, n);
    const Tables tables(degree + m + 2);
    DiagonalRecurrence rec(m, x, tables.sqrt_int, tables.log_factorial[static_cast<std::size_t>(m)]);
    for (int d = 0; d < degree; ++d) rec.advance();
    const double sign = (n > k && m % 2 == 1) ? -1.0 : 1.0;
    const double theta = std::arg(-beta);
    return sign * rec.value() * std::polar(1.0, theta * static_cast<double>(k - n));
}

SeriesValue wigner_series(std::span<const FieldSector> sectors, complex beta, int k_max) {
    const PreparedSectors prep = prepare(sectors);
    const PointResult r = evaluate_point(prep, beta, k_max);
    SeriesValue out;
    for (double v : r.sums.values) out.value += v;
    out.relative_tail = r.worst_tail;
    out.k_max = r.cutoff;
    return out;
}

double wigner_parity_form(std::span<const FieldSector> sectors, complex beta, int dim) {
    int support = 0;
    for (const auto& s : sectors) support = std::max(support, static_cast<int>(s.size()) - 1);
    if (dim <= 0) {
        const double reach = std::sqrt(static_cast<double>(support)) + std::abs(beta);
        dim = std::max(support + 1, static_cast<int>(std::ceil(reach * reach + 12.0 * reach + 40.0)));
    }
    if (dim < support + 1) throw std::invalid_argument("wigner_parity_form: dimension below state support");

    // D(g) = exp(g a^dag - g* a) = exp(-i H), H = i (g a^dag - g* a), g = -beta.
    const complex g = -beta;
    const complex i_unit{0.0, 1.0};
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k + 1 < dim; ++k) {
        const double s = std::sqrt(k + 1.0);
        h(k + 1, k) = i_unit * g * s;
        h(k, k + 1) = -i_unit * std::conj(g) * s;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) throw std::runtime_error("wigner_parity_form: eigendecomposition failed");
    const Eigen::MatrixXcd& v = solver.eigenvectors();
    Eigen::VectorXcd phases(dim);
    for (int i = 0; i < dim; ++i) phases(i) = std::exp(-i_unit * solver.eigenvalues()(i));

    double total = 0.0;
    for (const auto& s : sectors) {
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
        for (std::size_t n = 0; n < s.size(); ++n) psi(static_cast<Eigen::Index>(n)) = s[n];
        const Eigen::VectorXcd displaced = v * phases.asDiagonal() * (v.adjoint() * psi);
        for (int k = 0; k < dim; ++k) total += (k % 2 == 0 ? 1.0 : -1.0) * std::norm(displaced(k));
    }
    return kWignerBound * total;
}

SectorFields wigner_sector_fields(const TriLevelState& state, const PhaseSpaceGrid& grid,
                                  const SeriesOptions& options) {
    grid.validate();
    const auto sectors = field_sectors(state);
    const PreparedSectors prep = prepare(sectors);

    SectorFields out;
    for (int l = 1; l <= 3; ++l) {
        out.sectors[static_cast<std::size_t>(l - 1)] = empty_field(grid, conditioned_kind(l));
        out.norms[static_cast<std::size_t>(l - 1)] = prep.norms[static_cast<std::size_t>(l - 1)];
    }
    std::vector<double> tails(grid.size(), 0.0);
    const complex rotation = std::polar(1.0, options.frame_rotation);

    detail::parallel_for(static_cast<std::size_t>(grid.n_re), options.threads, [&](std::size_t i_re) {
        for (int i_im = 0; i_im < grid.n_im; ++i_im) {
            const complex beta = grid.point(static_cast<int>(i_re), i_im) * rotation;
            const PointResult r = evaluate_point(prep, beta, options.k_max);
            const std::size_t idx = i_re * static_cast<std::size_t>(grid.n_im) + static_cast<std::size_t>(i_im);
            for (std::size_t s = 0; s < 3; ++s) out.sectors[s].values[idx] = r.sums.values[s];
            tails[idx] = r.worst_tail;
        }
    });

    const double worst = tails.empty() ? 0.0 : *std::max_element(tails.begin(), tails.end());
    for (auto& f : out.sectors) f.max_relative_tail = worst;
    return out;
}

WignerField combine_reduced(const SectorFields& fields) {
    WignerField f = empty_field(fields.sectors[0].grid, WignerKind::reduced);
    f.normalized = false;
    f.max_relative_tail = fields.sectors[0].max_relative_tail;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        f.values[i] = fields.sectors[0].values[i] + fields.sectors[1].values[i] + fields.sectors[2].values[i];
    }
    return f;
}

WignerField select_conditioned(const SectorFields& fields, int level, bool normalize) {
    const auto kind = conditioned_kind(level);
    const auto idx = static_cast<std::size_t>(level - 1);
    WignerField f = fields.sectors[idx];
    f.kind = kind;
    if (normalize) {
        const double norm = fields.norms[idx];
        if (norm <= kEmptySector) throw EmptySectorError(level, norm);
        for (double& v : f.values) v /= norm;
        f.normalized = true;
    }
    return f;
}

WignerField wigner_reduced(const TriLevelState& state, const PhaseSpaceGrid& grid, const SeriesOptions& options) {
    return combine_reduced(wigner_sector_fields(state, grid, options));
}

WignerField wigner_conditioned(const TriLevelState& state, int level, bool normalize, const PhaseSpaceGrid& grid,
                               const SeriesOptions& options) {
    conditioned_kind(level);
    if (normalize) {
        const auto sectors = field_sectors(state);
        double norm = 0.0;
        for (const auto& c : sectors[static_cast<std::size_t>(level - 1)]) norm += std::norm(c);
        if (norm <= kEmptySector) throw EmptySectorError(level, norm);
    }
    return select_conditioned(wigner_sector_fields(state, grid, options), level, normalize);
}

}  // namespace ladderjc
