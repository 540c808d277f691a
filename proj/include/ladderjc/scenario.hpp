#pragma once

// Declarative scenario runner behind the `ladderjc` command line tool.
//
// A scenario is a JSON document:
//
//   {
//     "params":     {"omega_c": 0.3, "omega_0": 0.3, "g": 1.0},
//     "field":      {"kind": "coherent", "alpha": [4.0, 0.0]}      // or {"kind": "fock", "n": 3}
//                                                                 // or {"kind": "amplitudes", "list": [...]}
//     "atom":       {"level": 3}                                  // or {"weights": [w1, w2, w3]}
//     "times":      {"t_start": 0, "t_end": 50, "samples": 1001},
//     "truncation": {"n_max": 64, "tail_tolerance": 1e-12, "oracle_n_max": 64},
//     "wigner":     {"times": [0, 18, 45], "grid": {...}, "conditioning": [1, 2, 3],
//                    "normalize": false, "k_max": 0, "frame": "interaction"},
//     "sweep":      {"alphas": [...], "levels": [...], "detunings": [...]},
//     "outputs":    "out/fig2-5"
//   }
//
// Complex numbers are written as a bare number or a [re, im] pair. Unknown
// fields anywhere are rejected.

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ladderjc/fock.hpp"
#include "ladderjc/model.hpp"
#include "ladderjc/observables.hpp"
#include "ladderjc/wigner.hpp"

namespace ladderjc::scenario {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 2,
    kExitTruncationWarning = 3,
    kExitVerificationFailure = 4,
};

/// Validation failure; `field` is a dotted path such as "times.samples".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message);
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct FieldSpec {
    enum class Kind { coherent, fock, amplitudes };
    Kind kind = Kind::coherent;
    complex alpha{};
    int fock_n = 0;
    std::vector<complex> amplitudes;

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

struct AtomSpec {
    std::optional<int> level;
    std::optional<std::array<complex, 3>> weights;

    [[nodiscard]] AtomicPreparation preparation() const;
    friend bool operator==(const AtomSpec&, const AtomSpec&) = default;
};

struct TimeSpec {
    double t_start = 0.0;
    double t_end = 1.0;
    int samples = 2;

    /// Evenly spaced samples, both ends included.
    [[nodiscard]] std::vector<double> points() const;
    friend bool operator==(const TimeSpec&, const TimeSpec&) = default;
};

struct TruncationSpec {
    std::optional<int> n_max;  // chosen from tail_tolerance when absent
    double tail_tolerance = kDefaultTailTolerance;
    std::optional<int> oracle_n_max;  // verify only; defaults to the resolved n_max

    friend bool operator==(const TruncationSpec&, const TruncationSpec&) = default;
};

struct WignerSpec {
    std::vector<double> times;
    PhaseSpaceGrid grid;
    std::vector<int> conditioning;
    bool normalize = false;
    int k_max = 0;
    std::string frame = "interaction";  // or "lab"

    friend bool operator==(const WignerSpec&, const WignerSpec&) = default;
};

struct SweepSpec {
    std::vector<complex> alphas;
    std::vector<int> levels;
    std::vector<double> detunings;

    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct ScenarioConfig {
    ModelParams params;
    FieldSpec field;
    AtomSpec atom;
    TimeSpec times;
    TruncationSpec truncation;
    std::optional<WignerSpec> wigner;
    std::optional<SweepSpec> sweep;
    std::optional<std::string> outputs;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

ScenarioConfig parse_config(const nlohmann::json& doc);
/// Parses JSON text; syntax errors become ConfigError with line/column.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ScenarioConfig& config);

/// Truncation used for the block state.
int resolve_n_max(const ScenarioConfig& config);

struct PreparedField {
    TruncatedFockVector field;
    double tail_mass = 0.0;  // 1 - |c|^2 before renormalization
    bool truncation_warning = false;
};

/// Field state at truncation n_max, renormalized after cutting the tail.
PreparedField prepare_field(const ScenarioConfig& config, int n_max);

struct EvolutionSeries {
    std::vector<PopulationRecord> populations;
    std::vector<PhotonStatsRecord> photon_stats;
    double tail_mass = 0.0;
    bool truncation_warning = false;
};

EvolutionSeries compute_evolution(const ScenarioConfig& config, int threads = 1);

struct VerifyReport {
    double max_amplitude_dev = 0.0;
    double max_population_dev = 0.0;
    double max_mean_n_dev = 0.0;
    double unitarity_max = 0.0;
    double norm_drift = 0.0;
    int n_max = 0;
    int oracle_n_max = 0;
    std::optional<MeanPhotonFormulaReport> formulas;

    /// Names of metrics above their thresholds, in report order.
    [[nodiscard]] std::vector<std::string> failing_metrics() const;
    [[nodiscard]] bool passed() const { return failing_metrics().empty(); }
    [[nodiscard]] nlohmann::json to_json() const;
};

struct VerifyThresholds {
    static constexpr double amplitude = 1e-8;
    static constexpr double population = 1e-8;
    static constexpr double mean_n = 1e-6;
    static constexpr double unitarity = 1e-12;
    static constexpr double norm = 1e-10;
};

VerifyReport compute_verification(const ScenarioConfig& config, int threads = 1);

struct RunOptions {
    std::filesystem::path out_dir;
    bool strict = false;
    int threads = 1;
};

/// Writes populations.csv and photon_stats.csv.
int run_evolve(const ScenarioConfig& config, const RunOptions& options, std::ostream& log);
/// Writes wigner_t{T}_{kind}.csv plus a .json sidecar per field.
int run_wigner(const ScenarioConfig& config, const RunOptions& options, std::ostream& log);
/// Writes verify_report.json and echoes it to `report`.
int run_verify(const ScenarioConfig& config, const RunOptions& options, std::ostream& report, std::ostream& log);
/// Runs `evolve` for every (alpha, level, detuning) combination.
int run_sweep(const ScenarioConfig& config, const RunOptions& options, std::ostream& log);

/// Shortest round-trip text for a time label in file names ("18", "0.5").
std::string time_label(double t);
/// 17 significant digits; "nan" for NaN.
std::string format_double(double v);

}  // namespace ladderjc::scenario
