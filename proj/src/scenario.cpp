#include "ladderjc/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "ladderjc/oracle.hpp"
#include "ladderjc/propagator.hpp"
#include "parallel.hpp"

namespace ladderjc::scenario {

using nlohmann::json;

namespace {

constexpr double kNormalizationTolerance = 1e-8;

// ---------------------------------------------------------------- parsing

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

// Reads the fields of one JSON object and rejects whatever was not consumed.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    [[nodiscard]] bool has(const std::string& key) const { return obj_.contains(key); }
    [[nodiscard]] std::string path(const std::string& key) const { return join(path_, key); }

    const json& required(const std::string& key) {
        if (!obj_.contains(key)) throw ConfigError(path(key), "missing required field");
        seen_.insert(key);
        return obj_.at(key);
    }

    const json* optional(const std::string& key) {
        if (!obj_.contains(key)) return nullptr;
        seen_.insert(key);
        return &obj_.at(key);
    }

    void finish() const {
        for (const auto& item : obj_.items()) {
            if (!seen_.count(item.key())) throw ConfigError(path(item.key()), "unknown field");
        }
    }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

double read_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
    return d;
}

int read_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
    return v.get<int>();
}

bool read_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
    return v.get<bool>();
}

complex read_complex(const json& v, const std::string& path) {
    if (v.is_number()) return {read_number(v, path), 0.0};
    if (v.is_array() && v.size() == 2) {
        return {read_number(v[0], path + "[0]"), read_number(v[1], path + "[1]")};
    }
    throw ConfigError(path, "expected a number or a [re, im] pair");
}

template <typename T, typename Fn>
std::vector<T> read_list(const json& v, const std::string& path, Fn&& read_item) {
    if (!v.is_array()) throw ConfigError(path, "expected a list");
    std::vector<T> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(read_item(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

int read_level(const json& v, const std::string& path) {
    const int l = read_int(v, path);
    if (l < 1 || l > 3) throw ConfigError(path, "atomic level must be 1, 2 or 3");
    return l;
}

ModelParams parse_params(const json& v) {
    ObjectReader r(v, "params");
    ModelParams p;
    p.omega_c = read_number(r.required("omega_c"), r.path("omega_c"));
    p.omega_0 = read_number(r.required("omega_0"), r.path("omega_0"));
    p.g = read_number(r.required("g"), r.path("g"));
    r.finish();
    if (p.g < 0.0) throw ConfigError("params.g", "coupling must be non-negative");
    return p;
}

FieldSpec parse_field(const json& v) {
    ObjectReader r(v, "field");
    FieldSpec f;
    const json& kind = r.required("kind");
    if (!kind.is_string()) throw ConfigError("field.kind", "expected a string");
    const auto k = kind.get<std::string>();
    if (k == "coherent") {
        f.kind = FieldSpec::Kind::coherent;
        f.alpha = read_complex(r.required("alpha"), "field.alpha");
    } else if (k == "fock") {
        f.kind = FieldSpec::Kind::fock;
        f.fock_n = read_int(r.required("n"), "field.n");
        if (f.fock_n < 0) throw ConfigError("field.n", "photon number must be >= 0");
    } else if (k == "amplitudes") {
        f.kind = FieldSpec::Kind::amplitudes;
        f.amplitudes = read_list<complex>(r.required("list"), "field.list", read_complex);
        if (f.amplitudes.empty()) throw ConfigError("field.list", "need at least one amplitude");
        double norm = 0.0;
        for (const auto& c : f.amplitudes) norm += std::norm(c);
        if (std::abs(norm - 1.0) > kNormalizationTolerance) {
            throw ConfigError("field.list", "amplitudes must be normalized");
        }
    } else {
        throw ConfigError("field.kind", "expected \"coherent\", \"fock\" or \"amplitudes\"");
    }
    r.finish();
    return f;
}

AtomSpec parse_atom(const json& v) {
    ObjectReader r(v, "atom");
    AtomSpec a;
    if (const json* level = r.optional("level")) a.level = read_level(*level, "atom.level");
    if (const json* weights = r.optional("weights")) {
        const auto w = read_list<complex>(*weights, "atom.weights", read_complex);
        if (w.size() != 3) throw ConfigError("atom.weights", "expected three weights (w1, w2, w3)");
        a.weights = std::array<complex, 3>{w[0], w[1], w[2]};
        const double norm = std::norm(w[0]) + std::norm(w[1]) + std::norm(w[2]);
        if (std::abs(norm - 1.0) > kNormalizationTolerance) {
            throw ConfigError("atom.weights", "weights must be normalized");
        }
    }
    r.finish();
    if (a.level.has_value() == a.weights.has_value()) {
        throw ConfigError("atom", "give exactly one of \"level\" or \"weights\"");
    }
    return a;
}

TimeSpec parse_times(const json& v) {
    ObjectReader r(v, "times");
    TimeSpec t;
    t.t_start = read_number(r.required("t_start"), "times.t_start");
    t.t_end = read_number(r.required("t_end"), "times.t_end");
    t.samples = read_int(r.required("samples"), "times.samples");
    r.finish();
    if (t.t_start < 0.0) throw ConfigError("times.t_start", "must be >= 0");
    if (!(t.t_end > t.t_start)) throw ConfigError("times.t_end", "must exceed t_start");
    if (t.samples < 2) throw ConfigError("times.samples", "must be >= 2");
    return t;
}

TruncationSpec parse_truncation(const json& v) {
    ObjectReader r(v, "truncation");
    TruncationSpec t;
    if (const json* n = r.optional("n_max")) {
        t.n_max = read_int(*n, "truncation.n_max");
        if (*t.n_max < 0) throw ConfigError("truncation.n_max", "must be >= 0");
    }
    if (const json* tol = r.optional("tail_tolerance")) {
        t.tail_tolerance = read_number(*tol, "truncation.tail_tolerance");
        if (!(t.tail_tolerance > 0.0 && t.tail_tolerance < 1.0)) {
            throw ConfigError("truncation.tail_tolerance", "must lie in (0, 1)");
        }
    }
    if (const json* n = r.optional("oracle_n_max")) {
        t.oracle_n_max = read_int(*n, "truncation.oracle_n_max");
        if (*t.oracle_n_max < 2) throw ConfigError("truncation.oracle_n_max", "must be >= 2");
    }
    r.finish();
    return t;
}

PhaseSpaceGrid parse_grid(const json& v) {
    ObjectReader r(v, "wigner.grid");
    PhaseSpaceGrid g;
    g.re_min = read_number(r.required("re_min"), "wigner.grid.re_min");
    g.re_max = read_number(r.required("re_max"), "wigner.grid.re_max");
    g.im_min = read_number(r.required("im_min"), "wigner.grid.im_min");
    g.im_max = read_number(r.required("im_max"), "wigner.grid.im_max");
    g.n_re = read_int(r.required("n_re"), "wigner.grid.n_re");
    g.n_im = read_int(r.required("n_im"), "wigner.grid.n_im");
    r.finish();
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("wigner.grid", e.what());
    }
    return g;
}

WignerSpec parse_wigner(const json& v) {
    ObjectReader r(v, "wigner");
    WignerSpec w;
    w.times = read_list<double>(r.required("times"), "wigner.times", read_number);
    if (w.times.empty()) throw ConfigError("wigner.times", "need at least one time");
    for (double t : w.times) {
        if (t < 0.0) throw ConfigError("wigner.times", "times must be >= 0");
    }
    w.grid = parse_grid(r.required("grid"));
    if (const json* c = r.optional("conditioning")) w.conditioning = read_list<int>(*c, "wigner.conditioning", read_level);
    if (const json* n = r.optional("normalize")) w.normalize = read_bool(*n, "wigner.normalize");
    if (const json* k = r.optional("k_max")) {
        w.k_max = read_int(*k, "wigner.k_max");
        if (w.k_max < 0) throw ConfigError("wigner.k_max", "must be >= 0 (0 selects the cutoff automatically)");
    }
    if (const json* f = r.optional("frame")) {
        if (!f->is_string()) throw ConfigError("wigner.frame", "expected a string");
        w.frame = f->get<std::string>();
        if (w.frame != "interaction" && w.frame != "lab") {
            throw ConfigError("wigner.frame", "expected \"interaction\" or \"lab\"");
        }
    }
    r.finish();
    return w;
}

SweepSpec parse_sweep(const json& v) {
    ObjectReader r(v, "sweep");
    SweepSpec s;
    if (const json* a = r.optional("alphas")) s.alphas = read_list<complex>(*a, "sweep.alphas", read_complex);
    if (const json* l = r.optional("levels")) s.levels = read_list<int>(*l, "sweep.levels", read_level);
    if (const json* d = r.optional("detunings")) s.detunings = read_list<double>(*d, "sweep.detunings", read_number);
    r.finish();
    return s;
}

json complex_json(complex c) { return json::array({c.real(), c.imag()}); }

// ---------------------------------------------------------------- output

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
    if (dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::string optional_double(const std::optional<double>& v) {
    return v ? format_double(*v) : format_double(std::nan(""));
}

double frame_rotation(const ScenarioConfig& config, double t) {
    return (config.wigner && config.wigner->frame == "lab") ? config.params.omega_c * t : 0.0;
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

AtomicPreparation AtomSpec::preparation() const {
    if (level) return AtomicPreparation::level(*level);
    if (weights) return AtomicPreparation::superposition((*weights)[0], (*weights)[1], (*weights)[2]);
    throw ConfigError("atom", "no atomic preparation given");
}

std::vector<double> TimeSpec::points() const {
    std::vector<double> t(static_cast<std::size_t>(samples));
    const double step = (t_end - t_start) / (samples - 1);
    for (int i = 0; i < samples; ++i) t[static_cast<std::size_t>(i)] = t_start + i * step;
    t.back() = t_end;
    return t;
}

ScenarioConfig parse_config(const json& doc) {
    ObjectReader r(doc, "");
    ScenarioConfig c;
    c.params = parse_params(r.required("params"));
    c.field = parse_field(r.required("field"));
    c.atom = parse_atom(r.required("atom"));
    c.times = parse_times(r.required("times"));
    if (const json* t = r.optional("truncation")) c.truncation = parse_truncation(*t);
    if (const json* w = r.optional("wigner")) c.wigner = parse_wigner(*w);
    if (const json* s = r.optional("sweep")) c.sweep = parse_sweep(*s);
    if (const json* o = r.optional("outputs")) {
        if (!o->is_string()) throw ConfigError("outputs", "expected a directory path string");
        c.outputs = o->get<std::string>();
    }
    r.finish();

    if (c.field.kind == FieldSpec::Kind::fock && c.truncation.n_max && *c.truncation.n_max < c.field.fock_n) {
        throw ConfigError("truncation.n_max", "below the Fock photon number");
    }
    if (c.field.kind == FieldSpec::Kind::amplitudes && c.truncation.n_max &&
        *c.truncation.n_max + 1 < static_cast<int>(c.field.amplitudes.size())) {
        throw ConfigError("truncation.n_max", "shorter than the amplitude list");
    }
    if (c.sweep && !c.sweep->alphas.empty() && c.field.kind != FieldSpec::Kind::coherent) {
        throw ConfigError("sweep.alphas", "alpha sweeps need a coherent field");
    }
    return c;
}

ScenarioConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<json>", e.what());
    }
    return parse_config(doc);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("<file>", "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

json to_json(const ScenarioConfig& c) {
    json doc;
    doc["params"] = {{"omega_c", c.params.omega_c}, {"omega_0", c.params.omega_0}, {"g", c.params.g}};
    switch (c.field.kind) {
        case FieldSpec::Kind::coherent:
            doc["field"] = {{"kind", "coherent"}, {"alpha", complex_json(c.field.alpha)}};
            break;
        case FieldSpec::Kind::fock:
            doc["field"] = {{"kind", "fock"}, {"n", c.field.fock_n}};
            break;
        case FieldSpec::Kind::amplitudes: {
            json list = json::array();
            for (const auto& a : c.field.amplitudes) list.push_back(complex_json(a));
            doc["field"] = {{"kind", "amplitudes"}, {"list", list}};
            break;
        }
    }
    if (c.atom.level) {
        doc["atom"] = {{"level", *c.atom.level}};
    } else if (c.atom.weights) {
        json w = json::array();
        for (const auto& x : *c.atom.weights) w.push_back(complex_json(x));
        doc["atom"] = {{"weights", w}};
    }
    doc["times"] = {{"t_start", c.times.t_start}, {"t_end", c.times.t_end}, {"samples", c.times.samples}};
    json trunc = {{"tail_tolerance", c.truncation.tail_tolerance}};
    if (c.truncation.n_max) trunc["n_max"] = *c.truncation.n_max;
    if (c.truncation.oracle_n_max) trunc["oracle_n_max"] = *c.truncation.oracle_n_max;
    doc["truncation"] = trunc;
    if (c.wigner) {
        const auto& w = *c.wigner;
        doc["wigner"] = {
            {"times", w.times},
            {"grid",
             {{"re_min", w.grid.re_min}, {"re_max", w.grid.re_max}, {"im_min", w.grid.im_min},
              {"im_max", w.grid.im_max}, {"n_re", w.grid.n_re}, {"n_im", w.grid.n_im}}},
            {"conditioning", w.conditioning},
            {"normalize", w.normalize},
            {"k_max", w.k_max},
            {"frame", w.frame},
        };
    }
    if (c.sweep) {
        json alphas = json::array();
        for (const auto& a : c.sweep->alphas) alphas.push_back(complex_json(a));
        doc["sweep"] = {{"alphas", alphas}, {"levels", c.sweep->levels}, {"detunings", c.sweep->detunings}};
    }
    if (c.outputs) doc["outputs"] = *c.outputs;
    return doc;
}

int resolve_n_max(const ScenarioConfig& c) {
    if (c.truncation.n_max) return *c.truncation.n_max;
    switch (c.field.kind) {
        case FieldSpec::Kind::coherent: return suggest_truncation(c.field.alpha, c.truncation.tail_tolerance);
        case FieldSpec::Kind::fock: return std::max(c.field.fock_n, 2);
        case FieldSpec::Kind::amplitudes: return std::max(static_cast<int>(c.field.amplitudes.size()) - 1, 2);
    }
    return kDefaultTruncation;
}

PreparedField prepare_field(const ScenarioConfig& c, int n_max) {
    std::vector<complex> amps(static_cast<std::size_t>(n_max) + 1);
    switch (c.field.kind) {
        case FieldSpec::Kind::coherent: {
            const auto raw = coherent_amplitudes(c.field.alpha, n_max);
            std::copy(raw.amplitudes().begin(), raw.amplitudes().end(), amps.begin());
            break;
        }
        case FieldSpec::Kind::fock:
            if (c.field.fock_n > n_max) throw ConfigError("truncation.n_max", "below the Fock photon number");
            amps[static_cast<std::size_t>(c.field.fock_n)] = 1.0;
            break;
        case FieldSpec::Kind::amplitudes:
            for (std::size_t i = 0; i < c.field.amplitudes.size() && i < amps.size(); ++i) amps[i] = c.field.amplitudes[i];
            break;
    }
    TruncatedFockVector raw(std::move(amps));
    const double tail = std::max(0.0, 1.0 - raw.norm_squared());
    return PreparedField{raw.normalized(), tail, tail > c.truncation.tail_tolerance};
}

EvolutionSeries compute_evolution(const ScenarioConfig& config, int threads) {
    const int n_max = resolve_n_max(config);
    const PreparedField prepared = prepare_field(config, n_max);
    const TriLevelState state0 = initial_state(prepared.field, config.atom.preparation());
    const auto times = config.times.points();

    EvolutionSeries series;
    series.tail_mass = prepared.tail_mass;
    series.truncation_warning = prepared.truncation_warning;
    series.populations.resize(times.size());
    series.photon_stats.resize(times.size());
    detail::parallel_for(times.size(), threads, [&](std::size_t i) {
        const TriLevelState s = evolve(state0, config.params, times[i]);
        series.populations[i] = PopulationRecord{times[i], level_populations(s)};
        series.photon_stats[i] = PhotonStatsRecord{times[i], photon_statistics(s)};
    });
    return series;
}

std::vector<std::string> VerifyReport::failing_metrics() const {
    std::vector<std::string> failing;
    if (!(max_amplitude_dev <= VerifyThresholds::amplitude)) failing.emplace_back("max_amplitude_dev");
    if (!(max_population_dev <= VerifyThresholds::population)) failing.emplace_back("max_population_dev");
    if (!(max_mean_n_dev <= VerifyThresholds::mean_n)) failing.emplace_back("max_meanN_dev");
    if (!(unitarity_max <= VerifyThresholds::unitarity)) failing.emplace_back("unitarity_max");
    if (!(norm_drift <= VerifyThresholds::norm)) failing.emplace_back("norm_drift");
    return failing;
}

json VerifyReport::to_json() const {
    json doc = {
        {"max_amplitude_dev", max_amplitude_dev},
        {"max_population_dev", max_population_dev},
        {"max_meanN_dev", max_mean_n_dev},
        {"unitarity_max", unitarity_max},
        {"norm_drift", norm_drift},
        {"n_max", n_max},
        {"oracle_n_max", oracle_n_max},
        {"thresholds",
         {{"max_amplitude_dev", VerifyThresholds::amplitude},
          {"max_population_dev", VerifyThresholds::population},
          {"max_meanN_dev", VerifyThresholds::mean_n},
          {"unitarity_max", VerifyThresholds::unitarity},
          {"norm_drift", VerifyThresholds::norm}}},
        {"passed", passed()},
        {"failing", failing_metrics()},
    };
    if (formulas) {
        json f = json::object();
        for (const auto& e : formulas->entries) f[e.label] = e.max_abs_deviation;
        doc["mean_photon_formulas"] = f;
    }
    return doc;
}

VerifyReport compute_verification(const ScenarioConfig& config, int threads) {
    const int n_max = resolve_n_max(config);
    const int oracle_n_max = std::max(config.truncation.oracle_n_max.value_or(n_max), 2);
    const auto times = config.times.points();
    const AtomicPreparation atom = config.atom.preparation();

    const PreparedField analytic_field = prepare_field(config, n_max);
    const TriLevelState state0 = initial_state(analytic_field.field, atom);
    const double norm0 = state0.norm_squared();

    const PreparedField oracle_field = prepare_field(config, oracle_n_max);
    const oracle::FullStateVector psi0 = oracle::product_state(oracle_field.field, atom);
    const oracle::LabFrameEvolver lab(oracle::build_full_hamiltonian(config.params, oracle_n_max));
    const double oracle_norm0 = psi0.norm_squared();

    // Blocks touching the top three Fock levels of either truncation are not compared.
    const int compared_blocks = std::min(n_max, oracle_n_max) - 3;

    struct Sample {
        double amplitude = 0.0, population = 0.0, mean_n = 0.0, unitarity = 0.0, norm = 0.0, direct_mean = 0.0;
    };
    std::vector<Sample> samples(times.size());
    detail::parallel_for(times.size(), threads, [&](std::size_t i) {
        const double t = times[i];
        Sample s;
        for (int n = 0; n <= n_max; ++n) {
            s.unitarity = std::max(s.unitarity, unitarity_defect(block_propagator(n, config.params, t).entries));
        }
        s.unitarity = std::max(s.unitarity, unitarity_defect(boundary_block_matrices(config.params, t).two_by_two));

        const TriLevelState a = evolve(state0, config.params, t);
        const oracle::FullStateVector o =
            oracle::to_interaction_picture(lab.evolve(psi0, t), config.params, t);

        auto dev = [&](complex analytic, int photons, int level) {
            const complex ref = photons <= oracle_n_max ? o.at(photons, level) : complex{};
            s.amplitude = std::max(s.amplitude, std::abs(analytic - ref));
        };
        for (int n = 0; n <= compared_blocks; ++n) {
            const auto k = static_cast<std::size_t>(n);
            dev(a.c3[k], n, 3);
            dev(a.c2[k], n + 1, 2);
            dev(a.c1[k], n + 2, 1);
        }
        dev(a.b2, 0, 2);
        dev(a.b1, 1, 1);
        dev(a.s1, 0, 1);

        const LevelPopulations pa = level_populations(a);
        const auto po = oracle::level_populations(o);
        s.population = std::max({std::abs(pa.p1 - po[0]), std::abs(pa.p2 - po[1]), std::abs(pa.p3 - po[2])});
        const PhotonMoments ma = photon_moments(a);
        s.mean_n = std::abs(ma.mean - oracle::photon_moments(o).mean);
        s.direct_mean = ma.mean;
        s.norm = std::max(std::abs(a.norm_squared() - norm0), std::abs(o.norm_squared() - oracle_norm0));
        samples[i] = s;
    });

    VerifyReport report;
    report.n_max = n_max;
    report.oracle_n_max = oracle_n_max;
    std::vector<double> direct_means;
    for (const auto& s : samples) {
        report.max_amplitude_dev = std::max(report.max_amplitude_dev, s.amplitude);
        report.max_population_dev = std::max(report.max_population_dev, s.population);
        report.max_mean_n_dev = std::max(report.max_mean_n_dev, s.mean_n);
        report.unitarity_max = std::max(report.unitarity_max, s.unitarity);
        report.norm_drift = std::max(report.norm_drift, s.norm);
        direct_means.push_back(s.direct_mean);
    }

    // Closed-form mean photon numbers only exist for a resonant, single-level start.
    if (config.params.detuning() == 0.0 && config.params.g > 0.0 && config.atom.level) {
        const PhotonDistribution dist = analytic_field.field.distribution();
        const std::span<const double> direct(direct_means);
        const std::span<const double> none;
        switch (*config.atom.level) {
            case 3: report.formulas = compare_mean_photon_formulas(dist, config.params.g, times, direct, none, none); break;
            case 2: report.formulas = compare_mean_photon_formulas(dist, config.params.g, times, none, direct, none); break;
            case 1: report.formulas = compare_mean_photon_formulas(dist, config.params.g, times, none, none, direct); break;
        }
    }
    return report;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string time_label(double t) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, t);
    return std::string(buf, res.ptr);
}

int run_evolve(const ScenarioConfig& config, const RunOptions& options, std::ostream& log) {
    const EvolutionSeries series = compute_evolution(config, options.threads);
    if (series.truncation_warning) {
        log << "warning: truncated field tail mass " << format_double(series.tail_mass)
            << " exceeds tolerance " << format_double(config.truncation.tail_tolerance) << "\n";
        if (options.strict) return kExitTruncationWarning;
    }
    ensure_dir(options.out_dir);

    std::string pops = "t,P1,P2,P3\n";
    for (const auto& r : series.populations) {
        pops += format_double(r.t) + "," + format_double(r.populations.p1) + "," + format_double(r.populations.p2) +
                "," + format_double(r.populations.p3) + "\n";
    }
    std::string stats = "t,mean_n,variance,mandel_q\n";
    for (const auto& r : series.photon_stats) {
        stats += format_double(r.t) + "," + format_double(r.stats.mean_n) + "," + format_double(r.stats.variance) +
                 "," + optional_double(r.stats.mandel_q) + "\n";
    }
    write_text(options.out_dir / "populations.csv", pops);
    write_text(options.out_dir / "photon_stats.csv", stats);
    return kExitOk;
}

int run_wigner(const ScenarioConfig& config, const RunOptions& options, std::ostream& log) {
    if (!config.wigner) throw ConfigError("wigner", "the wigner command needs a \"wigner\" section");
    const WignerSpec& spec = *config.wigner;
    const int n_max = resolve_n_max(config);
    const PreparedField prepared = prepare_field(config, n_max);
    bool warned = false;
    if (prepared.truncation_warning) {
        log << "warning: truncated field tail mass " << format_double(prepared.tail_mass) << " exceeds tolerance\n";
        warned = true;
        if (options.strict) return kExitTruncationWarning;
    }
    const TriLevelState state0 = initial_state(prepared.field, config.atom.preparation());
    ensure_dir(options.out_dir);

    auto write_field = [&](double t, const WignerField& f) {
        const std::string stem = "wigner_t" + time_label(t) + "_" + to_string(f.kind);
        std::string csv = "re_beta,im_beta,w_value\n";
        for (int i = 0; i < f.grid.n_re; ++i) {
            for (int j = 0; j < f.grid.n_im; ++j) {
                const complex beta = f.grid.point(i, j);
                csv += format_double(beta.real()) + "," + format_double(beta.imag()) + "," + format_double(f.at(i, j)) + "\n";
            }
        }
        write_text(options.out_dir / (stem + ".csv"), csv);
        const json meta = {
            {"t", t},
            {"kind", to_string(f.kind)},
            {"normalized", f.normalized},
            {"frame", spec.frame},
            {"grid",
             {{"re_min", f.grid.re_min}, {"re_max", f.grid.re_max}, {"im_min", f.grid.im_min},
              {"im_max", f.grid.im_max}, {"n_re", f.grid.n_re}, {"n_im", f.grid.n_im}}},
            {"min", f.min()},
            {"max", f.max()},
            {"max_relative_tail", f.max_relative_tail},
            {"n_max", n_max},
        };
        write_text(options.out_dir / (stem + ".json"), meta.dump(2) + "\n");
        if (f.tail_warning()) {
            log << "warning: " << stem << ": k-series tail " << format_double(f.max_relative_tail)
                << " exceeds " << format_double(kSeriesTailWarning) << " of the sector norm\n";
            warned = true;
        }
    };

    for (double t : spec.times) {
        const TriLevelState s = evolve(state0, config.params, t);
        SeriesOptions opts;
        opts.k_max = spec.k_max;
        opts.frame_rotation = frame_rotation(config, t);
        opts.threads = options.threads;
        const SectorFields fields = wigner_sector_fields(s, spec.grid, opts);
        write_field(t, combine_reduced(fields));
        for (int level : spec.conditioning) {
            try {
                write_field(t, select_conditioned(fields, level, spec.normalize));
            } catch (const EmptySectorError& e) {
                log << "t=" << time_label(t) << ": " << e.what() << "; skipped\n";
            }
        }
    }
    return (warned && options.strict) ? kExitTruncationWarning : kExitOk;
}

int run_verify(const ScenarioConfig& config, const RunOptions& options, std::ostream& report, std::ostream& log) {
    const VerifyReport r = compute_verification(config, options.threads);
    const std::string text = r.to_json().dump(2) + "\n";
    report << text;
    if (!options.out_dir.empty()) {
        ensure_dir(options.out_dir);
        write_text(options.out_dir / "verify_report.json", text);
    }
    if (!r.passed()) {
        for (const auto& m : r.failing_metrics()) log << "verification failed: " << m << "\n";
        return kExitVerificationFailure;
    }
    return kExitOk;
}

int run_sweep(const ScenarioConfig& config, const RunOptions& options, std::ostream& log) {
    const SweepSpec sweep = config.sweep.value_or(SweepSpec{});
    const std::vector<complex> alphas =
        sweep.alphas.empty() ? std::vector<complex>{config.field.alpha} : sweep.alphas;
    std::vector<int> levels = sweep.levels;
    if (levels.empty()) levels.push_back(config.atom.level.value_or(0));
    const std::vector<double> detunings =
        sweep.detunings.empty() ? std::vector<double>{config.params.detuning()} : sweep.detunings;

    ensure_dir(options.out_dir);
    std::string index = "index,alpha_re,alpha_im,level,detuning,directory,exit_code\n";
    int worst = kExitOk;
    int counter = 0;
    for (const complex alpha : alphas) {
        for (const int level : levels) {
            for (const double delta : detunings) {
                ScenarioConfig run = config;
                run.sweep.reset();
                run.wigner.reset();
                if (config.field.kind == FieldSpec::Kind::coherent) run.field.alpha = alpha;
                if (level != 0) {
                    run.atom.level = level;
                    run.atom.weights.reset();
                }
                run.params.omega_0 = run.params.omega_c + delta;
                char name[32];
                std::snprintf(name, sizeof name, "sweep_%03d", counter);
                RunOptions sub = options;
                sub.out_dir = options.out_dir / name;
                const int code = run_evolve(run, sub, log);
                worst = std::max(worst, code);
                index += std::to_string(counter) + "," + format_double(alpha.real()) + "," + format_double(alpha.imag()) +
                         "," + (level != 0 ? std::to_string(level) : std::string("weights")) + "," +
                         format_double(delta) + "," + name + "," + std::to_string(code) + "\n";
                ++counter;
            }
        }
    }
    write_text(options.out_dir / "sweep_index.csv", index);
    return worst;
}

}  // namespace ladderjc::scenario
