// runspec.hpp: JSON run specifications: ensemble, reservoir, task list and tolerances
//
// Complex numbers are two-element arrays [re, im]. Unknown keys are rejected at every level
// and validation reports every violation it finds, not just the first.

#pragma once

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "wgqed/errors.hpp"
#include "wgqed/scattering.hpp"
#include "wgqed/spin_model.hpp"
#include "wgqed/two_photon.hpp"

namespace wgqed {

using json = nlohmann::json;

// Presets default to Gamma_tot = 1 and this transition frequency.
inline constexpr double kDefaultPresetOmega = 100.0;

struct PresetSpec {
    PresetFamily family{PresetFamily::SingleAtom};
    double gamma{0.5};
    double gamma_prime{0.5};
    double omega_eg{kDefaultPresetOmega};
    std::optional<double> separation;  // two-atom only; default one wavelength

    double gamma_total() const noexcept {
        const double t = gamma + gamma_prime;
        return t > 0.0 ? t : 1.0;
    }
};

enum class ReservoirMode { Independent, Matrix, SharedPair };

struct ReservoirSpec {
    ReservoirMode mode{ReservoirMode::Independent};
    std::vector<double> gamma_prime;  // independent: one per atom
    Matrix matrix;                    // matrix mode
    double pair_gamma_prime{0.0};    // shared_pair mode
};

struct ExplicitSpec {
    EnsembleConfig config;
    ReservoirSpec reservoir;
};

using EnsembleSpec = std::variant<PresetSpec, ExplicitSpec>;

enum class TaskType { Spectrum, Transmission, Winding, BoundStates, G2, Sweep };

constexpr std::string_view to_string(TaskType t) noexcept {
    switch (t) {
    case TaskType::Spectrum: return "spectrum";
    case TaskType::Transmission: return "transmission";
    case TaskType::Winding: return "winding";
    case TaskType::BoundStates: return "boundstates";
    case TaskType::G2: return "g2";
    case TaskType::Sweep: return "sweep";
    }
    return "unknown";
}

inline std::optional<TaskType> task_type_from(std::string_view s) {
    for (auto t : {TaskType::Spectrum, TaskType::Transmission, TaskType::Winding, TaskType::BoundStates,
                   TaskType::G2, TaskType::Sweep}) {
        if (to_string(t) == s) return t;
    }
    return std::nullopt;
}

enum class SweepParameter { GammaRatio, Gamma, GammaPrime, Separation };

constexpr std::string_view to_string(SweepParameter p) noexcept {
    switch (p) {
    case SweepParameter::GammaRatio: return "gamma_ratio";
    case SweepParameter::Gamma: return "gamma";
    case SweepParameter::GammaPrime: return "gamma_prime";
    case SweepParameter::Separation: return "separation";
    }
    return "unknown";
}

struct TaskSpec {
    TaskType type{TaskType::Spectrum};
    std::optional<std::pair<double, double>> k_span;  // transmission, winding, sweep/transmission
    std::size_t points{1001};                         // transmission, boundstates, g2, sweep/transmission
    std::size_t initial_points{2048};                 // winding
    Mode mode{Mode::Markov};                          // transmission
    std::pair<double, double> z_span{-10.0, 10.0};    // boundstates
    std::pair<double, double> tau_span{-5.0, 5.0};    // g2
    Normalization normalization{Normalization::AsymptoticUnit};
    SweepParameter parameter{SweepParameter::GammaRatio};
    std::pair<double, double> range{0.0, 1.0};
    std::size_t steps{101};
    TaskType inner{TaskType::Spectrum};  // spectrum, winding or transmission
};

struct RunSpec {
    EnsembleSpec ensemble;
    std::vector<TaskSpec> tasks;
    std::optional<double> tol_real;
    std::optional<double> tol_match;
    std::optional<std::string> output_dir;
    json canonical;  // parsed document without output_dir; feeds the manifest hash
};

// ----------------------------------------------------------------------------- resolution

struct ResolvedModel {
    EnsembleConfig config;
    ReservoirCoupling reservoir;
};

inline ReservoirCoupling build_reservoir(const ReservoirSpec& spec, std::size_t n) {
    switch (spec.mode) {
    case ReservoirMode::Independent: {
        auto rates = spec.gamma_prime;
        if (rates.size() == 1 && n > 1) rates.assign(n, rates.front());
        if (rates.size() != n) {
            throw Error(ErrorCode::DimensionMismatch, "independent reservoir needs one rate per atom");
        }
        return independent_reservoir(rates);
    }
    case ReservoirMode::Matrix:
        return ReservoirCoupling(spec.matrix);
    case ReservoirMode::SharedPair:
        if (n != 2) throw Error(ErrorCode::DimensionMismatch, "shared_pair reservoir needs exactly 2 atoms");
        return shared_pair_reservoir(spec.pair_gamma_prime);
    }
    throw Error(ErrorCode::InvalidConfig, "unknown reservoir mode");
}

inline ResolvedModel resolve(const EnsembleSpec& ensemble) {
    if (const auto* p = std::get_if<PresetSpec>(&ensemble)) {
        auto preset = make_preset(p->family, p->gamma, p->gamma_prime, p->omega_eg);
        if (p->separation) {
            if (p->family != PresetFamily::TwoAtom) {
                throw Error(ErrorCode::InvalidConfig, "separation applies to the two_atom preset only");
            }
            preset.config.atoms[0].z = *p->separation;
        }
        return {std::move(preset.config), std::move(preset.reservoir)};
    }
    const auto& e = std::get<ExplicitSpec>(ensemble);
    e.config.validate();
    return {e.config, build_reservoir(e.reservoir, e.config.size())};
}

inline SpinModel resolve_model(const EnsembleSpec& ensemble) {
    auto r = resolve(ensemble);
    return build_spin_model(r.config, r.reservoir);
}

// Ensemble with one sweep parameter replaced.
inline EnsembleSpec with_parameter(const EnsembleSpec& ensemble, SweepParameter param, double value) {
    if (auto p = std::get_if<PresetSpec>(&ensemble)) {
        PresetSpec out = *p;
        switch (param) {
        case SweepParameter::GammaRatio: {
            const double total = p->gamma_total();
            out.gamma = value * total;
            out.gamma_prime = (1.0 - value) * total;
            break;
        }
        case SweepParameter::Gamma: out.gamma = value; break;
        case SweepParameter::GammaPrime: out.gamma_prime = value; break;
        case SweepParameter::Separation: out.separation = value; break;
        }
        return out;
    }
    ExplicitSpec out = std::get<ExplicitSpec>(ensemble);
    switch (param) {
    case SweepParameter::Gamma:
        if (value < 0.0) throw Error(ErrorCode::NegativeRate, "gamma must be non-negative");
        for (auto& a : out.config.atoms) {
            const double mag = std::sqrt(2.0 * value);
            a.coupling = std::abs(a.coupling) > 0.0 ? mag * a.coupling / std::abs(a.coupling) : cplx{mag, 0.0};
        }
        break;
    case SweepParameter::GammaPrime:
        if (out.reservoir.mode != ReservoirMode::Independent) {
            throw Error(ErrorCode::InvalidConfig, "gamma_prime sweeps need an independent reservoir");
        }
        out.reservoir.gamma_prime.assign(out.config.size(), value);
        break;
    default:
        throw Error(ErrorCode::InvalidConfig,
                    std::string(to_string(param)) + " sweeps are only defined for presets");
    }
    return out;
}

// ----------------------------------------------------------------------------- parsing

namespace detail {

class Violations {
public:
    void add(std::string msg) { items_.push_back(std::move(msg)); }
    bool empty() const noexcept { return items_.empty(); }
    std::size_t size() const noexcept { return items_.size(); }

    [[noreturn]] void raise() const {
        std::ostringstream os;
        os << items_.size() << " violation(s)";
        for (const auto& v : items_) os << "\n  - " << v;
        throw Error(ErrorCode::ValidationError, os.str());
    }

private:
    std::vector<std::string> items_;
};

inline void check_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed,
                       Violations& v) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || a == key;
        if (!ok) v.add(where + ": unknown key '" + key + "'");
    }
}

inline std::optional<double> get_number(const json& obj, const char* key, const std::string& where, Violations& v) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& x = obj.at(key);
    if (!x.is_number()) {
        v.add(where + "." + key + ": expected a number");
        return std::nullopt;
    }
    const double d = x.get<double>();
    if (!std::isfinite(d)) {
        v.add(where + "." + key + ": must be finite");
        return std::nullopt;
    }
    return d;
}

inline std::optional<std::size_t> get_count(const json& obj, const char* key, const std::string& where, Violations& v) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& x = obj.at(key);
    if (!x.is_number_integer() || x.get<long long>() < 0) {
        v.add(where + "." + key + ": expected a non-negative integer");
        return std::nullopt;
    }
    return static_cast<std::size_t>(x.get<long long>());
}

inline std::optional<std::string> get_string(const json& obj, const char* key, const std::string& where, Violations& v) {
    if (!obj.contains(key)) return std::nullopt;
    if (!obj.at(key).is_string()) {
        v.add(where + "." + key + ": expected a string");
        return std::nullopt;
    }
    return obj.at(key).get<std::string>();
}

inline std::optional<std::pair<double, double>> get_span(const json& obj, const char* key, const std::string& where,
                                                         Violations& v) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& x = obj.at(key);
    if (!x.is_array() || x.size() != 2 || !x[0].is_number() || !x[1].is_number()) {
        v.add(where + "." + key + ": expected [start, stop]");
        return std::nullopt;
    }
    const double a = x[0].get<double>();
    const double b = x[1].get<double>();
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
        v.add(where + "." + key + ": span must be finite with stop > start");
        return std::nullopt;
    }
    return std::pair{a, b};
}

inline std::optional<cplx> as_complex(const json& x) {
    if (x.is_number()) return cplx{x.get<double>(), 0.0};
    if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number()) {
        return cplx{x[0].get<double>(), x[1].get<double>()};
    }
    return std::nullopt;
}

inline PresetSpec parse_preset(const json& e, Violations& v) {
    check_keys(e, "ensemble", {"preset", "gamma", "gamma_prime", "gamma_ratio", "gamma_total", "omega_eg", "separation"}, v);
    PresetSpec p;
    const auto name = get_string(e, "preset", "ensemble", v).value_or("");
    if (name == "single_atom") {
        p.family = PresetFamily::SingleAtom;
    } else if (name == "two_atom") {
        p.family = PresetFamily::TwoAtom;
    } else {
        v.add("ensemble.preset: expected 'single_atom' or 'two_atom', got '" + name + "'");
    }
    p.omega_eg = get_number(e, "omega_eg", "ensemble", v).value_or(kDefaultPresetOmega);
    const auto ratio = get_number(e, "gamma_ratio", "ensemble", v);
    const auto total = get_number(e, "gamma_total", "ensemble", v);
    const auto g = get_number(e, "gamma", "ensemble", v);
    const auto gp = get_number(e, "gamma_prime", "ensemble", v);
    if (ratio) {
        if (g || gp) v.add("ensemble: give either gamma_ratio or gamma/gamma_prime, not both");
        if (*ratio < 0.0 || *ratio > 1.0) v.add("ensemble.gamma_ratio: must lie in [0, 1]");
        const double t = total.value_or(1.0);
        if (!(t > 0.0)) v.add("ensemble.gamma_total: must be positive");
        p.gamma = *ratio * t;
        p.gamma_prime = (1.0 - *ratio) * t;
    } else {
        if (total) v.add("ensemble.gamma_total: only meaningful together with gamma_ratio");
        p.gamma = g.value_or(0.5);
        p.gamma_prime = gp.value_or(0.5);
    }
    if (p.gamma < 0.0 || p.gamma_prime < 0.0) v.add("ensemble: decay rates must be non-negative");
    if (p.family == PresetFamily::TwoAtom && !(p.omega_eg > 0.0)) v.add("ensemble.omega_eg: two_atom needs omega_eg > 0");
    p.separation = get_number(e, "separation", "ensemble", v);
    if (p.separation && p.family != PresetFamily::TwoAtom) v.add("ensemble.separation: two_atom preset only");
    return p;
}

inline ReservoirSpec parse_reservoir(const json& r, std::size_t n, Violations& v) {
    ReservoirSpec spec;
    if (!r.is_object()) {
        v.add("reservoir: expected an object");
        return spec;
    }
    const auto mode = get_string(r, "mode", "reservoir", v).value_or("");
    if (mode == "independent") {
        check_keys(r, "reservoir", {"mode", "gamma_prime"}, v);
        spec.mode = ReservoirMode::Independent;
        if (!r.contains("gamma_prime")) {
            v.add("reservoir.gamma_prime: required for independent mode");
        } else if (r.at("gamma_prime").is_number()) {
            spec.gamma_prime.assign(n, r.at("gamma_prime").get<double>());
        } else if (r.at("gamma_prime").is_array()) {
            for (const auto& x : r.at("gamma_prime")) {
                if (!x.is_number()) {
                    v.add("reservoir.gamma_prime: entries must be numbers");
                    break;
                }
                spec.gamma_prime.push_back(x.get<double>());
            }
            if (spec.gamma_prime.size() != n) {
                v.add("reservoir.gamma_prime: has " + std::to_string(spec.gamma_prime.size()) +
                      " entries but the ensemble has " + std::to_string(n) + " atoms");
            }
        } else {
            v.add("reservoir.gamma_prime: expected a number or an array");
        }
        for (double g : spec.gamma_prime) {
            if (!(g >= 0.0)) {
                v.add("reservoir.gamma_prime: rates must be non-negative");
                break;
            }
        }
    } else if (mode == "matrix") {
        check_keys(r, "reservoir", {"mode", "matrix"}, v);
        spec.mode = ReservoirMode::Matrix;
        const auto& m = r.contains("matrix") ? r.at("matrix") : json();
        const auto rows = static_cast<Eigen::Index>(n);
        if (!m.is_array() || m.size() != n) {
            v.add("reservoir.matrix: expected " + std::to_string(n) + " rows");
        } else {
            spec.matrix = Matrix::Zero(rows, rows);
            for (std::size_t i = 0; i < n; ++i) {
                if (!m[i].is_array() || m[i].size() != n) {
                    v.add("reservoir.matrix: row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
                    continue;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const auto c = as_complex(m[i][j]);
                    if (!c) {
                        v.add("reservoir.matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]: expected [re, im]");
                    } else {
                        spec.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = *c;
                    }
                }
            }
        }
    } else if (mode == "shared_pair") {
        check_keys(r, "reservoir", {"mode", "gamma_prime"}, v);
        spec.mode = ReservoirMode::SharedPair;
        spec.pair_gamma_prime = get_number(r, "gamma_prime", "reservoir", v).value_or(0.0);
        if (spec.pair_gamma_prime < 0.0) v.add("reservoir.gamma_prime: must be non-negative");
        if (n != 2) v.add("reservoir: shared_pair mode needs exactly 2 atoms");
    } else {
        v.add("reservoir.mode: expected 'independent', 'matrix' or 'shared_pair', got '" + mode + "'");
    }
    return spec;
}

inline ExplicitSpec parse_explicit(const json& e, const json* reservoir, Violations& v) {
    check_keys(e, "ensemble", {"omega_eg", "atoms"}, v);
    ExplicitSpec spec;
    spec.config.omega_eg = get_number(e, "omega_eg", "ensemble", v).value_or(0.0);
    if (!e.contains("omega_eg")) v.add("ensemble.omega_eg: required");
    if (!e.contains("atoms") || !e.at("atoms").is_array() || e.at("atoms").empty()) {
        v.add("ensemble.atoms: expected a nonempty array");
    } else {
        std::size_t idx = 0;
        for (const auto& a : e.at("atoms")) {
            const std::string where = "ensemble.atoms[" + std::to_string(idx++) + "]";
            if (!a.is_object()) {
                v.add(where + ": expected an object");
                continue;
            }
            check_keys(a, where, {"z", "V"}, v);
            Atom atom;
            atom.z = get_number(a, "z", where, v).value_or(0.0);
            if (!a.contains("z")) v.add(where + ".z: required");
            const auto c = a.contains("V") ? as_complex(a.at("V")) : std::nullopt;
            if (!c || !std::isfinite(c->real()) || !std::isfinite(c->imag())) {
                v.add(where + ".V: expected a finite [re, im]");
            } else {
                atom.coupling = *c;
            }
            spec.config.atoms.push_back(atom);
        }
    }
    if (reservoir == nullptr) {
        v.add("reservoir: required for an explicit ensemble");
    } else {
        spec.reservoir = parse_reservoir(*reservoir, spec.config.size(), v);
    }
    return spec;
}

inline std::optional<Mode> parse_mode(std::string_view s) {
    if (s == "markov") return Mode::Markov;
    if (s == "exact") return Mode::Exact;
    return std::nullopt;
}

inline TaskSpec parse_task(const json& t, const std::string& where, Violations& v, bool nested = false) {
    TaskSpec task;
    if (!t.is_object()) {
        v.add(where + ": expected an object");
        return task;
    }
    const auto type_name = get_string(t, "type", where, v).value_or("");
    const auto type = task_type_from(type_name);
    if (!type) {
        v.add(where + ".type: unknown task type '" + type_name + "'");
        return task;
    }
    task.type = *type;
    auto need_points = [&](const char* key, std::size_t& out, std::size_t minimum) {
        if (auto p = get_count(t, key, where, v)) {
            if (*p < minimum) v.add(where + "." + key + ": must be at least " + std::to_string(minimum));
            out = *p;
        }
    };
    switch (task.type) {
    case TaskType::Spectrum:
        check_keys(t, where, {"type"}, v);
        break;
    case TaskType::Transmission:
        check_keys(t, where, {"type", "k_span", "points", "mode"}, v);
        task.k_span = get_span(t, "k_span", where, v);
        need_points("points", task.points, 2);
        if (auto m = get_string(t, "mode", where, v)) {
            if (auto mode = parse_mode(*m)) {
                task.mode = *mode;
            } else {
                v.add(where + ".mode: expected 'markov' or 'exact'");
            }
        }
        break;
    case TaskType::Winding:
        check_keys(t, where, {"type", "k_span", "initial_points"}, v);
        task.k_span = get_span(t, "k_span", where, v);
        need_points("initial_points", task.initial_points, 2);
        break;
    case TaskType::BoundStates:
        check_keys(t, where, {"type", "z_span", "points"}, v);
        task.z_span = get_span(t, "z_span", where, v).value_or(task.z_span);
        task.points = 401;
        need_points("points", task.points, 2);
        break;
    case TaskType::G2: {
        check_keys(t, where, {"type", "tau_span", "points", "normalization"}, v);
        task.tau_span = get_span(t, "tau_span", where, v).value_or(task.tau_span);
        task.points = 201;
        need_points("points", task.points, 2);
        if (auto n = get_string(t, "normalization", where, v)) {
            if (*n == "raw") {
                task.normalization = Normalization::Raw;
            } else if (*n == "asymptotic_unit") {
                task.normalization = Normalization::AsymptoticUnit;
            } else {
                v.add(where + ".normalization: expected 'raw' or 'asymptotic_unit'");
            }
        }
        break;
    }
    case TaskType::Sweep: {
        if (nested) {
            v.add(where + ": sweeps cannot be nested");
            break;
        }
        check_keys(t, where, {"type", "parameter", "range", "steps", "task", "k_span", "points"}, v);
        const auto p = get_string(t, "parameter", where, v).value_or("");
        bool found = false;
        for (auto sp : {SweepParameter::GammaRatio, SweepParameter::Gamma, SweepParameter::GammaPrime,
                        SweepParameter::Separation}) {
            if (to_string(sp) == p) {
                task.parameter = sp;
                found = true;
            }
        }
        if (!found) v.add(where + ".parameter: expected gamma_ratio, gamma, gamma_prime or separation");
        if (!t.contains("range")) {
            v.add(where + ".range: required");
        } else if (auto r = get_span(t, "range", where, v)) {
            task.range = *r;
        }
        need_points("steps", task.steps, 2);
        task.points = 512;
        need_points("points", task.points, 2);
        task.k_span = get_span(t, "k_span", where, v);
        const auto inner = get_string(t, "task", where, v).value_or("spectrum");
        const auto it = task_type_from(inner);
        if (!it || (*it != TaskType::Spectrum && *it != TaskType::Winding && *it != TaskType::Transmission)) {
            v.add(where + ".task: inner task must be spectrum, winding or transmission");
        } else {
            task.inner = *it;
        }
        break;
    }
    }
    return task;
}

inline std::string locate(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace detail

inline RunSpec load_runspec(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, detail::locate(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
    }
    detail::Violations v;
    if (!doc.is_object()) {
        v.add("document: expected a JSON object");
        v.raise();
    }
    detail::check_keys(doc, "document", {"ensemble", "reservoir", "tasks", "tolerances", "output_dir"}, v);

    RunSpec spec;
    const std::size_t before_ensemble = v.size();
    const json* reservoir = doc.contains("reservoir") ? &doc.at("reservoir") : nullptr;
    if (!doc.contains("ensemble") || !doc.at("ensemble").is_object()) {
        v.add("ensemble: required object");
    } else if (doc.at("ensemble").contains("preset")) {
        if (reservoir) v.add("reservoir: presets define their own reservoir; remove this key");
        spec.ensemble = detail::parse_preset(doc.at("ensemble"), v);
    } else {
        spec.ensemble = detail::parse_explicit(doc.at("ensemble"), reservoir, v);
    }
    const bool ensemble_parsed = v.size() == before_ensemble;

    if (doc.contains("tasks")) {
        if (!doc.at("tasks").is_array()) {
            v.add("tasks: expected an array");
        } else {
            std::size_t i = 0;
            for (const auto& t : doc.at("tasks")) {
                spec.tasks.push_back(detail::parse_task(t, "tasks[" + std::to_string(i++) + "]", v));
            }
        }
    }
    if (doc.contains("tolerances")) {
        const auto& tol = doc.at("tolerances");
        if (!tol.is_object()) {
            v.add("tolerances: expected an object");
        } else {
            detail::check_keys(tol, "tolerances", {"tol_real", "tol_match"}, v);
            spec.tol_real = detail::get_number(tol, "tol_real", "tolerances", v);
            spec.tol_match = detail::get_number(tol, "tol_match", "tolerances", v);
            if ((spec.tol_real && *spec.tol_real < 0.0) || (spec.tol_match && *spec.tol_match < 0.0)) {
                v.add("tolerances: must be non-negative");
            }
        }
    }
    spec.output_dir = detail::get_string(doc, "output_dir", "document", v);

    // Physical validation of whatever parsed cleanly.
    if (ensemble_parsed) {
        try {
            resolve(spec.ensemble);
        } catch (const Error& e) {
            v.add(std::string("ensemble/reservoir: ") + e.what());
        }
    }
    if (v.empty()) {
        for (std::size_t i = 0; i < spec.tasks.size(); ++i) {
            const auto& t = spec.tasks[i];
            if (t.type == TaskType::Sweep) {
                try {
                    with_parameter(spec.ensemble, t.parameter, t.range.first);
                } catch (const Error& e) {
                    v.add("tasks[" + std::to_string(i) + "]: " + e.what());
                }
                if (t.parameter == SweepParameter::GammaRatio && (t.range.first < 0.0 || t.range.second > 1.0)) {
                    v.add("tasks[" + std::to_string(i) + "].range: gamma_ratio must stay within [0, 1]");
                }
            }
        }
    }
    if (!v.empty()) v.raise();

    spec.canonical = doc;
    spec.canonical.erase("output_dir");
    return spec;
}

inline RunSpec load_runspec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_runspec(ss.str());
}

} // namespace wgqed
