// runner.hpp: Task execution, sweeps, figure-data recipes and manifest emission
//
// Every task writes into one output directory with an index prefix ("03_winding_trace.csv").
// Output is a pure function of the run spec: shortest round-trip floats, fixed row order,
// no timestamps.

#pragma once

#include <json.hpp>
#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wgqed/errors.hpp"
#include "wgqed/format.hpp"
#include "wgqed/parallel.hpp"
#include "wgqed/runspec.hpp"
#include "wgqed/scattering.hpp"
#include "wgqed/spectral.hpp"
#include "wgqed/spin_model.hpp"
#include "wgqed/two_photon.hpp"

namespace wgqed {

inline constexpr std::string_view kVersion = "1.0.0";
inline constexpr const char* kOutDirEnv = "WGQED_OUT_DIR";
inline constexpr const char* kDefaultOutDir = "wgqed_out";

enum ExitCode : int { kExitOk = 0, kExitSpecFailure = 1, kExitTaskFailure = 2 };

struct RunOverrides {
    std::optional<Mode> mode;
    std::optional<double> tol_real;
    std::optional<double> tol_match;

    json to_json() const {
        json j = json::object();
        if (mode) j["mode"] = std::string(to_string(*mode));
        if (tol_real) j["tol_real"] = *tol_real;
        if (tol_match) j["tol_match"] = *tol_match;
        return j;
    }
};

struct TaskOutcome {
    std::size_t index{0};
    std::string name;
    bool ok{true};
    std::string error;
    std::vector<std::string> files;
    std::vector<std::string> warnings;
};

struct RunResult {
    std::filesystem::path out_dir;
    std::string config_hash;
    std::vector<TaskOutcome> tasks;

    bool ok() const noexcept {
        for (const auto& t : tasks) {
            if (!t.ok) return false;
        }
        return true;
    }
    int exit_code() const noexcept { return ok() ? kExitOk : kExitTaskFailure; }
};

inline std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::InvalidConfig, "SHA-256 digest failed");
    }
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return os.str();
}

// Hash over every input that affects numbers: the spec (sans output_dir), overrides, version.
inline std::string config_hash(const json& canonical, const RunOverrides& overrides) {
    const json doc{{"spec", canonical}, {"overrides", overrides.to_json()}, {"version", std::string(kVersion)}};
    return sha256_hex(doc.dump());
}

// --out, then the spec's output_dir, then the environment, then the default.
inline std::filesystem::path resolve_out_dir(const std::optional<std::string>& cli_out,
                                             const std::optional<std::string>& spec_out) {
    if (cli_out) return *cli_out;
    if (spec_out) return *spec_out;
    if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
    return kDefaultOutDir;
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

// Single-writer file sink; records emission order for the manifest.
class Emitter {
public:
    explicit Emitter(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

    void write(const std::string& name, const std::string& content) {
        std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + (dir_ / name).string());
        out << content;
        files_.push_back(name);
    }

    const std::filesystem::path& dir() const noexcept { return dir_; }
    const std::vector<std::string>& files() const noexcept { return files_; }

private:
    std::filesystem::path dir_;
    std::vector<std::string> files_;
};

// ----------------------------------------------------------------------------- CSV builders

inline std::string eigenvalues_csv(const SpinSpectrum& s) {
    fmt::CsvWriter w({"matrix", "index", "re_E", "im_E"});
    for (Eigen::Index a = 0; a < s.m.size(); ++a) w.add("M", std::size_t(a), s.m.eigenvalues(a).real(), s.m.eigenvalues(a).imag());
    for (Eigen::Index a = 0; a < s.m_tot.size(); ++a) {
        w.add("M_tot", std::size_t(a), s.m_tot.eigenvalues(a).real(), s.m_tot.eigenvalues(a).imag());
    }
    return w.str();
}

inline std::string bound_states_csv(const BoundStateSet& set, Eigen::Index n) {
    std::vector<std::string> header{"re_E", "im_E", "class"};
    for (Eigen::Index j = 0; j < n; ++j) {
        header.push_back("re_e" + std::to_string(j));
        header.push_back("im_e" + std::to_string(j));
    }
    fmt::CsvWriter w(header);
    for (const auto& e : set.entries) {
        std::vector<std::string> row{fmt::num(e.energy.real()), fmt::num(e.energy.imag()), std::string(to_string(e.cls))};
        for (Eigen::Index j = 0; j < n; ++j) {
            row.push_back(fmt::num(e.right(j).real()));
            row.push_back(fmt::num(e.right(j).imag()));
        }
        w.row(row);
    }
    return w.str();
}

inline std::string trace_csv(const std::vector<double>& k, const std::vector<cplx>& t, const std::vector<double>& phase) {
    fmt::CsvWriter w({"k", "re_t", "im_t", "abs_t", "phase_unwrapped"});
    for (std::size_t i = 0; i < k.size(); ++i) w.add(k[i], t[i].real(), t[i].imag(), std::abs(t[i]), phase[i]);
    return w.str();
}

inline std::string trajectory_csv(const std::vector<cplx>& t) {
    fmt::CsvWriter w({"re_t", "im_t"});
    for (const auto& x : t) w.add(x.real(), x.imag());
    return w.str();
}

inline std::string wavefunction_csv(const WavefunctionSample& s) {
    fmt::CsvWriter w({"z", "re_phi", "im_phi", "abs_phi"});
    for (std::size_t i = 0; i < s.z.size(); ++i) w.add(s.z[i], s.photon[i].real(), s.photon[i].imag(), std::abs(s.photon[i]));
    return w.str();
}

// ----------------------------------------------------------------------------- task context

struct TaskContext {
    const RunSpec& spec;
    const RunOverrides& overrides;
    Emitter& emitter;
    TaskOutcome& outcome;

    std::string prefix() const {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%02zu_", outcome.index);
        return buf + outcome.name + "_";
    }

    void write(const std::string& stem, const std::string& content) {
        const auto name = prefix() + stem;
        emitter.write(name, content);
        outcome.files.push_back(name);
    }

    std::optional<Tolerances> tolerances(const SpinModel& model) const {
        const auto real = overrides.tol_real ? overrides.tol_real : spec.tol_real;
        const auto match = overrides.tol_match ? overrides.tol_match : spec.tol_match;
        if (!real && !match) return std::nullopt;
        auto tol = default_tolerances(model.M);
        if (real) tol.tol_real = *real;
        if (match) tol.tol_match = *match;
        return tol;
    }
};

// Rates of a single emitter whose reservoir coupling is pure decay -i Gamma'.
inline EmitterRates single_emitter_rates(const SpinModel& model) {
    if (model.size() != 1) throw Error(ErrorCode::InvalidConfig, "g2 is defined for a single emitter only");
    const cplx kp = model.reservoir.matrix()(0, 0);
    if (kp.real() != 0.0) throw Error(ErrorCode::InvalidConfig, "g2 needs a purely dissipative reservoir (no Lamb shift)");
    return EmitterRates{model.config.atoms[0].gamma(), -kp.imag(), model.config.omega_eg};
}

// ----------------------------------------------------------------------------- tasks

inline void run_spectrum(TaskContext& ctx, const SpinModel& model) {
    const auto s = analyze(model, ctx.tolerances(model));
    ctx.write("K.csv", fmt::matrix_csv(model.K));
    ctx.write("M.csv", fmt::matrix_csv(model.M));
    ctx.write("M_tot.csv", fmt::matrix_csv(model.M_tot));
    ctx.write("eigenvalues.csv", eigenvalues_csv(s));
    ctx.write("boundstates.csv", bound_states_csv(s.states, model.size()));
    fmt::CsvWriter w({"n", "n_bound", "n_zero", "n_bic", "n_b", "defective", "tol_real", "tol_match"});
    w.add(std::size_t(model.size()), s.states.n_bound, s.states.n_zero, s.states.n_bic, s.states.n_b(),
          s.states.defective ? "true" : "false", s.tolerances.tol_real, s.tolerances.tol_match);
    ctx.write("summary.csv", w.str());
    if (s.states.defective) ctx.outcome.warnings.push_back("M or M_tot is numerically defective");
}

inline void run_transmission(TaskContext& ctx, const SpinModel& model, const TaskSpec& task) {
    const Mode mode = ctx.overrides.mode.value_or(task.mode);
    const auto span = task.k_span.value_or(
        default_k_span(model, detail::eigenvalues_only(model.M), detail::eigenvalues_only(model.M_tot)));
    const auto k = linspace(span.first, span.second, task.points);
    const TransmissionEvaluator eval(model, mode);
    const auto t = parallel_map(k.size(), [&](std::size_t i) { return eval(k[i]); });
    ctx.write("trace.csv", trace_csv(k, t, unwrap_phase(t)));
    ctx.write("trajectory.csv", trajectory_csv(t));
    if (mode == Mode::Markov) {
        for (const auto& w : model.config.warnings()) ctx.outcome.warnings.push_back(w);
    }
}

inline void write_winding(TaskContext& ctx, const SpinModel& model, const LevinsonCheck& lc) {
    ctx.write("trace.csv", trace_csv(lc.trace.k, lc.trace.t, lc.trace.phase));
    ctx.write("trajectory.csv", trajectory_csv(lc.trace.t));
    fmt::CsvWriter w({"winding", "n", "n_b", "consistent", "residual", "tail_phase", "points", "unresolved"});
    w.add(lc.winding, std::size_t(model.size()), lc.n_b, lc.consistent ? "true" : "false", lc.trace.residual,
          lc.trace.tail_phase, lc.trace.k.size(), lc.trace.unresolved);
    ctx.write("summary.csv", w.str());
}

inline void run_winding(TaskContext& ctx, const SpinModel& model, const TaskSpec& task) {
    TraceOptions opt;
    opt.k_span = task.k_span;
    opt.initial_points = task.initial_points;
    opt.tolerances = ctx.tolerances(model);
    const auto lc = verify_levinson(model, opt);
    write_winding(ctx, model, lc);
    if (!lc.consistent) {
        throw Error(ErrorCode::ConvergenceFailure, "winding " + std::to_string(lc.winding) + " differs from N - N_B = " +
                                                       std::to_string(static_cast<long>(lc.n) - static_cast<long>(lc.n_b)));
    }
}

inline void run_boundstates(TaskContext& ctx, const SpinModel& model, const TaskSpec& task) {
    const auto s = analyze(model, ctx.tolerances(model));
    const auto z = linspace(task.z_span.first, task.z_span.second, task.points);
    fmt::CsvWriter index({"state", "re_E", "im_E", "class", "right_file", "left_file"});
    std::size_t n = 0;
    for (const auto& e : s.states.entries) {
        if (e.cls != StateClass::Bound) continue;
        const std::string tag = "state" + std::to_string(n);
        const std::string right = tag + "_right.csv";
        const std::string left = tag + "_left.csv";
        ctx.write(right, wavefunction_csv(bound_wavefunction(model, e, Side::Right, z)));
        ctx.write(left, wavefunction_csv(bound_wavefunction(model, e, Side::Left, z)));
        index.add(n, e.energy.real(), e.energy.imag(), to_string(e.cls), ctx.prefix() + right, ctx.prefix() + left);
        ++n;
    }
    ctx.write("index.csv", index.str());
}

inline std::string g2_csv(const TwoPhotonCorrelation& c) {
    fmt::CsvWriter w({"tau", "g2", "abs_psi2_sq"});
    for (std::size_t i = 0; i < c.tau.size(); ++i) w.add(c.tau[i], c.g2[i], std::norm(c.psi2[i]));
    return w.str();
}

inline void run_g2(TaskContext& ctx, const SpinModel& model, const TaskSpec& task) {
    const auto rates = single_emitter_rates(model);
    const auto c = g2(linspace(task.tau_span.first, task.tau_span.second, task.points), rates, task.normalization);
    ctx.write("g2.csv", g2_csv(c));
    if (c.divergent) ctx.outcome.warnings.push_back("resonant transmission vanishes; g2 is infinite for every delay");
}

// ----------------------------------------------------------------------------- sweeps

struct SweepPoint {
    double value{0.0};
    std::string status{"ok"};  // ok, an error code name, or a physics flag
    std::size_t n_b{0};
    std::size_t n_bound{0};
    std::size_t n_zero{0};
    std::size_t n_bic{0};
    std::optional<int> winding;
    std::optional<double> min_abs_t;
    bool failed{false};
};

struct SweepThreshold {
    double lower{0.0};
    double upper{0.0};
    std::optional<Threshold> threshold;
    std::string status{"ok"};
    std::size_t n_b_lower{0};
    std::size_t n_b_upper{0};
};

struct SweepResult {
    SweepParameter parameter{SweepParameter::GammaRatio};
    TaskType inner{TaskType::Spectrum};
    std::vector<SweepPoint> points;
    std::vector<SweepThreshold> thresholds;
};

inline SweepResult sweep(const EnsembleSpec& ensemble, const TaskSpec& task, const RunOverrides& overrides,
                         const std::function<std::optional<Tolerances>(const SpinModel&)>& tolerances) {
    SweepResult out;
    out.parameter = task.parameter;
    out.inner = task.inner;
    const auto values = linspace(task.range.first, task.range.second, task.steps);
    auto model_at = [&](double x) { return resolve_model(with_parameter(ensemble, task.parameter, x)); };

    out.points = parallel_map(
        values.size(),
        [&](std::size_t i) {
            SweepPoint p;
            p.value = values[i];
            try {
                const auto model = model_at(p.value);
                const auto s = analyze(model, tolerances(model));
                p.n_b = s.states.n_b();
                p.n_bound = s.states.n_bound;
                p.n_zero = s.states.n_zero;
                p.n_bic = s.states.n_bic;
                if (task.inner == TaskType::Winding) {
                    TraceOptions opt;
                    opt.k_span = task.k_span;
                    opt.tolerances = tolerances(model);
                    try {
                        p.winding = winding_number(model, opt).winding;
                    } catch (const Error& e) {
                        if (e.code() != ErrorCode::ZeroOnContour && e.code() != ErrorCode::PoleOnGrid) throw;
                        p.status = e.code() == ErrorCode::ZeroOnContour ? "zero_on_contour" : "pole_on_contour";
                    }
                } else if (task.inner == TaskType::Transmission) {
                    const auto span = task.k_span.value_or(default_k_span(
                        model, detail::eigenvalues_only(model.M), detail::eigenvalues_only(model.M_tot)));
                    const TransmissionEvaluator eval(model, overrides.mode.value_or(Mode::Markov));
                    double lo = std::numeric_limits<double>::infinity();
                    for (double k : linspace(span.first, span.second, task.points)) lo = std::min(lo, std::abs(eval(k)));
                    p.min_abs_t = lo;
                }
            } catch (const Error& e) {
                p.status = std::string(to_string(e.code()));
                p.failed = true;
            }
            return p;
        },
        1);

    for (std::size_t i = 0; i + 1 < out.points.size(); ++i) {
        const auto& a = out.points[i];
        const auto& b = out.points[i + 1];
        if (a.failed || b.failed || a.n_b == b.n_b) continue;
        SweepThreshold th;
        th.lower = a.value;
        th.upper = b.value;
        th.n_b_lower = a.n_b;
        th.n_b_upper = b.n_b;
        try {
            th.threshold = bound_state_threshold(model_at, a.value, b.value);
        } catch (const Error& e) {
            th.status = std::string(to_string(e.code()));
        }
        out.thresholds.push_back(th);
    }
    return out;
}

inline std::string sweep_csv(const SweepResult& r) {
    fmt::CsvWriter w({std::string(to_string(r.parameter)), "n_b", "n_bound", "n_zero", "n_bic", "winding", "min_abs_t",
                      "threshold_flag", "status"});
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const auto& p = r.points[i];
        bool flag = p.n_zero > 0 || p.n_bic > 0;
        for (const auto& th : r.thresholds) flag = flag || th.lower == p.value || th.upper == p.value;
        w.add(p.value, p.n_b, p.n_bound, p.n_zero, p.n_bic, p.winding ? fmt::num(*p.winding) : std::string(),
              p.min_abs_t ? fmt::num(*p.min_abs_t) : std::string(), flag ? "true" : "false", p.status);
    }
    return w.str();
}

inline std::string thresholds_csv(const SweepResult& r) {
    fmt::CsvWriter w({"lower", "upper", "n_b_lower", "n_b_upper", "threshold", "re_crossing", "im_crossing", "status"});
    for (const auto& th : r.thresholds) {
        if (th.threshold) {
            w.add(th.lower, th.upper, th.n_b_lower, th.n_b_upper, th.threshold->parameter, th.threshold->crossing.real(),
                  th.threshold->crossing.imag(), th.status);
        } else {
            w.add(th.lower, th.upper, th.n_b_lower, th.n_b_upper, "", "", "", th.status);
        }
    }
    return w.str();
}

inline void run_sweep(TaskContext& ctx, const TaskSpec& task) {
    const auto r = sweep(ctx.spec.ensemble, task, ctx.overrides,
                         [&](const SpinModel& m) { return ctx.tolerances(m); });
    ctx.write("sweep.csv", sweep_csv(r));
    ctx.write("thresholds.csv", thresholds_csv(r));
    std::size_t failed = 0;
    for (const auto& p : r.points) failed += p.failed ? 1 : 0;
    for (const auto& th : r.thresholds) {
        if (!th.threshold) ctx.outcome.warnings.push_back("threshold between " + fmt::num(th.lower) + " and " +
                                                          fmt::num(th.upper) + " not refined: " + th.status);
    }
    if (failed > 0) {
        throw Error(ErrorCode::ConvergenceFailure, std::to_string(failed) + " of " + std::to_string(r.points.size()) +
                                                       " sweep points failed (see status column)");
    }
}

// ----------------------------------------------------------------------------- orchestration

inline void write_manifest(Emitter& emitter, const std::string& hash, const std::vector<TaskOutcome>& tasks,
                           const std::vector<std::string>& warnings) {
    json m;
    m["version"] = std::string(kVersion);
    m["config_hash"] = hash;
    m["status"] = [&] {
        for (const auto& t : tasks) {
            if (!t.ok) return "failed";
        }
        return "ok";
    }();
    json jt = json::array();
    for (const auto& t : tasks) {
        json o{{"index", t.index}, {"task", t.name}, {"status", t.ok ? "ok" : "failed"}, {"files", t.files},
               {"warnings", t.warnings}};
        if (!t.ok) o["error"] = t.error;
        jt.push_back(o);
    }
    m["tasks"] = jt;
    m["warnings"] = warnings;
    m["files"] = emitter.files();
    emitter.write("manifest.json", m.dump(2) + "\n");
}

inline RunResult run(const RunSpec& spec, const RunOverrides& overrides, const std::filesystem::path& out_dir) {
    RunResult result;
    result.out_dir = out_dir;
    result.config_hash = config_hash(spec.canonical, overrides);
    Emitter emitter(out_dir);
    std::vector<std::string> warnings;
    const auto base = resolve(spec.ensemble);
    for (const auto& w : base.config.warnings()) warnings.push_back(w);

    for (std::size_t i = 0; i < spec.tasks.size(); ++i) {
        const auto& task = spec.tasks[i];
        TaskOutcome outcome;
        outcome.index = i;
        outcome.name = std::string(to_string(task.type));
        TaskContext ctx{spec, overrides, emitter, outcome};
        try {
            const auto model = build_spin_model(base.config, base.reservoir);
            switch (task.type) {
            case TaskType::Spectrum: run_spectrum(ctx, model); break;
            case TaskType::Transmission: run_transmission(ctx, model, task); break;
            case TaskType::Winding: run_winding(ctx, model, task); break;
            case TaskType::BoundStates: run_boundstates(ctx, model, task); break;
            case TaskType::G2: run_g2(ctx, model, task); break;
            case TaskType::Sweep: run_sweep(ctx, task); break;
            }
        } catch (const Error& e) {
            outcome.ok = false;
            outcome.error = e.what();
        }
        result.tasks.push_back(std::move(outcome));
    }
    write_manifest(emitter, result.config_hash, result.tasks, warnings);
    return result;
}

// ----------------------------------------------------------------------------- figure recipes

enum class Figure { Fig3a, Fig3b, FigS1 };

inline std::optional<Figure> figure_from(std::string_view s) {
    if (s == "fig3a") return Figure::Fig3a;
    if (s == "fig3b") return Figure::Fig3b;
    if (s == "figS1") return Figure::FigS1;
    return std::nullopt;
}

constexpr std::string_view to_string(Figure f) noexcept {
    switch (f) {
    case Figure::Fig3a: return "fig3a";
    case Figure::Fig3b: return "fig3b";
    case Figure::FigS1: return "figS1";
    }
    return "unknown";
}

inline constexpr double kFigureOmega = kDefaultPresetOmega;

namespace detail {

// Trajectory of t_k for one preset ratio. A transmission zero on the contour leaves the winding
// undefined; the summary then reports the Levinson count N - N_B with a flag.
inline void reproduce_trajectories(TaskContext& ctx, PresetFamily family, const std::vector<double>& ratios) {
    fmt::CsvWriter summary({"ratio", "n", "n_b", "winding", "residual", "points", "flag"});
    for (double ratio : ratios) {
        const auto p = make_preset_from_ratio(family, ratio, kFigureOmega);
        const auto model = build_spin_model(p.config, p.reservoir);
        const auto s = analyze(model, ctx.tolerances(model));
        TraceOptions opt;
        opt.tolerances = ctx.tolerances(model);
        const std::string tag = "ratio_" + fmt::num(ratio);
        std::string flag = "none";
        TransmissionTrace tr;
        try {
            tr = winding_number(model, opt);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ZeroOnContour) throw;
            flag = "zero_on_contour";
            tr = transmission_trace(model, opt);
        }
        const long levinson = static_cast<long>(model.size()) - static_cast<long>(s.states.n_b());
        const long winding = flag == "none" ? tr.winding : levinson;
        if (flag == "none" && winding != levinson) {
            throw Error(ErrorCode::ConvergenceFailure, "ratio " + fmt::num(ratio) + ": winding " + std::to_string(winding) +
                                                           " differs from N - N_B = " + std::to_string(levinson));
        }
        ctx.write(tag + "_trajectory.csv", trajectory_csv(tr.t));
        ctx.write(tag + "_trace.csv", trace_csv(tr.k, tr.t, tr.phase));
        summary.add(ratio, std::size_t(model.size()), s.states.n_b(), static_cast<int>(winding),
                    flag == "none" ? fmt::num(tr.residual) : std::string(), tr.k.size(), flag);
    }
    ctx.write("summary.csv", summary.str());
}

inline void reproduce_thresholds(TaskContext& ctx, PresetFamily family) {
    TaskSpec sweep_task;
    sweep_task.type = TaskType::Sweep;
    sweep_task.parameter = SweepParameter::GammaRatio;
    sweep_task.range = {0.0, 1.0};
    sweep_task.steps = 101;
    const EnsembleSpec ensemble = PresetSpec{family, 0.5, 0.5, kFigureOmega, std::nullopt};
    const auto r = sweep(ensemble, sweep_task, ctx.overrides, [&](const SpinModel& m) { return ctx.tolerances(m); });
    ctx.write("sweep.csv", sweep_csv(r));
    ctx.write("thresholds.csv", thresholds_csv(r));
}

inline void reproduce_g2_map(TaskContext& ctx) {
    const auto ratios = linspace(0.0, 1.0, 101);
    std::vector<double> tau;  // built as step * j so that tau and -tau are exact negatives
    for (int j = -100; j <= 100; ++j) tau.push_back(0.05 * j);
    std::vector<std::string> header{"ratio"};
    for (double t : tau) header.push_back(fmt::num(t));
    fmt::CsvWriter log_g2(header);
    fmt::CsvWriter log_num(header);
    fmt::CsvWriter summary({"ratio", "g2_0", "divergent"});
    const auto rows = parallel_map(ratios.size(), [&](std::size_t i) {
        return g2(tau, EmitterRates{ratios[i], 1.0 - ratios[i], kFigureOmega}, Normalization::AsymptoticUnit);
    }, 1);
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        const auto& c = rows[i];
        std::vector<std::string> a{fmt::num(ratios[i])};
        std::vector<std::string> b{fmt::num(ratios[i])};
        for (std::size_t j = 0; j < tau.size(); ++j) {
            a.push_back(fmt::num(std::log10(c.g2[j])));
            b.push_back(fmt::num(std::log10(c.numerator[j])));
        }
        log_g2.row(a);
        log_num.row(b);
        summary.add(ratios[i], c.g2[tau.size() / 2], c.divergent ? "true" : "false");
    }
    ctx.write("log10_g2.csv", log_g2.str());
    ctx.write("log10_numerator.csv", log_num.str());
    ctx.write("summary.csv", summary.str());
}

} // namespace detail

inline RunResult reproduce(Figure figure, const RunOverrides& overrides, const std::filesystem::path& out_dir) {
    RunSpec spec;
    spec.canonical = json{{"reproduce", std::string(to_string(figure))}};
    spec.tol_real = overrides.tol_real;
    spec.tol_match = overrides.tol_match;
    RunResult result;
    result.out_dir = out_dir;
    result.config_hash = config_hash(spec.canonical, overrides);
    Emitter emitter(out_dir);
    TaskOutcome outcome;
    outcome.name = std::string(to_string(figure));
    TaskContext ctx{spec, overrides, emitter, outcome};
    try {
        switch (figure) {
        case Figure::Fig3a: detail::reproduce_trajectories(ctx, PresetFamily::SingleAtom, {1.0, 0.5, 0.2}); break;
        case Figure::Fig3b:
            detail::reproduce_trajectories(ctx, PresetFamily::TwoAtom, {0.2, 0.65, 0.75});
            detail::reproduce_thresholds(ctx, PresetFamily::TwoAtom);
            break;
        case Figure::FigS1: detail::reproduce_g2_map(ctx); break;
        }
    } catch (const Error& e) {
        outcome.ok = false;
        outcome.error = e.what();
    }
    result.tasks.push_back(std::move(outcome));
    write_manifest(emitter, result.config_hash, result.tasks, {});
    return result;
}

} // namespace wgqed
