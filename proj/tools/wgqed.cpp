// wgqed.cpp: Command-line front end: run specs, single tasks, sweeps and figure recipes

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "wgqed/runner.hpp"
#include "wgqed/runspec.hpp"

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::string> mode;
    std::optional<double> tol_real;
    std::optional<double> tol_match;
};

// Per-task flags; unset ones fall back to the config's task (if any) or the schema defaults.
struct TaskFlags {
    std::vector<double> k_span;
    std::optional<std::size_t> points;
    std::optional<std::size_t> initial_points;
    std::vector<double> z_span;
    std::vector<double> tau_span;
    std::optional<std::string> normalization;
    std::optional<std::string> parameter;
    std::vector<double> range;
    std::optional<std::size_t> steps;
    std::optional<std::string> inner;
};

void add_common(CLI::App* app, CommonFlags& f, bool needs_config) {
    auto* c = app->add_option("--config", f.config, "JSON run specification");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    app->add_option("--out", f.out, "output directory (overrides config and " + std::string(wgqed::kOutDirEnv) + ")");
    app->add_option("--mode", f.mode, "transmission evaluation mode")->check(CLI::IsMember({"markov", "exact"}));
    app->add_option("--tol-real", f.tol_real, "|Im E| below which an eigenvalue counts as real")->check(CLI::NonNegativeNumber);
    app->add_option("--tol-match", f.tol_match, "M / M_tot eigenvalue match distance")->check(CLI::NonNegativeNumber);
}

wgqed::RunOverrides overrides_from(const CommonFlags& f) {
    wgqed::RunOverrides o;
    if (f.mode) o.mode = *f.mode == "exact" ? wgqed::Mode::Exact : wgqed::Mode::Markov;
    o.tol_real = f.tol_real;
    o.tol_match = f.tol_match;
    return o;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw wgqed::Error(wgqed::ErrorCode::ParseError, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

wgqed::json span(const std::vector<double>& v) { return wgqed::json::array({v.at(0), v.at(1)}); }

// Task object for a single-task subcommand: the first matching config task, then CLI flags.
wgqed::json task_json(const std::string& type, const wgqed::json& doc, const TaskFlags& f) {
    wgqed::json t{{"type", type}};
    if (doc.contains("tasks")) {
        for (const auto& x : doc.at("tasks")) {
            if (x.value("type", "") == type) {
                t = x;
                break;
            }
        }
    }
    auto set = [&](const char* key, const auto& value) {
        if (value) t[key] = *value;
    };
    if (type == "transmission" || type == "winding" || type == "sweep") {
        if (!f.k_span.empty()) t["k_span"] = span(f.k_span);
    }
    if (type == "transmission" || type == "boundstates" || type == "g2" || type == "sweep") set("points", f.points);
    if (type == "winding") set("initial_points", f.initial_points);
    if (type == "boundstates" && !f.z_span.empty()) t["z_span"] = span(f.z_span);
    if (type == "g2") {
        if (!f.tau_span.empty()) t["tau_span"] = span(f.tau_span);
        set("normalization", f.normalization);
    }
    if (type == "sweep") {
        set("parameter", f.parameter);
        if (!f.range.empty()) t["range"] = span(f.range);
        set("steps", f.steps);
        set("task", f.inner);
    }
    return t;
}

int report(const wgqed::RunResult& r) {
    for (const auto& t : r.tasks) {
        std::cout << "task " << t.index << " " << t.name << ": " << (t.ok ? "ok" : "FAILED");
        if (!t.ok) std::cout << " (" << t.error << ")";
        std::cout << "\n";
        for (const auto& w : t.warnings) std::cout << "  warning: " << w << "\n";
    }
    std::cout << "output: " << r.out_dir.string() << "\nconfig hash: " << r.config_hash << "\n";
    return r.exit_code();
}

int run_config(const CommonFlags& common, const std::optional<std::string>& single, const TaskFlags& tf) {
    wgqed::RunSpec spec;
    try {
        const auto text = read_file(common.config);
        spec = wgqed::load_runspec(text);
        if (single) {
            auto doc = wgqed::json::parse(text);
            doc["tasks"] = wgqed::json::array({task_json(*single, doc, tf)});
            spec = wgqed::load_runspec(doc.dump());
        }
    } catch (const wgqed::Error& e) {
        std::cerr << "invalid run spec: " << e.what() << "\n";
        return wgqed::kExitSpecFailure;
    }
    const auto out = wgqed::resolve_out_dir(common.out, spec.output_dir);
    try {
        return report(wgqed::run(spec, overrides_from(common), out));
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return wgqed::kExitTaskFailure;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photon transport and dissipative bound states in chiral waveguide QED"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(wgqed::kVersion));

    CommonFlags common;
    TaskFlags tf;
    std::optional<std::string> single;

    auto* run = app.add_subcommand("run", "execute every task in a run spec");
    add_common(run, common, true);

    for (const char* name : {"spectrum", "transmission", "winding", "boundstates", "g2", "sweep"}) {
        auto* sub = app.add_subcommand(name, std::string("run one ") + name + " task on the config's ensemble");
        add_common(sub, common, true);
        const std::string n = name;
        if (n == "transmission" || n == "winding" || n == "sweep") {
            sub->add_option("--k-span", tf.k_span, "k range: start stop")->expected(2);
        }
        if (n == "transmission" || n == "boundstates" || n == "g2" || n == "sweep") {
            sub->add_option("--points", tf.points, "number of grid points");
        }
        if (n == "winding") sub->add_option("--initial-points", tf.initial_points, "initial adaptive grid size");
        if (n == "boundstates") sub->add_option("--z-span", tf.z_span, "z range: start stop")->expected(2);
        if (n == "g2") {
            sub->add_option("--tau-span", tf.tau_span, "delay range: start stop")->expected(2);
            sub->add_option("--normalization", tf.normalization, "raw or asymptotic_unit");
        }
        if (n == "sweep") {
            sub->add_option("--parameter", tf.parameter, "gamma_ratio, gamma, gamma_prime or separation");
            sub->add_option("--range", tf.range, "parameter range: start stop")->expected(2);
            sub->add_option("--steps", tf.steps, "number of sweep points");
            sub->add_option("--task", tf.inner, "inner task: spectrum, winding or transmission");
        }
        sub->callback([&single, n] { single = n; });
    }

    std::string figure;
    auto* rep = app.add_subcommand("reproduce", "regenerate figure data: fig3a, fig3b or figS1");
    rep->add_option("figure", figure, "figure name")->required()->check(CLI::IsMember({"fig3a", "fig3b", "figS1"}));
    add_common(rep, common, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? wgqed::kExitOk : wgqed::kExitSpecFailure;
    }

    if (rep->parsed()) {
        if (!common.config.empty()) {
            std::cerr << "reproduce does not take --config\n";
            return wgqed::kExitSpecFailure;
        }
        const auto out = wgqed::resolve_out_dir(common.out, std::nullopt);
        try {
            return report(wgqed::reproduce(*wgqed::figure_from(figure), overrides_from(common), out));
        } catch (const std::exception& e) {
            std::cerr << "reproduce failed: " << e.what() << "\n";
            return wgqed::kExitTaskFailure;
        }
    }
    return run_config(common, single, tf);
}
