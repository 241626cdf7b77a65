// test_runner.cpp: Task execution, sweeps, manifests and determinism

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "wgqed/runner.hpp"

using namespace wgqed;
namespace fs = std::filesystem;

namespace {
fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("wgqed_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

bool same_tree(const fs::path& a, const fs::path& b) {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename().string());
    std::size_t count_b = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(b)) ++count_b;
    if (names.size() != count_b) return false;
    for (const auto& n : names) {
        if (slurp(a / n) != slurp(b / n)) return false;
    }
    return true;
}
} // namespace

TEST(Format, ShortestRoundTrip) {
    EXPECT_EQ(fmt::num(0.1), "0.1");
    EXPECT_EQ(fmt::num(-0.0), "0");
    EXPECT_EQ(fmt::num(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(fmt::num(1e-300), "1e-300");
    const double x = 0.1 + 0.2;
    EXPECT_EQ(std::stod(fmt::num(x)), x);
}

TEST(Runner, SingleAtomSweepFindsHalfThreshold) {
    const auto spec = load_runspec(R"({"ensemble": {"preset": "single_atom"},
        "tasks": [{"type": "sweep", "parameter": "gamma_ratio", "range": [0, 1], "steps": 101}]})");
    const auto dir = fresh_dir("sweep1");
    const auto r = run(spec, {}, dir);
    ASSERT_TRUE(r.ok()) << r.tasks[0].error;
    const auto rows = read_csv(dir / "00_sweep_sweep.csv");
    ASSERT_EQ(rows.size(), 102u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double ratio = std::stod(rows[i][0]);
        EXPECT_EQ(rows[i][1], ratio < 0.5 - 1e-12 ? "1" : "0") << ratio;
    }
    const auto th = read_csv(dir / "00_sweep_thresholds.csv");
    ASSERT_EQ(th.size(), 2u);
    EXPECT_NEAR(std::stod(th[1][4]), 0.5, 1e-9);
}

TEST(Runner, TwoAtomWindingSweep) {
    const auto spec = load_runspec(R"({"ensemble": {"preset": "two_atom"},
        "tasks": [{"type": "sweep", "parameter": "gamma_ratio", "range": [0.1, 0.9], "steps": 17, "task": "winding"}]})");
    const auto dir = fresh_dir("sweep2");
    const auto r = run(spec, {}, dir);
    ASSERT_TRUE(r.ok()) << r.tasks[0].error;
    const auto rows = read_csv(dir / "00_sweep_sweep.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][8] != "ok") continue;
        EXPECT_EQ(std::stoi(rows[i][5]), 2 - std::stoi(rows[i][1]));
    }
    const auto th = read_csv(dir / "00_sweep_thresholds.csv");
    ASSERT_EQ(th.size(), 3u);
    EXPECT_NEAR(std::stod(th[1][4]), oracle::frozen::threshold_2_to_1, 1e-9);
    EXPECT_NEAR(std::stod(th[2][4]), oracle::frozen::threshold_1_to_0, 1e-9);
}

TEST(Runner, AllTaskTypesAndManifest) {
    const auto spec = load_runspec(R"({"ensemble": {"preset": "single_atom", "gamma_ratio": 0.2},
        "tasks": [{"type": "spectrum"}, {"type": "transmission", "points": 50}, {"type": "winding"},
                  {"type": "boundstates", "points": 21}, {"type": "g2", "points": 11}]})");
    const auto dir = fresh_dir("all");
    const auto r = run(spec, {}, dir);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.exit_code(), kExitOk);
    const auto manifest = json::parse(slurp(dir / "manifest.json"));
    EXPECT_EQ(manifest["version"], std::string(kVersion));
    EXPECT_EQ(manifest["config_hash"].get<std::string>().size(), 64u);
    EXPECT_EQ(manifest["tasks"].size(), 5u);
    for (const auto& f : manifest["files"]) EXPECT_TRUE(fs::exists(dir / f.get<std::string>()));
    const auto trace = read_csv(dir / "01_transmission_trace.csv");
    EXPECT_EQ(trace[0], (std::vector<std::string>{"k", "re_t", "im_t", "abs_t", "phase_unwrapped"}));
    EXPECT_EQ(trace.size(), 51u);
    const auto wf = read_csv(dir / "03_boundstates_state0_right.csv");
    EXPECT_EQ(wf[0], (std::vector<std::string>{"z", "re_phi", "im_phi", "abs_phi"}));
    const auto g = read_csv(dir / "04_g2_g2.csv");
    EXPECT_EQ(g[0], (std::vector<std::string>{"tau", "g2", "abs_psi2_sq"}));
    const auto summary = read_csv(dir / "02_winding_summary.csv");
    EXPECT_EQ(summary[1][0], "0");
    EXPECT_EQ(summary[1][3], "true");
}

TEST(Runner, TaskFailureGivesExitTwoAndOthersStillRun) {
    const auto spec = load_runspec(R"({"ensemble": {"preset": "single_atom", "gamma_ratio": 0.5},
        "tasks": [{"type": "winding"}, {"type": "spectrum"}]})");
    const auto dir = fresh_dir("fail");
    const auto r = run(spec, {}, dir);
    EXPECT_FALSE(r.tasks[0].ok);
    EXPECT_NE(r.tasks[0].error.find("ZeroOnContour"), std::string::npos);
    EXPECT_TRUE(r.tasks[1].ok);
    EXPECT_EQ(r.exit_code(), kExitTaskFailure);
}

TEST(Runner, G2RequiresSingleEmitter) {
    const auto spec = load_runspec(R"({"ensemble": {"preset": "two_atom"}, "tasks": [{"type": "g2"}]})");
    const auto r = run(spec, {}, fresh_dir("g2fail"));
    EXPECT_FALSE(r.ok());
}

TEST(Runner, HashCoversOverridesButNotOutputDir) {
    const auto a = load_runspec(R"({"ensemble": {"preset": "single_atom"}, "output_dir": "x"})");
    const auto b = load_runspec(R"({"ensemble": {"preset": "single_atom"}, "output_dir": "y"})");
    const auto c = load_runspec(R"({"ensemble": {"preset": "single_atom", "gamma_ratio": 0.3}})");
    EXPECT_EQ(config_hash(a.canonical, {}), config_hash(b.canonical, {}));
    EXPECT_NE(config_hash(a.canonical, {}), config_hash(c.canonical, {}));
    RunOverrides o;
    o.tol_real = 1e-6;
    EXPECT_NE(config_hash(a.canonical, {}), config_hash(a.canonical, o));
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Runner, OutputDirectoryPrecedence) {
    ::setenv(kOutDirEnv, "from_env", 1);
    EXPECT_EQ(resolve_out_dir(std::string("cli"), std::string("spec")), fs::path("cli"));
    EXPECT_EQ(resolve_out_dir(std::nullopt, std::string("spec")), fs::path("spec"));
    EXPECT_EQ(resolve_out_dir(std::nullopt, std::nullopt), fs::path("from_env"));
    ::unsetenv(kOutDirEnv);
    EXPECT_EQ(resolve_out_dir(std::nullopt, std::nullopt), fs::path(kDefaultOutDir));
}

TEST(Runner, ReproduceIsDeterministic) {
    for (auto fig : {Figure::Fig3a, Figure::Fig3b}) {
        const auto a = fresh_dir(std::string(to_string(fig)) + "_a");
        const auto b = fresh_dir(std::string(to_string(fig)) + "_b");
        ASSERT_TRUE(reproduce(fig, {}, a).ok());
        ASSERT_TRUE(reproduce(fig, {}, b).ok());
        EXPECT_TRUE(same_tree(a, b));
    }
}

TEST(Runner, ReproduceFigureSummaries) {
    const auto a = fresh_dir("fig3a");
    ASSERT_TRUE(reproduce(Figure::Fig3a, {}, a).ok());
    const auto s = read_csv(a / "00_fig3a_summary.csv");
    ASSERT_EQ(s.size(), 4u);
    EXPECT_EQ(s[1][3], "1");
    EXPECT_EQ(s[2][3], "1");
    EXPECT_EQ(s[2][6], "zero_on_contour");
    EXPECT_EQ(s[3][3], "0");

    const auto b = fresh_dir("fig3b");
    ASSERT_TRUE(reproduce(Figure::Fig3b, {}, b).ok());
    const auto t = read_csv(b / "00_fig3b_summary.csv");
    EXPECT_EQ(t[1][3], "0");
    EXPECT_EQ(t[2][3], "1");
    EXPECT_EQ(t[3][3], "2");

    const auto c = fresh_dir("figS1");
    ASSERT_TRUE(reproduce(Figure::FigS1, {}, c).ok());
    const auto grid = read_csv(c / "00_figS1_log10_g2.csv");
    ASSERT_EQ(grid.size(), 102u);
    ASSERT_EQ(grid[0].size(), 202u);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const bool ridge = grid[i][0] == "0.5";
        for (std::size_t j = 1; j < grid[i].size(); ++j) EXPECT_EQ(grid[i][j] == "inf", ridge);
    }
}
