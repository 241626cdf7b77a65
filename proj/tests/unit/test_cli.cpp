// test_cli.cpp: Command-line exit codes, subcommands and output-directory resolution

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace {
const fs::path kConfigs = WGQED_CONFIG_DIR;

int cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " \"" WGQED_CLI_PATH "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("wgqed_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }
} // namespace

TEST(Cli, RunSampleConfigsSucceeds) {
    const auto out = scratch("samples");
    for (const char* name : {"single_atom.json", "two_atom.json", "explicit_chain.json"}) {
        EXPECT_EQ(cli("run --config \"" + (kConfigs / name).string() + "\" --out \"" + (out / name).string() + "\""), 0)
            << name;
        EXPECT_TRUE(fs::exists(out / name / "manifest.json"));
    }
}

TEST(Cli, SpecFailureIsExitOne) {
    const auto dir = scratch("bad");
    write(dir / "bad.json", R"({"ensemble": {"preset": "single_atom", "gamma_ratio": 3}})");
    write(dir / "broken.json", "{");
    EXPECT_EQ(cli("run --config \"" + (dir / "bad.json").string() + "\" --out \"" + dir.string() + "/o\""), 1);
    EXPECT_EQ(cli("spectrum --config \"" + (dir / "broken.json").string() + "\" --out \"" + dir.string() + "/o\""), 1);
    EXPECT_EQ(cli("run --config /nonexistent.json"), 1);
    EXPECT_EQ(cli("reproduce fig9"), 1);
    EXPECT_EQ(cli("run --config \"" + (kConfigs / "single_atom.json").string() + "\" --mode sideways"), 1);
}

TEST(Cli, TaskFailureIsExitTwo) {
    const auto dir = scratch("zero");
    write(dir / "zero.json", R"({"ensemble": {"preset": "single_atom", "gamma_ratio": 0.5}})");
    EXPECT_EQ(cli("winding --config \"" + (dir / "zero.json").string() + "\" --out \"" + dir.string() + "/o\""), 2);
    EXPECT_EQ(cli("spectrum --config \"" + (dir / "zero.json").string() + "\" --out \"" + dir.string() + "/o\""), 0);
}

TEST(Cli, SingleTaskSubcommandsTakeFlags) {
    const auto dir = scratch("flags");
    const std::string cfg = (kConfigs / "single_atom.json").string();
    EXPECT_EQ(cli("transmission --config \"" + cfg + "\" --k-span 95 105 --points 7 --mode exact --out \"" +
                  dir.string() + "/t\""),
              0);
    std::ifstream trace(dir / "t" / "00_transmission_trace.csv");
    std::string line;
    int rows = 0;
    while (std::getline(trace, line)) ++rows;
    EXPECT_EQ(rows, 8);
    EXPECT_EQ(cli("sweep --config \"" + cfg + "\" --parameter gamma_ratio --range 0 1 --steps 11 --out \"" +
                  dir.string() + "/s\""),
              0);
    EXPECT_TRUE(fs::exists(dir / "s" / "00_sweep_thresholds.csv"));
    EXPECT_EQ(cli("g2 --config \"" + cfg + "\" --tau-span -1 1 --points 5 --normalization raw --out \"" +
                  dir.string() + "/g\""),
              0);
    EXPECT_EQ(cli("boundstates --config \"" + cfg + "\" --z-span -2 2 --out \"" + dir.string() + "/b\""), 0);
    EXPECT_EQ(cli("winding --config \"" + cfg + "\" --tol-real 1e-10 --tol-match 1e-8 --out \"" + dir.string() + "/w\""),
              0);
}

TEST(Cli, EnvironmentSetsDefaultOutputDirectory) {
    const auto dir = scratch("env");
    EXPECT_EQ(cli("reproduce fig3a", "WGQED_OUT_DIR=\"" + (dir / "from_env").string() + "\""), 0);
    EXPECT_TRUE(fs::exists(dir / "from_env" / "manifest.json"));
    EXPECT_EQ(cli("reproduce fig3a --out \"" + (dir / "flag").string() + "\"",
                  "WGQED_OUT_DIR=\"" + (dir / "ignored").string() + "\""),
              0);
    EXPECT_TRUE(fs::exists(dir / "flag" / "manifest.json"));
    EXPECT_FALSE(fs::exists(dir / "ignored"));
}
