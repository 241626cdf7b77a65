// test_runspec.cpp: Run-spec parsing, defaults and validation

#include <gtest/gtest.h>

#include "wgqed/runspec.hpp"

using namespace wgqed;

namespace {
ErrorCode code_of(const std::string& text) {
    try {
        load_runspec(text);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "document was accepted: " << text;
    return ErrorCode::InvalidConfig;
}

std::string message_of(const std::string& text) {
    try {
        load_runspec(text);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}
} // namespace

TEST(RunSpec, MinimalPresetFillsDefaults) {
    const auto spec = load_runspec(R"({"ensemble": {"preset": "single_atom"}})");
    const auto& p = std::get<PresetSpec>(spec.ensemble);
    EXPECT_EQ(p.family, PresetFamily::SingleAtom);
    EXPECT_DOUBLE_EQ(p.gamma + p.gamma_prime, 1.0);
    EXPECT_DOUBLE_EQ(p.omega_eg, kDefaultPresetOmega);
    EXPECT_TRUE(spec.tasks.empty());
    EXPECT_FALSE(spec.output_dir);
}

TEST(RunSpec, RatioAndTotal) {
    const auto spec = load_runspec(R"({"ensemble": {"preset": "two_atom", "gamma_ratio": 0.25, "gamma_total": 4},
                                       "tasks": [{"type": "winding"}, {"type": "spectrum"}]})");
    const auto& p = std::get<PresetSpec>(spec.ensemble);
    EXPECT_DOUBLE_EQ(p.gamma, 1.0);
    EXPECT_DOUBLE_EQ(p.gamma_prime, 3.0);
    ASSERT_EQ(spec.tasks.size(), 2u);
    EXPECT_EQ(spec.tasks[0].type, TaskType::Winding);
    EXPECT_EQ(spec.tasks[1].type, TaskType::Spectrum);
}

TEST(RunSpec, ExplicitEnsembleWithMatrixReservoir) {
    const auto spec = load_runspec(R"({
        "ensemble": {"omega_eg": 2, "atoms": [{"z": 0, "V": [1, 0]}, {"z": 0.1, "V": [0, 0.5]}]},
        "reservoir": {"mode": "matrix", "matrix": [[[0, -1], [0.1, 0]], [[0.1, 0], [0, -1]]]},
        "tasks": [{"type": "transmission", "k_span": [0, 4], "points": 11, "mode": "exact"}],
        "tolerances": {"tol_real": 1e-8},
        "output_dir": "somewhere"})");
    const auto model = resolve_model(spec.ensemble);
    EXPECT_EQ(model.size(), 2);
    EXPECT_EQ(model.config.atoms[1].coupling, cplx(0.0, 0.5));
    EXPECT_EQ(spec.tasks[0].mode, Mode::Exact);
    EXPECT_EQ(spec.tasks[0].points, 11u);
    EXPECT_EQ(*spec.tol_real, 1e-8);
    EXPECT_EQ(*spec.output_dir, "somewhere");
    EXPECT_FALSE(spec.canonical.contains("output_dir"));
}

TEST(RunSpec, IndependentReservoirScalarBroadcasts) {
    const auto spec = load_runspec(R"({
        "ensemble": {"omega_eg": 2, "atoms": [{"z": 0, "V": [1, 0]}, {"z": 0.1, "V": [1, 0]}]},
        "reservoir": {"mode": "independent", "gamma_prime": 0.3}})");
    const auto model = resolve_model(spec.ensemble);
    EXPECT_EQ(model.reservoir.matrix()(1, 1), cplx(0.0, -0.3));
}

TEST(RunSpec, NonDissipativeReservoirNamesEigenvalue) {
    const std::string doc = R"({"ensemble": {"omega_eg": 1, "atoms": [{"z": 0, "V": [1, 0]}]},
                                "reservoir": {"mode": "matrix", "matrix": [[[0, 1]]]}})";
    EXPECT_EQ(code_of(doc), ErrorCode::ValidationError);
    const auto msg = message_of(doc);
    EXPECT_NE(msg.find("NonDissipativeReservoir"), std::string::npos);
    EXPECT_NE(msg.find("eigenvalue 2"), std::string::npos);
}

TEST(RunSpec, ListsEveryViolation) {
    const auto msg = message_of(R"({"ensemble": {"preset": "single_atom", "color": 1},
        "tasks": [{"type": "transmission", "points": 1}, {"type": "nope"}, {"type": "g2", "normalization": "x"}],
        "junk": true})");
    EXPECT_NE(msg.find("5 violation(s)"), std::string::npos) << msg;
    for (const char* needle : {"'color'", "points", "'nope'", "normalization", "'junk'"}) {
        EXPECT_NE(msg.find(needle), std::string::npos) << needle;
    }
}

TEST(RunSpec, ParseErrorReportsLineAndColumn) {
    const std::string doc = "{\n  \"ensemble\": {\n    \"preset\": \"single_atom\",,\n  }\n}";
    EXPECT_EQ(code_of(doc), ErrorCode::ParseError);
    EXPECT_NE(message_of(doc).find("line 3"), std::string::npos);
}

TEST(RunSpec, StructuralRules) {
    EXPECT_EQ(code_of(R"({"ensemble": {"preset": "single_atom"}, "reservoir": {"mode": "independent", "gamma_prime": 1}})"),
              ErrorCode::ValidationError);
    EXPECT_EQ(code_of(R"({"ensemble": {"preset": "single_atom", "gamma_ratio": 1.2}})"), ErrorCode::ValidationError);
    EXPECT_EQ(code_of(R"({"ensemble": {"preset": "single_atom", "gamma_ratio": 0.5, "gamma": 0.5}})"),
              ErrorCode::ValidationError);
    EXPECT_EQ(code_of(R"({"ensemble": {"preset": "single_atom", "separation": 1}})"), ErrorCode::ValidationError);
    EXPECT_EQ(code_of(R"({"ensemble": {"omega_eg": 1, "atoms": [{"z": 0, "V": [1, 0]}]}})"), ErrorCode::ValidationError);
    EXPECT_EQ(code_of(R"({"ensemble": {"omega_eg": 1, "atoms": [{"z": 0, "V": [1, 0]}]},
                          "reservoir": {"mode": "independent", "gamma_prime": [1, 2]}})"),
              ErrorCode::ValidationError);
    EXPECT_EQ(code_of(R"({"ensemble": {"omega_eg": 1, "atoms": [{"z": 0, "V": [1, 0]}]},
                          "reservoir": {"mode": "shared_pair", "gamma_prime": 1}})"),
              ErrorCode::ValidationError);
    EXPECT_EQ(code_of("[1, 2]"), ErrorCode::ValidationError);
}

TEST(RunSpec, SweepValidation) {
    EXPECT_EQ(code_of(R"({"ensemble": {"preset": "single_atom"},
                          "tasks": [{"type": "sweep", "parameter": "gamma_ratio", "range": [0.5, 0.5]}]})"),
              ErrorCode::ValidationError);
    EXPECT_EQ(code_of(R"({"ensemble": {"preset": "single_atom"},
                          "tasks": [{"type": "sweep", "parameter": "gamma_ratio", "range": [0, 1], "steps": 1}]})"),
              ErrorCode::ValidationError);
    EXPECT_EQ(code_of(R"({"ensemble": {"preset": "single_atom"},
                          "tasks": [{"type": "sweep", "parameter": "gamma_ratio", "range": [0, 2]}]})"),
              ErrorCode::ValidationError);
    EXPECT_EQ(code_of(R"({"ensemble": {"preset": "single_atom"},
                          "tasks": [{"type": "sweep", "parameter": "gamma_ratio", "range": [0, 1], "task": "g2"}]})"),
              ErrorCode::ValidationError);
    EXPECT_EQ(code_of(R"({"ensemble": {"omega_eg": 1, "atoms": [{"z": 0, "V": [1, 0]}]},
                          "reservoir": {"mode": "independent", "gamma_prime": 1},
                          "tasks": [{"type": "sweep", "parameter": "separation", "range": [0, 1]}]})"),
              ErrorCode::ValidationError);
    const auto ok = load_runspec(R"({"ensemble": {"preset": "two_atom"},
        "tasks": [{"type": "sweep", "parameter": "separation", "range": [0, 0.1], "steps": 5, "task": "winding"}]})");
    EXPECT_EQ(ok.tasks[0].parameter, SweepParameter::Separation);
    EXPECT_EQ(ok.tasks[0].inner, TaskType::Winding);
}

TEST(RunSpec, WithParameter) {
    const EnsembleSpec preset = PresetSpec{PresetFamily::TwoAtom, 1.0, 3.0, 100.0, std::nullopt};
    const auto r = std::get<PresetSpec>(with_parameter(preset, SweepParameter::GammaRatio, 0.5));
    EXPECT_DOUBLE_EQ(r.gamma, 2.0);
    EXPECT_DOUBLE_EQ(r.gamma_prime, 2.0);
    const auto s = resolve(with_parameter(preset, SweepParameter::Separation, 0.2));
    EXPECT_EQ(s.config.atoms[0].z, 0.2);
}
