#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ingrape/config.hpp"

using namespace ingrape;

namespace {

const char* kMinimalQubitHadamard = R"({
  "master_seed": 1,
  "model": {"type": "qubit", "omega": 1.0, "gamma": 0.1},
  "grid": {"T": 3.0, "M": 10},
  "objective": {"type": "gate_on_states", "gate": "hadamard"}
})";

bool has_issue(const ConfigError& e, ErrorCode code, const std::string& path) {
    for (const auto& issue : e.issues()) {
        if (issue.code == code && issue.path == path) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("minimal qubit Hadamard config parses") {
    const RunConfiguration config = parse_config(kMinimalQubitHadamard);
    CHECK(config.master_seed == 1);
    CHECK(config.system.dim() == 2);
    CHECK(config.grid.total_time == 3.0);
    CHECK(config.grid.intervals == 10);
    CHECK(std::holds_alternative<GateOnStates>(config.objective.variant()));
    // Defaults filled in.
    CHECK(config.optimizer.grow_factor > 1.0);
    CHECK(config.landscape.launches >= 1);
}

TEST_CASE("parse -> serialize -> parse is a fixed point") {
    const RunConfiguration first = parse_config(kMinimalQubitHadamard);
    const std::string serialized = serialize_config(first);
    const RunConfiguration second = parse_config(serialized);
    CHECK(first.normalized == second.normalized);
    CHECK(serialize_config(second) == serialized);
}

TEST_CASE("invalid JSON is a syntax error") {
    try {
        parse_config("{not json");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(!e.issues().empty());
        CHECK(e.issues()[0].code == ErrorCode::SyntaxInvalid);
    }
}

TEST_CASE("negative gamma is a physics error naming model.gamma") {
    const char* doc = R"({
      "master_seed": 1,
      "model": {"type": "qubit", "omega": 1.0, "gamma": -0.1},
      "grid": {"T": 1.0, "M": 2},
      "objective": {"type": "gate_on_states", "gate": "hadamard"}
    })";
    try {
        parse_config(doc);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(has_issue(e, ErrorCode::PhysicsInvalid, "model.gamma"));
    }
}

TEST_CASE("unknown keys are schema errors with the offending path") {
    const char* doc = R"({
      "master_seed": 1,
      "modle": {"type": "qubit", "omega": 1.0, "gamma": 0.1},
      "model": {"type": "qubit", "omega": 1.0, "gamma": 0.1},
      "grid": {"T": 1.0, "M": 2},
      "objective": {"type": "gate_on_states", "gate": "hadamard"}
    })";
    try {
        parse_config(doc);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(has_issue(e, ErrorCode::SchemaInvalid, "modle"));
    }
}

TEST_CASE("explicit model with non-Hermitian H0 reports a physics error") {
    const char* doc = R"({
      "master_seed": 1,
      "model": {
        "type": "explicit",
        "H0": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]],
        "V": [],
        "channels": [],
        "n_controls": 0
      },
      "grid": {"T": 1.0, "M": 2},
      "objective": {"type": "gate_on_channel", "gate": "hadamard"}
    })";
    try {
        parse_config(doc);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(!e.issues().empty());
        CHECK(e.issues()[0].code == ErrorCode::PhysicsInvalid);
        CHECK(std::string(e.what()).find("H0 not Hermitian") != std::string::npos);
    }
}

TEST_CASE("preset document equals the preset constructor") {
    const nlohmann::json model = {{"type", "qubit"}, {"omega", 1.0}, {"gamma", 0.1}};
    const ControlledSystem from_doc = load_model(model);
    const ControlledSystem direct = preset_qubit(1.0, 0.1);
    CHECK((from_doc.h0() - direct.h0()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((from_doc.interactions()[0] - direct.interactions()[0]).cwiseAbs().maxCoeff() == 0.0);
    CHECK(from_doc.channels().size() == direct.channels().size());
    CHECK(from_doc.channels()[0].einstein_coeff == 0.1);
}

TEST_CASE("explicit qutrit document reproduces the preset entrywise") {
    const nlohmann::json model = {
        {"type", "explicit"},
        {"H0", {{0.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 2.0}}},
        {"V", nlohmann::json::array({{{0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}, {1.0, 1.0, 0.0}}})},
        {"channels",
         nlohmann::json::array(
             {{{"lower", 0}, {"upper", 2}, {"einstein_coeff", 0.1}, {"control_index", 0}},
              {{"lower", 1}, {"upper", 2}, {"einstein_coeff", 0.1}, {"control_index", 1}}})},
        {"n_controls", 2}};
    const ControlledSystem from_doc = load_model(model);
    const ControlledSystem preset =
        preset_qutrit_forbidden(0.0, 1.0, 2.0, Complex(1, 0), Complex(1, 0), 0.1, 0.1);
    CHECK((from_doc.h0() - preset.h0()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((from_doc.interactions()[0] - preset.interactions()[0]).cwiseAbs().maxCoeff() == 0.0);
    CHECK((from_doc.drift_part() - preset.drift_part()).cwiseAbs().maxCoeff() < 1e-15);
    for (int c = 0; c < 2; ++c) {
        CHECK((from_doc.incoherent_part(c) - preset.incoherent_part(c)).cwiseAbs().maxCoeff() <
              1e-15);
    }
}

TEST_CASE("objective dimension must match the model") {
    const char* doc = R"({
      "master_seed": 1,
      "model": {"type": "qubit", "omega": 1.0, "gamma": 0.1},
      "grid": {"T": 1.0, "M": 2},
      "objective": {"type": "gate_on_states", "gate": "cnot"}
    })";
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
}

TEST_CASE("explicit controls are shape-checked") {
    const char* doc = R"({
      "master_seed": 1,
      "model": {"type": "qubit", "omega": 1.0, "gamma": 0.1},
      "grid": {"T": 1.0, "M": 2},
      "objective": {"type": "gate_on_states", "gate": "hadamard"},
      "controls": {"u": [[0.1], [0.2]], "w": [[0.0], [0.0]]}
    })";
    const RunConfiguration config = parse_config(doc);
    REQUIRE(config.controls.has_value());
    CHECK(config.controls->u(1, 0) == 0.2);

    const char* bad = R"({
      "master_seed": 1,
      "model": {"type": "qubit", "omega": 1.0, "gamma": 0.1},
      "grid": {"T": 1.0, "M": 2},
      "objective": {"type": "gate_on_states", "gate": "hadamard"},
      "controls": {"u": [[0.1]], "w": [[0.0], [0.0]]}
    })";
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
}

TEST_CASE("multiple issues are reported together") {
    const char* doc = R"({
      "master_seed": 1,
      "model": {"type": "qubit", "omega": 1.0, "gamma": -1.0},
      "grid": {"T": -2.0, "M": 2},
      "objective": {"type": "gate_on_states", "gate": "hadamard"}
    })";
    try {
        parse_config(doc);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.issues().size() >= 2);
        CHECK(has_issue(e, ErrorCode::PhysicsInvalid, "model.gamma"));
        CHECK(has_issue(e, ErrorCode::DomainInvalid, "grid.T"));
    }
}
