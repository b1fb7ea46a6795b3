#include "ingrape/config.hpp"

#include <set>

#include "ingrape/io.hpp"

namespace ingrape {

using nlohmann::json;

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(issues.empty() ? ErrorCode::SchemaInvalid : issues.front().code, render(issues)),
      issues_(std::move(issues)) {}

std::string ConfigError::render(const std::vector<ConfigIssue>& issues) {
    std::string out = "configuration invalid";
    for (const auto& issue : issues) {
        out += "\n  [" + std::string(error_code_name(issue.code)) + "] " + issue.path + ": " +
               issue.message;
    }
    return out;
}

namespace {

// Collects issues while walking the document, so one parse reports every
// offending field at once.
struct Checker {
    std::vector<ConfigIssue> issues;

    void add(ErrorCode code, const std::string& path, const std::string& message) {
        issues.push_back({code, path, message});
    }

    void require_keys(const json& node, const std::string& path,
                      const std::set<std::string>& allowed,
                      const std::set<std::string>& required) {
        for (const auto& [key, _] : node.items()) {
            if (!allowed.count(key)) {
                add(ErrorCode::SchemaInvalid, path.empty() ? key : path + "." + key,
                    "unknown key '" + key + "'");
            }
        }
        for (const auto& key : required) {
            if (!node.contains(key)) {
                add(ErrorCode::SchemaInvalid, path.empty() ? key : path + "." + key,
                    "missing required key '" + key + "'");
            }
        }
    }

    double number(const json& node, const std::string& path, double fallback = 0.0) {
        if (!node.is_number()) {
            add(ErrorCode::SchemaInvalid, path, "expected a number");
            return fallback;
        }
        return node.get<double>();
    }

    int integer(const json& node, const std::string& path, int fallback = 0) {
        if (!node.is_number_integer()) {
            add(ErrorCode::SchemaInvalid, path, "expected an integer");
            return fallback;
        }
        return node.get<int>();
    }

    std::uint64_t u64(const json& node, const std::string& path) {
        if (!node.is_number_unsigned() && !node.is_number_integer()) {
            add(ErrorCode::SchemaInvalid, path, "expected an unsigned integer");
            return 0;
        }
        return node.get<std::uint64_t>();
    }

    Complex complex_entry(const json& node, const std::string& path) {
        if (node.is_number()) {
            return Complex(node.get<double>(), 0.0);
        }
        if (node.is_array() && node.size() == 2 && node[0].is_number() && node[1].is_number()) {
            return Complex(node[0].get<double>(), node[1].get<double>());
        }
        add(ErrorCode::SchemaInvalid, path, "expected a number or an [re, im] pair");
        return Complex(0.0, 0.0);
    }

    Matrix matrix(const json& node, const std::string& path) {
        if (!node.is_array() || node.empty()) {
            add(ErrorCode::SchemaInvalid, path, "expected a nonempty array of rows");
            return Matrix::Zero(1, 1);
        }
        const std::size_t n = node.size();
        Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            if (!node[i].is_array() || node[i].size() != n) {
                add(ErrorCode::SchemaInvalid, path + "[" + std::to_string(i) + "]",
                    "expected a square matrix (row length " + std::to_string(n) + ")");
                return m;
            }
            for (std::size_t j = 0; j < n; ++j) {
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = complex_entry(
                    node[i][j], path + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
            }
        }
        return m;
    }

    void throw_if_failed() {
        if (!issues.empty()) {
            throw ConfigError(std::move(issues));
        }
    }
};

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(complex_to_json(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// Normalized model block + the built system.
struct ParsedModel {
    json normalized;
    std::optional<ControlledSystem> system;
};

ParsedModel parse_model(Checker& check, const json& node) {
    ParsedModel out;
    if (!node.is_object()) {
        check.add(ErrorCode::SchemaInvalid, "model", "expected an object");
        return out;
    }
    if (!node.contains("type") || !node.at("type").is_string()) {
        check.add(ErrorCode::SchemaInvalid, "model.type", "expected a string 'type'");
        return out;
    }
    const std::string type = node.at("type").get<std::string>();

    if (type == "qubit") {
        check.require_keys(node, "model", {"type", "omega", "gamma"}, {"omega", "gamma"});
        const double omega = check.number(node.value("omega", json()), "model.omega");
        const double gamma = check.number(node.value("gamma", json()), "model.gamma");
        if (gamma < 0.0) {
            check.add(ErrorCode::PhysicsInvalid, "model.gamma", "decay rate must be >= 0");
        }
        if (check.issues.empty()) {
            out.system = preset_qubit(omega, gamma);
            out.normalized = {{"type", "qubit"}, {"omega", omega}, {"gamma", gamma}};
        }
        return out;
    }
    if (type == "qutrit_forbidden") {
        check.require_keys(node, "model", {"type", "E1", "E2", "E3", "v13", "v23", "A1", "A2"},
                           {"E1", "E2", "E3", "v13", "v23", "A1", "A2"});
        const double e1 = check.number(node.value("E1", json()), "model.E1");
        const double e2 = check.number(node.value("E2", json()), "model.E2");
        const double e3 = check.number(node.value("E3", json()), "model.E3");
        const Complex v13 = check.complex_entry(node.value("v13", json()), "model.v13");
        const Complex v23 = check.complex_entry(node.value("v23", json()), "model.v23");
        const double a1 = check.number(node.value("A1", json()), "model.A1");
        const double a2 = check.number(node.value("A2", json()), "model.A2");
        if (a1 < 0.0) check.add(ErrorCode::PhysicsInvalid, "model.A1", "rate must be >= 0");
        if (a2 < 0.0) check.add(ErrorCode::PhysicsInvalid, "model.A2", "rate must be >= 0");
        if (e1 == e2 || e1 == e3 || e2 == e3) {
            check.add(ErrorCode::PhysicsInvalid, "model.E1", "energies must be pairwise distinct");
        }
        if (check.issues.empty()) {
            out.system = preset_qutrit_forbidden(e1, e2, e3, v13, v23, a1, a2);
            out.normalized = {{"type", "qutrit_forbidden"}, {"E1", e1},
                              {"E2", e2},                   {"E3", e3},
                              {"v13", complex_to_json(v13)}, {"v23", complex_to_json(v23)},
                              {"A1", a1},                   {"A2", a2}};
        }
        return out;
    }
    if (type == "two_qubit") {
        check.require_keys(node, "model",
                           {"type", "omega1", "omega2", "J", "gamma1", "gamma2"},
                           {"omega1", "omega2", "J", "gamma1", "gamma2"});
        const double omega1 = check.number(node.value("omega1", json()), "model.omega1");
        const double omega2 = check.number(node.value("omega2", json()), "model.omega2");
        const double coupling = check.number(node.value("J", json()), "model.J");
        const double gamma1 = check.number(node.value("gamma1", json()), "model.gamma1");
        const double gamma2 = check.number(node.value("gamma2", json()), "model.gamma2");
        if (gamma1 < 0.0) check.add(ErrorCode::PhysicsInvalid, "model.gamma1", "rate must be >= 0");
        if (gamma2 < 0.0) check.add(ErrorCode::PhysicsInvalid, "model.gamma2", "rate must be >= 0");
        if (check.issues.empty()) {
            out.system = preset_two_qubit(omega1, omega2, coupling, gamma1, gamma2);
            out.normalized = {{"type", "two_qubit"}, {"omega1", omega1}, {"omega2", omega2},
                              {"J", coupling},       {"gamma1", gamma1}, {"gamma2", gamma2}};
        }
        return out;
    }
    if (type == "explicit") {
        check.require_keys(node, "model", {"type", "H0", "V", "channels", "n_controls"},
                           {"H0", "V", "n_controls"});
        const Matrix h0 = check.matrix(node.value("H0", json()), "model.H0");
        std::vector<Matrix> interactions;
        if (node.contains("V")) {
            if (!node.at("V").is_array()) {
                check.add(ErrorCode::SchemaInvalid, "model.V", "expected an array of matrices");
            } else {
                for (std::size_t k = 0; k < node.at("V").size(); ++k) {
                    interactions.push_back(
                        check.matrix(node.at("V")[k], "model.V[" + std::to_string(k) + "]"));
                }
            }
        }
        const int n_controls = check.integer(node.value("n_controls", json()), "model.n_controls");
        std::vector<IncoherentChannel> channels;
        std::vector<OperatorChannel> op_channels;
        if (node.contains("channels")) {
            if (!node.at("channels").is_array()) {
                check.add(ErrorCode::SchemaInvalid, "model.channels", "expected an array");
            } else {
                for (std::size_t i = 0; i < node.at("channels").size(); ++i) {
                    const json& ch = node.at("channels")[i];
                    const std::string path = "model.channels[" + std::to_string(i) + "]";
                    if (!ch.is_object()) {
                        check.add(ErrorCode::SchemaInvalid, path, "expected an object");
                        continue;
                    }
                    const bool by_jump = ch.contains("jump");
                    if (by_jump) {
                        check.require_keys(ch, path, {"jump", "einstein_coeff", "control_index"},
                                           {"jump", "einstein_coeff", "control_index"});
                    } else {
                        check.require_keys(
                            ch, path, {"lower", "upper", "einstein_coeff", "control_index"},
                            {"lower", "upper", "einstein_coeff", "control_index"});
                    }
                    const double rate =
                        check.number(ch.value("einstein_coeff", json()), path + ".einstein_coeff");
                    if (rate <= 0.0) {
                        check.add(ErrorCode::PhysicsInvalid, path + ".einstein_coeff",
                                  "rate must be > 0");
                    }
                    const int control =
                        check.integer(ch.value("control_index", json()), path + ".control_index");
                    if (by_jump) {
                        op_channels.push_back(
                            {check.matrix(ch.at("jump"), path + ".jump"), rate, control});
                    } else {
                        channels.push_back({check.integer(ch.value("lower", json()), path + ".lower"),
                                            check.integer(ch.value("upper", json()), path + ".upper"),
                                            rate, control});
                    }
                }
            }
        }
        if (check.issues.empty()) {
            try {
                out.system = ControlledSystem(h0, interactions, channels, n_controls, op_channels);
            } catch (const Error& e) {
                check.add(e.code(), "model", e.what());
                return out;
            }
            json nch = json::array();
            for (const auto& ch : channels) {
                nch.push_back({{"lower", ch.lower},
                               {"upper", ch.upper},
                               {"einstein_coeff", ch.einstein_coeff},
                               {"control_index", ch.control_index}});
            }
            for (const auto& ch : op_channels) {
                nch.push_back({{"jump", matrix_to_json(ch.lowering)},
                               {"einstein_coeff", ch.einstein_coeff},
                               {"control_index", ch.control_index}});
            }
            json nv = json::array();
            for (const auto& v : interactions) nv.push_back(matrix_to_json(v));
            out.normalized = {{"type", "explicit"},
                              {"H0", matrix_to_json(h0)},
                              {"V", nv},
                              {"channels", nch},
                              {"n_controls", n_controls}};
        }
        return out;
    }
    check.add(ErrorCode::SchemaInvalid, "model.type",
              "unknown model type '" + type +
                  "' (expected qubit, qutrit_forbidden, two_qubit, explicit)");
    return out;
}

struct ParsedObjective {
    json normalized;
    std::optional<ObjectiveSpec> objective;
};

Matrix parse_gate(Checker& check, const json& node, const std::string& path) {
    if (node.is_string()) {
        try {
            return gate_target(node.get<std::string>());
        } catch (const Error& e) {
            check.add(ErrorCode::SchemaInvalid, path, e.what());
            return Matrix::Identity(2, 2);
        }
    }
    return check.matrix(node, path);
}

ParsedObjective parse_objective(Checker& check, const json& node, int dim) {
    ParsedObjective out;
    if (!node.is_object() || !node.contains("type") || !node.at("type").is_string()) {
        check.add(ErrorCode::SchemaInvalid, "objective.type", "expected a string 'type'");
        return out;
    }
    const std::string type = node.at("type").get<std::string>();
    const std::size_t before = check.issues.size();
    try {
        if (type == "observable_mean") {
            check.require_keys(node, "objective", {"type", "observable", "initial"}, {"observable"});
            ObservableMean om{check.matrix(node.value("observable", json()), "objective.observable"),
                              std::nullopt};
            if (node.contains("initial")) {
                om.initial = DensityMatrix(check.matrix(node.at("initial"), "objective.initial"));
            }
            if (check.issues.size() != before) return out;
            out.normalized = {{"type", type}, {"observable", matrix_to_json(om.observable)}};
            if (om.initial) out.normalized["initial"] = matrix_to_json(om.initial->matrix());
            out.objective = ObjectiveSpec(std::move(om));
        } else if (type == "state_transfer") {
            check.require_keys(node, "objective", {"type", "initial", "target"},
                               {"initial", "target"});
            const Matrix initial = check.matrix(node.value("initial", json()), "objective.initial");
            const Matrix target = check.matrix(node.value("target", json()), "objective.target");
            if (check.issues.size() != before) return out;
            out.normalized = {{"type", type},
                              {"initial", matrix_to_json(initial)},
                              {"target", matrix_to_json(target)}};
            out.objective = ObjectiveSpec(StateTransfer{DensityMatrix(initial), DensityMatrix(target)});
        } else if (type == "gate_on_states") {
            check.require_keys(node, "objective", {"type", "gate", "basis"}, {"gate"});
            GateOnStates gs{parse_gate(check, node.value("gate", json()), "objective.gate"), {}};
            if (node.contains("basis")) {
                if (!node.at("basis").is_array()) {
                    check.add(ErrorCode::SchemaInvalid, "objective.basis", "expected an array");
                } else {
                    for (std::size_t j = 0; j < node.at("basis").size(); ++j) {
                        gs.basis.emplace_back(check.matrix(
                            node.at("basis")[j], "objective.basis[" + std::to_string(j) + "]"));
                    }
                }
            }
            if (check.issues.size() != before) return out;
            out.normalized = {{"type", type},
                              {"gate", node.at("gate").is_string() ? node.at("gate")
                                                                   : matrix_to_json(gs.gate)}};
            if (!gs.basis.empty()) {
                json basis = json::array();
                for (const auto& rho : gs.basis) basis.push_back(matrix_to_json(rho.matrix()));
                out.normalized["basis"] = std::move(basis);
            }
            out.objective = ObjectiveSpec(std::move(gs));
        } else if (type == "gate_on_channel") {
            check.require_keys(node, "objective", {"type", "gate"}, {"gate"});
            GateOnChannel gc{parse_gate(check, node.value("gate", json()), "objective.gate")};
            if (check.issues.size() != before) return out;
            out.normalized = {{"type", type},
                              {"gate", node.at("gate").is_string() ? node.at("gate")
                                                                   : matrix_to_json(gc.gate)}};
            out.objective = ObjectiveSpec(std::move(gc));
        } else {
            check.add(ErrorCode::SchemaInvalid, "objective.type",
                      "unknown objective type '" + type + "'");
        }
    } catch (const Error& e) {
        check.add(e.code(), "objective", e.what());
        return out;
    }
    if (out.objective) {
        const json& v = out.normalized;
        (void)v;
        if (dim > 0) {
            // Cross-check against the model dimension for an early, well-named error.
            int odim = 0;
            if (type == "observable_mean") odim = static_cast<int>(std::get<ObservableMean>(out.objective->variant()).observable.rows());
            if (type == "state_transfer") odim = std::get<StateTransfer>(out.objective->variant()).initial.dim();
            if (type == "gate_on_states") odim = static_cast<int>(std::get<GateOnStates>(out.objective->variant()).gate.rows());
            if (type == "gate_on_channel") odim = static_cast<int>(std::get<GateOnChannel>(out.objective->variant()).gate.rows());
            if (odim != dim) {
                check.add(ErrorCode::SchemaInvalid, "objective",
                          "objective dimension " + std::to_string(odim) +
                              " does not match model dimension " + std::to_string(dim));
                out.objective.reset();
            }
        }
    }
    return out;
}

}  // namespace

ControlledSystem load_model(const json& model) {
    Checker check;
    ParsedModel parsed = parse_model(check, model);
    check.throw_if_failed();
    return std::move(*parsed.system);
}

RunConfiguration parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({{ErrorCode::SyntaxInvalid, "$", e.what()}});
    }

    Checker check;
    if (!doc.is_object()) {
        check.add(ErrorCode::SchemaInvalid, "$", "top level must be an object");
        check.throw_if_failed();
    }
    check.require_keys(doc, "",
                       {"master_seed", "model", "grid", "objective", "init", "optimizer",
                        "landscape", "robustness", "controls", "initial_state", "output"},
                       {"master_seed", "model", "grid", "objective"});

    std::uint64_t master_seed = 0;
    if (doc.contains("master_seed")) {
        master_seed = check.u64(doc.at("master_seed"), "master_seed");
    }

    // grid
    TimeGrid grid;
    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        if (!g.is_object()) {
            check.add(ErrorCode::SchemaInvalid, "grid", "expected an object");
        } else {
            check.require_keys(g, "grid", {"T", "M"}, {"T", "M"});
            const double t = check.number(g.value("T", json()), "grid.T");
            const int m = check.integer(g.value("M", json()), "grid.M");
            if (t <= 0.0) {
                check.add(ErrorCode::DomainInvalid, "grid.T", "total time must be > 0");
            } else if (m < 1) {
                check.add(ErrorCode::DomainInvalid, "grid.M", "interval count must be >= 1");
            } else {
                grid = TimeGrid(t, m);
            }
        }
    }

    ParsedModel model;
    if (doc.contains("model")) {
        model = parse_model(check, doc.at("model"));
    }

    ParsedObjective objective;
    if (doc.contains("objective")) {
        objective = parse_objective(check, doc.at("objective"),
                                    model.system ? model.system->dim() : 0);
    }

    // init
    InitSpec init;
    if (doc.contains("init")) {
        const json& n = doc.at("init");
        if (!n.is_object()) {
            check.add(ErrorCode::SchemaInvalid, "init", "expected an object");
        } else {
            check.require_keys(n, "init", {"u_amplitude", "w_amplitude"}, {});
            if (n.contains("u_amplitude")) {
                init.u_amplitude = check.number(n.at("u_amplitude"), "init.u_amplitude");
            }
            if (n.contains("w_amplitude")) {
                init.w_amplitude = check.number(n.at("w_amplitude"), "init.w_amplitude");
            }
            if (init.u_amplitude <= 0.0) {
                check.add(ErrorCode::DomainInvalid, "init.u_amplitude", "must be > 0");
            }
            if (init.w_amplitude <= 0.0) {
                check.add(ErrorCode::DomainInvalid, "init.w_amplitude", "must be > 0");
            }
        }
    }

    // optimizer
    OptimizerConfig optimizer;
    if (doc.contains("optimizer")) {
        const json& n = doc.at("optimizer");
        if (!n.is_object()) {
            check.add(ErrorCode::SchemaInvalid, "optimizer", "expected an object");
        } else {
            check.require_keys(n, "optimizer",
                               {"max_iters", "grad_tol", "f_tol", "step_init", "backtrack_factor",
                                "grow_factor", "max_backtracks", "u_bound"},
                               {});
            if (n.contains("max_iters")) optimizer.max_iters = check.integer(n.at("max_iters"), "optimizer.max_iters");
            if (n.contains("grad_tol")) optimizer.grad_tol = check.number(n.at("grad_tol"), "optimizer.grad_tol");
            if (n.contains("f_tol")) optimizer.f_tol = check.number(n.at("f_tol"), "optimizer.f_tol");
            if (n.contains("step_init")) optimizer.step_init = check.number(n.at("step_init"), "optimizer.step_init");
            if (n.contains("backtrack_factor")) optimizer.backtrack_factor = check.number(n.at("backtrack_factor"), "optimizer.backtrack_factor");
            if (n.contains("grow_factor")) optimizer.grow_factor = check.number(n.at("grow_factor"), "optimizer.grow_factor");
            if (n.contains("max_backtracks")) optimizer.max_backtracks = check.integer(n.at("max_backtracks"), "optimizer.max_backtracks");
            if (n.contains("u_bound") && !n.at("u_bound").is_null()) {
                optimizer.u_bound = check.number(n.at("u_bound"), "optimizer.u_bound");
            }
            try {
                optimizer.validate();
            } catch (const Error& e) {
                check.add(ErrorCode::DomainInvalid, "optimizer", e.what());
            }
        }
    }

    // landscape
    LandscapeBlock landscape;
    if (doc.contains("landscape")) {
        const json& n = doc.at("landscape");
        if (!n.is_object()) {
            check.add(ErrorCode::SchemaInvalid, "landscape", "expected an object");
        } else {
            check.require_keys(n, "landscape", {"launches", "bins"}, {});
            if (n.contains("launches")) landscape.launches = check.integer(n.at("launches"), "landscape.launches");
            if (n.contains("bins")) landscape.bins = check.integer(n.at("bins"), "landscape.bins");
            if (landscape.launches < 1) check.add(ErrorCode::DomainInvalid, "landscape.launches", "must be >= 1");
            if (landscape.bins < 1) check.add(ErrorCode::DomainInvalid, "landscape.bins", "must be >= 1");
        }
    }

    // robustness
    RobustnessBlock robustness;
    if (doc.contains("robustness")) {
        const json& n = doc.at("robustness");
        if (!n.is_object()) {
            check.add(ErrorCode::SchemaInvalid, "robustness", "expected an object");
        } else {
            check.require_keys(n, "robustness", {"levels", "samples", "controls_file"}, {});
            if (n.contains("levels")) {
                if (!n.at("levels").is_array()) {
                    check.add(ErrorCode::SchemaInvalid, "robustness.levels", "expected an array");
                } else {
                    robustness.levels.clear();
                    for (std::size_t i = 0; i < n.at("levels").size(); ++i) {
                        const double eps = check.number(n.at("levels")[i],
                                                        "robustness.levels[" + std::to_string(i) + "]");
                        if (eps < 0.0) {
                            check.add(ErrorCode::DomainInvalid,
                                      "robustness.levels[" + std::to_string(i) + "]",
                                      "must be >= 0");
                        }
                        robustness.levels.push_back(eps);
                    }
                }
            }
            if (n.contains("samples")) {
                robustness.samples = check.integer(n.at("samples"), "robustness.samples");
                if (robustness.samples < 1) {
                    check.add(ErrorCode::DomainInvalid, "robustness.samples", "must be >= 1");
                }
            }
            if (n.contains("controls_file")) {
                if (!n.at("controls_file").is_string()) {
                    check.add(ErrorCode::SchemaInvalid, "robustness.controls_file", "expected a string");
                } else {
                    robustness.controls_file = n.at("controls_file").get<std::string>();
                }
            }
        }
    }

    // explicit controls
    std::optional<PWCControls> controls;
    if (doc.contains("controls")) {
        const json& n = doc.at("controls");
        if (!n.is_object()) {
            check.add(ErrorCode::SchemaInvalid, "controls", "expected an object");
        } else {
            check.require_keys(n, "controls", {"u", "w"}, {"u", "w"});
            if (check.issues.empty() && model.system) {
                try {
                    json with_grid = n;
                    with_grid["T"] = grid.total_time;
                    with_grid["M"] = grid.intervals;
                    controls = controls_from_json(with_grid);
                    check_shapes(*model.system, *controls);
                } catch (const Error& e) {
                    check.add(e.code(), "controls", e.what());
                }
            }
        }
    }

    std::optional<DensityMatrix> initial_state;
    if (doc.contains("initial_state")) {
        try {
            initial_state = DensityMatrix(check.matrix(doc.at("initial_state"), "initial_state"));
            if (model.system && initial_state->dim() != model.system->dim()) {
                check.add(ErrorCode::SchemaInvalid, "initial_state",
                          "dimension does not match the model");
            }
        } catch (const Error& e) {
            check.add(e.code(), "initial_state", e.what());
        }
    }

    std::string output_dir = "out";
    if (doc.contains("output")) {
        const json& n = doc.at("output");
        if (!n.is_object()) {
            check.add(ErrorCode::SchemaInvalid, "output", "expected an object");
        } else {
            check.require_keys(n, "output", {"directory"}, {});
            if (n.contains("directory")) {
                if (!n.at("directory").is_string()) {
                    check.add(ErrorCode::SchemaInvalid, "output.directory", "expected a string");
                } else {
                    output_dir = n.at("directory").get<std::string>();
                }
            }
        }
    }

    check.throw_if_failed();

    // Normalized canonical document (defaults made explicit).
    json normalized;
    normalized["master_seed"] = master_seed;
    normalized["model"] = model.normalized;
    normalized["grid"] = {{"T", grid.total_time}, {"M", grid.intervals}};
    normalized["objective"] = objective.normalized;
    normalized["init"] = {{"u_amplitude", init.u_amplitude}, {"w_amplitude", init.w_amplitude}};
    normalized["optimizer"] = {{"max_iters", optimizer.max_iters},
                               {"grad_tol", optimizer.grad_tol},
                               {"f_tol", optimizer.f_tol},
                               {"step_init", optimizer.step_init},
                               {"backtrack_factor", optimizer.backtrack_factor},
                               {"grow_factor", optimizer.grow_factor},
                               {"max_backtracks", optimizer.max_backtracks}};
    if (optimizer.u_bound) {
        normalized["optimizer"]["u_bound"] = *optimizer.u_bound;
    }
    normalized["landscape"] = {{"launches", landscape.launches}, {"bins", landscape.bins}};
    normalized["robustness"] = {{"levels", robustness.levels}, {"samples", robustness.samples}};
    if (!robustness.controls_file.empty()) {
        normalized["robustness"]["controls_file"] = robustness.controls_file;
    }
    if (controls) {
        json c = controls_to_json(*controls);
        normalized["controls"] = {{"u", c["u"]}, {"w", c["w"]}};
    }
    if (initial_state) {
        normalized["initial_state"] = matrix_to_json(initial_state->matrix());
    }
    normalized["output"] = {{"directory", output_dir}};

    return RunConfiguration{std::move(normalized), master_seed,  std::move(*model.system),
                            grid,                  std::move(*objective.objective),
                            init,                  optimizer,
                            landscape,             robustness,
                            std::move(controls),   std::move(initial_state),
                            std::move(output_dir)};
}

std::string serialize_config(const RunConfiguration& config) {
    return config.normalized.dump(2) + "\n";
}

}  // namespace ingrape
