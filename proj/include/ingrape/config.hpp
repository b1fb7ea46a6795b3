#ifndef INGRAPE_CONFIG_HPP
#define INGRAPE_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ingrape/landscape.hpp"

namespace ingrape {

struct ConfigIssue {
    ErrorCode code = ErrorCode::SchemaInvalid;
    std::string path;  // dotted path of the offending field, e.g. "model.gamma"
    std::string message;
};

class ConfigError : public Error {
  public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const { return issues_; }

  private:
    static std::string render(const std::vector<ConfigIssue>& issues);
    std::vector<ConfigIssue> issues_;
};

struct LandscapeBlock {
    int launches = 100;
    int bins = 40;
};

struct RobustnessBlock {
    std::vector<double> levels{0.0, 0.01, 0.05, 0.1};
    int samples = 20;
    std::string controls_file;  // empty: optimize first, then scan
};

// A fully validated run configuration. `normalized` is the canonical JSON
// form (defaults filled in, complex entries as [re, im]); parsing it again
// reproduces the same configuration.
struct RunConfiguration {
    nlohmann::json normalized;
    std::uint64_t master_seed = 0;
    ControlledSystem system;
    TimeGrid grid;
    ObjectiveSpec objective;
    InitSpec init;  // seed field unused; per-run seeds derive from master_seed
    OptimizerConfig optimizer;
    LandscapeBlock landscape;
    RobustnessBlock robustness;
    std::optional<PWCControls> controls;      // explicit controls for simulate/gradcheck
    std::optional<DensityMatrix> initial_state;
    std::string output_dir = "out";
};

// Parses and validates a configuration document. Throws ConfigError listing
// every issue found, each naming the offending field:
//   SYNTAX_INVALID  - not valid JSON
//   SCHEMA_INVALID  - wrong structure, types, or unknown keys
//   PHYSICS_INVALID - values violating physical constraints
RunConfiguration parse_config(const std::string& text);

// Builds a system from a model description document (the "model" block).
ControlledSystem load_model(const nlohmann::json& model);

std::string serialize_config(const RunConfiguration& config);

}  // namespace ingrape

#endif
