#ifndef INGRAPE_LANDSCAPE_HPP
#define INGRAPE_LANDSCAPE_HPP

#include <functional>

#include "ingrape/optimizer.hpp"

namespace ingrape {

struct LandscapeConfig {
    int launches = 100;
    std::uint64_t master_seed = 0;
    InitSpec init;  // template; per-run seed is derive_run_seed(master_seed, i)
    OptimizerConfig optimizer;
    int bins = 40;

    void validate() const;
};

struct Cluster {
    double mean = 0.0;
    int count = 0;
    double min = 0.0;
    double max = 0.0;
};

struct HistogramBin {
    double left = 0.0;
    double right = 0.0;
    int count = 0;
};

struct LandscapeResult {
    std::vector<RunResult> runs;            // indexed by run, scheduling-independent
    std::vector<int> sorted_by_value;       // non-aborted run indices, ascending value
    std::vector<HistogramBin> histogram;    // over non-aborted final values
    std::vector<Cluster> clusters;          // ordered by mean
    int n_aborted = 0;
};

// Splits sorted values at dominant gaps: a split happens at the largest gap
// when it exceeds gap_factor times the median consecutive gap and both sides
// keep at least 5% of all values; at most two splits (three clusters).
std::vector<Cluster> detect_peaks(const std::vector<double>& values, double gap_factor = 20.0);

// L independent seeded launches. Run i is fully determined by
// (master_seed, i, config); the worker count only affects wall time.
LandscapeResult run_landscape(const ObjectiveSpec& obj, const ControlledSystem& system,
                              const TimeGrid& grid, const LandscapeConfig& config,
                              int workers = 0);

// Same aggregation over an arbitrary runner, for harness reuse in tests and
// synthetic landscapes.
LandscapeResult run_landscape_with(const std::function<RunResult(std::uint64_t seed)>& runner,
                                   const LandscapeConfig& config, int workers = 0);

// ---------------------------------------------------------------------------

struct RobustnessLevel {
    double epsilon = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
};

struct RobustnessReport {
    std::vector<RobustnessLevel> levels;
    int samples = 0;
    double unperturbed_value = 0.0;
};

// Relative-noise scan: every control entry is scaled by (1 + eps * xi) with
// i.i.d. xi ~ Uniform(-1, 1), S samples per level, all drawn from the counter
// stream of `seed`.
RobustnessReport robustness_scan(const ObjectiveSpec& obj, const ControlledSystem& system,
                                 const PWCControls& controls, const std::vector<double>& levels,
                                 int samples, std::uint64_t seed);

}  // namespace ingrape

#endif
