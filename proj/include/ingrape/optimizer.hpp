#ifndef INGRAPE_OPTIMIZER_HPP
#define INGRAPE_OPTIMIZER_HPP

#include "ingrape/objectives.hpp"
#include "ingrape/rng.hpp"

namespace ingrape {

struct OptimizerConfig {
    int max_iters = 1000;
    double grad_tol = 1e-8;       // stop when the gradient 2-norm drops below
    double f_tol = 1e-12;         // stop when improvement over a 5-iteration window drops below
    double step_init = 0.25;
    double backtrack_factor = 0.5;
    double grow_factor = 1.5;
    int max_backtracks = 40;
    std::optional<double> u_bound;  // box |u| <= u_bound, applied by projection

    void validate() const;
};

// Window for the f_tol improvement test.
inline constexpr int kFTolWindow = 5;

enum class StopReason {
    GradTol,
    FTol,
    MaxIters,
    AbortedNonFinite,
};

const char* stop_reason_name(StopReason r);

struct IterationRecord {
    double value = 0.0;
    double grad_norm = 0.0;
    double step = 0.0;  // accepted step that produced this iterate (0 for the start)
};

struct RunResult {
    double final_value = 0.0;
    PWCControls final_controls;
    int iterations_used = 0;
    StopReason converged = StopReason::MaxIters;
    std::vector<IterationRecord> history;  // length = iterations_used + 1
    std::uint64_t seed = 0;
    double min_n_over_history = 0.0;  // smallest spectral density seen along the run

    bool aborted() const { return converged == StopReason::AbortedNonFinite; }
};

struct InitSpec {
    double u_amplitude = 1.0;  // u ~ Uniform(-u_amplitude, u_amplitude)
    double w_amplitude = 0.3;  // w ~ Uniform(0, w_amplitude)
    std::uint64_t seed = 0;
};

// Deterministic seeded initialization. Entries are drawn from the counter
// stream of `spec.seed` in a fixed order: u row-major first, then w
// row-major.
PWCControls init_random_controls(const ControlledSystem& system, const TimeGrid& grid,
                                 const InitSpec& spec);

// Gradient descent with an adaptive step: an accepted step grows the trial
// step, a failed one shrinks it and retries (up to max_backtracks). The
// objective history is strictly decreasing on accepted steps.
RunResult optimize(const ObjectiveSpec& obj, const ControlledSystem& system,
                   const PWCControls& controls0, const OptimizerConfig& config);

}  // namespace ingrape

#endif
