#include "ingrape/optimizer.hpp"

#include <cmath>

namespace ingrape {

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::GradTol: return "grad_tol";
        case StopReason::FTol: return "f_tol";
        case StopReason::MaxIters: return "max_iters";
        case StopReason::AbortedNonFinite: return "aborted";
    }
    return "unknown";
}

void OptimizerConfig::validate() const {
    if (max_iters < 0 || grad_tol <= 0.0 || f_tol <= 0.0 || step_init <= 0.0 ||
        max_backtracks < 1) {
        throw Error(ErrorCode::DomainInvalid, "optimizer config values must be positive");
    }
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0 && grow_factor > 1.0)) {
        throw Error(ErrorCode::DomainInvalid,
                    "optimizer requires 0 < backtrack_factor < 1 < grow_factor");
    }
    if (u_bound && *u_bound <= 0.0) {
        throw Error(ErrorCode::DomainInvalid, "u_bound must be positive");
    }
}

PWCControls init_random_controls(const ControlledSystem& system, const TimeGrid& grid,
                                 const InitSpec& spec) {
    if (spec.u_amplitude <= 0.0 || spec.w_amplitude <= 0.0) {
        throw Error(ErrorCode::DomainInvalid, "init amplitudes must be positive");
    }
    CounterRng rng(spec.seed);
    PWCControls controls;
    controls.grid = grid;
    controls.u.resize(grid.intervals, system.n_coherent());
    controls.w.resize(grid.intervals, system.n_incoherent());
    for (int m = 0; m < grid.intervals; ++m) {
        for (int k = 0; k < system.n_coherent(); ++k) {
            controls.u(m, k) = rng.uniform(-spec.u_amplitude, spec.u_amplitude);
        }
    }
    for (int m = 0; m < grid.intervals; ++m) {
        for (int c = 0; c < system.n_incoherent(); ++c) {
            controls.w(m, c) = rng.uniform(0.0, spec.w_amplitude);
        }
    }
    return controls;
}

namespace {

void project_u(Eigen::MatrixXd& u, const std::optional<double>& bound) {
    if (bound) {
        u = u.cwiseMax(-*bound).cwiseMin(*bound);
    }
}

double min_n(const PWCControls& c) {
    return c.w.size() == 0 ? 0.0 : c.w.array().square().minCoeff();
}

}  // namespace

RunResult optimize(const ObjectiveSpec& obj, const ControlledSystem& system,
                   const PWCControls& controls0, const OptimizerConfig& config) {
    config.validate();
    check_shapes(system, controls0);

    RunResult result;
    result.final_controls = controls0;
    project_u(result.final_controls.u, config.u_bound);
    result.min_n_over_history = min_n(result.final_controls);

    // A NaN/inf anywhere surfaces either as a non-finite value or as a
    // NUMERIC_FAILURE from the exponential; both abort the run.
    auto try_evaluate = [&](const PWCControls& c) -> double {
        try {
            return evaluate(obj, system, c);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NumericFailure) {
                return std::numeric_limits<double>::quiet_NaN();
            }
            throw;
        }
    };
    auto try_gradient = [&](const PWCControls& c) -> GradientVector {
        try {
            return gradient(obj, system, c);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NumericFailure) {
                GradientVector g;
                g.du = Eigen::MatrixXd::Constant(c.u.rows(), c.u.cols(),
                                                 std::numeric_limits<double>::quiet_NaN());
                g.dw = Eigen::MatrixXd::Constant(c.w.rows(), c.w.cols(),
                                                 std::numeric_limits<double>::quiet_NaN());
                g.dn = g.dw;
                return g;
            }
            throw;
        }
    };

    double value = try_evaluate(result.final_controls);
    GradientVector grad = std::isfinite(value) ? try_gradient(result.final_controls)
                                               : GradientVector{};
    double grad_norm = std::isfinite(value) ? grad.norm()
                                            : std::numeric_limits<double>::quiet_NaN();
    result.history.push_back({value, grad_norm, 0.0});

    auto finish = [&](StopReason reason) {
        result.final_value = value;
        result.iterations_used = static_cast<int>(result.history.size()) - 1;
        result.converged = reason;
        return result;
    };

    if (!std::isfinite(value) || !std::isfinite(grad_norm)) {
        return finish(StopReason::AbortedNonFinite);
    }
    if (grad_norm < config.grad_tol) {
        return finish(StopReason::GradTol);
    }

    double step = config.step_init;
    for (int iter = 0; iter < config.max_iters; ++iter) {
        // Try decreasing steps until the objective improves.
        bool accepted = false;
        PWCControls trial = result.final_controls;
        double trial_value = value;
        for (int attempt = 0; attempt < config.max_backtracks; ++attempt) {
            trial.u = result.final_controls.u - step * grad.du;
            trial.w = result.final_controls.w - step * grad.dw;
            project_u(trial.u, config.u_bound);
            trial_value = try_evaluate(trial);
            if (!std::isfinite(trial_value)) {
                return finish(StopReason::AbortedNonFinite);
            }
            if (trial_value < value) {
                accepted = true;
                break;
            }
            step *= config.backtrack_factor;
        }
        if (!accepted) {
            // Step collapsed without finding descent: no measurable improvement left.
            return finish(StopReason::FTol);
        }

        result.final_controls = std::move(trial);
        value = trial_value;
        result.min_n_over_history = std::min(result.min_n_over_history, min_n(result.final_controls));
        grad = try_gradient(result.final_controls);
        grad_norm = grad.norm();
        if (!std::isfinite(grad_norm)) {
            result.history.push_back({value, grad_norm, step});
            return finish(StopReason::AbortedNonFinite);
        }
        result.history.push_back({value, grad_norm, step});
        step *= config.grow_factor;

        if (grad_norm < config.grad_tol) {
            return finish(StopReason::GradTol);
        }
        if (static_cast<int>(result.history.size()) > kFTolWindow) {
            const double before =
                result.history[result.history.size() - 1 - kFTolWindow].value;
            if (before - value < config.f_tol) {
                return finish(StopReason::FTol);
            }
        }
    }
    return finish(StopReason::MaxIters);
}

}  // namespace ingrape
