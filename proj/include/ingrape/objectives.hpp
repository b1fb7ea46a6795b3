#ifndef INGRAPE_OBJECTIVES_HPP
#define INGRAPE_OBJECTIVES_HPP

#include <string>
#include <variant>
#include <vector>

#include "ingrape/propagator.hpp"

namespace ingrape {

// The four Mayer-type objectives, all minimized. To maximize an observable
// mean value, pass the negated observable.

struct ObservableMean {
    Matrix observable;                     // Hermitian
    std::optional<DensityMatrix> initial;  // defaults to the ground state
};

struct StateTransfer {
    DensityMatrix initial;
    DensityMatrix target;
};

struct GateOnStates {
    Matrix gate;                      // unitary target
    std::vector<DensityMatrix> basis; // empty selects default_gate_basis(dim)
};

struct GateOnChannel {
    Matrix gate;
};

class ObjectiveSpec {
  public:
    using Variant = std::variant<ObservableMean, StateTransfer, GateOnStates, GateOnChannel>;

    // Validates the fixed data (Hermiticity, unitarity, basis states).
    explicit ObjectiveSpec(Variant v);

    const Variant& variant() const { return v_; }

  private:
    Variant v_;
};

// Exact gradient of the objective with respect to the stacked piecewise
// constant parameters. dn holds the derivative with respect to the spectral
// densities themselves; dw = 2 w .* dn by the chain rule of n = w^2.
struct GradientVector {
    Eigen::MatrixXd du;  // M x K
    Eigen::MatrixXd dw;  // M x C
    Eigen::MatrixXd dn;  // M x C

    double norm() const { return std::sqrt(du.squaredNorm() + dw.squaredNorm()); }
};

double evaluate(const ObjectiveSpec& obj, const ControlledSystem& system,
                const PWCControls& controls);

// Squared Frobenius distance between a channel and the ideal unitary channel
// rho -> U rho U^dag, on superoperator matrices in the column-stacking basis.
double gate_channel_distance_sq(const Superoperator& channel, const Matrix& gate);

// Adjoint-mode gradient: one forward pass caching the step propagators, one
// backward pass, and one Frechet derivative of the step exponential per
// (interval, parameter).
GradientVector gradient(const ObjectiveSpec& obj, const ControlledSystem& system,
                        const PWCControls& controls);

// Central finite differences of evaluate() in every u[m,k] and w[m,c]; the
// independent check of the exact gradient (used by the gradcheck command).
// Only calls evaluate, never gradient. dn is left zero.
GradientVector finite_difference_gradient(const ObjectiveSpec& obj,
                                          const ControlledSystem& system,
                                          const PWCControls& controls, double h = 1e-5);

// max |analytic - fd| over all parameters, scaled by the largest
// finite-difference component (floored at 1e-12).
double gradient_relative_error(const GradientVector& analytic, const GradientVector& fd);

// Tomographically complete state set used by the gate fidelity on states:
// dim 2 gives {|0><0|, |1><1|, |+><+|, |+i><+i|}, dim 4 their 16 pairwise
// tensor products.
std::vector<DensityMatrix> default_gate_basis(int dim);

// Named target unitaries: "hadamard", "t", "cnot", "cz".
Matrix gate_target(const std::string& name);

}  // namespace ingrape

#endif
