#include "ingrape/objectives.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace ingrape {

namespace {

void check_unitary(const Matrix& u, const char* what) {
    if (u.rows() != u.cols()) {
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be square");
    }
    const Matrix gram = u.adjoint() * u;
    if ((gram - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() > 1e-12) {
        throw Error(ErrorCode::PhysicsInvalid, std::string(what) + " not unitary");
    }
}

// Superoperator matrix of rho -> U rho U^dag in the column-stacking basis.
Matrix unitary_channel_matrix(const Matrix& u) {
    return Eigen::kroneckerProduct(u.conjugate(), u).eval();
}

int objective_dim(const ObjectiveSpec::Variant& v) {
    if (const auto* om = std::get_if<ObservableMean>(&v)) return static_cast<int>(om->observable.rows());
    if (const auto* st = std::get_if<StateTransfer>(&v)) return st->initial.dim();
    if (const auto* gs = std::get_if<GateOnStates>(&v)) return static_cast<int>(gs->gate.rows());
    return static_cast<int>(std::get<GateOnChannel>(v).gate.rows());
}

const std::vector<DensityMatrix>& resolved_basis(const GateOnStates& gs,
                                                 std::vector<DensityMatrix>& scratch) {
    if (!gs.basis.empty()) return gs.basis;
    scratch = default_gate_basis(static_cast<int>(gs.gate.rows()));
    return scratch;
}

// The batch formulation shared by evaluate and gradient. Every variant is a
// real function of the columns of X_M = Phi_M ... Phi_1 X_0 (or of the full
// channel matrix); `cotangent` returns W with dJ = Re Tr[W^dag dX_M].
struct BatchProblem {
    Matrix initial;  // N^2 x B stacked vectorized inputs
    bool channel_mode = false;
};

BatchProblem batch_problem(const ObjectiveSpec::Variant& v, int dim) {
    BatchProblem p;
    const Eigen::Index n2 = static_cast<Eigen::Index>(dim) * dim;
    if (const auto* om = std::get_if<ObservableMean>(&v)) {
        const DensityMatrix rho0 = om->initial ? *om->initial : DensityMatrix::ground_state(dim);
        p.initial = vectorize(rho0.matrix());
    } else if (const auto* st = std::get_if<StateTransfer>(&v)) {
        p.initial = vectorize(st->initial.matrix());
    } else if (const auto* gs = std::get_if<GateOnStates>(&v)) {
        std::vector<DensityMatrix> scratch;
        const auto& basis = resolved_basis(*gs, scratch);
        p.initial.resize(n2, static_cast<Eigen::Index>(basis.size()));
        for (std::size_t j = 0; j < basis.size(); ++j) {
            p.initial.col(static_cast<Eigen::Index>(j)) = vectorize(basis[j].matrix());
        }
    } else {
        p.initial = Matrix::Identity(n2, n2);
        p.channel_mode = true;
    }
    return p;
}

double objective_value(const ObjectiveSpec::Variant& v, const Matrix& final_batch) {
    if (const auto* om = std::get_if<ObservableMean>(&v)) {
        return (om->observable * devectorize(final_batch.col(0))).trace().real();
    }
    if (const auto* st = std::get_if<StateTransfer>(&v)) {
        return (final_batch.col(0) - vectorize(st->target.matrix())).squaredNorm();
    }
    if (const auto* gs = std::get_if<GateOnStates>(&v)) {
        std::vector<DensityMatrix> scratch;
        const auto& basis = resolved_basis(*gs, scratch);
        double sum = 0.0;
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const Matrix target = gs->gate * basis[j].matrix() * gs->gate.adjoint();
            sum += (final_batch.col(static_cast<Eigen::Index>(j)) - vectorize(target)).squaredNorm();
        }
        return sum / static_cast<double>(basis.size());
    }
    const auto& gc = std::get<GateOnChannel>(v);
    return (final_batch - unitary_channel_matrix(gc.gate)).squaredNorm();
}

Matrix objective_cotangent(const ObjectiveSpec::Variant& v, const Matrix& final_batch) {
    if (const auto* om = std::get_if<ObservableMean>(&v)) {
        return vectorize(om->observable);
    }
    if (const auto* st = std::get_if<StateTransfer>(&v)) {
        return 2.0 * (final_batch.col(0) - vectorize(st->target.matrix()));
    }
    if (const auto* gs = std::get_if<GateOnStates>(&v)) {
        std::vector<DensityMatrix> scratch;
        const auto& basis = resolved_basis(*gs, scratch);
        Matrix w(final_batch.rows(), final_batch.cols());
        const double scale = 2.0 / static_cast<double>(basis.size());
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const Matrix target = gs->gate * basis[j].matrix() * gs->gate.adjoint();
            w.col(static_cast<Eigen::Index>(j)) =
                scale * (final_batch.col(static_cast<Eigen::Index>(j)) - vectorize(target));
        }
        return w;
    }
    const auto& gc = std::get<GateOnChannel>(v);
    return 2.0 * (final_batch - unitary_channel_matrix(gc.gate));
}

}  // namespace

ObjectiveSpec::ObjectiveSpec(Variant v) : v_(std::move(v)) {
    if (const auto* om = std::get_if<ObservableMean>(&v_)) {
        if ((om->observable - om->observable.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
            throw Error(ErrorCode::PhysicsInvalid, "observable not Hermitian");
        }
        if (om->initial && om->initial->dim() != om->observable.rows()) {
            throw Error(ErrorCode::DimensionMismatch, "observable/initial state dim mismatch");
        }
    } else if (const auto* st = std::get_if<StateTransfer>(&v_)) {
        if (st->initial.dim() != st->target.dim()) {
            throw Error(ErrorCode::DimensionMismatch, "state transfer dims mismatch");
        }
    } else if (const auto* gs = std::get_if<GateOnStates>(&v_)) {
        check_unitary(gs->gate, "gate");
        for (const auto& rho : gs->basis) {
            if (rho.dim() != gs->gate.rows()) {
                throw Error(ErrorCode::DimensionMismatch, "basis state dim mismatch");
            }
        }
    } else {
        check_unitary(std::get<GateOnChannel>(v_).gate, "gate");
    }
}

double gate_channel_distance_sq(const Superoperator& channel, const Matrix& gate) {
    if (gate.rows() != channel.hilbert_dim()) {
        throw Error(ErrorCode::DimensionMismatch, "gate/channel dimension mismatch");
    }
    return (channel.matrix() - unitary_channel_matrix(gate)).squaredNorm();
}

double evaluate(const ObjectiveSpec& obj, const ControlledSystem& system,
                const PWCControls& controls) {
    check_shapes(system, controls);
    if (objective_dim(obj.variant()) != system.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "objective dimension does not match system");
    }
    const double dt = controls.grid.dt();
    Matrix batch = batch_problem(obj.variant(), system.dim()).initial;
    for (int m = 0; m < controls.grid.intervals; ++m) {
        batch = step_propagator(system, controls.sample(m), dt).matrix() * batch;
    }
    return objective_value(obj.variant(), batch);
}

GradientVector gradient(const ObjectiveSpec& obj, const ControlledSystem& system,
                        const PWCControls& controls) {
    check_shapes(system, controls);
    if (objective_dim(obj.variant()) != system.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "objective dimension does not match system");
    }
    const int intervals = controls.grid.intervals;
    const int n_u = system.n_coherent();
    const int n_w = system.n_incoherent();
    const double dt = controls.grid.dt();

    // Forward pass: cache the per-step generators, propagators, and the batch
    // states entering every interval.
    std::vector<Matrix> generators(static_cast<std::size_t>(intervals));
    std::vector<Matrix> propagators(static_cast<std::size_t>(intervals));
    std::vector<Matrix> entering(static_cast<std::size_t>(intervals));
    Matrix batch = batch_problem(obj.variant(), system.dim()).initial;
    for (int m = 0; m < intervals; ++m) {
        entering[m] = batch;
        generators[m] = dt * liouvillian(system, controls.sample(m)).matrix();
        propagators[m] = expm(generators[m]);
        batch = propagators[m] * batch;
    }

    // Backward pass: adjoint batch A_m = (Phi_M ... Phi_{m+1})^dag W, with
    // dJ/dtheta = Re Tr[A_m^dag F_m,theta X_{m-1}].
    Matrix adjoint = objective_cotangent(obj.variant(), batch);

    GradientVector grad;
    grad.du.setZero(intervals, n_u);
    grad.dn.setZero(intervals, n_w);
    grad.dw.setZero(intervals, n_w);
    // Re Tr[A^dag F X] as a Frobenius inner product of A with F X.
    auto contract = [](const Matrix& a, const Matrix& fx) {
        return a.conjugate().cwiseProduct(fx).sum().real();
    };
    for (int m = intervals - 1; m >= 0; --m) {
        for (int k = 0; k < n_u; ++k) {
            const Matrix frechet = expm_frechet(generators[m], dt * system.coherent_part(k));
            grad.du(m, k) = contract(adjoint, frechet * entering[m]);
        }
        for (int c = 0; c < n_w; ++c) {
            const Matrix frechet = expm_frechet(generators[m], dt * system.incoherent_part(c));
            grad.dn(m, c) = contract(adjoint, frechet * entering[m]);
            grad.dw(m, c) = 2.0 * controls.w(m, c) * grad.dn(m, c);
        }
        adjoint = propagators[m].adjoint() * adjoint;
    }
    return grad;
}

GradientVector finite_difference_gradient(const ObjectiveSpec& obj,
                                          const ControlledSystem& system,
                                          const PWCControls& controls, double h) {
    GradientVector grad;
    grad.du.setZero(controls.u.rows(), controls.u.cols());
    grad.dw.setZero(controls.w.rows(), controls.w.cols());
    grad.dn.setZero(controls.w.rows(), controls.w.cols());
    PWCControls probe = controls;
    auto central = [&](double& entry) {
        const double saved = entry;
        entry = saved + h;
        const double above = evaluate(obj, system, probe);
        entry = saved - h;
        const double below = evaluate(obj, system, probe);
        entry = saved;
        return (above - below) / (2.0 * h);
    };
    for (Eigen::Index m = 0; m < controls.u.rows(); ++m) {
        for (Eigen::Index k = 0; k < controls.u.cols(); ++k) {
            grad.du(m, k) = central(probe.u(m, k));
        }
    }
    for (Eigen::Index m = 0; m < controls.w.rows(); ++m) {
        for (Eigen::Index c = 0; c < controls.w.cols(); ++c) {
            grad.dw(m, c) = central(probe.w(m, c));
        }
    }
    return grad;
}

double gradient_relative_error(const GradientVector& analytic, const GradientVector& fd) {
    double scale = 1e-12;
    if (fd.du.size() > 0) scale = std::max(scale, fd.du.cwiseAbs().maxCoeff());
    if (fd.dw.size() > 0) scale = std::max(scale, fd.dw.cwiseAbs().maxCoeff());
    double dev = 0.0;
    if (fd.du.size() > 0) dev = std::max(dev, (analytic.du - fd.du).cwiseAbs().maxCoeff());
    if (fd.dw.size() > 0) dev = std::max(dev, (analytic.dw - fd.dw).cwiseAbs().maxCoeff());
    return dev / scale;
}

std::vector<DensityMatrix> default_gate_basis(int dim) {
    if (dim == 2) {
        Vector zero(2), one(2), plus(2), plus_i(2);
        zero << 1, 0;
        one << 0, 1;
        plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
        plus_i << 1.0 / std::sqrt(2.0), Complex(0, 1.0 / std::sqrt(2.0));
        return {DensityMatrix::pure(zero), DensityMatrix::pure(one), DensityMatrix::pure(plus),
                DensityMatrix::pure(plus_i)};
    }
    if (dim == 4) {
        const auto single = default_gate_basis(2);
        std::vector<DensityMatrix> out;
        out.reserve(16);
        for (const auto& a : single) {
            for (const auto& b : single) {
                out.emplace_back(Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval());
            }
        }
        return out;
    }
    throw Error(ErrorCode::DomainInvalid, "default gate basis defined for dim 2 and 4 only");
}

Matrix gate_target(const std::string& name) {
    if (name == "hadamard") {
        Matrix h(2, 2);
        h << 1, 1, 1, -1;
        return h / std::sqrt(2.0);
    }
    if (name == "t") {
        Matrix t = Matrix::Identity(2, 2);
        t(1, 1) = std::polar(1.0, M_PI / 4.0);
        return t;
    }
    if (name == "cnot") {
        Matrix c = Matrix::Zero(4, 4);
        c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1.0;
        return c;
    }
    if (name == "cz") {
        Matrix c = Matrix::Identity(4, 4);
        c(3, 3) = -1.0;
        return c;
    }
    throw Error(ErrorCode::SchemaInvalid, "unknown gate name '" + name + "'");
}

}  // namespace ingrape
