#include "ingrape/models.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace ingrape {

namespace {

// GKSL channel term in the column-stacking basis:
// D[L] = conj(L) kron L - 1/2 (I kron L^dag L + (L^dag L)^T kron I).
Matrix lindblad_superop(const Matrix& jump) {
    const Eigen::Index n = jump.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix gram = jump.adjoint() * jump;
    return Eigen::kroneckerProduct(jump.conjugate(), jump).eval() -
           0.5 * Eigen::kroneckerProduct(id, gram).eval() -
           0.5 * Eigen::kroneckerProduct(gram.transpose(), id).eval();
}

void check_hermitian(const Matrix& m, const char* what) {
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
        throw Error(ErrorCode::PhysicsInvalid, std::string(what) + " not Hermitian");
    }
}

}  // namespace

Matrix commutator_superop(const Matrix& h) {
    const Eigen::Index n = h.rows();
    const Matrix id = Matrix::Identity(n, n);
    return Complex(0, -1) * (Eigen::kroneckerProduct(id, h).eval() -
                             Eigen::kroneckerProduct(h.transpose(), id).eval());
}

ControlledSystem::ControlledSystem(Matrix h0, std::vector<Matrix> interactions,
                                   std::vector<IncoherentChannel> channels, int n_controls,
                                   std::vector<OperatorChannel> operator_channels)
    : h0_(std::move(h0)),
      interactions_(std::move(interactions)),
      channels_(std::move(channels)),
      operator_channels_(std::move(operator_channels)),
      n_controls_(n_controls) {
    const int n = dim();
    if (h0_.rows() != h0_.cols() || n < 1) {
        throw Error(ErrorCode::DimensionMismatch, "H0 must be square");
    }
    check_hermitian(h0_, "H0");
    for (std::size_t k = 0; k < interactions_.size(); ++k) {
        if (interactions_[k].rows() != n || interactions_[k].cols() != n) {
            throw Error(ErrorCode::DimensionMismatch, "V[" + std::to_string(k) + "] wrong shape");
        }
        check_hermitian(interactions_[k], ("V[" + std::to_string(k) + "]").c_str());
    }
    if (n_controls_ < 0) {
        throw Error(ErrorCode::DomainInvalid, "n_controls must be >= 0");
    }
    for (const auto& ch : channels_) {
        if (ch.lower < 0 || ch.upper >= n || ch.lower >= ch.upper) {
            throw Error(ErrorCode::DomainInvalid, "channel indices must satisfy 0 <= lower < upper < dim");
        }
        if (ch.einstein_coeff <= 0.0) {
            throw Error(ErrorCode::DomainInvalid, "channel einstein_coeff must be > 0");
        }
        if (ch.control_index < 0 || ch.control_index >= n_controls_) {
            throw Error(ErrorCode::DomainInvalid, "channel control_index out of range");
        }
    }
    for (const auto& ch : operator_channels_) {
        if (ch.lowering.rows() != n || ch.lowering.cols() != n) {
            throw Error(ErrorCode::DimensionMismatch, "operator channel jump has wrong shape");
        }
        if (ch.einstein_coeff <= 0.0) {
            throw Error(ErrorCode::DomainInvalid, "channel einstein_coeff must be > 0");
        }
        if (ch.control_index < 0 || ch.control_index >= n_controls_) {
            throw Error(ErrorCode::DomainInvalid, "channel control_index out of range");
        }
    }

    // Assemble the affine decomposition once. Per channel, the n-independent
    // part is A D[L_down] and the part linear in n_c is A (D[L_down] + D[L_up]).
    const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
    drift_ = commutator_superop(h0_);
    coherent_parts_.reserve(interactions_.size());
    for (const auto& v : interactions_) {
        coherent_parts_.push_back(commutator_superop(v));
    }
    incoherent_parts_.assign(static_cast<std::size_t>(n_controls_), Matrix::Zero(n2, n2));

    auto add_channel = [&](const Matrix& lowering, double rate, int control) {
        const Matrix down = lindblad_superop(lowering);
        const Matrix up = lindblad_superop(lowering.adjoint());
        drift_ += rate * down;
        incoherent_parts_[static_cast<std::size_t>(control)] += rate * (down + up);
    };
    for (const auto& ch : channels_) {
        Matrix lowering = Matrix::Zero(n, n);
        lowering(ch.lower, ch.upper) = 1.0;
        add_channel(lowering, ch.einstein_coeff, ch.control_index);
    }
    for (const auto& ch : operator_channels_) {
        add_channel(ch.lowering, ch.einstein_coeff, ch.control_index);
    }
}

Superoperator dissipator_superop(const ControlledSystem& system, const Eigen::VectorXd& n) {
    if (n.size() != system.n_incoherent()) {
        throw Error(ErrorCode::DimensionMismatch, "incoherent control vector has wrong length");
    }
    if (n.size() > 0 && n.minCoeff() < 0.0) {
        throw Error(ErrorCode::DomainInvalid, "incoherent control must be componentwise >= 0");
    }
    Matrix m = system.drift_part() - commutator_superop(system.h0());
    for (int c = 0; c < system.n_incoherent(); ++c) {
        m += n[c] * system.incoherent_part(c);
    }
    return Superoperator(std::move(m), system.dim(), /*generator=*/true);
}

Superoperator liouvillian(const ControlledSystem& system, const ControlSample& sample) {
    if (sample.u.size() != system.n_coherent()) {
        throw Error(ErrorCode::DimensionMismatch, "coherent control vector has wrong length");
    }
    if (sample.n.size() != system.n_incoherent()) {
        throw Error(ErrorCode::DimensionMismatch, "incoherent control vector has wrong length");
    }
    if (sample.n.size() > 0 && sample.n.minCoeff() < 0.0) {
        throw Error(ErrorCode::DomainInvalid, "incoherent control must be componentwise >= 0");
    }
    Matrix m = system.drift_part();
    for (int k = 0; k < system.n_coherent(); ++k) {
        m += sample.u[k] * system.coherent_part(k);
    }
    for (int c = 0; c < system.n_incoherent(); ++c) {
        m += sample.n[c] * system.incoherent_part(c);
    }
    return Superoperator(std::move(m), system.dim(), /*generator=*/true);
}

ControlledSystem preset_qubit(double omega, double gamma) {
    if (gamma < 0.0) {
        throw Error(ErrorCode::DomainInvalid, "gamma must be >= 0");
    }
    Matrix h0 = 0.5 * omega * pauli_z();
    std::vector<IncoherentChannel> channels;
    if (gamma > 0.0) {
        channels.push_back({0, 1, gamma, 0});
    }
    return ControlledSystem(std::move(h0), {pauli_x()}, std::move(channels), 1);
}

ControlledSystem preset_qutrit_forbidden(double e1, double e2, double e3, Complex v13, Complex v23,
                                         double a1, double a2) {
    if (e1 == e2 || e1 == e3 || e2 == e3) {
        throw Error(ErrorCode::DomainInvalid, "qutrit energies must be pairwise distinct");
    }
    if (a1 < 0.0 || a2 < 0.0) {
        throw Error(ErrorCode::DomainInvalid, "Einstein coefficients must be >= 0");
    }
    Matrix h0 = Matrix::Zero(3, 3);
    h0.diagonal() << e1, e2, e3;
    // Drive couples only to level 2; the 0<->1 transition stays forbidden.
    Matrix v = Matrix::Zero(3, 3);
    v(0, 2) = v13;
    v(1, 2) = v23;
    v(2, 0) = std::conj(v13);
    v(2, 1) = std::conj(v23);
    std::vector<IncoherentChannel> channels;
    if (a1 > 0.0) channels.push_back({0, 2, a1, 0});
    if (a2 > 0.0) channels.push_back({1, 2, a2, 1});
    return ControlledSystem(std::move(h0), {std::move(v)}, std::move(channels), 2);
}

ControlledSystem preset_two_qubit(double omega1, double omega2, double coupling, double gamma1,
                                  double gamma2) {
    if (gamma1 < 0.0 || gamma2 < 0.0) {
        throw Error(ErrorCode::DomainInvalid, "gammas must be >= 0");
    }
    const Matrix id = Matrix::Identity(2, 2);
    const Matrix z1 = Eigen::kroneckerProduct(pauli_z(), id).eval();
    const Matrix z2 = Eigen::kroneckerProduct(id, pauli_z()).eval();
    Matrix h0 = 0.5 * omega1 * z1 + 0.5 * omega2 * z2 +
                coupling * Eigen::kroneckerProduct(pauli_z(), pauli_z()).eval();
    std::vector<Matrix> drives{Eigen::kroneckerProduct(pauli_x(), id).eval(),
                               Eigen::kroneckerProduct(id, pauli_x()).eval()};
    Matrix lower = Matrix::Zero(2, 2);
    lower(0, 1) = 1.0;
    std::vector<OperatorChannel> ops;
    if (gamma1 > 0.0) {
        ops.push_back({Eigen::kroneckerProduct(lower, id).eval(), gamma1, 0});
    }
    if (gamma2 > 0.0) {
        ops.push_back({Eigen::kroneckerProduct(id, lower).eval(), gamma2, 1});
    }
    return ControlledSystem(std::move(h0), std::move(drives), {}, 2, std::move(ops));
}

}  // namespace ingrape
