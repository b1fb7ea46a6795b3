#include "ingrape/propagator.hpp"

#include <atomic>
#include <cmath>

namespace ingrape {

void check_shapes(const ControlledSystem& system, const PWCControls& controls) {
    const int m = controls.grid.intervals;
    if (controls.u.rows() != m || controls.u.cols() != system.n_coherent() ||
        controls.w.rows() != m || controls.w.cols() != system.n_incoherent()) {
        throw Error(ErrorCode::DimensionMismatch, "control arrays do not match grid/system shapes");
    }
}

Superoperator step_propagator(const ControlledSystem& system, const ControlSample& sample,
                              double dt) {
    if (dt < 0.0) {
        throw Error(ErrorCode::DomainInvalid, "step_propagator requires dt >= 0");
    }
    if (dt == 0.0) {
        return Superoperator::identity(system.dim());
    }
    const Superoperator gen = liouvillian(system, sample);
    return Superoperator(expm(dt * gen.matrix()), system.dim());
}

Trajectory propagate(const ControlledSystem& system, const PWCControls& controls,
                     const DensityMatrix& rho0, bool keep_propagators) {
    check_shapes(system, controls);
    if (rho0.dim() != system.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "initial state has wrong dimension");
    }
    const double dt = controls.grid.dt();
    Trajectory traj;
    traj.states.reserve(static_cast<std::size_t>(controls.grid.intervals) + 1);
    traj.states.push_back(rho0);
    Vector state = vectorize(rho0.matrix());
    for (int m = 0; m < controls.grid.intervals; ++m) {
        const Superoperator phi = step_propagator(system, controls.sample(m), dt);
        state = phi.matrix() * state;
        // Propagated snapshots tolerate slightly negative eigenvalues from
        // the finite-precision exponential.
        traj.states.emplace_back(devectorize(state), /*eig_floor=*/-1e-8);
        if (keep_propagators) {
            traj.step_propagators.push_back(phi.matrix());
        }
    }
    return traj;
}

Superoperator propagate_channel(const ControlledSystem& system, const PWCControls& controls) {
    check_shapes(system, controls);
    const double dt = controls.grid.dt();
    const Eigen::Index n2 = static_cast<Eigen::Index>(system.dim()) * system.dim();
    Matrix phi = Matrix::Identity(n2, n2);
    for (int m = 0; m < controls.grid.intervals; ++m) {
        phi = step_propagator(system, controls.sample(m), dt).matrix() * phi;
    }
    return Superoperator(std::move(phi), system.dim());
}

Matrix choi_matrix(const Superoperator& channel) {
    const int n = channel.hilbert_dim();
    Matrix choi = Matrix::Zero(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(n) * n);
    Matrix unit = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            unit(i, j) = 1.0;
            const Matrix mapped = channel.apply(unit);
            unit(i, j) = 0.0;
            choi.block(static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(j) * n, n, n) +=
                mapped;
        }
    }
    return choi;
}

// ---------------------------------------------------------------------------

BlochAffineGenerator bloch_affine_generator(const ControlledSystem& system,
                                            const ControlSample& sample) {
    if (system.dim() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "Bloch generator requires a dim-2 system");
    }
    const Matrix gen = liouvillian(system, sample).matrix();
    const Matrix* sigma[3] = {&pauli_x(), &pauli_y(), &pauli_z()};

    // dr_i/dt = Tr(sigma_i L(rho)) with rho = (I + r.sigma)/2, so
    // B_ij = Tr(sigma_i L(sigma_j))/2 and c_i = Tr(sigma_i L(I))/2.
    BlochAffineGenerator out;
    const Matrix l_id = devectorize(gen * vectorize(Matrix::Identity(2, 2)));
    Matrix l_sigma[3];
    for (int j = 0; j < 3; ++j) {
        l_sigma[j] = devectorize(gen * vectorize(*sigma[j]));
    }
    for (int i = 0; i < 3; ++i) {
        out.c[i] = 0.5 * (*sigma[i] * l_id).trace().real();
        for (int j = 0; j < 3; ++j) {
            out.B(i, j) = 0.5 * (*sigma[i] * l_sigma[j]).trace().real();
        }
    }
    return out;
}

namespace {

std::atomic<std::uint64_t> g_cardano_fallbacks{0};

// (e^z - 1)/z, series near zero to avoid cancellation.
Complex phi1(Complex z) {
    if (std::abs(z) < 0.5) {
        Complex sum = 0.0;
        Complex term = 1.0;
        for (int k = 1; k <= 18; ++k) {
            sum += term;
            term *= z / static_cast<double>(k + 1);
        }
        return sum;
    }
    return (std::exp(z) - 1.0) / z;
}

BlochVector bloch_step_pade(const BlochAffineGenerator& gen, double dt, const BlochVector& r) {
    Matrix aug = Matrix::Zero(4, 4);
    aug.topLeftCorner(3, 3) = gen.B.cast<Complex>();
    aug.topRightCorner(3, 1) = gen.c.cast<Complex>();
    const Matrix stepped = expm(dt * aug);
    Eigen::Vector4cd x;
    x << r.x(), r.y(), r.z(), 1.0;
    return (stepped * x).head(3).real();
}

}  // namespace

BlochVector bloch_step_cardano(const BlochAffineGenerator& gen, double dt, const BlochVector& r) {
    if (dt < 0.0) {
        throw Error(ErrorCode::DomainInvalid, "bloch_step_cardano requires dt >= 0");
    }
    if (dt == 0.0) {
        return r;
    }
    // Characteristic cubic of B: lambda^3 + a lambda^2 + b lambda + c.
    const Eigen::Matrix3d& b = gen.B;
    const double tr = b.trace();
    const double tr2 = (b * b).trace();
    const double coeff_a = -tr;
    const double coeff_b = 0.5 * (tr * tr - tr2);
    const double coeff_c = -b.determinant();
    const CubicRoots roots = cardano_roots(coeff_a, coeff_b, coeff_c);

    if (roots.discriminant_class == CubicClass::Repeated) {
        g_cardano_fallbacks.fetch_add(1, std::memory_order_relaxed);
        return bloch_step_pade(gen, dt, r);
    }

    // Lagrange-Sylvester: f(B) = sum_i f(lambda_i) P_i with the spectral
    // projectors P_i = prod_{j != i} (B - lambda_j)/(lambda_i - lambda_j).
    // Both entire functions of the augmented step are evaluated on the same
    // projectors: e^{B dt} and the inhomogeneous column dt phi1(B dt) c.
    const Eigen::Matrix3cd bc = b.cast<Complex>();
    const Eigen::Matrix3cd id = Eigen::Matrix3cd::Identity();
    Eigen::Vector3cd rc = r.cast<Complex>();
    Eigen::Vector3cd cc = gen.c.cast<Complex>();
    Eigen::Vector3cd out = Eigen::Vector3cd::Zero();
    for (int i = 0; i < 3; ++i) {
        Eigen::Matrix3cd proj = id;
        for (int j = 0; j < 3; ++j) {
            if (j == i) continue;
            proj = proj * (bc - roots.roots[j] * id) / (roots.roots[i] - roots.roots[j]);
        }
        const Complex z = roots.roots[i] * dt;
        out += std::exp(z) * (proj * rc) + dt * phi1(z) * (proj * cc);
    }
    return out.real();
}

std::uint64_t bloch_cardano_fallback_count() {
    return g_cardano_fallbacks.load(std::memory_order_relaxed);
}

void reset_bloch_cardano_fallback_count() { g_cardano_fallbacks.store(0); }

Trajectory propagate_bloch(const ControlledSystem& system, const PWCControls& controls,
                           const DensityMatrix& rho0) {
    check_shapes(system, controls);
    const double dt = controls.grid.dt();
    Trajectory traj;
    traj.states.reserve(static_cast<std::size_t>(controls.grid.intervals) + 1);
    traj.states.push_back(rho0);
    BlochVector r = bloch_from_density(rho0);
    for (int m = 0; m < controls.grid.intervals; ++m) {
        const BlochAffineGenerator gen = bloch_affine_generator(system, controls.sample(m));
        r = bloch_step_cardano(gen, dt, r);
        Matrix state = 0.5 * (Matrix::Identity(2, 2) + r.x() * pauli_x() + r.y() * pauli_y() +
                              r.z() * pauli_z());
        traj.states.emplace_back(std::move(state), /*eig_floor=*/-1e-8);
    }
    return traj;
}

}  // namespace ingrape
