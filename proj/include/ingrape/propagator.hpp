#ifndef INGRAPE_PROPAGATOR_HPP
#define INGRAPE_PROPAGATOR_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "ingrape/models.hpp"

namespace ingrape {

// Uniform grid of M intervals on [0, T].
struct TimeGrid {
    double total_time = 0.0;
    int intervals = 0;

    TimeGrid() = default;
    TimeGrid(double t, int m) : total_time(t), intervals(m) {
        if (!(t > 0.0) || m < 1) {
            throw Error(ErrorCode::DomainInvalid, "time grid requires T > 0 and M >= 1");
        }
    }
    double dt() const { return total_time / intervals; }
};

// Piecewise-constant controls: row m of u holds the coherent amplitudes on
// interval m, row m of w the square-root incoherent parameters. The physical
// spectral densities are n = w.^2, nonnegative by construction.
struct PWCControls {
    TimeGrid grid;
    Eigen::MatrixXd u;  // M x K
    Eigen::MatrixXd w;  // M x C

    Eigen::MatrixXd n() const { return w.array().square(); }
    ControlSample sample(int m) const {
        return {u.row(m).transpose(), w.row(m).transpose().array().square()};
    }
};

void check_shapes(const ControlledSystem& system, const PWCControls& controls);

// States at the grid nodes, with the per-step propagators kept when the
// caller will need them again (the gradient pass does).
struct Trajectory {
    std::vector<DensityMatrix> states;  // M + 1 snapshots
    std::vector<Matrix> step_propagators;  // empty unless requested

    const DensityMatrix& final_state() const { return states.back(); }
};

// One-interval evolution operator expm(dt L(u, n)). dt = 0 yields the
// identity.
Superoperator step_propagator(const ControlledSystem& system, const ControlSample& sample,
                              double dt);

Trajectory propagate(const ControlledSystem& system, const PWCControls& controls,
                     const DensityMatrix& rho0, bool keep_propagators = false);

// Full evolution operator Phi = Phi_M ... Phi_1 (a CPTP channel).
Superoperator propagate_channel(const ControlledSystem& system, const PWCControls& controls);

// Choi matrix sum_ij |i><j| kron Phi(|i><j|); positive semidefinite iff the
// map is completely positive.
Matrix choi_matrix(const Superoperator& channel);

// ---------------------------------------------------------------------------
// Qubit fast path. A dim-2 Liouvillian acts on the Bloch parameterization as
// the affine system dr/dt = B r + c with a real 3x3 matrix B.

struct BlochAffineGenerator {
    Eigen::Matrix3d B = Eigen::Matrix3d::Zero();
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
};

BlochAffineGenerator bloch_affine_generator(const ControlledSystem& system,
                                            const ControlSample& sample);

// Exact affine step over time dt, via the augmented 4x4 system
// [[B, c], [0, 0]]: e^{B dt} and the inhomogeneous column are assembled from
// the Cardano eigenvalues of B through Lagrange-Sylvester interpolation.
// Clustered eigenvalues (class "repeated") fall back to the Pade exponential
// of the augmented matrix; fallbacks are silent but counted.
BlochVector bloch_step_cardano(const BlochAffineGenerator& gen, double dt, const BlochVector& r);

std::uint64_t bloch_cardano_fallback_count();
void reset_bloch_cardano_fallback_count();

// Whole-trajectory qubit propagation through the Bloch fast path; agrees
// with the generic superoperator path to 1e-9.
Trajectory propagate_bloch(const ControlledSystem& system, const PWCControls& controls,
                           const DensityMatrix& rho0);

}  // namespace ingrape

#endif
