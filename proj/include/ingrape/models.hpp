#ifndef INGRAPE_MODELS_HPP
#define INGRAPE_MODELS_HPP

#include <vector>

#include "ingrape/core.hpp"

namespace ingrape {

// One dissipation channel between a pair of levels, with spontaneous rate A
// (Einstein coefficient) and stimulated rates A*n driven by one component of
// the incoherent control. With jump-down L = |lower><upper| and jump-up
// L^dag, the channel contributes
//
//   A (n + 1) D[L] + A n D[L^dag],   D[L] rho = L rho L^dag - 1/2 {L^dag L, rho}.
struct IncoherentChannel {
    int lower = 0;
    int upper = 0;
    double einstein_coeff = 0.0;
    int control_index = 0;
};

// Generalization to an arbitrary lowering operator; same rate structure.
// Pair channels are the special case lowering = |lower><upper|. Composite
// systems with local environments need the operator form (a local jump acts
// on several basis transitions coherently).
struct OperatorChannel {
    Matrix lowering;
    double einstein_coeff = 0.0;
    int control_index = 0;
};

// Constant controls on one time interval: coherent amplitudes u and
// incoherent spectral densities n (componentwise >= 0).
struct ControlSample {
    Eigen::VectorXd u;
    Eigen::VectorXd n;
};

// An N-level system with free Hamiltonian H0, coherent interaction
// Hamiltonians V_k and incoherent-control-dependent dissipation channels.
// Immutable after construction; defines the Liouvillian family L(u, n).
class ControlledSystem {
  public:
    ControlledSystem(Matrix h0, std::vector<Matrix> interactions,
                     std::vector<IncoherentChannel> channels, int n_controls,
                     std::vector<OperatorChannel> operator_channels = {});

    int dim() const { return static_cast<int>(h0_.rows()); }
    int n_coherent() const { return static_cast<int>(interactions_.size()); }
    int n_incoherent() const { return n_controls_; }

    const Matrix& h0() const { return h0_; }
    const std::vector<Matrix>& interactions() const { return interactions_; }
    const std::vector<IncoherentChannel>& channels() const { return channels_; }
    const std::vector<OperatorChannel>& operator_channels() const { return operator_channels_; }

    // Precomputed affine decomposition L(u, n) = drift + sum u_k C_k + sum n_c D_c.
    const Matrix& drift_part() const { return drift_; }
    const Matrix& coherent_part(int k) const { return coherent_parts_.at(k); }
    const Matrix& incoherent_part(int c) const { return incoherent_parts_.at(c); }

  private:
    Matrix h0_;
    std::vector<Matrix> interactions_;
    std::vector<IncoherentChannel> channels_;
    std::vector<OperatorChannel> operator_channels_;
    int n_controls_;

    Matrix drift_;
    std::vector<Matrix> coherent_parts_;
    std::vector<Matrix> incoherent_parts_;
};

// GKSL dissipator superoperator at incoherent control value n.
Superoperator dissipator_superop(const ControlledSystem& system, const Eigen::VectorXd& n);

// Full generator L(rho) = -i [H0 + sum u_k V_k, rho] + L_n(rho).
Superoperator liouvillian(const ControlledSystem& system, const ControlSample& sample);

// Commutator superoperator -i [H, .] in the column-stacking basis.
Matrix commutator_superop(const Matrix& h);

// ---------------------------------------------------------------------------
// Presets. A rate equal to zero disables the corresponding channel but keeps
// the control layout, so control array shapes do not depend on the rates.

// Two-level system: H0 = (omega/2) sigma_z, one sigma_x drive, one decay
// channel 0<->1 with rate gamma tied to incoherent component 0.
ControlledSystem preset_qubit(double omega, double gamma);

// Three-level system with a forbidden 0<->1 transition: diagonal H0 with
// energies E1, E2, E3, a single drive coupling levels 0-2 and 1-2, and decay
// channels (0,2) and (1,2) with independent incoherent components.
ControlledSystem preset_qutrit_forbidden(double e1, double e2, double e3, Complex v13, Complex v23,
                                         double a1, double a2);

// Two qubits with Ising coupling J sigma_z x sigma_z, local sigma_x drives
// and local decay (lowering operators sigma_minus x I and I x sigma_minus);
// each qubit's environment has its own incoherent component.
ControlledSystem preset_two_qubit(double omega1, double omega2, double coupling, double gamma1,
                                  double gamma2);

}  // namespace ingrape

#endif
