#ifndef INGRAPE_CORE_HPP
#define INGRAPE_CORE_HPP

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "ingrape/errors.hpp"

namespace ingrape {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Vectorization convention used throughout: column stacking, so that
// vec(A rho B) = (B^T kron A) vec(rho). All superoperator matrices are
// written in this basis.
Vector vectorize(const Matrix& m);
Matrix devectorize(const Vector& v);

// Tr[(A-B)^dag (A-B)], the squared Hilbert-Schmidt distance.
double hs_distance_sq(const Matrix& a, const Matrix& b);

// ---------------------------------------------------------------------------
// Density matrices

class DensityMatrix {
  public:
    // Validates Hermiticity (tol 1e-12), unit trace (tol 1e-12) and
    // positivity (smallest eigenvalue >= eig_floor). Propagated states use a
    // looser floor than freshly constructed ones.
    explicit DensityMatrix(Matrix m, double eig_floor = -1e-10);

    const Matrix& matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }

    static DensityMatrix ground_state(int dim);
    static DensityMatrix pure(const Vector& psi);

  private:
    Matrix m_;
};

// ---------------------------------------------------------------------------
// Superoperators (N^2 x N^2 matrices acting on vectorized operators)

class Superoperator {
  public:
    // A generator-flagged superoperator must annihilate the trace functional:
    // vec(I)^dag G = 0 (tol 1e-12 relative to the matrix scale).
    Superoperator(Matrix m, int hilbert_dim, bool generator = false);

    const Matrix& matrix() const { return m_; }
    int hilbert_dim() const { return dim_; }
    bool is_generator() const { return generator_; }

    Matrix apply(const Matrix& operand) const;

    static Superoperator identity(int hilbert_dim);

  private:
    Matrix m_;
    int dim_;
    bool generator_;
};

// ---------------------------------------------------------------------------
// Bloch parameterization (dim 2). Convention: rho = (I + r . sigma)/2 with
// Pauli basis (sigma_x, sigma_y, sigma_z) and r_z = rho00 - rho11, so the
// ground state |0><0| sits at the north pole r = (0,0,1).

using BlochVector = Eigen::Vector3d;

BlochVector bloch_from_density(const DensityMatrix& rho);
DensityMatrix density_from_bloch(const BlochVector& r);

const Matrix& pauli_x();
const Matrix& pauli_y();
const Matrix& pauli_z();

// ---------------------------------------------------------------------------
// Matrix exponential: scaling-and-squaring with diagonal Pade approximants
// of order up to 13, 1-norm based scaling.
Matrix expm(const Matrix& m);

// Directional (Frechet) derivative of expm at A along E, computed as the
// top-right block of expm([[A, E], [0, A]]).
Matrix expm_frechet(const Matrix& a, const Matrix& e);

// Same augmented exponential, returning both blocks: exp(A) and the Frechet
// derivative. Saves one expm when the caller needs the propagator anyway.
struct ExpmWithFrechet {
    Matrix value;       // exp(A)
    Matrix derivative;  // d/ds exp(A + sE) at s = 0
};
ExpmWithFrechet expm_frechet_pair(const Matrix& a, const Matrix& e);

// ---------------------------------------------------------------------------
// Cubic roots of lambda^3 + a lambda^2 + b lambda + c = 0 (real coefficients)
// via the Cardano method: trigonometric branch when all roots are real,
// radical branch otherwise. Complex roots come as a conjugate pair.

enum class CubicClass {
    ThreeDistinctReal,
    OneRealPairComplex,
    Repeated,  // min pairwise root separation < 1e-7 * (1 + max |root|)
};

struct CubicRoots {
    std::array<Complex, 3> roots;
    CubicClass discriminant_class;
};

CubicRoots cardano_roots(double a, double b, double c);

}  // namespace ingrape

#endif
