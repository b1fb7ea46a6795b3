#include "ingrape/core.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace ingrape {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
        case ErrorCode::DomainInvalid: return "DOMAIN_INVALID";
        case ErrorCode::PhysicsInvalid: return "PHYSICS_INVALID";
        case ErrorCode::SchemaInvalid: return "SCHEMA_INVALID";
        case ErrorCode::SyntaxInvalid: return "SYNTAX_INVALID";
        case ErrorCode::NumericFailure: return "NUMERIC_FAILURE";
        case ErrorCode::IoFailure: return "IO_FAILURE";
    }
    return "UNKNOWN";
}

Vector vectorize(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "vectorize requires a square matrix");
    }
    // Eigen is column-major, so column stacking is a flat copy.
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix devectorize(const Vector& v) {
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (n * n != v.size()) {
        throw Error(ErrorCode::DimensionMismatch, "devectorize: length is not a perfect square");
    }
    return Eigen::Map<const Matrix>(v.data(), n, n);
}

double hs_distance_sq(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "hs_distance_sq: shape mismatch");
    }
    return (a - b).squaredNorm();
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix m, double eig_floor) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1) {
        throw Error(ErrorCode::DimensionMismatch, "density matrix must be square");
    }
    if (!m_.allFinite()) {
        throw Error(ErrorCode::NumericFailure, "density matrix has non-finite entries");
    }
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw Error(ErrorCode::PhysicsInvalid, "density matrix not Hermitian");
    }
    if (std::abs(m_.trace() - Complex(1.0)) > 1e-12) {
        throw Error(ErrorCode::PhysicsInvalid, "density matrix trace != 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < eig_floor) {
        throw Error(ErrorCode::PhysicsInvalid, "density matrix has a negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::ground_state(int dim) {
    Matrix m = Matrix::Zero(dim, dim);
    m(0, 0) = 1.0;
    return DensityMatrix(m);
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
    const double n2 = psi.squaredNorm();
    if (n2 <= 0.0) {
        throw Error(ErrorCode::DomainInvalid, "pure state from zero vector");
    }
    return DensityMatrix(psi * psi.adjoint() / n2);
}

// ---------------------------------------------------------------------------

Superoperator::Superoperator(Matrix m, int hilbert_dim, bool generator)
    : m_(std::move(m)), dim_(hilbert_dim), generator_(generator) {
    const Eigen::Index n2 = static_cast<Eigen::Index>(dim_) * dim_;
    if (dim_ < 1 || m_.rows() != n2 || m_.cols() != n2) {
        throw Error(ErrorCode::DimensionMismatch, "superoperator must be N^2 x N^2");
    }
    if (generator_) {
        // vec(I)^dag G sums the rows picking out the trace of the output.
        Vector trace_row = vectorize(Matrix::Identity(dim_, dim_)).adjoint() * m_;
        const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
        if (trace_row.cwiseAbs().maxCoeff() > 1e-12 * scale) {
            throw Error(ErrorCode::PhysicsInvalid, "generator does not annihilate the trace");
        }
    }
}

Matrix Superoperator::apply(const Matrix& operand) const {
    if (operand.rows() != dim_ || operand.cols() != dim_) {
        throw Error(ErrorCode::DimensionMismatch, "superoperator applied to wrong-size operand");
    }
    return devectorize(m_ * vectorize(operand));
}

Superoperator Superoperator::identity(int hilbert_dim) {
    const Eigen::Index n2 = static_cast<Eigen::Index>(hilbert_dim) * hilbert_dim;
    return Superoperator(Matrix::Identity(n2, n2), hilbert_dim);
}

// ---------------------------------------------------------------------------

const Matrix& pauli_x() {
    static const Matrix s = [] {
        Matrix m(2, 2);
        m << 0, 1, 1, 0;
        return m;
    }();
    return s;
}

const Matrix& pauli_y() {
    static const Matrix s = [] {
        Matrix m(2, 2);
        m << 0, Complex(0, -1), Complex(0, 1), 0;
        return m;
    }();
    return s;
}

const Matrix& pauli_z() {
    static const Matrix s = [] {
        Matrix m(2, 2);
        m << 1, 0, 0, -1;
        return m;
    }();
    return s;
}

BlochVector bloch_from_density(const DensityMatrix& rho) {
    if (rho.dim() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "Bloch vector requires dim 2");
    }
    const Matrix& m = rho.matrix();
    BlochVector r;
    r.x() = (pauli_x() * m).trace().real();
    r.y() = (pauli_y() * m).trace().real();
    r.z() = (pauli_z() * m).trace().real();
    return r;
}

DensityMatrix density_from_bloch(const BlochVector& r) {
    Matrix m = 0.5 * (Matrix::Identity(2, 2) + r.x() * pauli_x() + r.y() * pauli_y() + r.z() * pauli_z());
    return DensityMatrix(std::move(m));
}

// ---------------------------------------------------------------------------
// expm: diagonal Pade with 1-norm scaling (orders 3/5/7/9/13).

namespace {

double norm1(const Matrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

// Evaluates the order-m diagonal Pade approximant p(A)/q(A) given the even
// powers of A. Returns q^{-1} p via an LU solve.
Matrix pade_solve(const Matrix& u, const Matrix& v) {
    // p = v + u, q = v - u; exp ~= q^{-1} p
    return (v - u).partialPivLu().solve(v + u);
}

Matrix expm_pade_3_5_7_9(const Matrix& a, int order) {
    static const double c3[] = {120, 60, 12, 1};
    static const double c5[] = {30240, 15120, 3360, 420, 30, 1};
    static const double c7[] = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
    static const double c9[] = {17643225600, 8821612800, 2075673600, 302702400, 30270240,
                                2162160, 110880, 3960, 90, 1};
    const double* b = order == 3 ? c3 : order == 5 ? c5 : order == 7 ? c7 : c9;

    const Eigen::Index n = a.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    Matrix even = b[0] * id + b[2] * a2;  // q-polynomial even part
    Matrix odd = b[1] * id + b[3] * a2;   // multiplied by A below
    Matrix pw = a2;
    for (int k = 4; k <= order; k += 2) {
        pw = pw * a2;
        even += b[k] * pw;
        odd += b[k + 1] * pw;
    }
    return pade_solve(a * odd, even);
}

Matrix expm_pade_13(const Matrix& a) {
    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
    const Eigen::Index n = a.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                          b[3] * a2 + b[1] * id);
    const Matrix v =
        a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    return pade_solve(u, v);
}

}  // namespace

Matrix expm(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "expm requires a square matrix");
    }
    if (!m.allFinite()) {
        throw Error(ErrorCode::NumericFailure, "expm: non-finite entries");
    }
    const double nrm = norm1(m);
    if (nrm == 0.0) {
        return Matrix::Identity(m.rows(), m.cols());
    }

    // Order thresholds from the standard scaling-and-squaring analysis.
    if (nrm < 1.495585217958292e-2) return expm_pade_3_5_7_9(m, 3);
    if (nrm < 2.539398330063230e-1) return expm_pade_3_5_7_9(m, 5);
    if (nrm < 9.504178996162932e-1) return expm_pade_3_5_7_9(m, 7);
    if (nrm < 2.097847961257068e0) return expm_pade_3_5_7_9(m, 9);

    const double theta13 = 5.371920351148152;
    int squarings = 0;
    Matrix scaled = m;
    if (nrm > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
        scaled *= std::ldexp(1.0, -squarings);
    }
    Matrix r = expm_pade_13(scaled);
    for (int i = 0; i < squarings; ++i) {
        r = r * r;
    }
    return r;
}

ExpmWithFrechet expm_frechet_pair(const Matrix& a, const Matrix& e) {
    if (a.rows() != a.cols() || a.rows() != e.rows() || a.cols() != e.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "expm_frechet: shape mismatch");
    }
    const Eigen::Index n = a.rows();
    Matrix aug = Matrix::Zero(2 * n, 2 * n);
    aug.topLeftCorner(n, n) = a;
    aug.topRightCorner(n, n) = e;
    aug.bottomRightCorner(n, n) = a;
    const Matrix big = expm(aug);
    return {big.topLeftCorner(n, n), big.topRightCorner(n, n)};
}

Matrix expm_frechet(const Matrix& a, const Matrix& e) {
    return expm_frechet_pair(a, e).derivative;
}

// ---------------------------------------------------------------------------
// Cardano

namespace {

// One Newton polish step; skipped near multiple roots where f' degenerates.
Complex polish_root(Complex x, double a, double b, double c, double scale) {
    const Complex f = ((x + a) * x + b) * x + c;
    const Complex df = (3.0 * x + 2.0 * a) * x + b;
    if (std::abs(df) > 1e-8 * scale) {
        x -= f / df;
    }
    return x;
}

}  // namespace

CubicRoots cardano_roots(double a, double b, double c) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
        throw Error(ErrorCode::NumericFailure, "cardano_roots: non-finite coefficients");
    }
    // Depressed form t^3 + p t + q with lambda = t - a/3.
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double shift = a / 3.0;
    const double disc = -4.0 * p * p * p - 27.0 * q * q;

    std::array<Complex, 3> roots;
    // Near-triple roots: p and q indistinguishable from the rounding noise of
    // their own computation. The cube-root amplification would otherwise
    // scatter the computed roots too far for the separation test to notice.
    const double p_noise = std::numeric_limits<double>::epsilon() *
                           std::max(std::abs(b), a * a / 3.0);
    const double q_noise = std::numeric_limits<double>::epsilon() *
                           (2.0 * std::abs(a * a * a) / 27.0 + std::abs(a * b) / 3.0 + std::abs(c));
    if (std::abs(p) <= 64.0 * p_noise && std::abs(q) <= 64.0 * q_noise) {
        roots.fill(Complex(-shift, 0.0));
        return {roots, CubicClass::Repeated};
    }
    if (disc >= 0.0) {
        // Three real roots: trigonometric branch (p < 0 here).
        const double mp3 = std::sqrt(-p / 3.0);
        double arg = 3.0 * q / (2.0 * p * mp3);
        arg = std::clamp(arg, -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            roots[k] = Complex(2.0 * mp3 * std::cos(phi - 2.0 * M_PI * k / 3.0) - shift, 0.0);
        }
    } else {
        // One real root and a conjugate pair.
        const double rad = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
        const double u = std::cbrt(-q / 2.0 + rad);
        const double v = std::cbrt(-q / 2.0 - rad);
        roots[0] = Complex(u + v - shift, 0.0);
        const double re = -(u + v) / 2.0 - shift;
        const double im = std::sqrt(3.0) / 2.0 * (u - v);
        roots[1] = Complex(re, im);
        roots[2] = Complex(re, -im);
    }

    const double scale = std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
    roots[0] = polish_root(roots[0], a, b, c, scale);
    if (roots[1].imag() != 0.0) {
        roots[1] = polish_root(roots[1], a, b, c, scale);
        roots[2] = std::conj(roots[1]);
    } else {
        roots[1] = Complex(polish_root(roots[1], a, b, c, scale).real(), 0.0);
        roots[2] = Complex(polish_root(roots[2], a, b, c, scale).real(), 0.0);
    }

    double max_abs = 0.0;
    for (const auto& r : roots) max_abs = std::max(max_abs, std::abs(r));
    double min_sep = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            min_sep = std::min(min_sep, std::abs(roots[i] - roots[j]));
        }
    }

    CubicClass cls;
    if (min_sep < 1e-7 * (1.0 + max_abs)) {
        cls = CubicClass::Repeated;
    } else if (roots[1].imag() != 0.0) {
        cls = CubicClass::OneRealPairComplex;
    } else {
        cls = CubicClass::ThreeDistinctReal;
    }
    return {roots, cls};
}

}  // namespace ingrape
