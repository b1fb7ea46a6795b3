#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ingrape/core.hpp"
#include "testutil.hpp"

using namespace ingrape;
using testutil::rel_err;

TEST_CASE("vectorize uses column stacking") {
    Vector v = vectorize(Matrix::Identity(2, 2));
    CHECK(v.size() == 4);
    CHECK(v(0) == Complex(1, 0));
    CHECK(v(1) == Complex(0, 0));
    CHECK(v(2) == Complex(0, 0));
    CHECK(v(3) == Complex(1, 0));

    Vector vx = vectorize(pauli_x());
    CHECK(vx(0) == Complex(0, 0));
    CHECK(vx(1) == Complex(1, 0));
    CHECK(vx(2) == Complex(1, 0));
    CHECK(vx(3) == Complex(0, 0));
}

TEST_CASE("devectorize inverts vectorize exactly") {
    std::mt19937_64 rng(11);
    const Matrix m = testutil::random_matrix(3, rng);
    CHECK((devectorize(vectorize(m)) - m).cwiseAbs().maxCoeff() == 0.0);

    Vector bad(5);
    bad.setZero();
    CHECK_THROWS_AS(devectorize(bad), Error);
}

TEST_CASE("hs_distance_sq") {
    std::mt19937_64 rng(12);
    const Matrix a = testutil::random_matrix(3, rng);
    CHECK(hs_distance_sq(a, a) == 0.0);

    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    CHECK(hs_distance_sq(p0, p1) == doctest::Approx(2.0).epsilon(1e-14));

    // Entrywise oracle.
    const Matrix b = testutil::random_matrix(3, rng);
    double direct = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            direct += std::norm(a(i, j) - b(i, j));
        }
    }
    CHECK(hs_distance_sq(a, b) == doctest::Approx(direct).epsilon(1e-12));

    CHECK_THROWS_AS(hs_distance_sq(a, Matrix::Identity(2, 2)), Error);
}

TEST_CASE("Bloch conventions") {
    const DensityMatrix mixed(0.5 * Matrix::Identity(2, 2));
    CHECK(bloch_from_density(mixed).norm() == 0.0);

    const BlochVector north = bloch_from_density(DensityMatrix::ground_state(2));
    CHECK(north.x() == 0.0);
    CHECK(north.y() == 0.0);
    CHECK(north.z() == 1.0);
}

TEST_CASE("Bloch round trip is exact on random states") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const DensityMatrix rho = testutil::random_density(2, rng);
        const DensityMatrix back = density_from_bloch(bloch_from_density(rho));
        CHECK((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-14);
        // Round trip preserves Hermiticity/trace/positivity by construction
        // (the DensityMatrix constructor revalidates).
    }
    CHECK_THROWS_AS(bloch_from_density(testutil::random_density(3, rng)), Error);
}

TEST_CASE("expm basics") {
    CHECK((expm(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.7;
    d(1, 1) = Complex(0.0, -2.3);
    const Matrix ed = expm(d);
    CHECK(std::abs(ed(0, 0) - std::exp(Complex(1.7, 0))) < 1e-13);
    CHECK(std::abs(ed(1, 1) - std::exp(Complex(0.0, -2.3))) < 1e-13);
    CHECK(std::abs(ed(0, 1)) == 0.0);

    Matrix nilpotent = Matrix::Zero(2, 2);
    nilpotent(0, 1) = 1.0;
    const Matrix en = expm(nilpotent);
    CHECK(std::abs(en(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(en(0, 1) - 1.0) < 1e-15);
    CHECK(std::abs(en(1, 0)) < 1e-15);

    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(expm(bad), Error);
}

TEST_CASE("expm matches the Taylor-series oracle") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix m = testutil::random_matrix(4, rng);
        CHECK(rel_err(expm(m), testutil::taylor_expm(m)) < 1e-10);
    }
}

TEST_CASE("expm is multiplicative on commuting pairs") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix m = testutil::random_matrix(3, rng);
        const Matrix a = 0.7 * m + 0.2 * m * m;
        const Matrix b = -0.4 * m + 0.1 * m * m;
        CHECK(rel_err(expm(a + b), expm(a) * expm(b)) < 1e-10);
    }
}

TEST_CASE("cardano solves factored cubics") {
    // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
    const CubicRoots r = cardano_roots(-6, 11, -6);
    CHECK(r.discriminant_class == CubicClass::ThreeDistinctReal);
    std::array<double, 3> sorted{r.roots[0].real(), r.roots[1].real(), r.roots[2].real()};
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sorted[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(sorted[2] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("cardano handles a pure imaginary pair") {
    const CubicRoots r = cardano_roots(0, 1, 0);  // x^3 + x
    CHECK(r.discriminant_class == CubicClass::OneRealPairComplex);
    CHECK(std::abs(r.roots[0]) < 1e-14);
    CHECK(std::abs(r.roots[1] - Complex(0, 1)) < 1e-12);
    CHECK(std::abs(r.roots[2] - Complex(0, -1)) < 1e-12);
    CHECK(r.roots[2] == std::conj(r.roots[1]));
}

TEST_CASE("cardano classifies a triple root as repeated") {
    const CubicRoots r = cardano_roots(-3, 3, -1);  // (x-1)^3
    CHECK(r.discriminant_class == CubicClass::Repeated);
    for (const auto& root : r.roots) {
        CHECK(std::abs(root - Complex(1, 0)) < 1e-5);
    }
}

TEST_CASE("cardano residuals stay below tolerance on random cubics") {
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double a = dist(rng), b = dist(rng), c = dist(rng);
        const CubicRoots r = cardano_roots(a, b, c);
        const double tol = 1e-9 * std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
        for (const auto& x : r.roots) {
            const Complex residual = ((x + a) * x + b) * x + c;
            CHECK(std::abs(residual) <= tol);
        }
    }
}

TEST_CASE("expm_frechet limits") {
    std::mt19937_64 rng(17);
    const Matrix a = testutil::random_matrix(3, rng);
    CHECK(expm_frechet(a, Matrix::Zero(3, 3)).cwiseAbs().maxCoeff() < 1e-14);

    const Matrix e = testutil::random_matrix(3, rng);
    CHECK(rel_err(expm_frechet(Matrix::Zero(3, 3), e), e) < 1e-14);
}

TEST_CASE("expm_frechet matches central finite differences") {
    std::mt19937_64 rng(18);
    const double h = 1e-6;
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix a = testutil::random_matrix(3, rng);
        const Matrix e = testutil::random_matrix(3, rng);
        const Matrix fd = (expm(a + h * e) - expm(a - h * e)) / (2.0 * h);
        CHECK(rel_err(expm_frechet(a, e), fd) < 1e-6);
    }
}

TEST_CASE("expm_frechet is linear in the direction") {
    std::mt19937_64 rng(19);
    const Matrix a = testutil::random_matrix(3, rng);
    const Matrix e1 = testutil::random_matrix(3, rng);
    const Matrix e2 = testutil::random_matrix(3, rng);
    const double alpha = 0.37, beta = -1.21;
    const Matrix combined = expm_frechet(a, alpha * e1 + beta * e2);
    const Matrix split = alpha * expm_frechet(a, e1) + beta * expm_frechet(a, e2);
    CHECK(rel_err(combined, split) < 1e-12);
}

TEST_CASE("expm_frechet_pair returns the exponential alongside") {
    std::mt19937_64 rng(20);
    const Matrix a = testutil::random_matrix(4, rng);
    const Matrix e = testutil::random_matrix(4, rng);
    const auto pair = expm_frechet_pair(a, e);
    CHECK(rel_err(pair.value, expm(a)) < 1e-12);
    CHECK(rel_err(pair.derivative, expm_frechet(a, e)) == 0.0);
}

TEST_CASE("generator-flagged superoperators must annihilate the trace") {
    // -i[H, .] qualifies; a random matrix does not.
    std::mt19937_64 rng(21);
    const Matrix h = testutil::random_hermitian(3, rng);
    const Matrix id = Matrix::Identity(3, 3);
    Matrix comm = Matrix::Zero(9, 9);
    // Direct Kronecker assembly of -i(I kron H - H^T kron I).
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
                for (int l = 0; l < 3; ++l) {
                    Complex value = Complex(0, -1) * (id(j, l) * h(i, k) - h(l, j) * id(i, k));
                    comm(3 * j + i, 3 * l + k) = value;
                }
            }
        }
    }
    CHECK_NOTHROW(Superoperator(comm, 3, true));
    CHECK_THROWS_AS(Superoperator(testutil::random_matrix(9, rng), 3, true), Error);
}

TEST_CASE("density matrix invariants are enforced") {
    Matrix not_hermitian(2, 2);
    not_hermitian << 1.0, Complex(0.1, 0.1), 0.0, 0.0;
    CHECK_THROWS_AS(DensityMatrix{not_hermitian}, Error);

    Matrix wrong_trace = 0.7 * Matrix::Identity(2, 2);
    CHECK_THROWS_AS(DensityMatrix{wrong_trace}, Error);

    Matrix negative(2, 2);
    negative << 1.5, 0, 0, -0.5;
    CHECK_THROWS_AS(DensityMatrix{negative}, Error);
}
