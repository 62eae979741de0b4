#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ipsae/linalg.hpp"
#include "test_util.hpp"

using namespace ipsae;
using namespace ipsae::test;

TEST_CASE("matrix construction validates shape and finiteness") {
    CHECK_THROWS_AS(Matrix(2, 2, std::vector<double>{1.0, 2.0}), DimensionMismatch);
    CHECK_THROWS_AS(Matrix(1, 2, std::vector<double>{1.0, NAN}), NonFinite);
    CHECK_THROWS_AS(Matrix(0, 3), DimensionMismatch);
}

TEST_CASE("plumbing ops: matmul / transpose / concat / slice / norm") {
    const Matrix a(2, 3, {1, 2, 3, 4, 5, 6});
    const Matrix id3 = Matrix::identity(3);
    CHECK(matmul(a, id3) == a);
    CHECK(transpose(transpose(a)) == a);
    CHECK_THROWS_AS(matmul(a, a), DimensionMismatch);

    const Matrix b(1, 3, {7, 8, 9});
    const Matrix stacked = concat_rows(a, b);
    CHECK(stacked.rows() == 3);
    CHECK(slice_rows(stacked, 0, 2) == a);
    CHECK(slice_rows(stacked, 2, 3) == b);
    CHECK_THROWS_AS(concat_rows(a, Matrix(1, 2, {1, 2})), DimensionMismatch);
    CHECK_THROWS_AS(slice_rows(a, 1, 1), IndexOutOfRange);

    CHECK(frobenius_norm(Matrix(2, 2, {3, 0, 0, 4})) == doctest::Approx(5.0));
    CHECK(frobenius_norm(Matrix(2, 2)) == 0.0);
}

TEST_CASE("sym_eigendecompose: identity") {
    const auto eig = sym_eigendecompose(Matrix::identity(3));
    for (double v : eig.values) {
        CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("sym_eigendecompose: diagonal matrix, descending order") {
    const auto eig = sym_eigendecompose(Matrix::diag({5.0, 2.0, -1.0}));
    CHECK(eig.values[0] == doctest::Approx(5.0));
    CHECK(eig.values[1] == doctest::Approx(2.0));
    CHECK(eig.values[2] == doctest::Approx(-1.0));
    // Columns are signed unit axes.
    for (std::size_t j = 0; j < 3; ++j) {
        double norm = 0.0;
        for (std::size_t i = 0; i < 3; ++i) norm += eig.vectors(i, j) * eig.vectors(i, j);
        CHECK(norm == doctest::Approx(1.0));
    }
}

TEST_CASE("sym_eigendecompose: reconstruction and orthonormality bounds") {
    Rng rng(7);
    const Matrix m = random_symmetric(rng, 6);
    const auto eig = sym_eigendecompose(m);

    const Matrix vtv = matmul(transpose(eig.vectors), eig.vectors);
    CHECK(frobenius_norm(subtract(vtv, Matrix::identity(6))) <= 1e-8 * 6);

    const Matrix recon =
        matmul(matmul(eig.vectors, Matrix::diag(eig.values)), transpose(eig.vectors));
    CHECK(frobenius_norm(subtract(m, recon)) <= 1e-8 * (1.0 + frobenius_norm(m)));
}

TEST_CASE("sym_eigendecompose: rejects bad input") {
    CHECK_THROWS_AS(sym_eigendecompose(Matrix(2, 3)), NotSquare);
    CHECK_THROWS_AS(sym_eigendecompose(Matrix(2, 2, {0, 1, 0, 0})), NotSymmetric);
}

TEST_CASE("solve_sylvester_sym: trivial systems") {
    const Matrix id2 = Matrix::identity(2);
    const auto sol = solve_sylvester_sym(id2, id2, scale(id2, 2.0));
    CHECK(max_abs_diff(sol.W, id2) <= 1e-12);
    CHECK(sol.nullified_modes == 0);

    // Diagonal case: W_ij = C_ij / (a_i + b_j).
    const auto diag_sol = solve_sylvester_sym(Matrix::diag({1.0, 2.0}), Matrix(1, 1, {3.0}),
                                              Matrix(2, 1, {4.0, 5.0}));
    CHECK(diag_sol.W(0, 0) == doctest::Approx(1.0));
    CHECK(diag_sol.W(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("solve_sylvester_sym: dimension and symmetry checks") {
    const Matrix id2 = Matrix::identity(2);
    CHECK_THROWS_AS(solve_sylvester_sym(id2, id2, Matrix(3, 2)), DimensionMismatch);
    CHECK_THROWS_AS(solve_sylvester_sym(Matrix(2, 2, {0, 5, 0, 0}), id2, id2), NotSymmetric);
}

TEST_CASE("solve_sylvester_kron: trivial cases") {
    const Matrix id2 = Matrix::identity(2);
    CHECK(max_abs_diff(solve_sylvester_kron(id2, id2, scale(id2, 2.0)), id2) <= 1e-12);
    const Matrix w =
        solve_sylvester_kron(Matrix(1, 1, {2.0}), Matrix(1, 1, {3.0}), Matrix(1, 1, {10.0}));
    CHECK(w(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("solve_sylvester_kron: rejects oversized and singular systems") {
    CHECK_THROWS_AS(solve_sylvester_kron(Matrix::identity(21), Matrix::identity(21),
                                         Matrix(21, 21, 1.0)),
                    TooLarge);
    // A = 1, B = -1 makes the eigen-sum zero.
    CHECK_THROWS_AS(
        solve_sylvester_kron(Matrix(1, 1, {1.0}), Matrix(1, 1, {-1.0}), Matrix(1, 1, {1.0})),
        SingularSystem);
}

TEST_CASE("sylvester fast path matches kronecker oracle on seeded PSD systems") {
    Rng rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t k = 2 + rng.next_below(5);  // up to 6
        const std::size_t m = 2 + rng.next_below(5);
        const Matrix a = random_psd(rng, k, 0.1);
        const Matrix b = random_psd(rng, m, 0.1);
        const Matrix c = random_matrix(rng, k, m);

        const auto sol = solve_sylvester_sym(a, b, c, 0.0);
        const Matrix oracle = solve_sylvester_kron(a, b, c);
        CHECK(max_abs_diff(sol.W, oracle) <= 1e-8);
        CHECK(sol.nullified_modes == 0);

        const double bound = 1e-8 * (frobenius_norm(a) + frobenius_norm(b)) *
                             (1.0 + frobenius_norm(sol.W));
        CHECK(sol.residual <= bound);
        CHECK(sol.residual == doctest::Approx(sylvester_residual(a, b, c, sol.W)));
    }
}

TEST_CASE("solve_sylvester_sym: rank-deficient system nullifies zero eigen-sums") {
    // A = B = 0 has every eigen-sum zero; the canonical solution is W = 0.
    const Matrix zero2(2, 2);
    const auto sol = solve_sylvester_sym(zero2, zero2, zero2);
    CHECK(sol.nullified_modes == 4);
    CHECK(frobenius_norm(sol.W) == 0.0);
}

TEST_CASE("ridge_solve: identity design matrix") {
    Rng rng(5);
    const Matrix xp = random_matrix(rng, 4, 3);
    const Matrix s = Matrix::identity(3);
    const Matrix w = ridge_solve(xp, s, 1e-12);
    CHECK(max_abs_diff(w, xp) <= 1e-9);
}

TEST_CASE("ridge_solve: self-regression recovers the identity block") {
    Rng rng(6);
    const Matrix s = random_psd(rng, 3, 1.0);  // full-rank rows
    const Matrix extra = random_matrix(rng, 2, 3);
    const Matrix xp = concat_rows(s, extra);
    const Matrix w = ridge_solve(xp, s, 0.0);
    CHECK(max_abs_diff(slice_rows(w, 0, 3), Matrix::identity(3)) <= 1e-8);
}

TEST_CASE("ridge_solve: normal-equation oracle via Gaussian elimination") {
    Rng rng(8);
    const Matrix xp = random_matrix(rng, 5, 20);
    const Matrix s = random_matrix(rng, 3, 20);
    const double lambda = 0.5;
    const Matrix w = ridge_solve(xp, s, lambda);

    Matrix gram = matmul(s, transpose(s));
    for (std::size_t i = 0; i < 3; ++i) gram(i, i) += lambda;
    const Matrix oracle = transpose(solve_dense(gram, matmul(s, transpose(xp))));
    CHECK(max_abs_diff(w, oracle) <= 1e-10);

    const Matrix lhs = matmul(w, gram);
    const Matrix rhs = matmul(xp, transpose(s));
    CHECK(frobenius_norm(subtract(lhs, rhs)) <= 1e-8 * frobenius_norm(rhs));
}

TEST_CASE("ridge_solve: singular normal equations at lambda = 0") {
    const Matrix s(2, 3, {1, 1, 1, 1, 1, 1});  // rank 1
    const Matrix xp(2, 3, {1, 2, 3, 4, 5, 6});
    CHECK_THROWS_AS(ridge_solve(xp, s, 0.0), SingularNormalEquations);
    CHECK_THROWS_AS(ridge_solve(xp, Matrix(2, 2, 1.0), 1.0), DimensionMismatch);
}

TEST_CASE("spectral_norm: diagonal and identity scaling") {
    CHECK(spectral_norm(Matrix::diag({3.0, 1.0})) == doctest::Approx(3.0));
    CHECK(spectral_norm(scale(Matrix::identity(4), -2.5)) == doctest::Approx(2.5));
    CHECK_THROWS_AS(spectral_norm(Matrix(3, 3)), ZeroMatrix);
}

TEST_CASE("spectral_norm matches eigendecomposition of the Gram matrix") {
    Rng rng(11);
    const Matrix m = random_matrix(rng, 6, 4);
    const auto eig = sym_eigendecompose(matmul(transpose(m), m));
    const double expected = std::sqrt(eig.values.front());
    CHECK(std::abs(spectral_norm(m) - expected) <= 1e-8 * expected);
}

TEST_CASE("solve_spd: trivial and residual-checked systems") {
    Rng rng(12);
    const Matrix r = random_matrix(rng, 3, 2);
    CHECK(max_abs_diff(solve_spd(Matrix::identity(3), r), r) <= 1e-15);

    const Matrix simple = solve_spd(Matrix::diag({2.0, 4.0}), Matrix(2, 1, {2.0, 8.0}));
    CHECK(simple(0, 0) == doctest::Approx(1.0));
    CHECK(simple(1, 0) == doctest::Approx(2.0));

    const Matrix m = random_psd(rng, 5, 1.0);
    const Matrix rhs = random_matrix(rng, 5, 3);
    const Matrix x = solve_spd(m, rhs);
    CHECK(frobenius_norm(subtract(matmul(m, x), rhs)) <= 1e-10 * frobenius_norm(rhs) * 100);

    CHECK_THROWS_AS(solve_spd(Matrix::diag({1.0, -1.0}), Matrix(2, 1, {1.0, 1.0})), NotSpd);
}

TEST_CASE("determinism: identical inputs give bit-identical outputs") {
    Rng rng_a(33);
    Rng rng_b(33);
    const Matrix a1 = random_psd(rng_a, 4, 0.2);
    const Matrix a2 = random_psd(rng_b, 4, 0.2);
    CHECK(a1 == a2);
    const Matrix c = random_matrix(rng_a, 4, 4);
    const auto s1 = solve_sylvester_sym(a1, a1, c);
    const auto s2 = solve_sylvester_sym(a2, a2, c);
    CHECK(s1.W == s2.W);
    CHECK(s1.residual == s2.residual);
}
