#pragma once

#include <cstddef>
#include <vector>

#include "ipsae/matrix.hpp"

namespace ipsae {

/// Eigenvalues (descending) and matching orthonormal eigenvector columns of a
/// symmetric matrix.
struct EigenDecomposition {
    std::vector<double> values;
    Matrix vectors;
};

/// Solution of AW + WB = C for symmetric A, B. Eigen-sum pairs below the
/// nullification threshold are forced to zero and counted, which picks a
/// deterministic solution when the system is rank-deficient.
struct SylvesterSolution {
    Matrix W;
    std::size_t nullified_modes = 0;
    double residual = 0.0;
};

/// Cyclic Jacobi eigendecomposition. Requires ‖M − Mᵀ‖_F ≤ sym_tol·(1+‖M‖_F).
EigenDecomposition sym_eigendecompose(const Matrix& m, double sym_tol = 1e-10);

/// Eigendecomposition fast path for AW + WB = C with symmetric A (k×k) and
/// B (m×m): W = U·W̃·Vᵀ with W̃_ij = (UᵀCV)_ij / (λ_i + μ_j).
/// eps < 0 selects the default threshold 1e-10·(λ_max + μ_max).
SylvesterSolution solve_sylvester_sym(const Matrix& a, const Matrix& b, const Matrix& c,
                                      double eps = -1.0);

/// Brute-force Sylvester oracle: vectorizes to a k·m × k·m linear system and
/// solves it by Gaussian elimination with partial pivoting. Small instances
/// only (k·m ≤ 400).
Matrix solve_sylvester_kron(const Matrix& a, const Matrix& b, const Matrix& c);

/// Closed-form ridge solution W = Xp·Sᵀ·(SSᵀ + λI)⁻¹.
/// lambda = 0 is accepted only when SSᵀ is nonsingular.
Matrix ridge_solve(const Matrix& xp, const Matrix& s, double lambda);

/// Largest singular value via power iteration on the Gram matrix, with a
/// deterministic all-ones start vector and a perturbed restart on stagnation.
double spectral_norm(const Matrix& m, double tol = 1e-12, std::size_t max_iter = 20000);

/// Solves MX = Rhs for symmetric positive definite M via Cholesky.
Matrix solve_spd(const Matrix& m, const Matrix& rhs);

/// Solves a general square dense system by Gaussian elimination with partial
/// pivoting; rhs may have multiple columns.
Matrix solve_dense(const Matrix& m, const Matrix& rhs);

}  // namespace ipsae
