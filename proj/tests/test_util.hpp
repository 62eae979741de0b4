#pragma once

#include <cstdint>
#include <vector>

#include "ipsae/linalg.hpp"
#include "ipsae/matrix.hpp"
#include "ipsae/rng.hpp"

namespace ipsae::test {

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (double& x : m.data()) {
        x = rng.next_gaussian();
    }
    return m;
}

inline Matrix random_symmetric(Rng& rng, std::size_t n) {
    Matrix g = random_matrix(rng, n, n);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = 0.5 * (g(i, j) + g(j, i));
        }
    }
    return m;
}

/// GᵀG + shift·I: symmetric PSD (PD for shift > 0).
inline Matrix random_psd(Rng& rng, std::size_t n, double shift = 0.0) {
    Matrix g = random_matrix(rng, n, n);
    Matrix m = matmul(transpose(g), g);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) += shift;
    }
    // Exact symmetry for downstream symmetry checks.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = avg;
            m(j, i) = avg;
        }
    }
    return m;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        best = std::max(best, std::abs(a.data()[i] - b.data()[i]));
    }
    return best;
}

inline double sylvester_residual(const Matrix& a, const Matrix& b, const Matrix& c,
                                 const Matrix& w) {
    return frobenius_norm(subtract(add(matmul(a, w), matmul(w, b)), c));
}

}  // namespace ipsae::test
