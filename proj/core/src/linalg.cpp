#include "ipsae/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ipsae {

namespace {

void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw NotSquare(std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()));
    }
}

void require_symmetric(const Matrix& m, double sym_tol, const char* what) {
    require_square(m, what);
    const double defect = symmetry_defect(m);
    if (defect > sym_tol * (1.0 + frobenius_norm(m))) {
        throw NotSymmetric(std::string(what) + ": symmetry defect " + std::to_string(defect));
    }
}

double off_diagonal_norm(const Matrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j) sum += a(i, j) * a(i, j);
        }
    }
    return std::sqrt(sum);
}

}  // namespace

EigenDecomposition sym_eigendecompose(const Matrix& m, double sym_tol) {
    require_symmetric(m, sym_tol, "sym_eigendecompose");
    const std::size_t n = m.rows();

    Matrix a = m;
    // Work on the exactly-symmetric average so sweeps preserve symmetry.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = avg;
            a(j, i) = avg;
        }
    }
    Matrix v = Matrix::identity(n);

    const double stop = 1e-15 * (1.0 + frobenius_norm(a)) * static_cast<double>(n);
    const std::size_t max_sweeps = 100;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a(i, p);
                    const double aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const double apj = a(p, j);
                    const double aqj = a(q, j);
                    a(p, j) = c * apj - s * aqj;
                    a(q, j) = s * apj + c * aqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v(i, p);
                    const double viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) {
            out.vectors(i, j) = v(i, order[j]);
        }
    }
    return out;
}

SylvesterSolution solve_sylvester_sym(const Matrix& a, const Matrix& b, const Matrix& c,
                                      double eps) {
    if (c.rows() != a.rows() || c.cols() != b.rows()) {
        throw DimensionMismatch("solve_sylvester_sym: C must be " + std::to_string(a.rows()) +
                                "x" + std::to_string(b.rows()));
    }
    const EigenDecomposition ea = sym_eigendecompose(a);
    const EigenDecomposition eb = sym_eigendecompose(b);

    if (eps < 0.0) {
        double lam_max = 0.0;
        double mu_max = 0.0;
        for (double l : ea.values) lam_max = std::max(lam_max, std::abs(l));
        for (double m : eb.values) mu_max = std::max(mu_max, std::abs(m));
        eps = 1e-10 * (lam_max + mu_max);
    }

    Matrix c_tilde = matmul(matmul(transpose(ea.vectors), c), eb.vectors);

    SylvesterSolution sol;
    Matrix w_tilde(c.rows(), c.cols());
    for (std::size_t i = 0; i < c.rows(); ++i) {
        for (std::size_t j = 0; j < c.cols(); ++j) {
            const double denom = ea.values[i] + eb.values[j];
            if (std::abs(denom) <= eps) {
                w_tilde(i, j) = 0.0;
                ++sol.nullified_modes;
            } else {
                w_tilde(i, j) = c_tilde(i, j) / denom;
            }
        }
    }
    sol.W = matmul(matmul(ea.vectors, w_tilde), transpose(eb.vectors));
    sol.residual = frobenius_norm(subtract(add(matmul(a, sol.W), matmul(sol.W, b)), c));
    return sol;
}

Matrix solve_dense(const Matrix& m, const Matrix& rhs) {
    require_square(m, "solve_dense");
    if (rhs.rows() != m.rows()) {
        throw DimensionMismatch("solve_dense: rhs row count mismatch");
    }
    const std::size_t n = m.rows();
    Matrix a = m;
    Matrix x = rhs;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double cand = std::abs(a(r, col));
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        if (best == 0.0) {
            throw SingularSystem("solve_dense: zero pivot at column " + std::to_string(col));
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
            for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(col, j), x(pivot, j));
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            for (std::size_t j = 0; j < x.cols(); ++j) x(r, j) -= f * x(col, j);
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            double acc = x(col, j);
            for (std::size_t p = col + 1; p < n; ++p) acc -= a(col, p) * x(p, j);
            x(col, j) = acc / a(col, col);
        }
    }
    return x;
}

Matrix solve_sylvester_kron(const Matrix& a, const Matrix& b, const Matrix& c) {
    require_square(a, "solve_sylvester_kron (A)");
    require_square(b, "solve_sylvester_kron (B)");
    const std::size_t k = a.rows();
    const std::size_t m = b.rows();
    if (c.rows() != k || c.cols() != m) {
        throw DimensionMismatch("solve_sylvester_kron: C shape mismatch");
    }
    if (k * m > 400) {
        throw TooLarge("solve_sylvester_kron: k*m = " + std::to_string(k * m) + " exceeds 400");
    }

    const std::size_t dim = k * m;
    const auto idx = [m](std::size_t r, std::size_t col) { return r * m + col; };

    Matrix sys(dim, dim);
    Matrix rhs(dim, 1);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t row = idx(i, j);
            for (std::size_t p = 0; p < k; ++p) sys(row, idx(p, j)) += a(i, p);
            for (std::size_t q = 0; q < m; ++q) sys(row, idx(i, q)) += b(q, j);
            rhs(row, 0) = c(i, j);
        }
    }
    Matrix vec = solve_dense(sys, rhs);

    Matrix w(k, m);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            w(i, j) = vec(idx(i, j), 0);
        }
    }
    return w;
}

Matrix solve_spd(const Matrix& m, const Matrix& rhs) {
    require_square(m, "solve_spd");
    if (rhs.rows() != m.rows()) {
        throw DimensionMismatch("solve_spd: rhs row count mismatch");
    }
    const std::size_t n = m.rows();

    // Cholesky M = L·Lᵀ.
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double acc = m(i, j);
            for (std::size_t p = 0; p < j; ++p) acc -= l(i, p) * l(j, p);
            if (i == j) {
                if (acc <= 0.0) {
                    throw NotSpd("solve_spd: non-positive pivot at " + std::to_string(i));
                }
                l(i, i) = std::sqrt(acc);
            } else {
                l(i, j) = acc / l(j, j);
            }
        }
    }

    Matrix x = rhs;
    for (std::size_t j = 0; j < x.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = x(i, j);
            for (std::size_t p = 0; p < i; ++p) acc -= l(i, p) * x(p, j);
            x(i, j) = acc / l(i, i);
        }
        for (std::size_t i = n; i-- > 0;) {
            double acc = x(i, j);
            for (std::size_t p = i + 1; p < n; ++p) acc -= l(p, i) * x(p, j);
            x(i, j) = acc / l(i, i);
        }
    }
    return x;
}

Matrix ridge_solve(const Matrix& xp, const Matrix& s, double lambda) {
    if (xp.cols() != s.cols()) {
        throw DimensionMismatch("ridge_solve: sample counts differ");
    }
    if (lambda < 0.0) {
        throw NonPositiveLambda("ridge_solve: lambda must be >= 0");
    }
    const std::size_t k = s.rows();

    Matrix gram = matmul(s, transpose(s));
    for (std::size_t i = 0; i < k; ++i) {
        gram(i, i) += lambda;
        for (std::size_t j = i + 1; j < k; ++j) {
            const double avg = 0.5 * (gram(i, j) + gram(j, i));
            gram(i, j) = avg;
            gram(j, i) = avg;
        }
    }

    Matrix rhs = matmul(s, transpose(xp));  // k × m
    Matrix y;
    try {
        y = solve_spd(gram, rhs);
    } catch (const NotSpd&) {
        throw SingularNormalEquations("ridge_solve: SSᵀ + λI is not positive definite");
    }
    return transpose(y);
}

double spectral_norm(const Matrix& m, double tol, std::size_t max_iter) {
    if (tol <= 0.0) {
        throw Error("spectral_norm: tol must be positive");
    }
    if (frobenius_norm(m) == 0.0) {
        throw ZeroMatrix("spectral_norm: zero matrix");
    }
    // Power-iterate on the smaller Gram matrix.
    const Matrix gram = m.rows() >= m.cols() ? matmul(transpose(m), m) : matmul(m, transpose(m));
    const std::size_t n = gram.rows();

    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double prev = -1.0;
    std::size_t stable = 0;
    bool restarted = false;

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        std::vector<double> w(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += gram(i, j) * v[j];
            w[i] = acc;
        }
        double rayleigh = 0.0;
        double wn = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            rayleigh += v[i] * w[i];
            wn += w[i] * w[i];
        }
        wn = std::sqrt(wn);
        if (wn == 0.0 || (!restarted && iter == max_iter / 2 && stable == 0)) {
            // Stagnating (start vector may sit in a low eigenspace): perturb
            // deterministically and continue.
            for (std::size_t i = 0; i < n; ++i) v[i] += 1e-3 * static_cast<double>(i + 1);
            double vn = 0.0;
            for (double x : v) vn += x * x;
            vn = std::sqrt(vn);
            for (double& x : v) x /= vn;
            restarted = true;
            prev = -1.0;
            stable = 0;
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;

        if (prev >= 0.0 && std::abs(rayleigh - prev) <= tol * std::max(rayleigh, 1e-300)) {
            if (++stable >= 3) {
                return std::sqrt(std::max(rayleigh, 0.0));
            }
        } else {
            stable = 0;
        }
        prev = rayleigh;
    }
    throw NoConvergence("spectral_norm: no convergence after " + std::to_string(max_iter) +
                        " iterations");
}

}  // namespace ipsae
