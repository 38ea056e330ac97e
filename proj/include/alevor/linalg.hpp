// Dense linear algebra for the small per-cell systems (mass matrices up to
// 20x20, reconstruction least squares). Row-major storage, no heap churn in
// the factor/solve paths when the caller reuses buffers.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "alevor/core.hpp"

namespace alevor {

// Symmetric positive definite matrix, lower Cholesky factor kept in place.
class CholeskyFactor {
  public:
    CholeskyFactor() = default;

    // Factors the SPD matrix a (n x n, row-major). Returns false if a pivot
    // drops below tol * max diagonal, i.e. the matrix is numerically singular.
    bool factor(const double* a, int n, double tol = 1e-13) {
        n_ = n;
        l_.assign(a, a + static_cast<std::size_t>(n) * n);
        double dmax = 0.0;
        for (int i = 0; i < n; ++i) dmax = std::max(dmax, std::abs(a[i * n + i]));
        const double floor_val = tol * std::max(dmax, 1e-300);
        for (int j = 0; j < n; ++j) {
            double d = l_[j * n + j];
            for (int k = 0; k < j; ++k) d -= l_[j * n + k] * l_[j * n + k];
            if (!(d > floor_val)) return false;
            const double lj = std::sqrt(d);
            l_[j * n + j] = lj;
            for (int i = j + 1; i < n; ++i) {
                double s = l_[i * n + j];
                for (int k = 0; k < j; ++k) s -= l_[i * n + k] * l_[j * n + k];
                l_[i * n + j] = s / lj;
            }
        }
        return true;
    }

    // Solves A x = b in place.
    void solve(double* b) const {
        const int n = n_;
        for (int i = 0; i < n; ++i) {
            double s = b[i];
            for (int k = 0; k < i; ++k) s -= l_[i * n + k] * b[k];
            b[i] = s / l_[i * n + i];
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = b[i];
            for (int k = i + 1; k < n; ++k) s -= l_[k * n + i] * b[k];
            b[i] = s / l_[i * n + i];
        }
    }

    // Solves for m right-hand sides stored contiguously per-vector.
    void solve_many(double* b, int m) const {
        for (int v = 0; v < m; ++v) solve(b + static_cast<std::size_t>(v) * n_);
    }

    int size() const { return n_; }

  private:
    int n_ = 0;
    std::vector<double> l_;
};

// Least squares min ||A x - b||_2 via normal equations with diagonal
// regularization fallback. A is (rows x cols) row-major. Returns false when
// the system is rank deficient beyond rescue.
inline bool solve_least_squares(const std::vector<double>& a, int rows, int cols,
                                const std::vector<double>& b, std::vector<double>& x) {
    std::vector<double> ata(static_cast<std::size_t>(cols) * cols, 0.0);
    std::vector<double> atb(cols, 0.0);
    for (int r = 0; r < rows; ++r) {
        const double* ar = a.data() + static_cast<std::size_t>(r) * cols;
        for (int i = 0; i < cols; ++i) {
            atb[i] += ar[i] * b[r];
            for (int j = i; j < cols; ++j) ata[i * cols + j] += ar[i] * ar[j];
        }
    }
    for (int i = 0; i < cols; ++i)
        for (int j = 0; j < i; ++j) ata[i * cols + j] = ata[j * cols + i];

    CholeskyFactor chol;
    if (!chol.factor(ata.data(), cols, 1e-11)) return false;
    x = atb;
    chol.solve(x.data());
    return true;
}

} // namespace alevor
