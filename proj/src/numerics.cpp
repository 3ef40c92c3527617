#include "bondsym/numerics.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace bondsym {

double radical_inverse(std::size_t index, unsigned base) {
    double inv_base = 1.0 / base;
    double factor = inv_base;
    double result = 0.0;
    while (index > 0) {
        result += static_cast<double>(index % base) * factor;
        index /= base;
        factor *= inv_base;
    }
    return result;
}

bool solve_dense(std::vector<double>& A, std::vector<double>& rhs, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(A[r * n + col]) > std::fabs(A[piv * n + col])) piv = r;
        if (A[piv * n + col] == 0.0) return false;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(A[piv * n + c], A[col * n + c]);
            std::swap(rhs[piv], rhs[col]);
        }
        double d = A[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            double m = A[r * n + col] / d;
            if (m == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) A[r * n + c] -= m * A[col * n + c];
            rhs[r] -= m * rhs[col];
        }
    }
    for (std::size_t ri = n; ri-- > 0;) {
        double s = rhs[ri];
        for (std::size_t c = ri + 1; c < n; ++c) s -= A[ri * n + c] * rhs[c];
        rhs[ri] = s / A[ri * n + ri];
    }
    return true;
}

std::vector<double> smallest_eigenvector(std::vector<double> A, std::size_t n,
                                         double* eigenvalue) {
    std::vector<double> V(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) V[i * n + i] = 1.0;

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += A[p * n + q] * A[p * n + q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = A[p * n + q];
                if (apq == 0.0) continue;
                double theta = (A[q * n + q] - A[p * n + p]) / (2.0 * apq);
                double tt = (theta >= 0 ? 1.0 : -1.0) /
                            (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(tt * tt + 1.0);
                double s = tt * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = A[k * n + p], akq = A[k * n + q];
                    A[k * n + p] = c * akp - s * akq;
                    A[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = A[p * n + k], aqk = A[q * n + k];
                    A[p * n + k] = c * apk - s * aqk;
                    A[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = V[k * n + p], vkq = V[k * n + q];
                    V[k * n + p] = c * vkp - s * vkq;
                    V[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (A[i * n + i] < A[best * n + best]) best = i;
    if (eigenvalue) *eigenvalue = A[best * n + best];
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = V[i * n + best];
    return v;
}

void solve_tridiag_corner(std::vector<double>& lower, std::vector<double>& diag,
                          std::vector<double>& upper, std::vector<double>& rhs,
                          double e0, double e1) {
    const std::size_t n = diag.size();
    if (n < 3 && (e0 != 0.0 || e1 != 0.0))
        throw std::invalid_argument("corner elimination needs at least 3 rows");
    // eliminate the (0,2) entry against row 1
    if (e0 != 0.0) {
        if (upper[1] == 0.0) throw std::runtime_error("corner elimination pivot is zero");
        double m = e0 / upper[1];
        diag[0] -= m * lower[1];
        upper[0] -= m * diag[1];
        rhs[0] -= m * rhs[1];
    }
    // eliminate the (n-1, n-3) entry against row n-2
    if (e1 != 0.0) {
        if (lower[n - 2] == 0.0) throw std::runtime_error("corner elimination pivot is zero");
        double m = e1 / lower[n - 2];
        lower[n - 1] -= m * diag[n - 2];
        diag[n - 1] -= m * upper[n - 2];
        rhs[n - 1] -= m * rhs[n - 2];
    }
    // Thomas
    for (std::size_t i = 1; i < n; ++i) {
        double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    return (n * sxy - sx * sy) / denom;
}

} // namespace bondsym
