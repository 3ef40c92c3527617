#pragma once

#include <cstddef>
#include <vector>

namespace bondsym {

/// Van der Corput radical inverse in the given base.
double radical_inverse(std::size_t index, unsigned base);

/// Deterministic low-discrepancy point in [0,1)^2 (Halton, bases 2 and 3).
/// An offset decorrelates distinct sweeps without losing reproducibility.
inline std::pair<double, double> halton2(std::size_t index, std::size_t offset = 0) {
    return {radical_inverse(index + offset + 1, 2), radical_inverse(index + offset + 1, 3)};
}

/// Dense linear solve by Gaussian elimination with partial pivoting.
/// A is row-major n*n and is destroyed; returns false if singular.
bool solve_dense(std::vector<double>& A, std::vector<double>& rhs, std::size_t n);

/// Eigenvector of the smallest eigenvalue of a symmetric matrix (row-major
/// n*n), by cyclic Jacobi. Intended for the tiny Gram matrices of the
/// generator-combination solver. Returns the unit eigenvector and stores the
/// eigenvalue in *eigenvalue if non-null.
std::vector<double> smallest_eigenvector(std::vector<double> A, std::size_t n,
                                         double* eigenvalue = nullptr);

/// Tridiagonal system with optional extra entries in the corner rows:
/// row 0 may reference column 2 (coefficient e0), row n-1 may reference
/// column n-3 (coefficient e1). The extras are eliminated against the
/// neighbouring rows, then Thomas' algorithm runs. All inputs are destroyed.
void solve_tridiag_corner(std::vector<double>& lower, std::vector<double>& diag,
                          std::vector<double>& upper, std::vector<double>& rhs,
                          double e0, double e1);

/// Least-squares slope of y against x.
double lsq_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace bondsym
