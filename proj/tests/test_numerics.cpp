#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bondsym/numerics.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace bondsym;

TEST_CASE("radical_inverse: van der Corput base 2") {
    CHECK(radical_inverse(1, 2) == doctest::Approx(0.5));
    CHECK(radical_inverse(2, 2) == doctest::Approx(0.25));
    CHECK(radical_inverse(3, 2) == doctest::Approx(0.75));
    CHECK(radical_inverse(4, 2) == doctest::Approx(0.125));
    CHECK(radical_inverse(1, 3) == doctest::Approx(1.0 / 3.0));
    CHECK(radical_inverse(2, 3) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("halton2: deterministic, in the unit square, offset decorrelates") {
    for (std::size_t i = 0; i < 200; ++i) {
        auto [a, b] = halton2(i);
        CHECK(a >= 0.0);
        CHECK(a < 1.0);
        CHECK(b >= 0.0);
        CHECK(b < 1.0);
        auto [a2, b2] = halton2(i);
        CHECK(a == a2);
        CHECK(b == b2);
    }
    CHECK(halton2(0, 5).first == halton2(5, 0).first);
    CHECK(halton2(0).first != halton2(0, 1).first);
}

TEST_CASE("solve_dense: recovers a known solution and flags singularity") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    const std::size_t n = 5;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> A(n * n), Acopy;
        for (auto& v : A) v = d(rng);
        for (std::size_t i = 0; i < n; ++i) A[i * n + i] += 4.0; // diagonally dominant
        Acopy = A;
        std::vector<double> xstar(n), rhs(n, 0.0);
        for (auto& v : xstar) v = d(rng);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) rhs[i] += Acopy[i * n + j] * xstar[j];
        CHECK(solve_dense(A, rhs, n));
        for (std::size_t i = 0; i < n; ++i)
            CHECK(rhs[i] == doctest::Approx(xstar[i]).epsilon(1e-10));
    }
    std::vector<double> S = {1.0, 2.0, 2.0, 4.0}; // rank 1
    std::vector<double> r = {1.0, 2.0};
    CHECK_FALSE(solve_dense(S, r, 2));
}

TEST_CASE("smallest_eigenvector: diagonal and 2x2 cases") {
    std::vector<double> D = {3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0};
    double ev = 0.0;
    auto v = smallest_eigenvector(D, 3, &ev);
    CHECK(ev == doctest::Approx(1.0));
    CHECK(std::fabs(v[1]) == doctest::Approx(1.0));
    CHECK(std::fabs(v[0]) < 1e-12);
    CHECK(std::fabs(v[2]) < 1e-12);

    // [[2,1],[1,2]] has eigenpairs (1, (1,-1)/sqrt2) and (3, (1,1)/sqrt2).
    std::vector<double> M = {2.0, 1.0, 1.0, 2.0};
    auto w = smallest_eigenvector(M, 2, &ev);
    CHECK(ev == doctest::Approx(1.0));
    CHECK(std::fabs(w[0] + w[1]) < 1e-12);
    CHECK(w[0] * w[0] + w[1] * w[1] == doctest::Approx(1.0));
}

TEST_CASE("solve_tridiag_corner agrees with the dense solver") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    const std::size_t n = 12;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> lower(n, 0.0), diag(n), upper(n, 0.0), rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            diag[i] = 4.0 + d(rng);
            rhs[i] = d(rng);
            if (i > 0) lower[i] = d(rng);
            if (i + 1 < n) upper[i] = d(rng);
        }
        double e0 = d(rng), e1 = d(rng);

        std::vector<double> A(n * n, 0.0), dense_rhs = rhs;
        for (std::size_t i = 0; i < n; ++i) {
            A[i * n + i] = diag[i];
            if (i > 0) A[i * n + i - 1] = lower[i];
            if (i + 1 < n) A[i * n + i + 1] = upper[i];
        }
        A[0 * n + 2] = e0;
        A[(n - 1) * n + (n - 3)] = e1;
        REQUIRE(solve_dense(A, dense_rhs, n));

        solve_tridiag_corner(lower, diag, upper, rhs, e0, e1);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(rhs[i] == doctest::Approx(dense_rhs[i]).epsilon(1e-10));
    }
}

TEST_CASE("lsq_slope: exact on affine data, least squares otherwise") {
    std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    std::vector<double> y = {3.0, 5.0, 7.0, 9.0};
    CHECK(lsq_slope(x, y) == doctest::Approx(2.0).epsilon(1e-14));

    // Symmetric perturbation leaves the slope unchanged.
    std::vector<double> y2 = {3.0 + 0.1, 5.0 - 0.1, 7.0 - 0.1, 9.0 + 0.1};
    CHECK(lsq_slope(x, y2) == doctest::Approx(2.0).epsilon(1e-12));
}
