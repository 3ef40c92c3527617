#pragma once

#include "bondsym/model.hpp"
#include "bondsym/solutions.hpp"
#include "bondsym/surface.hpp"
#include "bondsym/transforms.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace bondsym {

/// Result of one numeric check.
struct ResidualReport {
    std::string check;
    std::string case_id;
    std::size_t n = 0;
    double max_abs = 0.0;
    double argmax_x = 0.0;
    double argmax_t = 0.0;
    std::string excluded;
    double tol = 0.0;
    bool pass = false;

    ResidualReport& finish(double tolerance) {
        tol = tolerance;
        pass = max_abs < tolerance;
        return *this;
    }
};

/// A linear parabolic operator shape c_t u_t + c_xx(x) u_xx + c_x(x) u_x - f(x,u),
/// covering both the original chart and the heat chart of the chain's image.
struct ChartPde {
    double c_t = 1.0;
    std::function<double(double)> c_xx;
    std::function<double(double)> c_x;
    Expr f;

    static ChartPde original(const PdeProblem& prob);
    /// phi_t - phi_xx - fbar(x, phi) = 0.
    static ChartPde heat(Expr fbar);
};

/// Low-discrepancy sweep of |residual| over the region; seed offsets the
/// Halton sequence so reports are reproducible.
ResidualReport residual_sweep(const ChartPde& pde, const Expr& u, const SampleRegion& region,
                              std::size_t n, double tol, std::uint64_t seed = 0);

ResidualReport pde_residual_sweep(const PdeProblem& prob, const Expr& u,
                                  const SampleRegion& region, std::size_t n, double tol,
                                  std::uint64_t seed = 0);

/// max |u(x,T) - 1| over xs.
ResidualReport terminal_check(const Expr& u, double T, const std::vector<double>& xs,
                              double tol);

/// max |u(H(t),t) - R(t)| over ts.
ResidualReport barrier_check(const Expr& u, const BarrierSpec& spec,
                             const std::vector<double>& ts, double tol);

/// max coordinate-wise deviation of pull(push(p)) from p.
ResidualReport roundtrip_check(const Transform& tr, const std::vector<Point>& points,
                               double tol);

/// Transport a catalogued solution through its reduction chain and check the
/// image equation (heat with source) plus the point-map round trip at n
/// low-discrepancy samples of the case's region.
struct ChainTransportReport {
    ResidualReport heat;
    ResidualReport roundtrip;
};

ChainTransportReport chain_transport_check(const ClosedFormCase& cs, std::size_t n,
                                           double heat_tol, double roundtrip_tol,
                                           std::uint64_t seed = 0);

/// Exponentiate the generator: integrate each grid node's (x,t,u) trajectory
/// with fixed-step RK4 (step <= |epsilon|/64), scatter, and reconstruct on the
/// same grid by weighted local quadratic least squares (>= 6 neighbors;
/// uncovered cells are masked).
Surface flow_map(const Generator& g, const Expr& u, double epsilon, const Grid& grid);

/// Same flow applied to an already-discrete surface; trajectories are seeded
/// from the valid grid nodes and reconstructed on the same grid.
Surface flow_map(const Generator& g, const Surface& s, double epsilon);

/// Residual of a discrete surface against the chart operator using 4th-order
/// central differences; evaluated where the full stencil is valid.
ResidualReport surface_residual(const ChartPde& pde, const Surface& s, double tol);

/// Worst surface residual of the flowed solution over the given epsilons.
ResidualReport solution_to_solution_check(const Generator& g, const ChartPde& pde,
                                          const Expr& u, const std::vector<double>& epsilons,
                                          const Grid& grid, double tol);

/// Infinitesimal invariance of the barrier manifold and its value condition:
/// max over ts of |xi1 - H'(t) xi2| and |eta - R'(t) xi2| at (H(t), t, R(t)).
ResidualReport boundary_invariance_check(const Generator& g, const BarrierSpec& spec,
                                         const std::vector<double>& ts, double tol);

struct CombinationResult {
    std::vector<double> coefficients; // unit norm
    double residual = 0.0;            // max row violation of the combination
    bool time_dependent = false;      // per-time combinations exist, global does not
};

/// Least-squares search for a span combination satisfying both barrier
/// invariance conditions at the sampled times.
CombinationResult boundary_combination(const GeneratorSet& span, const BarrierSpec& spec,
                                       const std::vector<double>& ts,
                                       double threshold = 1e-8);

/// Transport a generator through a point transformation (frame covariance).
Generator push_generator(const Generator& g, const Transform& tr);

/// Transport a barrier specification: H -> X(H(Psi^{-1})), R -> Phi(H, R).
BarrierSpec push_barrier(const BarrierSpec& spec, const Transform& tr);

} // namespace bondsym
