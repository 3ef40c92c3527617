#pragma once

#include "bondsym/model.hpp"
#include "bondsym/solutions.hpp"
#include "bondsym/surface.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace bondsym {

/// Far-field rule applied at x_max (the side opposite the terminal data's
/// natural boundary). Linearity imposes a vanishing second difference;
/// Dirichlet pins the row to a supplied reference surface (validation mode).
enum class FarFieldRule { Linearity, Dirichlet };

struct SolverConfig {
    double theta = 0.5; // time weighting; 1/2 = Crank-Nicolson, 1 = implicit Euler
    FarFieldRule far_field = FarFieldRule::Linearity;
    Expr far_field_value; // Expr in (x,t); required iff far_field == Dirichlet
    bool full_newton = false; // default: one Newton correction per step
    double newton_tol = 1e-12;
    int max_newton_iters = 25;

    void validate() const;
};

/// Backward theta-scheme march of
///   u_t + (1/2) rho^2 x^{2 gamma} u_xx + (alpha + beta x - lambda rho x^delta) u_x = f(x,u)
/// from the terminal slice u(x,T) = payoff(x) down to the first t node.
/// Second-order differences on the (possibly non-uniform) x grid; the x_min
/// row carries the interior equation with one-sided differences; the source is
/// taken semi-implicitly with one Newton correction (full iteration by
/// config). The terminal slice of the result equals the payoff exactly.
/// Throws on Newton divergence or non-finite values, naming the step.
Surface solve_terminal(const PdeProblem& prob, const Grid& grid, const Expr& payoff,
                       const SolverConfig& cfg = {});

/// Down-and-out moving-barrier solve on the region x >= H(t): front-fixing
/// y = x/H(t) maps the barrier to y=1 (the operator gains a -(H'/H) y d_y
/// advection term), a Dirichlet row enforces u = R(t) at y = 1 and the
/// far-field rule closes y_max; terminal data from the payoff. The result
/// lives on the passed grid with nodes below the barrier masked out; if
/// front_chart is non-null it receives the solution in the fixed-front chart
/// (its grid's x_nodes are the y nodes), where the barrier row is exact.
Surface solve_barrier(const PdeProblem& prob, const Grid& grid, const BarrierSpec& spec,
                      const Expr& payoff, const SolverConfig& cfg = {},
                      Surface* front_chart = nullptr);

struct ConvergenceDiag {
    std::vector<double> hs;     // representative spacing per resolution
    std::vector<double> errors; // L-infinity error vs the exact solution
    bool monotone = true;       // errors strictly decreasing with h
    bool at_floor = false;      // every error at the rounding floor ("exact")
};

/// Observed order of accuracy against a closed-form solution: solves on each
/// (nx, nt) resolution over [x_lo,x_hi] x [t_lo,T] (log-spaced in x when
/// gamma >= 1/2), takes the payoff from the exact solution at t=T, and
/// returns the least-squares slope of log error vs log h. Needs at least
/// three resolutions, each doubling. When every error sits at the rounding
/// floor the slope is meaningless: returns +infinity and sets diag->at_floor.
double convergence_order(const PdeProblem& prob, const Expr& exact, double x_lo, double x_hi,
                         double t_lo, double T,
                         const std::vector<std::pair<std::size_t, std::size_t>>& resolutions,
                         const SolverConfig& cfg = {}, ConvergenceDiag* diag = nullptr);

} // namespace bondsym
