#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bondsym/fdsolver.hpp"
#include "bondsym/verify.hpp"

#include <cmath>
#include <random>

using namespace bondsym;

namespace {

double linf_error(const Surface& s, const Expr& exact) {
    Compiled u(exact, {"x", "t"});
    double worst = 0.0;
    for (std::size_t n = 0; n < s.grid.nt(); ++n)
        for (std::size_t i = 0; i < s.grid.nx(); ++i) {
            if (!s.valid(i, n)) continue;
            worst = std::max(worst,
                             std::fabs(s.at(i, n) - u({s.grid.x_nodes[i], s.grid.t_nodes[n]})));
        }
    return worst;
}

SolverConfig validation_cfg(const ClosedFormCase& cs) {
    SolverConfig cfg;
    cfg.far_field = FarFieldRule::Dirichlet;
    cfg.far_field_value = cs.solution;
    return cfg;
}

} // namespace

TEST_CASE("solve_terminal: BSM constant solution to 1e-8") {
    PdeProblem prob = classical_reduction(ClassicalModel::BSM, 0.05, 0.2);
    Grid grid = Grid::log_uniform(0.5, 2.0, 60, 0.0, 1.0, 60);
    Surface s = solve_terminal(prob, grid, Expr::constant(1.0));
    Expr exact = parse("exp(0.05*(t - 1))");
    CHECK(linf_error(s, exact) < 1e-8);
}

TEST_CASE("solve_terminal: constant payoff with zero source is reproduced exactly") {
    PdeProblem prob(Params{}, Expr::constant(0.0)); // drift-free, f == 0
    Grid grid = Grid::uniform(0.5, 2.0, 20, 0.0, 1.0, 10);
    Surface s = solve_terminal(prob, grid, Expr::constant(1.0));
    for (std::size_t n = 0; n < grid.nt(); ++n)
        for (std::size_t i = 0; i < grid.nx(); ++i)
            CHECK(s.at(i, n) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("solve_terminal: terminal slice equals the payoff exactly") {
    PdeProblem prob = classical_reduction(ClassicalModel::Vasicek, 0.05, 0.2);
    Grid grid = Grid::uniform(0.5, 2.0, 30, 0.2, 1.0, 12);
    Expr payoff = parse("x^2 + 1");
    Surface s = solve_terminal(prob, grid, payoff);
    for (std::size_t i = 0; i < grid.nx(); ++i)
        CHECK(s.at(i, grid.nt() - 1) == eval(payoff, {{"x", grid.x_nodes[i]}}));
}

TEST_CASE("solve_terminal: gamma = 1/2 catalog case on a 200x200 grid") {
    const auto& cs = get_case(CaseId::TGammaHalf);
    PdeProblem prob(cs.params, cs.source);
    double T = cs.terminal->T;
    Grid grid = Grid::log_uniform(0.25, 4.0, 200, T / 2.0, T, 200);
    Expr payoff = substitute(cs.solution, "t", Expr::constant(T));
    Surface s = solve_terminal(prob, grid, payoff, validation_cfg(cs));
    double err = linf_error(s, cs.solution);
    MESSAGE("T-GammaHalf 200x200 error ", err);
    CHECK(err < 5e-4);
}

TEST_CASE("convergence_order: second order in space-time for theta = 1/2") {
    const auto& cs = get_case(CaseId::TGammaHalf);
    PdeProblem prob(cs.params, cs.source);
    double T = cs.terminal->T;
    ConvergenceDiag diag;
    double slope = convergence_order(prob, cs.solution, 0.25, 4.0, T / 2.0, T,
                                     {{50, 50}, {100, 100}, {200, 200}}, validation_cfg(cs),
                                     &diag);
    MESSAGE("theta=1/2 slope ", slope);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.15));
    CHECK(diag.monotone);
}

TEST_CASE("convergence_order: first order in time for implicit Euler") {
    const auto& cs = get_case(CaseId::TGammaHalf);
    PdeProblem prob(cs.params, cs.source);
    double T = cs.terminal->T;
    SolverConfig cfg = validation_cfg(cs);
    cfg.theta = 1.0;
    double slope = convergence_order(prob, cs.solution, 0.25, 4.0, T / 2.0, T,
                                     {{600, 12}, {600, 24}, {600, 48}, {600, 96}}, cfg);
    MESSAGE("theta=1 time slope ", slope);
    CHECK(slope == doctest::Approx(1.0).epsilon(0.3));
}

TEST_CASE("convergence_order: exact discrete solutions report the rounding floor") {
    PdeProblem prob(Params{}, Expr::constant(0.0));
    ConvergenceDiag diag;
    double slope = convergence_order(prob, Expr::constant(1.0), 0.5, 2.0, 0.0, 1.0,
                                     {{20, 20}, {40, 40}, {80, 80}}, {}, &diag);
    CHECK(std::isinf(slope));
    CHECK(diag.at_floor);
}

TEST_CASE("convergence_order: needs three doubling resolutions") {
    PdeProblem prob(Params{}, Expr::constant(0.0));
    CHECK_THROWS_AS(convergence_order(prob, Expr::constant(1.0), 0.5, 2.0, 0.0, 1.0,
                                      {{20, 20}, {40, 40}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(convergence_order(prob, Expr::constant(1.0), 0.5, 2.0, 0.0, 1.0,
                                      {{20, 20}, {30, 30}, {40, 40}}),
                    std::invalid_argument);
}

TEST_CASE("solve_barrier: B-Generic closed form within 1e-3 on 200x200") {
    const auto& cs = get_case(CaseId::BGeneric);
    PdeProblem prob(cs.params, cs.source);
    const BarrierSpec& spec = *cs.barrier;
    Grid grid = Grid::uniform(0.5, 2.5, 200, 0.5, spec.T, 200);
    Expr payoff = substitute(cs.solution, "t", Expr::constant(spec.T));
    Surface front;
    Surface s = solve_barrier(prob, grid, spec, payoff, validation_cfg(cs), &front);
    double err = linf_error(s, cs.solution);
    MESSAGE("B-Generic barrier error ", err);
    CHECK(err < 1e-3);

    // Dirichlet enforcement: the fixed-front chart's barrier row is exact.
    for (std::size_t n = 0; n + 1 < front.grid.nt(); ++n)
        CHECK(front.at(0, n) ==
              doctest::Approx(eval(spec.R, {{"t", front.grid.t_nodes[n]}})).epsilon(1e-15));

    // Nodes below the barrier are masked on the caller grid.
    bool any_masked = false;
    for (std::size_t n = 0; n < grid.nt(); ++n)
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            double h = eval(spec.H, {{"t", grid.t_nodes[n]}});
            if (grid.x_nodes[i] < h) {
                CHECK_FALSE(s.valid(i, n));
                any_masked = true;
            }
        }
    CHECK(any_masked);
}

TEST_CASE("solve_barrier: barrier outside the grid is rejected") {
    const auto& cs = get_case(CaseId::BGeneric);
    PdeProblem prob(cs.params, cs.source);
    Grid grid = Grid::uniform(1.5, 2.5, 30, 0.5, cs.barrier->T, 30); // H ~ 0.9 < x_min
    Expr payoff = substitute(cs.solution, "t", Expr::constant(cs.barrier->T));
    CHECK_THROWS_AS(solve_barrier(prob, grid, *cs.barrier, payoff), std::invalid_argument);
}

TEST_CASE("solve_barrier: constant front agrees with the terminal solver") {
    // gamma = 1/2 case with an artificial constant barrier at x = 1 whose
    // boundary data is the closed form's trace there.
    const auto& cs = get_case(CaseId::TGammaHalf);
    PdeProblem prob(cs.params, cs.source);
    double T = cs.terminal->T;
    BarrierSpec spec;
    spec.H = Expr::constant(1.0);
    spec.R = substitute(cs.solution, "x", Expr::constant(1.0));
    spec.a = 0.0;
    spec.b = 0.25;
    spec.K = 4.0;
    spec.T = T;
    Grid grid = Grid::log_uniform(0.5, 4.0, 160, T / 2.0, T, 160);
    Expr payoff = substitute(cs.solution, "t", Expr::constant(T));
    SolverConfig cfg = validation_cfg(cs);
    Surface b = solve_barrier(prob, grid, spec, payoff, cfg);
    Surface t = solve_terminal(prob, grid, payoff, cfg);
    double disc = linf_error(t, cs.solution); // discretization scale
    double diff = 0.0;
    for (std::size_t n = 0; n < grid.nt(); ++n)
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            if (!b.valid(i, n)) continue;
            diff = std::max(diff, std::fabs(b.at(i, n) - t.at(i, n)));
        }
    MESSAGE("constant-front vs terminal diff ", diff, " (discretization ", disc, ")");
    CHECK(diff <= 2.0 * disc + 1e-12);
}

TEST_CASE("max principle: theta = 1, zero source, drift-free") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> d(0.5, 3.0);
    PdeProblem prob(Params{}, Expr::constant(0.0));
    for (int trial = 0; trial < 5; ++trial) {
        double a = d(rng), b = d(rng), c = d(rng);
        Expr payoff = Expr::constant(a) + Expr::constant(b) * Expr::abs(parse("x - 1.2")) +
                      Expr::constant(c) * parse("x^2") / Expr::constant(10.0);
        // Pin the far field to the payoff so the implicit-Euler M-matrix
        // argument applies on the whole strip.
        SolverConfig cfg;
        cfg.theta = 1.0;
        cfg.far_field = FarFieldRule::Dirichlet;
        cfg.far_field_value = payoff;
        Grid grid = Grid::uniform(0.4, 2.2, 40, 0.0, 1.0, 30);
        Surface s = solve_terminal(prob, grid, payoff, cfg);
        double lo = 1e300, hi = -1e300;
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            double v = eval(payoff, {{"x", grid.x_nodes[i]}});
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        // The x_min row carries the interior equation with one-sided
        // differences; that closure is not monotone, so the bound is asserted
        // outside its three-node stencil footprint.
        for (std::size_t n = 0; n < grid.nt(); ++n)
            for (std::size_t i = 3; i < grid.nx(); ++i) {
                CHECK(s.at(i, n) >= lo - 1e-10);
                CHECK(s.at(i, n) <= hi + 1e-10);
            }
    }
}

TEST_CASE("SolverConfig::validate rejects bad settings") {
    SolverConfig cfg;
    cfg.theta = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.theta = -0.1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    SolverConfig dirichlet;
    dirichlet.far_field = FarFieldRule::Dirichlet; // missing far_field_value
    CHECK_THROWS_AS(dirichlet.validate(), std::invalid_argument);
}

TEST_CASE("Grid invariants: three nodes per axis and positive x") {
    CHECK_THROWS_AS(Grid::uniform(0.5, 2.0, 2, 0.0, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(Grid::uniform(-0.5, 2.0, 10, 0.0, 1.0, 10), std::invalid_argument);
    CHECK_NOTHROW(Grid::log_uniform(0.5, 2.0, 10, 0.0, 1.0, 10)); // log x < 0 is fine
}
