#include "bondsym/fdsolver.hpp"

#include "bondsym/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <cstdlib>
#include <cstdio>

namespace bondsym {

void SolverConfig::validate() const {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("theta must lie in [0,1]");
    if (far_field == FarFieldRule::Dirichlet && far_field_value.is_null())
        throw std::invalid_argument("Dirichlet far field needs far_field_value");
    if (max_newton_iters < 1) throw std::invalid_argument("max_newton_iters must be >= 1");
}

namespace {

/// Weights of the 3-point first and second derivative on nodes (x0,x1,x2),
/// taken at x0 (one-sided) or x1 (central), from the interpolating quadratic.
struct Stencil3 {
    double d1[3]; // first derivative
    double d2[3]; // second derivative (location-independent for a quadratic)
};

Stencil3 stencil_at_first(double x0, double x1, double x2) {
    double h1 = x1 - x0, h2 = x2 - x1, s = h1 + h2;
    Stencil3 w;
    w.d1[0] = -(2.0 * h1 + h2) / (h1 * s);
    w.d1[1] = s / (h1 * h2);
    w.d1[2] = -h1 / (h2 * s);
    w.d2[0] = 2.0 / (h1 * s);
    w.d2[1] = -2.0 / (h1 * h2);
    w.d2[2] = 2.0 / (h2 * s);
    return w;
}

Stencil3 stencil_at_middle(double x0, double x1, double x2) {
    double h1 = x1 - x0, h2 = x2 - x1, s = h1 + h2;
    Stencil3 w;
    w.d1[0] = -h2 / (h1 * s);
    w.d1[1] = (h2 - h1) / (h1 * h2);
    w.d1[2] = h1 / (h2 * s);
    w.d2[0] = 2.0 / (h1 * s);
    w.d2[1] = -2.0 / (h1 * h2);
    w.d2[2] = 2.0 / (h2 * s);
    return w;
}

/// One backward theta-scheme march shared by the terminal and the
/// front-fixed barrier solves. Spatial coordinates are grid.x_nodes (x or y);
/// the operator is a(i,t) d_ss + b(i,t) d_s acting on that coordinate while
/// the source is evaluated at the physical point xphys(i,t).
struct Marcher {
    const Grid& grid;
    std::function<double(std::size_t, double)> a, b;
    std::function<double(std::size_t, double)> xphys;
    Compiled f, fu;
    bool has_source = false;
    std::function<double(double)> left_dirichlet; // null: interior one-sided row
    const SolverConfig& cfg;
    Compiled far_value; // Dirichlet far field, over (x,t)

    Surface run(const std::vector<double>& terminal) const {
        const std::size_t nx = grid.nx(), nt = grid.nt();
        Surface out(grid);
        std::vector<double> v = terminal; // level n+1
        for (std::size_t i = 0; i < nx; ++i) out.values[out.index(i, nt - 1)] = v[i];

        std::vector<double> lower(nx), diag(nx), upper(nx), rhs(nx), expl(nx), w(nx),
            sol(nx);
        for (std::size_t step = nt - 1; step-- > 0;) {
            const double t_new = grid.t_nodes[step];
            const double t_old = grid.t_nodes[step + 1];
            const double dt = t_old - t_new;
            const double th = cfg.theta;

            // explicit part: v_i - dt (1-theta) (f(x_i, v_i) - (L v)_i) at t_old
            for (std::size_t i = 0; i < nx; ++i) {
                double Lv = apply_row(i, t_old, v);
                double fv = has_source ? f({xphys(i, t_old), v[i]}) : 0.0;
                expl[i] = v[i] - dt * (1.0 - th) * (fv - Lv);
            }

            w = v; // predictor for the source linearization
            bool converged = !has_source && !cfg.full_newton;
            int it = 0;
            for (;; ++it) {
                double e0 = 0.0, e1 = 0.0;
                assemble(t_new, dt, w, expl, lower, diag, upper, rhs, e0, e1);
                sol = rhs;
                {
                    std::vector<double> lo = lower, di = diag, up = upper;
                    solve_tridiag_corner(lo, di, up, sol, e0, e1);
                }
                if (std::getenv("FD_TRACE")) {
                    double mx = 0; std::size_t am = 0;
                    for (std::size_t i = 0; i < nx; ++i)
                        if (std::fabs(sol[i]) > mx) { mx = std::fabs(sol[i]); am = i; }
                    std::fprintf(stderr, "step %zu it %d max|sol|=%.6e at i=%zu\n", step, it,
                                 mx, am);
                }
                for (double s : sol)
                    if (!std::isfinite(s))
                        throw std::runtime_error("non-finite value at step " +
                                                 std::to_string(step) + " (t=" +
                                                 std::to_string(t_new) + ")");
                double delta = 0.0;
                for (std::size_t i = 0; i < nx; ++i)
                    delta = std::max(delta, std::fabs(sol[i] - w[i]));
                w = sol;
                if (!cfg.full_newton) break; // one correction from the predictor
                if (delta < cfg.newton_tol) {
                    converged = true;
                    break;
                }
                if (it + 1 >= cfg.max_newton_iters)
                    throw std::runtime_error("Newton did not converge at step " +
                                             std::to_string(step));
            }
            (void)converged;
            v = sol;
            for (std::size_t i = 0; i < nx; ++i) out.values[out.index(i, step)] = v[i];
        }
        return out;
    }

private:
    /// (L v)_i with the same stencils the implicit side uses; boundary rows
    /// carry no explicit operator (they are algebraic conditions at t_new).
    double apply_row(std::size_t i, double t, const std::vector<double>& v) const {
        const auto& x = grid.x_nodes;
        const std::size_t nx = x.size();
        if (i == 0) {
            if (left_dirichlet) return 0.0;
            Stencil3 s = stencil_at_first(x[0], x[1], x[2]);
            double ai = a(0, t), bi = b(0, t);
            return ai * (s.d2[0] * v[0] + s.d2[1] * v[1] + s.d2[2] * v[2]) +
                   bi * (s.d1[0] * v[0] + s.d1[1] * v[1] + s.d1[2] * v[2]);
        }
        if (i == nx - 1) return 0.0;
        Stencil3 s = stencil_at_middle(x[i - 1], x[i], x[i + 1]);
        double ai = a(i, t), bi = b(i, t);
        return ai * (s.d2[0] * v[i - 1] + s.d2[1] * v[i] + s.d2[2] * v[i + 1]) +
               bi * (s.d1[0] * v[i - 1] + s.d1[1] * v[i] + s.d1[2] * v[i + 1]);
    }

    void assemble(double t_new, double dt, const std::vector<double>& w,
                  const std::vector<double>& expl, std::vector<double>& lower,
                  std::vector<double>& diag, std::vector<double>& upper,
                  std::vector<double>& rhs, double& e0, double& e1) const {
        const auto& x = grid.x_nodes;
        const std::size_t nx = x.size();
        const double th = cfg.theta;

        // interior rows: (1 + dt th fu) v_i - dt th (L v)_i = expl - dt th (f(w) - fu w)
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            Stencil3 s = stencil_at_middle(x[i - 1], x[i], x[i + 1]);
            double ai = a(i, t_new), bi = b(i, t_new);
            lower[i] = -dt * th * (ai * s.d2[0] + bi * s.d1[0]);
            diag[i] = 1.0 - dt * th * (ai * s.d2[1] + bi * s.d1[1]);
            upper[i] = -dt * th * (ai * s.d2[2] + bi * s.d1[2]);
            rhs[i] = expl[i];
            if (has_source) {
                double xp = xphys(i, t_new);
                double fw = f({xp, w[i]}), fuw = fu({xp, w[i]});
                diag[i] += dt * th * fuw;
                rhs[i] -= dt * th * (fw - fuw * w[i]);
            }
        }

        // left row
        lower[0] = 0.0;
        if (left_dirichlet) {
            diag[0] = 1.0;
            upper[0] = 0.0;
            e0 = 0.0;
            rhs[0] = left_dirichlet(t_new);
        } else {
            Stencil3 s = stencil_at_first(x[0], x[1], x[2]);
            double a0 = a(0, t_new), b0 = b(0, t_new);
            diag[0] = 1.0 - dt * th * (a0 * s.d2[0] + b0 * s.d1[0]);
            upper[0] = -dt * th * (a0 * s.d2[1] + b0 * s.d1[1]);
            e0 = -dt * th * (a0 * s.d2[2] + b0 * s.d1[2]);
            rhs[0] = expl[0];
            if (has_source) {
                double xp = xphys(0, t_new);
                double fw = f({xp, w[0]}), fuw = fu({xp, w[0]});
                diag[0] += dt * th * fuw;
                rhs[0] -= dt * th * (fw - fuw * w[0]);
            }
        }

        // right row
        upper[nx - 1] = 0.0;
        if (cfg.far_field == FarFieldRule::Dirichlet) {
            lower[nx - 1] = 0.0;
            diag[nx - 1] = 1.0;
            e1 = 0.0;
            rhs[nx - 1] = far_value({xphys(nx - 1, t_new), t_new});
        } else {
            // linearity: vanishing second difference over the last three nodes
            Stencil3 s = stencil_at_middle(x[nx - 3], x[nx - 2], x[nx - 1]);
            e1 = s.d2[0];
            lower[nx - 1] = s.d2[1];
            diag[nx - 1] = s.d2[2];
            rhs[nx - 1] = 0.0;
        }
    }
};

Compiled compile_or_default(const Expr& e, const std::vector<std::string>& vars) {
    return e.is_null() ? Compiled() : Compiled(e, vars);
}

} // namespace

Surface solve_terminal(const PdeProblem& prob, const Grid& grid, const Expr& payoff,
                       const SolverConfig& cfg) {
    cfg.validate();
    grid.validate();
    const Params& p = prob.params;
    const double half_rho2 = 0.5 * p.rho * p.rho;

    // The class equation reads u_t + L u - f = 0, i.e. u_t = f - L u: the
    // marcher's operator carries the printed signs directly.
    Marcher m{grid,
              [&](std::size_t i, double) {
                  return half_rho2 * std::pow(grid.x_nodes[i], 2.0 * p.gamma);
              },
              [&](std::size_t i, double) {
                  double x = grid.x_nodes[i];
                  return p.alpha + p.beta * x - p.lambda * p.rho * std::pow(x, p.delta);
              },
              [&](std::size_t i, double) { return grid.x_nodes[i]; },
              Compiled(),
              Compiled(),
              !prob.source.is_null() && !prob.source.is_constant(0.0),
              nullptr,
              cfg,
              compile_or_default(cfg.far_field_value, {"x", "t"})};
    if (m.has_source) {
        m.f = Compiled(prob.source, {"x", "u"});
        m.fu = Compiled(differentiate(prob.source, "u"), {"x", "u"});
    }

    Compiled pay(payoff, {"x"});
    std::vector<double> terminal(grid.nx());
    for (std::size_t i = 0; i < grid.nx(); ++i) terminal[i] = pay({grid.x_nodes[i]});
    return m.run(terminal);
}

Surface solve_barrier(const PdeProblem& prob, const Grid& grid, const BarrierSpec& spec,
                      const Expr& payoff, const SolverConfig& cfg, Surface* front_chart) {
    cfg.validate();
    grid.validate();
    const Params& p = prob.params;
    const double half_rho2 = 0.5 * p.rho * p.rho;
    const std::size_t nx = grid.nx(), nt = grid.nt();

    Compiled H(spec.H, {"t"});
    Compiled Hp(differentiate(spec.H, "t"), {"t"});
    Compiled R(spec.R, {"t"});

    double h_min = std::numeric_limits<double>::infinity();
    for (double t : grid.t_nodes) {
        double h = H({t});
        if (!(h > grid.x_nodes.front() && h < grid.x_nodes.back()))
            throw std::invalid_argument("barrier exits the grid at t=" + std::to_string(t));
        h_min = std::min(h_min, h);
    }

    // fixed-front chart: y = x/H(t), barrier at y=1, far field at
    // y_max = x_max / min H so the whole region x >= H(t) is covered
    const double y_max = grid.x_nodes.back() / h_min;
    Grid ygrid = Grid::uniform(1.0, y_max, nx, grid.t_nodes.front(), grid.t_nodes.back(), nt);

    Marcher m{ygrid,
              [&](std::size_t i, double t) {
                  double h = H({t}), x = ygrid.x_nodes[i] * h;
                  return half_rho2 * std::pow(x, 2.0 * p.gamma) / (h * h);
              },
              [&](std::size_t i, double t) {
                  double h = H({t}), y = ygrid.x_nodes[i], x = y * h;
                  double drift = p.alpha + p.beta * x - p.lambda * p.rho * std::pow(x, p.delta);
                  return drift / h - (Hp({t}) / h) * y;
              },
              [&](std::size_t i, double t) { return ygrid.x_nodes[i] * H({t}); },
              Compiled(),
              Compiled(),
              !prob.source.is_null() && !prob.source.is_constant(0.0),
              [&](double t) { return R({t}); },
              cfg,
              compile_or_default(cfg.far_field_value, {"x", "t"})};
    if (m.has_source) {
        m.f = Compiled(prob.source, {"x", "u"});
        m.fu = Compiled(differentiate(prob.source, "u"), {"x", "u"});
    }

    const double T = grid.t_nodes.back();
    Compiled pay(payoff, {"x"});
    std::vector<double> terminal(nx);
    for (std::size_t i = 0; i < nx; ++i) terminal[i] = pay({ygrid.x_nodes[i] * H({T})});
    Surface front = m.run(terminal);

    // map back to the requested grid: quadratic interpolation in y per slice
    Surface out(grid);
    for (std::size_t n = 0; n < nt; ++n) {
        double t = grid.t_nodes[n];
        double h = H({t});
        for (std::size_t i = 0; i < nx; ++i) {
            double x = grid.x_nodes[i];
            if (x < h) {
                out.set_valid(i, n, false);
                out.values[out.index(i, n)] = 0.0;
                continue;
            }
            if (n == nt - 1) { // terminal slice equals the payoff exactly
                out.values[out.index(i, n)] = pay({x});
                continue;
            }
            double y = x / h;
            auto it = std::upper_bound(ygrid.x_nodes.begin(), ygrid.x_nodes.end(), y);
            std::size_t j = std::size_t(it - ygrid.x_nodes.begin());
            j = std::clamp<std::size_t>(j, 1, nx - 2);
            double y0 = ygrid.x_nodes[j - 1], y1 = ygrid.x_nodes[j], y2 = ygrid.x_nodes[j + 1];
            double v0 = front.at(j - 1, n), v1 = front.at(j, n), v2 = front.at(j + 1, n);
            double l0 = (y - y1) * (y - y2) / ((y0 - y1) * (y0 - y2));
            double l1 = (y - y0) * (y - y2) / ((y1 - y0) * (y1 - y2));
            double l2 = (y - y0) * (y - y1) / ((y2 - y0) * (y2 - y1));
            out.values[out.index(i, n)] = l0 * v0 + l1 * v1 + l2 * v2;
        }
    }
    if (front_chart) *front_chart = std::move(front);
    return out;
}

double convergence_order(const PdeProblem& prob, const Expr& exact, double x_lo, double x_hi,
                         double t_lo, double T,
                         const std::vector<std::pair<std::size_t, std::size_t>>& resolutions,
                         const SolverConfig& cfg, ConvergenceDiag* diag) {
    if (resolutions.size() < 3)
        throw std::invalid_argument("convergence study needs at least 3 resolutions");
    for (std::size_t k = 1; k < resolutions.size(); ++k) {
        bool x_doubles = resolutions[k].first >= 2 * resolutions[k - 1].first - 2;
        bool t_doubles = resolutions[k].second >= 2 * resolutions[k - 1].second - 2;
        bool x_fixed = resolutions[k].first == resolutions[k - 1].first;
        bool t_fixed = resolutions[k].second == resolutions[k - 1].second;
        if (!((x_doubles || x_fixed) && (t_doubles || t_fixed) && !(x_fixed && t_fixed)))
            throw std::invalid_argument("resolutions must double along at least one axis");
    }
    bool nx_fixed = true;
    for (std::size_t k = 1; k < resolutions.size(); ++k)
        nx_fixed = nx_fixed && resolutions[k].first == resolutions[0].first;

    Expr payoff = substitute(exact, "t", Expr::constant(T));
    Compiled ex(exact, {"x", "t"});

    ConvergenceDiag local;
    ConvergenceDiag& d = diag ? *diag : local;
    d.hs.clear();
    d.errors.clear();
    d.monotone = true;
    d.at_floor = false;

    for (auto [nx, nt] : resolutions) {
        Grid g = prob.params.gamma >= 0.5 ? Grid::log_uniform(x_lo, x_hi, nx, t_lo, T, nt)
                                          : Grid::uniform(x_lo, x_hi, nx, t_lo, T, nt);
        Surface s = solve_terminal(prob, g, payoff, cfg);
        double err = 0.0;
        for (std::size_t n = 0; n < g.nt(); ++n)
            for (std::size_t i = 0; i < g.nx(); ++i)
                err = std::max(err,
                               std::fabs(s.at(i, n) - ex({g.x_nodes[i], g.t_nodes[n]})));
        // h: spatial spacing unless the study refines only in time
        double h = nx_fixed ? (T - t_lo) / double(nt - 1) : (x_hi - x_lo) / double(nx - 1);
        d.hs.push_back(h);
        d.errors.push_back(err);
    }
    for (std::size_t k = 1; k < d.errors.size(); ++k)
        if (d.errors[k] >= d.errors[k - 1]) d.monotone = false;
    d.at_floor = *std::max_element(d.errors.begin(), d.errors.end()) < 1e-12;
    if (d.at_floor) return std::numeric_limits<double>::infinity();

    std::vector<double> lh, le;
    for (std::size_t k = 0; k < d.errors.size(); ++k) {
        lh.push_back(std::log(d.hs[k]));
        le.push_back(std::log(std::max(d.errors[k], 1e-300)));
    }
    return lsq_slope(lh, le);
}

} // namespace bondsym
