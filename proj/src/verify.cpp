#include "bondsym/verify.hpp"

#include "bondsym/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bondsym {

namespace {

std::string point_str(double x, double t) {
    std::ostringstream os;
    os << "(x=" << x << ", t=" << t << ")";
    return os.str();
}

struct DerivCache {
    Expr u, u_t, u_x, u_xx;
    explicit DerivCache(const Expr& e)
        : u(e),
          u_t(differentiate(e, "t")),
          u_x(differentiate(e, "x")),
          u_xx(differentiate(differentiate(e, "x"), "x")) {}
};

} // namespace

ChartPde ChartPde::original(const PdeProblem& prob) {
    ChartPde c;
    const Params p = prob.params;
    c.c_t = 1.0;
    c.c_xx = [p](double x) { return 0.5 * p.rho * p.rho * std::pow(x, 2.0 * p.gamma); };
    c.c_x = [p](double x) {
        return p.alpha + p.beta * x - p.lambda * p.rho * std::pow(x, p.delta);
    };
    c.f = prob.source;
    return c;
}

ChartPde ChartPde::heat(Expr fbar) {
    ChartPde c;
    c.c_t = 1.0;
    c.c_xx = [](double) { return -1.0; };
    c.c_x = [](double) { return 0.0; };
    c.f = std::move(fbar);
    return c;
}

ResidualReport residual_sweep(const ChartPde& pde, const Expr& u, const SampleRegion& region,
                              std::size_t n, double tol, std::uint64_t seed) {
    ResidualReport rep;
    rep.check = "residual-sweep";
    rep.excluded = region.excluded_description;
    DerivCache d(u);
    std::size_t accepted = 0;
    for (std::size_t i = 0; accepted < n; ++i) {
        if (i > 100 * n + 1000)
            throw std::runtime_error("residual_sweep: region rejects nearly all samples");
        auto [hx, ht] = halton2(i, seed);
        double x = region.x_lo + (region.x_hi - region.x_lo) * hx;
        double t = region.t_lo + (region.t_hi - region.t_lo) * ht;
        if (!region.contains(x, t)) continue;
        Bindings b{{"x", x}, {"t", t}};
        double uv, ut, ux, uxx, fv;
        try {
            uv = eval(d.u, b);
            ut = eval(d.u_t, b);
            ux = eval(d.u_x, b);
            uxx = eval(d.u_xx, b);
            fv = eval(pde.f, Bindings{{"x", x}, {"u", uv}});
        } catch (const EvalError& e) {
            throw EvalError(std::string(e.what()) + " at " + point_str(x, t));
        }
        double r = std::fabs(pde.c_t * ut + pde.c_xx(x) * uxx + pde.c_x(x) * ux - fv);
        if (r > rep.max_abs) {
            rep.max_abs = r;
            rep.argmax_x = x;
            rep.argmax_t = t;
        }
        ++accepted;
    }
    rep.n = n;
    return rep.finish(tol);
}

ResidualReport pde_residual_sweep(const PdeProblem& prob, const Expr& u,
                                  const SampleRegion& region, std::size_t n, double tol,
                                  std::uint64_t seed) {
    ResidualReport rep = residual_sweep(ChartPde::original(prob), u, region, n, tol, seed);
    rep.check = "pde-residual-sweep";
    return rep;
}

ResidualReport terminal_check(const Expr& u, double T, const std::vector<double>& xs,
                              double tol) {
    ResidualReport rep;
    rep.check = "terminal";
    for (double x : xs) {
        double v = eval(u, {{"x", x}, {"t", T}});
        double r = std::fabs(v - 1.0);
        if (r > rep.max_abs) {
            rep.max_abs = r;
            rep.argmax_x = x;
            rep.argmax_t = T;
        }
    }
    rep.n = xs.size();
    return rep.finish(tol);
}

ResidualReport barrier_check(const Expr& u, const BarrierSpec& spec,
                             const std::vector<double>& ts, double tol) {
    ResidualReport rep;
    rep.check = "barrier";
    for (double t : ts) {
        double h = eval(spec.H, {{"t", t}});
        double r0 = eval(spec.R, {{"t", t}});
        double v = eval(u, {{"x", h}, {"t", t}});
        double r = std::fabs(v - r0);
        if (r > rep.max_abs) {
            rep.max_abs = r;
            rep.argmax_x = h;
            rep.argmax_t = t;
        }
    }
    rep.n = ts.size();
    return rep.finish(tol);
}

ResidualReport roundtrip_check(const Transform& tr, const std::vector<Point>& points,
                               double tol) {
    ResidualReport rep;
    rep.check = "roundtrip";
    for (const Point& p : points) {
        Point q = tr.pull_point(tr.push_point(p));
        double r = std::max({std::fabs(q.x - p.x), std::fabs(q.t - p.t),
                             std::fabs(q.u - p.u)});
        if (r > rep.max_abs) {
            rep.max_abs = r;
            rep.argmax_x = p.x;
            rep.argmax_t = p.t;
        }
    }
    rep.n = points.size();
    return rep.finish(tol);
}

ChainTransportReport chain_transport_check(const ClosedFormCase& cs, std::size_t n,
                                           double heat_tol, double roundtrip_tol,
                                           std::uint64_t seed) {
    Transform chain = reduction_chain(cs.params);
    Expr phi = chain.push_solution(cs.solution);
    Expr fbar = chain.map_source(cs.source);
    ChartPde heat = ChartPde::heat(fbar);
    DerivCache d(phi);
    Compiled fb(fbar, {"x", "u"});
    Compiled usol(cs.solution, {"x", "t"});

    ChainTransportReport out;
    out.heat.check = "chain-heat-residual";
    out.heat.case_id = to_string(cs.id);
    out.heat.excluded = cs.region.excluded_description;
    out.roundtrip.check = "chain-roundtrip";
    out.roundtrip.case_id = to_string(cs.id);

    std::size_t accepted = 0;
    for (std::size_t i = 0; accepted < n; ++i) {
        if (i > 100 * n + 1000)
            throw std::runtime_error("chain_transport_check: region rejects nearly all samples");
        auto [hx, ht] = halton2(i, seed);
        double x = cs.region.x_lo + (cs.region.x_hi - cs.region.x_lo) * hx;
        double t = cs.region.t_lo + (cs.region.t_hi - cs.region.t_lo) * ht;
        if (!cs.region.contains(x, t)) continue;
        double uv = usol({x, t});
        Point q = chain.push_point({x, t, uv});
        Bindings b{{"x", q.x}, {"t", q.t}};
        double r = std::fabs(eval(d.u_t, b) - eval(d.u_xx, b) - fb({q.x, eval(d.u, b)}));
        if (r > out.heat.max_abs) {
            out.heat.max_abs = r;
            out.heat.argmax_x = q.x;
            out.heat.argmax_t = q.t;
        }
        Point back = chain.pull_point(q);
        double rt = std::max({std::fabs(back.x - x), std::fabs(back.t - t),
                              std::fabs(back.u - uv)});
        if (rt > out.roundtrip.max_abs) {
            out.roundtrip.max_abs = rt;
            out.roundtrip.argmax_x = x;
            out.roundtrip.argmax_t = t;
        }
        ++accepted;
    }
    out.heat.n = n;
    out.roundtrip.n = n;
    out.heat.finish(heat_tol);
    out.roundtrip.finish(roundtrip_tol);
    return out;
}

namespace {

struct Scatter {
    double x, t, u;
};

struct CompiledField {
    Compiled xi1, xi2, eta;
    explicit CompiledField(const Generator& g)
        : xi1(g.xi1, {"x", "t", "u"}),
          xi2(g.xi2, {"x", "t", "u"}),
          eta(g.eta, {"x", "t", "u"}) {}
};

Scatter integrate_rk4(const CompiledField& g, double x, double t, double u, double epsilon) {
    int steps = 64;
    double h = epsilon / steps;
    auto field = [&](double cx, double ct, double cu, double* out) {
        double args[3] = {cx, ct, cu};
        out[0] = g.xi1(args);
        out[1] = g.xi2(args);
        out[2] = g.eta(args);
    };
    double s[3] = {x, t, u};
    double k1[3], k2[3], k3[3], k4[3], tmp[3];
    for (int n = 0; n < steps; ++n) {
        field(s[0], s[1], s[2], k1);
        for (int j = 0; j < 3; ++j) tmp[j] = s[j] + 0.5 * h * k1[j];
        field(tmp[0], tmp[1], tmp[2], k2);
        for (int j = 0; j < 3; ++j) tmp[j] = s[j] + 0.5 * h * k2[j];
        field(tmp[0], tmp[1], tmp[2], k3);
        for (int j = 0; j < 3; ++j) tmp[j] = s[j] + h * k3[j];
        field(tmp[0], tmp[1], tmp[2], k4);
        for (int j = 0; j < 3; ++j)
            s[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    return {s[0], s[1], s[2]};
}

Surface reconstruct_on_grid(std::vector<Scatter>& pts, const Grid& grid) {
    const std::size_t nx = grid.nx(), nt = grid.nt();
    std::sort(pts.begin(), pts.end(),
              [](const Scatter& a, const Scatter& b) { return a.t < b.t; });

    // Characteristic spacings (of the target grid) for the scaled distance.
    double hx = (grid.x_nodes.back() - grid.x_nodes.front()) / double(nx - 1);
    double ht = (grid.t_nodes.back() - grid.t_nodes.front()) / double(nt - 1);
    const double radius = 1.2;       // in scaled units
    const double snap = 1e-9;        // exact-hit shortcut
    const std::size_t min_neighbors = 6;

    Surface out(grid);
    std::vector<double> A, rhs;
    for (std::size_t n = 0; n < nt; ++n)
        for (std::size_t i = 0; i < nx; ++i) {
            double xc = grid.x_nodes[i], tc = grid.t_nodes[n];
            // Gather neighbors within the scaled radius, restricted to the
            // time window (pts are sorted by t).
            auto lo = std::lower_bound(pts.begin(), pts.end(), tc - radius * ht,
                                       [](const Scatter& s, double v) { return s.t < v; });
            auto hi = std::upper_bound(pts.begin(), pts.end(), tc + radius * ht,
                                       [](double v, const Scatter& s) { return v < s.t; });
            std::vector<std::size_t> nb;
            bool snapped = false;
            double min_dx = 0.0, max_dx = 0.0, min_dt = 0.0, max_dt = 0.0;
            for (auto it = lo; it != hi; ++it) {
                std::size_t k = std::size_t(it - pts.begin());
                double dx = (pts[k].x - xc) / hx, dt = (pts[k].t - tc) / ht;
                double d = std::sqrt(dx * dx + dt * dt);
                if (d < snap) {
                    out.at(i, n) = pts[k].u;
                    out.set_valid(i, n, true);
                    snapped = true;
                    break;
                }
                if (d <= radius) {
                    nb.push_back(k);
                    min_dx = std::min(min_dx, dx);
                    max_dx = std::max(max_dx, dx);
                    min_dt = std::min(min_dt, dt);
                    max_dt = std::max(max_dt, dt);
                }
            }
            if (snapped) continue;
            // Interpolation only: the node must be interior to the scatter
            // cloud in both coordinates, and the quadratic must be
            // identifiable (>= 3 distinct offsets per coordinate), otherwise
            // the cell is masked.
            bool covered = min_dx < 0.0 && max_dx > 0.0 && min_dt < 0.0 && max_dt > 0.0;
            auto distinct = [&](bool use_x) {
                std::vector<double> vals;
                for (std::size_t k : nb) {
                    double v = use_x ? (pts[k].x - xc) / hx : (pts[k].t - tc) / ht;
                    bool fresh = true;
                    for (double w : vals)
                        if (std::fabs(w - v) < 1e-6) { fresh = false; break; }
                    if (fresh) vals.push_back(v);
                    if (vals.size() >= 3) return true;
                }
                return false;
            };
            if (nb.size() < min_neighbors || !covered || !distinct(true) || !distinct(false)) {
                out.at(i, n) = 0.0;
                out.set_valid(i, n, false);
                continue;
            }
            // Weighted quadratic least squares in scaled offsets:
            // u ~ c0 + c1 dx + c2 dt + c3 dx^2 + c4 dx dt + c5 dt^2.
            A.assign(36, 0.0);
            rhs.assign(6, 0.0);
            for (std::size_t k : nb) {
                double dx = (pts[k].x - xc) / hx, dt = (pts[k].t - tc) / ht;
                double d = std::sqrt(dx * dx + dt * dt) / radius;
                double w = std::pow(1.0 - d, 4) * (4.0 * d + 1.0); // Wendland C2
                double phi[6] = {1.0, dx, dt, dx * dx, dx * dt, dt * dt};
                for (int r = 0; r < 6; ++r) {
                    for (int c = 0; c < 6; ++c) A[r * 6 + c] += w * phi[r] * phi[c];
                    rhs[r] += w * phi[r] * pts[k].u;
                }
            }
            if (!solve_dense(A, rhs, 6)) {
                out.at(i, n) = 0.0;
                out.set_valid(i, n, false);
                continue;
            }
            out.at(i, n) = rhs[0];
            out.set_valid(i, n, true);
        }
    return out;
}

} // namespace

Surface flow_map(const Generator& g, const Expr& u, double epsilon, const Grid& grid) {
    grid.validate();
    const std::size_t nx = grid.nx(), nt = grid.nt();

    // Trajectories are seeded from a refinement of the grid (each cell split
    // kRefine times per axis): the scatter cloud is denser than the target
    // grid, which keeps the least-squares reconstruction error well below the
    // finite-difference truncation error of downstream residual checks.
    constexpr std::size_t kRefine = 4;
    std::vector<double> seed_x, seed_t;
    for (std::size_t i = 0; i + 1 < nx; ++i)
        for (std::size_t r = 0; r < kRefine; ++r)
            seed_x.push_back(grid.x_nodes[i] +
                             (grid.x_nodes[i + 1] - grid.x_nodes[i]) * double(r) / kRefine);
    seed_x.push_back(grid.x_nodes.back());
    for (std::size_t n = 0; n + 1 < nt; ++n)
        for (std::size_t r = 0; r < kRefine; ++r)
            seed_t.push_back(grid.t_nodes[n] +
                             (grid.t_nodes[n + 1] - grid.t_nodes[n]) * double(r) / kRefine);
    seed_t.push_back(grid.t_nodes.back());

    CompiledField field(g);
    Compiled cu(u, {"x", "t"});
    std::vector<Scatter> pts;
    pts.reserve(seed_x.size() * seed_t.size());
    for (double t0 : seed_t)
        for (double x0 : seed_x) {
            double args[2] = {x0, t0};
            double u0 = cu(args);
            if (epsilon == 0.0) {
                pts.push_back({x0, t0, u0});
                continue;
            }
            Scatter s = integrate_rk4(field, x0, t0, u0, epsilon);
            if (!std::isfinite(s.x) || !std::isfinite(s.t) || !std::isfinite(s.u))
                throw std::runtime_error("flow_map: trajectory escaped the domain at " +
                                         point_str(x0, t0));
            pts.push_back(s);
        }
    return reconstruct_on_grid(pts, grid);
}

Surface flow_map(const Generator& g, const Surface& s, double epsilon) {
    s.grid.validate();
    const Grid& grid = s.grid;
    CompiledField field(g);
    std::vector<Scatter> pts;
    pts.reserve(grid.nx() * grid.nt());
    for (std::size_t n = 0; n < grid.nt(); ++n)
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            if (!s.valid(i, n)) continue;
            double x0 = grid.x_nodes[i], t0 = grid.t_nodes[n], u0 = s.at(i, n);
            if (epsilon == 0.0) {
                pts.push_back({x0, t0, u0});
                continue;
            }
            Scatter q = integrate_rk4(field, x0, t0, u0, epsilon);
            if (!std::isfinite(q.x) || !std::isfinite(q.t) || !std::isfinite(q.u))
                throw std::runtime_error("flow_map: trajectory escaped the domain at " +
                                         point_str(x0, t0));
            pts.push_back(q);
        }
    return reconstruct_on_grid(pts, grid);
}

ResidualReport surface_residual(const ChartPde& pde, const Surface& s, double tol) {
    ResidualReport rep;
    rep.check = "surface-residual";
    const Grid& g = s.grid;
    const std::size_t nx = g.nx(), nt = g.nt();
    if (nx < 5 || nt < 5) throw std::invalid_argument("surface_residual: grid too small");

    auto all_valid = [&](std::size_t i, std::size_t n) {
        for (int di = -2; di <= 2; ++di)
            if (!s.valid(i + di, n)) return false;
        for (int dn = -2; dn <= 2; ++dn)
            if (!s.valid(i, n + dn)) return false;
        return true;
    };

    // 4th-order central differences; x spacing must be uniform for the
    // classical weights, so non-uniform grids are differenced in index space
    // via local polynomial fits. Here grids from flow experiments are uniform.
    double hx = g.x_nodes[1] - g.x_nodes[0];
    for (std::size_t i = 2; i + 2 < nx; ++i)
        if (std::fabs((g.x_nodes[i + 1] - g.x_nodes[i]) - hx) > 1e-9 * std::fabs(hx))
            throw std::invalid_argument("surface_residual needs a uniform x grid");
    double ht = g.dt();

    std::size_t counted = 0;
    for (std::size_t n = 2; n + 2 < nt; ++n)
        for (std::size_t i = 2; i + 2 < nx; ++i) {
            if (!all_valid(i, n)) continue;
            double u0 = s.at(i, n);
            double ux = (s.at(i - 2, n) - 8.0 * s.at(i - 1, n) + 8.0 * s.at(i + 1, n) -
                         s.at(i + 2, n)) /
                        (12.0 * hx);
            double uxx = (-s.at(i - 2, n) + 16.0 * s.at(i - 1, n) - 30.0 * u0 +
                          16.0 * s.at(i + 1, n) - s.at(i + 2, n)) /
                         (12.0 * hx * hx);
            double ut = (s.at(i, n - 2) - 8.0 * s.at(i, n - 1) + 8.0 * s.at(i, n + 1) -
                         s.at(i, n + 2)) /
                        (12.0 * ht);
            double x = g.x_nodes[i];
            double fv = eval(pde.f, {{"x", x}, {"u", u0}});
            double r = std::fabs(pde.c_t * ut + pde.c_xx(x) * uxx + pde.c_x(x) * ux - fv);
            ++counted;
            if (r > rep.max_abs) {
                rep.max_abs = r;
                rep.argmax_x = x;
                rep.argmax_t = g.t_nodes[n];
            }
        }
    if (counted == 0)
        throw std::runtime_error("surface_residual: no interior cell has full coverage");
    rep.n = counted;
    return rep.finish(tol);
}

ResidualReport solution_to_solution_check(const Generator& g, const ChartPde& pde,
                                          const Expr& u, const std::vector<double>& epsilons,
                                          const Grid& grid, double tol) {
    ResidualReport rep;
    rep.check = "solution-to-solution";
    for (double eps : epsilons) {
        Surface s = flow_map(g, u, eps, grid);
        ResidualReport r = surface_residual(pde, s, tol);
        rep.n += r.n;
        if (r.max_abs > rep.max_abs) {
            rep.max_abs = r.max_abs;
            rep.argmax_x = r.argmax_x;
            rep.argmax_t = r.argmax_t;
        }
    }
    return rep.finish(tol);
}

namespace {

/// The two infinitesimal barrier conditions at time t, as a linear functional
/// of the generator: returns (xi1 - H' xi2, eta - R' xi2) at (H(t), t, R(t)).
std::pair<double, double> barrier_rows(const Generator& g, const BarrierSpec& spec,
                                       const Expr& Hp, const Expr& Rp, double t) {
    double h = eval(spec.H, {{"t", t}});
    double r = eval(spec.R, {{"t", t}});
    double hp = eval(Hp, {{"t", t}});
    double rp = eval(Rp, {{"t", t}});
    Bindings b{{"x", h}, {"t", t}, {"u", r}};
    double xi1 = eval(g.xi1, b), xi2 = eval(g.xi2, b), eta = eval(g.eta, b);
    return {xi1 - hp * xi2, eta - rp * xi2};
}

} // namespace

ResidualReport boundary_invariance_check(const Generator& g, const BarrierSpec& spec,
                                         const std::vector<double>& ts, double tol) {
    ResidualReport rep;
    rep.check = "boundary-invariance";
    Expr Hp = differentiate(spec.H, "t"), Rp = differentiate(spec.R, "t");
    for (double t : ts) {
        auto [v1, v2] = barrier_rows(g, spec, Hp, Rp, t);
        double r = std::max(std::fabs(v1), std::fabs(v2));
        if (r > rep.max_abs) {
            rep.max_abs = r;
            rep.argmax_t = t;
            rep.argmax_x = eval(spec.H, {{"t", t}});
        }
    }
    rep.n = ts.size();
    return rep.finish(tol);
}

CombinationResult boundary_combination(const GeneratorSet& span, const BarrierSpec& spec,
                                       const std::vector<double>& ts, double threshold) {
    const std::size_t k = span.generators.size();
    if (k == 0) throw std::invalid_argument("boundary_combination: empty span");
    Expr Hp = differentiate(spec.H, "t"), Rp = differentiate(spec.R, "t");

    // Rows of the sampled linear system: two conditions per time.
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> row_time; // index into ts
    for (std::size_t it = 0; it < ts.size(); ++it) {
        std::vector<double> r1(k), r2(k);
        for (std::size_t j = 0; j < k; ++j) {
            auto [v1, v2] = barrier_rows(span.generators[j], spec, Hp, Rp, ts[it]);
            r1[j] = v1;
            r2[j] = v2;
        }
        rows.push_back(std::move(r1));
        row_time.push_back(it);
        rows.push_back(std::move(r2));
        row_time.push_back(it);
    }

    auto smallest_over = [&](const std::vector<std::size_t>& which, double* out_res) {
        std::vector<double> gram(k * k, 0.0);
        for (std::size_t idx : which)
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < k; ++b) gram[a * k + b] += rows[idx][a] * rows[idx][b];
        std::vector<double> c = smallest_eigenvector(std::move(gram), k);
        double worst = 0.0;
        for (std::size_t idx : which) {
            double dot = 0.0;
            for (std::size_t a = 0; a < k; ++a) dot += rows[idx][a] * c[a];
            worst = std::max(worst, std::fabs(dot));
        }
        *out_res = worst;
        return c;
    };

    CombinationResult result;
    std::vector<std::size_t> all(rows.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    result.coefficients = smallest_over(all, &result.residual);

    if (result.residual >= threshold) {
        // A combination may still exist separately at each time.
        double worst_per_time = 0.0;
        for (std::size_t it = 0; it < ts.size(); ++it) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (row_time[i] == it) idx.push_back(i);
            double res;
            smallest_over(idx, &res);
            worst_per_time = std::max(worst_per_time, res);
        }
        result.time_dependent = worst_per_time < threshold;
    }
    return result;
}

namespace {

Generator push_through_stage(const Generator& g, const TransformStage& st) {
    Expr Xp = differentiate(st.fwd_x, "x");
    Expr Psip = differentiate(st.fwd_t, "t");
    Expr Phix = differentiate(st.fwd_u, "x");
    Expr Phiu = differentiate(st.fwd_u, "u");

    Expr n_xi1 = g.xi1 * Xp;
    Expr n_xi2 = g.xi2 * Psip;
    Expr n_eta = g.xi1 * Phix + g.eta * Phiu;

    // Express in the image chart: u first (inv_u mentions the source x, so it
    // is pre-mapped to image coordinates; substitute() is single pass), then
    // the coordinates.
    Expr inv_u_img = substitute(st.inv_u, "x", st.inv_x);
    auto to_image = [&](Expr e) {
        e = substitute(e, "u", inv_u_img);
        e = substitute(e, "x", st.inv_x);
        e = substitute(e, "t", st.inv_t);
        return e;
    };
    return Generator{to_image(n_xi1), to_image(n_xi2), to_image(n_eta),
                     g.frame + "+" + st.name};
}

} // namespace

Generator push_generator(const Generator& g, const Transform& tr) {
    Generator out = g;
    for (const TransformStage& st : tr.stages()) out = push_through_stage(out, st);
    return out;
}

BarrierSpec push_barrier(const BarrierSpec& spec, const Transform& tr) {
    BarrierSpec out = spec;
    Expr t_old = tr.inverse_t(); // t(tau), an Expr in t (meaning tau)
    Expr H_old = substitute(spec.H, "t", t_old);
    Expr R_old = substitute(spec.R, "t", t_old);
    // Hbar(tau) = X(H(t(tau))); Rbar(tau) = Phi(H(t(tau)), R(t(tau))).
    Expr Hbar = substitute(tr.forward_x(), "x", H_old);
    Expr Phi = tr.forward_u(); // in (x, u)
    Expr Rbar = substitute(substitute(Phi, "u", R_old), "x", H_old);
    out.H = Hbar;
    out.R = Rbar;
    return out;
}

} // namespace bondsym
