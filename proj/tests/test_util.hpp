#pragma once

#include "bondsym/expr.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace testutil {

using bondsym::Bindings;
using bondsym::Expr;

/// Random expression over {x, t, u} of the given depth. Exponents are kept
/// small and leaves moderate so central finite differences stay
/// well-conditioned; domain errors are handled by rejection at the call site.
inline Expr random_expr(std::mt19937& rng, int depth) {
    std::uniform_real_distribution<double> cdist(0.5, 2.5);
    std::uniform_int_distribution<int> leaf(0, 3);
    if (depth <= 0) {
        switch (leaf(rng)) {
        case 0: return Expr::constant(cdist(rng));
        case 1: return Expr::variable("x");
        case 2: return Expr::variable("t");
        default: return Expr::variable("u");
        }
    }
    std::uniform_int_distribution<int> op(0, 9);
    Expr a = random_expr(rng, depth - 1);
    switch (op(rng)) {
    case 0: return a + random_expr(rng, depth - 1);
    case 1: return a - random_expr(rng, depth - 1);
    case 2: return a * random_expr(rng, depth - 1);
    case 3: return a / random_expr(rng, depth - 1);
    case 4: {
        std::uniform_int_distribution<int> e(0, 2);
        double exps[3] = {2.0, 3.0, 0.5};
        return Expr::pow(a, Expr::constant(exps[e(rng)]));
    }
    case 5: return -a;
    case 6: return Expr::exp(a);
    case 7: return Expr::log(a);
    case 8: return Expr::sqrt(a);
    default: return Expr::abs(a);
    }
}

inline Bindings random_bindings(std::mt19937& rng) {
    std::uniform_real_distribution<double> d(0.7, 1.8);
    return {{"x", d(rng)}, {"t", d(rng)}, {"u", d(rng)}};
}

/// Central finite difference of e with respect to var at b.
inline double central_fd(const Expr& e, const std::string& var, const Bindings& b) {
    double h = 1e-6 * std::max(1.0, std::fabs(b.at(var)));
    Bindings hi = b, lo = b;
    hi[var] += h;
    lo[var] -= h;
    return (bondsym::eval(e, hi) - bondsym::eval(e, lo)) / (2.0 * h);
}

struct DerivSample {
    Expr e;
    Bindings b;
};

/// Draw n (expression, binding) pairs whose value, symbolic derivatives and
/// central differences all evaluate finitely and moderately (rejection
/// sampling against domain errors and ill-conditioning).
inline std::vector<DerivSample> derivative_samples(std::mt19937& rng, int n) {
    std::vector<DerivSample> out;
    const std::vector<std::string> vars = {"x", "t", "u"};
    while (static_cast<int>(out.size()) < n) {
        Expr e = random_expr(rng, 6);
        Bindings b = random_bindings(rng);
        try {
            double v = bondsym::eval(e, b);
            if (!std::isfinite(v) || std::fabs(v) > 1e4) continue;
            bool ok = true;
            for (const auto& var : vars) {
                double fd = central_fd(e, var, b);
                double sym = bondsym::eval(bondsym::differentiate(e, var), b);
                if (!std::isfinite(fd) || !std::isfinite(sym) || std::fabs(fd) > 1e6) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
        } catch (const bondsym::EvalError&) {
            continue;
        }
        out.push_back({e, b});
    }
    return out;
}

/// Worst relative symbolic-vs-central-difference deviation over the samples.
inline double worst_derivative_deviation(const std::vector<DerivSample>& samples) {
    double worst = 0.0;
    for (const auto& s : samples)
        for (const std::string var : {"x", "t", "u"}) {
            double fd = central_fd(s.e, var, s.b);
            double sym = bondsym::eval(bondsym::differentiate(s.e, var), s.b);
            double rel = std::fabs(sym - fd) / std::max(1.0, std::fabs(fd));
            worst = std::max(worst, rel);
        }
    return worst;
}

} // namespace testutil
