#include "bondsym/model.hpp"

#include <cmath>

namespace bondsym {

void Params::validate(bool strict_delta) const {
    if (rho == 0.0) throw std::invalid_argument("rho must be nonzero");
    if (strict_delta && (delta == 0.0 || delta == 1.0))
        throw std::invalid_argument("delta must avoid {0,1} under the strict class constraint");
}

Bindings Params::bindings() const {
    return {{"alpha", alpha}, {"beta", beta},     {"gamma", gamma},
            {"delta", delta}, {"lambda", lambda}, {"rho", rho}};
}

std::string to_string(CaseTag tag) {
    switch (tag) {
    case CaseTag::Generic: return "Generic";
    case CaseTag::GammaOne: return "GammaOne";
    case CaseTag::GammaHalf: return "GammaHalf";
    case CaseTag::DeltaChain: return "DeltaChain";
    }
    return "?";
}

CaseTag classify(const Params& p, double tol) {
    if (std::fabs(p.gamma - 1.0) <= tol) return CaseTag::GammaOne;
    if (std::fabs(p.gamma - 0.5) <= tol) return CaseTag::GammaHalf;
    if (std::fabs(p.delta - (2.0 * p.gamma - 1.0)) <= tol) return CaseTag::DeltaChain;
    return CaseTag::Generic;
}

PdeProblem::PdeProblem(Params p, Expr f) : params(p), source(std::move(f)) {
    if (depends_on(source, "t"))
        throw std::invalid_argument("source must be a function of (x, u) only");
}

ResidualEvaluator::ResidualEvaluator(const PdeProblem& prob, const Expr& u)
    : prob_(prob),
      u_(u),
      u_t_(differentiate(u, "t")),
      u_x_(differentiate(u, "x")),
      u_xx_(differentiate(differentiate(u, "x"), "x")) {}

double ResidualEvaluator::operator()(double x, double t) const {
    const Params& p = prob_.params;
    Bindings b{{"x", x}, {"t", t}};
    double uv = eval(u_, b);
    double ut = eval(u_t_, b);
    double ux = eval(u_x_, b);
    double uxx = eval(u_xx_, b);
    double fv = eval(prob_.source, Bindings{{"x", x}, {"u", uv}});
    double drift = p.alpha + p.beta * x - p.lambda * p.rho * std::pow(x, p.delta);
    return ut + 0.5 * p.rho * p.rho * std::pow(x, 2.0 * p.gamma) * uxx + drift * ux - fv;
}

double residual(const PdeProblem& prob, const Expr& u, double x, double t) {
    return ResidualEvaluator(prob, u)(x, t);
}

PdeProblem classical_reduction(ClassicalModel name, double beta, double rho) {
    Expr x = Expr::variable("x");
    Expr u = Expr::variable("u");
    Params p;
    p.rho = rho;
    switch (name) {
    case ClassicalModel::BSM:
        p.gamma = 1.0;
        p.delta = 0.5;
        p.beta = beta;
        return PdeProblem(p, Expr::constant(beta) * u);
    case ClassicalModel::Vasicek:
        p.gamma = 0.0;
        p.delta = 0.0;
        p.beta = beta;
        if (beta == 0.0) throw std::invalid_argument("Vasicek requires beta != 0");
        p.lambda = 0.1;
        p.alpha = 0.1;
        return PdeProblem(p, x * u);
    case ClassicalModel::CIR:
        p.gamma = 0.5;
        p.delta = 0.5;
        p.lambda = 0.0;
        p.beta = beta;
        p.alpha = 0.1;
        return PdeProblem(p, x * u);
    case ClassicalModel::Longstaff:
        p.gamma = 0.5;
        p.delta = 0.5;
        p.alpha = 0.25 * rho * rho;
        p.beta = beta;
        p.lambda = 0.1;
        return PdeProblem(p, x * u);
    }
    throw std::invalid_argument("unknown classical model");
}

} // namespace bondsym
