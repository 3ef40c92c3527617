#pragma once

#include "bondsym/expr.hpp"

#include <stdexcept>
#include <string>

namespace bondsym {

/// The six real coefficients of the semi-linear bond-pricing operator
///   u_t + (1/2) rho^2 x^{2 gamma} u_xx + (alpha + beta x - lambda rho x^delta) u_x = f(x,u).
struct Params {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double lambda = 0.0;
    double rho = 1.0;

    /// rho must never vanish; in strict mode delta is additionally kept away
    /// from {0,1} (the class constraint). Relaxed mode is the default because
    /// the catalogued solutions themselves use delta = 0.
    void validate(bool strict_delta = false) const;

    /// Bindings for the six coefficient names, used when evaluating symbolic
    /// templates that mention them.
    Bindings bindings() const;
};

enum class CaseTag { Generic, GammaOne, GammaHalf, DeltaChain };

std::string to_string(CaseTag tag);

/// Case split driving the choice of zeroing multiplier. Precedence:
/// GammaOne > GammaHalf > DeltaChain > Generic.
CaseTag classify(const Params& p, double tol = 1e-12);

/// One concrete equation of the class: coefficients plus a source f(x,u).
struct PdeProblem {
    Params params;
    Expr source; // Expr in (x,u); must not mention t

    PdeProblem() = default;
    PdeProblem(Params p, Expr f);
};

/// Evaluates the residual of one candidate solution at many points without
/// re-deriving the symbolic derivatives each time.
class ResidualEvaluator {
public:
    ResidualEvaluator(const PdeProblem& prob, const Expr& u);
    double operator()(double x, double t) const;

private:
    PdeProblem prob_;
    Expr u_, u_t_, u_x_, u_xx_;
};

/// u_t + (1/2) rho^2 x^{2 gamma} u_xx + (alpha + beta x - lambda rho x^delta) u_x - f(x, u)
/// with exact symbolic derivatives, evaluated at (x, t).
double residual(const PdeProblem& prob, const Expr& u, double x, double t);

/// Parameter templates of the classical models recovered as special cases.
/// The linear models carry f = x u; Black-Scholes-Merton carries f = beta u.
enum class ClassicalModel { BSM, Vasicek, CIR, Longstaff };

PdeProblem classical_reduction(ClassicalModel name, double beta = 0.05, double rho = 0.2);

} // namespace bondsym
