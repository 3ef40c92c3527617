#pragma once

#include "bondsym/expr.hpp"
#include "bondsym/model.hpp"

#include <string>
#include <tuple>
#include <vector>

namespace bondsym {

/// One invertible point map (x,t,u) -> (xbar, tau, phi) together with the
/// induced source-term rule  fbar = mult(x) * f(x, Phi^{-1}(x, phi)) + shift(x, phi)
/// (every transform used here is of that affine-in-f shape).  Coordinate
/// expressions use the variable names x, t, u in whichever chart they live:
/// forward maps read source-chart variables, inverse maps read image-chart
/// variables, except inv_u which is an expression in (source x, image u).
struct TransformStage {
    std::string name;

    Expr fwd_x;  // in x
    Expr fwd_t;  // in t
    Expr fwd_u;  // in (x, u), affine in u

    Expr inv_x;  // in x (meaning xbar)
    Expr inv_t;  // in t (meaning tau)
    Expr inv_u;  // in (x, u) with x the source coordinate and u the image value

    Expr src_mult;   // in x (source chart)
    Expr src_shift;  // in (x, u) with u the image dependent variable

    Params domain_params;
    Params image_params;
};

struct Point {
    double x;
    double t;
    double u;
};

/// Composable chain of stages.  Point maps compose lazily (stage by stage,
/// so a domain error is reported at the offending junction); the parameter
/// map of the full chain is cached eagerly.
class Transform {
public:
    Transform() = default;
    explicit Transform(TransformStage stage);

    static Transform compose(const std::vector<Transform>& chain);

    const std::vector<TransformStage>& stages() const { return stages_; }
    const Params& domain_params() const { return stages_.front().domain_params; }
    const Params& image_params() const { return stages_.back().image_params; }
    bool empty() const { return stages_.empty(); }

    Point push_point(const Point& p) const;
    Point pull_point(const Point& p) const;

    /// Composed coordinate maps as single expressions (forward: X, Psi, Phi).
    Expr forward_x() const;
    Expr forward_t() const;
    Expr forward_u() const; // in (x, u)
    Expr inverse_x() const;
    Expr inverse_t() const;

    /// Transport a solution u(x,t) into the image chart: phi(xbar,tau) such
    /// that phi = Phi(x, u(x,t)) under the point map.  Variables keep the
    /// names x and t in the new chart.
    Expr push_solution(const Expr& u_xt) const;

    /// Inverse transport: given phi(xbar,tau), the pre-image u(x,t).
    Expr pull_solution(const Expr& phi) const;

    /// Image source term (the printed f-tilde/f-hat/f-bar rules applied in
    /// sequence), as an Expr in the image chart's (x, u).
    Expr map_source(const Expr& f) const;

    /// Pre-image source: the f whose image under this chain is fbar.
    Expr unmap_source(const Expr& fbar) const;

private:
    std::vector<TransformStage> stages_;
};

/// Equation-(7)-style rescaling onto the unit-diffusion form; returns the
/// transform and the tilde parameters.
std::pair<Transform, Params> trivial(const Params& p);

/// Case multiplier u-rescaling that zeroes (alpha, beta, lambda); expects
/// tilde-form parameters and tag == classify(p_tilde).
std::pair<Transform, Params> zeroing(const Params& p_tilde, CaseTag tag);

/// Map onto the heat-with-source chart: power map for Generic/DeltaChain,
/// log map for gamma = 1, the printed sqrt map for gamma = 1/2.  Expects the
/// drift-free parameters produced by zeroing().
std::pair<Transform, Params> gamma_zero(const Params& p_hat, CaseTag tag);

/// The generic power-map form evaluated at an arbitrary gamma (used to
/// cross-check the printed gamma = 1/2 specialisation).
std::pair<Transform, Params> gamma_zero_power_form(const Params& p_hat);

/// Full chain trivial -> zeroing -> gamma_zero for the parameters' case.
Transform reduction_chain(const Params& p);

/// Element of the continuous equivalence group of the drift-free equation.
struct EquivalenceGroupElement {
    double zeta0 = 0.0;
    double zeta1 = 1.0; // != 0
    double zeta2 = 1.0; // != 0
    Expr F;             // arbitrary function of x; null means 0
};

/// The printed one-parameter family; needs the drift-free parameters for the
/// gamma entering its source rule.
Transform group_element(const EquivalenceGroupElement& e, const Params& p_hat);

} // namespace bondsym
