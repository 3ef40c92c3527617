#include "bondsym/transforms.hpp"

#include <cmath>
#include <stdexcept>

namespace bondsym {

namespace {

Expr kc(double v) { return Expr::constant(v); }
Expr vx() { return Expr::variable("x"); }
Expr vt() { return Expr::variable("t"); }
Expr vu() { return Expr::variable("u"); }
Expr xpow(double e) { return Expr::pow(vx(), kc(e)); }

const std::vector<std::string> kParamNames{"alpha", "beta", "gamma", "delta", "lambda", "rho"};

/// Parse a coefficient template and bake the parameter values in.  Zero
/// coefficients fold multiplicatively, which also removes the 0/0 terms the
/// printed multipliers develop when a vanishing parameter sits over a
/// vanishing case denominator (e.g. lambda = 0 with delta = 0 in A3).
Expr tpl(const char* text, const Params& p) {
    Expr e = parse(text, kParamNames);
    for (const auto& [name, value] : p.bindings()) e = substitute(e, name, kc(value));
    return e;
}

void require_driftfree(const Params& p, const char* who) {
    if (p.alpha != 0.0 || p.beta != 0.0 || p.lambda != 0.0)
        throw std::invalid_argument(std::string(who) +
                                    " expects drift-free parameters (alpha=beta=lambda=0)");
}

bool params_close(const Params& a, const Params& b) {
    auto near = [](double u, double v) { return std::fabs(u - v) <= 1e-9; };
    return near(a.alpha, b.alpha) && near(a.beta, b.beta) && near(a.gamma, b.gamma) &&
           near(a.delta, b.delta) && near(a.lambda, b.lambda) && near(a.rho, b.rho);
}

} // namespace

Transform::Transform(TransformStage stage) { stages_.push_back(std::move(stage)); }

Transform Transform::compose(const std::vector<Transform>& chain) {
    Transform out;
    for (const Transform& t : chain) {
        for (const TransformStage& st : t.stages_) {
            if (!out.stages_.empty() &&
                !params_close(out.stages_.back().image_params, st.domain_params))
                throw std::invalid_argument("incompatible transform junction: " +
                                            out.stages_.back().name + " -> " + st.name);
            out.stages_.push_back(st);
        }
    }
    if (out.stages_.empty()) throw std::invalid_argument("cannot compose an empty chain");
    return out;
}

Point Transform::push_point(const Point& p) const {
    Point q = p;
    for (const TransformStage& st : stages_) {
        double xs = eval(st.fwd_x, {{"x", q.x}});
        double ts = eval(st.fwd_t, {{"t", q.t}});
        double us = eval(st.fwd_u, {{"x", q.x}, {"u", q.u}});
        q = {xs, ts, us};
    }
    return q;
}

Point Transform::pull_point(const Point& p) const {
    Point q = p;
    for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
        double xs = eval(it->inv_x, {{"x", q.x}});
        double ts = eval(it->inv_t, {{"t", q.t}});
        double us = eval(it->inv_u, {{"x", xs}, {"u", q.u}});
        q = {xs, ts, us};
    }
    return q;
}

Expr Transform::forward_x() const {
    Expr e = vx();
    for (const TransformStage& st : stages_) e = substitute(st.fwd_x, "x", e);
    return e;
}

Expr Transform::forward_t() const {
    Expr e = vt();
    for (const TransformStage& st : stages_) e = substitute(st.fwd_t, "t", e);
    return e;
}

Expr Transform::forward_u() const {
    // Phi(x, u) composed: each stage's fwd_u reads its own chart's x.
    Expr u_acc = vu();
    Expr x_acc = vx();
    for (const TransformStage& st : stages_) {
        Expr step = substitute(st.fwd_u, "u", u_acc);
        u_acc = substitute(step, "x", x_acc);
        x_acc = substitute(st.fwd_x, "x", x_acc);
    }
    return u_acc;
}

Expr Transform::inverse_x() const {
    Expr e = vx();
    for (auto it = stages_.rbegin(); it != stages_.rend(); ++it)
        e = substitute(it->inv_x, "x", e);
    return e;
}

Expr Transform::inverse_t() const {
    Expr e = vt();
    for (auto it = stages_.rbegin(); it != stages_.rend(); ++it)
        e = substitute(it->inv_t, "t", e);
    return e;
}

Expr Transform::push_solution(const Expr& u_xt) const {
    Expr u = u_xt;
    for (const TransformStage& st : stages_) {
        Expr phi = substitute(st.fwd_u, "u", u); // in source (x, t)
        phi = substitute(phi, "x", st.inv_x);
        phi = substitute(phi, "t", st.inv_t);
        u = phi;
    }
    return u;
}

Expr Transform::pull_solution(const Expr& phi) const {
    Expr u = phi;
    for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
        Expr w = substitute(u, "x", it->fwd_x); // image solution at X(x), Psi(t)
        w = substitute(w, "t", it->fwd_t);
        u = substitute(it->inv_u, "u", w); // inv_u reads source x directly
    }
    return u;
}

Expr Transform::map_source(const Expr& f) const {
    Expr g = f;
    for (const TransformStage& st : stages_) {
        Expr h = st.src_mult * substitute(g, "u", st.inv_u) + st.src_shift;
        g = substitute(h, "x", st.inv_x);
    }
    return g;
}

Expr Transform::unmap_source(const Expr& fbar) const {
    Expr g = fbar;
    for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
        Expr h = substitute(g, "x", it->fwd_x);
        h = substitute(h, "u", it->fwd_u);
        Expr s = substitute(it->src_shift, "u", it->fwd_u);
        g = (h - s) / it->src_mult;
    }
    return g;
}

// ---------------------------------------------------------------------------
// the trivial rescaling

std::pair<Transform, Params> trivial(const Params& p) {
    p.validate();
    double r2 = p.rho * p.rho;
    Params img = p;
    img.alpha = 2.0 * p.alpha / r2;
    img.beta = 2.0 * p.beta / r2;
    img.lambda = std::sqrt(2.0) / p.rho * p.lambda;

    TransformStage st;
    st.name = "trivial";
    st.fwd_x = vx();
    st.fwd_t = kc(r2 / 2.0) * vt();
    st.fwd_u = vu();
    st.inv_x = vx();
    st.inv_t = kc(2.0 / r2) * vt();
    st.inv_u = vu();
    st.src_mult = kc(2.0 / r2);
    st.src_shift = kc(0.0);
    st.domain_params = p;
    st.image_params = img;
    return {Transform(std::move(st)), img};
}

// ---------------------------------------------------------------------------
// the parameter-zeroing multipliers

namespace {

// Multiplier and source-correction coefficient, written in tilde parameters.
struct ZeroingForms {
    const char* multiplier;
    const char* correction; // coefficient of u-hat added to A * f
};

ZeroingForms zeroing_forms(CaseTag tag) {
    switch (tag) {
    case CaseTag::Generic:
        return {
            "exp((1/4)*x^(1-2*gamma)*(2*alpha/(1-2*gamma)"
            " - (2*sqrt(2)*lambda/(delta-2*gamma+1))*x^delta - (beta/(gamma-1))*x))",
            "(2*beta*x^(2*gamma+1) - 4*alpha*gamma*x^(2*gamma) - 4*beta*gamma*x^(2*gamma+1)"
            " + 2*lambda^2*x^(2*delta+1) + beta^2*x^3 + 2*alpha*beta*x^2"
            " - 2*sqrt(2)*lambda*x^delta*((delta-2*gamma)*x^(2*gamma) + x*(alpha+beta*x))"
            " + alpha^2*x) / (4*x^(2*gamma+1))"};
    case CaseTag::GammaOne:
        return {
            "x^(beta/2) * exp(-((alpha + (sqrt(2)*lambda/(delta-1))*x^delta)/(2*x)))",
            "(alpha^2 + 2*lambda^2*x^(2*delta)"
            " - 2*sqrt(2)*lambda*x^delta*(alpha + (beta+delta-2)*x)"
            " + beta^2*x^2 - 2*beta*x^2 + 2*alpha*beta*x - 4*alpha*x) / (4*x^2)"};
    case CaseTag::GammaHalf:
        return {
            "x^(alpha/2) * exp((beta/2)*x - (lambda/(sqrt(2)*delta))*x^delta)",
            "((alpha-2)*alpha + 2*lambda^2*x^(2*delta)"
            " - 2*sqrt(2)*lambda*x^delta*(alpha+delta-1+beta*x)"
            " + beta*x*(2*alpha+beta*x)) / (4*x)"};
    case CaseTag::DeltaChain:
        return {
            "x^(-(lambda/sqrt(2)))"
            " * exp(-((1/4)*x^(1-2*gamma)*(2*alpha/(2*gamma-1) + beta*x/(gamma-1))))",
            "(2*lambda*(lambda+sqrt(2))*x^(4*gamma) + x^2*(alpha+beta*x)^2"
            " - 2*x^(2*gamma+1)*(alpha*(2*gamma+sqrt(2)*lambda)"
            " + beta*(2*gamma+sqrt(2)*lambda-1)*x)) / (4*x^(2*gamma+2))"};
    }
    throw std::invalid_argument("unknown case tag");
}

} // namespace

std::pair<Transform, Params> zeroing(const Params& p_tilde, CaseTag tag) {
    if (classify(p_tilde) != tag)
        throw std::invalid_argument("zeroing: case tag does not match classify(params)");
    ZeroingForms forms = zeroing_forms(tag);
    Expr A = tpl(forms.multiplier, p_tilde);
    Expr corr = tpl(forms.correction, p_tilde);

    Params img = p_tilde;
    img.alpha = img.beta = img.lambda = 0.0;

    TransformStage st;
    st.name = "zeroing-" + to_string(tag);
    st.fwd_x = vx();
    st.fwd_t = vt();
    st.fwd_u = A * vu();
    st.inv_x = vx();
    st.inv_t = vt();
    st.inv_u = vu() / A;
    st.src_mult = A;
    st.src_shift = corr * vu();
    st.domain_params = p_tilde;
    st.image_params = img;
    return {Transform(std::move(st)), img};
}

// ---------------------------------------------------------------------------
// the gamma-zeroing maps (discrete time flip folded in, as printed)

std::pair<Transform, Params> gamma_zero_power_form(const Params& p_hat) {
    require_driftfree(p_hat, "gamma_zero");
    double g = p_hat.gamma;
    if (g == 1.0) throw std::invalid_argument("power map is singular at gamma=1; use the log map");
    double gm1sq = (g - 1.0) * (g - 1.0);

    Params img = p_hat;
    img.gamma = 0.0;

    TransformStage st;
    st.name = "gamma-zero-power";
    st.fwd_x = xpow(1.0 - g);
    st.fwd_t = kc(-gm1sq) * vt();
    st.fwd_u = xpow(-g / 2.0) * vu();
    st.inv_x = xpow(1.0 / (1.0 - g));
    st.inv_t = kc(-1.0 / gm1sq) * vt();
    st.inv_u = xpow(g / 2.0) * vu();
    st.src_mult = kc(-1.0 / gm1sq) * xpow(-g / 2.0);
    st.src_shift = kc(-g * (2.0 - g) / (4.0 * gm1sq)) * xpow(2.0 * g - 2.0) * vu();
    st.domain_params = p_hat;
    st.image_params = img;
    return {Transform(std::move(st)), img};
}

std::pair<Transform, Params> gamma_zero(const Params& p_hat, CaseTag tag) {
    require_driftfree(p_hat, "gamma_zero");
    Params img = p_hat;
    img.gamma = 0.0;

    if (tag == CaseTag::GammaOne) {
        TransformStage st;
        st.name = "gamma-zero-log";
        st.fwd_x = Expr::log(vx());
        st.fwd_t = -vt();
        st.fwd_u = xpow(-0.5) * vu();
        st.inv_x = Expr::exp(vx());
        st.inv_t = -vt();
        st.inv_u = xpow(0.5) * vu();
        st.src_mult = -xpow(-0.5);
        st.src_shift = kc(-0.25) * vu();
        st.domain_params = p_hat;
        st.image_params = img;
        return {Transform(std::move(st)), img};
    }
    if (tag == CaseTag::GammaHalf) {
        // the gamma = 1/2 specialisation of the power map, in square-root form
        TransformStage st;
        st.name = "gamma-zero-sqrt";
        st.fwd_x = Expr::sqrt(vx());
        st.fwd_t = kc(-0.25) * vt();
        st.fwd_u = xpow(-0.25) * vu();
        st.inv_x = xpow(2.0);
        st.inv_t = kc(-4.0) * vt();
        st.inv_u = xpow(0.25) * vu();
        st.src_mult = kc(-4.0) * xpow(-0.25);
        st.src_shift = kc(-0.75) * xpow(-1.0) * vu();
        st.domain_params = p_hat;
        st.image_params = img;
        return {Transform(std::move(st)), img};
    }
    return gamma_zero_power_form(p_hat);
}

Transform reduction_chain(const Params& p) {
    CaseTag tag = classify(p);
    auto [t1, p_tilde] = trivial(p);
    auto [t2, p_hat] = zeroing(p_tilde, tag);
    auto [t3, p_bar] = gamma_zero(p_hat, tag);
    return Transform::compose({t1, t2, t3});
}

// ---------------------------------------------------------------------------
// the continuous equivalence group of the drift-free equation

Transform group_element(const EquivalenceGroupElement& e, const Params& p_hat) {
    if (e.zeta1 == 0.0 || e.zeta2 == 0.0)
        throw std::invalid_argument("group element requires zeta1*zeta2 != 0");
    require_driftfree(p_hat, "group_element");

    double g = p_hat.gamma;
    double z2sq = e.zeta2 * e.zeta2;
    double z2q = z2sq * z2sq;
    double s = 1.0 / z2sq;
    Expr F = e.F ? e.F : kc(0.0);
    Expr Fpp = differentiate(differentiate(F, "x"), "x");

    Params img = p_hat;
    img.gamma = 1.0 + z2sq * (g - 1.0);

    TransformStage st;
    st.name = "group-element";
    st.fwd_x = xpow(s);
    st.fwd_t = kc(e.zeta0) + kc(1.0 / z2q) * vt();
    st.fwd_u = xpow((s - 1.0) / 2.0) * (kc(e.zeta1) * vu() + F);
    st.inv_x = xpow(z2sq);
    st.inv_t = kc(z2q) * (vt() - kc(e.zeta0));
    st.inv_u = (xpow(-(s - 1.0) / 2.0) * vu() - F) / kc(e.zeta1);
    st.src_mult = kc(e.zeta1 * z2q) * xpow((s - 1.0) / 2.0);
    st.src_shift = kc((z2q - 1.0) / 4.0) * xpow(2.0 * g - 2.0) * vu() +
                   kc(z2q) * xpow(2.0 * g + (s - 1.0) / 2.0) * Fpp;
    st.domain_params = p_hat;
    st.image_params = img;
    return Transform(std::move(st));
}

} // namespace bondsym
