// Acceptance gate: eight end-to-end criteria, one PASS/FAIL line each.
// Exits nonzero if any criterion fails.

#include "bondsym/cli.hpp"
#include "bondsym/fdsolver.hpp"
#include "bondsym/solutions.hpp"
#include "bondsym/verify.hpp"

#include "test_util.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

using namespace bondsym;

namespace {

int g_failures = 0;

void report(int criterion, const char* title, bool pass, const std::string& detail,
            double seconds) {
    std::printf("%s: criterion %d — %s (%s, %.1f s)\n", pass ? "PASS" : "FAIL", criterion,
                title, detail.c_str(), seconds);
    if (!pass) ++g_failures;
}

double now() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

std::string tmp_report(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

/// Run a `verify` suite through the CLI entry point, reporting to a scratch
/// file, and return whether every check in the suite passed.
bool run_suite(const char* suite, const char* out_name, double* elapsed,
               const char* tol = nullptr) {
    std::string out = tmp_report(out_name);
    std::vector<const char*> argv{"bondsym", "verify", "--suite", suite,
                                  "--seed", "7", "--out", out.c_str()};
    if (tol) {
        argv.push_back("--tol");
        argv.push_back(tol);
    }
    double t0 = now();
    int rc = cli::run(int(argv.size()), argv.data());
    *elapsed = now() - t0;
    return rc == 0;
}

std::string fmt_max(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "max %.2e", v);
    return buf;
}

void criterion_1() {
    double dt = 0.0;
    bool ok = run_suite("catalog-residuals", "acceptance_c1.jsonl", &dt, "1e-8");
    ok = ok && dt < 10.0;
    report(1, "catalog residual sweep, 8 cases, 200 points at 1e-8", ok,
           ok ? "all records pass" : "see JSONL report", dt);
}

void criterion_2() {
    double dt = 0.0;
    bool ok = run_suite("terminal", "acceptance_c2.jsonl", &dt, "1e-12");
    report(2, "terminal condition u(x,T) = 1 at 1e-12, 50 samples", ok,
           "T-Generic, T-GammaHalf, T-DeltaChain", dt);
}

void criterion_3() {
    double t0 = now();
    bool ok = true;
    double worst_heat = 0.0, worst_rt = 0.0;
    for (CaseId id :
         {CaseId::TGeneric, CaseId::TGammaOne, CaseId::TGammaHalf, CaseId::TDeltaChain}) {
        auto rep = chain_transport_check(get_case(id), 100, 1e-7, 1e-12, 7);
        ok = ok && rep.heat.pass && rep.roundtrip.pass;
        worst_heat = std::max(worst_heat, rep.heat.max_abs);
        worst_rt = std::max(worst_rt, rep.roundtrip.max_abs);
    }
    report(3, "chain transport: heat-chart residual 1e-7, round trip 1e-12", ok,
           fmt_max(worst_heat) + " heat, " + fmt_max(worst_rt) + " round trip", now() - t0);
}

void criterion_4() {
    double dt = 0.0;
    bool ok = run_suite("special-cases", "acceptance_c4.jsonl", &dt, "1e-12");
    report(4, "one-parameter family vs power map; printed gamma=1/2 map vs generic", ok,
           "pointwise to 1e-12", dt);
}

void criterion_5() {
    double dt = 0.0;
    bool ok = run_suite("barrier", "acceptance_c5.jsonl", &dt, "1e-12");
    report(5, "barrier family, boundary values, B-GammaOne generator combination", ok,
           "log-collinearity and values at 1e-12, combination at 1e-8", dt);
}

void criterion_6() {
    double dt = 0.0;
    bool ok = run_suite("flow", "acceptance_c6.jsonl", &dt);
    ok = ok && dt < 60.0;
    report(6, "generator flows: translation 1e-6, scaling 1e-4, negative control", ok,
           "heat chart of T-GammaOne", dt);
}

void criterion_7() {
    double t0 = now();
    bool ok = true;
    std::string detail;

    // Constant Black-Scholes-Merton solution on a log grid.
    {
        PdeProblem prob = classical_reduction(ClassicalModel::BSM, 0.05, 0.2);
        Grid grid = Grid::log_uniform(0.5, 2.0, 60, 0.0, 1.0, 60);
        Surface s = solve_terminal(prob, grid, Expr::constant(1.0));
        Compiled exact(parse("exp(0.05*(t - 1))"), {"x", "t"});
        double err = 0.0;
        for (std::size_t n = 0; n < grid.nt(); ++n)
            for (std::size_t i = 0; i < grid.nx(); ++i)
                err = std::max(err,
                               std::fabs(s.at(i, n) - exact({grid.x_nodes[i], grid.t_nodes[n]})));
        ok = ok && err < 1e-8;
        detail += "BSM " + fmt_max(err);
    }

    // Observed order for the gamma = 1/2 closed form over three doublings.
    {
        const auto& cs = get_case(CaseId::TGammaHalf);
        PdeProblem prob(cs.params, cs.source);
        SolverConfig cfg;
        cfg.far_field = FarFieldRule::Dirichlet;
        cfg.far_field_value = cs.solution;
        double T = cs.terminal->T;
        double slope = convergence_order(prob, cs.solution, 0.25, 4.0, T / 2.0, T,
                                         {{50, 50}, {100, 100}, {200, 200}}, cfg);
        ok = ok && std::fabs(slope - 2.0) <= 0.3;
        char buf[48];
        std::snprintf(buf, sizeof buf, ", order %.2f", slope);
        detail += buf;
    }

    // Moving-barrier solve against the B-Generic closed form.
    {
        const auto& cs = get_case(CaseId::BGeneric);
        PdeProblem prob(cs.params, cs.source);
        const BarrierSpec& spec = *cs.barrier;
        SolverConfig cfg;
        cfg.far_field = FarFieldRule::Dirichlet;
        cfg.far_field_value = cs.solution;
        Grid grid = Grid::uniform(0.5, 2.5, 200, 0.5, spec.T, 200);
        Expr payoff = substitute(cs.solution, "t", Expr::constant(spec.T));
        Surface front;
        Surface s = solve_barrier(prob, grid, spec, payoff, cfg, &front);
        Compiled exact(cs.solution, {"x", "t"});
        double err = 0.0;
        for (std::size_t n = 0; n < grid.nt(); ++n)
            for (std::size_t i = 0; i < grid.nx(); ++i) {
                if (!s.valid(i, n)) continue;
                err = std::max(err,
                               std::fabs(s.at(i, n) - exact({grid.x_nodes[i], grid.t_nodes[n]})));
            }
        double boundary = 0.0;
        for (std::size_t n = 0; n + 1 < front.grid.nt(); ++n)
            boundary = std::max(boundary, std::fabs(front.at(0, n) -
                                                    eval(spec.R, {{"t", front.grid.t_nodes[n]}})));
        ok = ok && err < 1e-3 && boundary < 1e-14;
        detail += ", barrier " + fmt_max(err);
    }

    double dt = now() - t0;
    ok = ok && dt < 120.0;
    report(7, "finite-difference validation against closed forms", ok, detail, dt);
}

void criterion_8() {
    double t0 = now();
    auto run_once = [] {
        std::mt19937 rng(2026);
        auto samples = testutil::derivative_samples(rng, 100);
        return testutil::worst_derivative_deviation(samples);
    };
    double worst = run_once();
    bool deterministic = run_once() == worst;
    bool ok = worst < 1e-5 && deterministic;
    report(8, "symbolic vs finite-difference derivatives, 100 random expressions", ok,
           fmt_max(worst) + (deterministic ? ", deterministic" : ", NON-DETERMINISTIC"),
           now() - t0);
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    return g_failures == 0 ? 0 : 1;
}
