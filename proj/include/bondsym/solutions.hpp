#pragma once

#include "bondsym/expr.hpp"
#include "bondsym/model.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bondsym {

enum class CaseId {
    TGeneric,
    TGammaOne,
    TGammaHalf,
    TDeltaChain,
    BGeneric,
    BGammaOne,
    BGammaHalf,
    BDeltaChain,
};

std::vector<CaseId> all_case_ids();
std::string to_string(CaseId id);
CaseId case_id_from_string(const std::string& s);
bool is_barrier_case(CaseId id);

struct TerminalSpec {
    double T = 1.0;
    Expr value; // in x; identically 1 for the vanilla bond condition
};

struct BarrierSpec {
    Expr H;         // in t
    Expr R;         // in t (boundary value along the barrier)
    double a = 0.0; // decay rate of the exponential family, >= 0
    double b = 0.5; // in [0, 1]
    double K = 1.0; // > 0
    double T = 1.0;
};

struct Generator {
    Expr xi1; // coefficient of d/d(space)
    Expr xi2; // coefficient of d/d(time)
    Expr eta; // coefficient of d/d(dependent)
    std::string frame;
};

struct GeneratorSet {
    std::vector<Generator> generators;
    std::string frame; // "transformed" or "printed-ambiguous"
    std::string algebra;
};

/// Rectangular sampling window with an exclusion predicate for the case's
/// singular loci.
struct SampleRegion {
    double x_lo, x_hi, t_lo, t_hi;
    std::function<bool(double x, double t)> excluded; // may be null
    std::string excluded_description;

    bool contains(double x, double t) const {
        if (x < x_lo || x > x_hi || t < t_lo || t > t_hi) return false;
        return !(excluded && excluded(x, t));
    }
};

/// One catalogued similarity solution with everything needed to verify it.
struct ClosedFormCase {
    CaseId id;
    Params params;                          // defaults satisfying the constraints
    std::map<std::string, double> constants; // the case's free constants
    Expr solution;                           // in (x,t), parameters baked
    Expr source;                             // in (x,u), parameters baked
    std::optional<TerminalSpec> terminal;
    std::optional<BarrierSpec> barrier;
    GeneratorSet generators;
    SampleRegion region;
    std::string constraint_summary;
    bool terminal_value_asserted = true; // false for the exempt gamma=1 case

    double maturity() const;
};

const ClosedFormCase& get_case(CaseId id);

/// Printed barrier function of the case, in the exponential family of the
/// barrier condition; throws for terminal cases.
Expr barrier_H(CaseId id, double a, double b, double K, double T, const Params& p);

/// R(t) = solution(H(t), t) as a composed expression.
Expr induced_R(const ClosedFormCase& c);

/// Empty iff every printed constraint holds within 1e-12.
std::vector<std::string> validate_constraints(CaseId id, const Params& p,
                                              const std::map<std::string, double>& constants);

} // namespace bondsym
