#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "teamsem/formula.hpp"
#include "teamsem/model.hpp"
#include "teamsem/quantifier.hpp"
#include "teamsem/team.hpp"

namespace teamsem {

// Three-valued result. Unknown arises only from the budget-bounded I
// operator: a non-true answer for Ix means "no witness within budget", never
// a refutation. False is always definite.
enum class Truth { False = 0, Unknown = 1, True = 2 };

inline Truth truth_of(bool b) { return b ? Truth::True : Truth::False; }
inline Truth truth_and(Truth a, Truth b) { return a < b ? a : b; }
inline Truth truth_max(Truth a, Truth b) { return a < b ? b : a; }
std::string truth_str(Truth t);

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Search caps; exceeding one raises CapExceeded, which callers must report
// separately from a definite false.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SearchCaps {
    std::size_t max_team_rows = 4096;
    std::size_t max_domain = 16;
};

struct EvalConfig {
    // Max |S| tried per I occurrence; budget 0 treats I-subformulas as false.
    std::size_t bloat_budget = 2;
    bool memo = true;
    // Evaluate team-atom-free, I-free subformulas pointwise.
    bool flat_fast_path = true;
    // Row-level pruning of covers and witness extensions by the flat
    // relaxation of the subformula (team atoms and I read as true).
    bool relax_pruning = true;
    // Narrow searches using known downward-closure facts.
    bool dc_narrowing = true;
    SearchCaps caps;
};

// Tarskian satisfaction for FO(Q): no team atoms, no I. Not nodes are
// accepted (the pre-NNF check in to_nnf tests rely on them).
bool eval_tarski(const Model& model, const Assignment& s, const Formula& formula,
                 const QuantifierRegistry& registry);

// Lax team semantics for the full logic family. When `trace` is non-null the
// evaluator records the winning cover / witness function / bloat size per
// search node on the successful path (memoization is disabled for the call).
Truth eval_team(const Model& model, const Team& team, const Formula& formula,
                const QuantifierRegistry& registry, const EvalConfig& cfg = {},
                std::vector<std::string>* trace = nullptr);

// True when the formula contains no team atom and no I operator. Such
// formulas are flat: team satisfaction is pointwise Tarskian satisfaction.
bool is_flat(const Formula& formula);

}  // namespace teamsem
