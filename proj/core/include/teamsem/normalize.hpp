#pragma once

#include <map>
#include <vector>

#include "teamsem/formula.hpp"

namespace teamsem {

// Negation-normal-form conversion for FO(Q) formulas with arbitrary Not
// nodes. Uses double-negation elimination, De Morgan, the quantifier dualities
// ~Ex/~Ax, and ~Qx phi ~> Q^d x ~phi. A team atom or I operator under an odd
// number of negations is an error.
FormulaPtr to_nnf(const FormulaPtr& f);

// Renames bound variables so that no free variable is also bound and no
// quantifier for x lies in the scope of another quantifier for x. Fresh names
// append the smallest unused numeric suffix to the original name. The result
// is team-semantics equivalent to the input.
FormulaPtr make_clean(const FormulaPtr& f);

// True when `f` already satisfies both clean-form conditions.
bool is_clean(const FormulaPtr& f);

// Per-position scope facts.
struct PositionInfo {
    // Variables x such that the position is in the scope of Ex, Ax, Qx or Ix,
    // outermost first, deduplicated.
    std::vector<Var> superordinate;
    // True when some disjunction lies strictly above the position.
    bool under_disjunction = false;
};

struct ScopeInfo {
    // Keyed by node identity; valid while the analyzed tree is alive.
    std::map<const Formula*, PositionInfo> at;

    const PositionInfo& of(const Formula& f) const;
};

ScopeInfo scope_info(const FormulaPtr& root);

// Replaces every negated dependence atom of a permissive parse with the
// formula E x (~x=x), which holds exactly on the empty team. Other Not nodes
// are left for to_nnf.
FormulaPtr rewrite_negated_dep_atoms(const FormulaPtr& f);

}  // namespace teamsem
