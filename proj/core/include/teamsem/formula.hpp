#pragma once

#include <functional>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "teamsem/team.hpp"

namespace teamsem {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct FormulaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Atomic first-order part of a literal: a relation application or equality.
struct RelAtom {
    std::string symbol;
    std::vector<Var> args;
};
struct EqAtom {
    Var lhs, rhs;
};

struct Literal {
    bool positive;
    std::variant<RelAtom, EqAtom> atom;
};
struct And {
    FormulaPtr left, right;
};
struct Or {
    FormulaPtr left, right;
};
// Pre-NNF negation; appears only in permissive parses and is eliminated by
// to_nnf. Team atoms never occur under it with odd parity.
struct Not {
    FormulaPtr body;
};
struct Exists {
    Var var;
    FormulaPtr body;
};
struct Forall {
    Var var;
    FormulaPtr body;
};
// Qx / Q^d x for a registered type-(1) quantifier.
struct GenQuant {
    std::string name;
    bool dualized;
    Var var;
    FormulaPtr body;
};
// The domain-extension operator Ix.
struct IOp {
    Var var;
    FormulaPtr body;
};
// =(x1,...,xk), k >= 1.
struct DepAtom {
    std::vector<Var> vars;
};
// x1,...,xk subseteq y1,...,yk (equal lengths).
struct InclusionAtom {
    std::vector<Var> left, right;
};
// x1,...,xk | y1,...,yk (equal lengths).
struct ExclusionAtom {
    std::vector<Var> left, right;
};
// xs perp_{cond} ys; empty cond is pure independence.
struct IndepAtom {
    std::vector<Var> xs, cond, ys;
};
// The k-atom induced by a type-(1) quantifier: groups by ys, tests the
// x-projection of each group.
struct InducedAtom {
    std::string name;
    std::vector<Var> ys;
    Var x;
};
// A_Q(t1,...,tn) for a quantifier of type (i1,...,in).
struct GeneralAtom {
    std::string name;
    std::vector<std::vector<Var>> tuples;
};

using FormulaNode = std::variant<Literal, And, Or, Not, Exists, Forall, GenQuant, IOp, DepAtom,
                                 InclusionAtom, ExclusionAtom, IndepAtom, InducedAtom, GeneralAtom>;

struct Formula {
    FormulaNode node;

    template <typename T>
    const T* as() const {
        return std::get_if<T>(&node);
    }
    template <typename T>
    bool is() const {
        return std::holds_alternative<T>(node);
    }
};

// Builders. All constructors validate shape invariants (nonempty variable
// lists, equal tuple lengths) and always allocate a fresh node, so every
// built formula is internally a tree.
FormulaPtr rel(std::string symbol, std::vector<Var> args, bool positive = true);
FormulaPtr eq(Var lhs, Var rhs, bool positive = true);
FormulaPtr conj(FormulaPtr left, FormulaPtr right);
FormulaPtr disj(FormulaPtr left, FormulaPtr right);
FormulaPtr lnot(FormulaPtr body);
FormulaPtr exists(Var var, FormulaPtr body);
FormulaPtr forall(Var var, FormulaPtr body);
FormulaPtr quant(std::string name, bool dualized, Var var, FormulaPtr body);
FormulaPtr iop(Var var, FormulaPtr body);
FormulaPtr dep(std::vector<Var> vars);
FormulaPtr incl(std::vector<Var> left, std::vector<Var> right);
FormulaPtr excl(std::vector<Var> left, std::vector<Var> right);
FormulaPtr indep(std::vector<Var> xs, std::vector<Var> cond, std::vector<Var> ys);
FormulaPtr induced(std::string name, std::vector<Var> ys, Var x);
FormulaPtr gatom(std::string name, std::vector<std::vector<Var>> tuples);

// Right-nested conjunction of two or more formulas.
FormulaPtr conj_all(std::vector<FormulaPtr> parts);

// Deep structural equality.
bool struct_eq(const Formula& a, const Formula& b);
inline bool struct_eq(const FormulaPtr& a, const FormulaPtr& b) { return struct_eq(*a, *b); }

// Concrete syntax (the grammar accepted by parse_formula).
std::string render(const Formula& f);
inline std::string render(const FormulaPtr& f) { return render(*f); }

// Free variables; variables in team atoms count as free occurrences.
VarSet free_vars(const Formula& f);
inline VarSet free_vars(const FormulaPtr& f) { return free_vars(*f); }

// All variables occurring anywhere (free, bound, or binder positions).
VarSet all_vars(const Formula& f);

// All relation symbols applied in literals.
std::set<std::string> relation_symbols(const Formula& f);

// True when the formula contains no Not node.
bool is_nnf(const Formula& f);

// True when the formula contains a team atom (dependence, inclusion,
// exclusion, independence, induced, general) or the I operator.
bool has_team_constructs(const Formula& f);

// Walks every subformula, outermost first.
void for_each_node(const Formula& f, const std::function<void(const Formula&)>& visit);

}  // namespace teamsem
