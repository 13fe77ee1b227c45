#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "teamsem/element.hpp"

namespace teamsem {

using Var = std::string;
using VarSet = std::set<Var>;

struct TeamError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A variable assignment, total on its domain. The empty assignment is legal.
class Assignment {
public:
    Assignment() = default;

    static Assignment of(std::vector<std::pair<Var, Element>> bindings);

    bool has(const Var& x) const;
    const Element& at(const Var& x) const;

    // s[a/x]: update or extend.
    Assignment with(const Var& x, const Element& a) const;
    // s restricted to the given variables (s upharpoonright V).
    Assignment restricted(const VarSet& vars) const;
    // s_{-X}: drop the given variables.
    Assignment dropped(const VarSet& vars) const;

    Tuple tuple(const std::vector<Var>& vars) const;
    VarSet domain() const;
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }

    const std::vector<std::pair<Var, Element>>& items() const { return items_; }

    auto operator<=>(const Assignment&) const = default;

    std::string str() const;

private:
    // Sorted by variable name.
    std::vector<std::pair<Var, Element>> items_;
};

// A set of assignments sharing a variable domain. The empty team carries an
// explicit domain chosen at construction (the team {} and the team {{}} are
// distinct values); semantics never depends on the empty team's domain.
class Team {
public:
    explicit Team(VarSet vardom) : vardom_(std::move(vardom)) {}
    Team(VarSet vardom, std::set<Assignment> rows);

    // The team {∅} containing only the empty assignment.
    static Team singleton_empty();

    const VarSet& vardom() const { return vardom_; }
    const std::set<Assignment>& rows() const { return rows_; }
    bool empty() const { return rows_.empty(); }
    std::size_t size() const { return rows_.size(); }
    bool contains(const Assignment& s) const { return rows_.count(s) > 0; }

    void insert(Assignment s);

    auto operator<=>(const Team&) const = default;

    std::string str() const;

private:
    VarSet vardom_;
    std::set<Assignment> rows_;
};

// U[f/x] for f mapping each row to a set of elements. With require_nonempty
// (the lax-existential contract) an empty per-row set is an error.
Team extend_team(const Team& team, const Var& x,
                 const std::function<std::set<Element>(const Assignment&)>& choice,
                 bool require_nonempty);

// U[T/x]: the constant form.
Team extend_team_constant(const Team& team, const Var& x, const std::set<Element>& values,
                          bool require_nonempty);

// Rel(U, (x1,...,xk)). Empty for the empty team.
TupleSet rel_projection(const Team& team, const std::vector<Var>& tuple);

// The maximal nonempty subteams whose rows agree on `ys`, keyed by the shared
// value tuple. An empty `ys` yields one group equal to the whole team (when
// nonempty); the empty team yields no groups.
std::vector<std::pair<Tuple, Team>> group_by(const Team& team, const std::vector<Var>& ys);

// U restricted to a variable subset.
Team restrict_team(const Team& team, const VarSet& vars);

// ---------------------------------------------------------------------------
// Text format
//
//   team { vars: x y
//          row: 0 1
//          row: 1 1 }

Team parse_team(std::string_view text);
std::string render_team(const Team& team);

}  // namespace teamsem
