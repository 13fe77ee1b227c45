#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "teamsem/model.hpp"
#include "teamsem/team.hpp"

namespace teamsem {

struct QuantifierError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A generalized quantifier of type (i1,...,in), given extensionally by a
// membership predicate evaluated per finite domain: Q^A contains exactly the
// relation vectors the predicate accepts. Membership must depend only on the
// pattern of the relations relative to the domain (isomorphism closure is
// property-tested on the built-ins, not enforced).
struct Quantifier {
    enum class Derivation { base, prime, dual };

    std::string name;
    std::vector<int> type;  // (i1,...,in), each >= 1
    std::function<bool(const std::vector<Element>& domain, const std::vector<TupleSet>& rels)>
        member;
    Derivation derivation = Derivation::base;
    std::string derived_from;

    // Known closure facts, used only to narrow searches; absent means unknown.
    std::optional<bool> monotone_up;
    std::optional<bool> downward_closed;

    bool is_type1() const { return type.size() == 1 && type[0] == 1; }
};

enum class DeriveMode { prime, dual };

// Q' (complement) and Q^d (dual) of a type-(1) quantifier:
//   prime: member'(A,B) =  member(A, A\B)
//   dual:  member^d(A,B) = !member(A, A\B)
Quantifier derive(const Quantifier& q, DeriveMode mode);

// Membership of (rels) in Q^A. Errors on an empty domain or on a relation
// vector that does not match the quantifier's type.
bool q_member(const Quantifier& q, const std::vector<Element>& domain,
              const std::vector<TupleSet>& rels);

// Type-(1) convenience: B as a set of elements.
bool q_member1(const Quantifier& q, const std::vector<Element>& domain,
               const std::set<Element>& b);

// Q^A for a type-(1) quantifier, ordered by (size, lexicographic).
std::vector<std::set<Element>> materialize_q1(const Quantifier& q,
                                              const std::vector<Element>& domain);

// Monotonicity check by exhausting all domains of size 1..max_size over base
// elements and all pairs A subseteq B. Bounded, so a "true" is evidence, not
// proof, for quantifiers that are not known monotone by construction.
bool check_monotone(const Quantifier& q, int max_size);

// The k-atom induced by a type-(1) quantifier: for every maximal nonempty
// subteam whose rows agree on ys, the x-projection lies in Q^A. Vacuously
// true on the empty team.
bool induced_atom_holds(const Quantifier& q, const std::vector<Var>& ys, const Var& x,
                        const Model& model, const Team& team);

// A_Q(t1,...,tn): (Rel(U,t1),...,Rel(U,tn)) in Q^A.
bool general_atom_holds(const Quantifier& q, const std::vector<std::vector<Var>>& tuples,
                        const Model& model, const Team& team);

// Name-indexed quantifier store. Ships exists, forall, majority, atleast<k>
// and dep<k>; names with a _prime or _dual suffix resolve to the derived
// quantifier of the base name. Lookups are cached; predicates must be pure.
class QuantifierRegistry {
public:
    QuantifierRegistry();

    const Quantifier& get(const std::string& name) const;
    bool known(const std::string& name) const;

    void register_quantifier(Quantifier q);

    // Registry config: a JSON array of {"name", "builtin", "k"?} entries with
    // builtin one of exists | forall | majority | atleast | dep.
    void load_config_json(const std::string& json_text);

    // Base built-in names (derived and parameterized names resolve on demand).
    std::vector<std::string> base_names() const;

private:
    const Quantifier* resolve(const std::string& name) const;

    mutable std::mutex mutex_;
    mutable std::map<std::string, std::unique_ptr<Quantifier>> table_;
};

// Built-in constructors.
Quantifier q_exists();
Quantifier q_forall();
Quantifier q_majority();          // |B| > |A|/2
Quantifier q_atleast(int k);      // |B| >= k
Quantifier q_dep(int k);          // D_k, type (k): functional in the last coordinate

}  // namespace teamsem
