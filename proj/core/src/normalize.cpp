#include "teamsem/normalize.hpp"

#include <algorithm>

namespace teamsem {

namespace {

FormulaPtr nnf(const FormulaPtr& f, bool negated) {
    return std::visit(
        [&](const auto& n) -> FormulaPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Literal>) {
                if (!negated) return f;
                Literal flipped{!n.positive, n.atom};
                return std::make_shared<const Formula>(Formula{flipped});
            } else if constexpr (std::is_same_v<T, Not>) {
                return nnf(n.body, !negated);
            } else if constexpr (std::is_same_v<T, And>) {
                return negated ? disj(nnf(n.left, true), nnf(n.right, true))
                               : conj(nnf(n.left, false), nnf(n.right, false));
            } else if constexpr (std::is_same_v<T, Or>) {
                return negated ? conj(nnf(n.left, true), nnf(n.right, true))
                               : disj(nnf(n.left, false), nnf(n.right, false));
            } else if constexpr (std::is_same_v<T, Exists>) {
                return negated ? forall(n.var, nnf(n.body, true))
                               : exists(n.var, nnf(n.body, false));
            } else if constexpr (std::is_same_v<T, Forall>) {
                return negated ? exists(n.var, nnf(n.body, true))
                               : forall(n.var, nnf(n.body, false));
            } else if constexpr (std::is_same_v<T, GenQuant>) {
                // ~Qx phi is Q^d x ~phi; on the dualized flag this toggles.
                return quant(n.name, negated ? !n.dualized : n.dualized, n.var,
                             nnf(n.body, negated));
            } else if constexpr (std::is_same_v<T, IOp>) {
                if (negated) throw FormulaError("I operator under an odd number of negations");
                return iop(n.var, nnf(n.body, false));
            } else {
                if (negated) throw FormulaError("team atom under an odd number of negations");
                return f;
            }
        },
        f->node);
}

struct CleanState {
    VarSet used;

    Var fresh(const Var& base) {
        if (!used.count(base)) {
            used.insert(base);
            return base;
        }
        for (unsigned long k = 1;; ++k) {
            Var candidate = base + std::to_string(k);
            if (!used.count(candidate)) {
                used.insert(candidate);
                return candidate;
            }
        }
    }
};

Var rename_of(const std::map<Var, Var>& env, const Var& x) {
    auto it = env.find(x);
    return it == env.end() ? x : it->second;
}

std::vector<Var> rename_all(const std::map<Var, Var>& env, const std::vector<Var>& vars) {
    std::vector<Var> out;
    out.reserve(vars.size());
    for (const Var& v : vars) out.push_back(rename_of(env, v));
    return out;
}

FormulaPtr clean_rec(const FormulaPtr& f, std::map<Var, Var> env, CleanState& state) {
    return std::visit(
        [&](const auto& n) -> FormulaPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Literal>) {
                if (const auto* r = std::get_if<RelAtom>(&n.atom))
                    return rel(r->symbol, rename_all(env, r->args), n.positive);
                const auto& e = std::get<EqAtom>(n.atom);
                return eq(rename_of(env, e.lhs), rename_of(env, e.rhs), n.positive);
            } else if constexpr (std::is_same_v<T, And>) {
                return conj(clean_rec(n.left, env, state), clean_rec(n.right, env, state));
            } else if constexpr (std::is_same_v<T, Or>) {
                return disj(clean_rec(n.left, env, state), clean_rec(n.right, env, state));
            } else if constexpr (std::is_same_v<T, Not>) {
                return lnot(clean_rec(n.body, env, state));
            } else if constexpr (std::is_same_v<T, Exists> || std::is_same_v<T, Forall> ||
                                 std::is_same_v<T, IOp>) {
                Var nv = state.fresh(n.var);
                env[n.var] = nv;
                FormulaPtr body = clean_rec(n.body, std::move(env), state);
                if constexpr (std::is_same_v<T, Exists>) return exists(nv, std::move(body));
                if constexpr (std::is_same_v<T, Forall>) return forall(nv, std::move(body));
                return iop(nv, std::move(body));
            } else if constexpr (std::is_same_v<T, GenQuant>) {
                Var nv = state.fresh(n.var);
                env[n.var] = nv;
                return quant(n.name, n.dualized, nv, clean_rec(n.body, std::move(env), state));
            } else if constexpr (std::is_same_v<T, DepAtom>) {
                return dep(rename_all(env, n.vars));
            } else if constexpr (std::is_same_v<T, InclusionAtom>) {
                return incl(rename_all(env, n.left), rename_all(env, n.right));
            } else if constexpr (std::is_same_v<T, ExclusionAtom>) {
                return excl(rename_all(env, n.left), rename_all(env, n.right));
            } else if constexpr (std::is_same_v<T, IndepAtom>) {
                return indep(rename_all(env, n.xs), rename_all(env, n.cond),
                             rename_all(env, n.ys));
            } else if constexpr (std::is_same_v<T, InducedAtom>) {
                return induced(n.name, rename_all(env, n.ys), rename_of(env, n.x));
            } else {
                static_assert(std::is_same_v<T, GeneralAtom>);
                std::vector<std::vector<Var>> tuples;
                tuples.reserve(n.tuples.size());
                for (const auto& t : n.tuples) tuples.push_back(rename_all(env, t));
                return gatom(n.name, std::move(tuples));
            }
        },
        f->node);
}

const Var* binder_var(const Formula& f) {
    if (const auto* n = f.as<Exists>()) return &n->var;
    if (const auto* n = f.as<Forall>()) return &n->var;
    if (const auto* n = f.as<GenQuant>()) return &n->var;
    if (const auto* n = f.as<IOp>()) return &n->var;
    return nullptr;
}

const FormulaPtr* binder_body(const Formula& f) {
    if (const auto* n = f.as<Exists>()) return &n->body;
    if (const auto* n = f.as<Forall>()) return &n->body;
    if (const auto* n = f.as<GenQuant>()) return &n->body;
    if (const auto* n = f.as<IOp>()) return &n->body;
    return nullptr;
}

void scope_rec(const Formula& f, std::vector<Var> superordinate, bool under_disjunction,
               ScopeInfo& out) {
    out.at.emplace(&f, PositionInfo{superordinate, under_disjunction});
    if (const Var* v = binder_var(f)) {
        if (std::find(superordinate.begin(), superordinate.end(), *v) == superordinate.end())
            superordinate.push_back(*v);
        scope_rec(**binder_body(f), std::move(superordinate), under_disjunction, out);
        return;
    }
    if (const auto* n = f.as<And>()) {
        scope_rec(*n->left, superordinate, under_disjunction, out);
        scope_rec(*n->right, std::move(superordinate), under_disjunction, out);
        return;
    }
    if (const auto* n = f.as<Or>()) {
        scope_rec(*n->left, superordinate, true, out);
        scope_rec(*n->right, std::move(superordinate), true, out);
        return;
    }
    if (const auto* n = f.as<Not>()) {
        scope_rec(*n->body, std::move(superordinate), under_disjunction, out);
        return;
    }
}

}  // namespace

FormulaPtr to_nnf(const FormulaPtr& f) { return nnf(f, false); }

FormulaPtr make_clean(const FormulaPtr& f) {
    CleanState state;
    state.used = free_vars(*f);
    return clean_rec(f, {}, state);
}

bool is_clean(const FormulaPtr& f) {
    VarSet free = free_vars(*f);
    bool ok = true;
    ScopeInfo info = scope_info(f);
    for_each_node(*f, [&](const Formula& g) {
        if (const Var* v = binder_var(g)) {
            if (free.count(*v)) ok = false;
            const auto& sup = info.of(g).superordinate;
            if (std::find(sup.begin(), sup.end(), *v) != sup.end()) ok = false;
        }
    });
    return ok;
}

const PositionInfo& ScopeInfo::of(const Formula& f) const {
    auto it = at.find(&f);
    if (it == at.end()) throw FormulaError("scope_info: unknown position");
    return it->second;
}

ScopeInfo scope_info(const FormulaPtr& root) {
    ScopeInfo out;
    scope_rec(*root, {}, false, out);
    return out;
}

FormulaPtr rewrite_negated_dep_atoms(const FormulaPtr& f) {
    if (const auto* n = f->as<Not>()) {
        if (n->body->is<DepAtom>()) {
            // Holds exactly when the team is empty.
            Var x = "x";
            VarSet used = all_vars(*f);
            for (unsigned long k = 0; used.count(x); ++k) x = "x" + std::to_string(k);
            return exists(x, eq(x, x, false));
        }
        return lnot(rewrite_negated_dep_atoms(n->body));
    }
    if (const auto* n = f->as<And>())
        return conj(rewrite_negated_dep_atoms(n->left), rewrite_negated_dep_atoms(n->right));
    if (const auto* n = f->as<Or>())
        return disj(rewrite_negated_dep_atoms(n->left), rewrite_negated_dep_atoms(n->right));
    if (const auto* n = f->as<Exists>()) return exists(n->var, rewrite_negated_dep_atoms(n->body));
    if (const auto* n = f->as<Forall>()) return forall(n->var, rewrite_negated_dep_atoms(n->body));
    if (const auto* n = f->as<GenQuant>())
        return quant(n->name, n->dualized, n->var, rewrite_negated_dep_atoms(n->body));
    if (const auto* n = f->as<IOp>()) return iop(n->var, rewrite_negated_dep_atoms(n->body));
    return f;
}

}  // namespace teamsem
