#include "teamsem/formula.hpp"

#include <algorithm>
#include <functional>

namespace teamsem {

namespace {

FormulaPtr make(FormulaNode node) { return std::make_shared<const Formula>(Formula{std::move(node)}); }

void check_vars(const std::vector<Var>& vars, const char* what) {
    if (vars.empty()) throw FormulaError(std::string(what) + ": variable list must be nonempty");
}

}  // namespace

FormulaPtr rel(std::string symbol, std::vector<Var> args, bool positive) {
    return make(Literal{positive, RelAtom{std::move(symbol), std::move(args)}});
}

FormulaPtr eq(Var lhs, Var rhs, bool positive) {
    return make(Literal{positive, EqAtom{std::move(lhs), std::move(rhs)}});
}

FormulaPtr conj(FormulaPtr left, FormulaPtr right) {
    return make(And{std::move(left), std::move(right)});
}

FormulaPtr disj(FormulaPtr left, FormulaPtr right) {
    return make(Or{std::move(left), std::move(right)});
}

FormulaPtr lnot(FormulaPtr body) { return make(Not{std::move(body)}); }

FormulaPtr exists(Var var, FormulaPtr body) { return make(Exists{std::move(var), std::move(body)}); }

FormulaPtr forall(Var var, FormulaPtr body) { return make(Forall{std::move(var), std::move(body)}); }

FormulaPtr quant(std::string name, bool dualized, Var var, FormulaPtr body) {
    return make(GenQuant{std::move(name), dualized, std::move(var), std::move(body)});
}

FormulaPtr iop(Var var, FormulaPtr body) { return make(IOp{std::move(var), std::move(body)}); }

FormulaPtr dep(std::vector<Var> vars) {
    check_vars(vars, "dependence atom");
    return make(DepAtom{std::move(vars)});
}

FormulaPtr incl(std::vector<Var> left, std::vector<Var> right) {
    check_vars(left, "inclusion atom");
    if (left.size() != right.size())
        throw FormulaError("inclusion atom: tuples must have equal length");
    return make(InclusionAtom{std::move(left), std::move(right)});
}

FormulaPtr excl(std::vector<Var> left, std::vector<Var> right) {
    check_vars(left, "exclusion atom");
    if (left.size() != right.size())
        throw FormulaError("exclusion atom: tuples must have equal length");
    return make(ExclusionAtom{std::move(left), std::move(right)});
}

FormulaPtr indep(std::vector<Var> xs, std::vector<Var> cond, std::vector<Var> ys) {
    check_vars(xs, "independence atom");
    check_vars(ys, "independence atom");
    return make(IndepAtom{std::move(xs), std::move(cond), std::move(ys)});
}

FormulaPtr induced(std::string name, std::vector<Var> ys, Var x) {
    return make(InducedAtom{std::move(name), std::move(ys), std::move(x)});
}

FormulaPtr gatom(std::string name, std::vector<std::vector<Var>> tuples) {
    if (tuples.empty()) throw FormulaError("generalized atom: needs at least one tuple");
    for (const auto& t : tuples) check_vars(t, "generalized atom");
    return make(GeneralAtom{std::move(name), std::move(tuples)});
}

FormulaPtr conj_all(std::vector<FormulaPtr> parts) {
    if (parts.empty()) throw FormulaError("conj_all: needs at least one conjunct");
    FormulaPtr out = parts.back();
    for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) out = conj(*it, out);
    return out;
}

bool struct_eq(const Formula& a, const Formula& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& na) -> bool {
            using T = std::decay_t<decltype(na)>;
            const T& nb = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Literal>) {
                if (na.positive != nb.positive) return false;
                if (na.atom.index() != nb.atom.index()) return false;
                if (const auto* ra = std::get_if<RelAtom>(&na.atom)) {
                    const auto& rb = std::get<RelAtom>(nb.atom);
                    return ra->symbol == rb.symbol && ra->args == rb.args;
                }
                const auto& ea = std::get<EqAtom>(na.atom);
                const auto& eb = std::get<EqAtom>(nb.atom);
                return ea.lhs == eb.lhs && ea.rhs == eb.rhs;
            } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
                return struct_eq(*na.left, *nb.left) && struct_eq(*na.right, *nb.right);
            } else if constexpr (std::is_same_v<T, Not>) {
                return struct_eq(*na.body, *nb.body);
            } else if constexpr (std::is_same_v<T, Exists> || std::is_same_v<T, Forall> ||
                                 std::is_same_v<T, IOp>) {
                return na.var == nb.var && struct_eq(*na.body, *nb.body);
            } else if constexpr (std::is_same_v<T, GenQuant>) {
                return na.name == nb.name && na.dualized == nb.dualized && na.var == nb.var &&
                       struct_eq(*na.body, *nb.body);
            } else if constexpr (std::is_same_v<T, DepAtom>) {
                return na.vars == nb.vars;
            } else if constexpr (std::is_same_v<T, InclusionAtom> ||
                                 std::is_same_v<T, ExclusionAtom>) {
                return na.left == nb.left && na.right == nb.right;
            } else if constexpr (std::is_same_v<T, IndepAtom>) {
                return na.xs == nb.xs && na.cond == nb.cond && na.ys == nb.ys;
            } else if constexpr (std::is_same_v<T, InducedAtom>) {
                return na.name == nb.name && na.ys == nb.ys && na.x == nb.x;
            } else {
                static_assert(std::is_same_v<T, GeneralAtom>);
                return na.name == nb.name && na.tuples == nb.tuples;
            }
        },
        a.node);
}

namespace {

std::string join_vars(const std::vector<Var>& vars) {
    std::string out;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (i) out += ",";
        out += vars[i];
    }
    return out;
}

}  // namespace

std::string render(const Formula& f) {
    return std::visit(
        [&](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Literal>) {
                std::string neg = n.positive ? "" : "~";
                if (const auto* r = std::get_if<RelAtom>(&n.atom))
                    return neg + r->symbol + "(" + join_vars(r->args) + ")";
                const auto& e = std::get<EqAtom>(n.atom);
                return neg + e.lhs + "=" + e.rhs;
            } else if constexpr (std::is_same_v<T, And>) {
                return "(" + render(*n.left) + " & " + render(*n.right) + ")";
            } else if constexpr (std::is_same_v<T, Or>) {
                return "(" + render(*n.left) + " | " + render(*n.right) + ")";
            } else if constexpr (std::is_same_v<T, Not>) {
                return "~" + render(*n.body);
            } else if constexpr (std::is_same_v<T, Exists>) {
                return "E " + n.var + " " + render(*n.body);
            } else if constexpr (std::is_same_v<T, Forall>) {
                return "A " + n.var + " " + render(*n.body);
            } else if constexpr (std::is_same_v<T, GenQuant>) {
                return std::string(n.dualized ? "Qd{" : "Q{") + n.name + "} " + n.var + " " +
                       render(*n.body);
            } else if constexpr (std::is_same_v<T, IOp>) {
                return "I " + n.var + " " + render(*n.body);
            } else if constexpr (std::is_same_v<T, DepAtom>) {
                return "=(" + join_vars(n.vars) + ")";
            } else if constexpr (std::is_same_v<T, InclusionAtom>) {
                return "inc(" + join_vars(n.left) + " ; " + join_vars(n.right) + ")";
            } else if constexpr (std::is_same_v<T, ExclusionAtom>) {
                return "exc(" + join_vars(n.left) + " ; " + join_vars(n.right) + ")";
            } else if constexpr (std::is_same_v<T, IndepAtom>) {
                if (n.cond.empty())
                    return "perp(" + join_vars(n.xs) + " ;; " + join_vars(n.ys) + ")";
                return "perp(" + join_vars(n.xs) + " ; " + join_vars(n.cond) + " ; " +
                       join_vars(n.ys) + ")";
            } else if constexpr (std::is_same_v<T, InducedAtom>) {
                return "iatom{" + n.name + "}(" + join_vars(n.ys) + ";" + n.x + ")";
            } else {
                static_assert(std::is_same_v<T, GeneralAtom>);
                std::string out = "gatom{" + n.name + "}(";
                for (std::size_t i = 0; i < n.tuples.size(); ++i) {
                    if (i) out += " ; ";
                    out += join_vars(n.tuples[i]);
                }
                return out + ")";
            }
        },
        f.node);
}

VarSet free_vars(const Formula& f) {
    return std::visit(
        [&](const auto& n) -> VarSet {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Literal>) {
                VarSet out;
                if (const auto* r = std::get_if<RelAtom>(&n.atom))
                    out.insert(r->args.begin(), r->args.end());
                else {
                    const auto& e = std::get<EqAtom>(n.atom);
                    out.insert(e.lhs);
                    out.insert(e.rhs);
                }
                return out;
            } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
                VarSet out = free_vars(*n.left);
                VarSet r = free_vars(*n.right);
                out.insert(r.begin(), r.end());
                return out;
            } else if constexpr (std::is_same_v<T, Not>) {
                return free_vars(*n.body);
            } else if constexpr (std::is_same_v<T, Exists> || std::is_same_v<T, Forall> ||
                                 std::is_same_v<T, IOp>) {
                VarSet out = free_vars(*n.body);
                out.erase(n.var);
                return out;
            } else if constexpr (std::is_same_v<T, GenQuant>) {
                VarSet out = free_vars(*n.body);
                out.erase(n.var);
                return out;
            } else if constexpr (std::is_same_v<T, DepAtom>) {
                return VarSet(n.vars.begin(), n.vars.end());
            } else if constexpr (std::is_same_v<T, InclusionAtom> ||
                                 std::is_same_v<T, ExclusionAtom>) {
                VarSet out(n.left.begin(), n.left.end());
                out.insert(n.right.begin(), n.right.end());
                return out;
            } else if constexpr (std::is_same_v<T, IndepAtom>) {
                VarSet out(n.xs.begin(), n.xs.end());
                out.insert(n.cond.begin(), n.cond.end());
                out.insert(n.ys.begin(), n.ys.end());
                return out;
            } else if constexpr (std::is_same_v<T, InducedAtom>) {
                VarSet out(n.ys.begin(), n.ys.end());
                out.insert(n.x);
                return out;
            } else {
                static_assert(std::is_same_v<T, GeneralAtom>);
                VarSet out;
                for (const auto& t : n.tuples) out.insert(t.begin(), t.end());
                return out;
            }
        },
        f.node);
}

void for_each_node(const Formula& f, const std::function<void(const Formula&)>& visit) {
    visit(f);
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
                for_each_node(*n.left, visit);
                for_each_node(*n.right, visit);
            } else if constexpr (std::is_same_v<T, Not>) {
                for_each_node(*n.body, visit);
            } else if constexpr (std::is_same_v<T, Exists> || std::is_same_v<T, Forall> ||
                                 std::is_same_v<T, GenQuant> || std::is_same_v<T, IOp>) {
                for_each_node(*n.body, visit);
            }
        },
        f.node);
}

VarSet all_vars(const Formula& f) {
    VarSet out;
    for_each_node(f, [&](const Formula& g) {
        VarSet fv = free_vars(g);
        out.insert(fv.begin(), fv.end());
        if (const auto* n = g.as<Exists>()) out.insert(n->var);
        if (const auto* n = g.as<Forall>()) out.insert(n->var);
        if (const auto* n = g.as<GenQuant>()) out.insert(n->var);
        if (const auto* n = g.as<IOp>()) out.insert(n->var);
    });
    return out;
}

std::set<std::string> relation_symbols(const Formula& f) {
    std::set<std::string> out;
    for_each_node(f, [&](const Formula& g) {
        if (const auto* lit = g.as<Literal>())
            if (const auto* r = std::get_if<RelAtom>(&lit->atom)) out.insert(r->symbol);
    });
    return out;
}

bool is_nnf(const Formula& f) {
    bool ok = true;
    for_each_node(f, [&](const Formula& g) {
        if (g.is<Not>()) ok = false;
    });
    return ok;
}

bool has_team_constructs(const Formula& f) {
    bool found = false;
    for_each_node(f, [&](const Formula& g) {
        if (g.is<DepAtom>() || g.is<InclusionAtom>() || g.is<ExclusionAtom>() ||
            g.is<IndepAtom>() || g.is<InducedAtom>() || g.is<GeneralAtom>() || g.is<IOp>())
            found = true;
    });
    return found;
}

}  // namespace teamsem
