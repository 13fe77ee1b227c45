#include "teamsem/eval.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace teamsem {

std::string truth_str(Truth t) {
    switch (t) {
        case Truth::False: return "false";
        case Truth::Unknown: return "unknown";
        case Truth::True: return "true";
    }
    return "?";
}

bool is_flat(const Formula& formula) { return !has_team_constructs(formula); }

// ---------------------------------------------------------------------------
// Tarskian evaluation

namespace {

const Quantifier& effective_quantifier(const QuantifierRegistry& registry, const GenQuant& n) {
    return registry.get(n.dualized ? n.name + "_dual" : n.name);
}

}  // namespace

bool eval_tarski(const Model& model, const Assignment& s, const Formula& formula,
                 const QuantifierRegistry& registry) {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Literal>) {
                if (const auto* r = std::get_if<RelAtom>(&n.atom))
                    return model.holds(r->symbol, s.tuple(r->args)) == n.positive;
                const auto& e = std::get<EqAtom>(n.atom);
                return (s.at(e.lhs) == s.at(e.rhs)) == n.positive;
            } else if constexpr (std::is_same_v<T, And>) {
                return eval_tarski(model, s, *n.left, registry) &&
                       eval_tarski(model, s, *n.right, registry);
            } else if constexpr (std::is_same_v<T, Or>) {
                return eval_tarski(model, s, *n.left, registry) ||
                       eval_tarski(model, s, *n.right, registry);
            } else if constexpr (std::is_same_v<T, Not>) {
                return !eval_tarski(model, s, *n.body, registry);
            } else if constexpr (std::is_same_v<T, Exists>) {
                for (const Element& a : model.domain())
                    if (eval_tarski(model, s.with(n.var, a), *n.body, registry)) return true;
                return false;
            } else if constexpr (std::is_same_v<T, Forall>) {
                for (const Element& a : model.domain())
                    if (!eval_tarski(model, s.with(n.var, a), *n.body, registry)) return false;
                return true;
            } else if constexpr (std::is_same_v<T, GenQuant>) {
                const Quantifier& q = effective_quantifier(registry, n);
                std::set<Element> satisfying;
                for (const Element& a : model.domain())
                    if (eval_tarski(model, s.with(n.var, a), *n.body, registry))
                        satisfying.insert(a);
                return q_member1(q, model.domain(), satisfying);
            } else {
                throw EvalError("Tarskian evaluation does not cover team atoms or I");
            }
        },
        formula.node);
}

// ---------------------------------------------------------------------------
// Team evaluation

namespace {

using Rows = std::vector<Assignment>;  // sorted, duplicate-free

Rows sorted_rows(std::vector<Assignment> rows) {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows;
}

// Direct atom semantics on row spans.

bool dep_holds(const Rows& rows, const std::vector<Var>& vars) {
    std::vector<Var> prefix(vars.begin(), vars.end() - 1);
    std::map<Tuple, Element> seen;
    for (const Assignment& s : rows) {
        auto [it, inserted] = seen.emplace(s.tuple(prefix), s.at(vars.back()));
        if (!inserted && it->second != s.at(vars.back())) return false;
    }
    return true;
}

bool incl_holds(const Rows& rows, const std::vector<Var>& left, const std::vector<Var>& right) {
    std::set<Tuple> rhs;
    for (const Assignment& s : rows) rhs.insert(s.tuple(right));
    for (const Assignment& s : rows)
        if (!rhs.count(s.tuple(left))) return false;
    return true;
}

bool excl_holds(const Rows& rows, const std::vector<Var>& left, const std::vector<Var>& right) {
    std::set<Tuple> rhs;
    for (const Assignment& s : rows) rhs.insert(s.tuple(right));
    for (const Assignment& s : rows)
        if (rhs.count(s.tuple(left))) return false;
    return true;
}

bool indep_holds(const Rows& rows, const IndepAtom& atom) {
    // Per cond-group, the (xs, ys) pairs must cover the product of the
    // occurring xs-values and ys-values.
    std::map<Tuple, std::pair<std::set<Tuple>, std::set<Tuple>>> groups;
    std::set<std::pair<Tuple, Tuple>> pairs;
    for (const Assignment& s : rows) {
        Tuple key = s.tuple(atom.cond);
        Tuple xs = s.tuple(atom.xs);
        Tuple ys = s.tuple(atom.ys);
        auto& [xset, yset] = groups[key];
        xset.insert(xs);
        yset.insert(ys);
        Tuple paired = key;
        paired.insert(paired.end(), xs.begin(), xs.end());
        paired.insert(paired.end(), ys.begin(), ys.end());
        pairs.emplace(std::move(paired), Tuple{});
    }
    for (const auto& [key, sets] : groups) {
        for (const Tuple& xs : sets.first)
            for (const Tuple& ys : sets.second) {
                Tuple paired = key;
                paired.insert(paired.end(), xs.begin(), xs.end());
                paired.insert(paired.end(), ys.begin(), ys.end());
                if (!pairs.count({paired, Tuple{}})) return false;
            }
    }
    return true;
}

struct MemoKey {
    const Formula* node;
    std::size_t domain_size;
    std::string rows;

    bool operator<(const MemoKey& other) const {
        if (node != other.node) return node < other.node;
        if (domain_size != other.domain_size) return domain_size < other.domain_size;
        return rows < other.rows;
    }
};

std::string serialize_rows(const Rows& rows) {
    std::string out;
    out.reserve(rows.size() * 4);
    for (const Assignment& s : rows) {
        for (const auto& [var, e] : s.items())
            out.push_back(static_cast<char>(e.is_fresh() ? 0x40 + e.index() : 1 + e.index()));
        out.push_back('\x01');
    }
    return out;
}

// Incremental necessary-condition checkers for top-level conjunct atoms of a
// searched subformula; they reject partial row selections early, never
// replace the final evaluation.

struct DepConstraint {
    std::vector<Var> prefix;
    Var last;
};

struct InducedConstraint {
    std::vector<Var> ys;
    Var x;
    // Masks (over domain positions) that are subsets of some Q^A member.
    const std::set<std::uint64_t>* downset = nullptr;
};

struct Constraints {
    std::vector<DepConstraint> deps;
    std::vector<InducedConstraint> induced;

    bool empty() const { return deps.empty() && induced.empty(); }
};

struct ConstraintState {
    std::vector<std::map<Tuple, Element>> dep_seen;
    std::vector<std::map<Tuple, std::uint64_t>> group_masks;

    explicit ConstraintState(const Constraints& cs)
        : dep_seen(cs.deps.size()), group_masks(cs.induced.size()) {}

    bool add(const Constraints& cs, const Assignment& row,
             const std::map<Element, unsigned>& element_index) {
        for (std::size_t i = 0; i < cs.deps.size(); ++i) {
            const auto& c = cs.deps[i];
            auto [it, inserted] = dep_seen[i].emplace(row.tuple(c.prefix), row.at(c.last));
            if (!inserted && it->second != row.at(c.last)) return false;
        }
        for (std::size_t i = 0; i < cs.induced.size(); ++i) {
            const auto& c = cs.induced[i];
            std::uint64_t& mask = group_masks[i][row.tuple(c.ys)];
            mask |= std::uint64_t{1} << element_index.at(row.at(c.x));
            if (!c.downset->count(mask)) return false;
        }
        return true;
    }
};

void collect_conjuncts(const Formula& f, std::vector<const Formula*>& out) {
    if (const auto* n = f.as<And>()) {
        collect_conjuncts(*n->left, out);
        collect_conjuncts(*n->right, out);
        return;
    }
    out.push_back(&f);
}

class Evaluator {
public:
    Evaluator(const QuantifierRegistry& registry, const EvalConfig& cfg,
              std::vector<std::string>* trace)
        : registry_(registry), cfg_(cfg), trace_(trace) {
        if (trace_) cfg_.memo = false;
    }

    Truth eval(const Model& m, const Rows& rows, const Formula& f) {
        if (!cfg_.memo) return eval_node(m, rows, f);
        const bool memoizable = !f.is<Literal>() && !f.is<DepAtom>() && !f.is<InclusionAtom>() &&
                                !f.is<ExclusionAtom>() && !f.is<IndepAtom>() &&
                                !f.is<InducedAtom>() && !f.is<GeneralAtom>();
        if (!memoizable) return eval_node(m, rows, f);
        MemoKey key{&f, m.size(), serialize_rows(rows)};
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Truth result = eval_node(m, rows, f);
        memo_.emplace(std::move(key), result);
        return result;
    }

private:
    // --- cached syntactic classifications -----------------------------------

    bool flat(const Formula& f) {
        auto it = flat_cache_.find(&f);
        if (it != flat_cache_.end()) return it->second;
        bool value = is_flat(f);
        flat_cache_.emplace(&f, value);
        return value;
    }

    bool has_iop(const Formula& f) {
        auto it = iop_cache_.find(&f);
        if (it != iop_cache_.end()) return it->second;
        bool value = false;
        for_each_node(f, [&](const Formula& g) {
            if (g.is<IOp>()) value = true;
        });
        iop_cache_.emplace(&f, value);
        return value;
    }

    // Syntactically downward closed: literals, dependence and exclusion
    // atoms, quantifiers over any body, and atoms whose quantifier is known
    // closed under shrinking.
    bool downward_closed(const Formula& f) {
        auto it = dc_cache_.find(&f);
        if (it != dc_cache_.end()) return it->second;
        bool value = std::visit(
            [&](const auto& n) -> bool {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Literal> || std::is_same_v<T, DepAtom> ||
                              std::is_same_v<T, ExclusionAtom>) {
                    return true;
                } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
                    return downward_closed(*n.left) && downward_closed(*n.right);
                } else if constexpr (std::is_same_v<T, Exists> || std::is_same_v<T, Forall> ||
                                     std::is_same_v<T, IOp>) {
                    return downward_closed(*n.body);
                } else if constexpr (std::is_same_v<T, GenQuant>) {
                    return downward_closed(*n.body);
                } else if constexpr (std::is_same_v<T, InducedAtom>) {
                    return registry_.known(n.name) &&
                           registry_.get(n.name).downward_closed.value_or(false);
                } else if constexpr (std::is_same_v<T, GeneralAtom>) {
                    return registry_.known(n.name) &&
                           registry_.get(n.name).downward_closed.value_or(false);
                } else {
                    return false;
                }
            },
            f.node);
        dc_cache_.emplace(&f, value);
        return value;
    }

    // --- flat relaxation ----------------------------------------------------

    // Sound per-row upper bound: team atoms and I-subtrees read as true. A
    // row failing the relaxation cannot belong to any satisfying team, under
    // any bloat size, so pruning it preserves definite falsehood.
    bool relax_admits(const Model& m, const Assignment& s, const Formula& f) {
        return std::visit(
            [&](const auto& n) -> bool {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Literal>) {
                    return eval_tarski(m, s, f, registry_);
                } else if constexpr (std::is_same_v<T, And>) {
                    return relax_admits(m, s, *n.left) && relax_admits(m, s, *n.right);
                } else if constexpr (std::is_same_v<T, Or>) {
                    return relax_admits(m, s, *n.left) || relax_admits(m, s, *n.right);
                } else if constexpr (std::is_same_v<T, Exists>) {
                    for (const Element& a : m.domain())
                        if (relax_admits(m, s.with(n.var, a), *n.body)) return true;
                    return false;
                } else if constexpr (std::is_same_v<T, Forall>) {
                    for (const Element& a : m.domain())
                        if (!relax_admits(m, s.with(n.var, a), *n.body)) return false;
                    return true;
                } else if constexpr (std::is_same_v<T, GenQuant>) {
                    const Quantifier& q = effective_quantifier(registry_, n);
                    if (!q.monotone_up.value_or(false)) return true;
                    std::set<Element> satisfying;
                    for (const Element& a : m.domain())
                        if (relax_admits(m, s.with(n.var, a), *n.body)) satisfying.insert(a);
                    return q_member1(q, m.domain(), satisfying);
                } else {
                    return true;
                }
            },
            f.node);
    }

    // --- constraint extraction ----------------------------------------------

    Constraints constraints_of(const Model& m, const Formula& f) {
        Constraints out;
        std::vector<const Formula*> conjuncts;
        collect_conjuncts(f, conjuncts);
        for (const Formula* c : conjuncts) {
            if (const auto* d = c->as<DepAtom>()) {
                DepConstraint dc;
                dc.prefix.assign(d->vars.begin(), d->vars.end() - 1);
                dc.last = d->vars.back();
                out.deps.push_back(std::move(dc));
            } else if (const auto* ia = c->as<InducedAtom>()) {
                if (!registry_.known(ia->name)) continue;
                const Quantifier& q = registry_.get(ia->name);
                if (!q.is_type1()) continue;
                out.induced.push_back(
                    InducedConstraint{ia->ys, ia->x, &downset_of(m, q)});
            }
        }
        return out;
    }

    const std::set<std::uint64_t>& downset_of(const Model& m, const Quantifier& q) {
        auto key = std::make_pair(q.name, m.size());
        auto it = downset_cache_.find(key);
        if (it != downset_cache_.end()) return it->second;
        std::set<std::uint64_t> down;
        for (const std::uint64_t member : qa_masks(m, q)) {
            // All submasks.
            std::uint64_t sub = member;
            while (true) {
                down.insert(sub);
                if (sub == 0) break;
                sub = (sub - 1) & member;
            }
        }
        return downset_cache_.emplace(std::move(key), std::move(down)).first->second;
    }

    const std::vector<std::uint64_t>& qa_masks(const Model& m, const Quantifier& q) {
        auto key = std::make_pair(q.name, m.size());
        auto it = qa_cache_.find(key);
        if (it != qa_cache_.end()) return it->second;
        std::vector<std::uint64_t> masks;
        for (const auto& member : materialize_q1(q, m.domain())) {
            std::uint64_t mask = 0;
            for (const Element& e : member) mask |= std::uint64_t{1} << element_index(m, e);
            masks.push_back(mask);
        }
        return qa_cache_.emplace(std::move(key), std::move(masks)).first->second;
    }

    unsigned element_index(const Model& m, const Element& e) {
        const auto& d = m.domain();
        for (unsigned i = 0; i < d.size(); ++i)
            if (d[i] == e) return i;
        throw EvalError("element outside domain");
    }

    std::map<Element, unsigned> element_index_map(const Model& m) {
        std::map<Element, unsigned> out;
        for (unsigned i = 0; i < m.domain().size(); ++i) out.emplace(m.domain()[i], i);
        return out;
    }

    // --- clause implementations ---------------------------------------------

    Truth eval_node(const Model& m, const Rows& rows, const Formula& f) {
        if (cfg_.flat_fast_path && flat(f)) return truth_of(pointwise(m, rows, f));
        return std::visit(
            [&](const auto& n) -> Truth {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Literal>) {
                    return truth_of(pointwise(m, rows, f));
                } else if constexpr (std::is_same_v<T, And>) {
                    Truth a = eval(m, rows, *n.left);
                    if (a == Truth::False) return a;
                    return truth_and(a, eval(m, rows, *n.right));
                } else if constexpr (std::is_same_v<T, Or>) {
                    return cover_search(m, rows, n);
                } else if constexpr (std::is_same_v<T, Exists>) {
                    return witness_search(m, rows, n.var, *n.body, nullptr, &f);
                } else if constexpr (std::is_same_v<T, Forall>) {
                    return eval(m, extend_all(m, rows, n.var), *n.body);
                } else if constexpr (std::is_same_v<T, GenQuant>) {
                    const Quantifier& q = effective_quantifier(registry_, n);
                    if (!q.is_type1())
                        throw EvalError("team quantification needs a type-(1) quantifier: " +
                                        q.name);
                    return witness_search(m, rows, n.var, *n.body, &q, &f);
                } else if constexpr (std::is_same_v<T, IOp>) {
                    return bloat_search(m, rows, n);
                } else if constexpr (std::is_same_v<T, Not>) {
                    throw EvalError("formula is not in negation normal form");
                } else if constexpr (std::is_same_v<T, DepAtom>) {
                    return truth_of(dep_holds(rows, n.vars));
                } else if constexpr (std::is_same_v<T, InclusionAtom>) {
                    return truth_of(incl_holds(rows, n.left, n.right));
                } else if constexpr (std::is_same_v<T, ExclusionAtom>) {
                    return truth_of(excl_holds(rows, n.left, n.right));
                } else if constexpr (std::is_same_v<T, IndepAtom>) {
                    return truth_of(indep_holds(rows, n));
                } else if constexpr (std::is_same_v<T, InducedAtom>) {
                    return truth_of(induced_holds(m, rows, n));
                } else {
                    static_assert(std::is_same_v<T, GeneralAtom>);
                    const Quantifier& q = registry_.get(n.name);
                    Team team = rows_to_team(rows, f);
                    return truth_of(general_atom_holds(q, n.tuples, m, team));
                }
            },
            f.node);
    }

    bool pointwise(const Model& m, const Rows& rows, const Formula& f) {
        for (const Assignment& s : rows)
            if (!eval_tarski(m, s, f, registry_)) return false;
        return true;
    }

    bool induced_holds(const Model& m, const Rows& rows, const InducedAtom& n) {
        const Quantifier& q = registry_.get(n.name);
        if (!q.is_type1()) throw EvalError("induced atoms need a type-(1) quantifier: " + n.name);
        std::map<Tuple, std::set<Element>> groups;
        for (const Assignment& s : rows) groups[s.tuple(n.ys)].insert(s.at(n.x));
        for (const auto& [key, proj] : groups) {
            (void)key;
            if (!q_member1(q, m.domain(), proj)) return false;
        }
        return true;
    }

    Team rows_to_team(const Rows& rows, const Formula& f) {
        VarSet vardom = rows.empty() ? free_vars(f) : rows.front().domain();
        Team team{vardom};
        for (const Assignment& s : rows) team.insert(s);
        return team;
    }

    Rows extend_all(const Model& m, const Rows& rows, const Var& x) {
        if (rows.size() * m.size() > cfg_.caps.max_team_rows)
            throw CapExceeded("team size cap exceeded in universal extension");
        Rows out;
        out.reserve(rows.size() * m.size());
        for (const Assignment& s : rows)
            for (const Element& a : m.domain()) out.push_back(s.with(x, a));
        return sorted_rows(std::move(out));
    }

    // --- disjunction: cover search ------------------------------------------

    Truth cover_search(const Model& m, const Rows& rows, const Or& node) {
        const Formula& left = *node.left;
        const Formula& right = *node.right;
        if (rows.empty()) {
            Truth a = eval(m, rows, left);
            if (a == Truth::False) return a;
            return truth_and(a, eval(m, rows, right));
        }

        const bool fl = flat(left), fr = flat(right);
        const std::size_t count = rows.size();

        // Row admissibility: exact for flat sides, relaxation otherwise.
        std::vector<char> ok_l(count, 1), ok_r(count, 1);
        for (std::size_t i = 0; i < count; ++i) {
            if (fl)
                ok_l[i] = eval_tarski(m, rows[i], left, registry_);
            else if (cfg_.relax_pruning)
                ok_l[i] = relax_admits(m, rows[i], left);
            if (fr)
                ok_r[i] = eval_tarski(m, rows[i], right, registry_);
            else if (cfg_.relax_pruning)
                ok_r[i] = relax_admits(m, rows[i], right);
            if (!ok_l[i] && !ok_r[i]) return Truth::False;
        }
        if (fl && fr) {
            trace_line("or: flat cover");
            return Truth::True;
        }

        // Overlap is only needed when neither side is droppable: a downward
        // closed, I-free side can always shed shared rows.
        const bool can_drop_overlap =
            cfg_.dc_narrowing && ((downward_closed(left) && !has_iop(left)) ||
                                  (downward_closed(right) && !has_iop(right)));

        Constraints left_cs = constraints_of(m, left);
        Constraints right_cs = constraints_of(m, right);
        std::map<Element, unsigned> index = element_index_map(m);

        std::vector<std::size_t> order(count);
        std::iota(order.begin(), order.end(), 0);

        Truth best = Truth::False;
        std::vector<char> side(count, 0);  // 1 = left, 2 = right, 3 = both

        // DFS over row-side choices with incremental conjunct constraints.
        std::function<Truth(std::size_t, ConstraintState, ConstraintState)> dfs =
            [&](std::size_t i, ConstraintState ls, ConstraintState rs) -> Truth {
            if (i == count) {
                Rows w0, w1;
                for (std::size_t j = 0; j < count; ++j) {
                    if (side[j] & 1) w0.push_back(rows[j]);
                    if (side[j] & 2) w1.push_back(rows[j]);
                }
                Truth lv = fl ? Truth::True : eval(m, w0, left);
                if (lv == Truth::False) return Truth::False;
                Truth rv = fr ? Truth::True : eval(m, w1, right);
                Truth v = truth_and(lv, rv);
                if (v == Truth::True) trace_cover(w0.size(), w1.size());
                return v;
            }
            std::vector<char> choices;
            if (ok_l[i] && !ok_r[i])
                choices = {1};
            else if (!ok_l[i] && ok_r[i])
                choices = {2};
            else if (can_drop_overlap)
                choices = {1, 2};
            else
                choices = {1, 2, 3};

            Truth acc = Truth::False;
            for (char c : choices) {
                ConstraintState nls = ls;
                ConstraintState nrs = rs;
                if ((c & 1) && !nls.add(left_cs, rows[i], index)) continue;
                if ((c & 2) && !nrs.add(right_cs, rows[i], index)) continue;
                side[i] = c;
                Truth v = dfs(i + 1, std::move(nls), std::move(nrs));
                if (v == Truth::True) return v;
                acc = truth_max(acc, v);
            }
            side[i] = 0;
            return acc;
        };
        best = dfs(0, ConstraintState(left_cs), ConstraintState(right_cs));
        return best;
    }

    // --- existential / generalized quantifier: witness search ---------------

    Truth witness_search(const Model& m, const Rows& rows, const Var& x, const Formula& body,
                         const Quantifier* q, const Formula* node) {
        if (rows.empty()) return eval(m, rows, body);
        const std::size_t n = m.size();
        if (rows.size() * n > cfg_.caps.max_team_rows)
            throw CapExceeded("team size cap exceeded in witness search");

        // Allowed extension values per row.
        std::vector<std::uint64_t> allowed(rows.size(), (n >= 64 ? ~0ull : (1ull << n) - 1));
        if (cfg_.relax_pruning) {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                std::uint64_t mask = 0;
                for (unsigned a = 0; a < n; ++a)
                    if (relax_admits(m, rows[i].with(x, m.domain()[a]), body))
                        mask |= std::uint64_t{1} << a;
                allowed[i] = mask;
            }
        }

        // Candidate value-set lists per row, ordered by size then bit value.
        std::vector<std::vector<std::uint64_t>> lists(rows.size());
        if (q == nullptr) {
            const bool singletons =
                cfg_.dc_narrowing && downward_closed(body) && !has_iop(body);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (allowed[i] == 0) return Truth::False;
                if (singletons) {
                    for (unsigned a = 0; a < n; ++a)
                        if ((allowed[i] >> a) & 1) lists[i].push_back(std::uint64_t{1} << a);
                } else {
                    lists[i] = submasks_by_size(allowed[i]);
                }
            }
        } else {
            const auto& qa = qa_masks(m, *q);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                for (std::uint64_t member : qa)
                    if ((member & ~allowed[i]) == 0) lists[i].push_back(member);
                if (lists[i].empty()) return Truth::False;
            }
        }

        Constraints cs = constraints_of(m, body);
        std::map<Element, unsigned> index = element_index_map(m);

        // Iterative deepening on the total extension size, so easy witnesses
        // (all-singleton choices) are found before large ones.
        std::size_t min_total = 0, max_total = 0;
        std::vector<std::size_t> min_size(rows.size()), max_size(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            min_size[i] = static_cast<std::size_t>(std::popcount(lists[i].front()));
            max_size[i] = static_cast<std::size_t>(std::popcount(lists[i].back()));
            min_total += min_size[i];
            max_total += max_size[i];
        }
        // Suffix bounds for pruning.
        std::vector<std::size_t> min_suffix(rows.size() + 1, 0), max_suffix(rows.size() + 1, 0);
        for (std::size_t i = rows.size(); i-- > 0;) {
            min_suffix[i] = min_suffix[i + 1] + min_size[i];
            max_suffix[i] = max_suffix[i + 1] + max_size[i];
        }

        std::vector<std::uint64_t> chosen(rows.size(), 0);
        bool saw_unknown = false;

        std::function<Truth(std::size_t, std::size_t, ConstraintState)> dfs =
            [&](std::size_t i, std::size_t budget, ConstraintState state) -> Truth {
            if (i == rows.size()) {
                Rows w;
                for (std::size_t j = 0; j < rows.size(); ++j)
                    for (unsigned a = 0; a < n; ++a)
                        if ((chosen[j] >> a) & 1) w.push_back(rows[j].with(x, m.domain()[a]));
                w = sorted_rows(std::move(w));
                Truth v = eval(m, w, body);
                if (v == Truth::True) trace_witness(node, w.size());
                return v;
            }
            Truth acc = Truth::False;
            for (std::uint64_t c : lists[i]) {
                const std::size_t size = static_cast<std::size_t>(std::popcount(c));
                if (size > budget || budget - size < min_suffix[i + 1] ||
                    budget - size > max_suffix[i + 1])
                    continue;
                ConstraintState next = state;
                bool feasible = true;
                for (unsigned a = 0; a < n && feasible; ++a)
                    if ((c >> a) & 1)
                        feasible = next.add(cs, rows[i].with(x, m.domain()[a]), index);
                if (!feasible) continue;
                chosen[i] = c;
                Truth v = dfs(i + 1, budget - size, std::move(next));
                if (v == Truth::True) return v;
                acc = truth_max(acc, v);
            }
            chosen[i] = 0;
            return acc;
        };

        for (std::size_t total = min_total; total <= max_total; ++total) {
            Truth v = dfs(0, total, ConstraintState(cs));
            if (v == Truth::True) return v;
            if (v == Truth::Unknown) saw_unknown = true;
        }
        return saw_unknown ? Truth::Unknown : Truth::False;
    }

    static std::vector<std::uint64_t> submasks_by_size(std::uint64_t allowed) {
        std::vector<std::uint64_t> out;
        std::uint64_t sub = allowed;
        while (true) {
            if (sub != 0) out.push_back(sub);
            if (sub == 0) break;
            sub = (sub - 1) & allowed;
        }
        std::sort(out.begin(), out.end(), [](std::uint64_t a, std::uint64_t b) {
            int pa = std::popcount(a), pb = std::popcount(b);
            if (pa != pb) return pa < pb;
            return a < b;
        });
        return out;
    }

    // --- the I operator ------------------------------------------------------

    Truth bloat_search(const Model& m, const Rows& rows, const IOp& node) {
        if (cfg_.bloat_budget == 0) return Truth::False;
        for (std::size_t k = 1; k <= cfg_.bloat_budget; ++k) {
            if (m.size() + k > cfg_.caps.max_domain)
                throw CapExceeded("domain size cap exceeded in bloat search");
            Model bloated = bloat(m, k);
            std::vector<Element> fresh = fresh_tail(bloated, k);
            if (rows.size() * std::max<std::size_t>(k, 1) > cfg_.caps.max_team_rows)
                throw CapExceeded("team size cap exceeded in bloat search");
            Rows extended;
            extended.reserve(rows.size() * k);
            for (const Assignment& s : rows)
                for (const Element& e : fresh) extended.push_back(s.with(node.var, e));
            extended = sorted_rows(std::move(extended));
            if (eval(bloated, extended, *node.body) == Truth::True) {
                trace_line("I " + node.var + ": bloat=" + std::to_string(k));
                return Truth::True;
            }
        }
        // Sound but bounded: larger bloatings were not tried.
        return Truth::Unknown;
    }

    // --- diagnostics ----------------------------------------------------------

    void trace_line(std::string line) {
        if (trace_) trace_->push_back(std::move(line));
    }
    void trace_cover(std::size_t left_rows, std::size_t right_rows) {
        if (trace_)
            trace_->push_back("or: cover left=" + std::to_string(left_rows) +
                              " right=" + std::to_string(right_rows));
    }
    void trace_witness(const Formula* node, std::size_t rows) {
        if (!trace_ || !node) return;
        if (const auto* e = node->as<Exists>())
            trace_->push_back("exists " + e->var + ": witness rows=" + std::to_string(rows));
        else if (const auto* g = node->as<GenQuant>())
            trace_->push_back("Q{" + g->name + "} " + g->var +
                              ": witness rows=" + std::to_string(rows));
    }

    const QuantifierRegistry& registry_;
    EvalConfig cfg_;
    std::vector<std::string>* trace_;
    std::map<MemoKey, Truth> memo_;
    std::map<const Formula*, bool> flat_cache_;
    std::map<const Formula*, bool> iop_cache_;
    std::map<const Formula*, bool> dc_cache_;
    std::map<std::pair<std::string, std::size_t>, std::vector<std::uint64_t>> qa_cache_;
    std::map<std::pair<std::string, std::size_t>, std::set<std::uint64_t>> downset_cache_;
};

}  // namespace

Truth eval_team(const Model& model, const Team& team, const Formula& formula,
                const QuantifierRegistry& registry, const EvalConfig& cfg,
                std::vector<std::string>* trace) {
    if (!is_nnf(formula)) throw EvalError("formula is not in negation normal form");
    if (!team.empty()) {
        VarSet free = free_vars(formula);
        for (const Var& v : free)
            if (!team.vardom().count(v))
                throw EvalError("free variable not bound by the team: " + v);
    }
    Evaluator evaluator(registry, cfg, trace);
    Rows rows(team.rows().begin(), team.rows().end());
    return evaluator.eval(model, rows, formula);
}

}  // namespace teamsem
