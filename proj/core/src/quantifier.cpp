#include "teamsem/quantifier.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

namespace teamsem {

namespace {

std::set<Element> to_element_set(const TupleSet& rel) {
    std::set<Element> out;
    for (const Tuple& t : rel) out.insert(t.at(0));
    return out;
}

TupleSet to_tuple_set(const std::set<Element>& b) {
    TupleSet out;
    for (const Element& e : b) out.insert(Tuple{e});
    return out;
}

std::set<Element> complement(const std::vector<Element>& domain, const std::set<Element>& b) {
    std::set<Element> out;
    for (const Element& e : domain)
        if (!b.count(e)) out.insert(e);
    return out;
}

}  // namespace

bool q_member(const Quantifier& q, const std::vector<Element>& domain,
              const std::vector<TupleSet>& rels) {
    if (domain.empty()) throw QuantifierError("quantifier membership needs a nonempty domain");
    if (rels.size() != q.type.size())
        throw QuantifierError("relation count does not match quantifier type for " + q.name);
    for (std::size_t j = 0; j < rels.size(); ++j)
        for (const Tuple& t : rels[j])
            if (static_cast<int>(t.size()) != q.type[j])
                throw QuantifierError("tuple arity does not match quantifier type for " + q.name);
    return q.member(domain, rels);
}

bool q_member1(const Quantifier& q, const std::vector<Element>& domain,
               const std::set<Element>& b) {
    if (!q.is_type1()) throw QuantifierError(q.name + " is not of type (1)");
    return q_member(q, domain, {to_tuple_set(b)});
}

Quantifier derive(const Quantifier& q, DeriveMode mode) {
    if (!q.is_type1())
        throw QuantifierError("prime/dual need a type-(1) quantifier, got " + q.name);
    Quantifier out;
    out.type = {1};
    out.derived_from = q.name;
    auto base = q.member;
    if (mode == DeriveMode::prime) {
        out.name = q.name + "_prime";
        out.derivation = Quantifier::Derivation::prime;
        out.member = [base](const std::vector<Element>& domain, const std::vector<TupleSet>& rels) {
            std::set<Element> b = to_element_set(rels.at(0));
            return base(domain, {to_tuple_set(complement(domain, b))});
        };
        out.monotone_up = q.downward_closed;
        out.downward_closed = q.monotone_up;
    } else {
        out.name = q.name + "_dual";
        out.derivation = Quantifier::Derivation::dual;
        out.member = [base](const std::vector<Element>& domain, const std::vector<TupleSet>& rels) {
            std::set<Element> b = to_element_set(rels.at(0));
            return !base(domain, {to_tuple_set(complement(domain, b))});
        };
        out.monotone_up = q.monotone_up;
        out.downward_closed = q.downward_closed;
    }
    return out;
}

std::vector<std::set<Element>> materialize_q1(const Quantifier& q,
                                              const std::vector<Element>& domain) {
    if (!q.is_type1()) throw QuantifierError(q.name + " is not of type (1)");
    if (domain.size() > 20) throw QuantifierError("domain too large to materialize Q^A");
    std::vector<std::set<Element>> out;
    const std::size_t n = domain.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::set<Element> b;
        for (std::size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1) b.insert(domain[i]);
        if (q_member1(q, domain, b)) out.push_back(std::move(b));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

bool check_monotone(const Quantifier& q, int max_size) {
    if (!q.is_type1()) throw QuantifierError(q.name + " is not of type (1)");
    for (int n = 1; n <= max_size; ++n) {
        std::vector<Element> domain;
        for (int i = 0; i < n; ++i) domain.push_back(Element::base(static_cast<std::uint32_t>(i)));
        const std::uint64_t full = (std::uint64_t{1} << n) - 1;
        std::vector<bool> member(full + 1);
        for (std::uint64_t mask = 0; mask <= full; ++mask) {
            std::set<Element> b;
            for (int i = 0; i < n; ++i)
                if ((mask >> i) & 1) b.insert(domain[static_cast<std::size_t>(i)]);
            member[mask] = q_member1(q, domain, b);
        }
        for (std::uint64_t a = 0; a <= full; ++a) {
            if (!member[a]) continue;
            // Supersets of a within the full domain.
            std::uint64_t rest = full & ~a;
            for (std::uint64_t extra = rest;; extra = (extra - 1) & rest) {
                if (!member[a | extra]) return false;
                if (extra == 0) break;
            }
        }
    }
    return true;
}

bool induced_atom_holds(const Quantifier& q, const std::vector<Var>& ys, const Var& x,
                        const Model& model, const Team& team) {
    if (!q.is_type1()) throw QuantifierError("induced atoms need a type-(1) quantifier");
    if (team.empty()) return true;
    for (const auto& [value, group] : group_by(team, ys)) {
        (void)value;
        std::set<Element> proj;
        for (const Tuple& t : rel_projection(group, {x})) proj.insert(t[0]);
        if (!q_member1(q, model.domain(), proj)) return false;
    }
    return true;
}

bool general_atom_holds(const Quantifier& q, const std::vector<std::vector<Var>>& tuples,
                        const Model& model, const Team& team) {
    if (tuples.size() != q.type.size())
        throw QuantifierError("generalized atom arity mismatch for " + q.name);
    for (std::size_t j = 0; j < tuples.size(); ++j)
        if (static_cast<int>(tuples[j].size()) != q.type[j])
            throw QuantifierError("generalized atom tuple length mismatch for " + q.name);
    std::vector<TupleSet> rels;
    rels.reserve(tuples.size());
    for (const auto& t : tuples)
        rels.push_back(team.empty() ? TupleSet{} : rel_projection(team, t));
    return q_member(q, model.domain(), rels);
}

// ---------------------------------------------------------------------------
// Built-ins

Quantifier q_exists() {
    Quantifier q;
    q.name = "exists";
    q.type = {1};
    q.member = [](const std::vector<Element>&, const std::vector<TupleSet>& rels) {
        return !rels.at(0).empty();
    };
    q.monotone_up = true;
    q.downward_closed = false;
    return q;
}

Quantifier q_forall() {
    Quantifier q;
    q.name = "forall";
    q.type = {1};
    q.member = [](const std::vector<Element>& domain, const std::vector<TupleSet>& rels) {
        return rels.at(0).size() == domain.size();
    };
    q.monotone_up = true;
    q.downward_closed = false;
    return q;
}

Quantifier q_majority() {
    Quantifier q;
    q.name = "majority";
    q.type = {1};
    q.member = [](const std::vector<Element>& domain, const std::vector<TupleSet>& rels) {
        return 2 * rels.at(0).size() > domain.size();
    };
    q.monotone_up = true;
    q.downward_closed = false;
    return q;
}

Quantifier q_atleast(int k) {
    if (k < 1) throw QuantifierError("atleast threshold must be >= 1");
    Quantifier q;
    q.name = "atleast" + std::to_string(k);
    q.type = {1};
    q.member = [k](const std::vector<Element>&, const std::vector<TupleSet>& rels) {
        return static_cast<int>(rels.at(0).size()) >= k;
    };
    q.monotone_up = true;
    q.downward_closed = false;
    return q;
}

Quantifier q_dep(int k) {
    if (k < 1) throw QuantifierError("dependence arity must be >= 1");
    Quantifier q;
    q.name = "dep" + std::to_string(k);
    q.type = {k};
    q.member = [k](const std::vector<Element>&, const std::vector<TupleSet>& rels) {
        // Functional in the last coordinate.
        std::map<Tuple, Element> seen;
        for (const Tuple& t : rels.at(0)) {
            Tuple prefix(t.begin(), t.end() - 1);
            auto [it, inserted] = seen.emplace(std::move(prefix), t.back());
            if (!inserted && it->second != t.back()) return false;
        }
        return true;
    };
    if (k == 1) q.monotone_up = false;
    q.downward_closed = true;
    return q;
}

// ---------------------------------------------------------------------------
// Registry

QuantifierRegistry::QuantifierRegistry() {
    register_quantifier(q_exists());
    register_quantifier(q_forall());
    register_quantifier(q_majority());
}

void QuantifierRegistry::register_quantifier(Quantifier q) {
    std::lock_guard<std::mutex> lock(mutex_);
    table_[q.name] = std::make_unique<Quantifier>(std::move(q));
}

bool QuantifierRegistry::known(const std::string& name) const {
    try {
        return resolve(name) != nullptr;
    } catch (const QuantifierError&) {
        return false;
    }
}

const Quantifier& QuantifierRegistry::get(const std::string& name) const {
    const Quantifier* q = resolve(name);
    if (!q) throw QuantifierError("unregistered quantifier: " + name);
    return *q;
}

const Quantifier* QuantifierRegistry::resolve(const std::string& name) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = table_.find(name);
        if (it != table_.end()) return it->second.get();
    }

    auto ends_with = [&](const std::string& suffix) {
        return name.size() > suffix.size() &&
               name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    auto install = [&](Quantifier q) -> const Quantifier* {
        std::lock_guard<std::mutex> lock(mutex_);
        auto [it, inserted] = table_.emplace(name, std::make_unique<Quantifier>(std::move(q)));
        (void)inserted;
        return it->second.get();
    };

    if (ends_with("_prime")) {
        const Quantifier* base = resolve(name.substr(0, name.size() - 6));
        if (base && base->is_type1()) return install(derive(*base, DeriveMode::prime));
        return nullptr;
    }
    if (ends_with("_dual")) {
        const Quantifier* base = resolve(name.substr(0, name.size() - 5));
        if (base && base->is_type1()) return install(derive(*base, DeriveMode::dual));
        return nullptr;
    }

    auto numeric_suffix = [&](const std::string& prefix) -> std::optional<int> {
        if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0)
            return std::nullopt;
        std::string digits = name.substr(prefix.size());
        for (char c : digits)
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        return std::stoi(digits);
    };
    if (auto k = numeric_suffix("atleast")) {
        if (*k < 1) return nullptr;
        return install(q_atleast(*k));
    }
    if (auto k = numeric_suffix("dep")) {
        if (*k < 1) return nullptr;
        return install(q_dep(*k));
    }
    return nullptr;
}

void QuantifierRegistry::load_config_json(const std::string& json_text) {
    nlohmann::json doc = nlohmann::json::parse(json_text);
    if (!doc.is_array()) throw QuantifierError("quantifier config must be a JSON array");
    for (const auto& entry : doc) {
        std::string name = entry.at("name").get<std::string>();
        std::string builtin = entry.at("builtin").get<std::string>();
        Quantifier q;
        if (builtin == "exists")
            q = q_exists();
        else if (builtin == "forall")
            q = q_forall();
        else if (builtin == "majority")
            q = q_majority();
        else if (builtin == "atleast")
            q = q_atleast(entry.at("k").get<int>());
        else if (builtin == "dep")
            q = q_dep(entry.at("k").get<int>());
        else
            throw QuantifierError("unknown builtin in quantifier config: " + builtin);
        q.name = std::move(name);
        register_quantifier(std::move(q));
    }
}

std::vector<std::string> QuantifierRegistry::base_names() const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [name, q] : table_)
        if (q->derivation == Quantifier::Derivation::base) out.push_back(name);
    return out;
}

}  // namespace teamsem
