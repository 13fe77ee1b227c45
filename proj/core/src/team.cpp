#include "teamsem/team.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace teamsem {

Assignment Assignment::of(std::vector<std::pair<Var, Element>> bindings) {
    std::sort(bindings.begin(), bindings.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < bindings.size(); ++i)
        if (bindings[i - 1].first == bindings[i].first)
            throw TeamError("duplicate variable in assignment: " + bindings[i].first);
    Assignment s;
    s.items_ = std::move(bindings);
    return s;
}

bool Assignment::has(const Var& x) const {
    auto it = std::lower_bound(items_.begin(), items_.end(), x,
                               [](const auto& item, const Var& v) { return item.first < v; });
    return it != items_.end() && it->first == x;
}

const Element& Assignment::at(const Var& x) const {
    auto it = std::lower_bound(items_.begin(), items_.end(), x,
                               [](const auto& item, const Var& v) { return item.first < v; });
    if (it == items_.end() || it->first != x)
        throw TeamError("assignment does not bind variable " + x);
    return it->second;
}

Assignment Assignment::with(const Var& x, const Element& a) const {
    Assignment s = *this;
    auto it = std::lower_bound(s.items_.begin(), s.items_.end(), x,
                               [](const auto& item, const Var& v) { return item.first < v; });
    if (it != s.items_.end() && it->first == x)
        it->second = a;
    else
        s.items_.insert(it, {x, a});
    return s;
}

Assignment Assignment::restricted(const VarSet& vars) const {
    Assignment s;
    for (const auto& item : items_)
        if (vars.count(item.first)) s.items_.push_back(item);
    return s;
}

Assignment Assignment::dropped(const VarSet& vars) const {
    Assignment s;
    for (const auto& item : items_)
        if (!vars.count(item.first)) s.items_.push_back(item);
    return s;
}

Tuple Assignment::tuple(const std::vector<Var>& vars) const {
    Tuple t;
    t.reserve(vars.size());
    for (const Var& v : vars) t.push_back(at(v));
    return t;
}

VarSet Assignment::domain() const {
    VarSet out;
    for (const auto& item : items_) out.insert(item.first);
    return out;
}

std::string Assignment::str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i) out += ", ";
        out += items_[i].first + "->" + items_[i].second.str();
    }
    return out + "}";
}

Team::Team(VarSet vardom, std::set<Assignment> rows) : vardom_(std::move(vardom)) {
    for (const Assignment& s : rows) insert(s);
}

Team Team::singleton_empty() {
    Team t{VarSet{}};
    t.insert(Assignment{});
    return t;
}

void Team::insert(Assignment s) {
    if (s.domain() != vardom_)
        throw TeamError("row domain differs from team domain: " + s.str());
    rows_.insert(std::move(s));
}

std::string Team::str() const {
    std::string out = "{";
    bool first = true;
    for (const auto& s : rows_) {
        if (!first) out += ", ";
        first = false;
        out += s.str();
    }
    return out + "}";
}

Team extend_team(const Team& team, const Var& x,
                 const std::function<std::set<Element>(const Assignment&)>& choice,
                 bool require_nonempty) {
    VarSet vardom = team.vardom();
    vardom.insert(x);
    Team out{std::move(vardom)};
    for (const Assignment& s : team.rows()) {
        std::set<Element> values = choice(s);
        if (values.empty() && require_nonempty)
            throw TeamError("lax extension requires a nonempty value set per row");
        for (const Element& a : values) out.insert(s.with(x, a));
    }
    return out;
}

Team extend_team_constant(const Team& team, const Var& x, const std::set<Element>& values,
                          bool require_nonempty) {
    return extend_team(
        team, x, [&](const Assignment&) { return values; }, require_nonempty);
}

TupleSet rel_projection(const Team& team, const std::vector<Var>& tuple) {
    for (const Var& v : tuple)
        if (!team.vardom().count(v)) throw TeamError("projection variable not in team domain: " + v);
    TupleSet out;
    for (const Assignment& s : team.rows()) out.insert(s.tuple(tuple));
    return out;
}

std::vector<std::pair<Tuple, Team>> group_by(const Team& team, const std::vector<Var>& ys) {
    for (const Var& v : ys)
        if (!team.vardom().count(v)) throw TeamError("grouping variable not in team domain: " + v);
    std::map<Tuple, Team> groups;
    for (const Assignment& s : team.rows()) {
        Tuple key = s.tuple(ys);
        auto it = groups.find(key);
        if (it == groups.end()) it = groups.emplace(key, Team{team.vardom()}).first;
        it->second.insert(s);
    }
    return {groups.begin(), groups.end()};
}

Team restrict_team(const Team& team, const VarSet& vars) {
    VarSet vardom;
    for (const Var& v : team.vardom())
        if (vars.count(v)) vardom.insert(v);
    Team out{vardom};
    for (const Assignment& s : team.rows()) out.insert(s.restricted(vardom));
    return out;
}

// ---------------------------------------------------------------------------
// Text format

Team parse_team(std::string_view text) {
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto expect = [&](std::string_view token) {
        skip_ws();
        if (text.substr(pos, token.size()) != token)
            throw TeamError("expected '" + std::string(token) + "' at offset " + std::to_string(pos));
        pos += token.size();
    };
    auto at_token = [&](std::string_view token) {
        skip_ws();
        return text.substr(pos, token.size()) == token;
    };

    expect("team");
    expect("{");
    expect("vars:");
    std::vector<Var> vars;
    while (true) {
        skip_ws();
        if (pos >= text.size()) throw TeamError("unterminated team");
        if (at_token("row:") || at_token("}")) break;
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
                text[pos] == '\''))
            ++pos;
        if (start == pos) throw TeamError("expected variable at offset " + std::to_string(pos));
        vars.emplace_back(text.substr(start, pos - start));
    }
    VarSet vardom(vars.begin(), vars.end());
    if (vardom.size() != vars.size()) throw TeamError("duplicate variable in team header");

    Team out{vardom};
    while (at_token("row:")) {
        expect("row:");
        std::vector<std::pair<Var, Element>> bindings;
        for (const Var& v : vars) {
            skip_ws();
            std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (start == pos) throw TeamError("expected element at offset " + std::to_string(pos));
            long e = std::stol(std::string(text.substr(start, pos - start)));
            bindings.emplace_back(v, Element::base(static_cast<std::uint32_t>(e)));
        }
        out.insert(Assignment::of(std::move(bindings)));
    }
    expect("}");
    skip_ws();
    if (pos != text.size()) throw TeamError("trailing input after team");
    return out;
}

std::string render_team(const Team& team) {
    std::ostringstream out;
    out << "team { vars:";
    for (const Var& v : team.vardom()) out << " " << v;
    out << "\n";
    std::vector<Var> vars(team.vardom().begin(), team.vardom().end());
    for (const Assignment& s : team.rows()) {
        out << "       row:";
        for (const Var& v : vars) out << " " << s.at(v).str();
        out << "\n";
    }
    out << "}";
    return out.str();
}

}  // namespace teamsem
