#include "teamsem/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace teamsem {

Vocabulary::Vocabulary(std::map<std::string, int> symbols) {
    for (const auto& [name, arity] : symbols) add(name, arity);
}

int Vocabulary::arity(const std::string& name) const {
    auto it = symbols_.find(name);
    if (it == symbols_.end()) throw ModelError("unknown relation symbol: " + name);
    return it->second;
}

void Vocabulary::add(const std::string& name, int arity) {
    if (name.empty()) throw ModelError("empty relation symbol name");
    if (arity < 1) throw ModelError("arity must be >= 1 for symbol " + name);
    auto [it, inserted] = symbols_.emplace(name, arity);
    (void)it;
    if (!inserted) throw ModelError("duplicate relation symbol: " + name);
}

std::vector<std::string> Vocabulary::names() const {
    std::vector<std::string> out;
    out.reserve(symbols_.size());
    for (const auto& [name, arity] : symbols_) out.push_back(name);
    return out;
}

Model::Model(Vocabulary vocab, std::vector<Element> domain,
             std::map<std::string, TupleSet> interp)
    : vocab_(std::move(vocab)), domain_(std::move(domain)), interp_(std::move(interp)) {
    if (domain_.empty()) throw ModelError("models with the empty domain are not allowed");
    domain_set_ = std::set<Element>(domain_.begin(), domain_.end());
    if (domain_set_.size() != domain_.size()) throw ModelError("duplicate domain element");
    for (const auto& e : domain_)
        if (e.is_fresh()) ++fresh_count_;
    for (const auto& [name, arity] : vocab_.symbols()) {
        auto it = interp_.find(name);
        if (it == interp_.end()) {
            interp_.emplace(name, TupleSet{});
            continue;
        }
        for (const Tuple& t : it->second) {
            if (static_cast<int>(t.size()) != arity)
                throw ModelError("tuple arity mismatch for symbol " + name);
            for (const Element& e : t)
                if (!domain_set_.count(e))
                    throw ModelError("tuple element outside domain in symbol " + name);
        }
    }
    for (const auto& [name, tuples] : interp_)
        if (!vocab_.contains(name))
            throw ModelError("interpretation for undeclared symbol: " + name);
}

const TupleSet& Model::interp(const std::string& symbol) const {
    auto it = interp_.find(symbol);
    if (it == interp_.end()) throw ModelError("unknown relation symbol: " + symbol);
    return it->second;
}

bool Model::holds(const std::string& symbol, const Tuple& tuple) const {
    return interp(symbol).count(tuple) > 0;
}

Model make_model(std::map<std::string, int> vocab, std::size_t size,
                 std::map<std::string, TupleSet> interp) {
    std::vector<Element> domain;
    domain.reserve(size);
    for (std::size_t i = 0; i < size; ++i) domain.push_back(Element::base(static_cast<std::uint32_t>(i)));
    return Model(Vocabulary(std::move(vocab)), std::move(domain), std::move(interp));
}

Model bloat(const Model& m, std::size_t k) {
    if (k == 0) throw ModelError("bloatings are nonempty: k must be >= 1");
    std::uint32_t next = 0;
    for (const Element& e : m.domain())
        if (e.is_fresh()) next = std::max(next, e.index());
    std::vector<Element> domain = m.domain();
    std::map<std::string, TupleSet> interp;
    for (const auto& name : m.vocab().names()) interp[name] = m.interp(name);
    for (std::size_t i = 1; i <= k; ++i)
        domain.push_back(Element::fresh(next + static_cast<std::uint32_t>(i)));
    return Model(m.vocab(), std::move(domain), std::move(interp));
}

std::vector<Element> fresh_tail(const Model& m, std::size_t k) {
    if (k > m.size()) throw ModelError("fresh_tail: k exceeds domain size");
    std::vector<Element> out(m.domain().end() - static_cast<std::ptrdiff_t>(k), m.domain().end());
    for (const Element& e : out)
        if (!e.is_fresh()) throw ModelError("fresh_tail: trailing elements are not fresh");
    return out;
}

Model expand_unary(const Model& m, const std::string& symbol,
                   const std::set<Element>& interpretation) {
    if (m.vocab().contains(symbol))
        throw ModelError("expansion symbol already in vocabulary: " + symbol);
    Vocabulary vocab = m.vocab();
    vocab.add(symbol, 1);
    std::map<std::string, TupleSet> interp;
    for (const auto& name : m.vocab().names()) interp[name] = m.interp(name);
    TupleSet tuples;
    for (const Element& e : interpretation) {
        if (!m.in_domain(e)) throw ModelError("expansion element outside domain");
        tuples.insert(Tuple{e});
    }
    interp[symbol] = std::move(tuples);
    return Model(std::move(vocab), m.domain(), std::move(interp));
}

// ---------------------------------------------------------------------------
// Word models

static std::string letter_symbol(char c) { return std::string("P_") + c; }

Model word_to_model(std::string_view word, const std::string& alphabet) {
    std::map<std::string, int> vocab;
    vocab["Succ"] = 2;
    for (char c : alphabet) {
        auto [it, inserted] = vocab.emplace(letter_symbol(c), 1);
        (void)it;
        if (!inserted) throw ModelError("duplicate letter in alphabet");
    }
    for (char c : word)
        if (alphabet.find(c) == std::string::npos)
            throw ModelError(std::string("word character outside alphabet: ") + c);

    std::map<std::string, TupleSet> interp;
    TupleSet succ;
    for (std::size_t i = 0; i < word.size(); ++i)
        succ.insert(Tuple{Element::base(static_cast<std::uint32_t>(i)),
                          Element::base(static_cast<std::uint32_t>(i + 1))});
    interp["Succ"] = std::move(succ);
    for (std::size_t i = 0; i < word.size(); ++i)
        interp[letter_symbol(word[i])].insert(Tuple{Element::base(static_cast<std::uint32_t>(i + 1))});

    Model m = make_model(std::move(vocab), word.size() + 1, std::move(interp));
    if (auto err = validate_word_model(m, alphabet))
        throw ModelError("word_to_model produced an invalid word model: " + *err);
    return m;
}

std::optional<std::string> validate_word_model(const Model& m, const std::string& alphabet) {
    if (!m.vocab().contains("Succ") || m.vocab().arity("Succ") != 2)
        return "missing binary Succ";
    for (char c : alphabet)
        if (!m.vocab().contains(letter_symbol(c)) || m.vocab().arity(letter_symbol(c)) != 1)
            return std::string("missing letter predicate for ") + c;

    // Condition 1: Succ is a successor relation, i.e. the edge relation of a
    // linear order with in- and out-degree at most one, covering the domain.
    std::map<Element, Element> next;
    std::set<Element> has_pred;
    for (const Tuple& t : m.interp("Succ")) {
        if (next.count(t[0])) return "out-degree above one in Succ";
        if (has_pred.count(t[1])) return "in-degree above one in Succ";
        next.emplace(t[0], t[1]);
        has_pred.insert(t[1]);
    }
    if (next.size() + 1 != m.size()) return "Succ edge count is not |A|-1";
    std::optional<Element> least;
    for (const Element& e : m.domain())
        if (!has_pred.count(e)) {
            if (least) return "two minimal points";
            least = e;
        }
    if (!least) return "no minimal point";
    std::size_t seen = 1;
    Element cur = *least;
    while (true) {
        auto it = next.find(cur);
        if (it == next.end()) break;
        cur = it->second;
        ++seen;
    }
    if (seen != m.size()) return "Succ chain does not cover the domain";

    // Condition 2: the minimal point carries no letter; every other point
    // carries exactly one.
    for (const Element& e : m.domain()) {
        int letters = 0;
        for (char c : alphabet)
            if (m.holds(letter_symbol(c), Tuple{e})) ++letters;
        if (e == *least) {
            if (letters != 0) return "minimal point carries a letter";
        } else if (letters != 1) {
            return "non-minimal point carries " + std::to_string(letters) + " letters";
        }
    }
    return std::nullopt;
}

std::string model_to_word(const Model& m, const std::string& alphabet) {
    if (auto err = validate_word_model(m, alphabet))
        throw ModelError("not a word model: " + *err);
    std::map<Element, Element> next;
    std::set<Element> has_pred;
    for (const Tuple& t : m.interp("Succ")) {
        next.emplace(t[0], t[1]);
        has_pred.insert(t[1]);
    }
    Element cur = m.domain().front();
    for (const Element& e : m.domain())
        if (!has_pred.count(e)) cur = e;
    std::string word;
    while (true) {
        auto it = next.find(cur);
        if (it == next.end()) break;
        cur = it->second;
        for (char c : alphabet)
            if (m.holds(letter_symbol(c), Tuple{cur})) word += c;
    }
    return word;
}

// ---------------------------------------------------------------------------
// Encodings

static std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

std::string encode_relation(const Model& m, const std::string& symbol,
                            const std::vector<Element>& order) {
    const int k = m.vocab().arity(symbol);
    const std::size_t n = order.size();
    const std::uint64_t count = ipow(n, static_cast<unsigned>(k));
    std::string bits(count, '0');
    // The i-th k-tuple in the lexicographic order of `order` has digits given
    // by i written in base n, most significant digit first.
    Tuple tuple(static_cast<std::size_t>(k));
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint64_t rest = i;
        for (int pos = k - 1; pos >= 0; --pos) {
            tuple[static_cast<std::size_t>(pos)] = order[rest % n];
            rest /= n;
        }
        if (m.holds(symbol, tuple)) bits[i] = '1';
    }
    return bits;
}

std::string encode_model(const Model& m, const std::vector<Element>& order,
                         const std::vector<std::string>& symbol_order) {
    if (order.size() != m.size()) throw ModelError("order is not a permutation of the domain");
    std::set<Element> seen(order.begin(), order.end());
    if (seen.size() != order.size()) throw ModelError("order repeats an element");
    for (const Element& e : order)
        if (!m.in_domain(e)) throw ModelError("order element outside domain");

    std::set<std::string> given(symbol_order.begin(), symbol_order.end());
    if (given.size() != symbol_order.size())
        throw ModelError("symbol_order repeats a symbol");
    if (symbol_order.size() != m.vocab().symbols().size())
        throw ModelError("symbol_order does not enumerate the vocabulary");
    for (const auto& s : symbol_order)
        if (!m.vocab().contains(s)) throw ModelError("symbol_order names unknown symbol " + s);

    std::string out(m.size(), '0');
    out += '1';
    for (const auto& s : symbol_order) out += encode_relation(m, s, order);
    return out;
}

// ---------------------------------------------------------------------------
// Enumeration

double log2_model_space(const Vocabulary& vocab, std::size_t size) {
    double bits = 0;
    for (const auto& [name, arity] : vocab.symbols())
        bits += std::pow(static_cast<double>(size), arity);
    return bits;
}

void enumerate_models(const Vocabulary& vocab, std::size_t size,
                      const std::function<bool(const Model&)>& yield,
                      unsigned max_log2_space) {
    if (size == 0) throw ModelError("model size must be >= 1");
    if (log2_model_space(vocab, size) > static_cast<double>(max_log2_space))
        throw ModelError("model enumeration space exceeds cap");

    std::vector<std::string> names = vocab.names();
    std::vector<std::uint64_t> counts;  // tuples per symbol
    for (const auto& name : names)
        counts.push_back(ipow(size, static_cast<unsigned>(vocab.arity(name))));

    std::vector<Element> order;
    for (std::size_t i = 0; i < size; ++i) order.push_back(Element::base(static_cast<std::uint32_t>(i)));

    std::vector<std::uint64_t> masks(names.size(), 0);
    while (true) {
        std::map<std::string, TupleSet> interp;
        for (std::size_t s = 0; s < names.size(); ++s) {
            const int k = vocab.arity(names[s]);
            TupleSet tuples;
            for (std::uint64_t i = 0; i < counts[s]; ++i) {
                if (!((masks[s] >> i) & 1)) continue;
                Tuple tuple(static_cast<std::size_t>(k));
                std::uint64_t rest = i;
                for (int pos = k - 1; pos >= 0; --pos) {
                    tuple[static_cast<std::size_t>(pos)] = order[rest % size];
                    rest /= size;
                }
                tuples.insert(std::move(tuple));
            }
            interp[names[s]] = std::move(tuples);
        }
        Model m(vocab, order, std::move(interp));
        if (!yield(m)) return;

        // Advance the multi-radix counter of interpretation masks.
        std::size_t s = 0;
        for (; s < names.size(); ++s) {
            if (++masks[s] < (counts[s] >= 64 ? 0 : (std::uint64_t{1} << counts[s]))) break;
            masks[s] = 0;
        }
        if (s == names.size()) return;
    }
}

// ---------------------------------------------------------------------------
// Text format

namespace {

struct TextCursor {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(std::string_view token) {
        skip_ws();
        if (text.substr(pos, token.size()) == token) {
            pos += token.size();
            return true;
        }
        return false;
    }
    void expect(std::string_view token, const char* what) {
        if (!eat(token))
            throw ModelError(std::string("expected ") + what + " at offset " + std::to_string(pos));
    }
    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
                text[pos] == '\''))
            ++pos;
        if (start == pos) throw ModelError("expected identifier at offset " + std::to_string(pos));
        return std::string(text.substr(start, pos - start));
    }
    long number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) throw ModelError("expected number at offset " + std::to_string(pos));
        return std::stol(std::string(text.substr(start, pos - start)));
    }
    bool peek(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }
};

}  // namespace

Model parse_model(std::string_view text) {
    TextCursor cur{text};
    cur.expect("model", "'model'");
    cur.expect("{", "'{'");
    cur.expect("domain:", "'domain:'");
    long n = cur.number();
    if (n < 1) throw ModelError("domain size must be >= 1");

    std::map<std::string, int> vocab;
    std::map<std::string, TupleSet> interp;
    while (cur.eat("relation")) {
        std::string name = cur.ident();
        cur.expect("/", "'/'");
        long arity = cur.number();
        if (arity < 1) throw ModelError("arity must be >= 1 for symbol " + name);
        cur.expect(":", "':'");
        if (vocab.count(name)) throw ModelError("duplicate relation symbol: " + name);
        vocab[name] = static_cast<int>(arity);
        TupleSet tuples;
        while (cur.peek('(')) {
            cur.expect("(", "'('");
            Tuple t;
            for (long i = 0; i < arity; ++i) {
                if (i) cur.expect(",", "','");
                long e = cur.number();
                if (e < 0 || e >= n) throw ModelError("element outside domain in model file");
                t.push_back(Element::base(static_cast<std::uint32_t>(e)));
            }
            cur.expect(")", "')'");
            tuples.insert(std::move(t));
        }
        interp[name] = std::move(tuples);
    }
    cur.expect("}", "'}'");
    cur.skip_ws();
    if (cur.pos != text.size()) throw ModelError("trailing input after model");
    return make_model(std::move(vocab), static_cast<std::size_t>(n), std::move(interp));
}

std::string render_model(const Model& m) {
    std::ostringstream out;
    out << "model { domain: " << m.size() << "\n";
    for (const auto& name : m.vocab().names()) {
        out << "        relation " << name << "/" << m.vocab().arity(name) << ":";
        for (const Tuple& t : m.interp(name)) out << " " << tuple_str(t);
        out << "\n";
    }
    out << "}";
    return out.str();
}

}  // namespace teamsem
