#pragma once

#include <cstdint>
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

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Relation symbols with their arities. Arities are >= 1; names are unique.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::map<std::string, int> symbols);

    bool contains(const std::string& name) const { return symbols_.count(name) > 0; }
    int arity(const std::string& name) const;
    void add(const std::string& name, int arity);

    const std::map<std::string, int>& symbols() const { return symbols_; }
    std::vector<std::string> names() const;

private:
    std::map<std::string, int> symbols_;
};

// A finite relational structure. The domain is an ordered, nonempty list of
// elements; every tuple of every interpretation draws from the domain.
class Model {
public:
    Model(Vocabulary vocab, std::vector<Element> domain,
          std::map<std::string, TupleSet> interp);

    const Vocabulary& vocab() const { return vocab_; }
    const std::vector<Element>& domain() const { return domain_; }
    std::size_t size() const { return domain_.size(); }
    bool in_domain(const Element& e) const { return domain_set_.count(e) > 0; }

    const TupleSet& interp(const std::string& symbol) const;
    bool holds(const std::string& symbol, const Tuple& tuple) const;

    // Number of fresh elements in the domain (all bloat levels so far).
    std::size_t fresh_count() const { return fresh_count_; }

private:
    Vocabulary vocab_;
    std::vector<Element> domain_;
    std::set<Element> domain_set_;
    std::map<std::string, TupleSet> interp_;
    std::size_t fresh_count_ = 0;
};

// Convenience: a model with domain {0, ..., size-1}.
Model make_model(std::map<std::string, int> vocab, std::size_t size,
                 std::map<std::string, TupleSet> interp);

// The finite bloating of `m` by k fresh elements (k >= 1). Relation
// interpretations are unchanged; fresh levels continue after any fresh
// elements already present, so bloating twice by 1 equals bloating by 2.
Model bloat(const Model& m, std::size_t k);

// The k most recently added fresh elements of a bloated model.
std::vector<Element> fresh_tail(const Model& m, std::size_t k);

// Expansion (m, symbol -> set) by a unary predicate. The symbol must be new
// and the set drawn from the domain; the empty set is allowed.
Model expand_unary(const Model& m, const std::string& symbol,
                   const std::set<Element>& interpretation);

// ---------------------------------------------------------------------------
// Word models

// Builds the word model of `word` over `alphabet`: domain {0, ..., |word|},
// canonical successor, position i >= 1 carrying exactly the letter predicate
// P_<c> of the i-th character. Position 0 carries no letter; the empty word
// yields the one-element model.
Model word_to_model(std::string_view word, const std::string& alphabet);

// Checks the two word-model conditions (successor shape; letter predicates).
// Returns an error description, or nullopt if `m` is a word model.
std::optional<std::string> validate_word_model(const Model& m, const std::string& alphabet);

// Reads the word back from a word model. Throws ModelError if `m` fails
// validation.
std::string model_to_word(const Model& m, const std::string& alphabet);

// ---------------------------------------------------------------------------
// Binary encodings

// enc(m) = 0^|A| . 1 . enc(R_1) ... enc(R_p), where enc(R) has |A|^k bits and
// bit i is 1 iff the i-th k-tuple in the lexicographic order induced by
// `order` lies in R. `order` must be a permutation of the domain and
// `symbol_order` must enumerate the vocabulary exactly once.
std::string encode_model(const Model& m, const std::vector<Element>& order,
                         const std::vector<std::string>& symbol_order);

// Single-relation encoding (the enc(R) block above).
std::string encode_relation(const Model& m, const std::string& symbol,
                            const std::vector<Element>& order);

// ---------------------------------------------------------------------------
// Enumeration

// Yields every labeled model over `vocab` with domain {0, ..., size-1},
// each exactly once, in a fixed order (symbols sorted by name, interpretation
// bitmasks counting up). The callback returns false to stop early. Throws
// ModelError if the interpretation space exceeds `max_log2_space` bits.
void enumerate_models(const Vocabulary& vocab, std::size_t size,
                      const std::function<bool(const Model&)>& yield,
                      unsigned max_log2_space = 24);

// Number of labeled models over `vocab` at the given size, as log2.
double log2_model_space(const Vocabulary& vocab, std::size_t size);

// ---------------------------------------------------------------------------
// Text format
//
//   model { domain: 3
//           relation R/2: (0,1) (1,2)
//           relation P/1: (0) }
//
// Elements are 0-based integers; fresh elements render as f1, f2, ... in
// output but are not accepted in input files.

Model parse_model(std::string_view text);
std::string render_model(const Model& m);

}  // namespace teamsem
