#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "teamsem/formula.hpp"
#include "teamsem/model.hpp"

namespace teamsem {

struct ParseError : std::runtime_error {
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " (at offset " + std::to_string(position) + ")"),
          position(position) {}
    std::size_t position;
};

struct ParseOptions {
    // Permissive mode admits '~' in front of arbitrary subformulas (a pre-NNF
    // AST with Not nodes) for to_nnf input. The default grammar allows '~'
    // only on relation and equality literals; in particular a negated team
    // atom is a parse error.
    bool permissive = false;
    // When set, Q{...}/Qd{...}/iatom{...}/gatom{...} names must be members.
    const std::set<std::string>* quantifier_names = nullptr;
};

// Parses the formula grammar:
//
//   phi  ::= lit | '(' phi '&' phi ')' | '(' phi '|' phi ')'
//          | 'E' var phi | 'A' var phi
//          | 'Q{' name '}' var phi | 'Qd{' name '}' var phi
//          | 'I' var phi
//          | '=(' vars ')' | 'inc(' vars ';' vars ')' | 'exc(' vars ';' vars ')'
//          | 'perp(' vars ';' vars ')' | 'perp(' vars ';' vars ';' vars ')'
//          | 'iatom{' name '}(' [vars] ';' var ')'
//          | 'gatom{' name '}(' vars (';' vars)* ')'
//   lit  ::= ['~'] name '(' vars ')' | ['~'] var '=' var
//   vars ::= var (',' var)*
//
// Relation symbols must be declared in `vocab` with matching arity.
FormulaPtr parse_formula(std::string_view text, const Vocabulary& vocab,
                         const ParseOptions& options = {});

// Parses one formula starting at `*pos`, leaving `*pos` after it. Used by
// file formats that embed formulas.
FormulaPtr parse_formula_prefix(std::string_view text, std::size_t* pos, const Vocabulary& vocab,
                                const ParseOptions& options = {});

}  // namespace teamsem
