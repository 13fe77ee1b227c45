#include "teamsem/parse.hpp"

#include <cctype>

namespace teamsem {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Parser {
public:
    Parser(std::string_view text, const Vocabulary& vocab, const ParseOptions& options)
        : text_(text), vocab_(vocab), options_(options) {}

    FormulaPtr parse_all() {
        FormulaPtr f = parse_phi();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input after formula");
        return f;
    }

    FormulaPtr parse_prefix(std::size_t* pos) {
        pos_ = *pos;
        FormulaPtr f = parse_phi();
        *pos = pos_;
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    char peek() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        return text_[pos_];
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    bool try_eat(char c) {
        if (at_end() || text_[pos_] != c) return false;
        ++pos_;
        return true;
    }

    std::string ident() {
        skip_ws();
        if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail("expected identifier");
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    Var var_name() {
        skip_ws();
        std::size_t at = pos_;
        std::string name = ident();
        if (!std::islower(static_cast<unsigned char>(name[0]))) {
            pos_ = at;
            fail("expected variable (lowercase identifier)");
        }
        return name;
    }

    std::vector<Var> var_list() {
        std::vector<Var> vars;
        vars.push_back(var_name());
        while (try_eat(',')) vars.push_back(var_name());
        return vars;
    }

    // The next token after an identifier decides the production; peeks past
    // whitespace without consuming.
    char lookahead_after_ws(std::size_t from) const {
        while (from < text_.size() && std::isspace(static_cast<unsigned char>(text_[from]))) ++from;
        return from < text_.size() ? text_[from] : '\0';
    }

    std::string quantifier_name() {
        expect('{');
        std::string name = ident();
        if (options_.quantifier_names && !options_.quantifier_names->count(name))
            fail("undeclared quantifier name: " + name);
        expect('}');
        return name;
    }

    FormulaPtr relation_literal(bool positive, const std::string& symbol) {
        std::size_t at = pos_;
        expect('(');
        std::vector<Var> args = var_list();
        expect(')');
        if (!vocab_.contains(symbol)) {
            pos_ = at;
            fail("undeclared relation symbol: " + symbol);
        }
        if (vocab_.arity(symbol) != static_cast<int>(args.size())) {
            pos_ = at;
            fail("arity mismatch for relation symbol: " + symbol);
        }
        return rel(symbol, std::move(args), positive);
    }

    FormulaPtr parse_negated() {
        // '~' was consumed. The strict grammar allows only literals here.
        skip_ws();
        if (pos_ < text_.size() && !is_ident_start(text_[pos_])) {
            if (options_.permissive) return lnot(parse_phi());
            if (text_[pos_] == '=') fail("negated team atom");
            fail("expected literal after '~'");
        }
        std::size_t at = pos_;
        std::string name = ident();
        char next = lookahead_after_ws(pos_);
        if (next == '(' && name != "iatom" && name != "gatom" && name != "inc" && name != "exc" &&
            name != "perp")
            return relation_literal(false, name);
        if (next == '=') {
            pos_ = at;
            Var lhs = var_name();
            expect('=');
            Var rhs = var_name();
            return eq(std::move(lhs), std::move(rhs), false);
        }
        pos_ = at;
        if (options_.permissive) return lnot(parse_phi());
        if (name == "iatom" || name == "gatom" || name == "inc" || name == "exc" || name == "perp")
            fail("negated team atom");
        fail("expected literal after '~'");
    }

    FormulaPtr parse_phi() {
        char c = peek();
        if (c == '~') {
            ++pos_;
            return parse_negated();
        }
        if (c == '(') {
            ++pos_;
            FormulaPtr left = parse_phi();
            char op = peek();
            if (op != '&' && op != '|') fail("expected '&' or '|'");
            ++pos_;
            FormulaPtr right = parse_phi();
            expect(')');
            return op == '&' ? conj(std::move(left), std::move(right))
                             : disj(std::move(left), std::move(right));
        }
        if (c == '=') {
            ++pos_;
            expect('(');
            std::vector<Var> vars = var_list();
            expect(')');
            return dep(std::move(vars));
        }
        if (!is_ident_start(c)) fail("expected formula");

        std::size_t at = pos_;
        std::string head = ident();
        char next = lookahead_after_ws(pos_);

        if (head == "E" && next != '(') return exists(var_name(), parse_phi());
        if (head == "A" && next != '(') return forall(var_name(), parse_phi());
        if (head == "I" && next != '(') return iop(var_name(), parse_phi());
        if (head == "Q" && next == '{') {
            std::string name = quantifier_name();
            return quant(std::move(name), false, var_name(), parse_phi());
        }
        if (head == "Qd" && next == '{') {
            std::string name = quantifier_name();
            return quant(std::move(name), true, var_name(), parse_phi());
        }
        if (head == "inc" && next == '(') {
            expect('(');
            std::vector<Var> left = var_list();
            expect(';');
            std::vector<Var> right = var_list();
            expect(')');
            if (left.size() != right.size()) {
                pos_ = at;
                fail("inclusion atom: tuples must have equal length");
            }
            return incl(std::move(left), std::move(right));
        }
        if (head == "exc" && next == '(') {
            expect('(');
            std::vector<Var> left = var_list();
            expect(';');
            std::vector<Var> right = var_list();
            expect(')');
            if (left.size() != right.size()) {
                pos_ = at;
                fail("exclusion atom: tuples must have equal length");
            }
            return excl(std::move(left), std::move(right));
        }
        if (head == "perp" && next == '(') {
            expect('(');
            std::vector<Var> xs = var_list();
            expect(';');
            // perp(xs ; ys), perp(xs ;; ys), or perp(xs ; cond ; ys).
            std::vector<Var> middle;
            if (peek() != ';') middle = var_list();
            if (try_eat(';')) {
                std::vector<Var> ys = var_list();
                expect(')');
                return indep(std::move(xs), std::move(middle), std::move(ys));
            }
            expect(')');
            return indep(std::move(xs), {}, std::move(middle));
        }
        if (head == "iatom" && next == '{') {
            std::string name = quantifier_name();
            expect('(');
            std::vector<Var> ys;
            if (peek() != ';') ys = var_list();
            expect(';');
            Var x = var_name();
            expect(')');
            return induced(std::move(name), std::move(ys), std::move(x));
        }
        if (head == "gatom" && next == '{') {
            std::string name = quantifier_name();
            expect('(');
            std::vector<std::vector<Var>> tuples;
            tuples.push_back(var_list());
            while (try_eat(';')) tuples.push_back(var_list());
            expect(')');
            return gatom(std::move(name), std::move(tuples));
        }
        if (next == '(') return relation_literal(true, head);
        if (next == '=') {
            pos_ = at;
            Var lhs = var_name();
            expect('=');
            Var rhs = var_name();
            return eq(std::move(lhs), std::move(rhs));
        }
        pos_ = at;
        fail("expected formula");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    const Vocabulary& vocab_;
    const ParseOptions& options_;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text, const Vocabulary& vocab,
                         const ParseOptions& options) {
    return Parser(text, vocab, options).parse_all();
}

FormulaPtr parse_formula_prefix(std::string_view text, std::size_t* pos, const Vocabulary& vocab,
                                const ParseOptions& options) {
    return Parser(text, vocab, options).parse_prefix(pos);
}

}  // namespace teamsem
