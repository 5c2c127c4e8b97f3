#pragma once

// Expression grammar and canonical rendering.
//
//   expr     := term { ("+" | "-") term }
//   term     := [ "-" ] factor { "*" factor }
//   factor   := base [ "^" integer ]     (negative exponent only for hbar)
//   base     := rational | "i" | "hbar" | var | "(" expr ")"
//   var      := ("q"|"p") index          classical, lowercase
//             | ("Q"|"P") index          operator, uppercase
//   rational := integer [ "/" positive-integer ]
//
// Rendering is deterministic and canonical: monomials in degree-descending
// graded-lex order, hbar powers ascending inside a monomial; text round-trips
// through the parser exactly.

#include "moyal/op_poly.hpp"
#include "moyal/phase_poly.hpp"

#include <cctype>
#include <optional>
#include <string>

namespace moyal {

namespace detail {

struct Lexer {
    const std::string& text;
    size_t pos = 0;
    int line = 1;
    int col = 1;

    explicit Lexer(const std::string& t) : text(t) {}

    void skip_space() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n')) {
            if (text[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    }
    bool eof() {
        skip_space();
        return pos >= text.size();
    }
    char peek() {
        skip_space();
        return pos < text.size() ? text[pos] : '\0';
    }
    void advance() {
        ++pos;
        ++col;
    }
    [[noreturn]] void fail(const std::string& expected) {
        std::string got = pos < text.size() ? std::string(1, text[pos]) : "end of input";
        throw parse_error("expected " + expected + ", got '" + got + "'", line, col);
    }
    Integer integer_literal() {
        skip_space();
        bool neg = false;
        if (pos < text.size() && text[pos] == '-') {
            neg = true;
            advance();
        }
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            fail("integer");
        Integer v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            v = v * 10 + (text[pos] - '0');
            advance();
        }
        return neg ? -v : v;
    }
    int small_index() {
        skip_space();
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            fail("variable index");
        long v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            v = v * 10 + (text[pos] - '0');
            if (v > 1'000'000) fail("reasonable variable index");
            advance();
        }
        return static_cast<int>(v);
    }
    bool match_word(const char* w) {
        skip_space();
        size_t len = std::char_traits<char>::length(w);
        if (text.compare(pos, len, w) != 0) return false;
        for (size_t j = 0; j < len; ++j) advance();
        return true;
    }
};

// Algebra adapters let one recursive-descent body serve both grammars.
struct ClassicalAlgebra {
    using Value = PhasePolynomial;
    int dof;
    static constexpr char kQ = 'q';
    static constexpr char kP = 'p';
    Value constant(Coefficient c) const { return PhasePolynomial::constant(dof, std::move(c)); }
    Value variable(bool is_p, int mode) const {
        return PhasePolynomial::variable(dof, is_p ? dof + mode : mode);
    }
    static Value mul(const Value& a, const Value& b) { return a * b; }
};

struct OperatorAlgebra {
    using Value = OperatorPolynomial;
    int dof;
    static constexpr char kQ = 'Q';
    static constexpr char kP = 'P';
    Value constant(Coefficient c) const { return OperatorPolynomial::constant(dof, std::move(c)); }
    Value variable(bool is_p, int mode) const {
        return OperatorPolynomial::letter(dof, static_cast<uint32_t>(is_p ? dof + mode : mode));
    }
    static Value mul(const Value& a, const Value& b) { return op_mul(a, b); }
};

template <class Alg>
class Parser {
  public:
    Parser(const std::string& text, Alg alg) : lex_(text), alg_(alg) {}

    typename Alg::Value parse() {
        auto v = expr();
        if (!lex_.eof()) lex_.fail("'+', '-', '*' or end of input");
        return v;
    }

  private:
    using Value = typename Alg::Value;
    Lexer lex_;
    Alg alg_;

    Value expr() {
        Value v = term();
        while (!lex_.eof()) {
            char c = lex_.peek();
            if (c == '+') {
                lex_.advance();
                v = v + term();
            } else if (c == '-') {
                lex_.advance();
                v = v - term();
            } else {
                break;
            }
        }
        return v;
    }

    Value term() {
        bool neg = false;
        if (lex_.peek() == '-') {
            lex_.advance();
            neg = true;
        }
        Value v = factor();
        while (!lex_.eof() && lex_.peek() == '*') {
            lex_.advance();
            v = Alg::mul(v, factor());
        }
        return neg ? Alg::mul(alg_.constant(Coefficient(Rational(-1))), v) : v;
    }

    Value factor() {
        bool was_hbar = false;
        Value v = base(was_hbar);
        if (!lex_.eof() && lex_.peek() == '^') {
            lex_.advance();
            int l = lex_.line, c = lex_.col;
            Integer e = lex_.integer_literal();
            if (e < 0) {
                if (!was_hbar)
                    throw parse_error("negative exponent allowed only for hbar", l, c);
                return alg_.constant(Coefficient::hbar(static_cast<int>(e)));
            }
            if (e > 64) throw parse_error("exponent too large", l, c);
            Value r = alg_.constant(Coefficient::one());
            for (Integer j = 0; j < e; ++j) r = Alg::mul(r, v);
            return r;
        }
        return v;
    }

    Value base(bool& was_hbar) {
        char c = lex_.peek();
        if (c == '(') {
            lex_.advance();
            Value v = expr();
            if (lex_.peek() != ')') lex_.fail("')'");
            lex_.advance();
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Integer num = lex_.integer_literal();
            if (!lex_.eof() && lex_.peek() == '/') {
                lex_.advance();
                int l = lex_.line, cc = lex_.col;
                Integer den = lex_.integer_literal();
                if (den <= 0) throw parse_error("denominator must be positive", l, cc);
                return alg_.constant(Coefficient(Rational(num) / Rational(den)));
            }
            return alg_.constant(Coefficient(Rational(num)));
        }
        if (lex_.match_word("hbar")) {
            was_hbar = true;
            return alg_.constant(Coefficient::hbar(1));
        }
        if (c == 'i') {
            lex_.advance();
            return alg_.constant(Coefficient::unit_i());
        }
        if (c == Alg::kQ || c == Alg::kP) {
            bool is_p = c == Alg::kP;
            lex_.advance();
            int l = lex_.line, cc = lex_.col;
            int mode = lex_.small_index();
            if (mode >= alg_.dof)
                throw structural_error("variable index " + std::to_string(mode) +
                                       " out of range for dof " + std::to_string(alg_.dof) +
                                       " (at " + std::to_string(l) + ":" + std::to_string(cc) + ")");
            return alg_.variable(is_p, mode);
        }
        lex_.fail(std::string("rational, 'i', 'hbar', '") + Alg::kQ + "'/'" + Alg::kP +
                  "' variable or '('");
    }
};

inline std::string render_rational(const Rational& r) { return rational_to_string(r); }

// coefficient factors for one (hbar power, Gaussian rational) slice; the sign
// has already been extracted by the caller for pure-axis values
inline void coefficient_factors(const GaussianRational& v, int hbar_pow, bool unit_suppressible,
                                std::vector<std::string>& factors) {
    if (v.im == 0) {
        if (!(v.re == 1 && (unit_suppressible || hbar_pow != 0)))
            factors.push_back(render_rational(v.re));
    } else if (v.re == 0) {
        if (v.im != 1) factors.push_back(render_rational(v.im));
        factors.push_back("i");
    } else {
        std::string im_part = v.im < 0 ? render_rational(-v.im) : render_rational(v.im);
        std::string s = render_rational(v.re);
        s += v.im < 0 ? "-" : "+";
        if (im_part != "1") s += im_part + "*";
        s += "i";
        factors.push_back("(" + s + ")");
    }
    if (hbar_pow == 1) {
        factors.push_back("hbar");
    } else if (hbar_pow != 0) {
        factors.push_back("hbar^" + std::to_string(hbar_pow));
    }
}

inline void append_power(std::vector<std::string>& factors, char letter, int mode, uint32_t e) {
    if (e == 0) return;
    std::string f = std::string(1, letter) + std::to_string(mode);
    if (e > 1) f += "^" + std::to_string(e);
    factors.push_back(f);
}

struct FlatTerm {
    std::vector<std::string> monomial_factors;
    bool monomial_trivial;
    int hbar_pow;
    GaussianRational value;
};

inline std::string assemble_terms(const std::vector<FlatTerm>& flat) {
    if (flat.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto& t : flat) {
        GaussianRational v = t.value;
        bool negative = false;
        if (v.im == 0 ? v.re < 0 : (v.re == 0 && v.im < 0)) {
            negative = true;
            v = -v;
        }
        std::vector<std::string> factors;
        coefficient_factors(v, t.hbar_pow, !t.monomial_trivial, factors);
        for (auto& f : t.monomial_factors) factors.push_back(f);
        if (factors.empty()) factors.push_back("1");
        std::string term;
        for (size_t j = 0; j < factors.size(); ++j) {
            if (j) term += "*";
            term += factors[j];
        }
        if (first) {
            out = (negative ? "-" : "") + term;
            first = false;
        } else {
            out += (negative ? " - " : " + ") + term;
        }
    }
    return out;
}

}  // namespace detail

inline PhasePolynomial parse_classical(const std::string& text, int dof) {
    detail::Parser<detail::ClassicalAlgebra> p(text, {dof});
    return p.parse();
}

inline OperatorPolynomial parse_operator(const std::string& text, int dof) {
    detail::Parser<detail::OperatorAlgebra> p(text, {dof});
    return p.parse();
}

inline std::string render(const PhasePolynomial& a) {
    std::vector<detail::FlatTerm> flat;
    for (auto it = a.terms().rbegin(); it != a.terms().rend(); ++it) {
        const Monomial& m = it->first;
        std::vector<std::string> mono;
        for (int i = 0; i < a.dof(); ++i) detail::append_power(mono, 'q', i, m.qe[i]);
        for (int i = 0; i < a.dof(); ++i) detail::append_power(mono, 'p', i, m.pe[i]);
        for (auto& [k, v] : it->second.terms()) flat.push_back({mono, m.is_one(), k, v});
    }
    return detail::assemble_terms(flat);
}

inline std::string render(const OperatorPolynomial& x) {
    std::vector<detail::FlatTerm> flat;
    for (auto it = x.terms().rbegin(); it != x.terms().rend(); ++it) {
        const OperatorWord& w = it->first;
        std::vector<std::string> mono;
        // normal-ordered words are ascending runs: collapse to powers
        size_t j = 0;
        while (j < w.size()) {
            size_t run = j;
            while (run < w.size() && w[run] == w[j]) ++run;
            uint32_t l = w[j];
            bool is_p = l >= static_cast<uint32_t>(x.dof());
            detail::append_power(mono, is_p ? 'P' : 'Q',
                                 static_cast<int>(is_p ? l - x.dof() : l),
                                 static_cast<uint32_t>(run - j));
            j = run;
        }
        for (auto& [k, v] : it->second.terms()) flat.push_back({mono, w.empty(), k, v});
    }
    return detail::assemble_terms(flat);
}

}  // namespace moyal
