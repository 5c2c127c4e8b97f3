#pragma once

// Noncommutative words in the canonical operators, reduced to a standard-
// ordered normal form under [q_i, p_j] = i*hbar*delta_ij.  Standard order per
// word: all q letters before all p letters, mode indices ascending.

#include "moyal/phase_poly.hpp"

#include <utility>
#include <vector>

namespace moyal {

// A word is a sequence of canonical-variable indices (0..N-1 = q, N..2N-1 = p).
using OperatorWord = std::vector<uint32_t>;

struct WordLess {
    bool operator()(const OperatorWord& a, const OperatorWord& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

// Expansion of an operator in the basis of fully symmetrized products; since
// the order inside a symmetrized product is immaterial, a commutative Monomial
// indexes each basis element.
struct SymmetrizedExpansion {
    int dof = 1;
    std::map<Monomial, Coefficient, MonomialLess> terms;

    void add_term(const Monomial& m, const Coefficient& c) {
        if (c.is_zero()) return;
        auto it = terms.find(m);
        if (it == terms.end()) {
            terms.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }
    friend bool operator==(const SymmetrizedExpansion& a, const SymmetrizedExpansion& b) {
        return a.dof == b.dof && a.terms == b.terms;
    }
};

class OperatorPolynomial {
  public:
    using Terms = std::map<OperatorWord, Coefficient, WordLess>;

    explicit OperatorPolynomial(int dof = 1) : dof_(dof) {
        if (dof < 1) throw structural_error("dof must be positive");
    }

    static OperatorPolynomial zero(int dof) { return OperatorPolynomial(dof); }
    static OperatorPolynomial identity(int dof) {
        return constant(dof, Coefficient::one());
    }
    static OperatorPolynomial constant(int dof, Coefficient c) {
        OperatorPolynomial r(dof);
        r.add_normal_term({}, std::move(c));
        return r;
    }
    static OperatorPolynomial letter(int dof, uint32_t var) {
        if (var >= static_cast<uint32_t>(2 * dof))
            throw structural_error("operator letter out of range");
        OperatorPolynomial r(dof);
        r.add_normal_term({var}, Coefficient::one());
        return r;
    }
    static OperatorPolynomial q(int dof, int mode) { return letter(dof, mode); }
    static OperatorPolynomial p(int dof, int mode) { return letter(dof, dof + mode); }

    // Build from an arbitrary (not necessarily ordered) word.
    static OperatorPolynomial from_word(int dof, const OperatorWord& word,
                                        Coefficient c = Coefficient::one()) {
        for (auto l : word)
            if (l >= static_cast<uint32_t>(2 * dof))
                throw structural_error("operator letter out of range");
        OperatorPolynomial r(dof);
        r.accumulate_normalized(word, c);
        return r;
    }

    int dof() const { return dof_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    unsigned degree() const {
        unsigned d = 0;
        for (auto& [w, c] : terms_) d = std::max<unsigned>(d, w.size());
        return d;
    }

    friend OperatorPolynomial operator+(const OperatorPolynomial& a, const OperatorPolynomial& b) {
        a.check_dof(b);
        OperatorPolynomial r = a;
        for (auto& [w, c] : b.terms_) r.add_normal_term(w, c);
        return r;
    }
    friend OperatorPolynomial operator-(const OperatorPolynomial& a, const OperatorPolynomial& b) {
        a.check_dof(b);
        OperatorPolynomial r = a;
        for (auto& [w, c] : b.terms_) r.add_normal_term(w, -c);
        return r;
    }
    friend OperatorPolynomial operator-(const OperatorPolynomial& a) {
        OperatorPolynomial r(a.dof_);
        for (auto& [w, c] : a.terms_) r.terms_.emplace(w, -c);
        return r;
    }
    friend OperatorPolynomial operator*(const Coefficient& s, const OperatorPolynomial& a) {
        OperatorPolynomial r(a.dof_);
        for (auto& [w, c] : a.terms_) r.add_normal_term(w, s * c);
        return r;
    }
    friend bool operator==(const OperatorPolynomial& a, const OperatorPolynomial& b) {
        return a.dof_ == b.dof_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const OperatorPolynomial& a, const OperatorPolynomial& b) {
        return !(a == b);
    }
    OperatorPolynomial& operator+=(const OperatorPolynomial& b) { return *this = *this + b; }
    OperatorPolynomial& operator-=(const OperatorPolynomial& b) { return *this = *this - b; }

    OperatorPolynomial scaled(const Coefficient& s) const { return s * *this; }

    int min_hbar_power() const {
        bool first = true;
        int mn = 0;
        for (auto& [w, c] : terms_) {
            int k = c.min_hbar_power();
            if (first || k < mn) mn = k;
            first = false;
        }
        return mn;
    }
    bool hbar_polynomial() const { return min_hbar_power() >= 0; }

    void check_dof(const OperatorPolynomial& other) const {
        if (dof_ != other.dof_) throw structural_error("dof mismatch");
    }

    // Insert a term already known to be standard-ordered.
    void add_normal_term(const OperatorWord& w, const Coefficient& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(w);
        if (it == terms_.end()) {
            terms_.emplace(w, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    // Rewrite an arbitrary word to standard order (p_i q_j = q_j p_i - i*hbar
    // delta_ij, applied at the first inversion) and accumulate the result.
    void accumulate_normalized(OperatorWord word, Coefficient coeff) {
        std::vector<std::pair<OperatorWord, Coefficient>> stack;
        stack.emplace_back(std::move(word), std::move(coeff));
        const uint32_t n = static_cast<uint32_t>(dof_);
        while (!stack.empty()) {
            auto [w, c] = std::move(stack.back());
            stack.pop_back();
            size_t k = 0;
            bool ordered = true;
            for (; k + 1 < w.size(); ++k) {
                if (w[k] > w[k + 1]) {
                    ordered = false;
                    break;
                }
            }
            if (ordered) {
                add_normal_term(w, c);
                continue;
            }
            // swapped word
            OperatorWord sw = w;
            std::swap(sw[k], sw[k + 1]);
            // commutator correction: nonzero only for p_j q_j at the left
            if (w[k] >= n && w[k + 1] + n == w[k]) {
                OperatorWord contracted;
                contracted.reserve(w.size() - 2);
                contracted.insert(contracted.end(), w.begin(), w.begin() + k);
                contracted.insert(contracted.end(), w.begin() + k + 2, w.end());
                // [p_j, q_j] = -i hbar
                Coefficient corr = c * Coefficient(GaussianRational(Rational(0), Rational(-1)), 1);
                stack.emplace_back(std::move(contracted), std::move(corr));
            }
            stack.emplace_back(std::move(sw), std::move(c));
        }
    }

  private:
    int dof_;
    Terms terms_;
};

inline OperatorPolynomial op_mul(const OperatorPolynomial& x, const OperatorPolynomial& y) {
    x.check_dof(y);
    OperatorPolynomial r(x.dof());
    for (auto& [wx, cx] : x.terms()) {
        for (auto& [wy, cy] : y.terms()) {
            OperatorWord w = wx;
            w.insert(w.end(), wy.begin(), wy.end());
            r.accumulate_normalized(std::move(w), cx * cy);
        }
    }
    return r;
}

inline OperatorPolynomial commutator(const OperatorPolynomial& x, const OperatorPolynomial& y) {
    return op_mul(x, y) - op_mul(y, x);
}

inline OperatorPolynomial dagger(const OperatorPolynomial& x) {
    OperatorPolynomial r(x.dof());
    for (auto& [w, c] : x.terms()) {
        OperatorWord rev(w.rbegin(), w.rend());
        r.accumulate_normalized(std::move(rev), c.conj());
    }
    return r;
}

// Expand X in the symmetrized-product basis by peeling letters from the left
// with single Wick contractions:
//   O_l (S)_+ = (l S)_+ + sum_{x in S} <O_l O_x> (S \ x)_+ ,
// propagator <q_j p_j> = i hbar/2, <p_j q_j> = -i hbar/2.
inline SymmetrizedExpansion symmetrize(const OperatorPolynomial& x) {
    const int n = x.dof();
    SymmetrizedExpansion out;
    out.dof = n;
    const Coefficient half_i_hbar(GaussianRational(Rational(0), Rational(1, 2)), 1);
    for (auto& [word, coeff] : x.terms()) {
        // running expansion of the suffix of the word
        std::map<Monomial, Coefficient, MonomialLess> acc;
        acc.emplace(Monomial(n), Coefficient::one());
        for (auto it = word.rbegin(); it != word.rend(); ++it) {
            uint32_t l = *it;
            std::map<Monomial, Coefficient, MonomialLess> next;
            auto add = [&](const Monomial& m, const Coefficient& c) {
                if (c.is_zero()) return;
                auto jt = next.find(m);
                if (jt == next.end()) {
                    next.emplace(m, c);
                } else {
                    jt->second += c;
                    if (jt->second.is_zero()) next.erase(jt);
                }
            };
            const bool is_q = l < static_cast<uint32_t>(n);
            const uint32_t mode = is_q ? l : l - n;
            for (auto& [m, c] : acc) {
                Monomial grown = m;
                grown.exponent(l) += 1;
                add(grown, c);
                // contraction with each occurrence of the conjugate letter
                uint32_t mult = is_q ? m.pe[mode] : m.qe[mode];
                if (mult > 0) {
                    Monomial shrunk = m;
                    if (is_q)
                        shrunk.pe[mode] -= 1;
                    else
                        shrunk.qe[mode] -= 1;
                    Coefficient prop = half_i_hbar * Coefficient(GaussianRational(Rational(mult)));
                    if (!is_q) prop = -prop;
                    add(shrunk, c * prop);
                }
            }
            acc = std::move(next);
        }
        for (auto& [m, c] : acc) out.add_term(m, coeff * c);
    }
    return out;
}

// Normal form of the fully symmetrized product indexed by a commutative
// monomial: the inverse recursion of symmetrize, peeling the lowest letter.
inline OperatorPolynomial symmetrized_product(int dof, const Monomial& m) {
    if (m.is_one()) return OperatorPolynomial::identity(dof);
    int l = -1;
    for (int v = 0; v < 2 * dof; ++v) {
        if (m.exponent(v) > 0) {
            l = v;
            break;
        }
    }
    Monomial rest = m;
    rest.exponent(l) -= 1;
    OperatorPolynomial tail = symmetrized_product(dof, rest);
    OperatorPolynomial r = op_mul(OperatorPolynomial::letter(dof, l), tail);
    const bool is_q = l < dof;
    const uint32_t mode = is_q ? l : l - dof;
    uint32_t mult = is_q ? rest.pe[mode] : rest.qe[mode];
    if (mult > 0) {
        Monomial shrunk = rest;
        if (is_q)
            shrunk.pe[mode] -= 1;
        else
            shrunk.qe[mode] -= 1;
        Coefficient prop(GaussianRational(Rational(0), is_q ? Rational(mult, 2) : Rational(-mult, 2)), 1);
        r -= prop * symmetrized_product(dof, shrunk);
    }
    return r;
}

inline OperatorPolynomial reconstruct(const SymmetrizedExpansion& e) {
    OperatorPolynomial r(e.dof);
    for (auto& [m, c] : e.terms) r += c * symmetrized_product(e.dof, m);
    return r;
}

// Heisenberg coefficients A_n = (i/hbar)^n / n! [H,[H,...[H,A]...]] for n <= K.
inline std::vector<OperatorPolynomial> op_heisenberg_series(const OperatorPolynomial& h,
                                                            const OperatorPolynomial& a,
                                                            unsigned k) {
    h.check_dof(a);
    const bool check_poly = h.hbar_polynomial() && a.hbar_polynomial();
    const Coefficient i_over_hbar(GaussianRational(Rational(0), Rational(1)), -1);
    std::vector<OperatorPolynomial> out;
    out.reserve(k + 1);
    out.push_back(a);
    for (unsigned n = 0; n < k; ++n) {
        OperatorPolynomial next = i_over_hbar * commutator(h, out.back());
        OperatorPolynomial scaled(h.dof());
        for (auto& [w, c] : next.terms())
            scaled.add_normal_term(w, c.div_rational(Rational(n + 1)));
        if (check_poly && !scaled.hbar_polynomial())
            throw consistency_error("Heisenberg coefficient acquired a negative hbar power");
        out.push_back(std::move(scaled));
    }
    return out;
}

}  // namespace moyal
