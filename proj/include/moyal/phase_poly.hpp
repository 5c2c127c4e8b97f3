#pragma once

// Commutative multivariate polynomials in q_1..q_N, p_1..p_N over Coefficient:
// the algebra of classical observables (Weyl symbols).

#include "moyal/scalar.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

namespace moyal {

// Canonical variable indexing: var 0..N-1 are q_0..q_{N-1}, var N..2N-1 are
// p_0..p_{N-1}.
struct Monomial {
    std::vector<uint32_t> qe;
    std::vector<uint32_t> pe;

    explicit Monomial(int dof = 0) : qe(dof, 0), pe(dof, 0) {}

    int dof() const { return static_cast<int>(qe.size()); }
    unsigned total_degree() const {
        unsigned d = 0;
        for (auto e : qe) d += e;
        for (auto e : pe) d += e;
        return d;
    }
    bool is_one() const { return total_degree() == 0; }

    uint32_t exponent(int var) const {
        int n = dof();
        return var < n ? qe[var] : pe[var - n];
    }
    uint32_t& exponent(int var) {
        int n = dof();
        return var < n ? qe[var] : pe[var - n];
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial r = a;
        for (size_t i = 0; i < r.qe.size(); ++i) {
            r.qe[i] += b.qe[i];
            r.pe[i] += b.pe[i];
        }
        return r;
    }
    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.qe == b.qe && a.pe == b.pe;
    }
};

// Graded order: total degree first, then lexicographic on q then p exponents.
// Maps iterate ascending; rendering walks in reverse for degree-descending
// display.
struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        unsigned da = a.total_degree(), db = b.total_degree();
        if (da != db) return da < db;
        if (a.qe != b.qe) return a.qe < b.qe;
        return a.pe < b.pe;
    }
};

class PhasePolynomial {
  public:
    using Terms = std::map<Monomial, Coefficient, MonomialLess>;

    explicit PhasePolynomial(int dof = 1) : dof_(dof) {
        if (dof < 1) throw structural_error("dof must be positive");
    }

    static PhasePolynomial zero(int dof) { return PhasePolynomial(dof); }
    static PhasePolynomial constant(int dof, Coefficient c) {
        PhasePolynomial r(dof);
        r.add_term(Monomial(dof), std::move(c));
        return r;
    }
    static PhasePolynomial one(int dof) { return constant(dof, Coefficient::one()); }
    // var in [0, 2N)
    static PhasePolynomial variable(int dof, int var) {
        if (var < 0 || var >= 2 * dof) throw structural_error("variable index out of range");
        PhasePolynomial r(dof);
        Monomial m(dof);
        m.exponent(var) = 1;
        r.add_term(std::move(m), Coefficient::one());
        return r;
    }
    static PhasePolynomial q(int dof, int mode) { return variable(dof, mode); }
    static PhasePolynomial p(int dof, int mode) { return variable(dof, dof + mode); }

    int dof() const { return dof_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    unsigned degree() const {
        return terms_.empty() ? 0 : terms_.rbegin()->first.total_degree();
    }

    void add_term(Monomial m, const Coefficient& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(std::move(m), c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Coefficient coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Coefficient::zero() : it->second;
    }

    friend PhasePolynomial operator+(const PhasePolynomial& a, const PhasePolynomial& b) {
        a.check_dof(b);
        PhasePolynomial r = a;
        for (auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }
    friend PhasePolynomial operator-(const PhasePolynomial& a, const PhasePolynomial& b) {
        a.check_dof(b);
        PhasePolynomial r = a;
        for (auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }
    friend PhasePolynomial operator-(const PhasePolynomial& a) {
        PhasePolynomial r(a.dof_);
        for (auto& [m, c] : a.terms_) r.terms_.emplace(m, -c);
        return r;
    }
    friend PhasePolynomial operator*(const PhasePolynomial& a, const PhasePolynomial& b);
    friend PhasePolynomial operator*(const Coefficient& s, const PhasePolynomial& a) {
        PhasePolynomial r(a.dof_);
        for (auto& [m, c] : a.terms_) r.add_term(m, s * c);
        return r;
    }
    friend bool operator==(const PhasePolynomial& a, const PhasePolynomial& b) {
        return a.dof_ == b.dof_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const PhasePolynomial& a, const PhasePolynomial& b) {
        return !(a == b);
    }
    PhasePolynomial& operator+=(const PhasePolynomial& b) { return *this = *this + b; }
    PhasePolynomial& operator-=(const PhasePolynomial& b) { return *this = *this - b; }

    PhasePolynomial scaled(const Coefficient& s) const { return s * *this; }

    PhasePolynomial derivative(int var) const {
        if (var < 0 || var >= 2 * dof_) throw structural_error("derivative index out of range");
        PhasePolynomial r(dof_);
        for (auto& [m, c] : terms_) {
            uint32_t e = m.exponent(var);
            if (e == 0) continue;
            Monomial d = m;
            d.exponent(var) = e - 1;
            r.add_term(std::move(d), GaussianRational(Rational(e)) * c);
        }
        return r;
    }

    PhasePolynomial conj() const {
        PhasePolynomial r(dof_);
        for (auto& [m, c] : terms_) r.terms_.emplace(m, c.conj());
        return r;
    }

    PhasePolynomial flip_hbar() const {
        PhasePolynomial r(dof_);
        for (auto& [m, c] : terms_) r.terms_.emplace(m, c.flip_hbar());
        return r;
    }

    int min_hbar_power() const {
        bool first = true;
        int mn = 0;
        for (auto& [m, c] : terms_) {
            int k = c.min_hbar_power();
            if (first || k < mn) mn = k;
            first = false;
        }
        return mn;
    }
    bool hbar_polynomial() const { return min_hbar_power() >= 0; }

    PhasePolynomial hbar_limit_zero() const {
        if (min_hbar_power() < 0)
            throw evaluation_error("hbar -> 0 limit undefined: negative hbar powers present");
        PhasePolynomial r(dof_);
        for (auto& [m, c] : terms_) r.add_term(m, c.truncate_hbar_to_zero());
        return r;
    }

    // exact substitution of a 2N-point; hbar evaluated too
    GaussianRational evaluate(const std::vector<Rational>& point, const Rational& hbar_value) const {
        Coefficient sym = evaluate_symbolic(point);
        return sym.evaluate(hbar_value);
    }

    // substitute q,p only; hbar stays a formal symbol
    Coefficient evaluate_symbolic(const std::vector<Rational>& point) const {
        if (static_cast<int>(point.size()) != 2 * dof_)
            throw structural_error("evaluation point has wrong dimension");
        Coefficient acc;
        for (auto& [m, c] : terms_) {
            Rational v = 1;
            for (int i = 0; i < 2 * dof_; ++i) {
                uint32_t e = m.exponent(i);
                for (uint32_t j = 0; j < e; ++j) v *= point[i];
            }
            acc += Coefficient(GaussianRational(v)) * c;
        }
        return acc;
    }

    void check_dof(const PhasePolynomial& other) const {
        if (dof_ != other.dof_) throw structural_error("dof mismatch");
    }

    Terms& mutable_terms() { return terms_; }

  private:
    int dof_;
    Terms terms_;
};

namespace detail {

// Serial product, kept as the reference implementation for the OpenMP kernel.
inline PhasePolynomial mul_serial(const PhasePolynomial& a, const PhasePolynomial& b) {
    PhasePolynomial r(a.dof());
    for (auto& [ma, ca] : a.terms())
        for (auto& [mb, cb] : b.terms()) r.add_term(ma * mb, ca * cb);
    return r;
}

PhasePolynomial mul_parallel(const PhasePolynomial& a, const PhasePolynomial& b);

// Work below this many term pairs is not worth forking threads for.
inline constexpr size_t kParallelMulThreshold = 4096;

}  // namespace detail

inline PhasePolynomial operator*(const PhasePolynomial& a, const PhasePolynomial& b) {
    a.check_dof(b);
    if (a.terms().size() * b.terms().size() >= detail::kParallelMulThreshold)
        return detail::mul_parallel(a, b);
    return detail::mul_serial(a, b);
}

inline PhasePolynomial poisson_bracket(const PhasePolynomial& a, const PhasePolynomial& b) {
    a.check_dof(b);
    PhasePolynomial r(a.dof());
    for (int i = 0; i < a.dof(); ++i) {
        r += a.derivative(i) * b.derivative(a.dof() + i);
        r -= a.derivative(a.dof() + i) * b.derivative(i);
    }
    return r;
}

}  // namespace moyal

#include "moyal/phase_poly_omp.hpp"
