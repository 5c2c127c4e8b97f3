#pragma once

// Exact scalar ring for phase-space algebra: Gaussian rationals (a + b*i with
// exact rational a, b) tensored with Laurent powers of the formal symbol hbar.

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace moyal {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

// Error taxonomy shared by the whole library.  CLI exit codes: parse_error -> 2,
// structural_error / precondition violations -> 3, consistency_error -> 4.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct structural_error : error {
    using error::error;
};
struct evaluation_error : error {
    using error::error;
};
struct consistency_error : error {
    using error::error;
};
struct parse_error : error {
    parse_error(const std::string& msg, int line, int col)
        : error(msg), line(line), col(col) {}
    int line;
    int col;
};

inline Integer factorial(unsigned n) {
    Integer f = 1;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return f;
}

inline Integer double_factorial_odd(unsigned m) {
    // (2m-1)!!
    Integer f = 1;
    for (unsigned k = 1; k <= m; ++k) f *= 2 * k - 1;
    return f;
}

inline std::string rational_to_string(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    static GaussianRational unit_i() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussianRational conj() const { return {re, -im}; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        Rational n = b.re * b.re + b.im * b.im;
        if (n == 0) throw evaluation_error("division by zero Gaussian rational");
        GaussianRational num = a * b.conj();
        return {num.re / n, num.im / n};
    }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) {
        return !(a == b);
    }
};

// Laurent polynomial in hbar over GaussianRational; the coefficient ring for
// every polynomial in the library.  Sparse, canonical: no zero entries.
class Coefficient {
  public:
    // hbar exponent (may be negative) -> value
    using Terms = std::map<int, GaussianRational>;

    Coefficient() = default;
    explicit Coefficient(GaussianRational v, int hbar_pow = 0) {
        if (!v.is_zero()) terms_[hbar_pow] = std::move(v);
    }
    explicit Coefficient(Rational r) : Coefficient(GaussianRational(std::move(r))) {}

    static Coefficient zero() { return {}; }
    static Coefficient one() { return Coefficient(Rational(1)); }
    static Coefficient unit_i() { return Coefficient(GaussianRational::unit_i()); }
    static Coefficient hbar(int power = 1) { return Coefficient(GaussianRational(Rational(1)), power); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_real() const {
        for (auto& [k, v] : terms_)
            if (v.im != 0) return false;
        return true;
    }

    int min_hbar_power() const {
        if (terms_.empty()) return 0;
        return terms_.begin()->first;
    }
    int max_hbar_power() const {
        if (terms_.empty()) return 0;
        return terms_.rbegin()->first;
    }

    void add_term(int hbar_pow, const GaussianRational& v) {
        if (v.is_zero()) return;
        auto it = terms_.find(hbar_pow);
        if (it == terms_.end()) {
            terms_.emplace(hbar_pow, v);
        } else {
            it->second = it->second + v;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend Coefficient operator+(const Coefficient& a, const Coefficient& b) {
        Coefficient r = a;
        for (auto& [k, v] : b.terms_) r.add_term(k, v);
        return r;
    }
    friend Coefficient operator-(const Coefficient& a, const Coefficient& b) {
        Coefficient r = a;
        for (auto& [k, v] : b.terms_) r.add_term(k, -v);
        return r;
    }
    friend Coefficient operator-(const Coefficient& a) {
        Coefficient r;
        for (auto& [k, v] : a.terms_) r.terms_[k] = -v;
        return r;
    }
    friend Coefficient operator*(const Coefficient& a, const Coefficient& b) {
        Coefficient r;
        for (auto& [ka, va] : a.terms_)
            for (auto& [kb, vb] : b.terms_) r.add_term(ka + kb, va * vb);
        return r;
    }
    friend bool operator==(const Coefficient& a, const Coefficient& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const Coefficient& a, const Coefficient& b) { return !(a == b); }

    Coefficient& operator+=(const Coefficient& b) { return *this = *this + b; }
    Coefficient& operator-=(const Coefficient& b) { return *this = *this - b; }
    Coefficient& operator*=(const Coefficient& b) { return *this = *this * b; }

    Coefficient conj() const {
        // i -> -i; hbar stays real
        Coefficient r;
        for (auto& [k, v] : terms_) r.terms_[k] = v.conj();
        return r;
    }

    // hbar -> -hbar
    Coefficient flip_hbar() const {
        Coefficient r;
        for (auto& [k, v] : terms_) r.terms_[k] = (k % 2 == 0) ? v : -v;
        return r;
    }

    Coefficient shift_hbar(int delta) const {
        Coefficient r;
        for (auto& [k, v] : terms_) r.terms_[k + delta] = v;
        return r;
    }

    // exact division by (i*hbar): multiply by -i, shift hbar power down
    Coefficient div_i_hbar() const {
        Coefficient r;
        GaussianRational minus_i{Rational(0), Rational(-1)};
        for (auto& [k, v] : terms_) r.terms_[k - 1] = v * minus_i;
        return r;
    }

    Coefficient div_rational(const Rational& d) const {
        if (d == 0) throw evaluation_error("division by zero");
        Coefficient r;
        for (auto& [k, v] : terms_) r.terms_[k] = {v.re / d, v.im / d};
        return r;
    }

    // drop every term with hbar power >= 1; caller checks no negative powers
    Coefficient truncate_hbar_to_zero() const {
        Coefficient r;
        for (auto& [k, v] : terms_) {
            if (k < 0) throw evaluation_error("hbar -> 0 limit of a Laurent pole");
            if (k == 0) r.terms_[k] = v;
        }
        return r;
    }

    GaussianRational evaluate(const Rational& hbar_value) const {
        GaussianRational acc;
        for (auto& [k, v] : terms_) {
            if (k < 0 && hbar_value == 0)
                throw evaluation_error("hbar = 0 with negative hbar power");
            Rational pw = 1;
            for (int j = 0; j < (k < 0 ? -k : k); ++j) pw *= hbar_value;
            if (k < 0) {
                acc = acc + GaussianRational{v.re / pw, v.im / pw};
            } else {
                acc = acc + GaussianRational{v.re * pw, v.im * pw};
            }
        }
        return acc;
    }

  private:
    Terms terms_;
};

inline Coefficient operator*(const GaussianRational& s, const Coefficient& c) {
    return Coefficient(s) * c;
}

}  // namespace moyal
