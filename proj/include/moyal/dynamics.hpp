#pragma once

// Time evolution as truncated formal power series in t: Heisenberg-type
// series built from the Moyal bracket, star-unitary evolution, and the
// Liouville (Poisson) comparison series.

#include "moyal/star.hpp"

#include <vector>

namespace moyal {

// A(t) ~ sum_{n<=K} t^n coefficients[n]
struct EvolutionSeries {
    unsigned truncation = 0;
    std::vector<PhasePolynomial> coefficients;

    int dof() const { return coefficients.empty() ? 1 : coefficients.front().dof(); }

    GaussianRational evaluate(const std::vector<Rational>& point, const Rational& hbar_value,
                              const Rational& t) const {
        GaussianRational acc;
        Rational tn = 1;
        for (auto& c : coefficients) {
            GaussianRational v = c.evaluate(point, hbar_value);
            acc = acc + GaussianRational{v.re * tn, v.im * tn};
            tn *= t;
        }
        return acc;
    }

    friend bool operator==(const EvolutionSeries& a, const EvolutionSeries& b) {
        return a.truncation == b.truncation && a.coefficients == b.coefficients;
    }
};

struct UnitarySeries {
    unsigned truncation = 0;
    std::vector<PhasePolynomial> coefficients;  // U_0..U_K, U_0 = 1
    std::vector<PhasePolynomial> inverse;       // V with V * U = 1 through order K
};

// A_{n+1} = (i/hbar) [H, A_n]_M / (n+1)
inline EvolutionSeries heisenberg_series(const PhasePolynomial& h, const PhasePolynomial& a,
                                         unsigned k) {
    h.check_dof(a);
    const bool check_poly = h.hbar_polynomial() && a.hbar_polynomial();
    const Coefficient i_over_hbar(GaussianRational(Rational(0), Rational(1)), -1);
    EvolutionSeries s;
    s.truncation = k;
    s.coefficients.push_back(a);
    for (unsigned n = 0; n < k; ++n) {
        PhasePolynomial next = i_over_hbar * moyal_bracket(h, s.coefficients.back());
        PhasePolynomial scaled(h.dof());
        for (auto& [m, c] : next.terms()) scaled.add_term(m, c.div_rational(Rational(n + 1)));
        if (check_poly && !scaled.hbar_polynomial())
            throw consistency_error("Heisenberg coefficient acquired a negative hbar power");
        s.coefficients.push_back(std::move(scaled));
    }
    return s;
}

// A_{n+1} = {A_n, H} / (n+1): the hbar -> 0 comparison dynamics (Liouville
// equation dA/dt = {A, H})
inline EvolutionSeries poisson_series(const PhasePolynomial& h, const PhasePolynomial& a,
                                      unsigned k) {
    h.check_dof(a);
    EvolutionSeries s;
    s.truncation = k;
    s.coefficients.push_back(a);
    for (unsigned n = 0; n < k; ++n) {
        PhasePolynomial next = poisson_bracket(s.coefficients.back(), h);
        PhasePolynomial scaled(h.dof());
        for (auto& [m, c] : next.terms()) scaled.add_term(m, c.div_rational(Rational(n + 1)));
        s.coefficients.push_back(std::move(scaled));
    }
    return s;
}

// Termwise residual of d/dt A(t) - (i/hbar)[H, A(t)]_M through order K-1;
// identically zero for a series produced by heisenberg_series.
inline std::vector<PhasePolynomial> eom_residual(const PhasePolynomial& h,
                                                 const EvolutionSeries& s) {
    const Coefficient i_over_hbar(GaussianRational(Rational(0), Rational(1)), -1);
    std::vector<PhasePolynomial> out;
    for (unsigned n = 0; n + 1 <= s.truncation; ++n) {
        PhasePolynomial ddt = Coefficient(Rational(n + 1)) * s.coefficients[n + 1];
        PhasePolynomial rhs = i_over_hbar * moyal_bracket(h, s.coefficients[n]);
        out.push_back(ddt - rhs);
    }
    return out;
}

// qdot_i = dH/dp_i, pdot_i = -dH/dq_i
inline std::pair<std::vector<PhasePolynomial>, std::vector<PhasePolynomial>> hamilton_rhs(
    const PhasePolynomial& h) {
    std::vector<PhasePolynomial> qdot, pdot;
    for (int i = 0; i < h.dof(); ++i) {
        qdot.push_back(h.derivative(h.dof() + i));
        pdot.push_back(-h.derivative(i));
    }
    return {std::move(qdot), std::move(pdot)};
}

// U_{n+1} = (H * U_n) / (i hbar (n+1)); inverse from V * U = 1 order by order
inline UnitarySeries unitary_series(const PhasePolynomial& h, unsigned k) {
    UnitarySeries u;
    u.truncation = k;
    u.coefficients.push_back(PhasePolynomial::one(h.dof()));
    for (unsigned n = 0; n < k; ++n) {
        PhasePolynomial next = star(h, u.coefficients.back());
        PhasePolynomial scaled(h.dof());
        for (auto& [m, c] : next.terms())
            scaled.add_term(m, c.div_i_hbar().div_rational(Rational(n + 1)));
        u.coefficients.push_back(std::move(scaled));
    }
    u.inverse.push_back(PhasePolynomial::one(h.dof()));
    for (unsigned n = 1; n <= k; ++n) {
        PhasePolynomial v(h.dof());
        for (unsigned j = 0; j < n; ++j) v -= star(u.inverse[j], u.coefficients[n - j]);
        u.inverse.push_back(std::move(v));
    }
    return u;
}

namespace detail {
// truncated star product of two t-series
inline std::vector<PhasePolynomial> series_star(const std::vector<PhasePolynomial>& a,
                                                const std::vector<PhasePolynomial>& b,
                                                unsigned k, int dof) {
    std::vector<PhasePolynomial> out(k + 1, PhasePolynomial(dof));
    for (unsigned i = 0; i < a.size() && i <= k; ++i)
        for (unsigned j = 0; j < b.size() && i + j <= k; ++j) out[i + j] += star(a[i], b[j]);
    return out;
}
}  // namespace detail

// A(t) = U^{-1} * A(0) * U, truncated at the series order
inline EvolutionSeries conjugate_by_unitary(const UnitarySeries& u, const PhasePolynomial& a) {
    const unsigned k = u.truncation;
    const int dof = a.dof();
    auto left = detail::series_star(u.inverse, {a}, k, dof);
    auto full = detail::series_star(left, u.coefficients, k, dof);
    EvolutionSeries s;
    s.truncation = k;
    s.coefficients = std::move(full);
    if (a.hbar_polynomial()) {
        for (auto& c : s.coefficients)
            if (!c.hbar_polynomial())
                throw consistency_error("residual negative hbar power after unitary conjugation");
    }
    return s;
}

// U^{-1} * [A,B]_M * U  ==  [U^{-1}*A*U, U^{-1}*B*U]_M through order K
inline bool canonical_invariance_check(const UnitarySeries& u, const PhasePolynomial& a,
                                       const PhasePolynomial& b) {
    a.check_dof(b);
    const unsigned k = u.truncation;
    const int dof = a.dof();
    auto lhs = detail::series_star(detail::series_star(u.inverse, {moyal_bracket(a, b)}, k, dof),
                                   u.coefficients, k, dof);
    auto at = detail::series_star(detail::series_star(u.inverse, {a}, k, dof), u.coefficients, k, dof);
    auto bt = detail::series_star(detail::series_star(u.inverse, {b}, k, dof), u.coefficients, k, dof);
    std::vector<PhasePolynomial> rhs(k + 1, PhasePolynomial(dof));
    for (unsigned i = 0; i <= k; ++i)
        for (unsigned j = 0; i + j <= k; ++j) {
            rhs[i + j] += star(at[i], bt[j]);
            rhs[i + j] -= star(bt[j], at[i]);
        }
    for (unsigned n = 0; n <= k; ++n)
        if (lhs[n] != rhs[n]) return false;
    return true;
}

}  // namespace moyal
