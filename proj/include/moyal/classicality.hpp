#pragma once

// Gaussian phase-space states and the error-ket classicality machinery:
// exact Isserlis moments, error-ket and mixed-error-ket norms, consistency
// intervals, and classical error propagation.

#include "moyal/weyl.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace moyal {

// Product of single-mode Gaussian Wigner distributions.  Admissibility per
// mode: sigma_qq > 0, det > 0, det >= hbar^2/4.
struct GaussianState {
    int dof;
    std::vector<Rational> mean_q, mean_p;
    std::vector<Rational> sigma_qq, sigma_pp, sigma_qp;
    Rational hbar;

    GaussianState(int dof_, std::vector<Rational> mq, std::vector<Rational> mp,
                  std::vector<Rational> sqq, std::vector<Rational> spp,
                  std::vector<Rational> sqp, Rational hbar_)
        : dof(dof_),
          mean_q(std::move(mq)),
          mean_p(std::move(mp)),
          sigma_qq(std::move(sqq)),
          sigma_pp(std::move(spp)),
          sigma_qp(std::move(sqp)),
          hbar(std::move(hbar_)) {
        if (dof < 1) throw structural_error("dof must be positive");
        if (hbar <= 0) throw structural_error("hbar must be positive");
        auto want = static_cast<size_t>(dof);
        if (mean_q.size() != want || mean_p.size() != want || sigma_qq.size() != want ||
            sigma_pp.size() != want || sigma_qp.size() != want)
            throw structural_error("state vectors have wrong dimension");
        for (int i = 0; i < dof; ++i) {
            Rational det = sigma_qq[i] * sigma_pp[i] - sigma_qp[i] * sigma_qp[i];
            if (sigma_qq[i] <= 0 || det <= 0)
                throw structural_error("covariance not positive-definite");
            if (det < hbar * hbar / 4)
                throw structural_error("covariance violates the uncertainty bound");
        }
    }

    // ground state of mode frequency 1: sigma_qq = sigma_pp = hbar/2
    static GaussianState coherent(int dof, std::vector<Rational> mq, std::vector<Rational> mp,
                                  Rational hbar) {
        std::vector<Rational> s(dof, hbar / 2), zero(dof, Rational(0));
        return GaussianState(dof, std::move(mq), std::move(mp), s, s, zero, std::move(hbar));
    }

    Rational mean(int var) const { return var < dof ? mean_q[var] : mean_p[var - dof]; }
    Rational marginal_variance(int var) const {
        return var < dof ? sigma_qq[var] : sigma_pp[var - dof];
    }
};

// O_i^0 central values plus positive error margins delta_i, i = 0..2N-1.
struct ClassicalDatum {
    std::vector<Rational> center;  // 2N values
    std::vector<Rational> margin;  // 2N positive values

    ClassicalDatum(std::vector<Rational> c, std::vector<Rational> d)
        : center(std::move(c)), margin(std::move(d)) {
        if (center.size() != margin.size()) throw structural_error("datum size mismatch");
        for (auto& m : margin)
            if (m <= 0) throw structural_error("error margins must be positive");
    }
};

namespace detail {

// central moment E[x^s y^t] of one correlated Gaussian mode (Isserlis)
inline Rational central_moment(unsigned s, unsigned t, const Rational& sqq, const Rational& spp,
                               const Rational& sqp) {
    if ((s + t) % 2 == 1) return Rational(0);
    Rational total = 0;
    for (unsigned j = s % 2; j <= std::min(s, t); j += 2) {
        if ((t - j) % 2 != 0) continue;
        unsigned i = (s - j) / 2, k = (t - j) / 2;
        Integer count = factorial(s) * factorial(t) /
                        (factorial(i) * factorial(j) * factorial(k));
        Rational pairing(count);
        for (unsigned c = 0; c < i + k; ++c) pairing /= 2;
        Rational value = pairing;
        for (unsigned c = 0; c < i; ++c) value *= sqq;
        for (unsigned c = 0; c < j; ++c) value *= sqp;
        for (unsigned c = 0; c < k; ++c) value *= spp;
        total += value;
    }
    return total;
}

// raw moment E[q^a p^b] of one mode, by binomial shift to central moments
inline Rational raw_moment(unsigned a, unsigned b, const Rational& mq, const Rational& mp,
                           const Rational& sqq, const Rational& spp, const Rational& sqp) {
    Rational total = 0;
    for (unsigned s = 0; s <= a; ++s) {
        for (unsigned t = 0; t <= b; ++t) {
            Rational cm = central_moment(s, t, sqq, spp, sqp);
            if (cm == 0) continue;
            Integer binom = factorial(a) / (factorial(s) * factorial(a - s)) * factorial(b) /
                            (factorial(t) * factorial(b - t));
            Rational w(binom);
            for (unsigned c = 0; c < a - s; ++c) w *= mq;
            for (unsigned c = 0; c < b - t; ++c) w *= mp;
            total += w * cm;
        }
    }
    return total;
}

}  // namespace detail

// Exact Gaussian expectation of a Weyl symbol, hbar evaluated at the state's
// value.
inline GaussianRational gaussian_moment(const GaussianState& state, const PhasePolynomial& a) {
    if (a.dof() != state.dof) throw structural_error("dof mismatch");
    GaussianRational acc;
    for (auto& [m, c] : a.terms()) {
        Rational moment = 1;
        for (int i = 0; i < state.dof; ++i) {
            moment *= detail::raw_moment(m.qe[i], m.pe[i], state.mean_q[i], state.mean_p[i],
                                         state.sigma_qq[i], state.sigma_pp[i], state.sigma_qp[i]);
            if (moment == 0) break;
        }
        if (moment == 0) continue;
        GaussianRational v = c.evaluate(state.hbar);
        acc = acc + GaussianRational{v.re * moment, v.im * moment};
    }
    return acc;
}

inline GaussianRational expectation(const GaussianState& state, const OperatorPolynomial& x) {
    if (x.dof() != state.dof) throw structural_error("dof mismatch");
    return gaussian_moment(state, dequantize(x));
}

// <E|E> with |E> = (X - X0)^m |phi>; X must be self-adjoint.
inline Rational error_ket_norm(const GaussianState& state, const OperatorPolynomial& x,
                               const Rational& x0, unsigned m) {
    if (m == 0) throw structural_error("error-ket order must be positive");
    if (dagger(x) != x) throw structural_error("error-ket operator must be self-adjoint");
    OperatorPolynomial d = x - OperatorPolynomial::constant(x.dof(), Coefficient(x0));
    OperatorPolynomial power = OperatorPolynomial::identity(x.dof());
    for (unsigned j = 0; j < m; ++j) power = op_mul(power, d);
    GaussianRational norm = expectation(state, op_mul(dagger(power), power));
    if (norm.im != 0 || norm.re < 0)
        throw consistency_error("error-ket norm is not a nonnegative real");
    return norm.re;
}

// <E|E> for |E> = (O_{j1}-c_{j1}) ... (O_{jm}-c_{jm}) |phi>
inline Rational mixed_error_ket_norm(const GaussianState& state,
                                     const std::vector<uint32_t>& seq,
                                     const ClassicalDatum& datum) {
    const int n = state.dof;
    if (datum.center.size() != static_cast<size_t>(2 * n))
        throw structural_error("datum has wrong dimension");
    if (seq.empty()) return Rational(1);
    auto centered = [&](uint32_t var) {
        if (var >= static_cast<uint32_t>(2 * n)) throw structural_error("index out of range");
        return OperatorPolynomial::letter(n, var) -
               OperatorPolynomial::constant(n, Coefficient(datum.center[var]));
    };
    OperatorPolynomial ket = OperatorPolynomial::identity(n);
    for (auto v : seq) ket = op_mul(ket, centered(v));
    OperatorPolynomial bra = OperatorPolynomial::identity(n);
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) bra = op_mul(bra, centered(*it));
    GaussianRational norm = expectation(state, op_mul(bra, ket));
    if (norm.im != 0 || norm.re < 0)
        throw consistency_error("mixed error-ket norm is not a nonnegative real");
    return norm.re;
}

struct ClassicalityEntry {
    unsigned order;                    // m: number of sequences in the array
    std::vector<uint32_t> indices;     // concatenated variable indices
    Rational norm;
    Rational bound;                    // squared product of margins
    bool pass;
};

struct ClassicalityReport {
    unsigned max_order;
    std::vector<ClassicalityEntry> entries;
    bool classical;
};

namespace detail {

inline void sequences_of_observable(const PhasePolynomial& a,
                                    std::vector<std::vector<uint32_t>>& out) {
    // multisets of derivative directions with nonvanishing mixed partial
    const int nvars = 2 * a.dof();
    std::vector<uint32_t> current;
    auto rec = [&](auto&& self, const PhasePolynomial& d, int start) -> void {
        for (int v = start; v < nvars; ++v) {
            PhasePolynomial dv = d.derivative(v);
            if (dv.is_zero()) continue;
            current.push_back(static_cast<uint32_t>(v));
            out.push_back(current);
            self(self, dv, v);
            current.pop_back();
        }
    };
    rec(rec, a, 0);
}

}  // namespace detail

// Enumerate index sequences with nonvanishing mixed partials over the supplied
// observables, form arrays of up to M sequences, and test each mixed error-ket
// norm against the squared product of the involved margins.
inline ClassicalityReport classicality_check(const GaussianState& state,
                                             const ClassicalDatum& datum,
                                             const std::vector<PhasePolynomial>& observables,
                                             unsigned max_order) {
    if (max_order < 1) throw structural_error("order must be positive");
    std::vector<std::vector<uint32_t>> seqs;
    for (auto& a : observables) {
        if (a.dof() != state.dof) throw structural_error("dof mismatch");
        detail::sequences_of_observable(a, seqs);
    }
    std::sort(seqs.begin(), seqs.end());
    seqs.erase(std::unique(seqs.begin(), seqs.end()), seqs.end());

    ClassicalityReport report;
    report.max_order = max_order;
    report.classical = true;

    // arrays: multisets of m sequences, concatenated in canonical order
    std::vector<size_t> pick;
    auto emit = [&](unsigned m) {
        std::vector<uint32_t> indices;
        for (auto s : pick) indices.insert(indices.end(), seqs[s].begin(), seqs[s].end());
        Rational norm = mixed_error_ket_norm(state, indices, datum);
        Rational margin_product = 1;
        for (auto v : indices) margin_product *= datum.margin[v];
        Rational bound = margin_product * margin_product;
        bool pass = norm <= bound;
        if (!pass) report.classical = false;
        report.entries.push_back({m, std::move(indices), std::move(norm), std::move(bound), pass});
    };
    auto rec = [&](auto&& self, unsigned m, size_t start) -> void {
        if (pick.size() == m) {
            emit(m);
            return;
        }
        for (size_t s = start; s < seqs.size(); ++s) {
            pick.push_back(s);
            self(self, m, s);
            pick.pop_back();
        }
    };
    for (unsigned m = 1; m <= max_order; ++m) rec(rec, m, 0);
    return report;
}

// Gaussian marginal mass in [lo, hi] for one canonical variable.
inline double interval_probability(const GaussianState& state, int var, const Rational& lo,
                                   const Rational& hi) {
    if (var < 0 || var >= 2 * state.dof) throw structural_error("index out of range");
    if (lo > hi) throw structural_error("empty interval bounds reversed");
    if (lo == hi) return 0.0;
    double mu = static_cast<double>(state.mean(var));
    double sigma = std::sqrt(static_cast<double>(state.marginal_variance(var)));
    double a = (static_cast<double>(lo) - mu) / (sigma * std::sqrt(2.0));
    double b = (static_cast<double>(hi) - mu) / (sigma * std::sqrt(2.0));
    return 0.5 * (std::erf(b) - std::erf(a));
}

// Definition-1 style check: variable passes iff the interval mass over
// [O0 - d/(1-p)^{1/(2M)}, O0 + d/(1-p)^{1/(2M)}] is >= p for every grid p.
inline std::vector<bool> consistency_check(const GaussianState& state, const ClassicalDatum& datum,
                                           unsigned order_m, const std::vector<double>& p_grid) {
    if (order_m < 1) throw structural_error("order must be positive");
    for (double p : p_grid)
        if (p < 0.0 || p >= 1.0) throw structural_error("grid probability outside [0,1)");
    constexpr double kTol = 1e-8;
    std::vector<bool> out;
    for (int var = 0; var < 2 * state.dof; ++var) {
        double center = static_cast<double>(datum.center[var]);
        double delta = static_cast<double>(datum.margin[var]);
        bool ok = true;
        for (double p : p_grid) {
            double width = delta / std::pow(1.0 - p, 1.0 / (2.0 * order_m));
            double mu = static_cast<double>(state.mean(var));
            double sigma = std::sqrt(static_cast<double>(state.marginal_variance(var)));
            double a = (center - width - mu) / (sigma * std::sqrt(2.0));
            double b = (center + width - mu) / (sigma * std::sqrt(2.0));
            double prob = 0.5 * (std::erf(b) - std::erf(a));
            if (prob < p - kTol) {
                ok = false;
                break;
            }
        }
        out.push_back(ok);
    }
    return out;
}

namespace detail {
// Exact modulus when the value lies on an axis; otherwise the rational upper
// bound |re| + |im|, which keeps the propagated bound valid.
inline Rational modulus_bound(const GaussianRational& v) {
    Rational re = v.re < 0 ? -v.re : v.re;
    Rational im = v.im < 0 ? -v.im : v.im;
    if (im == 0) return re;
    if (re == 0) return im;
    return re + im;
}
}  // namespace detail

// delta_A = sum_{k>=1} (1/k!) sum_tuples |d^k A|_0 * margins, the complete
// finite Taylor-magnitude sum.
inline Rational propagate_error(const PhasePolynomial& a, const ClassicalDatum& datum,
                                const Rational& hbar) {
    const int nvars = 2 * a.dof();
    if (datum.center.size() != static_cast<size_t>(nvars))
        throw structural_error("datum has wrong dimension");
    Rational total = 0;
    for (unsigned k = 1; k <= a.degree(); ++k) {
        for (auto& multiset : detail::derivative_multisets(nvars, k)) {
            PhasePolynomial d = a;
            Integer repeat = 1;
            Rational margins = 1;
            for (int v = 0; v < nvars; ++v) {
                for (uint32_t j = 0; j < multiset[v]; ++j) {
                    d = d.derivative(v);
                    margins *= datum.margin[v];
                }
                repeat *= factorial(multiset[v]);
            }
            if (d.is_zero()) continue;
            GaussianRational at0 = d.evaluate(datum.center, hbar);
            total += detail::modulus_bound(at0) * margins / Rational(repeat);
        }
    }
    return total;
}

}  // namespace moyal
