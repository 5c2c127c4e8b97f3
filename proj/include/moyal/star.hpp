#pragma once

// Star product and Moyal bracket on Weyl symbols, via the terminating
// bidifferential series.  The n-th power of the bidifferential operator is
// expanded multinomially over 2N factor slots (per mode: one slot for
// dq(left) dp(right), one negatively signed slot for dp(left) dq(right)).

#include "moyal/phase_poly.hpp"

#include <memory>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace moyal {

namespace detail {

struct JanusTerm {
    std::vector<uint32_t> slots;  // length 2N: (a_0, b_0, a_1, b_1, ...)
    Integer multinomial;          // n! / prod(slot!)
    bool negative;                // parity of the signed slots
};

using JanusTable = std::vector<JanusTerm>;

inline void build_janus_table(int dof, unsigned n, JanusTable& out) {
    std::vector<uint32_t> slots(2 * dof, 0);
    const Integer nfact = factorial(n);
    auto rec = [&](auto&& self, int slot, unsigned remaining) -> void {
        if (slot == 2 * dof - 1) {
            slots[slot] = remaining;
            Integer denom = 1;
            unsigned bsum = 0;
            for (int s = 0; s < 2 * dof; ++s) {
                denom *= factorial(slots[s]);
                if (s % 2 == 1) bsum += slots[s];
            }
            out.push_back({slots, nfact / denom, bsum % 2 == 1});
            return;
        }
        for (unsigned k = 0; k <= remaining; ++k) {
            slots[slot] = k;
            self(self, slot + 1, remaining - k);
        }
        slots[slot] = 0;
    };
    rec(rec, 0, n);
}

// Memoized per (dof, n); read-mostly, single-writer under a mutex.
inline std::shared_ptr<const JanusTable> janus_table(int dof, unsigned n) {
    static std::mutex mu;
    static std::map<std::pair<int, unsigned>, std::shared_ptr<const JanusTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(dof, n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto table = std::make_shared<JanusTable>();
    build_janus_table(dof, n, *table);
    cache.emplace(key, table);
    return table;
}

inline PhasePolynomial janus_term_product(const PhasePolynomial& a, const PhasePolynomial& b,
                                          const JanusTerm& t) {
    const int dof = a.dof();
    PhasePolynomial da = a, db = b;
    for (int i = 0; i < dof && !da.is_zero(); ++i) {
        for (uint32_t j = 0; j < t.slots[2 * i]; ++j) da = da.derivative(i);            // dq_i
        for (uint32_t j = 0; j < t.slots[2 * i + 1]; ++j) da = da.derivative(dof + i);  // dp_i
    }
    if (da.is_zero()) return PhasePolynomial::zero(dof);
    for (int i = 0; i < dof && !db.is_zero(); ++i) {
        for (uint32_t j = 0; j < t.slots[2 * i]; ++j) db = db.derivative(dof + i);  // dp_i
        for (uint32_t j = 0; j < t.slots[2 * i + 1]; ++j) db = db.derivative(i);    // dq_i
    }
    if (db.is_zero()) return PhasePolynomial::zero(dof);
    Rational w(t.multinomial);
    if (t.negative) w = -w;
    return Coefficient(GaussianRational(w)) * (da * db);
}

// Serial reference for the OpenMP kernel below.
inline PhasePolynomial janus_power_serial(const PhasePolynomial& a, const PhasePolynomial& b,
                                          unsigned n) {
    auto table = janus_table(a.dof(), n);
    PhasePolynomial r(a.dof());
    for (auto& t : *table) r += janus_term_product(a, b, t);
    return r;
}

inline PhasePolynomial janus_power_parallel(const PhasePolynomial& a, const PhasePolynomial& b,
                                            unsigned n) {
#ifndef _OPENMP
    return janus_power_serial(a, b, n);
#else
    auto table = janus_table(a.dof(), n);
    const long count = static_cast<long>(table->size());
    int nthreads = omp_get_max_threads();
    std::vector<PhasePolynomial> partial(nthreads, PhasePolynomial(a.dof()));
#pragma omp parallel num_threads(nthreads)
    {
        PhasePolynomial& acc = partial[omp_get_thread_num()];
#pragma omp for schedule(dynamic)
        for (long i = 0; i < count; ++i) acc += janus_term_product(a, b, (*table)[i]);
    }
    PhasePolynomial r(a.dof());
    for (auto& part : partial) r += part;
    return r;
#endif
}

inline constexpr size_t kParallelJanusThreshold = 16;

}  // namespace detail

// A J^n B with exact multinomial weights; vanishes for n > min(deg A, deg B).
inline PhasePolynomial janus_power(const PhasePolynomial& a, const PhasePolynomial& b,
                                   unsigned n) {
    a.check_dof(b);
    if (n > std::min(a.degree(), b.degree())) return PhasePolynomial::zero(a.dof());
    if (n == 0) return a * b;
    auto table = detail::janus_table(a.dof(), n);
    if (table->size() >= detail::kParallelJanusThreshold)
        return detail::janus_power_parallel(a, b, n);
    return detail::janus_power_serial(a, b, n);
}

// A * B = sum_n (1/n!) (i hbar / 2)^n  A J^n B, finite on polynomials.
inline PhasePolynomial star(const PhasePolynomial& a, const PhasePolynomial& b) {
    a.check_dof(b);
    PhasePolynomial r(a.dof());
    const unsigned nmax = std::min(a.degree(), b.degree());
    for (unsigned n = 0; n <= nmax; ++n) {
        // (i/2)^n / n!, attached to hbar^n
        GaussianRational ihalf_pow(Rational(1));
        for (unsigned j = 0; j < n; ++j)
            ihalf_pow = ihalf_pow * GaussianRational(Rational(0), Rational(1, 2));
        Rational nfact(factorial(n));
        Coefficient w(GaussianRational(ihalf_pow.re / nfact, ihalf_pow.im / nfact), static_cast<int>(n));
        r += w * janus_power(a, b, n);
    }
    return r;
}

// [A, B]_M = 2i sum_k (-1)^k/(2k+1)! (hbar/2)^{2k+1} A J^{2k+1} B
//          = A*B - B*A.
inline PhasePolynomial moyal_bracket(const PhasePolynomial& a, const PhasePolynomial& b) {
    a.check_dof(b);
    PhasePolynomial r(a.dof());
    const unsigned nmax = std::min(a.degree(), b.degree());
    for (unsigned n = 1; n <= nmax; n += 2) {
        unsigned k = (n - 1) / 2;
        Rational mag = Rational(2) / Rational(factorial(n));
        for (unsigned j = 0; j < n; ++j) mag /= 2;
        if (k % 2 == 1) mag = -mag;
        Coefficient w(GaussianRational(Rational(0), mag), static_cast<int>(n));
        r += w * janus_power(a, b, n);
    }
    return r;
}

}  // namespace moyal
