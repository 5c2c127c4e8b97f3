#pragma once

// The mutually inverse maps between the operator algebra and the commutative
// algebra of Weyl symbols: dequantize sends each symmetrized product to the
// matching commutative monomial, quantize inverts it.

#include "moyal/op_poly.hpp"
#include "moyal/phase_poly.hpp"

namespace moyal {

inline PhasePolynomial dequantize(const OperatorPolynomial& x) {
    SymmetrizedExpansion e = symmetrize(x);
    PhasePolynomial r(e.dof);
    for (auto& [m, c] : e.terms) r.add_term(m, c);
    return r;
}

inline OperatorPolynomial quantize(const PhasePolynomial& a) {
    OperatorPolynomial r(a.dof());
    for (auto& [m, c] : a.terms()) r += c * symmetrized_product(a.dof(), m);
    return r;
}

// Multisets of derivative directions of total order n over 2N variables,
// as exponent vectors.
namespace detail {
inline void enumerate_multisets(int nvars, unsigned order, int start,
                                std::vector<uint32_t>& current,
                                std::vector<std::vector<uint32_t>>& out) {
    if (order == 0) {
        out.push_back(current);
        return;
    }
    for (int v = start; v < nvars; ++v) {
        current[v] += 1;
        enumerate_multisets(nvars, order - 1, v, current, out);
        current[v] -= 1;
    }
}

inline std::vector<std::vector<uint32_t>> derivative_multisets(int nvars, unsigned order) {
    std::vector<std::vector<uint32_t>> out;
    std::vector<uint32_t> current(nvars, 0);
    enumerate_multisets(nvars, order, 0, current, out);
    return out;
}
}  // namespace detail

// Verify that X equals its finite Taylor expansion about `center`:
//   X = sum_n (1/n!) sum_{i1..in} d^n A / dO_{i1}..dO_{in} |_center
//                     * ((O_{i1}-c_{i1}) ... (O_{in}-c_{in}))_+
// with A = dequantize(X).  The identity is exact for polynomial observables.
inline bool taylor_identity_check(const OperatorPolynomial& x,
                                  const std::vector<Rational>& center) {
    const int dof = x.dof();
    if (static_cast<int>(center.size()) != 2 * dof)
        throw structural_error("center has wrong dimension");
    PhasePolynomial a = dequantize(x);
    const unsigned degree = a.degree();

    // shifted letters M_i = O_i - c_i as classical symbols, quantized per
    // multiset via linearity of the symmetrized product in each slot
    std::vector<PhasePolynomial> shifted;
    for (int v = 0; v < 2 * dof; ++v)
        shifted.push_back(PhasePolynomial::variable(dof, v) -
                          PhasePolynomial::constant(dof, Coefficient(center[v])));

    OperatorPolynomial sum = OperatorPolynomial::zero(dof);
    for (unsigned n = 0; n <= degree; ++n) {
        for (auto& multiset : detail::derivative_multisets(2 * dof, n)) {
            PhasePolynomial d = a;
            Integer repeat = 1;  // product of multiplicities' factorials
            for (int v = 0; v < 2 * dof; ++v) {
                for (uint32_t j = 0; j < multiset[v]; ++j) d = d.derivative(v);
                repeat *= factorial(multiset[v]);
            }
            if (d.is_zero()) continue;
            // ordered-tuple sum collapsed to multisets: weight n!/prod(mult!),
            // then the overall 1/n! leaves 1/prod(mult!)
            Coefficient w = d.evaluate_symbolic(center).div_rational(Rational(repeat));
            if (w.is_zero()) continue;
            PhasePolynomial basis = PhasePolynomial::one(dof);
            for (int v = 0; v < 2 * dof; ++v)
                for (uint32_t j = 0; j < multiset[v]; ++j) basis = basis * shifted[v];
            sum += w * quantize(basis);
        }
    }
    return sum == x;
}

}  // namespace moyal
