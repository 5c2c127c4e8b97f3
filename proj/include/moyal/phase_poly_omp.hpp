#pragma once

// OpenMP kernel for the polynomial product.  Each thread multiplies a block of
// left-hand terms into a private accumulator; accumulators are merged at the
// end.  Must agree exactly with detail::mul_serial (checked by tests and the
// benchmark target).

#include "moyal/phase_poly.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace moyal::detail {

inline PhasePolynomial mul_parallel(const PhasePolynomial& a, const PhasePolynomial& b) {
#ifndef _OPENMP
    return mul_serial(a, b);
#else
    std::vector<const std::pair<const Monomial, Coefficient>*> lhs;
    lhs.reserve(a.terms().size());
    for (auto& t : a.terms()) lhs.push_back(&t);

    int nthreads = omp_get_max_threads();
    std::vector<PhasePolynomial> partial(nthreads, PhasePolynomial(a.dof()));

#pragma omp parallel num_threads(nthreads)
    {
        int tid = omp_get_thread_num();
        PhasePolynomial& acc = partial[tid];
#pragma omp for schedule(static)
        for (long i = 0; i < static_cast<long>(lhs.size()); ++i) {
            const auto& [ma, ca] = *lhs[i];
            for (auto& [mb, cb] : b.terms()) acc.add_term(ma * mb, ca * cb);
        }
    }

    PhasePolynomial r(a.dof());
    for (auto& part : partial)
        for (auto& [m, c] : part.terms()) r.add_term(m, c);
    return r;
#endif
}

}  // namespace moyal::detail
