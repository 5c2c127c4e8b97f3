// Benchmark: serial reference kernels vs the OpenMP-parallel kernels for the
// polynomial product and the bidifferential (Janus) power.  Prints a timing
// table; both paths are checked for identical results while timing.

#include <chrono>
#include <cstdio>
#include <random>

#include "moyal/star.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace moyal;

namespace {

using Rng = std::mt19937_64;

PhasePolynomial random_poly(Rng& rng, int dof, unsigned max_degree, unsigned terms) {
    PhasePolynomial a(dof);
    std::uniform_int_distribution<unsigned> deg(0, max_degree);
    std::uniform_int_distribution<int> var(0, 2 * dof - 1);
    std::uniform_int_distribution<int> num(-6, 6);
    for (unsigned t = 0; t < terms; ++t) {
        Monomial m(dof);
        unsigned budget = deg(rng);
        for (unsigned j = 0; j < budget; ++j) m.exponent(var(rng)) += 1;
        int n = num(rng);
        a.add_term(std::move(m), Coefficient(Rational(n == 0 ? 1 : n)));
    }
    return a;
}

template <class F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s < best) best = s;
    }
    return best;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; parallel kernels fall back to serial\n");
#endif
    std::printf("%-28s %10s %10s %8s\n", "kernel", "serial[s]", "parallel[s]", "speedup");

    Rng rng(7);
    for (unsigned terms : {100u, 300u, 600u}) {
        auto a = random_poly(rng, 3, 10, terms);
        auto b = random_poly(rng, 3, 10, terms);
        PhasePolynomial rs(3), rp(3);
        double ts = time_best_of(3, [&] { rs = detail::mul_serial(a, b); });
        double tp = time_best_of(3, [&] { rp = detail::mul_parallel(a, b); });
        if (rs != rp) {
            std::printf("MISMATCH in product kernel\n");
            return 1;
        }
        char label[64];
        std::snprintf(label, sizeof(label), "poly_mul %u x %u terms", terms, terms);
        std::printf("%-28s %10.4f %10.4f %7.2fx\n", label, ts, tp, ts / tp);
    }

    for (unsigned n : {2u, 3u, 4u}) {
        auto a = random_poly(rng, 3, 8, 120);
        auto b = random_poly(rng, 3, 8, 120);
        PhasePolynomial rs(3), rp(3);
        double ts = time_best_of(3, [&] { rs = detail::janus_power_serial(a, b, n); });
        double tp = time_best_of(3, [&] { rp = detail::janus_power_parallel(a, b, n); });
        if (rs != rp) {
            std::printf("MISMATCH in janus kernel\n");
            return 1;
        }
        char label[64];
        std::snprintf(label, sizeof(label), "janus_power n=%u, 120 terms", n);
        std::printf("%-28s %10.4f %10.4f %7.2fx\n", label, ts, tp, ts / tp);
    }
    return 0;
}
