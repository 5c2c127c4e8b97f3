#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "moyal/dynamics.hpp"
#include "moyal/text.hpp"
#include "moyal/weyl.hpp"
#include "test_support.hpp"

using namespace moyal;
using moyal::testing::Rng;

namespace {
PhasePolynomial q0() { return PhasePolynomial::q(1, 0); }
PhasePolynomial p0() { return PhasePolynomial::p(1, 0); }
PhasePolynomial harmonic() { return parse_classical("(q0^2+p0^2)*1/2", 1); }
PhasePolynomial anharmonic() { return parse_classical("p0^2*1/2 + q0^4", 1); }
}  // namespace

TEST_CASE("harmonic Heisenberg series reproduces the cos/sin Taylor coefficients") {
    auto s = heisenberg_series(harmonic(), q0(), 6);
    std::vector<std::string> expect = {"q0",      "p0",       "-1/2*q0",  "-1/6*p0",
                                       "1/24*q0", "1/120*p0", "-1/720*q0"};
    REQUIRE(s.coefficients.size() == 7);
    for (size_t n = 0; n < expect.size(); ++n) CHECK(render(s.coefficients[n]) == expect[n]);
    // quadratic Hamiltonian: Moyal and Poisson series coincide exactly
    CHECK(s == poisson_series(harmonic(), q0(), 6));
}

TEST_CASE("constants are stationary") {
    auto s = heisenberg_series(anharmonic(), PhasePolynomial::one(1), 4);
    CHECK(s.coefficients[0] == PhasePolynomial::one(1));
    for (size_t n = 1; n < s.coefficients.size(); ++n) CHECK(s.coefficients[n].is_zero());
}

TEST_CASE("first-order coefficient is the Hamilton right-hand side") {
    auto s = heisenberg_series(anharmonic(), q0(), 1);
    CHECK(s.coefficients[1] == p0());
    auto [qdot, pdot] = hamilton_rhs(anharmonic());
    CHECK(qdot[0] == p0());
    CHECK(pdot[0] == Coefficient(Rational(-4)) * (q0() * q0() * q0()));
    auto [qdot2, pdot2] = hamilton_rhs(harmonic());
    CHECK(qdot2[0] == p0());
    CHECK(pdot2[0] == -q0());
    auto [qdot3, pdot3] = hamilton_rhs(q0());
    CHECK(qdot3[0].is_zero());
    CHECK(pdot3[0] == PhasePolynomial::constant(1, Coefficient(Rational(-1))));
}

TEST_CASE("hamilton_rhs equals the first Heisenberg coefficients of q and p") {
    Rng rng(11);
    for (int it = 0; it < 20; ++it) {
        int dof = 1 + static_cast<int>(rng() % 2);
        auto h = moyal::testing::random_phase_poly(rng, dof, 4);
        auto [qdot, pdot] = hamilton_rhs(h);
        for (int i = 0; i < dof; ++i) {
            CHECK(heisenberg_series(h, PhasePolynomial::q(dof, i), 1).coefficients[1] == qdot[i]);
            CHECK(heisenberg_series(h, PhasePolynomial::p(dof, i), 1).coefficients[1] == pdot[i]);
        }
    }
}

TEST_CASE("equation-of-motion residual vanishes; corruption is detected") {
    auto s = heisenberg_series(harmonic(), q0(), 3);
    for (auto& r : eom_residual(harmonic(), s)) CHECK(r.is_zero());

    CHECK(eom_residual(harmonic(), heisenberg_series(harmonic(), q0(), 0)).empty());

    EvolutionSeries corrupted = s;
    corrupted.coefficients[2] += q0();
    auto res = eom_residual(harmonic(), corrupted);
    CHECK(!res[1].is_zero());
}

TEST_CASE("operator-side and symbol-side Heisenberg series coincide") {
    Rng rng(22);
    for (int it = 0; it < 12; ++it) {
        int dof = 1 + static_cast<int>(rng() % 2);
        auto h = moyal::testing::random_phase_poly(rng, dof, 4, 3);
        auto a = moyal::testing::random_phase_poly(rng, dof, 3, 3);
        unsigned k = rng() % 5;
        auto symbol_side = heisenberg_series(h, a, k);
        auto op_side = op_heisenberg_series(quantize(h), quantize(a), k);
        REQUIRE(op_side.size() == symbol_side.coefficients.size());
        for (size_t n = 0; n < op_side.size(); ++n)
            CHECK(dequantize(op_side[n]) == symbol_side.coefficients[n]);
    }
}

TEST_CASE("hbar -> 0 of the Heisenberg series is the Liouville series") {
    Rng rng(33);
    for (int it = 0; it < 12; ++it) {
        int dof = 1 + static_cast<int>(rng() % 2);
        auto h = moyal::testing::random_phase_poly(rng, dof, 4, 3);
        auto a = moyal::testing::random_phase_poly(rng, dof, 3, 3);
        auto moyal_side = heisenberg_series(h, a, 4);
        auto poisson_side = poisson_series(h, a, 4);
        for (size_t n = 0; n <= 4; ++n)
            CHECK(moyal_side.coefficients[n].hbar_limit_zero() == poisson_side.coefficients[n]);
    }
}

TEST_CASE("anharmonic divergence appears and is divisible by hbar^2") {
    // corrections require a third p-derivative of the evolved observable,
    // which first occurs (as p^3) in A_5, so the earliest difference is at
    // n = 6: -hbar^2*q/5
    auto m = heisenberg_series(anharmonic(), q0(), 6);
    auto cl = poisson_series(anharmonic(), q0(), 6);
    size_t earliest = 0;
    for (size_t n = 0; n <= 6; ++n) {
        PhasePolynomial diff = m.coefficients[n] - cl.coefficients[n];
        if (diff.is_zero()) continue;
        if (!earliest) earliest = n;
        CHECK(diff.min_hbar_power() >= 2);
    }
    CHECK(earliest == 6);
    CHECK(m.coefficients[6] - cl.coefficients[6] ==
          Coefficient(GaussianRational(Rational(-1, 5)), 2) * q0());

    // independent operator-route confirmation of the same coefficient
    auto op_side = op_heisenberg_series(quantize(anharmonic()), quantize(q0()), 6);
    CHECK(dequantize(op_side[6]) == m.coefficients[6]);
}

TEST_CASE("unitary series fixtures") {
    auto u = unitary_series(q0(), 2);
    REQUIRE(u.coefficients.size() == 3);
    CHECK(u.coefficients[0] == PhasePolynomial::one(1));
    CHECK(render(u.coefficients[1]) == "-i*hbar^-1*q0");
    CHECK(render(u.coefficients[2]) == "-1/2*hbar^-2*q0^2");

    CHECK(unitary_series(anharmonic(), 0).coefficients ==
          std::vector<PhasePolynomial>{PhasePolynomial::one(1)});

    auto uh = unitary_series(harmonic(), 2);
    const Coefficient minus_i_over_hbar(GaussianRational(Rational(0), Rational(-1)), -1);
    CHECK(uh.coefficients[1] == minus_i_over_hbar * harmonic());
    // U2 = (-i/hbar)^2/2 H*H with H*H = H^2 + (i hbar/2)^2/2 janus_2(H,H)
    PhasePolynomial hstar2 = harmonic() * harmonic() +
                             Coefficient(GaussianRational(Rational(-1, 8)), 2) *
                                 janus_power(harmonic(), harmonic(), 2);
    CHECK(star(harmonic(), harmonic()) == hstar2);
    CHECK(uh.coefficients[2] ==
          Coefficient(GaussianRational(Rational(-1, 2)), -2) * hstar2);
}

TEST_CASE("inverse series inverts through the truncation order") {
    Rng rng(44);
    for (int it = 0; it < 10; ++it) {
        auto h = moyal::testing::random_phase_poly(rng, 1, 3, 3);
        auto u = unitary_series(h, 3);
        auto prod = detail::series_star(u.inverse, u.coefficients, 3, 1);
        CHECK(prod[0] == PhasePolynomial::one(1));
        for (unsigned n = 1; n <= 3; ++n) CHECK(prod[n].is_zero());
    }
}

TEST_CASE("star-unitarity: conj coefficients give the inverse for real H") {
    Rng rng(55);
    for (int it = 0; it < 10; ++it) {
        int dof = 1 + static_cast<int>(rng() % 2);
        PhasePolynomial h(dof);
        auto raw = moyal::testing::random_phase_poly(rng, dof, 3, 3);
        for (auto& [m, c] : raw.terms())
            for (auto& [hb, v] : c.terms()) h.add_term(m, Coefficient(GaussianRational(v.re), hb));
        auto u = unitary_series(h, 3);
        std::vector<PhasePolynomial> ustar;
        for (auto& c : u.coefficients) ustar.push_back(c.conj());
        auto prod = detail::series_star(ustar, u.coefficients, 3, dof);
        CHECK(prod[0] == PhasePolynomial::one(dof));
        for (unsigned n = 1; n <= 3; ++n) CHECK(prod[n].is_zero());
    }
}

TEST_CASE("conjugation by the unitary reproduces the Heisenberg series") {
    auto u = unitary_series(q0(), 1);
    auto s = conjugate_by_unitary(u, p0());
    CHECK(s.coefficients[0] == p0());
    CHECK(s.coefficients[1] == PhasePolynomial::constant(1, Coefficient(Rational(-1))));

    auto s1 = conjugate_by_unitary(unitary_series(harmonic(), 2), q0());
    auto s2 = heisenberg_series(harmonic(), q0(), 2);
    CHECK(s1 == s2);

    auto stat = conjugate_by_unitary(unitary_series(anharmonic(), 3), PhasePolynomial::one(1));
    CHECK(stat.coefficients[0] == PhasePolynomial::one(1));
    for (size_t n = 1; n < stat.coefficients.size(); ++n) CHECK(stat.coefficients[n].is_zero());

    Rng rng(66);
    for (int it = 0; it < 8; ++it) {
        int dof = 1 + static_cast<int>(rng() % 2);
        auto h = moyal::testing::random_phase_poly(rng, dof, 3, 3);
        auto a = moyal::testing::random_phase_poly(rng, dof, 3, 3);
        auto via_u = conjugate_by_unitary(unitary_series(h, 3), a);
        auto direct = heisenberg_series(h, a, 3);
        CHECK(via_u == direct);
        for (auto& c : via_u.coefficients) CHECK(c.hbar_polynomial());
    }
}

TEST_CASE("canonical invariance") {
    auto u = unitary_series(anharmonic(), 3);
    CHECK(canonical_invariance_check(u, q0(), p0()));

    auto uh = unitary_series(harmonic(), 2);
    CHECK(canonical_invariance_check(uh, q0() * q0(), p0() * p0()));

    UnitarySeries corrupted = uh;
    corrupted.coefficients[2] = PhasePolynomial::zero(1);
    CHECK(!canonical_invariance_check(corrupted, q0() * q0(), p0() * p0()));

    Rng rng(77);
    for (int it = 0; it < 6; ++it) {
        int dof = 1 + static_cast<int>(rng() % 2);
        auto h = moyal::testing::random_phase_poly(rng, dof, 3, 2);
        auto a = moyal::testing::random_phase_poly(rng, dof, 3, 2);
        auto b = moyal::testing::random_phase_poly(rng, dof, 3, 2);
        CHECK(canonical_invariance_check(unitary_series(h, 3), a, b));
    }
}
