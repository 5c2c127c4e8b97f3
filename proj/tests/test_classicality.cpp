#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "moyal/classicality.hpp"
#include "moyal/text.hpp"
#include "quadrature_oracle.hpp"
#include "test_support.hpp"

using namespace moyal;
using moyal::testing::Rng;
using moyal::testing::quadrature_moment;
using moyal::testing::random_state;

namespace {

GaussianState centered_state(Rational sqq, Rational spp, Rational sqp, Rational hbar) {
    return GaussianState(1, {0}, {0}, {std::move(sqq)}, {std::move(spp)}, {std::move(sqp)},
                         std::move(hbar));
}

}  // namespace

TEST_CASE("state admissibility") {
    CHECK_NOTHROW(GaussianState::coherent(2, {0, 1}, {0, -1}, 1));
    CHECK_THROWS_AS(centered_state(Rational(-1), 1, 0, 1), structural_error);
    CHECK_THROWS_AS(centered_state(1, 1, 2, 1), structural_error);          // det <= 0
    CHECK_THROWS_AS(centered_state(Rational(1, 4), Rational(1, 4), 0, 1),
                    structural_error);                                      // below hbar^2/4
    CHECK_THROWS_AS(centered_state(1, 1, 0, Rational(-1)), structural_error);
    CHECK_THROWS_AS(GaussianState(1, {0}, {0, 0}, {1}, {1}, {0}, 1), structural_error);
    // saturating case is admissible
    CHECK_NOTHROW(centered_state(Rational(1, 2), Rational(1, 2), 0, 1));
}

TEST_CASE("gaussian moment fixtures") {
    auto s = GaussianState(1, {2}, {-1}, {Rational(1, 2)}, {1}, {0}, 1);
    CHECK(gaussian_moment(s, PhasePolynomial::q(1, 0)) == GaussianRational(Rational(2)));
    CHECK(gaussian_moment(s, PhasePolynomial::p(1, 0)) == GaussianRational(Rational(-1)));

    auto centered2 = parse_classical("(q0-2)^2", 1);
    CHECK(gaussian_moment(s, centered2) == GaussianRational(Rational(1, 2)));
    auto centered4 = parse_classical("(q0-2)^4", 1);
    CHECK(gaussian_moment(s, centered4) == GaussianRational(Rational(3, 4)));

    // correlated mode: E[(q-mq)(p-mp)] = sigma_qp
    auto corr = GaussianState(1, {1}, {1}, {1}, {1}, {Rational(1, 2)}, 1);
    CHECK(gaussian_moment(corr, parse_classical("(q0-1)*(p0-1)", 1)) ==
          GaussianRational(Rational(1, 2)));

    // hbar-dependent coefficient evaluated at the state's value
    CHECK(gaussian_moment(s, PhasePolynomial::constant(1, Coefficient::hbar(2))) ==
          GaussianRational(Rational(1)));
}

TEST_CASE("gaussian moments match Gauss-Hermite quadrature to 1e-10 relative") {
    Rng rng(4321);
    for (int it = 0; it < 50; ++it) {
        int dof = 1 + static_cast<int>(rng() % 2);
        GaussianState s = random_state(rng, dof);
        auto a = moyal::testing::random_phase_poly(rng, dof, 6, 5, 0, 2);
        GaussianRational exact = gaussian_moment(s, a);
        std::complex<double> approx = quadrature_moment(s, a);
        std::complex<double> ex(static_cast<double>(exact.re), static_cast<double>(exact.im));
        double scale = std::max(1.0, std::abs(ex));
        CHECK(std::abs(approx - ex) / scale < 1e-10);
    }
}

TEST_CASE("error-ket norm fixtures and closed form") {
    auto s = centered_state(Rational(1, 2), Rational(1, 2), 0, 1);
    auto Q = OperatorPolynomial::q(1, 0);
    CHECK(error_ket_norm(s, Q, 0, 1) == Rational(1, 2));
    CHECK(error_ket_norm(s, Q, 0, 2) == Rational(3, 4));
    CHECK(error_ket_norm(s, Q, 1, 1) == Rational(3, 2));  // variance + offset^2

    // (2m-1)!! sigma^m for m <= 5 on randomized states
    Rng rng(999);
    for (int it = 0; it < 20; ++it) {
        GaussianState st = random_state(rng, 1);
        for (unsigned m = 1; m <= 5; ++m) {
            Rational expect(double_factorial_odd(m));
            for (unsigned j = 0; j < m; ++j) expect *= st.sigma_qq[0];
            CHECK(error_ket_norm(st, OperatorPolynomial::q(1, 0), st.mean_q[0], m) == expect);
            Rational expect_p(double_factorial_odd(m));
            for (unsigned j = 0; j < m; ++j) expect_p *= st.sigma_pp[0];
            CHECK(error_ket_norm(st, OperatorPolynomial::p(1, 0), st.mean_p[0], m) == expect_p);
        }
    }

    CHECK_THROWS_AS(error_ket_norm(s, Q, 0, 0), structural_error);
    auto not_self_adjoint = Coefficient::unit_i() * Q;
    CHECK_THROWS_AS(error_ket_norm(s, not_self_adjoint, 0, 1), structural_error);
}

TEST_CASE("error-ket norms are nonnegative reals on randomized states") {
    Rng rng(31415);
    for (int it = 0; it < 200; ++it) {
        int dof = 1 + static_cast<int>(rng() % 2);
        GaussianState st = random_state(rng, dof);
        // random self-adjoint operator: X + dagger(X)
        auto raw = moyal::testing::random_operator_poly(rng, dof, 3, 2);
        auto x = raw + dagger(raw);
        Rational x0 = moyal::testing::random_rational(rng, 2);
        unsigned m = 1 + rng() % 2;
        CHECK(error_ket_norm(st, x, x0, m) >= 0);
    }
}

TEST_CASE("mixed error-ket norm fixtures") {
    auto s = GaussianState::coherent(1, {0}, {0}, 1);
    ClassicalDatum datum({0, 0}, {1, 1});
    CHECK(mixed_error_ket_norm(s, {0}, datum) == Rational(1, 2));
    CHECK(mixed_error_ket_norm(s, {1}, datum) == Rational(1, 2));
    CHECK(mixed_error_ket_norm(s, {0, 1}, datum) == Rational(3, 4));
    CHECK(mixed_error_ket_norm(s, {}, datum) == Rational(1));
    CHECK_THROWS_AS(mixed_error_ket_norm(s, {7}, datum), structural_error);

    // single-index sequences agree with the self-adjoint error-ket norm
    Rng rng(271828);
    for (int it = 0; it < 30; ++it) {
        GaussianState st = random_state(rng, 1);
        ClassicalDatum d({st.mean_q[0], st.mean_p[0]}, {1, 1});
        CHECK(mixed_error_ket_norm(st, {0, 0}, d) ==
              error_ket_norm(st, OperatorPolynomial::q(1, 0), st.mean_q[0], 2));
        CHECK(mixed_error_ket_norm(st, {0}, d) >= 0);
        CHECK(mixed_error_ket_norm(st, {0, 1, 0}, d) >= 0);
        CHECK(mixed_error_ket_norm(st, {1, 0, 1, 0}, d) >= 0);
    }
}

TEST_CASE("classicality report fixtures") {
    auto s = GaussianState::coherent(1, {0}, {0}, 1);
    std::vector<PhasePolynomial> obs{PhasePolynomial::q(1, 0), PhasePolynomial::p(1, 0)};

    ClassicalDatum wide({0, 0}, {2, 2});
    auto report = classicality_check(s, wide, obs, 1);
    CHECK(report.classical);
    REQUIRE(report.entries.size() == 2);
    for (auto& e : report.entries) {
        CHECK(e.norm == Rational(1, 2));
        CHECK(e.bound == Rational(4));
        CHECK(e.pass);
    }

    ClassicalDatum tight({0, 0}, {Rational(1, 2), 2});
    auto fail = classicality_check(s, tight, obs, 1);
    CHECK(!fail.classical);
    CHECK(fail.entries[0].indices == std::vector<uint32_t>{0});
    CHECK(!fail.entries[0].pass);
    CHECK(fail.entries[0].bound == Rational(1, 4));
    CHECK(fail.entries[1].pass);

    // restricting the observable list restricts the tested sequences
    auto only_q = classicality_check(s, wide, {PhasePolynomial::q(1, 0)}, 1);
    REQUIRE(only_q.entries.size() == 1);
    CHECK(only_q.entries[0].indices == std::vector<uint32_t>{0});

    // higher order forms arrays of sequences
    auto second = classicality_check(s, wide, {PhasePolynomial::q(1, 0)}, 2);
    REQUIRE(second.entries.size() == 2);
    CHECK(second.entries[1].indices == std::vector<uint32_t>{0, 0});
    CHECK(second.entries[1].norm == Rational(3, 4));
    CHECK(second.entries[1].bound == Rational(16));

    // a product observable contributes mixed sequences
    auto mixed = classicality_check(s, wide, {parse_classical("q0*p0", 1)}, 1);
    bool has_qp = false;
    for (auto& e : mixed.entries) has_qp |= (e.indices == std::vector<uint32_t>{0, 1});
    CHECK(has_qp);
}

TEST_CASE("interval probability") {
    auto s = GaussianState(1, {0}, {0}, {1}, {1}, {0}, 1);
    CHECK(interval_probability(s, 0, -100, 100) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(interval_probability(s, 0, -1, 1) - 0.6826894921) < 1e-8);
    CHECK(interval_probability(s, 0, 3, 3) == 0.0);
    CHECK_THROWS_AS(interval_probability(s, 0, 1, -1), structural_error);
    CHECK_THROWS_AS(interval_probability(s, 5, 0, 1), structural_error);

    // shifted mean and non-unit variance
    auto t = GaussianState(1, {5}, {0}, {4}, {1}, {0}, 1);
    CHECK(std::abs(interval_probability(t, 0, 3, 7) - 0.6826894921) < 1e-8);

    // monotone in interval width
    double prev = 0.0;
    for (int w = 1; w <= 8; ++w) {
        double cur = interval_probability(s, 0, Rational(-w, 2), Rational(w, 2));
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("consistency check") {
    auto s = GaussianState::coherent(1, {0}, {0}, 1);
    std::vector<double> grid{0.0, 0.5, 0.9, 0.99};

    // generous margins (~3 sigma) pass everywhere
    ClassicalDatum wide({0, 0}, {3, 3});
    auto ok = consistency_check(s, wide, 1, grid);
    CHECK(ok == std::vector<bool>{true, true});

    // p = 0 grid point passes whenever the interval has positive mass
    ClassicalDatum tiny({0, 0}, {Rational(1, 100), Rational(1, 100)});
    CHECK(consistency_check(s, tiny, 1, {0.0}) == std::vector<bool>{true, true});

    // tiny margins fail at large p
    auto bad = consistency_check(s, tiny, 1, grid);
    CHECK(bad == std::vector<bool>{false, false});

    CHECK_THROWS_AS(consistency_check(s, wide, 0, grid), structural_error);
    CHECK_THROWS_AS(consistency_check(s, wide, 1, {1.0}), structural_error);
}

TEST_CASE("bound theorem: error-ket bound implies the interval confinement") {
    Rng rng(112358);
    std::vector<double> grid;
    for (int g = 0; g < 20; ++g) grid.push_back(g / 20.0);
    for (int it = 0; it < 40; ++it) {
        GaussianState st = random_state(rng, 1);
        for (unsigned m = 1; m <= 3; ++m) {
            std::vector<Rational> margins;
            for (int var = 0; var < 2; ++var) {
                auto x = var == 0 ? OperatorPolynomial::q(1, 0) : OperatorPolynomial::p(1, 0);
                Rational norm = error_ket_norm(st, x, st.mean(var), m);
                // smallest grid rational Delta with norm <= Delta^(2m)
                double root = std::pow(static_cast<double>(norm), 1.0 / (2.0 * m));
                Rational delta(static_cast<long long>(std::ceil(root * 1000)) + 1, 1000);
                margins.push_back(delta);
            }
            ClassicalDatum datum({st.mean_q[0], st.mean_p[0]}, margins);
            auto verdict = consistency_check(st, datum, m, grid);
            CHECK(verdict == std::vector<bool>{true, true});
        }
    }
}

TEST_CASE("propagate error fixtures") {
    ClassicalDatum datum({3, 0}, {Rational(1, 10), Rational(1, 5)});
    CHECK(propagate_error(PhasePolynomial::q(1, 0), datum, 1) == Rational(1, 10));
    CHECK(propagate_error(parse_classical("q0^2", 1), datum, 1) == Rational(61, 100));
    CHECK(propagate_error(PhasePolynomial::one(1), datum, 1) == Rational(0));
    // complex coefficient on an axis keeps the bound exact
    CHECK(propagate_error(Coefficient::unit_i() * PhasePolynomial::q(1, 0), datum, 1) ==
          Rational(1, 10));
}

TEST_CASE("propagate error bounds every corner perturbation exactly") {
    Rng rng(5);
    for (int it = 0; it < 25; ++it) {
        int dof = 1 + static_cast<int>(rng() % 2);
        // real-coefficient observable so the perturbation is a plain rational
        PhasePolynomial a(dof);
        auto raw = moyal::testing::random_phase_poly(rng, dof, 4, 4, 0, 1);
        for (auto& [m, c] : raw.terms())
            for (auto& [hb, v] : c.terms()) a.add_term(m, Coefficient(GaussianRational(v.re), hb));
        auto center = moyal::testing::random_point(rng, dof);
        std::vector<Rational> margins;
        for (int v = 0; v < 2 * dof; ++v)
            margins.push_back(Rational(1 + static_cast<int>(rng() % 3), 4));
        ClassicalDatum datum(center, margins);
        Rational hbar(1, 2);
        Rational bound = propagate_error(a, datum, hbar);
        GaussianRational base = a.evaluate(center, hbar);
        for (int corner = 0; corner < (1 << (2 * dof)); ++corner) {
            std::vector<Rational> shifted = center;
            for (int v = 0; v < 2 * dof; ++v)
                shifted[v] += (corner >> v) & 1 ? margins[v] : -margins[v];
            GaussianRational moved = a.evaluate(shifted, hbar);
            Rational diff = moved.re - base.re;
            if (diff < 0) diff = -diff;
            CHECK(diff <= bound);
        }
    }
}
