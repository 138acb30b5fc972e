#include <doctest.h>

#include "mc/compose_core.hpp"
#include "oracles.hpp"

using namespace mc;
using namespace testsupport;

namespace {

FpPoly random_separable(Gen& G, const PrimeField& K, std::size_t n) {
    for (;;) {
        auto f = G.monic(K, n);
        if (gcd(f, derivative(f)).deg() == 0) return f;
    }
}

// (x^{p^e} - c)^ell built by repeated multiplication
FpPoly insep_oracle(const PrimeField& K, u64 c, std::size_t e, std::size_t ell) {
    std::size_t q = 1;
    for (std::size_t i = 0; i < e; ++i) q *= K.characteristic();
    std::vector<u64> b(q + 1, 0);
    b[0] = K.neg(c);
    b[q] = 1;
    std::vector<u64> acc{1};
    for (std::size_t i = 0; i < ell; ++i) acc = naive_mul(K, acc, b);
    return FpPoly(K, acc);
}

}  // namespace

TEST_CASE("small characteristic composition") {
    PrimeField F2(2);
    CHECK(compose_small_char(0ull, 2, 1, P(F2, {0, 1, 1}), P(F2, {0, 0, 1})) == P(F2, {0, 0, 1}));
    CHECK(compose_small_char(1ull, 1, 3, P(F2, {1, 1, 0, 1}), P(F2, {1})) == P(F2, {1}));

    Gen G(41);
    for (u64 p : {2ull, 3ull, 5ull, 7ull}) {
        PrimeField K(p);
        for (int t = 0; t < 60; ++t) {
            const std::size_t N = 1 + G.below(70);
            auto a = G.poly(K, N + 3), g = G.poly(K, 1 + G.below(90));
            auto ref = FpPoly(K, naive_compose(K, FpPoly::monomial(K, 1, N).coeffs(), a.coeffs(), g.coeffs()));
            CHECK(series_compose_small_char(a, g, N) == ref);
        }
        for (int t = 0; t < 40; ++t) {
            const std::size_t e = G.below(3);
            std::size_t ell = 1 + G.below(4);
            if (ell % p == 0) ++ell;
            const u64 c = t % 3 == 0 ? 0 : G.elem(K);
            auto f = insep_oracle(K, c, e, ell);
            if (f.deg() > 80) continue;
            const std::size_t n = static_cast<std::size_t>(f.deg());
            auto a = G.poly(K, n), g = G.poly(K, n);
            CHECK(compose_small_char(c, e, ell, a, g) == oracle_compose(f, a, g));
            CHECK(inseparable_modulus(K, c, e, ell) == f);
        }
    }
}

TEST_CASE("randomized base case") {
    PrimeField F5(5);
    auto one = base_case_compose(P(F5, {2, 1}), P(F5, {3}), P(F5, {0, 0, 1}), std::vector<u64>{});
    REQUIRE(one.has_value());
    CHECK(*one == P(F5, {4}));

    Gen G(42);
    PrimeField K(2147483647);
    int fails = 0, total = 0;
    for (int t = 0; t < 120; ++t) {
        const std::size_t n = 2 + G.below(30);
        auto f = random_separable(G, K, n);
        auto a = G.poly(K, n);
        auto g = t % 7 == 0 ? P(K, {0, 1}) : G.poly(K, 1 + G.below(2 * n));
        auto res = base_case_compose(f, a, g, G.tape(K, base_case_tape_length(n)));
        ++total;
        if (!res) {
            ++fails;
            continue;
        }
        CHECK(*res == oracle_compose(f, a, g));
    }
    CHECK(fails <= 2);
    CHECK_THROWS_AS(base_case_compose(P(K, {1, 0, 1}), P(K, {0, 1}), P(K, {1}), std::vector<u64>{1, 2}),
                    TapeExhausted);

    // arbitrary f, small fields: Fail is allowed, a wrong value is not
    for (u64 p : {2ull, 3ull, 5ull, 65537ull}) {
        PrimeField F(p);
        for (int t = 0; t < 60; ++t) {
            const std::size_t n = 2 + G.below(16);
            auto f = G.monic(F, n);
            auto a = G.poly(F, n), g = G.poly(F, 1 + G.below(2 * n));
            auto res = base_case_compose(f, a, g, G.tape(F, base_case_tape_length(n)));
            if (res) CHECK(*res == oracle_compose(f, a, g));
        }
    }
}

TEST_CASE("annihilating polynomial") {
    PrimeField F5(5);
    auto one = annihilating_polynomial(P(F5, {1, 1}), P(F5, {3}), std::vector<u64>{});
    REQUIRE(one.has_value());
    CHECK(*one == P(F5, {2, 1}));

    Gen G(43);
    PrimeField K(2147483647);
    for (int t = 0; t < 20; ++t) {
        auto mu = annihilating_polynomial(P(K, {1, 0, 1}), P(K, {0, 1}), G.tape(K, base_case_tape_length(2)));
        if (!mu) continue;
        CHECK(mu->deg() <= 8);
        CHECK(rem(*mu, P(K, {1, 0, 1})).is_zero());
    }
    int ok = 0;
    for (int t = 0; t < 80; ++t) {
        const std::size_t n = 2 + G.below(24);
        auto f = G.monic(K, n);
        auto a = t % 10 == 0 ? FpPoly(K) : G.poly(K, n);
        auto mu = annihilating_polynomial(f, a, G.tape(K, base_case_tape_length(n)));
        if (!mu) continue;
        ++ok;
        CHECK_FALSE(mu->is_zero());
        CHECK(mu->deg() <= static_cast<long>(4 * n));
        CHECK(oracle_compose(f, a, *mu).is_zero());
        CHECK(rem(*mu, naive_minpoly(f, a)).is_zero());
    }
    CHECK(ok >= 70);
}

TEST_CASE("minimal polynomial") {
    PrimeField F5(5);
    Gen G(44);
    auto c = minimal_polynomial(P(F5, {1, 0, 1}), P(F5, {3}), G.tape(F5, 4));
    REQUIRE(c.has_value());
    CHECK(c->mu == P(F5, {2, 1}));
    int hits = 0;
    for (int t = 0; t < 10; ++t) {
        auto r = minimal_polynomial(P(F5, {1, 0, 1}), P(F5, {0, 1}), G.tape(F5, 4));
        if (!r) continue;
        ++hits;
        CHECK(r->mu == P(F5, {1, 0, 1}));
    }
    CHECK(hits >= 5);

    PrimeField K(2147483647);
    int cert = 0, proj = 0;
    for (int t = 0; t < 80; ++t) {
        std::size_t n = 2 + G.below(24);
        auto f = G.monic(K, n);
        auto a = G.poly(K, n);
        if (t % 2 == 1) {
            // small minimal polynomial: f = h(x^k), a = x^k
            const std::size_t k = 2 + G.below(3);
            f = inflate(G.monic(K, 1 + G.below(6)), k);
            n = static_cast<std::size_t>(f.deg());
            a = FpPoly::monomial(K, 1, k);
        }
        auto r = minimal_polynomial(f, a, G.tape(K, minimal_polynomial_tape_length(n)));
        if (!r) continue;
        CHECK(r->mu == naive_minpoly(f, a));
        (r->provenance == MinPolyProvenance::CertifiedBasis ? cert : proj)++;
    }
    CHECK(cert > 20);
    CHECK(proj > 20);
}

TEST_CASE("composition modulo a purely inseparable polynomial") {
    Gen G(45);
    PrimeField F2(2);
    for (int t = 0; t < 20; ++t) {
        // p = 2 <= cbrt(8): deterministic route
        auto a = G.poly(F2, 8), g = G.poly(F2, 8);
        auto r = compose_modulo_inseparable(1ull, 3, 1, a, g, std::vector<u64>{});
        REQUIRE(r.has_value());
        CHECK(*r == oracle_compose(insep_oracle(F2, 1, 3, 1), a, g));
    }
    PrimeField K(65537);
    int ok = 0, total = 0;
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 2 + G.below(30);
        const u64 c = t % 4 == 0 ? 0 : G.elem(K);
        auto f = insep_oracle(K, c, 0, n);
        FpPoly a;
        if (t % 3 == 0) {
            // large valuation at the root: a = c' + (x - c)^v
            const std::size_t v = ceil_cbrt(n) + 1 + G.below(3);
            a = rem(FpPoly::constant(K, G.elem(K)) + pow(FpPoly(K, std::vector<u64>{K.neg(c), 1}), v), f);
        } else if (t % 3 == 1) {
            a = G.poly(K, n);
            a.set_coef(0, 0);
            a = rem(shift_var(a, K.neg(c)), f);  // vanishes at the root: gcd(a, f) != 1
        } else {
            a = G.poly(K, n);
        }
        auto g = G.poly(K, n);
        auto r = compose_modulo_inseparable(c, 0, n, a, g, G.tape(K, base_case_tape_length(n)));
        ++total;
        if (!r) continue;
        ++ok;
        CHECK(*r == oracle_compose(f, a, g));
    }
    CHECK(ok >= total - 2);
}

TEST_CASE("power series reversion") {
    PrimeField K(2147483647);
    Gen G(46);
    auto x = P(K, {0, 1});
    // a = x + x^2: reversion is the Catalan series with alternating signs
    auto g = series_reversion(P(K, {0, 1, 1}), 5);
    CHECK(g == P(K, {0, 1, -1, 2, -5}));
    CHECK_THROWS_AS(series_reversion(P(K, {1, 1}), 4), BadSeriesUnit);
    CHECK_THROWS_AS(series_reversion(P(K, {0, 0, 1}), 4), BadSeriesUnit);
    PrimeField F7(7);
    CHECK_THROWS_AS(series_reversion(P(F7, {0, 1, 1}), 8), CharacteristicTooSmall);

    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 1 + G.below(64);
        auto a = G.poly(K, n + 2);
        a.set_coef(0, 0);
        a.set_coef(1, G.nonzero(K));
        auto tape = t % 2 ? G.tape(K, series_reversion_tape_length(n)) : std::vector<u64>{};
        auto r = series_reversion(a, n, tape);
        CHECK(r.deg() < static_cast<long>(n));
        CHECK(r.coef(0) == 0);
        CHECK(horner_trunc_compose(r, a, n) == trunc(x, n));
        CHECK(horner_trunc_compose(a, r, n) == trunc(x, n));
    }
}
