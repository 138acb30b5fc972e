#include <doctest.h>

#include "mc/towers.hpp"
#include "oracles.hpp"

using namespace mc;
using namespace testsupport;

namespace {

FpPoly random_squarefree(Gen& G, const PrimeField& K, std::size_t d) {
    for (;;) {
        auto h = G.monic(K, d);
        if (gcd(h, derivative(h)).deg() == 0) return h;
    }
}

// monic f = Π_i P_i^{m_i} for pairwise coprime squarefree P_i
FpPoly random_profile(Gen& G, const PrimeField& K, std::size_t maxdeg) {
    FpPoly f = FpPoly::one(K);
    for (int k = 0, parts = 1 + static_cast<int>(G.below(3)); k < parts; ++k) {
        auto P = random_squarefree(G, K, 1 + G.below(3));
        P = quo(P, gcd(P, f));
        if (P.deg() < 1) continue;
        const std::size_t m = 1 + G.below(6);
        if (static_cast<std::size_t>(f.deg() + P.deg() * static_cast<long>(m)) > maxdeg) continue;
        f = f * pow(P, m);
    }
    return f.deg() < 1 ? FpPoly::x(K) : f;
}

void check_decomposition(const FpPoly& f, const SeparableDecomposition& sd) {
    const PrimeField& K = f.ring();
    const u64 p = K.characteristic();
    // 1: f = c Π f_i
    FpPoly prod = FpPoly::constant(K, sd.c);
    for (const auto& s : sd.parts) prod = prod * part_modulus(s);
    CHECK(prod == f);
    for (std::size_t i = 0; i < sd.parts.size(); ++i) {
        const auto& s = sd.parts[i];
        // 3: separable, monic, positive degree
        CHECK(s.h.deg() >= 1);
        CHECK(s.h.lead() == 1);
        CHECK(gcd(s.h, derivative(s.h)).deg() == 0);
        // 5: p does not divide ell
        CHECK(s.ell % p != 0);
        for (std::size_t j = i + 1; j < sd.parts.size(); ++j) {
            // 2: coprime parts
            CHECK(gcd(part_modulus(s), part_modulus(sd.parts[j])).deg() == 0);
            // 6: distinct (e, ell)
            CHECK((s.e != sd.parts[j].e || s.ell != sd.parts[j].ell));
        }
    }
}

}  // namespace

TEST_CASE("separable decomposition") {
    PrimeField F5(5);
    auto x = P(F5, {0, 1}), x1 = P(F5, {1, 1});
    auto sd = separable_decomposition(x * x * x1 * x1 * x1);
    REQUIRE(sd.parts.size() == 2);
    CHECK(sd.c == 1);
    CHECK(sd.parts[0].h == x);
    CHECK(sd.parts[0].e == 0);
    CHECK(sd.parts[0].ell == 2);
    CHECK(sd.parts[1].h == x1);
    CHECK(sd.parts[1].ell == 3);

    PrimeField F2(2);
    auto s2 = separable_decomposition(P(F2, {0, 0, 1}));
    REQUIRE(s2.parts.size() == 1);
    CHECK(s2.parts[0].h == P(F2, {0, 1}));
    CHECK(s2.parts[0].e == 1);
    CHECK(s2.parts[0].ell == 1);

    auto s3 = separable_decomposition(P(F5, {3, 0, 2}));
    REQUIRE(s3.parts.size() == 1);
    CHECK(s3.c == 2);
    CHECK(s3.parts[0].h == P(F5, {4, 0, 1}));
    CHECK(s3.parts[0].ell == 1);
    CHECK_THROWS_AS(separable_decomposition(P(F5, {3})), PreconditionError);

    Gen G(51);
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 65537ull}) {
        PrimeField K(p);
        for (int t = 0; t < 60; ++t) {
            auto f = t % 3 == 0 ? G.monic(K, 1 + G.below(30)) : random_profile(G, K, 40);
            if (t % 4 == 1) f = f * FpPoly::constant(K, G.nonzero(K));
            check_decomposition(f, separable_decomposition(f));
        }
    }
}

TEST_CASE("untangling") {
    PrimeField F5(5);
    auto h = P(F5, {2, 0, 1});
    auto u = untangle(h, 2, P(F5, {0, 0, 1}));
    REQUIRE(u.coeffs.size() == 2);
    CHECK(u.coeffs[0] == P(F5, {2}));
    CHECK(u.coeffs[1] == P(F5, {0, 2}));
    CHECK(tangle(u) == P(F5, {0, 0, 1}));
    auto z = untangle(h, 3, P(F5, {0, 1}));
    CHECK(z.coeffs[1].is_one());
    CHECK(z.coeffs[0].is_zero());
    CHECK_THROWS_AS(tangle(TowerElement{P(F5, {1, 2, 1}), 0, 2, {P(F5, {1}), FpPoly(F5)}}), NotSeparable);

    // f = x^2 + 1 = (x + 1)^2 over F2: z^2 = θ
    PrimeField F2(2);
    auto zt = untangle_general(P(F2, {1, 1}), 1, 1, P(F2, {0, 1}));
    REQUIRE(zt.coeffs.size() == 2);
    CHECK(zt.coeffs[1].is_one());
    auto zz = tower_mul(zt, zt);
    CHECK(zz.coeffs[0] == P(F2, {1}));
    CHECK(zz.coeffs[1].is_zero());
    CHECK(tangle_general(zt) == P(F2, {0, 1}));

    Gen G(52);
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 65537ull}) {
        PrimeField K(p);
        for (int t = 0; t < 40; ++t) {
            const std::size_t d = 1 + G.below(4), ell = 1 + G.below(4);
            std::size_t e = G.below(3);
            while (d * ell * prime_power(p, e) > 32) --e;
            const std::size_t q = prime_power(p, e), n = d * ell * q;
            auto hh = random_squarefree(G, K, d);
            const FpPoly f = part_modulus(SeparablePart{hh, e, ell});
            auto a = G.poly(K, n), b = G.poly(K, n);
            auto A = untangle_general(hh, e, ell, a), B = untangle_general(hh, e, ell, b);
            const auto theta = P(K, {0, 1});
            CHECK(to_tower(A.coeffs, n / d) == naive_tower_image(hh, q, ell, theta, a));
            CHECK(tangle_general(A) == a);
            auto AB = untangle_general(hh, e, ell, rem(a * b, f));
            auto prod = naive_tower_mul(hh, q, ell, theta, to_tower(A.coeffs, n / d), to_tower(B.coeffs, n / d));
            CHECK(to_tower(AB.coeffs, n / d) == prod);
            CHECK(tower_mul(A, B) == AB);
            if (e == 0) {
                auto u1 = untangle(hh, ell, a);
                CHECK(u1 == A);
                CHECK(tangle(u1) == a);
            }
        }
    }
}

TEST_CASE("bivariate and main reduction") {
    PrimeField F7(7);
    std::vector<u64> none;
    auto br = bivariate_reduction(P(F7, {6, 1}), 2, P(F7, {1}), P(F7, {0, 0, 0, 1}), none);
    REQUIRE(br.has_value());
    CHECK((*br)[0] == P(F7, {5}));
    CHECK((*br)[1] == P(F7, {3}));
    auto cst = bivariate_reduction(P(F7, {6, 1}), 3, P(F7, {4}), P(F7, {2}), none);
    REQUIRE(cst.has_value());
    CHECK((*cst)[0] == P(F7, {2}));
    CHECK((*cst)[1].is_zero());

    Gen G(53);
    PrimeField K(2147483647);
    int ok = 0;
    for (int t = 0; t < 40; ++t) {
        const std::size_t d = 1 + G.below(5), ell = 1 + G.below(3);
        auto h = random_squarefree(G, K, d);
        auto alpha = G.poly(K, d), g = G.poly(K, 1 + G.below(4 * d * ell));
        auto r = bivariate_reduction(h, ell, alpha, g, G.tape(K, base_case_tape_length(d)));
        if (!r) continue;
        ++ok;
        CHECK(to_tower(*r, ell) == naive_tower_image(h, 1, ell, alpha, g));
        if (ell == 1) CHECK((*r)[0] == oracle_compose(h, alpha, g));
    }
    CHECK(ok >= 38);

    // G(θ, A) = g(A) in the tower, checked by substitution
    for (u64 p : {2ull, 3ull, 5ull, 65537ull, 2147483647ull}) {
        PrimeField F(p);
        int hits = 0, total = 0;
        for (int t = 0; t < 30; ++t) {
            const std::size_t d = 1 + G.below(3), ell = 1 + G.below(3);
            std::size_t e = G.below(3);
            while (d * ell * prime_power(p, e) > 24) --e;
            const std::size_t q = prime_power(p, e), N = ell * q;
            auto h = random_squarefree(G, F, d);
            const FpPoly f = part_modulus(SeparablePart{h, e, ell});
            auto a = G.poly(F, d * N), g = G.poly(F, 1 + G.below(3 * d * N));
            auto A = untangle_general(h, e, ell, a);
            CHECK(tower_frobenius_residue(A) == rem(a, h));
            auto Gm = main_reduction(A, g, G.tape(F, base_case_tape_length(d)));
            ++total;
            if (!Gm) continue;
            ++hits;
            REQUIRE(Gm->size() == N);
            const auto theta = P(F, {0, 1});
            const Tower At = to_tower(A.coeffs, N);
            Tower acc(N);
            for (std::size_t i = N; i-- > 0;) {
                acc = naive_tower_mul(h, q, ell, theta, acc, At);
                acc[0] = vec_add(F, acc[0], (*Gm)[i].coeffs());
            }
            CHECK(acc == naive_tower_image(h, q, ell, theta, oracle_compose(f, a, g)));
        }
        if (p > 1000) CHECK(hits >= total - 2);
    }
}

TEST_CASE("composition over a product of fields") {
    Gen G(54);
    PrimeField K(65537);
    const auto theta = P(K, {0, 1});
    // h = θ(θ - 1)(θ^2 + 3): zero tests on θ split it
    const FpPoly h = P(K, {0, 1}) * P(K, {-1, 1}) * P(K, {3, 0, 1});
    const std::vector<FpPoly> factors{P(K, {0, 1}), P(K, {-1, 1}), P(K, {3, 0, 1})};
    int ok = 0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t ell = 2 + G.below(8);
        std::vector<FpPoly> A(ell, FpPoly(K));
        BivarInTheta Gy(ell, FpPoly(K));
        for (auto& v : A) v = G.poly(K, 4);
        for (auto& v : Gy) v = G.poly(K, 4);
        if (t % 3 == 0) A[0] = FpPoly(K);  // A vanishes at z = θ
        auto tape = G.tape(K, base_case_tape_length(ell));
        auto B = compose_insep_product_of_fields(h, theta, 0, ell, A, Gy, tape);
        if (!B) continue;
        ++ok;
        // direct evaluation of G(θ, A) in the tower
        Tower acc(ell);
        for (std::size_t i = ell; i-- > 0;) {
            acc = naive_tower_mul(h, 1, ell, theta, acc, to_tower(A, ell));
            acc[0] = vec_add(K, acc[0], Gy[i].coeffs());
        }
        CHECK(to_tower(*B, ell) == acc);
        // and factor by factor
        for (const auto& hj : factors) {
            std::vector<FpPoly> Aj, Gj;
            for (auto& v : A) Aj.push_back(rem(v, hj));
            for (auto& v : Gy) Gj.push_back(rem(v, hj));
            auto Bj = compose_insep_product_of_fields(hj, rem(theta, hj), 0, ell, Aj, Gj, tape);
            REQUIRE(Bj.has_value());
            for (std::size_t j = 0; j < ell; ++j) CHECK(rem((*B)[j], hj) == (*Bj)[j]);
        }
    }
    CHECK(ok >= 18);

    // G = y gives A back; d = 1 stays over the base field
    std::vector<FpPoly> A{P(K, {5}), P(K, {7})};
    BivarInTheta Gy{FpPoly(K), P(K, {1})};
    auto r = compose_insep_product_of_fields(P(K, {-3, 1}), P(K, {3}), 0, 2, A, Gy, G.tape(K, 8));
    REQUIRE(r.has_value());
    CHECK((*r)[0] == P(K, {5}));
    CHECK((*r)[1] == P(K, {7}));
}

TEST_CASE("composition modulo a power and top-level composition") {
    Gen G(55);
    PrimeField K(2147483647);
    int ok = 0, total = 0;
    for (int t = 0; t < 40; ++t) {
        const std::size_t d = 1 + G.below(6), ell = 1 + G.below(3);
        auto h = random_squarefree(G, K, d);
        const FpPoly f = pow(h, ell);
        const std::size_t n = d * ell;
        auto a = G.poly(K, n), g = G.poly(K, 1 + G.below(2 * n));
        auto r = compose_modulo_power(h, 0, ell, a, g, G.tape(K, base_case_tape_length(n)));
        ++total;
        if (t % 5 == 0) {
            auto y = compose_modulo_power(h, 0, ell, a, P(K, {0, 1}), G.tape(K, base_case_tape_length(n)));
            if (y) CHECK(*y == rem(a, f));
        }
        if (!r) continue;
        ++ok;
        CHECK(*r == oracle_compose(f, a, g));
    }
    CHECK(ok >= total - 2);
    CHECK_THROWS_AS(compose_modulo_power(P(K, {1, 2, 1}), 0, 1, P(K, {1}), P(K, {1}), G.tape(K, 8)), NotSeparable);

    // small characteristic with e > 0
    for (u64 p : {2ull, 3ull, 5ull}) {
        PrimeField F(p);
        for (int t = 0; t < 30; ++t) {
            const std::size_t d = 1 + G.below(3), ell = 1 + G.below(3);
            std::size_t e = 1 + G.below(2);
            while (e > 0 && d * ell * prime_power(p, e) > 24) --e;
            auto h = random_squarefree(G, F, d);
            const FpPoly f = part_modulus(SeparablePart{h, e, ell});
            const std::size_t n = static_cast<std::size_t>(f.deg());
            auto a = G.poly(F, n), g = G.poly(F, n);
            auto r = compose_modulo_power(h, e, ell, a, g, G.tape(F, base_case_tape_length(n)));
            if (r) CHECK(*r == oracle_compose(f, a, g));
        }
    }

    // top level
    PrimeField F2(2);
    auto f6 = pow(P(F2, {1, 1}), 6), a2 = pow(P(F2, {1, 1}), 2);
    auto c2 = modular_composition(f6, a2, P(F2, {0, 1, 1}), G.tape(F2, modular_composition_tape_length(6)));
    REQUIRE(c2.has_value());
    CHECK(*c2 == oracle_compose(f6, a2, P(F2, {0, 1, 1})));

    ok = total = 0;
    for (int t = 0; t < 30; ++t) {
        auto cof = random_squarefree(G, K, 1 + G.below(6));
        const FpPoly f = P(K, {0, 0, 1}) * pow(P(K, {1, 1}), 3) * quo(cof, gcd(cof, P(K, {0, 1, 1})));
        const std::size_t n = static_cast<std::size_t>(f.deg());
        auto a = G.poly(K, n), g = G.poly(K, n);
        auto tape = G.tape(K, modular_composition_tape_length(n));
        auto y = modular_composition(f, a, P(K, {0, 1}), tape);
        if (y) CHECK(*y == rem(a, f));
        auto r = modular_composition(f, a, g, tape);
        ++total;
        if (!r) continue;
        ++ok;
        CHECK(*r == oracle_compose(f, a, g));
    }
    CHECK(ok >= total - 2);

    for (u64 p : {2ull, 3ull, 5ull, 65537ull}) {
        PrimeField F(p);
        for (int t = 0; t < 40; ++t) {
            const std::size_t n = 1 + G.below(24);
            auto f = t % 2 ? random_profile(G, F, n) : G.monic(F, n);
            f = f * FpPoly::constant(F, G.nonzero(F));
            const std::size_t nf = static_cast<std::size_t>(f.deg());
            auto a = G.poly(F, nf), g = G.poly(F, nf);
            auto r = modular_composition(f, a, g, G.tape(F, modular_composition_tape_length(nf)));
            if (r) CHECK(*r == oracle_compose(f, a, g));
        }
    }
    CHECK_THROWS_AS(modular_composition(P(K, {1, 0, 1}), P(K, {0, 1}), P(K, {1}), std::vector<u64>{}), TapeExhausted);
}
