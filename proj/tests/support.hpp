#pragma once

#include <random>
#include <vector>

#include "mc/field.hpp"
#include "mc/poly.hpp"
#include "mc/quotient.hpp"

namespace testsupport {

using namespace mc;

struct Gen {
    std::mt19937_64 rng;
    explicit Gen(u64 seed) : rng(seed) {}

    u64 below(u64 b) { return std::uniform_int_distribution<u64>(0, b - 1)(rng); }
    u64 range(u64 lo, u64 hi) { return std::uniform_int_distribution<u64>(lo, hi)(rng); }
    u64 elem(const PrimeField& K) { return below(K.modulus()); }
    u64 nonzero(const PrimeField& K) { return 1 + below(K.modulus() - 1); }

    // uniformly random polynomial with fewer than len coefficients
    FpPoly poly(const PrimeField& K, std::size_t len) {
        std::vector<u64> c(len);
        for (auto& v : c) v = elem(K);
        return FpPoly(K, std::move(c));
    }
    FpPoly monic(const PrimeField& K, std::size_t deg) {
        std::vector<u64> c(deg + 1);
        for (auto& v : c) v = elem(K);
        c[deg] = 1;
        return FpPoly(K, std::move(c));
    }
    std::vector<u64> tape(const PrimeField& K, std::size_t len) {
        std::vector<u64> t(len);
        for (auto& v : t) v = elem(K);
        return t;
    }
};

// ---- oracles written directly on coefficient vectors, independent of the library's fast paths

inline std::vector<u64> naive_mul(const PrimeField& K, const std::vector<u64>& a, const std::vector<u64>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<u64> c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = K.add(c[i + j], K.mul(a[i], b[j]));
    while (!c.empty() && c.back() == 0) c.pop_back();
    return c;
}

// remainder by long division, one coefficient at a time
inline std::vector<u64> naive_rem(const PrimeField& K, std::vector<u64> u, const std::vector<u64>& f) {
    const std::size_t n = f.size() - 1;
    const u64 li = K.inv(f.back());
    while (u.size() > n) {
        u64 c = K.mul(u.back(), li);
        const std::size_t off = u.size() - 1 - n;
        for (std::size_t j = 0; j <= n; ++j) u[off + j] = K.sub(u[off + j], K.mul(c, f[j]));
        u.pop_back();
    }
    while (!u.empty() && u.back() == 0) u.pop_back();
    return u;
}

inline std::vector<u64> naive_mulmod(const PrimeField& K, const std::vector<u64>& a, const std::vector<u64>& b,
                                     const std::vector<u64>& f) {
    return naive_rem(K, naive_mul(K, a, b), f);
}

// g(a) rem f by Horner on raw vectors
inline std::vector<u64> naive_compose(const PrimeField& K, const std::vector<u64>& f, const std::vector<u64>& a,
                                      const std::vector<u64>& g) {
    std::vector<u64> acc;
    for (std::size_t i = g.size(); i-- > 0;) {
        acc = naive_mulmod(K, acc, a, f);
        if (acc.empty()) acc.push_back(0);
        acc[0] = K.add(acc[0], g[i]);
        while (!acc.empty() && acc.back() == 0) acc.pop_back();
    }
    return naive_rem(K, acc, f);
}

inline FpPoly oracle_compose(const FpPoly& f, const FpPoly& a, const FpPoly& g) {
    return FpPoly(f.ring(), naive_compose(f.ring(), f.coeffs(), a.coeffs(), g.coeffs()));
}

// integer extended Euclid for inverses mod p
inline u64 euclid_inv(u64 x, u64 p) {
    i64 r0 = static_cast<i64>(p), r1 = static_cast<i64>(x % p), s0 = 0, s1 = 1;
    while (r1 != 0) {
        i64 q = r0 / r1;
        i64 t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    return static_cast<u64>(((s0 % static_cast<i64>(p)) + static_cast<i64>(p)) % static_cast<i64>(p));
}

inline FpPoly P(const PrimeField& K, std::initializer_list<i64> c) { return FpPoly::from_ints(K, c); }

}  // namespace testsupport
