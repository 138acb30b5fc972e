#pragma once

#include <vector>

#include "mc/quotient.hpp"

namespace mc {

// SplitMix64 in counter form: draw i of a stream is mix(key + i * gamma), so streams split
// by index without shared state.
class SplitRng {
public:
    explicit SplitRng(u64 seed) : key_(mix(seed)) {}

    SplitRng split(u64 index) const { return SplitRng(key_ ^ mix(index + kGamma), 0); }

    u64 next() { return mix(key_ + (++ctr_) * kGamma); }

    // uniform in [0, b), b > 0
    u64 below(u64 b) {
        const u64 lim = ~u64{0} - (~u64{0} % b);
        u64 v;
        do v = next();
        while (v >= lim);
        return v % b;
    }

    u64 elem(const PrimeField& K) { return below(K.modulus()); }

    std::vector<u64> tape(const PrimeField& K, std::size_t len) {
        std::vector<u64> t(len);
        for (auto& v : t) v = elem(K);
        return t;
    }
    FpPoly poly(const PrimeField& K, std::size_t len) { return FpPoly(K, tape(K, len)); }
    FpPoly monic(const PrimeField& K, std::size_t deg) {
        auto c = tape(K, deg + 1);
        c[deg] = 1;
        return FpPoly(K, std::move(c));
    }

private:
    static constexpr u64 kGamma = 0x9e3779b97f4a7c15ull;
    SplitRng(u64 key, int) : key_(key) {}
    static u64 mix(u64 z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    u64 key_;
    u64 ctr_ = 0;
};

}  // namespace mc
