#pragma once

#include <cstddef>
#include <vector>

#include "mc/field.hpp"

namespace mc {

// Transform length and prime set for products over F_p whose exact integer coefficients are
// sums of at most `terms` products of residues in [0, p). Values are recombined by Garner.
class NttPlan {
public:
    // spectrum[i] is the transform modulo the i-th word prime
    using Spectrum = std::vector<std::vector<u64>>;

    NttPlan(std::size_t out_len, std::size_t terms, u64 p);

    std::size_t size() const { return sz_; }
    std::size_t primes() const { return k_; }

    Spectrum zero() const;
    Spectrum forward(const std::vector<u64>& a) const;
    // acc += x * y pointwise
    void mul_acc(Spectrum& acc, const Spectrum& x, const Spectrum& y) const;
    // inverse transform, first len coefficients reduced mod p
    std::vector<u64> backward(Spectrum s, std::size_t len) const;

private:
    void transform(std::vector<u64>& a, std::size_t prime, bool invert) const;

    u64 p_;
    std::size_t sz_ = 1, k_ = 0;
    std::vector<std::vector<u64>> fwd_, inv_;  // twiddles per prime, concatenated by level
    std::vector<std::vector<u64>> fwd_sh_, inv_sh_;  // floor(w * 2^64 / m) for each twiddle
    std::vector<u64> ninv_, ninv_sh_, bar_;
    std::vector<std::vector<u64>> garner_inv_;
    std::vector<u64> prefix_p_;
};

// Product of two coefficient vectors over F_p via several word-size NTT primes
// recombined with Garner's algorithm. Inputs are residues in [0, p).
std::vector<u64> ntt_multiply(const std::vector<u64>& a, const std::vector<u64>& b, u64 p);

}  // namespace mc
