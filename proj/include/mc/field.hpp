#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mc {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

struct MathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroInverse : MathError {
    ZeroInverse() : MathError("inverse of zero") {}
};
struct PreconditionError : MathError {
    using MathError::MathError;
};
struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};

bool is_prime_u64(u64 n);

class PrimeField {
public:
    using Elem = u64;

    explicit PrimeField(u64 p);

    u64 modulus() const { return p_; }
    u64 characteristic() const { return p_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem embed(u64 v) const { return v % p_; }
    Elem from_int(i64 v) const {
        i64 r = v % static_cast<i64>(p_);
        return r < 0 ? static_cast<u64>(r + static_cast<i64>(p_)) : static_cast<u64>(r);
    }

    Elem add(Elem a, Elem b) const {
        u64 s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
    Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
    Elem mul(Elem a, Elem b) const {
        if (p_ <= 0xffffffffull) return barrett(a * b);
        return static_cast<u64>(static_cast<u128>(a) * b % p_);
    }
    // acc + a*b
    Elem mul_add(Elem acc, Elem a, Elem b) const {
        if (p_ <= 0xffffffffull) return barrett(acc + a * b);
        return static_cast<u64>((static_cast<u128>(a) * b + acc) % p_);
    }
    Elem inv(Elem a) const;
    Elem pow(Elem a, u64 e) const;
    // Frobenius is the identity on a prime field.
    Elem frobenius(Elem a) const { return a; }

    bool is_zero(Elem a) const { return a == 0; }
    bool equal(Elem a, Elem b) const { return a == b; }

    // Number of products below p^2 that can be summed in a u128 without overflow.
    unsigned lazy_terms() const { return lazy_; }
    u64 reduce128(u128 v) const {
        if (v >> 64 == 0) return p_ <= 0xffffffffull ? barrett(static_cast<u64>(v)) : static_cast<u64>(v) % p_;
        return static_cast<u64>(v % p_);
    }

    const PrimeField& base() const { return *this; }
    Elem lift_base(u64 v) const { return v; }

    bool operator==(const PrimeField& o) const { return p_ == o.p_; }

private:
    // x mod p for p < 2^32, with bar_ = floor(2^64 / p)
    u64 barrett(u64 x) const {
        u64 q = static_cast<u64>((static_cast<u128>(x) * bar_) >> 64);
        u64 r = x - q * p_;
        return r >= p_ ? r - p_ : r;
    }

    u64 p_;
    u64 bar_ = 0;
    unsigned lazy_;
};

inline u64 ff_inv(const PrimeField& K, u64 x) { return K.inv(x); }

// ceil(n^(1/3)) and ceil(n^(2/3)) in exact integer arithmetic.
u64 ceil_cbrt(u64 n);
u64 ceil_cbrt_sq(u64 n);
u64 ceil_sqrt(u64 n);

}  // namespace mc
