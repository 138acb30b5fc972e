#include "mc/field.hpp"

namespace mc {

namespace {

u64 mulmod64(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod64(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod64(r, a, m);
        a = mulmod64(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These bases are deterministic for all 64-bit integers.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                comp = false;
                break;
            }
        }
        if (comp) return false;
    }
    return true;
}

PrimeField::PrimeField(u64 p) : p_(p), bar_(p >= 2 ? static_cast<u64>((static_cast<u128>(1) << 64) / p) : 0) {
    if (p >= (1ull << 62)) throw PreconditionError("modulus must be below 2^62");
    if (!is_prime_u64(p)) throw PreconditionError("modulus is not prime: " + std::to_string(p));
    u128 sq = static_cast<u128>(p - 1) * (p - 1);
    u128 lim = ~static_cast<u128>(0);
    u128 k = sq == 0 ? lim : lim / sq;
    lazy_ = k > 1u << 20 ? 1u << 20 : static_cast<unsigned>(k);
    if (lazy_ == 0) lazy_ = 1;
}

PrimeField::Elem PrimeField::inv(Elem a) const {
    if (a == 0) throw ZeroInverse();
    // extended Euclid on signed 128-bit to stay exact for p < 2^62
    __int128 t = 0, nt = 1;
    __int128 r = p_, nr = a;
    while (nr != 0) {
        __int128 q = r / nr;
        __int128 tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (t < 0) t += p_;
    return static_cast<u64>(t);
}

PrimeField::Elem PrimeField::pow(Elem a, u64 e) const { return powmod64(a, e, p_); }

u64 ceil_cbrt(u64 n) {
    u64 m = 0;
    while (static_cast<u128>(m) * m * m < n) ++m;
    return m;
}

u64 ceil_cbrt_sq(u64 n) {
    u64 m = 0;
    u128 t = static_cast<u128>(n) * n;
    while (static_cast<u128>(m) * m * m < t) ++m;
    return m;
}

u64 ceil_sqrt(u64 n) {
    u64 m = 0;
    while (static_cast<u128>(m) * m < n) ++m;
    return m;
}

}  // namespace mc
