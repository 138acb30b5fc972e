#include "mc/ntt.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace mc {

namespace {

struct NttPrime {
    u64 mod;
    u64 root;
    int max_log;
};

constexpr std::array<NttPrime, 6> kPrimes = {{
    {2013265921ull, 31ull, 27},
    {998244353ull, 3ull, 23},
    {1004535809ull, 3ull, 21},
    {754974721ull, 11ull, 24},
    {469762049ull, 3ull, 26},
    {167772161ull, 3ull, 25},
}};

u64 pw(u64 a, u64 e, u64 m) {
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = r * a % m;
        a = a * a % m;
        e >>= 1;
    }
    return r;
}

u64 shoup_pre(u64 w, u64 m) { return static_cast<u64>((static_cast<u128>(w) << 64) / m); }

// x * w mod m with wp = shoup_pre(w, m), x < m < 2^32
inline u64 shoup_mul(u64 x, u64 w, u64 wp, u64 m) {
    const u64 q = static_cast<u64>((static_cast<u128>(x) * wp) >> 64);
    const u64 r = x * w - q * m;
    return r >= m ? r - m : r;
}

// x mod m for x < 2^64, bar = floor(2^64 / m)
inline u64 barrett(u64 x, u64 bar, u64 m) {
    const u64 q = static_cast<u64>((static_cast<u128>(x) * bar) >> 64);
    const u64 r = x - q * m;
    return r >= m ? r - m : r;
}

}  // namespace

NttPlan::NttPlan(std::size_t out_len, std::size_t terms, u64 p) : p_(p) {
    int lg = 0;
    while (sz_ < out_len) {
        sz_ <<= 1;
        ++lg;
    }
    // bound on each exact coefficient: terms * (p-1)^2
    const double need = std::log2(static_cast<double>(std::max<std::size_t>(terms, 1))) +
                        2.0 * std::log2(static_cast<double>(p > 1 ? p - 1 : 1)) + 2.0;
    double have = 0;
    while (k_ < kPrimes.size() && have < need) {
        have += std::log2(static_cast<double>(kPrimes[k_].mod));
        ++k_;
    }
    if (have < need) throw std::length_error("ntt: coefficient bound too large");
    for (std::size_t i = 0; i < k_; ++i)
        if (lg > kPrimes[i].max_log) throw std::length_error("ntt: transform too long");

    fwd_.resize(k_);
    inv_.resize(k_);
    fwd_sh_.resize(k_);
    inv_sh_.resize(k_);
    ninv_.resize(k_);
    ninv_sh_.resize(k_);
    bar_.resize(k_);
    for (std::size_t i = 0; i < k_; ++i) {
        const u64 m = kPrimes[i].mod;
        // level with half-length h stores h twiddles starting at offset h - 1
        fwd_[i].assign(sz_ > 1 ? sz_ - 1 : 0, 1);
        inv_[i].assign(sz_ > 1 ? sz_ - 1 : 0, 1);
        for (std::size_t h = 1; h < sz_; h <<= 1) {
            const u64 w = pw(kPrimes[i].root, (m - 1) / (2 * h), m);
            const u64 wi = pw(w, m - 2, m);
            u64 a = 1, b = 1;
            for (std::size_t t = 0; t < h; ++t) {
                fwd_[i][h - 1 + t] = a;
                inv_[i][h - 1 + t] = b;
                a = a * w % m;
                b = b * wi % m;
            }
        }
        fwd_sh_[i].resize(fwd_[i].size());
        inv_sh_[i].resize(inv_[i].size());
        for (std::size_t t = 0; t < fwd_[i].size(); ++t) {
            fwd_sh_[i][t] = shoup_pre(fwd_[i][t], m);
            inv_sh_[i][t] = shoup_pre(inv_[i][t], m);
        }
        ninv_[i] = pw(sz_ % m, m - 2, m);
        ninv_sh_[i] = shoup_pre(ninv_[i], m);
        bar_[i] = static_cast<u64>((static_cast<u128>(1) << 64) / m);
    }
    garner_inv_.assign(k_, std::vector<u64>(k_, 0));
    for (std::size_t i = 0; i < k_; ++i)
        for (std::size_t j = 0; j < i; ++j)
            garner_inv_[j][i] = pw(kPrimes[j].mod % kPrimes[i].mod, kPrimes[i].mod - 2, kPrimes[i].mod);
    prefix_p_.assign(k_, 1 % p);
    for (std::size_t i = 1; i < k_; ++i)
        prefix_p_[i] = static_cast<u64>(static_cast<u128>(prefix_p_[i - 1]) * (kPrimes[i - 1].mod % p) % p);
}

void NttPlan::transform(std::vector<u64>& a, std::size_t prime, bool invert) const {
    const u64 m = kPrimes[prime].mod;
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const auto& tw = invert ? inv_[prime] : fwd_[prime];
    const auto& tsh = invert ? inv_sh_[prime] : fwd_sh_[prime];
    for (std::size_t h = 1; h < n; h <<= 1) {
        const u64* ws = tw.data() + (h - 1);
        const u64* wp = tsh.data() + (h - 1);
        for (std::size_t i = 0; i < n; i += 2 * h) {
            for (std::size_t k = 0; k < h; ++k) {
                const u64 u = a[i + k];
                const u64 v = shoup_mul(a[i + k + h], ws[k], wp[k], m);
                a[i + k] = u + v >= m ? u + v - m : u + v;
                a[i + k + h] = u >= v ? u - v : u + m - v;
            }
        }
    }
    if (invert)
        for (auto& x : a) x = shoup_mul(x, ninv_[prime], ninv_sh_[prime], m);
}

NttPlan::Spectrum NttPlan::zero() const { return Spectrum(k_, std::vector<u64>(sz_, 0)); }

NttPlan::Spectrum NttPlan::forward(const std::vector<u64>& a) const {
    if (a.size() > sz_) throw std::length_error("ntt: input longer than the plan");
    Spectrum s(k_);
    for (std::size_t i = 0; i < k_; ++i) {
        const u64 m = kPrimes[i].mod;
        s[i].assign(sz_, 0);
        for (std::size_t t = 0; t < a.size(); ++t) s[i][t] = a[t] % m;
        transform(s[i], i, false);
    }
    return s;
}

void NttPlan::mul_acc(Spectrum& acc, const Spectrum& x, const Spectrum& y) const {
    for (std::size_t i = 0; i < k_; ++i) {
        const u64 m = kPrimes[i].mod, bar = bar_[i];
        u64* r = acc[i].data();
        const u64 *a = x[i].data(), *b = y[i].data();
        for (std::size_t t = 0; t < sz_; ++t) {
            const u64 v = r[t] + barrett(a[t] * b[t], bar, m);
            r[t] = v >= m ? v - m : v;
        }
    }
}

std::vector<u64> NttPlan::backward(Spectrum s, std::size_t len) const {
    for (std::size_t i = 0; i < k_; ++i) transform(s[i], i, true);
    std::vector<u64> out(std::min(len, sz_));
    std::vector<u64> v(k_);
    for (std::size_t t = 0; t < out.size(); ++t) {
        // x = v0 + v1 m0 + v2 m0 m1 + ..., digits taken mod m_i, sum taken mod p
        for (std::size_t i = 0; i < k_; ++i) {
            const u64 mi = kPrimes[i].mod;
            u64 x = s[i][t];
            for (std::size_t j = 0; j < i; ++j) {
                x = (x + mi - v[j] % mi) % mi;
                x = x * garner_inv_[j][i] % mi;
            }
            v[i] = x;
        }
        u128 acc = 0;
        for (std::size_t i = 0; i < k_; ++i) acc = (acc + static_cast<u128>(v[i] % p_) * prefix_p_[i]) % p_;
        out[t] = static_cast<u64>(acc);
    }
    return out;
}

std::vector<u64> ntt_multiply(const std::vector<u64>& a, const std::vector<u64>& b, u64 p) {
    if (a.empty() || b.empty()) return {};
    const std::size_t out = a.size() + b.size() - 1;
    NttPlan plan(out, std::min(a.size(), b.size()), p);
    auto acc = plan.zero();
    plan.mul_acc(acc, plan.forward(a), plan.forward(b));
    return plan.backward(std::move(acc), out);
}

}  // namespace mc
