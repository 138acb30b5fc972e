#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <type_traits>
#include <utility>
#include <vector>

#include "mc/field.hpp"
#include "mc/ntt.hpp"

namespace mc {

// Dense univariate polynomial, little-endian, always normalized.
// The ring object must outlive every polynomial that refers to it.
template <class R>
class Poly {
public:
    using Ring = R;
    using Elem = typename R::Elem;
    static constexpr long kZeroDeg = std::numeric_limits<long>::min() / 4;

    Poly() = default;
    explicit Poly(const R& r) : r_(&r) {}
    Poly(const R& r, std::vector<Elem> c) : r_(&r), c_(std::move(c)) { normalize(); }

    static Poly constant(const R& r, const Elem& v) { return Poly(r, std::vector<Elem>{v}); }
    static Poly monomial(const R& r, const Elem& v, std::size_t k) {
        std::vector<Elem> c(k + 1, r.zero());
        c[k] = v;
        return Poly(r, std::move(c));
    }
    static Poly x(const R& r) { return monomial(r, r.one(), 1); }
    static Poly one(const R& r) { return constant(r, r.one()); }
    static Poly from_ints(const R& r, std::initializer_list<i64> v) {
        std::vector<Elem> c;
        for (i64 t : v) c.push_back(r.from_int(t));
        return Poly(r, std::move(c));
    }

    const R& ring() const { return *r_; }
    const R* ring_ptr() const { return r_; }

    std::size_t size() const { return c_.size(); }
    long deg() const { return c_.empty() ? kZeroDeg : static_cast<long>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && r_->is_zero(r_->sub(c_[0], r_->one())); }
    Elem coef(std::size_t i) const { return i < c_.size() ? c_[i] : r_->zero(); }
    const Elem& lead() const { return c_.back(); }
    const std::vector<Elem>& coeffs() const { return c_; }

    void set_coef(std::size_t i, const Elem& v) {
        if (i >= c_.size()) c_.resize(i + 1, r_->zero());
        c_[i] = v;
        normalize();
    }

    // Raw access; callers restore normalization.
    std::vector<Elem>& raw() { return c_; }
    void normalize() {
        while (!c_.empty() && r_->is_zero(c_.back())) c_.pop_back();
    }

private:
    const R* r_ = nullptr;
    std::vector<Elem> c_;
};

template <class R>
const R& pick_ring(const Poly<R>& a, const Poly<R>& b) {
    return a.ring_ptr() ? a.ring() : b.ring();
}

namespace detail {

template <class R>
struct is_prime_field : std::is_same<R, PrimeField> {};

constexpr std::size_t kSchoolCut = 32;
constexpr std::size_t kNttCut = 96;

template <class R>
void school_mul(const R& K, const typename R::Elem* a, std::size_t na, const typename R::Elem* b,
                std::size_t nb, typename R::Elem* out) {
    if constexpr (is_prime_field<R>::value) {
        const unsigned lazy = K.lazy_terms();
        for (std::size_t k = 0; k + 1 < na + nb; ++k) {
            std::size_t lo = k >= nb ? k - nb + 1 : 0;
            std::size_t hi = std::min(k, na - 1);
            u128 acc = out[k];
            unsigned cnt = 1;
            for (std::size_t i = lo; i <= hi; ++i) {
                acc += static_cast<u128>(a[i]) * b[k - i];
                if (++cnt >= lazy) {
                    acc = K.reduce128(acc);
                    cnt = 1;
                }
            }
            out[k] = K.reduce128(acc);
        }
    } else {
        for (std::size_t i = 0; i < na; ++i) {
            if (K.is_zero(a[i])) continue;
            for (std::size_t j = 0; j < nb; ++j) out[i + j] = K.add(out[i + j], K.mul(a[i], b[j]));
        }
    }
}

template <class R>
std::vector<typename R::Elem> mul_vec(const R& K, const std::vector<typename R::Elem>& a,
                                      const std::vector<typename R::Elem>& b);

template <class R>
std::vector<typename R::Elem> karatsuba(const R& K, const std::vector<typename R::Elem>& a,
                                        const std::vector<typename R::Elem>& b) {
    using E = typename R::Elem;
    const std::size_t na = a.size(), nb = b.size();
    const std::size_t k = std::max(na, nb) / 2;
    auto lo = [&](const std::vector<E>& v) {
        return std::vector<E>(v.begin(), v.begin() + std::min(k, v.size()));
    };
    auto hi = [&](const std::vector<E>& v) {
        return v.size() > k ? std::vector<E>(v.begin() + k, v.end()) : std::vector<E>{};
    };
    auto addv = [&](const std::vector<E>& x, const std::vector<E>& y) {
        std::vector<E> r(std::max(x.size(), y.size()), K.zero());
        for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i];
        for (std::size_t i = 0; i < y.size(); ++i) r[i] = K.add(r[i], y[i]);
        return r;
    };
    auto a0 = lo(a), a1 = hi(a), b0 = lo(b), b1 = hi(b);
    auto z0 = mul_vec(K, a0, b0);
    auto z2 = mul_vec(K, a1, b1);
    auto z1 = mul_vec(K, addv(a0, a1), addv(b0, b1));
    std::vector<E> out(na + nb - 1, K.zero());
    for (std::size_t i = 0; i < z0.size(); ++i) {
        out[i] = K.add(out[i], z0[i]);
        z1[i] = K.sub(z1[i], z0[i]);
    }
    for (std::size_t i = 0; i < z2.size(); ++i) {
        out[i + 2 * k] = K.add(out[i + 2 * k], z2[i]);
        z1[i] = K.sub(z1[i], z2[i]);
    }
    for (std::size_t i = 0; i < z1.size() && i + k < out.size(); ++i) out[i + k] = K.add(out[i + k], z1[i]);
    return out;
}

template <class R>
std::vector<typename R::Elem> mul_vec(const R& K, const std::vector<typename R::Elem>& a,
                                      const std::vector<typename R::Elem>& b) {
    using E = typename R::Elem;
    if (a.empty() || b.empty()) return {};
    const std::size_t na = a.size(), nb = b.size();
    const std::size_t mn = std::min(na, nb), mx = std::max(na, nb);
    if (mn < kSchoolCut) {
        std::vector<E> out(na + nb - 1, K.zero());
        school_mul(K, a.data(), na, b.data(), nb, out.data());
        return out;
    }
    if constexpr (is_prime_field<R>::value) {
        if (mn >= kNttCut) return ntt_multiply(a, b, K.modulus());
    }
    if (mx > 2 * mn) {
        // unbalanced: cut the long operand into pieces of the short length
        const auto& L = na >= nb ? a : b;
        const auto& S = na >= nb ? b : a;
        std::vector<E> out(na + nb - 1, K.zero());
        for (std::size_t off = 0; off < L.size(); off += mn) {
            std::vector<E> piece(L.begin() + off, L.begin() + std::min(L.size(), off + mn));
            auto pr = mul_vec(K, piece, S);
            for (std::size_t i = 0; i < pr.size(); ++i) out[off + i] = K.add(out[off + i], pr[i]);
        }
        return out;
    }
    return karatsuba(K, a, b);
}

}  // namespace detail

// ---- basic arithmetic ----

template <class R>
Poly<R> operator+(const Poly<R>& a, const Poly<R>& b) {
    const R& K = pick_ring(a, b);
    std::vector<typename R::Elem> c(std::max(a.size(), b.size()), K.zero());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a.coeffs()[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] = K.add(c[i], b.coeffs()[i]);
    return Poly<R>(K, std::move(c));
}

template <class R>
Poly<R> operator-(const Poly<R>& a, const Poly<R>& b) {
    const R& K = pick_ring(a, b);
    std::vector<typename R::Elem> c(std::max(a.size(), b.size()), K.zero());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a.coeffs()[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] = K.sub(c[i], b.coeffs()[i]);
    return Poly<R>(K, std::move(c));
}

template <class R>
Poly<R> operator-(const Poly<R>& a) {
    std::vector<typename R::Elem> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a.ring().neg(a.coeffs()[i]);
    return Poly<R>(a.ring(), std::move(c));
}

template <class R>
Poly<R> operator*(const Poly<R>& a, const Poly<R>& b) {
    const R& K = pick_ring(a, b);
    return Poly<R>(K, detail::mul_vec(K, a.coeffs(), b.coeffs()));
}

template <class R>
Poly<R>& operator+=(Poly<R>& a, const Poly<R>& b) { return a = a + b; }
template <class R>
Poly<R>& operator-=(Poly<R>& a, const Poly<R>& b) { return a = a - b; }
template <class R>
Poly<R>& operator*=(Poly<R>& a, const Poly<R>& b) { return a = a * b; }

template <class R>
bool operator==(const Poly<R>& a, const Poly<R>& b) {
    if (a.size() != b.size()) return false;
    const R& K = pick_ring(a, b);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!K.equal(a.coeffs()[i], b.coeffs()[i])) return false;
    return true;
}

template <class R>
Poly<R> scale(const Poly<R>& a, const typename R::Elem& c) {
    std::vector<typename R::Elem> v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[i] = a.ring().mul(a.coeffs()[i], c);
    return Poly<R>(a.ring(), std::move(v));
}

// [u]_lo^{len-1}: coefficients lo .. lo+len-1 shifted down to degree 0.
template <class R>
Poly<R> slice(const Poly<R>& u, std::size_t lo, std::size_t len) {
    std::vector<typename R::Elem> v;
    if (lo < u.size()) v.assign(u.coeffs().begin() + lo, u.coeffs().begin() + std::min(u.size(), lo + len));
    return Poly<R>(u.ring(), std::move(v));
}

template <class R>
Poly<R> trunc(const Poly<R>& u, std::size_t k) { return slice(u, 0, k); }

template <class R>
Poly<R> shift_up(const Poly<R>& u, std::size_t k) {
    if (u.is_zero()) return u;
    std::vector<typename R::Elem> v(k, u.ring().zero());
    v.insert(v.end(), u.coeffs().begin(), u.coeffs().end());
    return Poly<R>(u.ring(), std::move(v));
}

template <class R>
Poly<R> shift_down(const Poly<R>& u, std::size_t k) { return slice(u, k, u.size()); }

template <class R>
Poly<R> mul_trunc(const Poly<R>& a, const Poly<R>& b, std::size_t k) {
    return trunc(trunc(a, k) * trunc(b, k), k);
}

// rev(u, m) = x^m u(1/x)
template <class R>
Poly<R> rev(const Poly<R>& u, std::size_t m) {
    if (!u.is_zero() && static_cast<std::size_t>(u.deg()) > m)
        throw PreconditionError("rev: degree exceeds reversal bound");
    std::vector<typename R::Elem> v(m + 1, u.ring().zero());
    for (std::size_t i = 0; i < u.size(); ++i) v[m - i] = u.coeffs()[i];
    return Poly<R>(u.ring(), std::move(v));
}

template <class R>
typename R::Elem eval(const Poly<R>& u, const typename R::Elem& x) {
    const R& K = u.ring();
    typename R::Elem acc = K.zero();
    for (std::size_t i = u.size(); i-- > 0;) acc = K.add(K.mul(acc, x), u.coeffs()[i]);
    return acc;
}

template <class R>
Poly<R> derivative(const Poly<R>& u) {
    const R& K = u.ring();
    std::vector<typename R::Elem> v(u.size() > 0 ? u.size() - 1 : 0);
    for (std::size_t i = 1; i < u.size(); ++i) v[i - 1] = K.mul(u.coeffs()[i], K.from_int(static_cast<i64>(i % K.characteristic())));
    return Poly<R>(K, std::move(v));
}

// u(x^k)
template <class R>
Poly<R> inflate(const Poly<R>& u, std::size_t k) {
    if (u.is_zero()) return u;
    std::vector<typename R::Elem> v((u.size() - 1) * k + 1, u.ring().zero());
    for (std::size_t i = 0; i < u.size(); ++i) v[i * k] = u.coeffs()[i];
    return Poly<R>(u.ring(), std::move(v));
}

// Coefficients of index ≡ r mod k, compressed: sum_i u_{ik+r} x^i.
template <class R>
Poly<R> deflate_part(const Poly<R>& u, std::size_t k, std::size_t r) {
    std::vector<typename R::Elem> v;
    for (std::size_t i = r; i < u.size(); i += k) v.push_back(u.coeffs()[i]);
    return Poly<R>(u.ring(), std::move(v));
}

// coefficient-wise Frobenius applied `times` times
template <class R>
Poly<R> frobenius_coeffs(const Poly<R>& u, std::size_t times) {
    std::vector<typename R::Elem> v = u.coeffs();
    for (auto& c : v)
        for (std::size_t t = 0; t < times; ++t) c = u.ring().frobenius(c);
    return Poly<R>(u.ring(), std::move(v));
}

template <class R>
Poly<R> pow(const Poly<R>& u, u64 k) {
    Poly<R> r = Poly<R>::one(u.ring()), b = u;
    while (k) {
        if (k & 1) r = r * b;
        k >>= 1;
        if (k) b = b * b;
    }
    return r;
}

template <class R>
Poly<R> monic(const Poly<R>& u) {
    if (u.is_zero()) return u;
    return scale(u, u.ring().inv(u.lead()));
}

// ---- power series ----

template <class R>
Poly<R> series_inv(const Poly<R>& u, std::size_t k) {
    const R& K = u.ring();
    if (u.is_zero() || K.is_zero(u.coef(0))) throw PreconditionError("series_inv: non-unit constant term");
    if (k == 0) return Poly<R>(K);
    Poly<R> g = Poly<R>::constant(K, K.inv(u.coef(0)));
    std::size_t prec = 1;
    const Poly<R> two = Poly<R>::constant(K, K.from_int(2));
    while (prec < k) {
        prec = std::min(2 * prec, k);
        // g <- g (2 - u g)
        Poly<R> e = mul_trunc(u, g, prec);
        g = mul_trunc(g, two - e, prec);
    }
    return g;
}

// ---- division ----

template <class R>
std::pair<Poly<R>, Poly<R>> divrem_school(const Poly<R>& u, const Poly<R>& f) {
    const R& K = pick_ring(u, f);
    if (f.is_zero()) throw PreconditionError("division by zero polynomial");
    if (u.size() < f.size()) return {Poly<R>(K), u};
    const std::size_t n = f.size() - 1;
    const typename R::Elem li = K.inv(f.lead());
    std::vector<typename R::Elem> r = u.coeffs();
    std::vector<typename R::Elem> q(u.size() - n, K.zero());
    for (std::size_t i = u.size(); i-- > n;) {
        if (K.is_zero(r[i])) continue;
        typename R::Elem c = K.mul(r[i], li);
        q[i - n] = c;
        for (std::size_t j = 0; j <= n; ++j) r[i - n + j] = K.sub(r[i - n + j], K.mul(c, f.coeffs()[j]));
    }
    r.resize(n);
    return {Poly<R>(K, std::move(q)), Poly<R>(K, std::move(r))};
}

// Division by a fixed polynomial with a cached reversed inverse for large sizes.
template <class R>
class Modulus {
public:
    Modulus() = default;
    explicit Modulus(Poly<R> f) : f_(std::move(f)) {
        if (f_.is_zero()) throw PreconditionError("zero modulus");
        n_ = f_.size() - 1;
        const R& K = f_.ring();
        lead_inv_ = K.inv(f_.lead());
        if (n_ >= kNewtonCut) finv_ = series_inv(rev(f_, n_), n_ + 1);
    }

    const Poly<R>& poly() const { return f_; }
    std::size_t degree() const { return n_; }

    std::pair<Poly<R>, Poly<R>> divrem(const Poly<R>& u) const {
        if (u.size() <= n_) return {Poly<R>(f_.ring()), u};
        if (n_ < kNewtonCut || u.size() - n_ < kNewtonCut) return divrem_school(u, f_);
        if (u.size() > 2 * n_ + 1) return divrem_blocks(u);
        return newton_divrem(u);
    }
    Poly<R> rem(const Poly<R>& u) const { return divrem(u).second; }
    Poly<R> mulmod(const Poly<R>& a, const Poly<R>& b) const { return rem(a * b); }

private:
    static constexpr std::size_t kNewtonCut = 48;

    std::pair<Poly<R>, Poly<R>> newton_divrem(const Poly<R>& u) const {
        // deg u <= 2n, quotient has at most n+1 coefficients
        const std::size_t qlen = u.size() - n_;
        Poly<R> ur = rev(u, u.size() - 1);
        Poly<R> qr = mul_trunc(ur, finv_, qlen);
        Poly<R> q = rev(qr, qlen - 1);
        Poly<R> r = trunc(u - f_ * q, n_);
        return {q, r};
    }

    std::pair<Poly<R>, Poly<R>> divrem_blocks(const Poly<R>& u) const {
        // reduce the top 2n+1 coefficients at a time
        Poly<R> r = u;
        Poly<R> q(f_.ring());
        while (r.size() > 2 * n_ + 1) {
            std::size_t cut = r.size() - (2 * n_ + 1);
            Poly<R> hi = shift_down(r, cut);
            auto [qh, rh] = newton_divrem(hi);
            q = q + shift_up(qh, cut);
            r = trunc(r, cut) + shift_up(rh, cut);
        }
        auto [ql, rl] = r.size() > n_ ? newton_divrem(r) : std::pair<Poly<R>, Poly<R>>{Poly<R>(f_.ring()), r};
        return {q + ql, rl};
    }

    Poly<R> f_;
    std::size_t n_ = 0;
    typename R::Elem lead_inv_{};
    Poly<R> finv_;
};

template <class R>
std::pair<Poly<R>, Poly<R>> divrem(const Poly<R>& u, const Poly<R>& f) {
    if (f.is_zero()) throw PreconditionError("division by zero polynomial");
    if (u.size() < f.size()) return {Poly<R>(pick_ring(u, f)), u};
    if (f.size() - 1 >= 48 && u.size() - f.size() + 1 >= 48 && f.ring().is_zero(f.ring().sub(f.lead(), f.ring().one())))
        return Modulus<R>(f).divrem(u);
    return divrem_school(u, f);
}

template <class R>
Poly<R> rem(const Poly<R>& u, const Poly<R>& f) { return divrem(u, f).second; }
template <class R>
Poly<R> quo(const Poly<R>& u, const Poly<R>& f) { return divrem(u, f).first; }

// exact division; throws if the remainder is not zero
template <class R>
Poly<R> exact_div(const Poly<R>& u, const Poly<R>& f) {
    auto [q, r] = divrem(u, f);
    if (!r.is_zero()) throw InvariantError("exact_div: nonzero remainder");
    return q;
}

template <class R>
struct XgcdResult {
    Poly<R> g, s, t;
};

// g monic, g = s u + t v
template <class R>
XgcdResult<R> xgcd(const Poly<R>& u, const Poly<R>& v) {
    const R& K = pick_ring(u, v);
    if (u.is_zero() && v.is_zero()) throw PreconditionError("xgcd of two zero polynomials");
    Poly<R> r0 = u, r1 = v;
    Poly<R> s0 = Poly<R>::one(K), s1(K), t0(K), t1 = Poly<R>::one(K);
    while (!r1.is_zero()) {
        auto [q, r] = divrem(r0, r1);
        Poly<R> s2 = s0 - q * s1, t2 = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    typename R::Elem li = K.inv(r0.lead());
    return {scale(r0, li), scale(s0, li), scale(t0, li)};
}

template <class R>
Poly<R> gcd(const Poly<R>& u, const Poly<R>& v) {
    const R& K = pick_ring(u, v);
    if (u.is_zero() && v.is_zero()) return Poly<R>(K);
    Poly<R> a = u, b = v;
    while (!b.is_zero()) {
        Poly<R> r = rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

// inverse of a modulo f; throws ZeroInverse when gcd(a, f) != 1
template <class R>
Poly<R> invmod(const Poly<R>& a, const Poly<R>& f) {
    auto x = xgcd(rem(a, f), f);
    if (x.g.size() != 1) throw ZeroInverse();
    return rem(x.s, f);
}

template <class R>
Poly<R> mulmod(const Poly<R>& a, const Poly<R>& b, const Poly<R>& f) { return rem(a * b, f); }

template <class R>
Poly<R> powmod(const Poly<R>& a, u64 k, const Poly<R>& f) {
    Modulus<R> M(f);
    Poly<R> r = M.rem(Poly<R>::one(f.ring())), b = M.rem(a);
    while (k) {
        if (k & 1) r = M.mulmod(r, b);
        k >>= 1;
        if (k) b = M.mulmod(b, b);
    }
    return r;
}

// u(x + c), divide-and-conquer Taylor shift (quadratic below 64 coefficients)
template <class R>
Poly<R> shift_var(const Poly<R>& u, const typename R::Elem& c) {
    const R& K = u.ring();
    const std::size_t n = u.size();
    if (n <= 1) return u;
    if (n <= 64) {
        // Horner: (((u_{n-1})(x+c) + u_{n-2})(x+c) + ...)
        std::vector<typename R::Elem> acc(n, K.zero());
        std::size_t len = 0;
        for (std::size_t i = n; i-- > 0;) {
            // acc <- acc*(x+c) + u_i
            for (std::size_t j = len; j > 0; --j) acc[j] = K.add(acc[j - 1], K.mul(acc[j], c));
            acc[0] = K.mul(acc[0], c);
            acc[0] = K.add(acc[0], u.coeffs()[i]);
            if (len < n - 1) ++len;
        }
        return Poly<R>(K, std::move(acc));
    }
    const std::size_t k = n / 2;
    Poly<R> lo = shift_var(trunc(u, k), c);
    Poly<R> hi = shift_var(shift_down(u, k), c);
    Poly<R> xc(K, std::vector<typename R::Elem>{c, K.one()});
    return lo + hi * pow(xc, k);
}

// g(a) rem f by Horner with a reduction at every step
template <class R>
Poly<R> horner_mod_compose(const Poly<R>& f, const Poly<R>& a, const Poly<R>& g) {
    Modulus<R> M(f);
    const Poly<R> ar = M.rem(a);
    Poly<R> acc(f.ring());
    for (std::size_t i = g.size(); i-- > 0;) acc = M.mulmod(acc, ar) + Poly<R>::constant(f.ring(), g.coeffs()[i]);
    return M.rem(acc);
}

// g(a) rem x^k
template <class R>
Poly<R> horner_trunc_compose(const Poly<R>& a, const Poly<R>& g, std::size_t k) {
    const R& K = a.ring();
    Poly<R> acc(K);
    const Poly<R> at = trunc(a, k);
    for (std::size_t i = g.size(); i-- > 0;) acc = mul_trunc(acc, at, k) + Poly<R>::constant(K, g.coeffs()[i]);
    return trunc(acc, k);
}

// Exact composition g(a) without reduction (small inputs only).
template <class R>
Poly<R> compose_exact(const Poly<R>& g, const Poly<R>& a) {
    Poly<R> acc(a.ring());
    for (std::size_t i = g.size(); i-- > 0;) acc = acc * a + Poly<R>::constant(a.ring(), g.coeffs()[i]);
    return acc;
}

}  // namespace mc
