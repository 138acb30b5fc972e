#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mc/pmat.hpp"
#include "mc/poly.hpp"

namespace mc {

struct ZeroConstantTerm : PreconditionError {
    ZeroConstantTerm() : PreconditionError("modulus has zero constant term") {}
};

inline std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// Element of K[x,y] as coefficients of x^j, each a polynomial in y.
template <class R>
struct BivarPoly {
    std::vector<Poly<R>> cols;

    std::size_t x_size() const { return cols.size(); }
    std::size_t y_size() const {
        std::size_t s = 0;
        for (const auto& c : cols) s = std::max(s, c.size());
        return s;
    }
    // coefficient of y^k as a polynomial in x
    Poly<R> y_coeff(const R& K, std::size_t k) const {
        std::vector<typename R::Elem> v(cols.size(), K.zero());
        for (std::size_t j = 0; j < cols.size(); ++j) v[j] = cols[j].coef(k);
        return Poly<R>(K, std::move(v));
    }
    static BivarPoly from_univariate_y(const Poly<R>& g) { return BivarPoly{{g}}; }
};

template <class R>
std::vector<Poly<R>> powers_mod(const Modulus<R>& M, const Poly<R>& a, std::size_t count) {
    std::vector<Poly<R>> pw;
    if (count == 0) return pw;
    pw.push_back(M.rem(Poly<R>::one(a.ring())));
    const Poly<R> ar = M.rem(a);
    for (std::size_t i = 1; i < count; ++i) pw.push_back(M.mulmod(pw.back(), ar));
    return pw;
}

// ---------------------------------------------------------------- Brent-Kung

template <class R>
struct BrentKungBlocks {
    std::vector<Poly<R>> b;  // b_i ≡ g_{ir} + ... + g_{ir+r-1} a^{r-1}
    Poly<R> giant;           // a^r rem f
};

template <class R>
BrentKungBlocks<R> brent_kung_blocks(const Poly<R>& f, const Poly<R>& a, const Poly<R>& g) {
    const R& K = f.ring();
    const std::size_t n = static_cast<std::size_t>(f.deg());
    const std::size_t d = std::max<std::size_t>(1, g.size());
    const std::size_t r = ceil_sqrt(d), s = ceil_div(d, r);
    Modulus<R> M(f);
    auto pw = powers_mod(M, a, r + 1);
    Mat<R> A(K, r, n), G(K, s, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < pw[i].size(); ++j) A(i, j) = pw[i].coeffs()[j];
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < r; ++j) G(i, j) = g.coef(i * r + j);
    Mat<R> B = mat_mul(G, A);
    BrentKungBlocks<R> out;
    for (std::size_t i = 0; i < s; ++i)
        out.b.emplace_back(K, std::vector<typename R::Elem>(B.a.begin() + i * n, B.a.begin() + (i + 1) * n));
    out.giant = pw[r];
    return out;
}

// g(a) rem f by baby steps / giant steps with one dense matrix product.
template <class R>
Poly<R> brent_kung_compose(const Poly<R>& f, const Poly<R>& a, const Poly<R>& g) {
    if (f.deg() < 1) throw PreconditionError("modulus must have positive degree");
    if (g.is_zero()) return Poly<R>(f.ring());
    auto blk = brent_kung_blocks(f, a, g);
    Modulus<R> M(f);
    Poly<R> acc(f.ring());
    for (std::size_t i = blk.b.size(); i-- > 0;) acc = M.mulmod(acc, blk.giant) + blk.b[i];
    return acc;
}

// ---------------------------------------------------------------- power projection

// (ℓ(1), ℓ(a), ..., ℓ(a^{d-1} rem f)) with ℓ(b) = Σ ell_i b_i, by the naive sequence of powers.
template <class R>
std::vector<typename R::Elem> power_projection_naive(const Poly<R>& f, const Poly<R>& a, std::size_t d,
                                                     const std::vector<typename R::Elem>& ell) {
    const R& K = f.ring();
    Modulus<R> M(f);
    std::vector<typename R::Elem> out;
    Poly<R> cur = M.rem(Poly<R>::one(K));
    const Poly<R> ar = M.rem(a);
    for (std::size_t k = 0; k < d; ++k) {
        typename R::Elem s = K.zero();
        for (std::size_t i = 0; i < cur.size() && i < ell.size(); ++i) s = K.add(s, K.mul(ell[i], cur.coeffs()[i]));
        out.push_back(s);
        if (k + 1 < d) cur = M.mulmod(cur, ar);
    }
    return out;
}

// Same output as power_projection_naive. Linear forms are carried as polynomials P with
// Σ_k ℓ(x^k) x^{-k-1} = P / f, so that b·ℓ corresponds to b P rem f (giant steps), and the
// coefficient vector of a form is read off as rev(P, n-1) / rev(f, n) mod x^n.
template <class R>
std::vector<typename R::Elem> power_projection(const Poly<R>& f, const Poly<R>& a, std::size_t d,
                                               const std::vector<typename R::Elem>& ell) {
    const R& K = f.ring();
    const std::size_t n = static_cast<std::size_t>(f.deg());
    if (ell.size() != n) throw PreconditionError("projection vector must have length deg f");
    if (d == 0) return {};
    const std::size_t r = ceil_sqrt(d), s = ceil_div(d, r);
    Modulus<R> M(f);
    auto pw = powers_mod(M, a, r + 1);

    std::vector<typename R::Elem> lrev(n);
    for (std::size_t k = 0; k < n; ++k) lrev[n - 1 - k] = ell[k];
    Poly<R> Pl = slice(f * Poly<R>(K, std::move(lrev)), n, n);
    const Poly<R> rinv = series_inv(rev(f, n), n);

    Mat<R> V(K, s, n), AT(K, n, r);
    for (std::size_t i = 0; i < s; ++i) {
        Poly<R> form = mul_trunc(rev(Pl, n - 1), rinv, n);
        for (std::size_t k = 0; k < form.size(); ++k) V(i, k) = form.coeffs()[k];
        if (i + 1 < s) Pl = M.mulmod(Pl, pw[r]);
    }
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t k = 0; k < pw[j].size(); ++k) AT(k, j) = pw[j].coeffs()[k];
    Mat<R> W = mat_mul(V, AT);
    std::vector<typename R::Elem> out(d);
    for (std::size_t k = 0; k < d; ++k) out[k] = W.a[k];  // W(i, j) = ℓ(a^{ir+j}), row-major
    return out;
}

// Minimal polynomial of a linearly recurrent sequence v_0..v_{2d-1} of order at most d,
// by the extended Euclidean scheme on (x^{2d}, Σ v_i x^{2d-1-i}).
template <class R>
Poly<R> min_poly_for_sequence(const R& K, const std::vector<typename R::Elem>& v, std::size_t d) {
    std::vector<typename R::Elem> hc(2 * d, K.zero());
    for (std::size_t i = 0; i < 2 * d && i < v.size(); ++i) hc[2 * d - 1 - i] = v[i];
    Poly<R> h(K, std::move(hc));
    if (h.is_zero()) return Poly<R>::one(K);
    Poly<R> r0 = Poly<R>::monomial(K, K.one(), 2 * d), r1 = h;
    Poly<R> t0(K), t1 = Poly<R>::one(K);
    while (!r1.is_zero() && r1.deg() >= static_cast<long>(d)) {
        auto [q, rr] = divrem(r0, r1);
        Poly<R> t2 = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(rr);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    return monic(t1);
}

template <class R>
std::vector<typename R::Elem> lift_tape(const R& K, std::span<const u64> t) {
    std::vector<typename R::Elem> v;
    v.reserve(t.size());
    for (u64 e : t) v.push_back(K.lift_base(e));
    return v;
}

// Candidate minimal polynomial of a (degree <= d) from a random projection.
template <class R>
Poly<R> small_minpoly_candidate(const Poly<R>& f, const Poly<R>& a, std::size_t d,
                                const std::vector<typename R::Elem>& ell) {
    return min_poly_for_sequence(f.ring(), power_projection(f, a, 2 * d, ell), d);
}

// g(a) rem f when the minimal polynomial of a has degree <= d; nullopt means Fail.
template <class R>
std::optional<Poly<R>> compose_small_minpoly(const Poly<R>& f, const Poly<R>& a, const Poly<R>& g, std::size_t d,
                                             const std::vector<typename R::Elem>& ell) {
    Poly<R> mu = small_minpoly_candidate(f, a, d, ell);
    if (!brent_kung_compose(f, a, mu).is_zero()) return std::nullopt;
    return brent_kung_compose(f, a, rem(g, mu));
}

// ---------------------------------------------------------------- Nüsken-Ziegler

// gs[i][j] is the coefficient of y^j in g_i, a polynomial in x of degree < m; j < r.
template <class R>
std::vector<Poly<R>> simultaneous_bivar_compose(const Poly<R>& f, const Poly<R>& a,
                                                const std::vector<std::vector<Poly<R>>>& gs, std::size_t m,
                                                std::size_t r) {
    const R& K = f.ring();
    const std::size_t n = static_cast<std::size_t>(f.deg());
    const std::size_t s = gs.size();
    if (s == 0) return {};
    m = std::max<std::size_t>(m, 1);
    r = std::max<std::size_t>(r, 1);
    Modulus<R> M(f);
    auto pw = powers_mod(M, a, r);
    const std::size_t L = ceil_div(n, m);
    PolyMatrix<R> A(K, r, L), G(K, s, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < L; ++j) A(i, j) = slice(pw[i], j * m, m);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < r && j < gs[i].size(); ++j) G(i, j) = gs[i][j];
    PolyMatrix<R> B = pm_mul(G, A);
    std::vector<Poly<R>> out;
    out.reserve(s);
    for (std::size_t i = 0; i < s; ++i) {
        std::vector<typename R::Elem> acc(L * m + 2 * m, K.zero());
        for (std::size_t j = 0; j < L; ++j) {
            const auto& c = B(i, j).coeffs();
            for (std::size_t t = 0; t < c.size(); ++t) acc[j * m + t] = K.add(acc[j * m + t], c[t]);
        }
        out.push_back(M.rem(Poly<R>(K, std::move(acc))));
    }
    return out;
}

// g(x, a) rem f for g in K[x,y] with x-degree < m and y-degree < d.
template <class R>
Poly<R> bivar_compose_nz(const Poly<R>& f, const Poly<R>& a, const BivarPoly<R>& g) {
    const R& K = f.ring();
    const std::size_t m = std::max<std::size_t>(1, g.x_size());
    const std::size_t d = std::max<std::size_t>(1, g.y_size());
    const std::size_t r = ceil_sqrt(d), s = ceil_div(d, r);
    std::vector<std::vector<Poly<R>>> gs(s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < r; ++j) gs[i].push_back(g.y_coeff(K, i * r + j));
    auto b = simultaneous_bivar_compose(f, a, gs, m, r);
    Modulus<R> M(f);
    const Poly<R> giant = powmod(a, r, f);
    Poly<R> acc(K);
    for (std::size_t i = s; i-- > 0;) acc = M.mulmod(acc, giant) + b[i];
    return acc;
}

// ---------------------------------------------------------------- truncated products

// Truncated quotients: H[i][j] = rev([p_i q_j quo f]_0^{m-1}, m-1). Requires m < n.
template <class R>
std::vector<std::vector<Poly<R>>> stmm_quotients(const Poly<R>& f, const std::vector<Poly<R>>& ps,
                                                 const std::vector<Poly<R>>& qs, std::size_t m) {
    const R& K = f.ring();
    const std::size_t n = static_cast<std::size_t>(f.deg());
    if (m == 0 || m >= n) throw PreconditionError("stmm_quotients needs 0 < m < deg f");
    const std::size_t ell = (n - m - 1) / m, t = (n - m - 1) % m;
    const std::size_t r = ps.size(), s = qs.size();
    const Poly<R> finv = series_inv(rev(f, n), n - 1);
    std::vector<Poly<R>> pb, qb;
    for (const auto& p : ps) pb.push_back(rev(p, n - 1));
    for (const auto& q : qs) qb.push_back(mul_trunc(rev(q, n - 1), finv, n - 1));

    PolyMatrix<R> P1(K, r, ell + 1), Q1(K, ell + 1, s), P2(K, r, ell), Q2(K, ell, s);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j <= ell; ++j) {
            P1(i, j) = slice(pb[i], j * m + t, m);
            if (j < ell) P2(i, j) = P1(i, j);
        }
    for (std::size_t i = 0; i <= ell; ++i)
        for (std::size_t j = 0; j < s; ++j) {
            Q1(i, j) = slice(qb[j], (ell - i) * m, m);
            if (i < ell) Q2(i, j) = slice(qb[j], (ell - 1 - i) * m, m);
        }
    PolyMatrix<R> H1 = pm_mul(P1, Q1);
    PolyMatrix<R> H2 = ell > 0 ? pm_mul(P2, Q2) : PolyMatrix<R>(K, r, s);
    std::vector<std::vector<Poly<R>>> H(r, std::vector<Poly<R>>(s, Poly<R>(K)));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < s; ++j) {
            Poly<R> h = slice(H1(i, j), 0, m) + slice(H2(i, j), m, m);
            if (t > 0) h += slice(slice(pb[i], 0, t) * slice(qb[j], ell * m + 1, m + t - 1), t - 1, m);
            H[i][j] = std::move(h);
        }
    return H;
}

// [p_i q_j rem f]_0^{m-1} for all pairs; full remainders when m >= deg f.
template <class R>
std::vector<std::vector<Poly<R>>> simultaneous_truncated_modmul(const Poly<R>& f, const std::vector<Poly<R>>& ps,
                                                                const std::vector<Poly<R>>& qs, std::size_t m) {
    const std::size_t n = static_cast<std::size_t>(f.deg());
    std::vector<std::vector<Poly<R>>> out(ps.size());
    if (m >= n) {
        Modulus<R> M(f);
        for (std::size_t i = 0; i < ps.size(); ++i)
            for (const auto& q : qs) out[i].push_back(M.mulmod(ps[i], q));
        return out;
    }
    auto H = stmm_quotients(f, ps, qs, m);
    const Poly<R> fm = trunc(f, m);
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = 0; j < qs.size(); ++j)
            out[i].push_back(mul_trunc(ps[i], qs[j], m) - mul_trunc(rev(H[i][j], m - 1), fm, m));
    return out;
}

// [b a^k rem f]_0^{m-1} for 0 <= k < d.
template <class R>
std::vector<Poly<R>> truncated_powers(const Poly<R>& f, const Poly<R>& a, const Poly<R>& b, std::size_t m,
                                      std::size_t d) {
    if (d == 0) return {};
    const std::size_t r = ceil_sqrt(d), s = ceil_div(d, r);
    Modulus<R> M(f);
    auto pw = powers_mod(M, a, r + 1);
    std::vector<Poly<R>> baby(pw.begin(), pw.begin() + static_cast<long>(r));
    std::vector<Poly<R>> giant{M.rem(b)};
    for (std::size_t j = 1; j < s; ++j) giant.push_back(M.mulmod(giant.back(), pw[r]));
    auto c = simultaneous_truncated_modmul(f, baby, giant, m);
    std::vector<Poly<R>> out(d, Poly<R>(f.ring()));
    for (std::size_t j = 0; j < s; ++j)
        for (std::size_t i = 0; i < r && i + r * j < d; ++i) out[i + r * j] = c[i][j];
    return out;
}

// out[i][k] = [x^i a^k rem f]_0^{m-1} for 0 <= i < m, 0 <= k < d. Needs f(0) != 0.
template <class R>
std::vector<std::vector<Poly<R>>> block_truncated_powers(const Poly<R>& f, const Poly<R>& a, std::size_t m,
                                                         std::size_t d) {
    const R& K = f.ring();
    if (K.is_zero(f.coef(0))) throw ZeroConstantTerm();
    std::vector<std::vector<Poly<R>>> out(m, std::vector<Poly<R>>(d, Poly<R>(K)));
    if (m == 0 || d == 0) return out;
    const Poly<R> xm = rem(Poly<R>::monomial(K, K.one(), m - 1), f);
    auto rk = truncated_powers(f, a, xm, 2 * m - 1, d);
    const auto f0inv = K.inv(f.coef(0));
    for (std::size_t k = 0; k < d; ++k) {
        Poly<R> cur = rk[k];
        out[m - 1][k] = trunc(cur, m);
        for (std::size_t i = m - 1; i >= 1; --i) {
            const auto c = K.neg(K.mul(cur.coef(0), f0inv));
            cur = shift_down(cur + scale(slice(f, 0, m + i), c), 1);
            out[i - 1][k] = trunc(cur, m);
        }
    }
    return out;
}

}  // namespace mc
