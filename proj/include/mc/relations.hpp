#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "mc/blockseq.hpp"
#include "mc/pmat.hpp"
#include "mc/poly.hpp"
#include "mc/tape.hpp"

namespace mc {

// Exponents used to size the base case. Only m(n) and d(n, m) are used at runtime.
struct ParameterProfile {
    double omega = 3.0, omega2 = 4.0;
    std::optional<std::size_t> m_override;

    double eta() const { return 1.0 / (1.0 + (omega - 1.0) / ((omega2 - 2.0) / 2.0)); }
    double kappa() const { return 1.0 + 1.0 / (1.0 / (omega - 1.0) + 2.0 / (omega2 - 2.0)); }
    std::size_t m(std::size_t n) const {
        if (m_override) return std::clamp<std::size_t>(*m_override, 1, std::max<std::size_t>(n, 1));
        return ceil_cbrt(n);
    }
    static std::size_t d(std::size_t n, std::size_t m) { return ceil_div(n, m); }
};

enum class CertFlag { Cert, NoCert };

// Square matrix whose columns are relations r(x, y) (entry (i, j) is the
// coefficient of x^i in column j).
template <class R>
struct RelationMatrix {
    PolyMatrix<R> mat;
    CertFlag flag = CertFlag::NoCert;
    std::size_t m = 0, d = 0;

    bool certified() const { return flag == CertFlag::Cert; }
};

template <class R>
struct HankelBlock {
    Mat<R> H;
    std::size_t m = 0, d = 0;
};

template <class R>
BivarPoly<R> column_as_bivar(const PolyMatrix<R>& M, std::size_t j) {
    BivarPoly<R> b;
    for (std::size_t i = 0; i < M.rows(); ++i) b.cols.push_back(M(i, j));
    return b;
}

template <class R>
long diagonal_degree_sum(const PolyMatrix<R>& M) {
    long s = 0;
    for (std::size_t i = 0; i < std::min(M.rows(), M.cols()); ++i) {
        if (M(i, i).is_zero()) return -1;
        s += M(i, i).deg();
    }
    return s;
}

// ---------------------------------------------------------------- block Hankel

// (md) x (md) matrix with block (i, j) = X^T M_a^{i+j} X, X = (I_m; 0).
template <class R>
HankelBlock<R> build_block_hankel(const Poly<R>& f, const Poly<R>& a, std::size_t m, std::size_t d) {
    const R& K = f.ring();
    const std::size_t n = static_cast<std::size_t>(f.deg());
    if (m == 0 || m > n || d == 0) throw PreconditionError("build_block_hankel: need 1 <= m <= n, d >= 1");
    // cols[c][k] = [x^c a^k rem f]_0^{m-1}
    std::vector<std::vector<Poly<R>>> cols;
    if (!K.is_zero(f.coef(0))) {
        cols = block_truncated_powers(f, rem(a, f), m, 2 * d - 1);
    } else {
        Modulus<R> M(f);
        auto pw = powers_mod(M, a, 2 * d - 1);
        cols.assign(m, {});
        for (std::size_t c = 0; c < m; ++c)
            for (const auto& p : pw) cols[c].push_back(trunc(M.rem(shift_up(p, c)), m));
    }
    HankelBlock<R> out{Mat<R>(K, m * d, m * d), m, d};
    for (std::size_t bi = 0; bi < d; ++bi)
        for (std::size_t bj = 0; bj < d; ++bj)
            for (std::size_t c = 0; c < m; ++c)
                for (std::size_t l = 0; l < m; ++l) out.H(bi * m + l, bj * m + c) = cols[c][bi + bj].coef(l);
    return out;
}

namespace detail {

// sum_{k<len} S_k y^k with S_k column i = -[x^i b^{k+1} rem f]_0^{m-1}
template <class R>
PolyMatrix<R> inverse_series_block(const R& K, const std::vector<std::vector<Poly<R>>>& G, std::size_t m,
                                   std::size_t len) {
    PolyMatrix<R> S(K, m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t l = 0; l < m; ++l) {
            std::vector<typename R::Elem> c(len, K.zero());
            for (std::size_t k = 0; k < len; ++k) c[k] = K.neg(G[i][k + 1].coef(l));
            S(l, i) = Poly<R>(K, std::move(c));
        }
    return S;
}

template <class R>
bool right_columns_tall_enough(const PolyMatrix<R>& P, std::size_t m, long degR) {
    for (std::size_t j = m; j < 2 * m; ++j)
        if (P.col_deg(j) < degR) return false;
    return true;
}

}  // namespace detail

// ---------------------------------------------------------------- candidate basis

template <class R>
RelationMatrix<R> candidate_basis(const Poly<R>& f, const Poly<R>& a, std::size_t m, std::size_t d) {
    const R& K = f.ring();
    const std::size_t n = static_cast<std::size_t>(f.deg());
    if (f.deg() < 1 || m == 0 || m > n || d == 0) throw PreconditionError("candidate_basis: need 1 <= m <= n, d >= 1");
    if (K.is_zero(f.coef(0))) throw ZeroConstantTerm();
    const Poly<R> ainv = invmod(a, f);  // ZeroInverse when gcd(a, f) != 1
    auto A = block_truncated_powers(f, ainv, m, 2 * d + 1);
    PolyMatrix<R> F(K, m, 2 * m);
    PolyMatrix<R> S = detail::inverse_series_block(K, A, m, 2 * d);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) F(i, j) = S(i, j);
        F(i, m + i) = Poly<R>::constant(K, K.neg(K.one()));
    }
    PolyMatrix<R> P = approximant_basis(F, 2 * d, Shift(2 * m, 0));
    RelationMatrix<R> out{P.block(0, m, 0, m), CertFlag::NoCert, m, d};
    const long degR = out.mat.deg();
    if (diagonal_degree_sum(out.mat) == static_cast<long>(n) && detail::right_columns_tall_enough(P, m, degR))
        out.flag = CertFlag::Cert;
    return out;
}

// ---------------------------------------------------------------- matrix of relations

namespace detail {

// Sylvester matrix of r, s in K[y][x]: columns x^j r (j < deg s) then x^i s (i < deg r),
// rows indexed by ascending powers of x.
template <class R>
PolyMatrix<R> sylvester_columns(const R& K, const BivarPoly<R>& r, std::size_t dr, const BivarPoly<R>& s,
                                std::size_t ds) {
    const std::size_t N = dr + ds;
    PolyMatrix<R> S(K, N, N);
    for (std::size_t j = 0; j < ds; ++j)
        for (std::size_t i = 0; i <= dr; ++i) S(i + j, j) = r.cols[i];
    for (std::size_t j = 0; j < dr; ++j)
        for (std::size_t i = 0; i <= ds; ++i) S(i + j, ds + j) = s.cols[i];
    return S;
}

template <class R>
std::optional<std::size_t> x_degree(const BivarPoly<R>& b) {
    for (std::size_t i = b.cols.size(); i-- > 0;)
        if (!b.cols[i].is_zero()) return i;
    return std::nullopt;
}

}  // namespace detail

// Fail (nullopt) or a matrix whose columns are verified relations of (a, f).
// tape supplies the m-2 combination coefficients for columns 3..m.
template <class R>
std::optional<RelationMatrix<R>> matrix_of_relations(const Poly<R>& f, const Poly<R>& a, std::size_t m,
                                                     std::size_t d, std::span<const u64> tape) {
    const R& K = f.ring();
    RelationMatrix<R> cand = candidate_basis(f, a, m, d);
    if (cand.certified()) return cand;
    const PolyMatrix<R>& Rm = cand.mat;
    if (m == 1) {
        if (Rm(0, 0).is_zero() || !brent_kung_compose(f, a, Rm(0, 0)).is_zero()) return std::nullopt;
        return cand;
    }
    BivarPoly<R> r = column_as_bivar(Rm, 0), s = column_as_bivar(Rm, 1);
    for (std::size_t j = 2; j < m; ++j) {
        const auto c = K.lift_base(tape_at(tape, j - 2));
        for (std::size_t i = 0; i < m; ++i) s.cols[i] += scale(Rm(i, j), c);
    }
    if (!bivar_compose_nz(f, a, r).is_zero() || !bivar_compose_nz(f, a, s).is_zero()) return std::nullopt;
    if (m == 2) {
        if (pm_determinant(Rm).is_zero()) return std::nullopt;
        return cand;
    }
    auto dr = detail::x_degree(r), ds = detail::x_degree(s);
    if (!dr || !ds) return std::nullopt;
    // a relation free of x is already a 1x1 matrix of relations
    for (const auto* z : {&r, &s}) {
        const auto dz = z == &r ? *dr : *ds;
        if (dz == 0) {
            PolyMatrix<R> one(K, 1, 1);
            one(0, 0) = z->cols[0];
            return RelationMatrix<R>{std::move(one), CertFlag::NoCert, 1, d};
        }
    }
    PolyMatrix<R> Syl = detail::sylvester_columns(K, r, *dr, s, *ds);
    if (pm_determinant(Syl).is_zero()) return std::nullopt;
    const std::size_t mp = Syl.rows();
    return RelationMatrix<R>{std::move(Syl), CertFlag::NoCert, mp, d};
}

// ---------------------------------------------------------------- composition with relations

// g(x, a) rem f. g has x-degree < R.rows(); R must be a nonsingular matrix of relations.
template <class R>
Poly<R> compose_with_relation_matrix(const Poly<R>& f, const Poly<R>& a, const BivarPoly<R>& g,
                                     const PolyMatrix<R>& Rm) {
    const R& K = f.ring();
    const std::size_t m = Rm.rows();
    if (Rm.cols() != m) throw DimensionMismatch();
    if (g.x_size() > m) throw PreconditionError("compose_with_relation_matrix: x-degree of g too large");
    std::vector<Poly<R>> v(m, Poly<R>(K));
    bool zero = true;
    for (std::size_t i = 0; i < g.x_size(); ++i) {
        v[i] = g.cols[i];
        zero = zero && v[i].is_zero();
    }
    if (zero) return Poly<R>(K);
    auto kv = minimal_kernel_vector(Rm, v);
    PolyMatrix<R> w(K, m, 1);
    for (std::size_t i = 0; i < m; ++i) w(i, 0) = rem(kv.u[i], kv.r);
    PolyMatrix<R> Rw = pm_mul(Rm, w);
    BivarPoly<R> gt;
    for (std::size_t i = 0; i < m; ++i) gt.cols.push_back(exact_div(Rw(i, 0), kv.r));
    return bivar_compose_nz(f, a, gt);
}

template <class R>
Poly<R> compose_with_relation_matrix(const Poly<R>& f, const Poly<R>& a, const Poly<R>& g, const PolyMatrix<R>& Rm) {
    return compose_with_relation_matrix(f, a, BivarPoly<R>::from_univariate_y(g), Rm);
}

// ---------------------------------------------------------------- change of basis

template <class R>
struct ChangeOfBasis {
    PolyMatrix<R> mat;  // Popov basis of relations of (gamma, f)
    Poly<R> mu;        // minimal polynomial of gamma, degree n
    Poly<R> alpha;     // alpha(gamma) = a mod f, deg < n
};

template <class R>
std::optional<ChangeOfBasis<R>> change_of_basis(const Poly<R>& f, const Poly<R>& gamma, const Poly<R>& a,
                                                std::size_t m, std::size_t d) {
    const R& K = f.ring();
    const std::size_t n = static_cast<std::size_t>(f.deg());
    if (f.deg() < 1 || m == 0 || m > n || d == 0) throw PreconditionError("change_of_basis: need 1 <= m <= n, d >= 1");
    if (K.is_zero(f.coef(0))) throw ZeroConstantTerm();
    if (gcd(rem(gamma, f), f).deg() != 0) return std::nullopt;
    const Poly<R> gi = invmod(gamma, f);
    Modulus<R> M(f);
    auto rk = truncated_powers(f, gi, M.mulmod(gi, a), m, 2 * d);
    auto G = block_truncated_powers(f, gi, m, 2 * d + 2);
    PolyMatrix<R> S = detail::inverse_series_block(K, G, m, 2 * d);
    PolyMatrix<R> F(K, m, 2 * m + 1);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) F(i, j) = S(i, j);
        F(i, m + i) = Poly<R>::constant(K, K.neg(K.one()));
        std::vector<typename R::Elem> c(2 * d, K.zero());
        for (std::size_t k = 0; k < 2 * d; ++k) c[k] = rk[k].coef(i);
        F(i, 2 * m) = Poly<R>(K, std::move(c));
    }
    Shift t(2 * m + 1, 0);
    t[2 * m] = static_cast<long>(2 * d);
    PolyMatrix<R> Pbar = approximant_basis(F, 2 * d, t);
    PolyMatrix<R> P = Pbar.block(0, 2 * m, 0, 2 * m);
    PolyMatrix<R> Rm = P.block(0, m, 0, m);
    if (diagonal_degree_sum(Rm) < static_cast<long>(n) || !detail::right_columns_tall_enough(P, m, Rm.deg()))
        return std::nullopt;
    PolyMatrix<R> T;
    try {
        T = hermite_form(Rm);
    } catch (const SingularMatrix&) {
        return std::nullopt;
    }
    Poly<R> mu = T(0, 0);
    if (mu.deg() < static_cast<long>(n)) return std::nullopt;
    Poly<R> alpha = Pbar(0, 2 * m);
    for (std::size_t j = 1; j < m; ++j) alpha -= T(0, j) * Pbar(j, 2 * m);
    alpha = rem(alpha, mu);
    return ChangeOfBasis<R>{std::move(Rm), std::move(mu), std::move(alpha)};
}

}  // namespace mc
