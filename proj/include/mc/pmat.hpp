#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "mc/field.hpp"
#include "mc/kernels.hpp"
#include "mc/poly.hpp"

namespace mc {

struct DimensionMismatch : MathError {
    DimensionMismatch() : MathError("matrix dimensions do not agree") {}
};
struct SingularMatrix : MathError {
    SingularMatrix() : MathError("matrix is singular") {}
};

// ---------------------------------------------------------------- constant matrices

template <class R>
struct Mat {
    using Elem = typename R::Elem;
    const R* K = nullptr;
    std::size_t rows = 0, cols = 0;
    std::vector<Elem> a;

    Mat() = default;
    Mat(const R& k, std::size_t r, std::size_t c) : K(&k), rows(r), cols(c), a(r * c, k.zero()) {}
    static Mat identity(const R& k, std::size_t n) {
        Mat I(k, n, n);
        for (std::size_t i = 0; i < n; ++i) I(i, i) = k.one();
        return I;
    }
    Elem& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Elem& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

template <class R>
Mat<R> mat_mul_serial(const Mat<R>& A, const Mat<R>& B) {
    if (A.cols != B.rows) throw DimensionMismatch();
    const R& K = *A.K;
    Mat<R> C(K, A.rows, B.cols);
    if constexpr (std::is_same_v<R, PrimeField>) {
        mat_mul_fp_serial(K, A.a.data(), B.a.data(), C.a.data(), A.rows, A.cols, B.cols);
    } else {
        for (std::size_t i = 0; i < A.rows; ++i)
            for (std::size_t t = 0; t < A.cols; ++t) {
                if (K.is_zero(A(i, t))) continue;
                for (std::size_t j = 0; j < B.cols; ++j) C(i, j) = K.add(C(i, j), K.mul(A(i, t), B(t, j)));
            }
    }
    return C;
}

// Uses the OpenMP kernel over F_p for large products, the serial one otherwise.
template <class R>
Mat<R> mat_mul(const Mat<R>& A, const Mat<R>& B) {
    if constexpr (std::is_same_v<R, PrimeField>) {
        if (A.cols != B.rows) throw DimensionMismatch();
        if (A.rows * A.cols * B.cols >= kParallelWork && kernel_threads() > 1) {
            Mat<R> C(*A.K, A.rows, B.cols);
            mat_mul_fp_omp(*A.K, A.a.data(), B.a.data(), C.a.data(), A.rows, A.cols, B.cols);
            return C;
        }
    }
    return mat_mul_serial(A, B);
}

// Row echelon form in place; returns pivot columns. Optional companion receives the same row ops.
template <class R>
std::vector<std::size_t> row_echelon(Mat<R>& A, Mat<R>* companion = nullptr) {
    const R& K = *A.K;
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < A.cols && r < A.rows; ++c) {
        std::size_t sel = A.rows;
        for (std::size_t i = r; i < A.rows; ++i)
            if (!K.is_zero(A(i, c))) {
                sel = i;
                break;
            }
        if (sel == A.rows) continue;
        if (sel != r) {
            for (std::size_t j = 0; j < A.cols; ++j) std::swap(A(sel, j), A(r, j));
            if (companion)
                for (std::size_t j = 0; j < companion->cols; ++j) std::swap((*companion)(sel, j), (*companion)(r, j));
        }
        auto inv = K.inv(A(r, c));
        for (std::size_t j = 0; j < A.cols; ++j) A(r, j) = K.mul(A(r, j), inv);
        if (companion)
            for (std::size_t j = 0; j < companion->cols; ++j) (*companion)(r, j) = K.mul((*companion)(r, j), inv);
        for (std::size_t i = 0; i < A.rows; ++i) {
            if (i == r || K.is_zero(A(i, c))) continue;
            auto f = A(i, c);
            for (std::size_t j = 0; j < A.cols; ++j) A(i, j) = K.sub(A(i, j), K.mul(f, A(r, j)));
            if (companion)
                for (std::size_t j = 0; j < companion->cols; ++j)
                    (*companion)(i, j) = K.sub((*companion)(i, j), K.mul(f, (*companion)(r, j)));
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

template <class R>
std::size_t mat_rank(Mat<R> A) {
    return row_echelon(A).size();
}

template <class R>
Mat<R> mat_inverse(const Mat<R>& A) {
    if (A.rows != A.cols) throw DimensionMismatch();
    Mat<R> W = A, I = Mat<R>::identity(*A.K, A.rows);
    if (row_echelon(W, &I).size() != A.rows) throw SingularMatrix();
    return I;
}

template <class R>
typename R::Elem mat_det(Mat<R> A) {
    const R& K = *A.K;
    if (A.rows != A.cols) throw DimensionMismatch();
    auto det = K.one();
    const std::size_t n = A.rows;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t sel = n;
        for (std::size_t i = c; i < n; ++i)
            if (!K.is_zero(A(i, c))) {
                sel = i;
                break;
            }
        if (sel == n) return K.zero();
        if (sel != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A(sel, j), A(c, j));
            det = K.neg(det);
        }
        det = K.mul(det, A(c, c));
        auto inv = K.inv(A(c, c));
        for (std::size_t i = c + 1; i < n; ++i) {
            if (K.is_zero(A(i, c))) continue;
            auto f = K.mul(A(i, c), inv);
            for (std::size_t j = c; j < n; ++j) A(i, j) = K.sub(A(i, j), K.mul(f, A(c, j)));
        }
    }
    return det;
}

// Basis of the right kernel {v : A v = 0}, one column of the result per basis vector.
template <class R>
Mat<R> mat_kernel(const Mat<R>& A) {
    const R& K = *A.K;
    Mat<R> E = A;
    auto piv = row_echelon(E);
    std::vector<bool> is_piv(A.cols, false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < A.cols; ++c)
        if (!is_piv[c]) free.push_back(c);
    Mat<R> Ker(K, A.cols, free.size());
    for (std::size_t f = 0; f < free.size(); ++f) {
        Ker(free[f], f) = K.one();
        for (std::size_t r = 0; r < piv.size(); ++r) Ker(piv[r], f) = K.neg(E(r, free[f]));
    }
    return Ker;
}

// ---------------------------------------------------------------- polynomial matrices

template <class R>
class PolyMatrix {
public:
    using P = Poly<R>;

    PolyMatrix() = default;
    PolyMatrix(const R& K, std::size_t r, std::size_t c) : K_(&K), r_(r), c_(c), e_(r * c, P(K)) {}
    static PolyMatrix identity(const R& K, std::size_t n) {
        PolyMatrix I(K, n, n);
        for (std::size_t i = 0; i < n; ++i) I(i, i) = P::one(K);
        return I;
    }

    const R& ring() const { return *K_; }
    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    P& operator()(std::size_t i, std::size_t j) { return e_[i * c_ + j]; }
    const P& operator()(std::size_t i, std::size_t j) const { return e_[i * c_ + j]; }
    const std::vector<P>& entries() const { return e_; }
    std::vector<P>& entries() { return e_; }

    long col_deg(std::size_t j) const {
        long d = P::kZeroDeg;
        for (std::size_t i = 0; i < r_; ++i) d = std::max(d, (*this)(i, j).deg());
        return d;
    }
    long row_deg(std::size_t i) const {
        long d = P::kZeroDeg;
        for (std::size_t j = 0; j < c_; ++j) d = std::max(d, (*this)(i, j).deg());
        return d;
    }
    long deg() const {
        long d = P::kZeroDeg;
        for (const auto& p : e_) d = std::max(d, p.deg());
        return d;
    }
    bool is_zero() const {
        return std::all_of(e_.begin(), e_.end(), [](const P& p) { return p.is_zero(); });
    }

    PolyMatrix block(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const {
        PolyMatrix B(*K_, nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) B(i, j) = (*this)(r0 + i, c0 + j);
        return B;
    }
    PolyMatrix transpose() const {
        PolyMatrix T(*K_, c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) T(j, i) = (*this)(i, j);
        return T;
    }
    // coefficient of y^k as a constant matrix
    Mat<R> coeff(std::size_t k) const {
        Mat<R> M(*K_, r_, c_);
        for (std::size_t i = 0; i < e_.size(); ++i) M.a[i] = e_[i].coef(k);
        return M;
    }

    bool operator==(const PolyMatrix& o) const { return r_ == o.r_ && c_ == o.c_ && e_ == o.e_; }

private:
    const R* K_ = nullptr;
    std::size_t r_ = 0, c_ = 0;
    std::vector<P> e_;
};

template <class R>
PolyMatrix<R> pm_mul_serial(const PolyMatrix<R>& A, const PolyMatrix<R>& B) {
    if (A.cols() != B.rows()) throw DimensionMismatch();
    const R& K = A.ring();
    PolyMatrix<R> C(K, A.rows(), B.cols());
    if constexpr (std::is_same_v<R, PrimeField>) {
        C.entries() = pm_mul_fp_serial(K, A.entries(), A.rows(), A.cols(), B.entries(), B.cols());
    } else {
        for (std::size_t i = 0; i < A.rows(); ++i)
            for (std::size_t j = 0; j < B.cols(); ++j) {
                Poly<R> s(K);
                for (std::size_t t = 0; t < A.cols(); ++t) s += A(i, t) * B(t, j);
                C(i, j) = std::move(s);
            }
    }
    return C;
}

template <class R>
PolyMatrix<R> pm_mul(const PolyMatrix<R>& A, const PolyMatrix<R>& B) {
    if constexpr (std::is_same_v<R, PrimeField>) {
        if (A.cols() != B.rows()) throw DimensionMismatch();
        const std::size_t work = A.rows() * A.cols() * B.cols() *
                                 static_cast<std::size_t>(std::max<long>(1, A.deg() + 1)) *
                                 static_cast<std::size_t>(std::max<long>(1, B.deg() + 1));
        if (work >= kParallelWork && kernel_threads() > 1) {
            PolyMatrix<R> C(A.ring(), A.rows(), B.cols());
            C.entries() = pm_mul_fp_omp(A.ring(), A.entries(), A.rows(), A.cols(), B.entries(), B.cols());
            return C;
        }
    }
    return pm_mul_serial(A, B);
}

template <class R>
PolyMatrix<R> pm_add(const PolyMatrix<R>& A, const PolyMatrix<R>& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) throw DimensionMismatch();
    PolyMatrix<R> C = A;
    for (std::size_t i = 0; i < C.entries().size(); ++i) C.entries()[i] += B.entries()[i];
    return C;
}

// ---------------------------------------------------------------- shifted forms

using Shift = std::vector<long>;

// t-pivot of column j: the largest row index reaching the t-shifted column degree.
template <class R>
std::optional<std::pair<std::size_t, long>> column_pivot(const PolyMatrix<R>& P, std::size_t j, const Shift& t) {
    std::optional<std::pair<std::size_t, long>> best;
    for (std::size_t i = 0; i < P.rows(); ++i) {
        if (P(i, j).is_zero()) continue;
        long d = P(i, j).deg() + t[i];
        if (!best || d >= best->second) best = std::make_pair(i, d);
    }
    return best;
}

// Leading matrix entry (i,j): coefficient of y^{cdeg_j - t_i} in P(i,j).
template <class R>
Mat<R> shifted_leading_matrix(const PolyMatrix<R>& P, const Shift& t) {
    const R& K = P.ring();
    Mat<R> L(K, P.rows(), P.cols());
    for (std::size_t j = 0; j < P.cols(); ++j) {
        auto pv = column_pivot(P, j, t);
        if (!pv) continue;
        for (std::size_t i = 0; i < P.rows(); ++i) {
            long k = pv->second - t[i];
            if (k >= 0) L(i, j) = P(i, j).coef(static_cast<std::size_t>(k));
        }
    }
    return L;
}

// Weak Popov with pivots on the diagonal: leading matrix upper triangular and invertible.
template <class R>
bool is_weak_popov(const PolyMatrix<R>& P, const Shift& t) {
    if (P.rows() != P.cols()) return false;
    for (std::size_t j = 0; j < P.cols(); ++j) {
        auto pv = column_pivot(P, j, t);
        if (!pv || pv->first != j) return false;
    }
    return true;
}

// t-Popov: weak Popov on the diagonal, monic pivots, and every other entry of
// row i has degree below the pivot degree of row i.
template <class R>
bool is_popov(const PolyMatrix<R>& P, const Shift& t) {
    if (!is_weak_popov(P, t)) return false;
    const R& K = P.ring();
    for (std::size_t i = 0; i < P.rows(); ++i) {
        const auto& piv = P(i, i);
        if (!K.equal(piv.lead(), K.one())) return false;
        for (std::size_t j = 0; j < P.cols(); ++j)
            if (j != i && P(i, j).deg() >= piv.deg()) return false;
    }
    return true;
}

namespace detail {

// Order-by-order M-Basis. Returns a t-minimal approximant basis (column convention).
// dst -= lam * src without temporaries
template <class R>
void sub_scaled(Poly<R>& dst, const Poly<R>& src, const typename R::Elem& lam) {
    if (src.is_zero()) return;
    const R& K = src.ring();
    if (!dst.ring_ptr()) dst = Poly<R>(K);
    auto& d = dst.raw();
    const auto& c = src.coeffs();
    if (d.size() < c.size()) d.resize(c.size(), K.zero());
    if constexpr (requires { K.mul_add(lam, lam, lam); }) {
        const auto nl = K.neg(lam);
        for (std::size_t i = 0; i < c.size(); ++i) d[i] = K.mul_add(d[i], nl, c[i]);
    } else {
        for (std::size_t i = 0; i < c.size(); ++i) d[i] = K.sub(d[i], K.mul(lam, c[i]));
    }
    dst.normalize();
}

// Iterative order basis; s becomes the shifted column degrees of the result.
template <class R>
PolyMatrix<R> mbasis_iter(const PolyMatrix<R>& F, std::size_t sigma, Shift& s) {
    const R& K = F.ring();
    const std::size_t m = F.rows(), k = F.cols();
    using E = typename R::Elem;
    PolyMatrix<R> P = PolyMatrix<R>::identity(K, k);
    // residual F P, divided by y^kappa
    PolyMatrix<R> Res(K, m, k);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) Res(i, j) = trunc(F(i, j), sigma);

    std::vector<std::size_t> order(k);
    for (std::size_t kappa = 0; kappa < sigma; ++kappa) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return s[a] < s[b] || (s[a] == s[b] && a < b); });
        std::vector<std::vector<E>> C(k, std::vector<E>(m, K.zero()));
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < m; ++i) C[j][i] = Res(i, j).coef(0);

        struct Piv {
            std::size_t col, row;
            E inv;
        };
        std::vector<Piv> pivots;
        std::vector<bool> is_pivot(k, false);
        for (std::size_t j : order) {
            auto& c = C[j];
            for (const auto& pv : pivots) {
                if (K.is_zero(c[pv.row])) continue;
                E lam = K.mul(c[pv.row], pv.inv);
                for (std::size_t i = 0; i < m; ++i) c[i] = K.sub(c[i], K.mul(lam, C[pv.col][i]));
                for (std::size_t i = 0; i < k; ++i) sub_scaled(P(i, j), P(i, pv.col), lam);
                for (std::size_t i = 0; i < m; ++i) sub_scaled(Res(i, j), Res(i, pv.col), lam);
            }
            std::size_t r = m;
            for (std::size_t i = 0; i < m; ++i)
                if (!K.is_zero(c[i])) {
                    r = i;
                    break;
                }
            if (r < m) {
                pivots.push_back({j, r, K.inv(c[r])});
                is_pivot[j] = true;
            }
        }
        const std::size_t keep = sigma - kappa - 1;
        for (std::size_t j = 0; j < k; ++j) {
            if (is_pivot[j]) {
                for (std::size_t i = 0; i < k; ++i) {
                    auto& v = P(i, j);
                    if (!v.is_zero()) v.raw().insert(v.raw().begin(), K.zero());
                }
                ++s[j];
                for (std::size_t i = 0; i < m; ++i) {
                    auto& v = Res(i, j).raw();
                    if (v.size() > keep) v.resize(keep);
                    Res(i, j).normalize();
                }
            } else {
                for (std::size_t i = 0; i < m; ++i) {
                    auto& v = Res(i, j).raw();
                    if (!v.empty()) v.erase(v.begin());
                    if (v.size() > keep) v.resize(keep);
                    Res(i, j).normalize();
                }
            }
        }
    }
    return P;
}

// Divide and conquer on the order: basis for sigma/2, then for the shifted residual.
template <class R>
PolyMatrix<R> pmbasis(const PolyMatrix<R>& F, std::size_t sigma, Shift& s) {
    constexpr std::size_t kIterCut = 256;
    if (sigma <= kIterCut) return mbasis_iter(F, sigma, s);
    const std::size_t lo = sigma / 2;
    PolyMatrix<R> Ft(F.ring(), F.rows(), F.cols());
    for (std::size_t i = 0; i < F.rows(); ++i)
        for (std::size_t j = 0; j < F.cols(); ++j) Ft(i, j) = trunc(F(i, j), sigma);
    PolyMatrix<R> P1 = pmbasis(Ft, lo, s);
    PolyMatrix<R> Res = pm_mul(Ft, P1);
    for (std::size_t i = 0; i < Res.rows(); ++i)
        for (std::size_t j = 0; j < Res.cols(); ++j) Res(i, j) = slice(Res(i, j), lo, sigma - lo);
    PolyMatrix<R> P2 = pmbasis(Res, sigma - lo, s);
    return pm_mul(P1, P2);
}

template <class R>
PolyMatrix<R> mbasis(const PolyMatrix<R>& F, std::size_t sigma, Shift s) {
    return pmbasis(F, sigma, s);
}

// Column Mulders-Storjohann: make t-pivot indices pairwise distinct.
template <class R>
void weak_popovize(PolyMatrix<R>& P, const Shift& t) {
    const R& K = P.ring();
    const std::size_t k = P.cols();
    for (;;) {
        bool changed = false;
        std::vector<std::optional<std::pair<std::size_t, long>>> pv(k);
        for (std::size_t j = 0; j < k; ++j) pv[j] = column_pivot(P, j, t);
        for (std::size_t a = 0; a < k && !changed; ++a) {
            if (!pv[a]) throw SingularMatrix();
            for (std::size_t b = a + 1; b < k && !changed; ++b) {
                if (!pv[b]) throw SingularMatrix();
                if (pv[a]->first != pv[b]->first) continue;
                std::size_t lo = a, hi = b;
                if (pv[a]->second > pv[b]->second) std::swap(lo, hi);
                const std::size_t row = pv[a]->first;
                const std::size_t sh = static_cast<std::size_t>(pv[hi]->second - pv[lo]->second);
                auto lam = K.mul(P(row, hi).lead(), K.inv(P(row, lo).lead()));
                for (std::size_t i = 0; i < P.rows(); ++i)
                    if (!P(i, lo).is_zero()) P(i, hi) -= shift_up(scale(P(i, lo), lam), sh);
                changed = true;
            }
        }
        if (!changed) return;
    }
}

}  // namespace detail

// Minimal approximant basis of {v : F v ≡ 0 mod y^sigma} in t-shifted Popov form
// (column convention, pivot of column j in row j).
template <class R>
PolyMatrix<R> approximant_basis(const PolyMatrix<R>& F, std::size_t sigma, const Shift& t) {
    const std::size_t k = F.cols();
    if (t.size() != k) throw DimensionMismatch();
    const R& K = F.ring();
    PolyMatrix<R> P = detail::mbasis(F, sigma, t);
    if (sigma == 0) return P;
    detail::weak_popovize(P, t);
    // pivot degree of each row
    Shift neg(k, 0);
    std::vector<long> delta(k, 0);
    for (std::size_t j = 0; j < k; ++j) {
        auto pv = column_pivot(P, j, t);
        delta[pv->first] = P(pv->first, j).deg();
    }
    for (std::size_t i = 0; i < k; ++i) neg[i] = -delta[i];
    PolyMatrix<R> Q = detail::mbasis(F, sigma, neg);
    Mat<R> L(K, k, k);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < k; ++i) {
            if (Q(i, j).deg() > delta[i]) throw InvariantError("approximant_basis: unexpected -delta degree");
            L(i, j) = Q(i, j).coef(static_cast<std::size_t>(delta[i]));
        }
    }
    Mat<R> Li = mat_inverse(L);
    PolyMatrix<R> Lp(K, k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) Lp(i, j) = Poly<R>::constant(K, Li(i, j));
    return pm_mul(Q, Lp);
}

// F v mod y^sigma for every column v of P
template <class R>
bool is_approximant(const PolyMatrix<R>& F, const PolyMatrix<R>& P, std::size_t sigma) {
    PolyMatrix<R> FP = pm_mul(F, P);
    for (const auto& e : FP.entries())
        if (!trunc(e, sigma).is_zero()) return false;
    return true;
}

// ---------------------------------------------------------------- Hermite form

// Column Hermite form T = R U (U unimodular): upper triangular, monic diagonal,
// entries right of the diagonal in row i of degree < deg T(i,i).
template <class R>
PolyMatrix<R> hermite_form(const PolyMatrix<R>& Rm) {
    const std::size_t m = Rm.rows();
    if (Rm.cols() != m) throw DimensionMismatch();
    const R& K = Rm.ring();
    PolyMatrix<R> T = Rm;
    auto colop = [&](std::size_t ci, std::size_t cc, const Poly<R>& s, const Poly<R>& t, const Poly<R>& u,
                     const Poly<R>& v) {
        // (col_i, col_c) <- (s col_i + t col_c, u col_i + v col_c)
        for (std::size_t r = 0; r < m; ++r) {
            const Poly<R> xi = T(r, ci), xc = T(r, cc);
            if (xi.is_zero() && xc.is_zero()) continue;
            T(r, ci) = s * xi + t * xc;
            T(r, cc) = u * xi + v * xc;
        }
    };
    for (std::size_t i = m; i-- > 0;) {
        for (std::size_t c = 0; c < i; ++c) {
            if (T(i, c).is_zero()) continue;
            if (T(i, i).is_zero()) {
                for (std::size_t r = 0; r < m; ++r) std::swap(T(r, i), T(r, c));
                continue;
            }
            const Poly<R> b = T(i, i), a = T(i, c);
            auto x = xgcd(b, a);
            colop(i, c, x.s, x.t, -quo(a, x.g), quo(b, x.g));
        }
        if (T(i, i).is_zero()) throw SingularMatrix();
        auto li = K.inv(T(i, i).lead());
        for (std::size_t r = 0; r <= i; ++r) T(r, i) = scale(T(r, i), li);
    }
    for (std::size_t j = 1; j < m; ++j)
        for (std::size_t i = j; i-- > 0;) {
            if (T(i, j).deg() < T(i, i).deg()) continue;
            Poly<R> q = quo(T(i, j), T(i, i));
            for (std::size_t r = 0; r <= i; ++r)
                if (!T(r, i).is_zero()) T(r, j) -= q * T(r, i);
        }
    return T;
}

template <class R>
bool is_hermite(const PolyMatrix<R>& T) {
    const R& K = T.ring();
    const std::size_t m = T.rows();
    for (std::size_t i = 0; i < m; ++i) {
        if (T(i, i).is_zero() || !K.equal(T(i, i).lead(), K.one())) return false;
        for (std::size_t j = 0; j < i; ++j)
            if (!T(i, j).is_zero()) return false;
        for (std::size_t j = i + 1; j < m; ++j)
            if (T(i, j).deg() >= T(i, i).deg()) return false;
    }
    return true;
}

// ---------------------------------------------------------------- determinant

template <class R>
Poly<R> pm_determinant_bareiss(const PolyMatrix<R>& A) {
    const std::size_t n = A.rows();
    if (A.cols() != n) throw DimensionMismatch();
    const R& K = A.ring();
    if (n == 0) return Poly<R>::one(K);
    PolyMatrix<R> M = A;
    Poly<R> prev = Poly<R>::one(K);
    bool neg = false;
    for (std::size_t c = 0; c + 1 < n; ++c) {
        if (M(c, c).is_zero()) {
            std::size_t sel = n;
            for (std::size_t i = c + 1; i < n; ++i)
                if (!M(i, c).is_zero()) {
                    sel = i;
                    break;
                }
            if (sel == n) return Poly<R>(K);
            for (std::size_t j = 0; j < n; ++j) std::swap(M(c, j), M(sel, j));
            neg = !neg;
        }
        for (std::size_t i = c + 1; i < n; ++i)
            for (std::size_t j = c + 1; j < n; ++j)
                M(i, j) = exact_div(M(c, c) * M(i, j) - M(i, c) * M(c, j), prev);
        prev = M(c, c);
    }
    Poly<R> d = M(n - 1, n - 1);
    return neg ? -d : d;
}

// Exact det by evaluation/interpolation when the field has enough points, Bareiss otherwise.
template <class R>
Poly<R> pm_determinant(const PolyMatrix<R>& A) {
    const std::size_t n = A.rows();
    if (A.cols() != n) throw DimensionMismatch();
    const R& K = A.ring();
    if (n == 0) return Poly<R>::one(K);
    long bound = 0;
    for (std::size_t j = 0; j < n; ++j) {
        long d = A.col_deg(j);
        if (d == Poly<R>::kZeroDeg) return Poly<R>(K);
        bound += d;
    }
    const u64 pts = static_cast<u64>(bound) + 1;
    if (K.characteristic() <= pts || n <= 2) return pm_determinant_bareiss(A);
    using E = typename R::Elem;
    std::vector<E> xs(pts), ys(pts);
    for (u64 k = 0; k < pts; ++k) {
        xs[k] = K.embed(k);
        Mat<R> M(K, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) M(i, j) = eval(A(i, j), xs[k]);
        ys[k] = mat_det(M);
    }
    // Newton interpolation at 0, 1, ..., bound
    std::vector<E> dd = ys;
    for (std::size_t lvl = 1; lvl < pts; ++lvl)
        for (std::size_t k = pts - 1; k >= lvl; --k)
            dd[k] = K.mul(K.sub(dd[k], dd[k - 1]), K.inv(K.sub(xs[k], xs[k - lvl])));
    Poly<R> res = Poly<R>::constant(K, dd[pts - 1]);
    for (std::size_t k = pts - 1; k-- > 0;) {
        Poly<R> lin(K, std::vector<E>{K.neg(xs[k]), K.one()});
        res = res * lin + Poly<R>::constant(K, dd[k]);
    }
    return res;
}

// ---------------------------------------------------------------- kernel vector

template <class R>
struct KernelVector {
    std::vector<Poly<R>> u;
    Poly<R> r;
};

// R u = r v with r monic of minimal degree.
template <class R>
KernelVector<R> minimal_kernel_vector(const PolyMatrix<R>& Rm, const std::vector<Poly<R>>& v) {
    const std::size_t m = Rm.rows();
    if (Rm.cols() != m || v.size() != m) throw DimensionMismatch();
    const R& K = Rm.ring();
    long dv = 0;
    for (const auto& e : v) dv = std::max(dv, e.deg());
    long dR = std::max<long>(Rm.deg(), 0);
    PolyMatrix<R> F(K, m, m + 1);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) F(i, j) = Rm(i, j);
        F(i, m) = -v[i];
    }
    Shift t(m + 1, 0);
    t[m] = dv;
    std::size_t sigma = static_cast<std::size_t>(static_cast<long>(m) * dR + dv + 1);
    for (int attempt = 0; attempt < 8; ++attempt) {
        // a t-reduced basis suffices: its zero-residual column is the primitive kernel generator
        PolyMatrix<R> P = detail::mbasis(F, sigma, t);
        std::vector<std::size_t> cand;
        for (std::size_t j = 0; j < m + 1; ++j)
            if (!P(m, j).is_zero()) cand.push_back(j);
        std::stable_sort(cand.begin(), cand.end(),
                         [&](std::size_t a, std::size_t b) { return P(m, a).deg() < P(m, b).deg(); });
        std::optional<std::size_t> best;
        for (std::size_t j : cand) {
            bool zero = true;
            for (std::size_t i = 0; i < m && zero; ++i) {
                Poly<R> acc = Rm(i, 0) * P(0, j);
                for (std::size_t k = 1; k < m; ++k) acc += Rm(i, k) * P(k, j);
                acc -= v[i] * P(m, j);
                zero = acc.is_zero();
            }
            if (zero) {
                best = j;
                break;
            }
        }
        if (best) {
            KernelVector<R> out;
            auto li = K.inv(P(m, *best).lead());
            out.r = scale(P(m, *best), li);
            for (std::size_t i = 0; i < m; ++i) out.u.push_back(scale(P(i, *best), li));
            return out;
        }
        sigma *= 2;
    }
    throw SingularMatrix();
}

}  // namespace mc
