#include "mc/kernels.hpp"

#include "mc/ntt.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mc {

namespace {

inline void mat_row(const PrimeField& K, const u64* A, const u64* B, u64* C, std::size_t i, std::size_t k,
                    std::size_t m, std::vector<u128>& acc) {
    const unsigned lazy = K.lazy_terms();
    acc.assign(m, 0);
    unsigned cnt = 0;
    for (std::size_t t = 0; t < k; ++t) {
        const u64 a = A[i * k + t];
        if (a == 0) continue;
        const u64* brow = B + t * m;
        for (std::size_t j = 0; j < m; ++j) acc[j] += static_cast<u128>(a) * brow[j];
        if (++cnt >= lazy) {
            for (auto& v : acc) v = K.reduce128(v);
            cnt = 1;
        }
    }
    for (std::size_t j = 0; j < m; ++j) C[i * m + j] = K.reduce128(acc[j]);
}

// one output entry of a polynomial matrix product
Poly<PrimeField> pm_entry(const PrimeField& K, const std::vector<Poly<PrimeField>>& A, std::size_t ac,
                          const std::vector<Poly<PrimeField>>& B, std::size_t bc, std::size_t i, std::size_t j) {
    std::size_t len = 0;
    bool big = false;
    for (std::size_t t = 0; t < ac; ++t) {
        const auto& a = A[i * ac + t];
        const auto& b = B[t * bc + j];
        if (a.is_zero() || b.is_zero()) continue;
        len = std::max(len, a.size() + b.size() - 1);
        if (std::min(a.size(), b.size()) >= 64 || std::min(a.size(), b.size()) + 1 >= K.lazy_terms()) big = true;
    }
    if (len == 0) return Poly<PrimeField>(K);
    if (big) {
        Poly<PrimeField> s(K);
        for (std::size_t t = 0; t < ac; ++t) s += A[i * ac + t] * B[t * bc + j];
        return s;
    }
    const unsigned lazy = K.lazy_terms();
    std::vector<u128> acc(len, 0);
    unsigned cnt = 0;
    for (std::size_t t = 0; t < ac; ++t) {
        const auto& a = A[i * ac + t].coeffs();
        const auto& b = B[t * bc + j].coeffs();
        if (a.empty() || b.empty()) continue;
        // each pass adds at most min(|a|,|b|) products to a single slot
        const unsigned add = static_cast<unsigned>(std::min(a.size(), b.size()));
        if (cnt + add >= lazy) {
            for (auto& v : acc) v = K.reduce128(v);
            cnt = 1;
        }
        for (std::size_t u = 0; u < a.size(); ++u) {
            if (a[u] == 0) continue;
            for (std::size_t w = 0; w < b.size(); ++w) acc[u + w] += static_cast<u128>(a[u]) * b[w];
        }
        cnt += add;
    }
    std::vector<u64> out(len);
    for (std::size_t u = 0; u < len; ++u) out[u] = K.reduce128(acc[u]);
    return Poly<PrimeField>(K, std::move(out));
}


// every entry transformed once, products accumulated in the transform domain
std::vector<Poly<PrimeField>> pm_mul_transformed(const PrimeField& K, const std::vector<Poly<PrimeField>>& A,
                                                 std::size_t ar, std::size_t ac,
                                                 const std::vector<Poly<PrimeField>>& B, std::size_t bc,
                                                 std::size_t la, std::size_t lb, bool parallel) {
    const NttPlan plan(la + lb - 1, ac * std::min(la, lb), K.modulus());
    std::vector<NttPlan::Spectrum> SA(A.size()), SB(B.size());
    const long na = static_cast<long>(A.size()), nb = static_cast<long>(B.size());
#pragma omp parallel for schedule(dynamic, 2) if (parallel)
    for (long e = 0; e < na; ++e)
        if (!A[e].is_zero()) SA[e] = plan.forward(A[e].coeffs());
#pragma omp parallel for schedule(dynamic, 2) if (parallel)
    for (long e = 0; e < nb; ++e)
        if (!B[e].is_zero()) SB[e] = plan.forward(B[e].coeffs());
    std::vector<Poly<PrimeField>> C(ar * bc, Poly<PrimeField>(K));
    const long total = static_cast<long>(ar * bc);
#pragma omp parallel for schedule(dynamic, 2) if (parallel)
    for (long e = 0; e < total; ++e) {
        const std::size_t i = static_cast<std::size_t>(e) / bc, j = static_cast<std::size_t>(e) % bc;
        NttPlan::Spectrum acc;
        std::size_t len = 0;
        for (std::size_t t = 0; t < ac; ++t) {
            const std::size_t x = i * ac + t, y = t * bc + j;
            if (SA[x].empty() || SB[y].empty()) continue;
            if (acc.empty()) acc = plan.zero();
            plan.mul_acc(acc, SA[x], SB[y]);
            len = std::max(len, A[x].size() + B[y].size() - 1);
        }
        if (len) C[static_cast<std::size_t>(e)] = Poly<PrimeField>(K, plan.backward(std::move(acc), len));
    }
    return C;
}

// largest entry lengths, used to pick the transform path
std::pair<std::size_t, std::size_t> max_lengths(const std::vector<Poly<PrimeField>>& A,
                                                const std::vector<Poly<PrimeField>>& B) {
    std::size_t la = 0, lb = 0;
    for (const auto& a : A) la = std::max(la, a.size());
    for (const auto& b : B) lb = std::max(lb, b.size());
    return {la, lb};
}

constexpr std::size_t kPmTransformCut = 40;
}  // namespace

void mat_mul_fp_serial(const PrimeField& K, const u64* A, const u64* B, u64* C, std::size_t n, std::size_t k,
                       std::size_t m) {
    std::vector<u128> acc;
    for (std::size_t i = 0; i < n; ++i) mat_row(K, A, B, C, i, k, m, acc);
}

void mat_mul_fp_omp(const PrimeField& K, const u64* A, const u64* B, u64* C, std::size_t n, std::size_t k,
                    std::size_t m) {
#pragma omp parallel
    {
        std::vector<u128> acc;
#pragma omp for schedule(static)
        for (long i = 0; i < static_cast<long>(n); ++i) mat_row(K, A, B, C, static_cast<std::size_t>(i), k, m, acc);
    }
}

std::vector<Poly<PrimeField>> pm_mul_fp_serial(const PrimeField& K, const std::vector<Poly<PrimeField>>& A,
                                               std::size_t ar, std::size_t ac,
                                               const std::vector<Poly<PrimeField>>& B, std::size_t bc) {
    const auto [la, lb] = max_lengths(A, B);
    if (std::min(la, lb) >= kPmTransformCut) return pm_mul_transformed(K, A, ar, ac, B, bc, la, lb, false);
    std::vector<Poly<PrimeField>> C(ar * bc, Poly<PrimeField>(K));
    for (std::size_t i = 0; i < ar; ++i)
        for (std::size_t j = 0; j < bc; ++j) C[i * bc + j] = pm_entry(K, A, ac, B, bc, i, j);
    return C;
}

std::vector<Poly<PrimeField>> pm_mul_fp_omp(const PrimeField& K, const std::vector<Poly<PrimeField>>& A,
                                            std::size_t ar, std::size_t ac,
                                            const std::vector<Poly<PrimeField>>& B, std::size_t bc) {
    const auto [la, lb] = max_lengths(A, B);
    if (std::min(la, lb) >= kPmTransformCut) return pm_mul_transformed(K, A, ar, ac, B, bc, la, lb, true);
    std::vector<Poly<PrimeField>> C(ar * bc, Poly<PrimeField>(K));
    const long total = static_cast<long>(ar * bc);
#pragma omp parallel for schedule(dynamic, 4)
    for (long e = 0; e < total; ++e) {
        const std::size_t i = static_cast<std::size_t>(e) / bc, j = static_cast<std::size_t>(e) % bc;
        C[static_cast<std::size_t>(e)] = pm_entry(K, A, ac, B, bc, i, j);
    }
    return C;
}

int kernel_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace mc
