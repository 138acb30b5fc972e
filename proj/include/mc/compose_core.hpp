#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mc/blockseq.hpp"
#include "mc/poly.hpp"
#include "mc/relations.hpp"
#include "mc/tape.hpp"

namespace mc {

struct BadSeriesUnit : PreconditionError {
    BadSeriesUnit() : PreconditionError("series reversion needs a(0) = 0 and a'(0) != 0") {}
};
struct CharacteristicTooSmall : PreconditionError {
    CharacteristicTooSmall() : PreconditionError("series reversion needs characteristic > precision") {}
};

// Entries read by base_case_compose / annihilating_polynomial / compose_modulo_inseparable.
inline std::size_t base_case_tape_length(std::size_t n, const ParameterProfile& prof = {}) {
    return n + prof.m(n);
}

// ---------------------------------------------------------------- small characteristic

// g(a) rem x^N in characteristic p > 0, splitting g by residues of exponents mod p.
template <class R>
Poly<R> series_compose_small_char(const Poly<R>& a, const Poly<R>& g, std::size_t N) {
    const R& K = a.ring();
    if (N == 0) return Poly<R>(K);
    if (g.size() <= 1) return trunc(g, N);
    if (N == 1) return Poly<R>::constant(K, eval(g, a.coef(0)));
    const std::size_t p = static_cast<std::size_t>(K.characteristic());
    const Poly<R> gg = K.is_zero(a.coef(0)) ? trunc(g, N) : g;
    if (gg.size() <= p + 1) return horner_trunc_compose(a, gg, N);
    const std::size_t Np = ceil_div(N, p);
    const Poly<R> abar = frobenius_coeffs(trunc(a, Np), 1);
    const Poly<R> at = trunc(a, N);
    Poly<R> acc(K);
    for (std::size_t i = p; i-- > 0;) {
        Poly<R> hi = series_compose_small_char(abar, deflate_part(gg, p, i), Np);
        acc = mul_trunc(acc, at, N) + trunc(inflate(hi, p), N);
    }
    return acc;
}

template <class R>
Poly<R> inseparable_modulus(const R& K, const typename R::Elem& c, std::size_t e, std::size_t ell) {
    std::size_t q = 1;
    for (std::size_t i = 0; i < e; ++i) q *= static_cast<std::size_t>(K.characteristic());
    Poly<R> base = Poly<R>::monomial(K, K.one(), q) - Poly<R>::constant(K, c);
    return pow(base, ell);
}

// g(a) rem (x^{p^e} - c)^ell, deterministic.
template <class R>
Poly<R> compose_small_char(const typename R::Elem& c, std::size_t e, std::size_t ell, const Poly<R>& a,
                           const Poly<R>& g) {
    const R& K = a.ring();
    if (ell == 0) throw PreconditionError("compose_small_char: ell must be positive");
    if (e == 0) {
        const Poly<R> at = shift_var(a.size() > ell ? rem(a, inseparable_modulus(K, c, 0, ell)) : a, c);
        return shift_var(series_compose_small_char(at, g, ell), K.neg(c));
    }
    const std::size_t p = static_cast<std::size_t>(K.characteristic());
    const Poly<R> f = inseparable_modulus(K, c, e, ell);
    const Poly<R> fl = inseparable_modulus(K, c, e - 1, ell);
    Modulus<R> M(f);
    const Poly<R> ar = M.rem(a);
    const Poly<R> abar = rem(frobenius_coeffs(ar, 1), fl);
    Poly<R> acc(K);
    for (std::size_t i = p; i-- > 0;) {
        Poly<R> hi = compose_small_char(c, e - 1, ell, abar, deflate_part(g, p, i));
        acc = M.mulmod(acc, ar) + inflate(hi, p);
    }
    return M.rem(acc);
}

// ---------------------------------------------------------------- randomized base case

template <class R>
struct BaseCaseState {
    Poly<R> f2, a2;  // f(x + r2) and (a + r1)(x + r2)
    typename R::Elem r1, r2;
    Poly<R> gamma;
    ChangeOfBasis<R> cob;
    RelationMatrix<R> ralpha;
};

namespace detail {

// Shared steps 2-7: shift guards, change of basis, relations of (alpha, mu_gamma).
template <class R>
std::optional<BaseCaseState<R>> base_case_prepare(const Poly<R>& f, const Poly<R>& a, std::span<const u64> tape,
                                                  const ParameterProfile& prof) {
    const R& K = f.ring();
    const std::size_t n = static_cast<std::size_t>(f.deg());
    const std::size_t m = prof.m(n), d = ParameterProfile::d(n, m);
    if (tape.size() < n + m) throw TapeExhausted();
    BaseCaseState<R> st;
    st.r1 = K.lift_base(tape[0]);
    st.r2 = K.lift_base(tape[1]);
    Poly<R> a1 = rem(a, f) + Poly<R>::constant(K, st.r1);
    if (gcd(a1, f).deg() != 0) return std::nullopt;
    st.f2 = shift_var(f, st.r2);
    st.a2 = shift_var(a1, st.r2);
    if (K.is_zero(st.f2.coef(0))) return std::nullopt;
    st.gamma = Poly<R>(K, lift_tape(K, tape.subspan(2, n)));
    auto cob = change_of_basis(st.f2, st.gamma, st.a2, m, d);
    if (!cob) return std::nullopt;
    if (K.is_zero(cob->mu.coef(0))) return std::nullopt;
    auto ra = matrix_of_relations(cob->mu, cob->alpha, m, d, tape.subspan(n + 2, m >= 2 ? m - 2 : 0));
    if (!ra) return std::nullopt;
    st.cob = std::move(*cob);
    st.ralpha = std::move(*ra);
    return st;
}

}  // namespace detail

// g(a) rem f or nullopt (Fail). tape holds n + m entries.
template <class R>
std::optional<Poly<R>> base_case_compose(const Poly<R>& f, const Poly<R>& a, const Poly<R>& g,
                                         std::span<const u64> tape, const ParameterProfile& prof = {}) {
    const R& K = f.ring();
    if (f.deg() < 1) throw PreconditionError("base_case_compose: deg f must be positive");
    if (f.deg() == 1) return Poly<R>::constant(K, eval(g, rem(a, f).coef(0)));
    auto st = detail::base_case_prepare(f, a, tape, prof);
    if (!st) return std::nullopt;
    const Poly<R> gs = shift_var(g, K.neg(st->r1));
    const Poly<R> beta = compose_with_relation_matrix(st->cob.mu, st->cob.alpha, gs, st->ralpha.mat);
    const Poly<R> b = compose_with_relation_matrix(st->f2, st->gamma, beta, st->cob.mat);
    return shift_var(b, K.neg(st->r2));
}

// Nonzero mu with deg mu <= 4n and mu(a) = 0 mod f, or nullopt.
template <class R>
std::optional<Poly<R>> annihilating_polynomial(const Poly<R>& f, const Poly<R>& a, std::span<const u64> tape,
                                               const ParameterProfile& prof = {}) {
    const R& K = f.ring();
    if (f.deg() < 1) throw PreconditionError("annihilating_polynomial: deg f must be positive");
    if (f.deg() == 1)
        return Poly<R>(K, std::vector<typename R::Elem>{K.neg(rem(a, f).coef(0)), K.one()});
    auto st = detail::base_case_prepare(f, a, tape, prof);
    if (!st) return std::nullopt;
    Poly<R> mu = pm_determinant(st->ralpha.mat);
    if (mu.is_zero()) return std::nullopt;
    // mu annihilates a + r1
    return monic(shift_var(mu, st->r1));
}

enum class MinPolyProvenance { CertifiedBasis, VerifiedProjection };

template <class R>
struct MinPoly {
    Poly<R> mu;
    MinPolyProvenance provenance;
};

inline std::size_t minimal_polynomial_tape_length(std::size_t n) { return n + 2; }

// Minimal polynomial of a mod f: first Hermite diagonal entry of a certified relation
// basis, else the generator of a projected power sequence if it annihilates a.
template <class R>
std::optional<MinPoly<R>> minimal_polynomial(const Poly<R>& f, const Poly<R>& a, std::span<const u64> tape,
                                             const ParameterProfile& prof = {}) {
    const R& K = f.ring();
    if (f.deg() < 1) throw PreconditionError("minimal_polynomial: deg f must be positive");
    const std::size_t n = static_cast<std::size_t>(f.deg());
    const Poly<R> ar = rem(a, f);
    if (n == 1)
        return MinPoly<R>{Poly<R>(K, std::vector<typename R::Elem>{K.neg(ar.coef(0)), K.one()}),
                          MinPolyProvenance::CertifiedBasis};
    if (tape.size() < n + 2) throw TapeExhausted();
    const auto r1 = K.lift_base(tape[0]), r2 = K.lift_base(tape[1]);
    const Poly<R> a1 = ar + Poly<R>::constant(K, r1);
    const Poly<R> f2 = shift_var(f, r2);
    if (gcd(a1, f).deg() == 0 && !K.is_zero(f2.coef(0))) {
        const std::size_t m = prof.m(n);
        auto cb = candidate_basis(f2, shift_var(a1, r2), m, ParameterProfile::d(n, m));
        if (cb.certified()) {
            auto T = hermite_form(cb.mat);
            return MinPoly<R>{shift_var(T(0, 0), r1), MinPolyProvenance::CertifiedBasis};
        }
    }
    // a sequence generator divides mu_a, so annihilating a makes it equal
    Poly<R> cand = small_minpoly_candidate(f, ar, n, lift_tape(K, tape.subspan(2, n)));
    if (!brent_kung_compose(f, ar, cand).is_zero()) return std::nullopt;
    return MinPoly<R>{std::move(cand), MinPolyProvenance::VerifiedProjection};
}

// ---------------------------------------------------------------- purely inseparable moduli

// g(a) rem (x^{p^e} - c)^ell or nullopt. tape holds n + m entries.
template <class R>
std::optional<Poly<R>> compose_modulo_inseparable(const typename R::Elem& c, std::size_t e, std::size_t ell,
                                                  const Poly<R>& a, const Poly<R>& g, std::span<const u64> tape,
                                                  const ParameterProfile& prof = {}) {
    const R& K = a.ring();
    const Poly<R> f = inseparable_modulus(K, c, e, ell);
    const std::size_t n = static_cast<std::size_t>(f.deg());
    const u64 p = K.characteristic();
    if (p <= ceil_cbrt(n)) return compose_small_char(c, e, ell, a, g);
    if (tape.size() < n + prof.m(n)) throw TapeExhausted();
    const Poly<R> ar = rem(a, f);
    auto b = compose_small_minpoly(f, ar, g, ceil_cbrt_sq(n), lift_tape(K, tape.first(n)));
    if (b) return b;
    std::vector<u64> t(tape.begin(), tape.end());
    t[0] = gcd(ar, f).deg() == 0 ? 0 : 1;
    t[1] = K.is_zero(c) ? 1 : 0;
    return base_case_compose(f, ar, g, std::span<const u64>(t), prof);
}

// ---------------------------------------------------------------- power series reversion

inline std::size_t series_reversion_tape_length(std::size_t n, const ParameterProfile& prof = {}) {
    std::size_t total = 0;
    for (std::size_t N = 2; N < n;) {
        N = std::min(2 * N, n);
        total += 2 * base_case_tape_length(N, prof);
    }
    return total;
}

namespace detail {

// outer(inner) rem x^N, inner(0) = 0; uses the tape while it lasts, Horner otherwise.
template <class R>
Poly<R> series_compose(const Poly<R>& outer, const Poly<R>& inner, std::size_t N, RandomTape& tape,
                       const ParameterProfile& prof) {
    const R& K = outer.ring();
    const Poly<R> o = trunc(outer, N), in = trunc(inner, N);
    const std::size_t need = base_case_tape_length(N, prof);
    if (N >= 2 && tape.remaining() >= need) {
        auto b = compose_modulo_inseparable(K.zero(), 0, N, in, o, tape.take(need), prof);
        if (b) return *b;
    }
    return horner_trunc_compose(in, o, N);
}

}  // namespace detail

// g with g(0) = 0 and a(g) = g(a) = x mod x^n, by Newton iteration.
template <class R>
Poly<R> series_reversion(const Poly<R>& a, std::size_t n, std::span<const u64> tape = {},
                         const ParameterProfile& prof = {}) {
    const R& K = a.ring();
    if (!K.is_zero(a.coef(0)) || K.is_zero(a.coef(1))) throw BadSeriesUnit();
    if (K.characteristic() <= n) throw CharacteristicTooSmall();
    if (n <= 1) return Poly<R>(K);
    RandomTape rt(std::vector<u64>(tape.begin(), tape.end()));
    Poly<R> g = Poly<R>::monomial(K, K.inv(a.coef(1)), 1);
    const Poly<R> da = derivative(a), x = Poly<R>::x(K);
    for (std::size_t N = 2; N < n;) {
        N = std::min(2 * N, n);
        const Poly<R> ag = detail::series_compose(a, g, N, rt, prof);
        const Poly<R> dag = detail::series_compose(da, g, N, rt, prof);
        g = g - mul_trunc(ag - x, series_inv(dag, N), N);
    }
    return trunc(g, n);
}

}  // namespace mc
