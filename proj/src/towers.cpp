#include "mc/towers.hpp"

#include <algorithm>
#include <map>

namespace mc {

namespace {

using QPoly = Poly<QuotientRing>;

QPoly to_q(const QuotientRing& L, const std::vector<FpPoly>& v) {
    std::vector<QuotientRing::Elem> c;
    c.reserve(v.size());
    for (const auto& u : v) c.push_back(L.from_poly(u));
    return QPoly(L, std::move(c));
}

std::vector<FpPoly> from_q(const QuotientRing& L, const QPoly& P, std::size_t len) {
    std::vector<FpPoly> out(len, FpPoly(L.base()));
    for (std::size_t j = 0; j < P.size() && j < len; ++j) out[j] = L.to_poly(P.coef(j));
    return out;
}

// (z^q - c)^ell over L
QPoly tower_modulus(const QuotientRing& L, const FpPoly& c, std::size_t q, std::size_t ell) {
    return pow(QPoly::monomial(L, L.one(), q) - QPoly::constant(L, L.from_poly(c)), ell);
}

void check_tower_args(const FpPoly& h, std::size_t ell) {
    if (h.deg() < 1) throw PreconditionError("tower: h must have positive degree");
    if (ell == 0) throw PreconditionError("tower: ell must be positive");
}

bool separable(const FpPoly& h) { return gcd(h, derivative(h)).deg() == 0; }

// root of h lifted from x mod h to x mod h^ell
FpPoly hensel_root(const FpPoly& h, std::size_t ell) {
    const PrimeField& K = h.ring();
    FpPoly sigma = rem(FpPoly::x(K), h);
    const FpPoly dh = derivative(h);
    for (std::size_t k = 1; k < ell;) {
        k = std::min(2 * k, ell);
        const FpPoly hk = pow(h, k);
        const FpPoly num = horner_mod_compose(hk, sigma, h);
        const FpPoly den = horner_mod_compose(hk, sigma, dh);
        sigma = rem(sigma - num * invmod(den, hk), hk);
    }
    return sigma;
}

// g rem <h, (y - alpha)^ell> once mu(alpha) = 0 mod h is known
std::optional<BivarInTheta> reduce_with_annihilator(const FpPoly& h, std::size_t ell, const FpPoly& alpha,
                                                    const FpPoly& mu, const FpPoly& g, std::span<const u64> tape,
                                                    const ParameterProfile& prof) {
    const PrimeField& K = h.ring();
    BivarInTheta out(ell, FpPoly(K));
    if (g.deg() < 1) {
        out[0] = rem(g, h);
        return out;
    }
    const TowerElement Gt = untangle(mu, ell, rem(g, pow(mu, ell)));
    for (std::size_t i = 0; i < ell; ++i) {
        if (Gt.coeffs[i].is_zero()) continue;
        auto Gi = base_case_compose(h, alpha, Gt.coeffs[i], tape, prof);
        if (!Gi) return std::nullopt;
        out[i] = std::move(*Gi);
    }
    return out;
}

}  // namespace

std::size_t prime_power(u64 p, std::size_t e) {
    std::size_t q = 1;
    for (std::size_t i = 0; i < e; ++i) q *= static_cast<std::size_t>(p);
    return q;
}

FpPoly part_modulus(const SeparablePart& s) {
    return pow(inflate(s.h, prime_power(s.h.ring().characteristic(), s.e)), s.ell);
}

// ---------------------------------------------------------------- separable decomposition

namespace {

// squarefree parts of F with multiplicities scaled by mult, accumulated per multiplicity
void squarefree_parts(const FpPoly& F, u64 mult, std::map<u64, FpPoly>& acc) {
    if (F.deg() < 1) return;
    const PrimeField& K = F.ring();
    FpPoly c = gcd(F, derivative(F));
    FpPoly w = quo(F, c);
    for (u64 i = 1; w.deg() > 0; ++i) {
        FpPoly y = gcd(w, c);
        FpPoly fac = quo(w, y);
        if (fac.deg() > 0) {
            auto it = acc.find(i * mult);
            if (it == acc.end()) acc.emplace(i * mult, monic(fac));
            else it->second = it->second * monic(fac);
        }
        w = y;
        c = quo(c, y);
    }
    // what is left is a p-th power: c = c1(x^p)
    if (c.deg() > 0) squarefree_parts(monic(deflate_part(c, K.characteristic(), 0)), mult * K.characteristic(), acc);
}

}  // namespace

SeparableDecomposition separable_decomposition(const FpPoly& f) {
    if (f.deg() < 1) throw PreconditionError("separable_decomposition: deg f must be positive");
    const PrimeField& K = f.ring();
    const u64 p = K.characteristic();
    std::map<u64, FpPoly> bymult;
    squarefree_parts(monic(f), 1, bymult);
    std::map<std::pair<std::size_t, std::size_t>, FpPoly> grouped;
    for (auto& [m, P] : bymult) {
        u64 ell = m;
        std::size_t e = 0;
        while (ell % p == 0) {
            ell /= p;
            ++e;
        }
        auto key = std::make_pair(e, static_cast<std::size_t>(ell));
        auto it = grouped.find(key);
        if (it == grouped.end()) grouped.emplace(key, P);
        else it->second = it->second * P;
    }
    SeparableDecomposition out;
    out.c = f.lead();
    for (auto& [key, P] : grouped) out.parts.push_back(SeparablePart{P, key.first, key.second});
    return out;
}

// ---------------------------------------------------------------- tangling

TowerElement untangle(const FpPoly& h0, std::size_t ell, const FpPoly& u) {
    check_tower_args(h0, ell);
    const FpPoly h = monic(h0);
    QuotientRing L(h.ring(), h, QuotientRing::Mode::Plain);
    const QPoly M = pow(QPoly::x(L) - QPoly::constant(L, L.theta()), ell);
    std::vector<QuotientRing::Elem> uc;
    for (u64 v : u.coeffs()) uc.push_back(L.lift_base(v));
    return TowerElement{h, 0, ell, from_q(L, rem(QPoly(L, std::move(uc)), M), ell)};
}

FpPoly tangle(const TowerElement& U) {
    check_tower_args(U.h, U.ell);
    if (U.e != 0) throw PreconditionError("tangle: use tangle_general for e > 0");
    if (!separable(U.h)) throw NotSeparable();
    const PrimeField& K = U.h.ring();
    const std::size_t d = static_cast<std::size_t>(U.h.deg());
    const FpPoly hl = pow(U.h, U.ell);
    const FpPoly sigma = hensel_root(U.h, U.ell);
    // U(σ, x) by Horner in θ; C_i(x) collects the θ^i coefficients
    FpPoly acc(K);
    for (std::size_t i = d; i-- > 0;) {
        std::vector<u64> ci(U.coeffs.size(), 0);
        for (std::size_t j = 0; j < U.coeffs.size(); ++j) ci[j] = U.coeffs[j].coef(i);
        acc = rem(acc * sigma + FpPoly(K, std::move(ci)), hl);
    }
    return acc;
}

TowerElement untangle_general(const FpPoly& h0, std::size_t e, std::size_t ell, const FpPoly& a) {
    check_tower_args(h0, ell);
    const FpPoly h = monic(h0);
    const PrimeField& K = h.ring();
    const std::size_t q = prime_power(K.characteristic(), e);
    TowerElement out{h, e, ell, std::vector<FpPoly>(ell * q, FpPoly(K))};
    for (std::size_t i = 0; i < q; ++i) {
        const TowerElement Ai = untangle(h, ell, deflate_part(a, q, i));
        for (std::size_t j = 0; j < ell; ++j) out.coeffs[j * q + i] = Ai.coeffs[j];
    }
    return out;
}

FpPoly tangle_general(const TowerElement& B) {
    check_tower_args(B.h, B.ell);
    const PrimeField& K = B.h.ring();
    const std::size_t q = prime_power(K.characteristic(), B.e);
    if (B.coeffs.size() > B.ell * q) throw PreconditionError("tangle_general: too many z coefficients");
    FpPoly a(K);
    for (std::size_t i = 0; i < q; ++i) {
        TowerElement Ui{B.h, 0, B.ell, std::vector<FpPoly>(B.ell, FpPoly(K))};
        for (std::size_t j = 0; j < B.ell; ++j)
            if (j * q + i < B.coeffs.size()) Ui.coeffs[j] = B.coeffs[j * q + i];
        a += shift_up(inflate(tangle(Ui), q), i);
    }
    return a;
}

TowerElement tower_mul(const TowerElement& U, const TowerElement& V) {
    if (!(U.h == V.h) || U.e != V.e || U.ell != V.ell) throw DimensionMismatch();
    QuotientRing L(U.h.ring(), U.h, QuotientRing::Mode::Plain);
    const std::size_t q = prime_power(U.h.ring().characteristic(), U.e);
    const QPoly M = tower_modulus(L, FpPoly::x(U.h.ring()), q, U.ell);
    const QPoly P = rem(to_q(L, U.coeffs) * to_q(L, V.coeffs), M);
    return TowerElement{U.h, U.e, U.ell, from_q(L, P, U.ell * q)};
}

// ---------------------------------------------------------------- reductions

std::optional<BivarInTheta> bivariate_reduction(const FpPoly& h0, std::size_t ell, const FpPoly& alpha,
                                                const FpPoly& g, std::span<const u64> tape,
                                                const ParameterProfile& prof) {
    check_tower_args(h0, ell);
    const FpPoly h = monic(h0);
    const FpPoly al = rem(alpha, h);
    auto mu = annihilating_polynomial(h, al, tape, prof);
    if (!mu) return std::nullopt;
    return reduce_with_annihilator(h, ell, al, *mu, g, tape, prof);
}

FpPoly tower_frobenius_residue(const TowerElement& A) {
    const PrimeField& K = A.h.ring();
    const std::size_t q = prime_power(K.characteristic(), A.e);
    Modulus<PrimeField> M(A.h);
    const FpPoly theta = M.rem(FpPoly::x(K));
    // Σ_j A_j^q θ^j, Horner in θ
    FpPoly acc(K);
    for (std::size_t j = A.coeffs.size(); j-- > 0;)
        acc = M.rem(acc * theta + powmod(A.coeffs[j], q, A.h));
    return acc;
}

std::optional<BivarInTheta> main_reduction(const TowerElement& A, const FpPoly& g, std::span<const u64> tape,
                                           const ParameterProfile& prof) {
    check_tower_args(A.h, A.ell);
    const PrimeField& K = A.h.ring();
    const std::size_t q = prime_power(K.characteristic(), A.e);
    const FpPoly alpha = tower_frobenius_residue(A);
    BivarInTheta out(A.ell * q, FpPoly(K));
    if (g.deg() < 1) {
        out[0] = rem(g, A.h);
        return out;
    }
    auto mu = annihilating_polynomial(A.h, alpha, tape, prof);
    if (!mu) return std::nullopt;
    for (std::size_t i = 0; i < q; ++i) {
        auto Gi = reduce_with_annihilator(A.h, A.ell, alpha, *mu, deflate_part(g, q, i), tape, prof);
        if (!Gi) return std::nullopt;
        for (std::size_t j = 0; j < A.ell; ++j) out[j * q + i] = std::move((*Gi)[j]);
    }
    return out;
}

// ---------------------------------------------------------------- composition over a product of fields

std::optional<std::vector<FpPoly>> compose_insep_product_of_fields(const FpPoly& h0, const FpPoly& c, std::size_t e,
                                                                   std::size_t ell, const std::vector<FpPoly>& A,
                                                                   const BivarInTheta& G, std::span<const u64> tape,
                                                                   const ParameterProfile& prof) {
    check_tower_args(h0, ell);
    const FpPoly h = monic(h0);
    const PrimeField& K = h.ring();
    const std::size_t len = ell * prime_power(K.characteristic(), e);
    std::optional<SplitEvent> split;
    {
        QuotientRing L(K, h, QuotientRing::Mode::Dynamic);
        try {
            auto r = compose_modulo_inseparable(L.from_poly(c), e, ell, to_q(L, A), to_q(L, G), tape, prof);
            if (!r) return std::nullopt;
            return from_q(L, *r, len);
        } catch (const SplitEvent& s) {
            split = s;
        }
    }
    // evaluate each branch on the same tape and glue the coefficients back together
    const FpPoly h1 = monic(split->h1), h2 = monic(split->h2);
    auto b1 = compose_insep_product_of_fields(h1, rem(c, h1), e, ell, A, G, tape, prof);
    if (!b1) return std::nullopt;
    auto b2 = compose_insep_product_of_fields(h2, rem(c, h2), e, ell, A, G, tape, prof);
    if (!b2) return std::nullopt;
    std::vector<FpPoly> out(len, FpPoly(K));
    for (std::size_t j = 0; j < len; ++j) out[j] = qr_crt({{h1, (*b1)[j]}, {h2, (*b2)[j]}});
    return out;
}

std::optional<FpPoly> compose_modulo_power(const FpPoly& h0, std::size_t e, std::size_t ell, const FpPoly& a,
                                           const FpPoly& g, std::span<const u64> tape,
                                           const ParameterProfile& prof) {
    check_tower_args(h0, ell);
    const FpPoly h = monic(h0);
    if (!separable(h)) throw NotSeparable();
    const PrimeField& K = h.ring();
    const std::size_t q = prime_power(K.characteristic(), e);
    if (ell * q == 1) return base_case_compose(h, a, g, tape, prof);
    if (h.deg() == 1) return compose_modulo_inseparable(K.neg(h.coef(0)), e, ell, a, g, tape, prof);
    const SeparablePart part{h, e, ell};
    const TowerElement A = untangle_general(h, e, ell, rem(a, part_modulus(part)));
    auto G = main_reduction(A, g, tape, prof);
    if (!G) return std::nullopt;
    auto B = compose_insep_product_of_fields(h, FpPoly::x(K), e, ell, A.coeffs, *G, tape, prof);
    if (!B) return std::nullopt;
    return tangle_general(TowerElement{h, e, ell, std::move(*B)});
}

std::optional<FpPoly> modular_composition(const FpPoly& f, const FpPoly& a, const FpPoly& g,
                                          std::span<const u64> tape, const ParameterProfile& prof) {
    if (f.deg() < 1) throw PreconditionError("modular_composition: deg f must be positive");
    const PrimeField& K = f.ring();
    const std::size_t n = static_cast<std::size_t>(f.deg());
    if (n == 1) return FpPoly::constant(K, eval(g, rem(a, f).coef(0)));
    if (tape.size() < modular_composition_tape_length(n, prof)) throw TapeExhausted();
    const auto sd = separable_decomposition(f);
    std::vector<std::pair<FpPoly, FpPoly>> parts;
    for (const auto& s : sd.parts) {
        const FpPoly fi = part_modulus(s);
        const std::size_t ni = static_cast<std::size_t>(fi.deg());
        const FpPoly ai = rem(a, fi);
        FpPoly gi = g;
        if (gi.size() > 4 * ni) {
            // χ = μ(y^{p^e})^ell annihilates ai mod fi
            auto mu = annihilating_polynomial(s.h, rem(ai, s.h), tape, prof);
            if (!mu) return std::nullopt;
            gi = rem(g, pow(inflate(*mu, prime_power(K.characteristic(), s.e)), s.ell));
        }
        auto bi = compose_modulo_power(s.h, s.e, s.ell, ai, gi, tape, prof);
        if (!bi) return std::nullopt;
        parts.emplace_back(fi, std::move(*bi));
    }
    if (parts.size() == 1) return parts[0].second;
    return qr_crt(parts);
}

}  // namespace mc
