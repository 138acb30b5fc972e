#include "mc/quotient.hpp"

namespace mc {

QuotientRing::QuotientRing(const PrimeField& K, FpPoly h, Mode mode)
    : K_(&K), mod_(monic(h)), mode_(mode) {
    if (mod_.poly().size() < 2) throw PreconditionError("quotient modulus must have degree >= 1");
    xp_ = powmod(FpPoly::x(K), K.characteristic(), mod_.poly());
}

QuotientRing::Elem QuotientRing::add(const Elem& a, const Elem& b) const {
    Elem r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = K_->add(r[i], b[i]);
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

QuotientRing::Elem QuotientRing::sub(const Elem& a, const Elem& b) const {
    Elem r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = K_->sub(r[i], b[i]);
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

QuotientRing::Elem QuotientRing::neg(const Elem& a) const {
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = K_->neg(a[i]);
    return r;
}

QuotientRing::Elem QuotientRing::mul(const Elem& a, const Elem& b) const {
    if (a.empty() || b.empty()) return {};
    return mod_.mulmod(FpPoly(*K_, a), FpPoly(*K_, b)).coeffs();
}

QuotientRing::Elem QuotientRing::inv(const Elem& a) const {
    auto r = qr_invert_or_split(FpPoly(*K_, a), mod_.poly());
    switch (r.kind) {
        case InvertOrSplit::Kind::Inverse:
            return r.inverse.coeffs();
        case InvertOrSplit::Kind::ZeroAll:
            throw ZeroInverse();
        case InvertOrSplit::Kind::Split:
            if (mode_ == Mode::Dynamic) throw r.split;
            throw ZeroInverse();
    }
    throw InvariantError("unreachable");
}

QuotientRing::Elem QuotientRing::pow(const Elem& a, u64 e) const {
    Elem r = one(), b = a;
    while (e) {
        if (e & 1) r = mul(r, b);
        e >>= 1;
        if (e) b = mul(b, b);
    }
    return r;
}

QuotientRing::Elem QuotientRing::frobenius(const Elem& a) const {
    // coefficients are fixed by Frobenius, so a(θ)^p = a(θ^p)
    return from_poly(horner_mod_compose(mod_.poly(), xp_, FpPoly(*K_, a)));
}

bool QuotientRing::is_zero(const Elem& a) const {
    if (a.empty()) return true;
    if (mode_ == Mode::Plain) return false;
    FpPoly g = gcd(FpPoly(*K_, a), mod_.poly());
    if (g.size() == 1) return false;
    // a nonzero representative sharing a proper factor with h
    throw SplitEvent{g, quo(mod_.poly(), g)};
}

InvertOrSplit qr_invert_or_split(const FpPoly& q, const FpPoly& h) {
    InvertOrSplit out;
    FpPoly qr = rem(q, h);
    if (qr.is_zero()) {
        out.kind = InvertOrSplit::Kind::ZeroAll;
        return out;
    }
    auto x = xgcd(qr, h);
    if (x.g.size() == 1) {
        out.kind = InvertOrSplit::Kind::Inverse;
        out.inverse = rem(x.s, h);
        return out;
    }
    out.kind = InvertOrSplit::Kind::Split;
    FpPoly hm = monic(h);
    out.split = SplitEvent{x.g, quo(hm, x.g)};
    return out;
}

FpPoly qr_crt(const std::vector<std::pair<FpPoly, FpPoly>>& parts) {
    if (parts.empty()) throw PreconditionError("qr_crt: no parts");
    FpPoly M = parts[0].first, v = rem(parts[0].second, parts[0].first);
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const FpPoly& hi = parts[i].first;
        auto x = xgcd(M, hi);
        if (x.g.size() != 1) throw NotCoprime();
        // v' = v + M * ((v_i - v) * M^{-1} mod h_i)
        FpPoly t = rem((parts[i].second - v) * x.s, hi);
        v = v + M * t;
        M = M * hi;
    }
    return rem(v, M);
}

}  // namespace mc
