#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "mc/field.hpp"
#include "mc/poly.hpp"

namespace mc {

using FpPoly = Poly<PrimeField>;

// A zero divisor was met in F_p[θ]/<h>: h = h1 * h2 with both factors proper and coprime.
struct SplitEvent {
    FpPoly h1, h2;
};

struct NotCoprime : MathError {
    NotCoprime() : MathError("moduli are not pairwise coprime") {}
};
struct NotSeparable : MathError {
    NotSeparable() : MathError("modulus is not separable") {}
};

// F_p[θ]/<h>. In Dynamic mode every zero test and inversion either decides or throws a
// SplitEvent; in Plain mode zero tests are syntactic and non-units throw ZeroInverse.
class QuotientRing {
public:
    using Elem = std::vector<u64>;
    enum class Mode { Dynamic, Plain };

    QuotientRing(const PrimeField& K, FpPoly h, Mode mode = Mode::Dynamic);

    const PrimeField& base() const { return *K_; }
    const FpPoly& modulus() const { return mod_.poly(); }
    std::size_t degree() const { return mod_.degree(); }
    u64 characteristic() const { return K_->characteristic(); }
    Mode mode() const { return mode_; }

    Elem zero() const { return {}; }
    Elem one() const { return degree() == 0 ? Elem{} : Elem{1}; }
    Elem embed(u64 v) const { return normal({K_->embed(v)}); }
    Elem from_int(i64 v) const { return normal({K_->from_int(v)}); }
    Elem lift_base(u64 v) const { return normal({v}); }
    Elem theta() const { return from_poly(FpPoly::x(*K_)); }

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem inv(const Elem& a) const;
    Elem pow(const Elem& a, u64 e) const;
    Elem frobenius(const Elem& a) const;

    bool is_zero(const Elem& a) const;
    bool equal(const Elem& a, const Elem& b) const { return is_zero(sub(a, b)); }

    FpPoly to_poly(const Elem& a) const { return FpPoly(*K_, a); }
    Elem from_poly(const FpPoly& u) const { return mod_.rem(u).coeffs(); }

private:
    Elem normal(Elem v) const { return from_poly(FpPoly(*K_, std::move(v))); }

    const PrimeField* K_;
    Modulus<PrimeField> mod_;
    Mode mode_;
    FpPoly xp_;  // θ^p rem h
};

struct ZeroDivisorAll {};

struct InvertOrSplit {
    enum class Kind { Inverse, Split, ZeroAll } kind;
    FpPoly inverse;
    SplitEvent split;
};

// q must be reduced modulo h. h need not be separable here.
InvertOrSplit qr_invert_or_split(const FpPoly& q, const FpPoly& h);

// v with v ≡ v_i mod h_i for all parts; throws NotCoprime.
FpPoly qr_crt(const std::vector<std::pair<FpPoly, FpPoly>>& parts);

}  // namespace mc
