#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mc/compose_core.hpp"
#include "mc/quotient.hpp"

namespace mc {

// f_i = h(x^{p^e})^ell
struct SeparablePart {
    FpPoly h;
    std::size_t e = 0, ell = 1;
};

struct SeparableDecomposition {
    u64 c = 0;
    std::vector<SeparablePart> parts;  // sorted by (e, ell)
};

// Element of F_p[θ, z] / <h(θ), (z^{p^e} - θ)^ell>: coeffs[j] is the coefficient of z^j,
// reduced mod h, and coeffs.size() == ell * p^e.
struct TowerElement {
    FpPoly h;
    std::size_t e = 0, ell = 1;
    std::vector<FpPoly> coeffs;

    bool operator==(const TowerElement& o) const = default;
};

// coefficients in y, each a polynomial in θ reduced mod h
using BivarInTheta = std::vector<FpPoly>;

std::size_t prime_power(u64 p, std::size_t e);

// h(x^{p^e})^ell
FpPoly part_modulus(const SeparablePart& s);

SeparableDecomposition separable_decomposition(const FpPoly& f);

TowerElement untangle(const FpPoly& h, std::size_t ell, const FpPoly& u);
FpPoly tangle(const TowerElement& U);  // throws NotSeparable

TowerElement untangle_general(const FpPoly& h, std::size_t e, std::size_t ell, const FpPoly& a);
FpPoly tangle_general(const TowerElement& B);

// product in the tower ring of U
TowerElement tower_mul(const TowerElement& U, const TowerElement& V);

// g rem <h(θ), (y - alpha(θ))^ell>
std::optional<BivarInTheta> bivariate_reduction(const FpPoly& h, std::size_t ell, const FpPoly& alpha,
                                                const FpPoly& g, std::span<const u64> tape,
                                                const ParameterProfile& prof = {});

// G with G(θ, A) = g(A) in the tower ring of A; deg_y G < ell * p^e
std::optional<BivarInTheta> main_reduction(const TowerElement& A, const FpPoly& g, std::span<const u64> tape,
                                           const ParameterProfile& prof = {});

// the residue of A^{p^e} modulo z^{p^e} - θ, as a polynomial in θ
FpPoly tower_frobenius_residue(const TowerElement& A);

// G(θ, A) rem <h(θ), (z^{p^e} - c(θ))^ell>, splitting h on zero divisors
std::optional<std::vector<FpPoly>> compose_insep_product_of_fields(const FpPoly& h, const FpPoly& c, std::size_t e,
                                                                   std::size_t ell, const std::vector<FpPoly>& A,
                                                                   const BivarInTheta& G, std::span<const u64> tape,
                                                                   const ParameterProfile& prof = {});

// g(a) rem h(x^{p^e})^ell for separable monic h
std::optional<FpPoly> compose_modulo_power(const FpPoly& h, std::size_t e, std::size_t ell, const FpPoly& a,
                                           const FpPoly& g, std::span<const u64> tape,
                                           const ParameterProfile& prof = {});

inline std::size_t modular_composition_tape_length(std::size_t n, const ParameterProfile& prof = {}) {
    return base_case_tape_length(n, prof);
}

// g(a) rem f, or nullopt
std::optional<FpPoly> modular_composition(const FpPoly& f, const FpPoly& a, const FpPoly& g,
                                          std::span<const u64> tape, const ParameterProfile& prof = {});

}  // namespace mc
