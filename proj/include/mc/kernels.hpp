#pragma once

#include <cstddef>
#include <vector>

#include "mc/field.hpp"
#include "mc/poly.hpp"

namespace mc {

// Dense F_p matrix product C = A B with A (n x k), B (k x m), all row-major.
// The serial version is the reference; the OpenMP version splits rows of C.
void mat_mul_fp_serial(const PrimeField& K, const u64* A, const u64* B, u64* C, std::size_t n, std::size_t k,
                       std::size_t m);
void mat_mul_fp_omp(const PrimeField& K, const u64* A, const u64* B, u64* C, std::size_t n, std::size_t k,
                    std::size_t m);

// Product of polynomial matrices over F_p[y]; A is (ar x ac), B is (ac x bc), row-major.
std::vector<Poly<PrimeField>> pm_mul_fp_serial(const PrimeField& K, const std::vector<Poly<PrimeField>>& A,
                                               std::size_t ar, std::size_t ac,
                                               const std::vector<Poly<PrimeField>>& B, std::size_t bc);
std::vector<Poly<PrimeField>> pm_mul_fp_omp(const PrimeField& K, const std::vector<Poly<PrimeField>>& A,
                                            std::size_t ar, std::size_t ac,
                                            const std::vector<Poly<PrimeField>>& B, std::size_t bc);

// Work size (in coefficient products) above which the OpenMP kernels are used by default.
inline constexpr std::size_t kParallelWork = 1u << 18;

int kernel_threads();

}  // namespace mc
