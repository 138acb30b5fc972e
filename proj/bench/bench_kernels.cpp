// Serial vs OpenMP timings for the dense F_p kernels. On one core the two columns should
// agree up to scheduling overhead.
#include <algorithm>
#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "mc/kernels.hpp"
#include "mc/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

template <class Fn>
mc::u64 median_ns(int reps, Fn&& fn) {
    std::vector<mc::u64> t;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        auto t1 = std::chrono::steady_clock::now();
        t.push_back(static_cast<mc::u64>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
    }
    std::sort(t.begin(), t.end());
    return t[t.size() / 2];
}

void row(const char* kernel, std::size_t size, mc::u64 s, mc::u64 o, bool agree) {
    std::cout << kernel << ',' << size << ',' << mc::kernel_threads() << ',' << s << ',' << o << ','
              << static_cast<double>(s) / static_cast<double>(std::max<mc::u64>(o, 1)) << ','
              << (agree ? "yes" : "NO") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP kernel timings"};
    std::vector<std::size_t> mat_sizes{64, 128, 256}, pm_sizes{4, 8, 16};
    std::size_t pm_len = 128;
    int reps = 5, threads = 0;
    mc::u64 p = 2147483647, seed = 1;
    app.add_option("--mat-sizes", mat_sizes, "square matrix dimensions")->delimiter(',');
    app.add_option("--pm-sizes", pm_sizes, "polynomial matrix dimensions")->delimiter(',');
    app.add_option("--pm-len", pm_len, "entry length of polynomial matrices")->capture_default_str();
    app.add_option("--reps", reps, "repetitions, median reported")->capture_default_str();
    app.add_option("--threads", threads, "OpenMP threads, 0 keeps the default");
    app.add_option("-p,--prime", p, "prime modulus")->capture_default_str();
    app.add_option("--seed", seed)->capture_default_str();
    CLI11_PARSE(app, argc, argv);
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
    if (reps < 1) reps = 1;

    mc::PrimeField K(p);
    mc::SplitRng rng(seed);
    bool all_agree = true;
    std::cout << "kernel,size,threads,ns_serial,ns_omp,speedup,agree\n";
    for (std::size_t n : mat_sizes) {
        auto A = rng.tape(K, n * n), B = rng.tape(K, n * n);
        std::vector<mc::u64> C1(n * n), C2(n * n);
        auto s = median_ns(reps, [&] { mc::mat_mul_fp_serial(K, A.data(), B.data(), C1.data(), n, n, n); });
        auto o = median_ns(reps, [&] { mc::mat_mul_fp_omp(K, A.data(), B.data(), C2.data(), n, n, n); });
        all_agree &= C1 == C2;
        row("mat_mul", n, s, o, C1 == C2);
    }
    for (std::size_t n : pm_sizes) {
        std::vector<mc::FpPoly> A, B;
        for (std::size_t i = 0; i < n * n; ++i) {
            A.push_back(rng.poly(K, pm_len));
            B.push_back(rng.poly(K, pm_len));
        }
        std::vector<mc::FpPoly> C1, C2;
        auto s = median_ns(reps, [&] { C1 = mc::pm_mul_fp_serial(K, A, n, n, B, n); });
        auto o = median_ns(reps, [&] { C2 = mc::pm_mul_fp_omp(K, A, n, n, B, n); });
        bool agree = C1.size() == C2.size();
        for (std::size_t i = 0; agree && i < C1.size(); ++i) agree = C1[i] == C2[i];
        all_agree &= agree;
        row("pm_mul", n, s, o, agree);
    }
    return all_agree ? 0 : 3;
}
