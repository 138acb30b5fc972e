#include "mc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "mc/parse.hpp"
#include "mc/rng.hpp"
#include "mc/towers.hpp"

namespace mc {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr std::size_t kVerifyLimit = 512;

FpPoly need_poly(const PrimeField& K, const std::string& text, const char* name) {
    if (text.empty()) throw UsageError(std::string("missing --") + name);
    try {
        return parse_poly_text(K, text);
    } catch (const ParseError& e) {
        throw ParseError(std::string("--") + name + ": " + e.msg, e.pos);
    }
}

FpPoly need_modulus(const PrimeField& K, const std::string& text) {
    FpPoly f = need_poly(K, text, "f");
    if (f.deg() < 1) throw UsageError("f must have positive degree");
    return monic(f);
}

bool known_algo(const std::string& a) {
    return a == "horner" || a == "brentkung" || a == "relations" || a == "auto";
}

// modular_composition with fresh tape slices; nullopt after `retries` failures
std::optional<FpPoly> relations_retry(const FpPoly& f, const FpPoly& a, const FpPoly& g, u64 seed,
                                      unsigned retries) {
    const PrimeField& K = f.ring();
    const std::size_t len = modular_composition_tape_length(static_cast<std::size_t>(f.deg()));
    SplitRng root(seed);
    for (unsigned t = 0; t < retries; ++t) {
        auto tape = root.split(t).tape(K, len);
        if (auto r = modular_composition(f, a, g, tape)) return r;
    }
    return std::nullopt;
}

CmdResult cmd_compose(const JobSpec& job, const PrimeField& K) {
    const FpPoly f = need_modulus(K, job.f);
    const FpPoly a = need_poly(K, job.a, "a");
    const FpPoly g = need_poly(K, job.g, "g");
    CmdResult res;
    std::optional<FpPoly> b;
    if (job.algo == "horner") {
        b = horner_mod_compose(f, a, g);
    } else if (job.algo == "brentkung") {
        b = brent_kung_compose(f, a, g);
    } else {
        b = relations_retry(f, a, g, job.seed, job.retries);
        if (!b && job.algo == "auto") {
            res.err += "relations pipeline failed " + std::to_string(job.retries) + " times; using Horner\n";
            b = horner_mod_compose(f, a, g);
        }
    }
    if (!b) {
        res.code = 1;
        res.err += "relations pipeline failed " + std::to_string(job.retries) + " times\n";
        return res;
    }
    if (job.verify) {
        if (static_cast<std::size_t>(f.deg()) <= kVerifyLimit) {
            if (!(*b == horner_mod_compose(f, a, g))) {
                res.code = 3;
                res.err += "verification against Horner failed\n";
                return res;
            }
            res.err += "verified against Horner\n";
        } else {
            res.err += "verification skipped: deg f > " + std::to_string(kVerifyLimit) + "\n";
        }
    }
    res.out = format_poly(*b) + "\n";
    return res;
}

CmdResult cmd_annihilate(const JobSpec& job, const PrimeField& K) {
    const FpPoly f = need_modulus(K, job.f);
    const FpPoly a = need_poly(K, job.a, "a");
    const std::size_t len = base_case_tape_length(static_cast<std::size_t>(f.deg()));
    SplitRng root(job.seed);
    CmdResult res;
    for (unsigned t = 0; t < job.retries; ++t) {
        auto mu = annihilating_polynomial(f, a, root.split(t).tape(K, len));
        if (!mu) continue;
        if (!horner_mod_compose(f, a, *mu).is_zero()) {
            res.code = 3;
            res.err = "annihilator does not vanish at a\n";
            return res;
        }
        res.out = format_poly(*mu) + "\n";
        return res;
    }
    res.code = 1;
    res.err = "annihilator failed " + std::to_string(job.retries) + " times\n";
    return res;
}

CmdResult cmd_minpoly(const JobSpec& job, const PrimeField& K) {
    const FpPoly f = need_modulus(K, job.f);
    const FpPoly a = need_poly(K, job.a, "a");
    const std::size_t len = minimal_polynomial_tape_length(static_cast<std::size_t>(f.deg()));
    SplitRng root(job.seed);
    CmdResult res;
    for (unsigned t = 0; t < job.retries; ++t) {
        auto mp = minimal_polynomial(f, a, root.split(t).tape(K, len));
        if (!mp) continue;
        res.out = format_poly(mp->mu) + "\n";
        res.err = mp->provenance == MinPolyProvenance::CertifiedBasis ? "certified relation basis\n"
                                                                       : "verified projection\n";
        return res;
    }
    res.code = 1;
    res.err = "minimal polynomial failed " + std::to_string(job.retries) + " times\n";
    return res;
}

CmdResult cmd_reverse(const JobSpec& job, const PrimeField& K) {
    const FpPoly a = need_poly(K, job.a, "a");
    if (job.precision == 0) throw UsageError("reverse needs --precision n");
    const std::size_t n = job.precision;
    SplitRng root(job.seed);
    auto tape = root.tape(K, series_reversion_tape_length(n));
    FpPoly g = series_reversion(a, n, tape);
    CmdResult res;
    if (job.verify) {
        const FpPoly x = trunc(FpPoly::x(K), n);
        if (!(horner_trunc_compose(a, g, n) == x) || !(horner_trunc_compose(g, a, n) == x)) {
            res.code = 3;
            res.err = "reversion check failed\n";
            return res;
        }
        res.err = "verified a(g) = g(a) = x mod x^n\n";
    }
    res.out = format_poly(g) + "\n";
    return res;
}

CmdResult cmd_bench(const JobSpec& job) {
    CmdResult res;
    res.out = bench_csv(run_bench(job));
    return res;
}

CmdResult cmd_selftest(const JobSpec& job) {
    CmdResult res;
    std::size_t checked = 0;
    for (u64 p : {2ull, 3ull, 5ull, 65537ull, 2147483647ull}) {
        PrimeField K(p);
        SplitRng root = SplitRng(job.seed).split(p);
        for (std::size_t n = 1; n <= 16; ++n) {
            for (u64 t = 0; t < 4; ++t) {
                SplitRng r = root.split(n * 16 + t);
                FpPoly f = r.monic(K, n), a = r.poly(K, n + 2), g = r.poly(K, 2 * n);
                const FpPoly want = horner_mod_compose(f, a, g);
                auto got = modular_composition(f, a, g, r.tape(K, modular_composition_tape_length(n)));
                if (got && !(*got == want)) {
                    res.code = 3;
                    res.err = "selftest mismatch at p=" + std::to_string(p) + " n=" + std::to_string(n) + "\n";
                    return res;
                }
                if (!(brent_kung_compose(f, a, g) == want)) {
                    res.code = 3;
                    res.err = "Brent-Kung mismatch at p=" + std::to_string(p) + " n=" + std::to_string(n) + "\n";
                    return res;
                }
                const FpPoly back = parse_poly_text(K, format_poly(want));
                if (!(back == want)) {
                    res.code = 3;
                    res.err = "text round trip failed\n";
                    return res;
                }
                ++checked;
            }
        }
    }
    res.out = "selftest ok: " + std::to_string(checked) + " instances\n";
    return res;
}

}  // namespace

std::vector<BenchRow> run_bench(const JobSpec& job) {
    if (job.sizes.empty()) throw UsageError("bench needs --sizes");
    if (job.trials == 0) throw UsageError("bench needs --trials >= 1");
    PrimeField K(job.p);
    std::vector<std::string> algos;
    if (job.algo == "auto")
        algos = {"horner", "brentkung", "relations"};
    else
        algos = {job.algo};
    std::vector<BenchRow> rows;
    for (const auto& algo : algos) {
        for (std::size_t n : job.sizes) {
            if (n == 0) throw UsageError("bench sizes must be positive");
            BenchRow row{algo, n, job.p, job.trials, 0, 0, 0};
            std::vector<u64> ns;
            std::size_t cert = 0;
            for (std::size_t t = 0; t < job.trials; ++t) {
                // same instance for every algorithm at a given (n, t)
                SplitRng r = SplitRng(job.seed).split(n).split(t);
                FpPoly f = r.monic(K, n), a = r.poly(K, n), g = r.poly(K, n);
                auto tape = r.tape(K, modular_composition_tape_length(n));
                const auto t0 = std::chrono::steady_clock::now();
                bool ok = true;
                if (algo == "horner") {
                    (void)horner_mod_compose(f, a, g);
                } else if (algo == "brentkung") {
                    (void)brent_kung_compose(f, a, g);
                } else {
                    ok = modular_composition(f, a, g, tape).has_value();
                }
                const auto t1 = std::chrono::steady_clock::now();
                ns.push_back(static_cast<u64>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
                if (!ok) ++row.fail_count;
                if (algo != "relations") {
                    ++cert;
                } else if (n >= 2 && !K.is_zero(f.coef(0)) && gcd(rem(a, f), f).deg() == 0) {
                    const std::size_t m = ParameterProfile{}.m(n);
                    if (candidate_basis(f, rem(a, f), m, ParameterProfile::d(n, m)).certified()) ++cert;
                }
            }
            std::sort(ns.begin(), ns.end());
            row.ns_median = ns.size() % 2 ? ns[ns.size() / 2] : (ns[ns.size() / 2 - 1] + ns[ns.size() / 2]) / 2;
            row.cert_rate = static_cast<double>(cert) / static_cast<double>(job.trials);
            rows.push_back(row);
        }
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << kCsvHeader << "\n";
    for (const auto& r : rows) {
        char rate[32];
        std::snprintf(rate, sizeof rate, "%.4f", r.cert_rate);
        os << r.algo << ',' << r.n << ',' << r.p << ',' << r.trials << ',' << r.ns_median << ',' << r.fail_count
           << ',' << rate << "\n";
    }
    return os.str();
}

CmdResult run_command(const JobSpec& job) {
    try {
        if (!known_algo(job.algo)) throw UsageError("unknown --algo " + job.algo);
        if (job.command == "selftest") return cmd_selftest(job);
        if (job.retries == 0) throw UsageError("--retries must be at least 1");
        if (job.command == "bench") return cmd_bench(job);
        PrimeField K(job.p);
        if (job.command == "compose") return cmd_compose(job, K);
        if (job.command == "annihilate") return cmd_annihilate(job, K);
        if (job.command == "minpoly") return cmd_minpoly(job, K);
        if (job.command == "reverse") return cmd_reverse(job, K);
        throw UsageError("unknown command " + job.command);
    } catch (const ParseError& e) {
        return {2, "", std::string("parse error: ") + e.what() + "\n"};
    } catch (const UsageError& e) {
        return {2, "", std::string("usage error: ") + e.what() + "\n"};
    } catch (const PreconditionError& e) {
        return {2, "", std::string("precondition: ") + e.what() + "\n"};
    } catch (const InvariantError& e) {
        return {3, "", std::string("invariant violation: ") + e.what() + "\n"};
    } catch (const MathError& e) {
        return {3, "", std::string("internal error: ") + e.what() + "\n"};
    }
}

}  // namespace mc
