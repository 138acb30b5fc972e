#include <doctest.h>

#include <set>
#include <sstream>

#include "mc/cli.hpp"
#include "mc/parse.hpp"
#include "mc/rng.hpp"
#include "support.hpp"

using namespace mc;
using namespace testsupport;

namespace {

JobSpec compose_job(u64 p, std::string f, std::string a, std::string g, std::string algo = "auto") {
    JobSpec j;
    j.command = "compose";
    j.p = p;
    j.f = std::move(f);
    j.a = std::move(a);
    j.g = std::move(g);
    j.algo = std::move(algo);
    return j;
}

// independent text writer for the round trip: sparse form with shuffled terms
std::string sparse_text(Gen& G, const std::vector<u64>& c) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < c.size(); ++i) idx.push_back(i);
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[G.below(i)]);
    std::string s;
    for (std::size_t k : idx) {
        if (!s.empty()) s += " + ";
        s += std::to_string(c[k]) + "*x^" + std::to_string(k);
    }
    return s.empty() ? "0" : s;
}

}  // namespace

TEST_CASE("polynomial text") {
    PrimeField K(5);
    CHECK(parse_poly_text(K, "0").is_zero());
    CHECK(parse_poly_text(K, "1 0 1") == P(K, {1, 0, 1}));
    CHECK(parse_poly_text(K, "2*x^3 + 1") == P(K, {1, 0, 0, 2}));
    CHECK(parse_poly_text(K, "1, 2, 3") == P(K, {1, 2, 3}));
    CHECK(parse_poly_text(K, "x^2 - x + 7") == P(K, {2, 4, 1}));
    CHECK(parse_poly_text(K, "3*x + 4*x - x^2 + x^2") == P(K, {0, 2}));
    CHECK(parse_poly_text(K, "-1 12") == P(K, {4, 2}));
    CHECK(parse_poly_text(K, "123456789012345678901234567890") == P(K, {0}));
    CHECK(parse_poly_text(K, "x") == P(K, {0, 1}));
    CHECK(format_poly(P(K, {1, 0, 1})) == "1 0 1");
    CHECK(format_poly(FpPoly(K)) == "0");

    auto pos_of = [&](const char* s) -> long {
        try {
            parse_poly_text(K, s);
        } catch (const ParseError& e) {
            return static_cast<long>(e.pos);
        }
        return -1;
    };
    CHECK(pos_of("1 0 q") == 4);
    CHECK(pos_of("") == 0);
    CHECK(pos_of("   ") == 3);
    CHECK(pos_of("2*x^") == 4);
    CHECK(pos_of("2*y") == 2);
    CHECK(pos_of("x^2 x") == 4);
    CHECK(pos_of("1 2a") == 3);

    SUBCASE("round trips") {
        Gen G(11);
        for (u64 p : {2ull, 7ull, 65537ull, 2147483647ull}) {
            PrimeField F(p);
            for (int t = 0; t < 50; ++t) {
                auto u = G.poly(F, G.below(12));
                CHECK(parse_poly_text(F, format_poly(u)) == u);
                CHECK(parse_poly_text(F, sparse_text(G, u.coeffs())) == u);
            }
        }
    }

    SUBCASE("job text") {
        auto j = parse_job_text("# header\n7\n1 0 0 1\n\n0 1   # a\nx^4\n");
        CHECK(j.p == 7);
        CHECK(j.f == "1 0 0 1");
        CHECK(j.a == "0 1");
        CHECK(j.g == "x^4");
        auto k = parse_job_text("5 1 0 1\n0 1\n0 0 0 1");
        CHECK(k.p == 5);
        CHECK(k.f == "1 0 1");
        CHECK_THROWS_AS(parse_job_text("7\n1 1\n0 1\n"), ParseError);
        CHECK_THROWS_AS(parse_job_text("seven\n1\n1\n1\n"), ParseError);
        CHECK_THROWS_AS(parse_u64("18446744073709551616"), ParseError);
        CHECK(parse_u64("18446744073709551615") == ~u64{0});
    }
}

TEST_CASE("split rng") {
    SplitRng a(42), b(42);
    for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
    SplitRng s1 = SplitRng(42).split(1), s1b = SplitRng(42).split(1), s2 = SplitRng(42).split(2);
    std::set<u64> seen;
    for (int i = 0; i < 100; ++i) {
        u64 x = s1.next();
        CHECK(x == s1b.next());
        seen.insert(x);
        seen.insert(s2.next());
    }
    CHECK(seen.size() == 200);
    // below(b) stays in range and hits every residue for small b
    SplitRng r(7);
    std::vector<int> hits(6, 0);
    for (int i = 0; i < 6000; ++i) {
        u64 v = r.below(6);
        REQUIRE(v < 6);
        ++hits[v];
    }
    for (int h : hits) CHECK((h > 800 && h < 1200));
}

TEST_CASE("compose command") {
    auto r = run_command(compose_job(5, "1 0 1", "0 1", "0 0 0 1"));
    CHECK(r.code == 0);
    CHECK(r.out == "0 4\n");
    for (const char* algo : {"horner", "brentkung", "auto"}) {
        auto e = run_command(compose_job(5, "1 0 1", "3 2", "0 1", algo));
        CHECK(e.code == 0);
        CHECK(e.out == "3 2\n");
    }
    CHECK(run_command(compose_job(5, "1 0 q", "0 1", "0 1")).code == 2);
    CHECK(run_command(compose_job(4, "1 0 1", "0 1", "0 1")).code == 2);
    CHECK(run_command(compose_job(5, "3", "0 1", "0 1")).code == 2);
    CHECK(run_command(compose_job(5, "1 0 1", "", "0 1")).code == 2);
    CHECK(run_command(compose_job(5, "1 0 1", "0 1", "0 1", "fast")).code == 2);
    auto bad = compose_job(5, "1 0 1", "0 1", "0 1");
    bad.command = "frobnicate";
    CHECK(run_command(bad).code == 2);
    // non-monic f gives the same ideal
    CHECK(run_command(compose_job(7, "2 0 2", "0 1", "0 0 0 1", "horner")).out == "0 6\n");

    SUBCASE("auto with verify always succeeds") {
        Gen G(5);
        for (u64 p : {2ull, 3ull, 5ull, 7ull, 65537ull}) {
            PrimeField K(p);
            for (int t = 0; t < 15; ++t) {
                const std::size_t n = 1 + G.below(10);
                auto f = G.monic(K, n), a = G.poly(K, n + 3), g = G.poly(K, 3 * n);
                auto job = compose_job(p, format_poly(f), format_poly(a), format_poly(g));
                job.verify = true;
                job.seed = G.rng();
                auto res = run_command(job);
                REQUIRE(res.code == 0);
                CHECK(parse_poly_text(K, res.out) == oracle_compose(f, a, g));
            }
        }
    }
    SUBCASE("relations only may give up") {
        auto job = compose_job(65537, "1 2 3 4 5 1", "0 3 1", "1 1 1 1 1 1 1 1 1 1 1 1", "relations");
        auto res = run_command(job);
        CHECK(res.code == 0);
        PrimeField K(65537);
        CHECK(parse_poly_text(K, res.out) ==
              oracle_compose(P(K, {1, 2, 3, 4, 5, 1}), P(K, {0, 3, 1}), P(K, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1})));
        job.retries = 0;
        CHECK(run_command(job).code == 2);
    }
}

TEST_CASE("other commands") {
    PrimeField K(65537);
    JobSpec j;
    j.p = 65537;
    j.f = "1 2 3 4 5 6 1";
    j.a = "0 0 1 5";
    const FpPoly f = parse_poly_text(K, j.f), a = parse_poly_text(K, j.a);

    j.command = "annihilate";
    auto r = run_command(j);
    REQUIRE(r.code == 0);
    auto mu = parse_poly_text(K, r.out);
    CHECK(!mu.is_zero());
    CHECK(mu.deg() <= 4 * 6);
    CHECK(oracle_compose(f, a, mu).is_zero());

    j.command = "minpoly";
    r = run_command(j);
    REQUIRE(r.code == 0);
    auto mp = parse_poly_text(K, r.out);
    CHECK(oracle_compose(f, a, mp).is_zero());
    CHECK(mp.deg() <= 6);
    CHECK(K.equal(mp.lead(), K.one()));

    j.command = "reverse";
    j.a = "0 1 3 5";
    j.verify = true;
    CHECK(run_command(j).code == 2);  // no precision
    j.precision = 8;
    r = run_command(j);
    REQUIRE(r.code == 0);
    auto g = parse_poly_text(K, r.out);
    CHECK(horner_trunc_compose(P(K, {0, 1, 3, 5}), g, 8) == FpPoly::x(K));
    j.a = "1 1";
    CHECK(run_command(j).code == 2);

    JobSpec st;
    st.command = "selftest";
    auto s = run_command(st);
    CHECK(s.code == 0);
    CHECK(s.out.rfind("selftest ok", 0) == 0);
}

TEST_CASE("bench rows") {
    JobSpec j;
    j.command = "bench";
    j.p = 2147483647;
    j.sizes = {64};
    j.trials = 1;
    j.algo = "horner";
    auto rows = run_bench(j);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].fail_count == 0);
    CHECK(rows[0].algo == "horner");

    j.algo = "relations";
    j.sizes = {8, 16};
    j.trials = 100;
    rows = run_bench(j);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        CHECK(row.fail_count <= row.trials / 100);
        CHECK(row.cert_rate >= 0.0);
        CHECK(row.cert_rate <= 1.0);
    }

    j.algo = "auto";
    j.sizes = {4};
    j.trials = 3;
    auto all = run_bench(j);
    CHECK(all.size() == 3);
    auto again = run_bench(j);
    for (std::size_t i = 0; i < all.size(); ++i) {
        CHECK(all[i].algo == again[i].algo);
        CHECK(all[i].fail_count == again[i].fail_count);
        CHECK(all[i].cert_rate == again[i].cert_rate);
    }
    std::istringstream csv(bench_csv(all));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "algo,n,p,trials,ns_median,fail_count,cert_rate");
    int count = 0;
    while (std::getline(csv, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 6);
        ++count;
    }
    CHECK(count == 3);
}
