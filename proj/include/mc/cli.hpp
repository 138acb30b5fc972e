#pragma once

#include <string>
#include <vector>

#include "mc/field.hpp"

namespace mc {

struct JobSpec {
    std::string command;                 // compose | annihilate | minpoly | reverse | bench | selftest
    u64 p = 0;
    std::string f, a, g;                 // polynomial text
    u64 seed = 1;
    std::string algo = "auto";           // horner | brentkung | relations | auto
    unsigned retries = 3;
    bool verify = false;
    std::vector<std::size_t> sizes;      // bench
    std::size_t trials = 5;              // bench
    std::size_t precision = 0;           // reverse
};

struct BenchRow {
    std::string algo;
    std::size_t n = 0;
    u64 p = 0;
    std::size_t trials = 0;
    u64 ns_median = 0;
    std::size_t fail_count = 0;
    double cert_rate = 0;
};

struct CmdResult {
    int code = 0;  // 0 ok, 1 randomized failure after all retries, 2 usage or parse, 3 invariant violation
    std::string out, err;
};

inline constexpr const char* kCsvHeader = "algo,n,p,trials,ns_median,fail_count,cert_rate";

CmdResult run_command(const JobSpec& job);

std::vector<BenchRow> run_bench(const JobSpec& job);
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace mc
