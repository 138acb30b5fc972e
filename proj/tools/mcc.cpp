#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mc/cli.hpp"
#include "mc/parse.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// "@path" reads a file, anything else is inline text
std::string resolve(const std::string& v) { return !v.empty() && v[0] == '@' ? slurp(v.substr(1)) : v; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"modular composition g(a) rem f over F_p"};
    app.fallthrough();
    app.require_subcommand(1);

    mc::JobSpec job;
    std::string input, csv;
    app.add_option("-p,--prime", job.p, "prime modulus");
    app.add_option("--f", job.f, "modulus f (inline, or @file)");
    app.add_option("--a", job.a, "polynomial a (inline, or @file)");
    app.add_option("--g", job.g, "polynomial g (inline, or @file)");
    app.add_option("--input", input, "job file: p, then lines f, a, g");
    app.add_option("--seed", job.seed, "RNG seed")->capture_default_str();
    app.add_option("--algo", job.algo, "horner | brentkung | relations | auto")
        ->check(CLI::IsMember({"horner", "brentkung", "relations", "auto"}))
        ->capture_default_str();
    app.add_option("--retries", job.retries, "randomized attempts before giving up")->capture_default_str();
    app.add_flag("--verify", job.verify, "recheck the answer with Horner");
    app.add_option("--sizes", job.sizes, "bench sizes, comma separated")->delimiter(',');
    app.add_option("--trials", job.trials, "bench trials per size")->capture_default_str();
    app.add_option("--csv", csv, "also write bench rows to this file");
    app.add_option("-n,--precision", job.precision, "series precision for reverse");

    for (const char* name : {"compose", "annihilate", "minpoly", "reverse", "bench", "selftest"}) {
        app.add_subcommand(name, std::string(name) + " command")->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    job.command = app.get_subcommands().front()->get_name();

    try {
        if (!input.empty()) {
            auto pj = mc::parse_job_text(resolve(input[0] == '@' ? input : "@" + input));
            job.p = pj.p;
            job.f = pj.f;
            job.a = pj.a;
            job.g = pj.g;
        }
        job.f = resolve(job.f);
        job.a = resolve(job.a);
        job.g = resolve(job.g);
    } catch (const mc::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
    if (job.command == "bench" && job.p == 0) job.p = 2147483647;

    mc::CmdResult r;
    try {
        r = mc::run_command(job);
    } catch (const std::exception& e) {
        // only run_bench argument checks reach here
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
    std::cout << r.out;
    std::cerr << r.err;
    if (r.code == 0 && job.command == "bench" && !csv.empty()) {
        std::ofstream out(csv);
        if (!out) {
            std::cerr << "cannot write " << csv << "\n";
            return 2;
        }
        out << r.out;
    }
    return r.code;
}
