#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mc/quotient.hpp"

namespace mc {

struct ParseError : std::runtime_error {
    std::string msg;
    std::size_t pos;
    ParseError(const std::string& what, std::size_t at)
        : std::runtime_error(what + " at offset " + std::to_string(at)), msg(what), pos(at) {}
};

// Either a little-endian coefficient list ("1 0 1" is x^2 + 1; commas allowed) or a sum of
// terms c*x^k, c*x, x^k, x, c ("2*x^3 + 1"). Integers of any length, reduced mod p.
FpPoly parse_poly_text(const PrimeField& K, std::string_view s);

// little-endian, space separated; "0" for the zero polynomial
std::string format_poly(const FpPoly& u);

u64 parse_u64(std::string_view s);  // ParseError on junk or overflow

struct PolyJob {
    u64 p = 0;
    std::string f, a, g;  // unparsed, so the field can be built first
};

// first token p, then the lines of f, a, g; blank lines and '#' comments skipped
PolyJob parse_job_text(std::string_view s);

}  // namespace mc
