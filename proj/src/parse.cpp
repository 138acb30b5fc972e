#include "mc/parse.hpp"

#include <cctype>
#include <map>
#include <vector>

namespace mc {

namespace {

struct Cursor {
    std::string_view s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ',')) ++i;
    }
    bool at_end() const { return i >= s.size(); }
    char peek() const { return at_end() ? '\0' : s[i]; }
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, i); }

    // unsigned decimal, reduced mod p
    u64 number(const PrimeField& K) {
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a digit");
        u64 v = 0;
        const u64 ten = K.embed(10);
        while (std::isdigit(static_cast<unsigned char>(peek()))) v = K.add(K.mul(v, ten), K.embed(s[i++] - '0'));
        return v;
    }
    std::size_t exponent() {
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an exponent");
        std::size_t v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            if (v > (std::size_t{1} << 40)) fail("exponent too large");
            v = v * 10 + static_cast<std::size_t>(s[i++] - '0');
        }
        return v;
    }
};

bool is_sparse(std::string_view s) { return s.find_first_of("xX*^") != std::string_view::npos; }

FpPoly parse_dense(const PrimeField& K, std::string_view s) {
    Cursor c{s};
    std::vector<u64> co;
    c.skip_ws();
    if (c.at_end()) c.fail("empty polynomial");
    while (!c.at_end()) {
        bool neg = false;
        if (c.peek() == '-' || c.peek() == '+') neg = s[c.i++] == '-';
        u64 v = c.number(K);
        if (!c.at_end() && !std::isspace(static_cast<unsigned char>(c.peek())) && c.peek() != ',')
            c.fail("unexpected character");
        co.push_back(neg ? K.neg(v) : v);
        c.skip_ws();
    }
    return FpPoly(K, std::move(co));
}

FpPoly parse_sparse(const PrimeField& K, std::string_view s) {
    Cursor c{s};
    std::map<std::size_t, u64> acc;
    c.skip_ws();
    if (c.at_end()) c.fail("empty polynomial");
    bool first = true;
    while (true) {
        c.skip_ws();
        bool neg = false;
        if (c.peek() == '+' || c.peek() == '-') {
            neg = s[c.i++] == '-';
            c.skip_ws();
        } else if (!first) {
            c.fail("expected '+' or '-'");
        }
        first = false;
        u64 coef = 1;
        std::size_t k = 0;
        bool have_num = false;
        if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
            coef = c.number(K);
            have_num = true;
            c.skip_ws();
            if (c.peek() == '*') {
                ++c.i;
                c.skip_ws();
                if (c.peek() != 'x' && c.peek() != 'X') c.fail("expected 'x' after '*'");
            }
        }
        if (c.peek() == 'x' || c.peek() == 'X') {
            ++c.i;
            k = 1;
            c.skip_ws();
            if (c.peek() == '^') {
                ++c.i;
                c.skip_ws();
                k = c.exponent();
            }
        } else if (!have_num) {
            c.fail("expected a term");
        }
        u64& slot = acc[k];
        slot = K.add(slot, neg ? K.neg(coef) : coef);
        c.skip_ws();
        if (c.at_end()) break;
    }
    std::vector<u64> co(acc.rbegin()->first + 1, 0);
    for (auto [k, v] : acc) co[k] = v;
    return FpPoly(K, std::move(co));
}

}  // namespace

FpPoly parse_poly_text(const PrimeField& K, std::string_view s) {
    return is_sparse(s) ? parse_sparse(K, s) : parse_dense(K, s);
}

std::string format_poly(const FpPoly& u) {
    if (u.is_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(u.coeffs()[i]);
    }
    return out;
}

u64 parse_u64(std::string_view s) {
    if (s.empty()) throw ParseError("expected an integer", 0);
    u64 v = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw ParseError("expected a digit", i);
        const u64 d = static_cast<u64>(s[i] - '0');
        if (v > (~u64{0} - d) / 10) throw ParseError("integer overflow", i);
        v = v * 10 + d;
    }
    return v;
}

PolyJob parse_job_text(std::string_view s) {
    std::vector<std::pair<std::size_t, std::string_view>> lines;  // (offset, text)
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t end = s.find('\n', start);
        if (end == std::string_view::npos) end = s.size();
        std::string_view ln = s.substr(start, end - start);
        if (auto h = ln.find('#'); h != std::string_view::npos) ln = ln.substr(0, h);
        std::size_t b = 0;
        while (b < ln.size() && std::isspace(static_cast<unsigned char>(ln[b]))) ++b;
        std::size_t e = ln.size();
        while (e > b && std::isspace(static_cast<unsigned char>(ln[e - 1]))) --e;
        if (e > b) lines.emplace_back(start + b, ln.substr(b, e - b));
        start = end + 1;
    }
    if (lines.empty()) throw ParseError("missing prime", 0);
    // p may share its line with f
    auto [off, first] = lines.front();
    std::size_t sp = 0;
    while (sp < first.size() && !std::isspace(static_cast<unsigned char>(first[sp]))) ++sp;
    PolyJob job;
    try {
        job.p = parse_u64(first.substr(0, sp));
    } catch (const ParseError& e) {
        throw ParseError("bad prime: " + e.msg, off + e.pos);
    }
    std::vector<std::string_view> rest;
    std::string_view tail = first.substr(sp);
    while (!tail.empty() && std::isspace(static_cast<unsigned char>(tail.front()))) tail.remove_prefix(1);
    if (!tail.empty()) rest.push_back(tail);
    for (std::size_t i = 1; i < lines.size(); ++i) rest.push_back(lines[i].second);
    if (rest.size() != 3) throw ParseError("expected three polynomial lines, got " + std::to_string(rest.size()), s.size());
    job.f = rest[0];
    job.a = rest[1];
    job.g = rest[2];
    return job;
}

}  // namespace mc
