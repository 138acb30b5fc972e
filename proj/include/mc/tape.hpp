#pragma once

#include <span>
#include <vector>

#include "mc/field.hpp"

namespace mc {

struct TapeExhausted : MathError {
    TapeExhausted() : MathError("random tape exhausted") {}
};

// Caller-supplied random field elements. Reads move the cursor forward and never wrap.
class RandomTape {
public:
    RandomTape() = default;
    explicit RandomTape(std::vector<u64> entries) : e_(std::move(entries)) {}

    std::size_t size() const { return e_.size(); }
    std::size_t cursor() const { return pos_; }
    std::size_t remaining() const { return e_.size() - pos_; }

    std::span<const u64> take(std::size_t k) {
        if (k > remaining()) throw TapeExhausted();
        std::span<const u64> s(e_.data() + pos_, k);
        pos_ += k;
        return s;
    }
    u64 next() { return take(1)[0]; }
    std::span<const u64> all() const { return e_; }

private:
    std::vector<u64> e_;
    std::size_t pos_ = 0;
};

// Bounds-checked read from a tape slice.
inline u64 tape_at(std::span<const u64> r, std::size_t i) {
    if (i >= r.size()) throw TapeExhausted();
    return r[i];
}

}  // namespace mc
