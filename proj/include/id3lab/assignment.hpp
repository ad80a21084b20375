#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "id3lab/bitvec.hpp"
#include "id3lab/dataset.hpp"

namespace id3lab {

/// Partial assignment w in {0,1,*}^n: fixes some coordinates and leaves the
/// rest free. Encodes a root-to-node path (the subcube of inputs reaching
/// that node). Once fixed, a coordinate is never reassigned.
class partial_assignment {
public:
    partial_assignment() = default;

    explicit partial_assignment(std::size_t n) : fixed_(n), values_(n) {}

    /// Parses a string over '0', '1', '*'.
    static partial_assignment from_string(const std::string& s) {
        partial_assignment w(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            switch (s[i]) {
                case '*': break;
                case '0': w.fix(i, false); break;
                case '1': w.fix(i, true); break;
                default:
                    throw std::invalid_argument(
                        "partial_assignment: invalid character '" +
                        std::string(1, s[i]) + "'");
            }
        }
        return w;
    }

    std::size_t dimension() const { return fixed_.size(); }

    bool is_fixed(std::size_t i) const { return fixed_.get(i); }
    bool is_free(std::size_t i) const { return !fixed_.get(i); }
    bool value(std::size_t i) const { return values_.get(i); }

    void fix(std::size_t i, bool v) {
        if (fixed_.get(i))
            throw std::invalid_argument("partial_assignment: coordinate " +
                                        std::to_string(i) + " already fixed");
        fixed_.set(i, true);
        values_.set(i, v);
    }

    /// Copy with one more coordinate fixed.
    partial_assignment with(std::size_t i, bool v) const {
        partial_assignment w(*this);
        w.fix(i, v);
        return w;
    }

    std::vector<std::uint32_t> support() const {
        std::vector<std::uint32_t> out;
        for (std::size_t i = 0; i < dimension(); ++i)
            if (fixed_.get(i)) out.push_back(static_cast<std::uint32_t>(i));
        return out;
    }

    std::size_t support_size() const {
        std::size_t count = 0;
        for (auto word : fixed_.words()) count += std::popcount(word);
        return count;
    }

    /// True iff x agrees with every fixed coordinate.
    bool consistent(const bitvec& x) const {
        const auto& fw = fixed_.words();
        const auto& vw = values_.words();
        const auto& xw = x.words();
        for (std::size_t j = 0; j < fw.size(); ++j)
            if (((xw[j] ^ vw[j]) & fw[j]) != 0) return false;
        return true;
    }

    std::string to_string() const {
        std::string s(dimension(), '*');
        for (std::size_t i = 0; i < dimension(); ++i)
            if (fixed_.get(i)) s[i] = values_.get(i) ? '1' : '0';
        return s;
    }

    friend bool operator==(const partial_assignment& a, const partial_assignment& b) {
        return a.fixed_ == b.fixed_ && a.values_ == b.values_;
    }

private:
    bitvec fixed_;
    bitvec values_;
};

/// Union of two assignments with disjoint supports; throws on any overlap.
inline partial_assignment merge(const partial_assignment& a, const partial_assignment& b) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("merge: dimension mismatch");
    partial_assignment out(a);
    for (std::size_t i = 0; i < b.dimension(); ++i)
        if (b.is_fixed(i)) out.fix(i, b.value(i));
    return out;
}

/// S_w: the examples of S consistent with w, in their original order.
inline dataset restrict_dataset(const dataset& data, const partial_assignment& w) {
    if (data.dimension() != w.dimension())
        throw std::invalid_argument("restrict_dataset: dimension mismatch");
    dataset out(data.dimension());
    for (const auto& ex : data.examples())
        if (w.consistent(ex.bits)) out.push_back(ex);
    return out;
}

} // namespace id3lab
