#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "id3lab/bitvec.hpp"

namespace id3lab {

/// Hard cap on junta arity: all exact computations enumerate the 2^k subcube.
inline constexpr std::size_t max_junta_arity = 25;

/// A boolean function on n bits that depends only on the coordinates in
/// `support` (strictly increasing). `table` has 2^k entries, k = |support|,
/// indexed by the support bits with the lowest support index as the least
/// significant bit of the table index.
class target_function {
public:
    target_function(std::size_t n, std::vector<std::uint32_t> support,
                    std::vector<std::uint8_t> table)
        : n_(n), support_(std::move(support)), table_(std::move(table)) {
        if (support_.size() > max_junta_arity)
            throw std::invalid_argument("target_function: arity " +
                                        std::to_string(support_.size()) +
                                        " exceeds enumeration limit " +
                                        std::to_string(max_junta_arity));
        if (!std::is_sorted(support_.begin(), support_.end()) ||
            std::adjacent_find(support_.begin(), support_.end()) != support_.end())
            throw std::invalid_argument("target_function: support must be strictly increasing");
        for (std::uint32_t idx : support_)
            if (idx >= n_)
                throw std::invalid_argument("target_function: support index " +
                                            std::to_string(idx) + " >= n");
        if (table_.size() != (std::size_t{1} << support_.size()))
            throw std::invalid_argument("target_function: table size must be 2^k");
        for (std::uint8_t v : table_)
            if (v > 1) throw std::invalid_argument("target_function: table entries must be 0/1");
    }

    std::size_t dimension() const { return n_; }
    std::size_t arity() const { return support_.size(); }
    const std::vector<std::uint32_t>& support() const { return support_; }
    const std::vector<std::uint8_t>& table() const { return table_; }

    bool in_support(std::uint32_t feature) const {
        return std::binary_search(support_.begin(), support_.end(), feature);
    }

    /// Position of `feature` within the support, or npos.
    std::size_t support_position(std::uint32_t feature) const {
        auto it = std::lower_bound(support_.begin(), support_.end(), feature);
        if (it == support_.end() || *it != feature) return npos;
        return static_cast<std::size_t>(it - support_.begin());
    }

    /// Packs the support bits of `bits` into a table index.
    std::uint32_t support_pattern(const bitvec& bits) const {
        std::uint32_t pattern = 0;
        for (std::size_t j = 0; j < support_.size(); ++j)
            if (bits.get(support_[j])) pattern |= (1u << j);
        return pattern;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::size_t n_;
    std::vector<std::uint32_t> support_;
    std::vector<std::uint8_t> table_;
};

inline std::uint8_t evaluate_target(const target_function& f, const bitvec& bits) {
    if (bits.size() != f.dimension())
        throw std::invalid_argument("evaluate_target: input has " +
                                    std::to_string(bits.size()) +
                                    " bits, expected " +
                                    std::to_string(f.dimension()));
    return f.table()[f.support_pattern(bits)];
}

/// Parity over the coordinates in J: label 1 iff an odd number of them is set.
inline target_function make_parity(std::size_t n, std::vector<std::uint32_t> support) {
    if (support.empty())
        throw std::invalid_argument("make_parity: support must be nonempty");
    std::sort(support.begin(), support.end());
    const std::size_t k = support.size();
    std::vector<std::uint8_t> table(std::size_t{1} << k);
    for (std::uint32_t pattern = 0; pattern < table.size(); ++pattern)
        table[pattern] = static_cast<std::uint8_t>(std::popcount(pattern) & 1);
    return target_function(n, std::move(support), std::move(table));
}

inline bool is_constant(const target_function& f) {
    const auto& table = f.table();
    return std::all_of(table.begin(), table.end(),
                       [&](std::uint8_t v) { return v == table[0]; });
}

} // namespace id3lab
