#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace id3lab {

/// Fixed-length bit vector packed into 64-bit words. Supports n up to 2^16.
class bitvec {
public:
    bitvec() = default;

    explicit bitvec(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    /// Parses a '0'/'1' string, index 0 first.
    static bitvec from_string(const std::string& s) {
        bitvec v(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') {
                v.set(i, true);
            } else if (s[i] != '0') {
                throw std::invalid_argument("bitvec: invalid character '" +
                                            std::string(1, s[i]) + "'");
            }
        }
        return v;
    }

    std::size_t size() const { return n_; }

    bool get(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1ULL;
    }

    void set(std::size_t i, bool value) {
        const std::uint64_t mask = 1ULL << (i & 63);
        if (value) {
            words_[i >> 6] |= mask;
        } else {
            words_[i >> 6] &= ~mask;
        }
    }

    std::string to_string() const {
        std::string s(n_, '0');
        for (std::size_t i = 0; i < n_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    friend bool operator==(const bitvec& a, const bitvec& b) {
        return a.n_ == b.n_ && a.words_ == b.words_;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace id3lab
