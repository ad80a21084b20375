#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "id3lab/bitvec.hpp"

namespace id3lab {

/// One labelled input vector.
struct example {
    bitvec bits;
    std::uint8_t label = 0;

    friend bool operator==(const example& a, const example& b) {
        return a.label == b.label && a.bits == b.bits;
    }
};

/// A sample of examples over {0,1}^n with binary labels. Every example has
/// exactly n bits; the constructor and push_back enforce this.
class dataset {
public:
    explicit dataset(std::size_t n) : n_(n) {}

    dataset(std::size_t n, std::vector<example> examples) : n_(n) {
        examples_.reserve(examples.size());
        for (auto& ex : examples) push_back(std::move(ex));
    }

    std::size_t dimension() const { return n_; }
    std::size_t size() const { return examples_.size(); }
    bool empty() const { return examples_.empty(); }

    const example& operator[](std::size_t i) const { return examples_[i]; }
    const std::vector<example>& examples() const { return examples_; }

    void push_back(example ex) {
        if (ex.bits.size() != n_)
            throw std::invalid_argument("dataset: example has " +
                                        std::to_string(ex.bits.size()) +
                                        " bits, expected " + std::to_string(n_));
        examples_.push_back(std::move(ex));
    }

    void reserve(std::size_t m) { examples_.reserve(m); }

    friend bool operator==(const dataset& a, const dataset& b) {
        return a.n_ == b.n_ && a.examples_ == b.examples_;
    }

private:
    std::size_t n_;
    std::vector<example> examples_;
};

/// Text format: header `n=<n> m=<m>`, then one line per example consisting of
/// an n-character '0'/'1' string, a comma, and the label character.
/// write/read round-trip byte-identically.
inline void write_dataset(std::ostream& os, const dataset& data) {
    os << "n=" << data.dimension() << " m=" << data.size() << "\n";
    for (const auto& ex : data.examples())
        os << ex.bits.to_string() << ',' << (ex.label ? '1' : '0') << "\n";
}

inline std::string dataset_to_string(const dataset& data) {
    std::ostringstream os;
    write_dataset(os, data);
    return os.str();
}

inline dataset read_dataset(std::istream& is) {
    std::string header;
    if (!std::getline(is, header))
        throw std::invalid_argument("dataset: empty input");
    std::size_t n = 0, m = 0;
    if (std::sscanf(header.c_str(), "n=%zu m=%zu", &n, &m) != 2)
        throw std::invalid_argument("dataset: malformed header '" + header + "'");

    dataset data(n);
    data.reserve(m);
    std::string line;
    for (std::size_t row = 0; row < m; ++row) {
        if (!std::getline(is, line))
            throw std::invalid_argument("dataset: expected " + std::to_string(m) +
                                        " rows, got " + std::to_string(row));
        if (line.size() != n + 2 || line[n] != ',')
            throw std::invalid_argument("dataset: malformed row '" + line + "'");
        example ex;
        ex.bits = bitvec::from_string(line.substr(0, n));
        const char lbl = line[n + 1];
        if (lbl != '0' && lbl != '1')
            throw std::invalid_argument("dataset: invalid label '" +
                                        std::string(1, lbl) + "'");
        ex.label = (lbl == '1');
        data.push_back(std::move(ex));
    }
    return data;
}

inline dataset dataset_from_string(const std::string& text) {
    std::istringstream is(text);
    return read_dataset(is);
}

} // namespace id3lab
