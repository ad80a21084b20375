#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace id3lab {

/// Product distribution over {0,1}^n: coordinate i is Bernoulli(probs[i]),
/// independently of the others.
struct product_distribution {
    std::vector<double> probs;

    product_distribution() = default;

    explicit product_distribution(std::vector<double> p) : probs(std::move(p)) {
        for (double q : probs)
            if (!(q >= 0.0 && q <= 1.0))
                throw std::invalid_argument("product_distribution: p=" +
                                            std::to_string(q) +
                                            " outside [0,1]");
    }

    /// All n coordinates share the same parameter p.
    static product_distribution constant(std::size_t n, double p) {
        return product_distribution(std::vector<double>(n, p));
    }

    static product_distribution uniform(std::size_t n) { return constant(n, 0.5); }

    std::size_t dimension() const { return probs.size(); }
    double p(std::size_t i) const { return probs[i]; }
};

} // namespace id3lab
