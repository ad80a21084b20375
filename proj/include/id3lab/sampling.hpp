#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "id3lab/dataset.hpp"
#include "id3lab/distribution.hpp"
#include "id3lab/rng.hpp"
#include "id3lab/target.hpp"

namespace id3lab {

/// m i.i.d. examples: bit i ~ Bernoulli(p_i), label = f(x). Deterministic
/// given the seed.
inline dataset sample_dataset(const product_distribution& dist,
                              const target_function& f, std::size_t m,
                              std::uint64_t seed) {
    if (dist.dimension() != f.dimension())
        throw std::invalid_argument("sample_dataset: dimension mismatch");
    if (m < 1) throw std::invalid_argument("sample_dataset: m must be >= 1");

    rng gen(seed);
    const std::size_t n = dist.dimension();
    dataset data(n);
    data.reserve(m);
    for (std::size_t row = 0; row < m; ++row) {
        example ex;
        ex.bits = bitvec(n);
        for (std::size_t i = 0; i < n; ++i)
            if (gen.bernoulli(dist.p(i))) ex.bits.set(i, true);
        ex.label = evaluate_target(f, ex.bits);
        data.push_back(std::move(ex));
    }
    return data;
}

/// Perturbation recipe: p_i = base_i + Delta_i with Delta_i ~ Uni([-c, c]).
/// The base probabilities must sit in (alpha + c, 1 - alpha - c) so that the
/// perturbed values always land in (alpha, 1 - alpha).
struct smoothing_spec {
    double alpha = 0.0;
    double c = 0.0;
    std::vector<double> base;

    void validate() const {
        if (!(alpha > 0.0)) throw std::invalid_argument("smoothing_spec: alpha must be > 0");
        if (!(c >= 0.0)) throw std::invalid_argument("smoothing_spec: c must be >= 0");
        if (!(alpha + c < 0.5))
            throw std::invalid_argument("smoothing_spec: alpha + c must be < 1/2");
        for (double b : base)
            if (!(b > alpha + c && b < 1.0 - alpha - c))
                throw std::invalid_argument(
                    "smoothing_spec: base probability " + std::to_string(b) +
                    " outside (" + std::to_string(alpha + c) + ", " +
                    std::to_string(1.0 - alpha - c) + ")");
    }
};

/// Draws the perturbed distribution. Every output lands strictly inside
/// (alpha, 1 - alpha).
inline product_distribution smoothed_distribution(const smoothing_spec& spec,
                                                  std::uint64_t seed) {
    spec.validate();
    rng gen(seed);
    std::vector<double> probs(spec.base.size());
    for (std::size_t i = 0; i < probs.size(); ++i)
        probs[i] = spec.base[i] + gen.uniform_sym(spec.c);
    return product_distribution(std::move(probs));
}

/// Checks |p_i - 1/2| > c and p_i in (alpha, 1 - alpha) on the coordinates in
/// `support` (strict inequalities). With check_all set, every coordinate of
/// the distribution must qualify instead.
inline bool validate_alpha_c(const product_distribution& dist,
                             const std::vector<std::uint32_t>& support,
                             double alpha, double c, bool check_all = false) {
    auto ok = [&](std::size_t i) {
        const double p = dist.p(i);
        return std::abs(p - 0.5) > c && p > alpha && p < 1.0 - alpha;
    };
    if (check_all) {
        for (std::size_t i = 0; i < dist.dimension(); ++i)
            if (!ok(i)) return false;
        return true;
    }
    for (auto i : support)
        if (i >= dist.dimension() || !ok(i)) return false;
    return true;
}

/// Sample-size calculators from the learnability bounds. The hidden
/// proportionality constant is set to 1 and the results are advisory,
/// order-of-magnitude figures: the experiment harness treats m as a free
/// knob. Natural logarithm throughout.
struct sample_size {
    std::int64_t m = 0;
    bool saturated = false; // the formula overflowed; m holds the sentinel
};

namespace detail {

inline sample_size saturate(double value) {
    sample_size out;
    if (!std::isfinite(value) ||
        value >= static_cast<double>(std::numeric_limits<std::int64_t>::max())) {
        out.m = std::numeric_limits<std::int64_t>::max();
        out.saturated = true;
    } else {
        out.m = static_cast<std::int64_t>(std::ceil(value));
    }
    return out;
}

} // namespace detail

inline double sample_size_basic_raw(double beta, double gamma, double eps,
                                    double alpha, std::size_t k, std::size_t n,
                                    double delta) {
    if (!(beta > 0 && gamma > 0 && eps > 0 && alpha > 0 && k >= 1 && n >= 1 && delta > 0))
        throw std::invalid_argument("sample_size_basic: parameters must be positive");
    return std::pow(beta, -2.0) * gamma * gamma * std::pow(eps, -4.0) *
           std::pow(alpha, -2.0 * static_cast<double>(k)) *
           static_cast<double>(k) * std::log(static_cast<double>(n) / delta);
}

inline sample_size sample_size_basic(double beta, double gamma, double eps,
                                     double alpha, std::size_t k, std::size_t n,
                                     double delta) {
    return detail::saturate(sample_size_basic_raw(beta, gamma, eps, alpha, k, n, delta));
}

inline double sample_size_parity_raw(double alpha, double c, double beta,
                                     double gamma, std::size_t k, std::size_t n,
                                     double delta) {
    if (!(alpha > 0 && c > 0 && c < 0.5 && beta > 0 && gamma > 0 && k >= 1 &&
          n >= 1 && delta > 0))
        throw std::invalid_argument("sample_size_parity: invalid parameters");
    return std::pow(beta, -2.0) * gamma * gamma *
           std::pow(2.0 * c, -4.0 * static_cast<double>(k) - 4.0) *
           std::pow(alpha, -2.0 * static_cast<double>(k) - 8.0) *
           static_cast<double>(k) * std::log(static_cast<double>(n) / delta);
}

inline sample_size sample_size_parity(double alpha, double c, double beta,
                                      double gamma, std::size_t k, std::size_t n,
                                      double delta) {
    return detail::saturate(sample_size_parity_raw(alpha, c, beta, gamma, k, n, delta));
}

inline double sample_size_junta_raw(double alpha, double c, double beta,
                                    double gamma, std::size_t k, std::size_t n,
                                    double delta1, double delta2) {
    if (!(alpha > 0 && c > 0 && beta > 0 && gamma > 0 && k >= 1 && n >= 1 &&
          delta1 > 0 && delta2 > 0))
        throw std::invalid_argument("sample_size_junta: invalid parameters");
    return std::pow(beta, -2.0) * gamma * gamma *
           std::pow(c, -8.0 * static_cast<double>(k)) * std::pow(delta1, -8.0) *
           std::pow(alpha, -2.0 * static_cast<double>(k) - 8.0) *
           static_cast<double>(k) * std::log(static_cast<double>(n) / delta2);
}

inline sample_size sample_size_junta(double alpha, double c, double beta,
                                     double gamma, std::size_t k, std::size_t n,
                                     double delta1, double delta2) {
    return detail::saturate(
        sample_size_junta_raw(alpha, c, beta, gamma, k, n, delta1, delta2));
}

} // namespace id3lab
