#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "id3lab/assignment.hpp"
#include "id3lab/rng.hpp"
#include "id3lab/target.hpp"

namespace id3lab {

inline constexpr std::size_t max_fourier_arity = 20;

namespace detail {

inline double eval_multilinear(const std::vector<double>& coeffs,
                               const std::vector<double>& vars) {
    double value = 0.0;
    for (std::size_t mask = 0; mask < coeffs.size(); ++mask) {
        if (coeffs[mask] == 0.0) continue;
        double term = coeffs[mask];
        for (std::size_t rest = mask; rest != 0; rest &= rest - 1)
            term *= vars[static_cast<std::size_t>(std::countr_zero(rest))];
        value += term;
    }
    return value;
}

} // namespace detail

/// Expansion of a k-bit boolean function over the +/-1 character basis
/// chi_I(x) = prod_{i in I} (2 x_i - 1), coefficients dense over bitmask
/// subsets: f(x) = sum_I alpha_I chi_I(x).
struct fourier_expansion {
    std::size_t arity = 0;
    std::vector<double> coeffs; // index = subset bitmask, size 2^arity

    double alpha(std::size_t mask) const { return coeffs[mask]; }

    /// Value at a boolean input given as a bit pattern.
    double evaluate_pattern(std::uint32_t pattern) const {
        std::vector<double> vars(arity);
        for (std::size_t i = 0; i < arity; ++i)
            vars[i] = (pattern & (1u << i)) ? 1.0 : -1.0;
        return detail::eval_multilinear(coeffs, vars);
    }

    /// Value of the multilinear extension at real character values
    /// vars[i] = 2 x_i - 1.
    double evaluate_chi(const std::vector<double>& vars) const {
        return detail::eval_multilinear(coeffs, vars);
    }
};

/// Polynomial sum_M c_M prod_{i in M} v_i, dense over bitmask monomials.
/// The variable semantics depend on provenance: character values 2x-1 for
/// the split polynomials, smoothing offsets Delta after shifting.
struct multilinear_polynomial {
    std::size_t arity = 0;
    std::vector<double> coeffs;

    double evaluate(const std::vector<double>& vars) const {
        return detail::eval_multilinear(coeffs, vars);
    }

    std::size_t degree() const {
        std::size_t deg = 0;
        for (std::size_t mask = 0; mask < coeffs.size(); ++mask)
            if (coeffs[mask] != 0.0)
                deg = std::max(deg, static_cast<std::size_t>(std::popcount(mask)));
        return deg;
    }

    bool is_zero() const {
        for (double c : coeffs)
            if (c != 0.0) return false;
        return true;
    }
};

/// alpha_I = 2^-k sum_x chi_I(x) f(x) for every subset I, via the fast
/// Walsh-Hadamard transform. Every nonzero coefficient is an integer
/// multiple of 2^-k.
inline fourier_expansion fourier_coeffs(const std::vector<std::uint8_t>& table) {
    const std::size_t size = table.size();
    if (size == 0 || (size & (size - 1)) != 0)
        throw std::invalid_argument("fourier_coeffs: table size must be a power of two");
    const auto k = static_cast<std::size_t>(std::countr_zero(size));
    if (k > max_fourier_arity)
        throw std::invalid_argument("fourier_coeffs: arity " + std::to_string(k) +
                                    " exceeds limit " +
                                    std::to_string(max_fourier_arity));

    std::vector<double> a(size);
    for (std::size_t x = 0; x < size; ++x) a[x] = table[x];
    for (std::size_t len = 1; len < size; len <<= 1) {
        for (std::size_t block = 0; block < size; block += len << 1) {
            for (std::size_t j = block; j < block + len; ++j) {
                const double u = a[j];
                const double v = a[j + len];
                a[j] = u + v;
                a[j + len] = u - v;
            }
        }
    }
    // The transform accumulates (-1)^{|I & x|}; our characters count zeros,
    // which flips the sign on odd-sized subsets.
    const double scale = 1.0 / static_cast<double>(size);
    fourier_expansion out;
    out.arity = k;
    out.coeffs.resize(size);
    for (std::size_t mask = 0; mask < size; ++mask) {
        const double sign = (std::popcount(mask) & 1) ? -1.0 : 1.0;
        out.coeffs[mask] = sign * a[mask] * scale;
    }
    return out;
}

/// The truth table of f with the coordinates fixed by w substituted in,
/// over the remaining (free) support coordinates in ascending order.
struct restricted_target {
    std::vector<std::uint8_t> table;
    std::vector<std::uint32_t> coords; // original indices of the free coordinates
};

inline restricted_target restrict_target(const target_function& f,
                                         const partial_assignment& w) {
    if (w.dimension() != f.dimension())
        throw std::invalid_argument("restrict_target: dimension mismatch");
    for (std::size_t i = 0; i < w.dimension(); ++i)
        if (w.is_fixed(i) && !f.in_support(static_cast<std::uint32_t>(i)))
            throw std::invalid_argument("restrict_target: w fixes coordinate " +
                                        std::to_string(i) +
                                        " outside the support");

    const auto& support = f.support();
    std::uint32_t base = 0;
    std::vector<std::size_t> free_pos;
    restricted_target out;
    for (std::size_t j = 0; j < support.size(); ++j) {
        if (w.is_fixed(support[j])) {
            if (w.value(support[j])) base |= (1u << j);
        } else {
            free_pos.push_back(j);
            out.coords.push_back(support[j]);
        }
    }
    out.table.resize(std::size_t{1} << free_pos.size());
    for (std::uint32_t b = 0; b < out.table.size(); ++b) {
        std::uint32_t pattern = base;
        for (std::size_t t = 0; t < free_pos.size(); ++t)
            if (b & (1u << t)) pattern |= (1u << free_pos[t]);
        out.table[b] = f.table()[pattern];
    }
    return out;
}

/// Splits F(x) = (2 x_i - 1) g(x) + h(x): g collects the coefficients of
/// subsets containing i (with i removed), h the rest. Neither polynomial
/// mentions coordinate i.
inline std::pair<multilinear_polynomial, multilinear_polynomial>
split_on_coordinate(const fourier_expansion& expansion, std::size_t i) {
    if (i >= expansion.arity)
        throw std::invalid_argument("split_on_coordinate: coordinate out of range");
    const std::size_t size = expansion.coeffs.size();
    const std::size_t bit = std::size_t{1} << i;

    multilinear_polynomial g, h;
    g.arity = h.arity = expansion.arity;
    g.coeffs.assign(size, 0.0);
    h.coeffs.assign(size, 0.0);
    for (std::size_t mask = 0; mask < size; ++mask) {
        if (mask & bit) {
            g.coeffs[mask & ~bit] = expansion.coeffs[mask];
        } else {
            h.coeffs[mask] = expansion.coeffs[mask];
        }
    }
    return {std::move(g), std::move(h)};
}

/// Substitutes v_j = (2 base[j] - 1) + 2 Delta_j into a polynomial over
/// character values, producing a polynomial in the offsets Delta. For the
/// maximal monomial M of g this yields beta_M = 2^|M| g_M.
inline multilinear_polynomial shift_polynomial(const multilinear_polynomial& g,
                                               const std::vector<double>& base) {
    if (base.size() < g.arity)
        throw std::invalid_argument("shift_polynomial: base probabilities too short");
    multilinear_polynomial out = g;
    for (std::size_t v = 0; v < out.arity; ++v) {
        const std::size_t bit = std::size_t{1} << v;
        const double centre = 2.0 * base[v] - 1.0;
        for (std::size_t mask = 0; mask < out.coeffs.size(); ++mask) {
            if (!(mask & bit)) continue;
            const double c = out.coeffs[mask];
            if (c == 0.0) continue;
            out.coeffs[mask & ~bit] += c * centre;
            out.coeffs[mask] = 2.0 * c;
        }
    }
    return out;
}

/// Monte-Carlo estimate of Pr(|g0(Delta)| <= eps) for Delta uniform on
/// [-c, c]^arity.
inline double anticoncentration_estimate(const multilinear_polynomial& g0, double c,
                                         double eps, std::size_t trials,
                                         std::uint64_t seed) {
    if (trials < 1)
        throw std::invalid_argument("anticoncentration_estimate: trials must be >= 1");
    rng gen(seed);
    std::vector<double> delta(g0.arity);
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        for (auto& d : delta) d = gen.uniform_sym(c);
        if (std::abs(g0.evaluate(delta)) <= eps) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

/// The smoothed-analysis correlation floor 2 alpha^2 delta^2 (c/2)^(2k).
inline double junta_I_lower_bound(double alpha, double c, std::size_t k, double delta) {
    if (k == 0) throw std::invalid_argument("junta_I_lower_bound: k must be >= 1");
    return 2.0 * alpha * alpha * delta * delta *
           std::pow(0.5 * c, 2.0 * static_cast<double>(k));
}

} // namespace id3lab
