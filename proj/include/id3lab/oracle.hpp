#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "id3lab/assignment.hpp"
#include "id3lab/distribution.hpp"
#include "id3lab/impurity.hpp"
#include "id3lab/target.hpp"
#include "id3lab/tree.hpp"

namespace id3lab {

namespace detail {

/// Throws if some coordinate fixed by w has probability 0 under D, i.e.
/// Pr(X_w) = 0 and conditioning on the subcube is undefined.
inline void require_reachable(const product_distribution& dist,
                              const partial_assignment& w) {
    if (dist.dimension() != w.dimension())
        throw std::invalid_argument("oracle: dimension mismatch");
    for (std::size_t i = 0; i < w.dimension(); ++i) {
        if (!w.is_fixed(i)) continue;
        const double p = dist.p(i);
        if ((w.value(i) && p == 0.0) || (!w.value(i) && p == 1.0))
            throw std::invalid_argument(
                "oracle: subcube has probability zero (coordinate " +
                std::to_string(i) + ")");
    }
}

/// Enumerates the support patterns of f consistent with w, calling
/// fn(pattern, weight) with weight = the conditional probability of the
/// pattern given X_w (free support coordinates contribute p or 1-p, fixed
/// ones contribute 1). Weights over all visited patterns sum to 1.
template <typename Fn>
void for_each_support_pattern(const product_distribution& dist,
                              const target_function& f,
                              const partial_assignment& w, Fn&& fn) {
    const auto& support = f.support();
    const std::size_t k = support.size();

    std::uint32_t base = 0;
    std::vector<std::size_t> free_pos;
    for (std::size_t j = 0; j < k; ++j) {
        if (w.is_fixed(support[j])) {
            if (w.value(support[j])) base |= (1u << j);
        } else {
            free_pos.push_back(j);
        }
    }

    const std::size_t combos = std::size_t{1} << free_pos.size();
    for (std::size_t b = 0; b < combos; ++b) {
        std::uint32_t pattern = base;
        double weight = 1.0;
        for (std::size_t t = 0; t < free_pos.size(); ++t) {
            const double p = dist.p(support[free_pos[t]]);
            if (b & (std::size_t{1} << t)) {
                pattern |= (1u << free_pos[t]);
                weight *= p;
            } else {
                weight *= (1.0 - p);
            }
        }
        fn(pattern, weight);
    }
}

} // namespace detail

/// One cell of the restricted junta subcube: a full assignment to the
/// support and its conditional probability mass given X_w.
struct subcube_weight {
    std::uint32_t pattern = 0;
    double weight = 0.0;
};

/// The conditional distribution D_w projected onto the support patterns.
/// Weights sum to 1 (fixed coordinates contribute the consistency indicator,
/// free ones their Bernoulli factor).
inline std::vector<subcube_weight> subcube_weights(const product_distribution& dist,
                                                   const target_function& f,
                                                   const partial_assignment& w) {
    detail::require_reachable(dist, w);
    std::vector<subcube_weight> cells;
    detail::for_each_support_pattern(dist, f, w,
                                     [&](std::uint32_t pattern, double weight) {
                                         cells.push_back({pattern, weight});
                                     });
    return cells;
}

/// Pr_{D_w}(y = 1), exactly, by enumerating the junta subcube.
inline double exact_label_prob(const product_distribution& dist,
                               const target_function& f,
                               const partial_assignment& w) {
    detail::require_reachable(dist, w);
    double prob = 0.0;
    detail::for_each_support_pattern(dist, f, w,
                                     [&](std::uint32_t pattern, double weight) {
                                         if (f.table()[pattern]) prob += weight;
                                     });
    // The weights sum to 1 only up to rounding; saturate the ulp overshoot.
    return std::min(1.0, std::max(0.0, prob));
}

/// True iff y is constant over the positive-probability part of the subcube.
/// label_out receives the constant label when pure.
inline bool exact_subcube_pure(const product_distribution& dist,
                               const target_function& f,
                               const partial_assignment& w,
                               std::uint8_t& label_out) {
    detail::require_reachable(dist, w);
    bool seen = false;
    bool pure = true;
    std::uint8_t first = 0;
    detail::for_each_support_pattern(dist, f, w,
                                     [&](std::uint32_t pattern, double weight) {
                                         if (weight <= 0.0) return;
                                         const std::uint8_t label = f.table()[pattern];
                                         if (!seen) {
                                             first = label;
                                             seen = true;
                                         } else if (label != first) {
                                             pure = false;
                                         }
                                     });
    label_out = first;
    return pure;
}

/// I(D_w, i) = E[y] E[x_i] - E[y x_i], exactly. Zero for coordinates outside
/// the support: x_i and y are then independent under the product distribution.
inline double exact_I(const product_distribution& dist, const target_function& f,
                      const partial_assignment& w, std::uint32_t feature) {
    detail::require_reachable(dist, w);
    if (feature >= dist.dimension())
        throw std::invalid_argument("exact_I: feature index out of range");
    if (w.is_fixed(feature))
        throw std::invalid_argument("exact_I: feature " + std::to_string(feature) +
                                    " is fixed by w");
    if (!f.in_support(feature)) return 0.0;

    const double pi = dist.p(feature);
    const std::size_t pos = f.support_position(feature);
    double label_prob = 0.0;
    double joint = 0.0; // Pr(y = 1 and x_i = 1 | X_w)
    detail::for_each_support_pattern(dist, f, w,
                                     [&](std::uint32_t pattern, double weight) {
                                         if (!f.table()[pattern]) return;
                                         label_prob += weight;
                                         if (pattern & (1u << pos)) joint += weight;
                                     });
    return label_prob * pi - joint;
}

/// Gain(D_w, i) with exact conditional probabilities.
inline double exact_gain(const product_distribution& dist, const target_function& f,
                         const partial_assignment& w, std::uint32_t feature,
                         const impurity_spec& spec) {
    detail::require_reachable(dist, w);
    if (feature >= dist.dimension())
        throw std::invalid_argument("exact_gain: feature index out of range");
    if (w.is_fixed(feature))
        throw std::invalid_argument("exact_gain: feature " + std::to_string(feature) +
                                    " is fixed by w");
    // Outside the support the conditionals equal the unconditional probability.
    if (!f.in_support(feature)) return 0.0;

    const double pi = dist.p(feature);
    if (pi == 0.0 || pi == 1.0) return 0.0;
    const double b = exact_label_prob(dist, f, w);
    const double b1 = exact_label_prob(dist, f, w.with(feature, true));
    const double b0 = exact_label_prob(dist, f, w.with(feature, false));
    return evaluate_impurity(spec, b) -
           (pi * evaluate_impurity(spec, b1) + (1.0 - pi) * evaluate_impurity(spec, b0));
}

namespace detail {

inline double subtree_loss(const product_distribution& dist, const target_function& f,
                           const decision_tree& tree, std::int32_t idx,
                           const partial_assignment& path, double reach) {
    const auto& nd = tree.at(idx);
    if (nd.is_leaf()) {
        double mis = 0.0;
        for_each_support_pattern(dist, f, path,
                                 [&](std::uint32_t pattern, double weight) {
                                     if (f.table()[pattern] != nd.label) mis += weight;
                                 });
        return reach * mis;
    }
    const auto feature = static_cast<std::size_t>(nd.feature);
    if (feature >= dist.dimension())
        throw std::invalid_argument("exact_tree_loss: tree references feature " +
                                    std::to_string(feature) + " >= n");
    const double p = dist.p(feature);
    return subtree_loss(dist, f, tree, nd.zero, path.with(feature, false),
                        reach * (1.0 - p)) +
           subtree_loss(dist, f, tree, nd.one, path.with(feature, true), reach * p);
}

} // namespace detail

/// L_D(T) = Pr(T(x) != f(x)), exactly: sums Pr(reach leaf) times the
/// conditional mislabel probability over the junta subcube at each leaf.
inline double exact_tree_loss(const product_distribution& dist,
                              const target_function& f, const decision_tree& tree) {
    if (dist.dimension() != f.dimension())
        throw std::invalid_argument("exact_tree_loss: dimension mismatch");
    partial_assignment path(dist.dimension());
    return detail::subtree_loss(dist, f, tree, tree.root(), path, 1.0);
}

/// |I(D_w, j)| for a parity target in closed form:
/// p_j (1-p_j) 2^{k'-1} prod over the other free parity coordinates of
/// |p_i - 1/2|, where k' counts the free parity coordinates.
inline double parity_I_closed_form(const product_distribution& dist,
                                   const std::vector<std::uint32_t>& support,
                                   const partial_assignment& w, std::uint32_t j) {
    bool j_in_support = false;
    for (auto idx : support) j_in_support |= (idx == j);
    if (!j_in_support)
        throw std::invalid_argument("parity_I_closed_form: j not in the parity support");
    if (w.is_fixed(j))
        throw std::invalid_argument("parity_I_closed_form: j is fixed by w");

    double value = dist.p(j) * (1.0 - dist.p(j));
    for (auto idx : support) {
        if (idx == j || w.is_fixed(idx)) continue;
        value *= 2.0 * std::abs(dist.p(idx) - 0.5);
    }
    return value;
}

/// The guaranteed correlation floor alpha^2 (2c)^(k-1) for parities over an
/// (alpha, c)-distribution.
inline double parity_lower_bound(double alpha, double c, std::size_t k) {
    if (k == 0) throw std::invalid_argument("parity_lower_bound: k must be >= 1");
    return alpha * alpha * std::pow(2.0 * c, static_cast<double>(k) - 1.0);
}

/// Result of scanning every restriction w with supp(w) inside the target's
/// support: each subcube must be label-pure or keep every free support
/// coordinate visibly correlated with the label.
struct basic_conditions_report {
    double epsilon = 0.0;        // requested threshold (0 = none requested)
    double epsilon_star = 0.0;   // largest threshold that holds; +inf if all pure
    bool holds = false;          // epsilon_star >= max(epsilon, tiny) and > 0
    double gain_floor = 0.0;     // (beta/2) * epsilon_star^2, from the impurity
    std::size_t subcube_count = 0;
    std::size_t pure_count = 0;
    std::size_t skipped_zero_prob = 0;
    std::string worst_w;         // subcube attaining epsilon_star
};

/// Enumerates all 3^k restrictions supported in f's support and returns the
/// largest epsilon for which every impure subcube has min |I(D_w, i)| >=
/// epsilon over its free support coordinates (0 if some impure subcube has an
/// uncorrelated free coordinate, +inf if every subcube is pure).
inline basic_conditions_report verify_basic_conditions(const product_distribution& dist,
                                                       const target_function& f,
                                                       const impurity_spec& spec,
                                                       double epsilon = 0.0) {
    const auto& support = f.support();
    const std::size_t k = support.size();

    basic_conditions_report report;
    report.epsilon = epsilon;
    report.epsilon_star = std::numeric_limits<double>::infinity();

    std::size_t total = 1;
    for (std::size_t j = 0; j < k; ++j) total *= 3;

    for (std::size_t code = 0; code < total; ++code) {
        partial_assignment w(dist.dimension());
        std::size_t rem = code;
        bool reachable = true;
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t trit = rem % 3;
            rem /= 3;
            if (trit == 0) continue;
            const bool value = (trit == 2);
            const double p = dist.p(support[j]);
            if ((value && p == 0.0) || (!value && p == 1.0)) {
                reachable = false;
                break;
            }
            w.fix(support[j], value);
        }
        if (!reachable) {
            ++report.skipped_zero_prob;
            continue;
        }
        ++report.subcube_count;

        std::uint8_t label = 0;
        if (exact_subcube_pure(dist, f, w, label)) {
            ++report.pure_count;
            continue;
        }
        double weakest = std::numeric_limits<double>::infinity();
        for (auto idx : support) {
            if (w.is_fixed(idx)) continue;
            weakest = std::min(weakest, std::abs(exact_I(dist, f, w, idx)));
        }
        if (weakest < report.epsilon_star) {
            report.epsilon_star = weakest;
            report.worst_w = w.to_string();
        }
    }

    report.holds = report.epsilon_star > 0.0 &&
                   (epsilon <= 0.0 || report.epsilon_star >= epsilon);
    if (std::isfinite(report.epsilon_star))
        report.gain_floor = 0.5 * spec.beta * report.epsilon_star * report.epsilon_star;
    else
        report.gain_floor = std::numeric_limits<double>::infinity();
    return report;
}

} // namespace id3lab
