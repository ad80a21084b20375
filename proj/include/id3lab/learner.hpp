#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "id3lab/dataset.hpp"
#include "id3lab/impurity.hpp"
#include "id3lab/oracle.hpp"
#include "id3lab/rng.hpp"
#include "id3lab/stats.hpp"
#include "id3lab/tree.hpp"

namespace id3lab {

enum class tie_break { lowest_index, seeded_random };

inline tie_break tie_break_from_string(const std::string& name) {
    if (name == "lowest_index") return tie_break::lowest_index;
    if (name == "seeded_random") return tie_break::seeded_random;
    throw std::invalid_argument("unknown tie break '" + name +
                                "' (expected lowest_index|seeded_random)");
}

inline std::string to_string(tie_break t) {
    return t == tie_break::lowest_index ? "lowest_index" : "seeded_random";
}

/// Resolves everything the recursive construction leaves open: how equal
/// gains are broken, what label an empty branch receives, and which impurity
/// drives the gain. Given (S, A, seed) the policy fully determines the tree.
struct learner_policy {
    tie_break tie = tie_break::lowest_index;
    impurity_spec impurity = make_impurity(impurity_id::gini);
    // Empty branches always take the parent sample's majority label (ties -> 0).
};

inline std::vector<std::uint32_t> full_feature_set(std::size_t n) {
    std::vector<std::uint32_t> features(n);
    std::iota(features.begin(), features.end(), 0u);
    return features;
}

namespace detail {

inline std::vector<std::uint32_t> checked_feature_set(std::vector<std::uint32_t> features,
                                                      std::size_t n) {
    std::sort(features.begin(), features.end());
    features.erase(std::unique(features.begin(), features.end()), features.end());
    if (!features.empty() && features.back() >= n)
        throw std::invalid_argument("feature set contains index >= n");
    return features;
}

/// Picks the argmax of `gains` (aligned with `features`, iterated in
/// ascending feature order). Plain comparisons, no epsilon: exactly equal
/// gains are ties, resolved by policy. The tie generator is consumed only
/// when two or more features attain the maximum.
inline std::uint32_t select_split(const std::vector<std::uint32_t>& features,
                                  const std::vector<double>& gains, tie_break tie,
                                  rng& gen) {
    std::size_t best = 0;
    for (std::size_t t = 1; t < features.size(); ++t)
        if (gains[t] > gains[best]) best = t;
    if (tie == tie_break::lowest_index) return features[best];

    std::vector<std::uint32_t> tied;
    for (std::size_t t = 0; t < features.size(); ++t)
        if (gains[t] == gains[best]) tied.push_back(features[t]);
    if (tied.size() == 1) return tied[0];
    return tied[gen.below(tied.size())];
}

inline std::int32_t id3_build(decision_tree& tree, const dataset& data,
                              const std::vector<std::uint32_t>& rows,
                              const std::vector<std::uint32_t>& features,
                              const learner_policy& policy, rng& tie_gen) {
    std::size_t positives = 0;
    for (auto row : rows) positives += data[row].label;
    if (positives == 0) return tree.add_leaf(0);
    if (positives == rows.size()) return tree.add_leaf(1);

    const std::uint8_t majority = (2 * positives > rows.size()) ? 1 : 0;
    if (features.empty()) return tree.add_leaf(majority);

    std::vector<double> gains(features.size());
    for (std::size_t t = 0; t < features.size(); ++t) {
        feature_counts c;
        c.m = rows.size();
        c.labels = positives;
        for (auto row : rows) {
            const bool xi = data[row].bits.get(features[t]);
            c.ones += xi;
            c.both += (xi & data[row].label);
        }
        gains[t] = gain_from_counts(c, policy.impurity);
    }
    const std::uint32_t split = detail::select_split(features, gains, policy.tie, tie_gen);

    std::vector<std::uint32_t> zero_rows, one_rows;
    for (auto row : rows)
        (data[row].bits.get(split) ? one_rows : zero_rows).push_back(row);

    std::vector<std::uint32_t> remaining;
    remaining.reserve(features.size() - 1);
    for (auto feat : features)
        if (feat != split) remaining.push_back(feat);

    const std::int32_t zero_child =
        zero_rows.empty() ? tree.add_leaf(majority)
                          : id3_build(tree, data, zero_rows, remaining, policy, tie_gen);
    const std::int32_t one_child =
        one_rows.empty() ? tree.add_leaf(majority)
                         : id3_build(tree, data, one_rows, remaining, policy, tie_gen);
    return tree.add_split(split, zero_child, one_child);
}

} // namespace detail

/// The greedy gain-maximizing recursion: a pure sample becomes a leaf,
/// otherwise the sample splits on the feature of maximal empirical gain and
/// both halves recurse without it. Extensions for the undefined cases: an
/// empty branch becomes a leaf with the parent sample's majority label, an
/// exhausted feature set becomes a majority leaf.
inline decision_tree id3_learn(const dataset& data,
                               std::vector<std::uint32_t> features,
                               const learner_policy& policy = {},
                               std::uint64_t seed = 0) {
    if (data.empty()) throw std::invalid_argument("id3_learn: empty sample");
    features = detail::checked_feature_set(std::move(features), data.dimension());

    std::vector<std::uint32_t> rows(data.size());
    std::iota(rows.begin(), rows.end(), 0u);

    rng tie_gen(derive_seed(seed, 0x7469)); // consumed only on gain ties
    decision_tree tree;
    tree.set_root(detail::id3_build(tree, data, rows, features, policy, tie_gen));
    return tree;
}

namespace detail {

inline std::int32_t id3_population_build(decision_tree& tree,
                                         const product_distribution& dist,
                                         const target_function& f,
                                         const partial_assignment& w,
                                         const std::vector<std::uint32_t>& features,
                                         const impurity_spec& spec, tie_break tie,
                                         rng& tie_gen) {
    std::uint8_t pure_label = 0;
    if (exact_subcube_pure(dist, f, w, pure_label)) return tree.add_leaf(pure_label);

    const double label_prob = exact_label_prob(dist, f, w);
    const std::uint8_t majority = label_prob > 0.5 ? 1 : 0;
    if (features.empty()) return tree.add_leaf(majority);

    std::vector<double> gains(features.size());
    for (std::size_t t = 0; t < features.size(); ++t)
        gains[t] = exact_gain(dist, f, w, features[t], spec);
    const std::uint32_t split = select_split(features, gains, tie, tie_gen);

    std::vector<std::uint32_t> remaining;
    remaining.reserve(features.size() - 1);
    for (auto feat : features)
        if (feat != split) remaining.push_back(feat);

    // A degenerate coordinate leaves one branch with probability zero; that
    // branch gets the majority label, mirroring the empty-sample convention.
    const double p = dist.p(split);
    const std::int32_t zero_child =
        (p == 1.0) ? tree.add_leaf(majority)
                   : id3_population_build(tree, dist, f, w.with(split, false),
                                          remaining, spec, tie, tie_gen);
    const std::int32_t one_child =
        (p == 0.0) ? tree.add_leaf(majority)
                   : id3_population_build(tree, dist, f, w.with(split, true),
                                          remaining, spec, tie, tie_gen);
    return tree.add_split(split, zero_child, one_child);
}

} // namespace detail

/// Noise-free variant of the recursion: empirical gains are replaced by the
/// oracle's exact gains and the pure-sample test by exact label purity.
inline decision_tree id3_population(const product_distribution& dist,
                                    const target_function& f,
                                    std::vector<std::uint32_t> features,
                                    const impurity_spec& spec = make_impurity(impurity_id::gini),
                                    tie_break tie = tie_break::lowest_index,
                                    std::uint64_t seed = 0) {
    if (dist.dimension() != f.dimension())
        throw std::invalid_argument("id3_population: dimension mismatch");
    features = detail::checked_feature_set(std::move(features), dist.dimension());

    rng tie_gen(derive_seed(seed, 0x7469));
    decision_tree tree;
    partial_assignment root(dist.dimension());
    tree.set_root(detail::id3_population_build(tree, dist, f, root, features, spec,
                                               tie, tie_gen));
    return tree;
}

} // namespace id3lab
