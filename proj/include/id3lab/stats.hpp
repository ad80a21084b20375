#pragma once

#include <cstdint>
#include <stdexcept>

#include "id3lab/dataset.hpp"
#include "id3lab/impurity.hpp"

namespace id3lab {

/// Raw integer counts behind the empirical statistics of one feature.
struct feature_counts {
    std::size_t m = 0;       // |S|
    std::size_t ones = 0;    // #{x_i = 1}
    std::size_t labels = 0;  // #{y = 1}
    std::size_t both = 0;    // #{x_i = 1 and y = 1}
};

inline feature_counts count_feature(const dataset& data, std::uint32_t feature) {
    if (feature >= data.dimension())
        throw std::invalid_argument("feature index out of range");
    feature_counts c;
    c.m = data.size();
    for (const auto& ex : data.examples()) {
        const bool xi = ex.bits.get(feature);
        c.ones += xi;
        c.labels += ex.label;
        c.both += (xi & ex.label);
    }
    return c;
}

/// Gain from counts: C(Pr[y=1]) - Pr[x=1] C(Pr[y=1|x=1]) - Pr[x=0] C(Pr[y=1|x=0]).
/// A constant feature gets gain 0 (the undefined conditional carries weight 0
/// and the defined one equals the unconditional probability).
inline double gain_from_counts(const feature_counts& c, const impurity_spec& spec) {
    if (c.m == 0) throw std::invalid_argument("gain: empty sample");
    if (c.ones == 0 || c.ones == c.m) return 0.0;
    const double m = static_cast<double>(c.m);
    const double p1 = static_cast<double>(c.ones) / m;
    const double b = static_cast<double>(c.labels) / m;
    const double b1 = static_cast<double>(c.both) / static_cast<double>(c.ones);
    const double b0 = static_cast<double>(c.labels - c.both) /
                      static_cast<double>(c.m - c.ones);
    return evaluate_impurity(spec, b) -
           (p1 * evaluate_impurity(spec, b1) + (1.0 - p1) * evaluate_impurity(spec, b0));
}

inline double i_from_counts(const feature_counts& c) {
    if (c.m == 0) throw std::invalid_argument("empirical_I: empty sample");
    const double m = static_cast<double>(c.m);
    return (static_cast<double>(c.labels) / m) * (static_cast<double>(c.ones) / m) -
           static_cast<double>(c.both) / m;
}

/// Gain(S, i) for the given impurity.
inline double empirical_gain(const dataset& data, std::uint32_t feature,
                             const impurity_spec& spec) {
    if (data.empty()) throw std::invalid_argument("empirical_gain: empty sample");
    return gain_from_counts(count_feature(data, feature), spec);
}

/// I(S, i) = E[y] E[x_i] - E[y x_i]. Zero iff x_i and y are empirically
/// uncorrelated; note the sign: positively correlated pairs give negative I.
inline double empirical_I(const dataset& data, std::uint32_t feature) {
    if (data.empty()) throw std::invalid_argument("empirical_I: empty sample");
    return i_from_counts(count_feature(data, feature));
}

} // namespace id3lab
