#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace id3lab {

enum class impurity_id { gini, entropy };

/// An impurity function C on [0,1] together with its quantitative constants:
/// beta = inf(-C'') (strong concavity) and gamma = sup|C'| (Lipschitz).
/// Entropy has no global Lipschitz constant (C' blows up at 0 and 1), so its
/// gamma is NaN and gamma_global is false; gini satisfies both hypotheses
/// everywhere and is the default throughout.
struct impurity_spec {
    impurity_id id = impurity_id::gini;
    double beta = 2.0;
    double gamma = 1.0;
    bool gamma_global = true;
};

inline impurity_spec make_impurity(impurity_id id) {
    switch (id) {
        case impurity_id::gini:
            return impurity_spec{impurity_id::gini, 2.0, 1.0, true};
        case impurity_id::entropy:
            return impurity_spec{impurity_id::entropy, 4.0 / std::log(2.0),
                                 std::numeric_limits<double>::quiet_NaN(), false};
    }
    throw std::invalid_argument("make_impurity: unknown id");
}

inline impurity_spec impurity_from_string(const std::string& name) {
    if (name == "gini") return make_impurity(impurity_id::gini);
    if (name == "entropy") return make_impurity(impurity_id::entropy);
    throw std::invalid_argument("unknown impurity '" + name + "' (expected gini|entropy)");
}

inline std::string to_string(impurity_id id) {
    return id == impurity_id::gini ? "gini" : "entropy";
}

inline double evaluate_impurity(const impurity_spec& spec, double q) {
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("evaluate_impurity: q=" + std::to_string(q) +
                                    " outside [0,1]");
    switch (spec.id) {
        case impurity_id::gini:
            return q * (1.0 - q);
        case impurity_id::entropy: {
            // 0*log(0) := 0
            double h = 0.0;
            if (q > 0.0) h -= q * std::log2(q);
            if (q < 1.0) h -= (1.0 - q) * std::log2(1.0 - q);
            return h;
        }
    }
    throw std::invalid_argument("evaluate_impurity: unknown impurity");
}

/// (beta, gamma) for the given impurity.
inline std::pair<double, double> impurity_constants(const impurity_spec& spec) {
    return {spec.beta, spec.gamma};
}

} // namespace id3lab
