#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "id3lab/distribution.hpp"
#include "id3lab/rng.hpp"
#include "id3lab/sampling.hpp"
#include "id3lab/target.hpp"

namespace id3lab {

/// How the target of a trial is specified: a parity over given coordinates,
/// an explicit junta truth table, or a junta redrawn per trial (random
/// support and random non-constant table from the trial seed).
enum class target_kind { parity, junta, random_junta };

struct target_spec {
    target_kind kind = target_kind::parity;
    std::size_t k = 0;
    std::vector<std::uint32_t> support; // empty for random_junta = redraw per trial
    std::vector<std::uint8_t> table;    // junta only
};

/// Distribution side of an instance: either fixed coordinate probabilities or
/// a smoothing recipe. A smoothing spec with empty base draws fresh base
/// probabilities uniformly from (alpha + c, 1 - alpha - c) per realization.
struct distribution_spec {
    bool smoothed = false;
    product_distribution fixed;
    smoothing_spec smoothing;
    bool random_base = false;
    bool pinned_seed = false;  // smoothing carries its own seed: one shared draw
    std::uint64_t draw_seed = 0;
    bool scalar_p = false; // probs were given as one number; survives n changes
    double scalar_value = 0.5;
};

inline target_spec target_spec_from_json(const nlohmann::json& j) {
    target_spec out;
    const std::string type = j.at("type").get<std::string>();
    if (j.contains("support"))
        out.support = j.at("support").get<std::vector<std::uint32_t>>();

    if (type == "parity") {
        out.kind = target_kind::parity;
        if (out.support.empty()) {
            if (!j.contains("k"))
                throw std::invalid_argument("target: parity needs support or k");
            out.k = j.at("k").get<std::size_t>();
            for (std::size_t i = 0; i < out.k; ++i)
                out.support.push_back(static_cast<std::uint32_t>(i));
        }
        out.k = out.support.size();
    } else if (type == "junta") {
        out.kind = target_kind::junta;
        if (out.support.empty())
            throw std::invalid_argument("target: junta needs a support array");
        out.k = out.support.size();
        if (!j.contains("table"))
            throw std::invalid_argument("target: junta needs a table array");
        for (int v : j.at("table").get<std::vector<int>>()) {
            if (v != 0 && v != 1)
                throw std::invalid_argument("target: table entries must be 0/1");
            out.table.push_back(static_cast<std::uint8_t>(v));
        }
        if (out.table.size() != (std::size_t{1} << out.k))
            throw std::invalid_argument("target: table size must be 2^|support|");
    } else if (type == "random-junta") {
        out.kind = target_kind::random_junta;
        if (!out.support.empty()) {
            out.k = out.support.size();
        } else if (j.contains("k")) {
            out.k = j.at("k").get<std::size_t>();
        } else {
            throw std::invalid_argument("target: random-junta needs k or support");
        }
    } else {
        throw std::invalid_argument("target: unknown type '" + type + "'");
    }
    if (out.k == 0) throw std::invalid_argument("target: k must be >= 1");
    if (out.k > max_junta_arity)
        throw std::invalid_argument("target: k exceeds enumeration limit " +
                                    std::to_string(max_junta_arity));
    return out;
}

inline distribution_spec distribution_spec_from_json(const nlohmann::json& probs,
                                                     std::size_t n) {
    distribution_spec out;
    if (probs.is_number()) {
        out.scalar_p = true;
        out.scalar_value = probs.get<double>();
        out.fixed = product_distribution::constant(n, out.scalar_value);
        return out;
    }
    if (probs.is_array()) {
        auto values = probs.get<std::vector<double>>();
        if (values.size() != n)
            throw std::invalid_argument("probs: expected " + std::to_string(n) +
                                        " entries, got " +
                                        std::to_string(values.size()));
        out.fixed = product_distribution(std::move(values));
        return out;
    }
    if (probs.is_object()) {
        out.smoothed = true;
        out.smoothing.alpha = probs.at("alpha").get<double>();
        out.smoothing.c = probs.at("c").get<double>();
        if (probs.contains("base")) {
            const auto& base = probs.at("base");
            if (base.is_number()) {
                out.smoothing.base.assign(n, base.get<double>());
            } else {
                out.smoothing.base = base.get<std::vector<double>>();
                if (out.smoothing.base.size() != n)
                    throw std::invalid_argument("probs.base: wrong length");
            }
        } else {
            out.random_base = true;
        }
        if (probs.contains("seed")) {
            out.pinned_seed = true;
            out.draw_seed = probs.at("seed").get<std::uint64_t>();
        }
        if (!out.random_base) out.smoothing.validate();
        return out;
    }
    throw std::invalid_argument("probs: expected number, array, or smoothing object");
}

/// Realizes a concrete product distribution, drawing base and offsets from
/// `seed` when the spec is smoothed.
inline product_distribution realize_distribution(const distribution_spec& spec,
                                                 std::size_t n, std::uint64_t seed) {
    if (!spec.smoothed) {
        if (spec.scalar_p) return product_distribution::constant(n, spec.scalar_value);
        if (spec.fixed.dimension() != n)
            throw std::invalid_argument("distribution: dimension mismatch");
        return spec.fixed;
    }
    if (spec.pinned_seed) seed = spec.draw_seed;
    smoothing_spec recipe = spec.smoothing;
    if (spec.random_base) {
        const double lo = recipe.alpha + recipe.c;
        const double hi = 1.0 - recipe.alpha - recipe.c;
        if (!(lo < hi))
            throw std::invalid_argument("smoothing: alpha + c must be < 1/2");
        rng gen(derive_seed(seed, 0xBA5E));
        recipe.base.resize(n);
        for (auto& b : recipe.base) b = lo + (hi - lo) * gen.uniform01();
    }
    return smoothed_distribution(recipe, derive_seed(seed, 0xDE17A));
}

/// Realizes a concrete target. Random juntas draw their support (when not
/// pinned) and a non-constant truth table from `seed`.
inline target_function realize_target(const target_spec& spec, std::size_t n,
                                      std::uint64_t seed) {
    switch (spec.kind) {
        case target_kind::parity:
            return make_parity(n, spec.support);
        case target_kind::junta:
            return target_function(n, spec.support, spec.table);
        case target_kind::random_junta: {
            rng gen(derive_seed(seed, 0x7A67));
            std::vector<std::uint32_t> support = spec.support;
            if (support.empty()) {
                if (spec.k > n)
                    throw std::invalid_argument("target: k exceeds n");
                std::vector<std::uint32_t> pool(n);
                std::iota(pool.begin(), pool.end(), 0u);
                for (std::size_t j = 0; j < spec.k; ++j) {
                    const std::size_t pick = j + gen.below(pool.size() - j);
                    std::swap(pool[j], pool[pick]);
                }
                support.assign(pool.begin(), pool.begin() + static_cast<long>(spec.k));
                std::sort(support.begin(), support.end());
            }
            std::vector<std::uint8_t> table(std::size_t{1} << spec.k);
            for (;;) {
                for (auto& bit : table)
                    bit = static_cast<std::uint8_t>(gen.next_u64() & 1);
                bool constant = true;
                for (auto bit : table) constant &= (bit == table[0]);
                if (!constant) break; // constant targets trivialize the run
            }
            return target_function(n, std::move(support), std::move(table));
        }
    }
    throw std::invalid_argument("target: unknown kind");
}

inline nlohmann::ordered_json target_spec_to_json(const target_spec& spec) {
    nlohmann::ordered_json j;
    switch (spec.kind) {
        case target_kind::parity: j["type"] = "parity"; break;
        case target_kind::junta: j["type"] = "junta"; break;
        case target_kind::random_junta: j["type"] = "random-junta"; break;
    }
    j["k"] = spec.k;
    if (!spec.support.empty()) j["support"] = spec.support;
    if (!spec.table.empty()) j["table"] = std::vector<int>(spec.table.begin(), spec.table.end());
    return j;
}

inline nlohmann::ordered_json distribution_spec_to_json(const distribution_spec& spec) {
    if (!spec.smoothed) {
        if (spec.scalar_p) return nlohmann::ordered_json(spec.scalar_value);
        return nlohmann::ordered_json(spec.fixed.probs);
    }
    nlohmann::ordered_json j;
    j["alpha"] = spec.smoothing.alpha;
    j["c"] = spec.smoothing.c;
    if (!spec.random_base) j["base"] = spec.smoothing.base;
    if (spec.pinned_seed) j["seed"] = spec.draw_seed;
    return j;
}

} // namespace id3lab
