#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "id3lab/learner.hpp"
#include "id3lab/oracle.hpp"
#include "id3lab/sampling.hpp"
#include "id3lab/spec_json.hpp"
#include "id3lab/stats.hpp"

namespace id3lab {

/// Everything one experiment needs. A config plus a trial index determines
/// the trial completely; all randomness flows from `seed` via derived
/// substreams.
struct trial_config {
    std::size_t n = 0;
    target_spec target;
    distribution_spec distribution;
    std::size_t m = 0;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    impurity_spec impurity = make_impurity(impurity_id::gini);
    tie_break tie = tie_break::lowest_index;
    bool redraw_delta = true; // false: one smoothing draw shared by all trials

    void validate() const {
        if (n == 0) throw std::invalid_argument("config: n must be >= 1");
        if (m == 0) throw std::invalid_argument("config: m must be >= 1");
        if (trials == 0) throw std::invalid_argument("config: trials must be >= 1");
        if (target.k > max_junta_arity)
            throw std::invalid_argument("config: k exceeds enumeration limit");
        for (auto idx : target.support)
            if (idx >= n) throw std::invalid_argument("config: support index >= n");
    }
};

struct trial_result {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    double exact_loss = std::numeric_limits<double>::quiet_NaN();
    std::size_t tree_nodes = 0;
    std::size_t tree_leaves = 0;
    std::size_t tree_depth = 0;
    bool junta_only = false;
    bool basic_conditions_held = false;
    double elapsed_seconds = 0.0;
    std::string error; // nonempty marks a failed trial; the batch continues

    bool success() const { return error.empty() && exact_loss == 0.0; }
};

/// Empirical counterpart of the zero-loss preconditions: every restriction w
/// supported in f's support must have a nonempty subsample that is either
/// label-pure or ranks every free support coordinate's gain strictly above
/// every non-support coordinate's gain. Labels must be realizable by f
/// (which holds for every harness-sampled dataset).
inline bool empirical_conditions_hold(const dataset& data, const target_function& f,
                                      const impurity_spec& spec) {
    const auto& support = f.support();
    const std::size_t k = support.size();
    const std::size_t n = data.dimension();
    const std::size_t buckets = std::size_t{1} << k;

    // One pass: per support-pattern counts, per feature.
    std::vector<std::uint64_t> count(buckets, 0);
    std::vector<std::uint64_t> ones(buckets * n, 0);
    for (const auto& ex : data.examples()) {
        const std::uint32_t pattern = f.support_pattern(ex.bits);
        ++count[pattern];
        auto* row = &ones[static_cast<std::size_t>(pattern) * n];
        for (std::size_t i = 0; i < n; ++i) row[i] += ex.bits.get(i);
    }

    std::vector<bool> in_support(n, false);
    for (auto idx : support) in_support[idx] = true;

    std::size_t total_w = 1;
    for (std::size_t j = 0; j < k; ++j) total_w *= 3;

    std::vector<std::uint64_t> ones_w(n);
    for (std::size_t code = 0; code < total_w; ++code) {
        std::uint32_t fixed_mask = 0, fixed_values = 0;
        std::size_t rem = code;
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t trit = rem % 3;
            rem /= 3;
            if (trit == 0) continue;
            fixed_mask |= (1u << j);
            if (trit == 2) fixed_values |= (1u << j);
        }

        std::uint64_t m_w = 0, labels_w = 0;
        std::fill(ones_w.begin(), ones_w.end(), 0);
        std::vector<std::uint64_t> both_w(n, 0);
        bool saw_zero = false, saw_one = false;
        for (std::uint32_t b = 0; b < buckets; ++b) {
            if ((b & fixed_mask) != fixed_values || count[b] == 0) continue;
            m_w += count[b];
            const bool label = f.table()[b];
            (label ? saw_one : saw_zero) = true;
            const auto* row = &ones[static_cast<std::size_t>(b) * n];
            for (std::size_t i = 0; i < n; ++i) {
                ones_w[i] += row[i];
                if (label) both_w[i] += row[i];
            }
            if (label) labels_w += count[b];
        }
        if (m_w == 0) return false; // some subcube received no examples
        if (!(saw_zero && saw_one)) continue; // pure subsample

        double weakest_support = std::numeric_limits<double>::infinity();
        double strongest_other = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const bool fixed_here =
                in_support[i] &&
                (fixed_mask & (1u << f.support_position(static_cast<std::uint32_t>(i))));
            if (fixed_here) continue;
            feature_counts c;
            c.m = m_w;
            c.labels = labels_w;
            c.ones = ones_w[i];
            c.both = both_w[i];
            const double gain = gain_from_counts(c, spec);
            if (in_support[i]) {
                weakest_support = std::min(weakest_support, gain);
            } else {
                strongest_other = std::max(strongest_other, gain);
            }
        }
        if (!(weakest_support > strongest_other)) return false;
    }
    return true;
}

/// Runs one seeded trial: realize the distribution (redrawing the smoothing
/// offsets unless pinned) and the target, sample, learn with the full
/// feature set, and score the tree exactly. Deterministic in (cfg, index);
/// failures are recorded in `error` rather than thrown.
inline trial_result run_trial(const trial_config& cfg, std::size_t index) {
    trial_result result;
    result.index = index;
    result.seed = derive_seed(cfg.seed, index);
    const auto start = std::chrono::steady_clock::now();
    try {
        cfg.validate();
        const std::uint64_t dist_seed =
            cfg.redraw_delta ? derive_seed(result.seed, 1)
                             : derive_seed(cfg.seed, 0xF17ED);
        const product_distribution dist =
            realize_distribution(cfg.distribution, cfg.n, dist_seed);
        const target_function f =
            realize_target(cfg.target, cfg.n, derive_seed(result.seed, 2));
        const dataset data =
            sample_dataset(dist, f, cfg.m, derive_seed(result.seed, 3));

        learner_policy policy;
        policy.tie = cfg.tie;
        policy.impurity = cfg.impurity;
        const decision_tree tree = id3_learn(data, full_feature_set(cfg.n), policy,
                                             derive_seed(result.seed, 4));

        result.exact_loss = exact_tree_loss(dist, f, tree);
        result.tree_nodes = tree.node_count();
        result.tree_leaves = tree.leaf_count();
        result.tree_depth = tree.depth();
        result.junta_only = true;
        for (auto feat : tree.split_features())
            result.junta_only &= f.in_support(feat);
        result.basic_conditions_held =
            empirical_conditions_hold(data, f, cfg.impurity);
    } catch (const std::exception& e) {
        result.error = e.what();
    }
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

struct batch_summary {
    std::vector<trial_result> trials;
    double success_rate = 0.0;
    double mean_loss = 0.0;
    double mean_tree_nodes = 0.0;
    double mean_tree_depth = 0.0;
    std::size_t error_count = 0;
    double elapsed_seconds = 0.0;
};

/// Runs all trials (optionally across threads; trials are pure functions of
/// (cfg, index) and results are ordered by index, so parallelism never
/// changes the output) and aggregates.
inline batch_summary run_batch(const trial_config& cfg, std::size_t jobs = 1) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    batch_summary summary;
    summary.trials.resize(cfg.trials);
    if (jobs <= 1 || cfg.trials <= 1) {
        for (std::size_t t = 0; t < cfg.trials; ++t)
            summary.trials[t] = run_trial(cfg, t);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t t = next.fetch_add(1);
                if (t >= cfg.trials) return;
                summary.trials[t] = run_trial(cfg, t);
            }
        };
        std::vector<std::thread> pool;
        const std::size_t threads = std::min(jobs, cfg.trials);
        pool.reserve(threads);
        for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::size_t successes = 0, scored = 0;
    double loss_sum = 0.0, node_sum = 0.0, depth_sum = 0.0;
    for (const auto& trial : summary.trials) {
        if (!trial.error.empty()) {
            ++summary.error_count;
            continue;
        }
        ++scored;
        successes += trial.success();
        loss_sum += trial.exact_loss;
        node_sum += static_cast<double>(trial.tree_nodes);
        depth_sum += static_cast<double>(trial.tree_depth);
    }
    summary.success_rate =
        static_cast<double>(successes) / static_cast<double>(cfg.trials);
    if (scored > 0) {
        summary.mean_loss = loss_sum / static_cast<double>(scored);
        summary.mean_tree_nodes = node_sum / static_cast<double>(scored);
        summary.mean_tree_depth = depth_sum / static_cast<double>(scored);
    }
    summary.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return summary;
}

enum class sweep_axis { m, c, k, n };

inline sweep_axis sweep_axis_from_string(const std::string& name) {
    if (name == "m") return sweep_axis::m;
    if (name == "c") return sweep_axis::c;
    if (name == "k") return sweep_axis::k;
    if (name == "n") return sweep_axis::n;
    throw std::invalid_argument("unknown sweep axis '" + name + "' (expected m|c|k|n)");
}

inline std::string to_string(sweep_axis axis) {
    switch (axis) {
        case sweep_axis::m: return "m";
        case sweep_axis::c: return "c";
        case sweep_axis::k: return "k";
        case sweep_axis::n: return "n";
    }
    return "?";
}

struct sweep_row {
    double value = 0.0;
    batch_summary summary;
    std::string error; // nonempty: the value was invalid for this config
};

namespace detail {

inline trial_config config_with_axis(trial_config cfg, sweep_axis axis, double value) {
    switch (axis) {
        case sweep_axis::m: {
            const auto m = static_cast<long long>(std::llround(value));
            if (m < 1 || static_cast<double>(m) != value)
                throw std::invalid_argument("sweep: m values must be positive integers");
            cfg.m = static_cast<std::size_t>(m);
            return cfg;
        }
        case sweep_axis::c: {
            if (!cfg.distribution.smoothed)
                throw std::invalid_argument("sweep over c needs a smoothing distribution");
            cfg.distribution.smoothing.c = value;
            if (!cfg.distribution.random_base) cfg.distribution.smoothing.validate();
            if (!(cfg.distribution.smoothing.alpha + value < 0.5) || value < 0.0)
                throw std::invalid_argument("sweep: c out of range");
            return cfg;
        }
        case sweep_axis::k: {
            const auto k = static_cast<long long>(std::llround(value));
            if (k < 1 || static_cast<double>(k) != value)
                throw std::invalid_argument("sweep: k values must be positive integers");
            if (static_cast<std::size_t>(k) > cfg.n)
                throw std::invalid_argument("sweep: k exceeds n");
            cfg.target.k = static_cast<std::size_t>(k);
            if (cfg.target.kind == target_kind::junta)
                throw std::invalid_argument("sweep over k needs a parity or random-junta target");
            if (cfg.target.kind == target_kind::parity) {
                cfg.target.support.clear();
                for (long long i = 0; i < k; ++i)
                    cfg.target.support.push_back(static_cast<std::uint32_t>(i));
            } else {
                cfg.target.support.clear(); // redraw support at the new arity
            }
            return cfg;
        }
        case sweep_axis::n: {
            const auto n = static_cast<long long>(std::llround(value));
            if (n < 1 || static_cast<double>(n) != value)
                throw std::invalid_argument("sweep: n values must be positive integers");
            if (!cfg.distribution.smoothed && !cfg.distribution.scalar_p)
                throw std::invalid_argument(
                    "sweep over n needs a scalar or smoothing distribution");
            if (cfg.distribution.smoothed && !cfg.distribution.random_base &&
                cfg.distribution.smoothing.base.size() != static_cast<std::size_t>(n))
                throw std::invalid_argument("sweep over n needs a redrawable base");
            cfg.n = static_cast<std::size_t>(n);
            for (auto idx : cfg.target.support)
                if (idx >= cfg.n)
                    throw std::invalid_argument("sweep: support index >= n");
            return cfg;
        }
    }
    throw std::invalid_argument("sweep: unknown axis");
}

} // namespace detail

/// One run_batch per axis value; invalid values become error rows instead of
/// aborting the sweep.
inline std::vector<sweep_row> run_sweep(const trial_config& cfg, sweep_axis axis,
                                        const std::vector<double>& values,
                                        std::size_t jobs = 1) {
    std::vector<sweep_row> rows;
    rows.reserve(values.size());
    for (double value : values) {
        sweep_row row;
        row.value = value;
        try {
            const trial_config local = detail::config_with_axis(cfg, axis, value);
            row.summary = run_batch(local, jobs);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Report emission. All formatting is locale-independent and byte-stable:
// identical configs produce identical files.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

} // namespace detail

/// Per-trial rows. Wall-clock time is deliberately left out: the file must be
/// byte-identical across reruns of the same config.
inline std::string trials_csv(const batch_summary& summary) {
    std::string out =
        "trial,seed,exact_loss,tree_nodes,tree_leaves,tree_depth,junta_only,"
        "basic_conditions_held,error\n";
    for (const auto& t : summary.trials) {
        out += std::to_string(t.index);
        out += ',';
        out += std::to_string(t.seed);
        out += ',';
        out += t.error.empty() ? detail::format_double(t.exact_loss) : "";
        out += ',';
        out += std::to_string(t.tree_nodes);
        out += ',';
        out += std::to_string(t.tree_leaves);
        out += ',';
        out += std::to_string(t.tree_depth);
        out += ',';
        out += t.junta_only ? '1' : '0';
        out += ',';
        out += t.basic_conditions_held ? '1' : '0';
        out += ',';
        out += t.error;
        out += '\n';
    }
    return out;
}

inline nlohmann::ordered_json summary_json(const trial_config& cfg,
                                           const batch_summary& summary) {
    nlohmann::ordered_json j;
    j["config"] = {{"n", cfg.n},
                   {"target", target_spec_to_json(cfg.target)},
                   {"probs", distribution_spec_to_json(cfg.distribution)},
                   {"m", cfg.m},
                   {"trials", cfg.trials},
                   {"seed", cfg.seed},
                   {"impurity", to_string(cfg.impurity.id)},
                   {"tie_break", to_string(cfg.tie)},
                   {"redraw_delta", cfg.redraw_delta}};
    j["success_rate"] = summary.success_rate;
    j["mean_loss"] = summary.mean_loss;
    j["mean_tree_nodes"] = summary.mean_tree_nodes;
    j["mean_tree_depth"] = summary.mean_tree_depth;
    j["errors"] = summary.error_count;
    j["elapsed_seconds"] = summary.elapsed_seconds;
    return j;
}

inline std::string sweep_csv(const std::vector<sweep_row>& rows) {
    std::string out = "axis_value,success_rate,mean_loss,mean_tree_size,trials,error\n";
    for (const auto& row : rows) {
        out += detail::format_double(row.value);
        out += ',';
        if (row.error.empty()) {
            out += detail::format_double(row.summary.success_rate);
            out += ',';
            out += detail::format_double(row.summary.mean_loss);
            out += ',';
            out += detail::format_double(row.summary.mean_tree_nodes);
            out += ',';
            out += std::to_string(row.summary.trials.size());
            out += ',';
        } else {
            out += ",,,,";
            out += row.error;
        }
        out += '\n';
    }
    return out;
}

/// Minimal self-contained line chart: success rate against the axis values,
/// equally spaced, labelled.
inline std::string sweep_svg(const std::vector<sweep_row>& rows, sweep_axis axis) {
    const int width = 640, height = 400;
    const int left = 60, right = 20, top = 20, bottom = 50;
    const int plot_w = width - left - right;
    const int plot_h = height - top - bottom;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axes
    svg += "<line x1=\"" + std::to_string(left) + "\" y1=\"" + std::to_string(top) +
           "\" x2=\"" + std::to_string(left) + "\" y2=\"" +
           std::to_string(top + plot_h) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + std::to_string(left) + "\" y1=\"" +
           std::to_string(top + plot_h) + "\" x2=\"" + std::to_string(left + plot_w) +
           "\" y2=\"" + std::to_string(top + plot_h) + "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double frac = tick / 4.0;
        const int y = top + plot_h - static_cast<int>(frac * plot_h);
        svg += "<text x=\"" + std::to_string(left - 8) + "\" y=\"" +
               std::to_string(y + 4) +
               "\" font-size=\"12\" text-anchor=\"end\" font-family=\"monospace\">" +
               detail::format_double(frac) + "</text>\n";
        svg += "<line x1=\"" + std::to_string(left - 4) + "\" y1=\"" +
               std::to_string(y) + "\" x2=\"" + std::to_string(left) + "\" y2=\"" +
               std::to_string(y) + "\" stroke=\"black\"/>\n";
    }

    const std::size_t count = rows.size();
    std::string points;
    for (std::size_t idx = 0; idx < count; ++idx) {
        const double xfrac = count <= 1 ? 0.5
                                        : static_cast<double>(idx) /
                                              static_cast<double>(count - 1);
        const int x = left + static_cast<int>(xfrac * plot_w);
        svg += "<text x=\"" + std::to_string(x) + "\" y=\"" +
               std::to_string(top + plot_h + 18) +
               "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"monospace\">" +
               detail::format_double(rows[idx].value) + "</text>\n";
        if (!rows[idx].error.empty()) continue;
        const int y = top + plot_h -
                      static_cast<int>(rows[idx].summary.success_rate * plot_h);
        if (!points.empty()) points += ' ';
        points += std::to_string(x) + "," + std::to_string(y);
        svg += "<circle cx=\"" + std::to_string(x) + "\" cy=\"" + std::to_string(y) +
               "\" r=\"3\" fill=\"steelblue\"/>\n";
    }
    if (!points.empty())
        svg += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"" +
               points + "\"/>\n";

    svg += "<text x=\"" + std::to_string(left + plot_w / 2) + "\" y=\"" +
           std::to_string(height - 12) +
           "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"monospace\">" +
           to_string(axis) + "</text>\n";
    svg += "<text x=\"16\" y=\"" + std::to_string(top + plot_h / 2) +
           "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"monospace\" "
           "transform=\"rotate(-90 16 " +
           std::to_string(top + plot_h / 2) + ")\">success_rate</text>\n";
    svg += "</svg>\n";
    return svg;
}

/// Config parsing for the experiment/sweep subcommands.
inline trial_config trial_config_from_json(const nlohmann::json& j) {
    trial_config cfg;
    cfg.n = j.at("n").get<std::size_t>();
    cfg.target = target_spec_from_json(j.at("target"));
    if (j.contains("k") && j.at("k").get<std::size_t>() != cfg.target.k)
        throw std::invalid_argument("config: top-level k disagrees with target");
    cfg.distribution = distribution_spec_from_json(j.at("probs"), cfg.n);
    cfg.m = j.at("m").get<std::size_t>();
    cfg.trials = j.value("trials", std::size_t{1});
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.impurity = impurity_from_string(j.value("impurity", std::string("gini")));
    cfg.tie = tie_break_from_string(j.value("tie_break", std::string("lowest_index")));
    cfg.redraw_delta = j.value("redraw_delta", true);
    cfg.validate();
    return cfg;
}

} // namespace id3lab
