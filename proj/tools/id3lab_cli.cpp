// Command-line harness: learn trees from dataset files, query the exact
// oracle, inspect Fourier structure, and run seeded experiment batches and
// parameter sweeps.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "id3lab/id3lab.hpp"

using namespace id3lab;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return json::parse(in);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path.string());
    out << content;
}

/// Shared "instance" schema: {"n": int, "probs": ..., "target": {...},
/// "seed": int}. The seed feeds smoothing draws and random-junta targets.
struct instance {
    std::size_t n = 0;
    distribution_spec distribution;
    target_spec target;
    std::uint64_t seed = 0;
};

instance instance_from_json(const json& j) {
    instance inst;
    inst.n = j.at("n").get<std::size_t>();
    inst.distribution = distribution_spec_from_json(j.at("probs"), inst.n);
    inst.target = target_spec_from_json(j.at("target"));
    inst.seed = j.value("seed", std::uint64_t{0});
    for (auto idx : inst.target.support)
        if (idx >= inst.n) throw std::invalid_argument("instance: support index >= n");
    return inst;
}

partial_assignment parse_restriction(const std::string& text, std::size_t n) {
    const auto w = partial_assignment::from_string(text);
    if (w.dimension() != n)
        throw std::invalid_argument("w has length " + std::to_string(w.dimension()) +
                                    ", expected " + std::to_string(n));
    return w;
}

ordered_json polynomial_to_json(const multilinear_polynomial& poly,
                                const std::vector<std::uint32_t>& coords) {
    ordered_json terms = ordered_json::array();
    for (std::size_t mask = 0; mask < poly.coeffs.size(); ++mask) {
        if (poly.coeffs[mask] == 0.0) continue;
        std::vector<std::uint32_t> monomial;
        for (std::size_t t = 0; t < coords.size(); ++t)
            if (mask & (std::size_t{1} << t)) monomial.push_back(coords[t]);
        terms.push_back({{"coords", monomial}, {"coefficient", poly.coeffs[mask]}});
    }
    return {{"degree", poly.degree()}, {"terms", terms}};
}

int run_learn(const std::string& data_path, const std::string& impurity_name,
              const std::string& tie_name, std::uint64_t seed,
              const std::string& out_path, bool print_text) {
    std::ifstream in(data_path);
    if (!in) throw std::invalid_argument("cannot open " + data_path);
    const dataset data = read_dataset(in);

    learner_policy policy;
    policy.impurity = impurity_from_string(impurity_name);
    policy.tie = tie_break_from_string(tie_name);
    const auto tree = id3_learn(data, full_feature_set(data.dimension()), policy, seed);

    const auto j = tree_to_json(tree);
    if (!out_path.empty()) {
        write_file(out_path, j.dump(2) + "\n");
    } else {
        std::cout << j.dump(2) << "\n";
    }
    if (print_text) std::cout << tree_to_text(tree);

    std::size_t errors = 0;
    for (const auto& ex : data.examples())
        errors += evaluate_tree(tree, ex.bits) != ex.label;
    std::cerr << "examples: " << data.size() << "  nodes: " << tree.node_count()
              << "  depth: " << tree.depth() << "  training errors: " << errors
              << "\n";
    return 0;
}

int run_oracle(const std::string& config_path, const std::string& w_text,
               std::optional<std::uint32_t> feature, const std::string& impurity_name,
               double epsilon, std::optional<std::uint64_t> seed_override) {
    const auto inst = [&] {
        auto parsed = instance_from_json(load_json(config_path));
        if (seed_override) parsed.seed = *seed_override;
        return parsed;
    }();
    const auto spec = impurity_from_string(impurity_name);
    const auto dist = realize_distribution(inst.distribution, inst.n, inst.seed);
    const auto target = realize_target(inst.target, inst.n, inst.seed);
    const auto w = w_text.empty() ? partial_assignment(inst.n)
                                  : parse_restriction(w_text, inst.n);

    ordered_json out;
    out["n"] = inst.n;
    out["probs"] = dist.probs;
    out["target"] = target_spec_to_json(inst.target);
    out["support"] = target.support();
    out["w"] = w.to_string();
    out["label_prob"] = exact_label_prob(dist, target, w);

    ordered_json per_feature = ordered_json::array();
    auto emit = [&](std::uint32_t idx) {
        per_feature.push_back({{"i", idx},
                               {"I", exact_I(dist, target, w, idx)},
                               {"gain", exact_gain(dist, target, w, idx, spec)}});
    };
    if (feature) {
        if (*feature >= inst.n || w.is_fixed(*feature))
            throw std::invalid_argument("requested i must be a free coordinate < n");
        emit(*feature);
    } else {
        for (auto idx : target.support())
            if (!w.is_fixed(idx)) emit(idx);
    }
    out["features"] = per_feature;

    const auto report = verify_basic_conditions(dist, target, spec, epsilon);
    out["conditions"] = {{"epsilon", report.epsilon},
                         {"epsilon_star", report.epsilon_star},
                         {"holds", report.holds},
                         {"gain_floor", report.gain_floor},
                         {"subcubes", report.subcube_count},
                         {"pure_subcubes", report.pure_count},
                         {"skipped_zero_prob", report.skipped_zero_prob},
                         {"worst_w", report.worst_w}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_fourier(const std::string& config_path, const std::string& w_text,
                std::optional<std::uint32_t> split_on, double anti_c,
                double anti_eps, std::size_t anti_trials,
                std::optional<std::uint64_t> seed_override) {
    const auto inst = [&] {
        auto parsed = instance_from_json(load_json(config_path));
        if (seed_override) parsed.seed = *seed_override;
        return parsed;
    }();
    const auto target = realize_target(inst.target, inst.n, inst.seed);
    const auto w = w_text.empty() ? partial_assignment(inst.n)
                                  : parse_restriction(w_text, inst.n);

    const auto restricted = restrict_target(target, w);
    const auto expansion = fourier_coeffs(restricted.table);

    ordered_json out;
    out["n"] = inst.n;
    out["support"] = target.support();
    out["w"] = w.to_string();
    out["free_coords"] = restricted.coords;

    ordered_json coefficients = ordered_json::array();
    for (std::size_t mask = 0; mask < expansion.coeffs.size(); ++mask) {
        if (expansion.coeffs[mask] == 0.0) continue;
        std::vector<std::uint32_t> subset;
        for (std::size_t t = 0; t < restricted.coords.size(); ++t)
            if (mask & (std::size_t{1} << t)) subset.push_back(restricted.coords[t]);
        coefficients.push_back({{"coords", subset}, {"alpha", expansion.coeffs[mask]}});
    }
    out["coefficients"] = coefficients;

    // split position: requested original coordinate, or the first free one
    std::size_t pos = 0;
    if (split_on) {
        bool found = false;
        for (std::size_t t = 0; t < restricted.coords.size(); ++t)
            if (restricted.coords[t] == *split_on) {
                pos = t;
                found = true;
            }
        if (!found)
            throw std::invalid_argument("--split-on must name a free support coordinate");
    }
    if (!restricted.coords.empty()) {
        const auto [g, h] = split_on_coordinate(expansion, pos);
        out["split"] = {{"on", restricted.coords[pos]},
                        {"g", polynomial_to_json(g, restricted.coords)},
                        {"h", polynomial_to_json(h, restricted.coords)}};

        // anti-concentration of the shifted derivative part, base = the
        // instance probabilities (smoothing base when given)
        std::vector<double> base(restricted.coords.size());
        const auto& dspec = inst.distribution;
        for (std::size_t t = 0; t < restricted.coords.size(); ++t) {
            const auto coord = restricted.coords[t];
            if (dspec.smoothed) {
                base[t] = dspec.random_base ? 0.5 : dspec.smoothing.base[coord];
            } else if (dspec.scalar_p) {
                base[t] = dspec.scalar_value;
            } else {
                base[t] = dspec.fixed.p(coord);
            }
        }
        const auto g0 = shift_polynomial(g, base);
        const double estimate =
            anticoncentration_estimate(g0, anti_c, anti_eps, anti_trials, inst.seed);
        const double envelope =
            std::pow(2.0 / anti_c, static_cast<double>(target.arity())) *
            std::sqrt(anti_eps);
        out["anticoncentration"] = {{"g0", polynomial_to_json(g0, restricted.coords)},
                                    {"c", anti_c},
                                    {"eps", anti_eps},
                                    {"trials", anti_trials},
                                    {"estimate", estimate},
                                    {"envelope", envelope}};
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_experiment(const std::string& config_path,
                   std::optional<std::uint64_t> seed_override,
                   const std::string& out_dir, std::size_t jobs) {
    auto cfg = trial_config_from_json(load_json(config_path));
    if (seed_override) cfg.seed = *seed_override;

    const auto summary = run_batch(cfg, jobs);
    const auto summary_doc = summary_json(cfg, summary);
    const auto csv = trials_csv(summary);

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_file(std::filesystem::path(out_dir) / "summary.json",
                   summary_doc.dump(2) + "\n");
        write_file(std::filesystem::path(out_dir) / "trials.csv", csv);
    } else {
        std::cout << csv;
    }
    std::cout << summary_doc.dump(2) << "\n";
    return 0;
}

int run_sweep_cmd(const std::string& config_path, const std::string& axis_name,
                  std::vector<double> values,
                  std::optional<std::uint64_t> seed_override,
                  const std::string& out_dir, std::size_t jobs) {
    const auto doc = load_json(config_path);
    auto cfg = trial_config_from_json(doc);
    if (seed_override) cfg.seed = *seed_override;
    if (values.empty() && doc.contains("values"))
        values = doc.at("values").get<std::vector<double>>();

    const auto axis = sweep_axis_from_string(axis_name);
    const auto rows = run_sweep(cfg, axis, values, jobs);
    const auto csv = sweep_csv(rows);
    const auto svg = sweep_svg(rows, axis);

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_file(std::filesystem::path(out_dir) / "sweep.csv", csv);
        write_file(std::filesystem::path(out_dir) / "plot.svg", svg);
    }
    std::cout << csv;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"decision-tree learning lab: exact oracles and seeded experiments"};
    app.require_subcommand(1);

    std::string config_path, out_path, w_text, impurity_name = "gini";
    std::string tie_name = "lowest_index", axis_name = "m", data_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::uint32_t> feature, split_on;
    std::uint64_t learn_seed = 0;
    std::size_t jobs = 1, anti_trials = 10000;
    double epsilon = 0.0, anti_c = 0.1, anti_eps = 1e-3;
    std::vector<double> values;
    bool print_text = false;

    auto* learn = app.add_subcommand("learn", "grow a tree from a dataset file");
    learn->add_option("--data", data_path, "dataset in the text format")->required();
    learn->add_option("--impurity", impurity_name, "gini|entropy");
    learn->add_option("--tie-break", tie_name, "lowest_index|seeded_random");
    learn->add_option("--seed", learn_seed, "tie-break seed");
    learn->add_option("--out", out_path, "write the tree as JSON here");
    learn->add_flag("--text", print_text, "also print the indented text form");

    auto* oracle = app.add_subcommand("oracle", "exact distributional statistics");
    oracle->add_option("--config", config_path, "instance JSON")->required();
    oracle->add_option("--w", w_text, "restriction over {0,1,*}, length n");
    oracle->add_option("--i", feature, "single feature to report");
    oracle->add_option("--impurity", impurity_name, "gini|entropy");
    oracle->add_option("--epsilon", epsilon, "threshold for the conditions report");
    oracle->add_option("--seed", seed_override, "override the instance seed");

    auto* fourier = app.add_subcommand("fourier", "coefficients, splits, anti-concentration");
    fourier->add_option("--config", config_path, "instance JSON")->required();
    fourier->add_option("--w", w_text, "restriction over {0,1,*}, length n");
    fourier->add_option("--split-on", split_on, "coordinate for the g/h split");
    fourier->add_option("--anti-c", anti_c, "offset half-width for anti-concentration");
    fourier->add_option("--anti-eps", anti_eps, "threshold for anti-concentration");
    fourier->add_option("--anti-trials", anti_trials, "Monte-Carlo draws");
    fourier->add_option("--seed", seed_override, "override the instance seed");

    auto* experiment = app.add_subcommand("experiment", "run a seeded trial batch");
    experiment->add_option("--config", config_path, "trial config JSON")->required();
    experiment->add_option("--seed", seed_override, "override the config seed");
    experiment->add_option("--out", out_path, "directory for summary.json + trials.csv");
    experiment->add_option("--jobs", jobs, "worker threads");

    auto* sweep = app.add_subcommand("sweep", "batch per value along one axis");
    sweep->add_option("--config", config_path, "trial config JSON")->required();
    sweep->add_option("--axis", axis_name, "m|c|k|n")->required();
    sweep->add_option("--values", values, "axis values")->delimiter(',');
    sweep->add_option("--seed", seed_override, "override the config seed");
    sweep->add_option("--out", out_path, "directory for sweep.csv + plot.svg");
    sweep->add_option("--jobs", jobs, "worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (learn->parsed())
            return run_learn(data_path, impurity_name, tie_name, learn_seed, out_path,
                             print_text);
        if (oracle->parsed())
            return run_oracle(config_path, w_text, feature, impurity_name, epsilon,
                              seed_override);
        if (fourier->parsed())
            return run_fourier(config_path, w_text, split_on, anti_c, anti_eps,
                               anti_trials, seed_override);
        if (experiment->parsed())
            return run_experiment(config_path, seed_override, out_path, jobs);
        if (sweep->parsed())
            return run_sweep_cmd(config_path, axis_name, values, seed_override,
                                 out_path, jobs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
