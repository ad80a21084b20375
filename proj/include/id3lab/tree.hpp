#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "id3lab/bitvec.hpp"

namespace id3lab {

/// Binary decision tree. Nodes live in a flat arena; an internal node tests
/// one feature and routes to the `zero`/`one` child, a leaf carries a label.
/// No feature repeats along any root-to-leaf path (validated).
class decision_tree {
public:
    struct node {
        std::int32_t feature = -1; // -1 marks a leaf
        std::int32_t zero = -1;
        std::int32_t one = -1;
        std::uint8_t label = 0;

        bool is_leaf() const { return feature < 0; }
    };

    decision_tree() = default;

    std::int32_t add_leaf(std::uint8_t label) {
        nodes_.push_back(node{-1, -1, -1, label});
        return static_cast<std::int32_t>(nodes_.size() - 1);
    }

    std::int32_t add_split(std::uint32_t feature, std::int32_t zero, std::int32_t one) {
        nodes_.push_back(node{static_cast<std::int32_t>(feature), zero, one, 0});
        return static_cast<std::int32_t>(nodes_.size() - 1);
    }

    void set_root(std::int32_t root) {
        root_ = root;
        validate();
    }

    static decision_tree leaf(std::uint8_t label) {
        decision_tree t;
        t.set_root(t.add_leaf(label));
        return t;
    }

    bool empty() const { return root_ < 0; }
    std::int32_t root() const { return root_; }
    const node& at(std::int32_t i) const { return nodes_[static_cast<std::size_t>(i)]; }
    std::size_t node_count() const { return nodes_.size(); }

    std::size_t leaf_count() const {
        std::size_t count = 0;
        for (const auto& nd : nodes_) count += nd.is_leaf();
        return count;
    }

    std::size_t depth() const { return depth_below(root_); }

    /// Every feature tested anywhere in the tree, sorted, deduplicated.
    std::vector<std::uint32_t> split_features() const {
        std::vector<std::uint32_t> out;
        for (const auto& nd : nodes_)
            if (!nd.is_leaf()) out.push_back(static_cast<std::uint32_t>(nd.feature));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    friend bool operator==(const decision_tree& a, const decision_tree& b);

private:
    void validate() const {
        if (root_ < 0 || static_cast<std::size_t>(root_) >= nodes_.size())
            throw std::invalid_argument("decision_tree: invalid root");
        std::vector<bool> on_path;
        check_paths(root_, on_path);
    }

    void check_paths(std::int32_t idx, std::vector<bool>& on_path) const {
        const node& nd = at(idx);
        if (nd.is_leaf()) return;
        const auto feature = static_cast<std::size_t>(nd.feature);
        if (feature >= on_path.size()) on_path.resize(feature + 1, false);
        if (on_path[feature])
            throw std::invalid_argument("decision_tree: feature " +
                                        std::to_string(feature) +
                                        " repeats along a path");
        on_path[feature] = true;
        check_paths(nd.zero, on_path);
        check_paths(nd.one, on_path);
        on_path[feature] = false;
    }

    std::size_t depth_below(std::int32_t idx) const {
        const node& nd = at(idx);
        if (nd.is_leaf()) return 0;
        return 1 + std::max(depth_below(nd.zero), depth_below(nd.one));
    }

    std::vector<node> nodes_;
    std::int32_t root_ = -1;
};

inline std::uint8_t evaluate_tree(const decision_tree& tree, const bitvec& bits) {
    std::int32_t idx = tree.root();
    for (;;) {
        const auto& nd = tree.at(idx);
        if (nd.is_leaf()) return nd.label;
        if (static_cast<std::size_t>(nd.feature) >= bits.size())
            throw std::invalid_argument("evaluate_tree: feature index out of range");
        idx = bits.get(static_cast<std::size_t>(nd.feature)) ? nd.one : nd.zero;
    }
}

/// Like evaluate_tree but records the features consulted, in path order.
inline std::uint8_t evaluate_tree_traced(const decision_tree& tree, const bitvec& bits,
                                         std::vector<std::uint32_t>& consulted) {
    consulted.clear();
    std::int32_t idx = tree.root();
    for (;;) {
        const auto& nd = tree.at(idx);
        if (nd.is_leaf()) return nd.label;
        if (static_cast<std::size_t>(nd.feature) >= bits.size())
            throw std::invalid_argument("evaluate_tree: feature index out of range");
        consulted.push_back(static_cast<std::uint32_t>(nd.feature));
        idx = bits.get(static_cast<std::size_t>(nd.feature)) ? nd.one : nd.zero;
    }
}

namespace detail {

inline nlohmann::ordered_json tree_node_to_json(const decision_tree& tree, std::int32_t idx) {
    const auto& nd = tree.at(idx);
    if (nd.is_leaf()) return nlohmann::ordered_json{{"leaf", nd.label}};
    return nlohmann::ordered_json{{"feature", nd.feature},
                                  {"zero", tree_node_to_json(tree, nd.zero)},
                                  {"one", tree_node_to_json(tree, nd.one)}};
}

inline std::int32_t tree_node_from_json(const nlohmann::json& j, decision_tree& tree) {
    if (j.contains("leaf")) {
        const int label = j.at("leaf").get<int>();
        if (label != 0 && label != 1)
            throw std::invalid_argument("tree json: leaf label must be 0 or 1");
        return tree.add_leaf(static_cast<std::uint8_t>(label));
    }
    const auto feature = j.at("feature").get<std::int64_t>();
    if (feature < 0)
        throw std::invalid_argument("tree json: negative feature index");
    const std::int32_t zero = tree_node_from_json(j.at("zero"), tree);
    const std::int32_t one = tree_node_from_json(j.at("one"), tree);
    return tree.add_split(static_cast<std::uint32_t>(feature), zero, one);
}

inline void tree_node_to_text(const decision_tree& tree, std::int32_t idx,
                              std::ostream& os, std::size_t indent) {
    const std::string pad(indent * 2, ' ');
    const auto& nd = tree.at(idx);
    if (nd.is_leaf()) {
        os << pad << "leaf " << int(nd.label) << "\n";
        return;
    }
    os << pad << "x" << nd.feature << "?\n";
    os << pad << "= 0:\n";
    tree_node_to_text(tree, nd.zero, os, indent + 1);
    os << pad << "= 1:\n";
    tree_node_to_text(tree, nd.one, os, indent + 1);
}

} // namespace detail

inline nlohmann::ordered_json tree_to_json(const decision_tree& tree) {
    return detail::tree_node_to_json(tree, tree.root());
}

inline decision_tree tree_from_json(const nlohmann::json& j) {
    decision_tree tree;
    tree.set_root(detail::tree_node_from_json(j, tree));
    return tree;
}

/// Indented text rendering of the tree.
inline std::string tree_to_text(const decision_tree& tree) {
    std::ostringstream os;
    detail::tree_node_to_text(tree, tree.root(), os, 0);
    return os.str();
}

inline bool operator==(const decision_tree& a, const decision_tree& b) {
    return tree_to_json(a) == tree_to_json(b);
}

} // namespace id3lab
