#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <string>
#include <vector>

#include "id3lab/assignment.hpp"
#include "id3lab/bitvec.hpp"
#include "id3lab/dataset.hpp"
#include "id3lab/target.hpp"
#include "id3lab/tree.hpp"

#include "test_util.hpp"

using namespace id3lab;

namespace {

dataset make_dataset(std::size_t n, const std::vector<std::pair<std::string, int>>& rows) {
    dataset data(n);
    for (const auto& [bits, label] : rows) {
        example ex;
        ex.bits = bitvec::from_string(bits);
        ex.label = static_cast<std::uint8_t>(label);
        data.push_back(std::move(ex));
    }
    return data;
}

std::vector<std::uint32_t> iota_support(std::size_t k) {
    std::vector<std::uint32_t> support(k);
    std::iota(support.begin(), support.end(), 0u);
    return support;
}

/// Full-depth tree over features 0..k-1 reading off a truth table.
std::int32_t build_table_tree(decision_tree& tree, const std::vector<std::uint8_t>& table,
                              std::size_t k, std::size_t depth, std::uint32_t pattern) {
    if (depth == k) return tree.add_leaf(table[pattern]);
    const std::int32_t zero = build_table_tree(tree, table, k, depth + 1, pattern);
    const std::int32_t one =
        build_table_tree(tree, table, k, depth + 1, pattern | (1u << depth));
    return tree.add_split(static_cast<std::uint32_t>(depth), zero, one);
}

} // namespace

TEST_CASE("bitvec basics") {
    bitvec v(70);
    REQUIRE(v.size() == 70);
    v.set(0, true);
    v.set(69, true);
    CHECK(v.get(0));
    CHECK(v.get(69));
    CHECK_FALSE(v.get(33));
    CHECK(v.to_string() == bitvec::from_string(v.to_string()).to_string());
    CHECK_THROWS_AS(bitvec::from_string("01x"), std::invalid_argument);
}

TEST_CASE("restrict_dataset filters by the fixed coordinates") {
    const dataset all = make_dataset(2, {{"00", 0}, {"01", 1}, {"10", 1}, {"11", 0}});

    SECTION("w fixing the first coordinate keeps the matching half") {
        const auto sub = restrict_dataset(all, partial_assignment::from_string("1*"));
        REQUIRE(sub.size() == 2);
        CHECK(sub[0].bits.to_string() == "10");
        CHECK(sub[1].bits.to_string() == "11");
    }
    SECTION("all-free w is the identity") {
        CHECK(restrict_dataset(all, partial_assignment(2)) == all);
    }
    SECTION("no consistent example gives an empty dataset") {
        const dataset small = make_dataset(2, {{"00", 0}, {"01", 0}});
        CHECK(restrict_dataset(small, partial_assignment::from_string("1*")).empty());
    }
    SECTION("dimension mismatch throws") {
        CHECK_THROWS_AS(restrict_dataset(all, partial_assignment(3)),
                        std::invalid_argument);
    }
}

TEST_CASE("restricting twice equals restricting by the merge") {
    rng gen(11);
    for (int round = 0; round < 50; ++round) {
        const std::size_t n = 3 + gen.below(5);
        const dataset data = testutil::random_dataset(gen, n, 40);
        partial_assignment w1(n), w2(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = gen.below(4);
            if (r == 0) w1.fix(i, gen.bernoulli(0.5));
            if (r == 1) w2.fix(i, gen.bernoulli(0.5));
        }
        const auto composed = restrict_dataset(restrict_dataset(data, w1), w2);
        const auto merged = restrict_dataset(data, merge(w1, w2));
        CHECK(composed == merged);
        CHECK(composed.size() <= data.size());
    }
}

TEST_CASE("restriction preserves the original example order") {
    rng gen(13);
    for (int round = 0; round < 30; ++round) {
        const std::size_t n = 2 + gen.below(5);
        const dataset data = testutil::random_dataset(gen, n, 60);
        partial_assignment w(n);
        for (std::size_t i = 0; i < n; ++i)
            if (gen.bernoulli(0.3)) w.fix(i, gen.bernoulli(0.5));

        const auto sub = restrict_dataset(data, w);
        std::size_t cursor = 0;
        for (const auto& ex : data.examples()) {
            if (!w.consistent(ex.bits)) continue;
            REQUIRE(cursor < sub.size());
            CHECK(sub[cursor] == ex);
            ++cursor;
        }
        CHECK(cursor == sub.size());
    }
}

TEST_CASE("dataset parser survives random corruption") {
    const dataset data = make_dataset(3, {{"010", 1}, {"111", 0}, {"000", 0}});
    const std::string text = dataset_to_string(data);
    rng gen(37);
    for (int round = 0; round < 300; ++round) {
        std::string mutated = text;
        const auto pos = gen.below(mutated.size());
        mutated[pos] = static_cast<char>(gen.below(256));
        try {
            const auto parsed = dataset_from_string(mutated);
            // a mutation that still parses must round-trip cleanly
            CHECK(dataset_to_string(parsed).size() >= 8);
        } catch (const std::invalid_argument&) {
            // rejected corruption is fine
        }
    }
}

TEST_CASE("partial assignments refuse to reassign a fixed coordinate") {
    partial_assignment w(4);
    w.fix(2, true);
    CHECK_THROWS_AS(w.fix(2, false), std::invalid_argument);

    partial_assignment other(4);
    other.fix(2, false);
    CHECK_THROWS_AS(merge(w, other), std::invalid_argument);
    CHECK(w.to_string() == "**1*");
    CHECK(partial_assignment::from_string("**1*") == w);
}

TEST_CASE("evaluate_target indexes the table by the support bits") {
    const std::size_t n = 8;

    SECTION("parity with one support bit set") {
        const auto parity = make_parity(n, {0, 1});
        CHECK(evaluate_target(parity, bitvec::from_string("10000000")) == 1);
        CHECK(evaluate_target(parity, bitvec::from_string("11000000")) == 0);
    }
    SECTION("constant zero table") {
        const target_function zero(n, {0, 1}, {0, 0, 0, 0});
        for (std::uint32_t p = 0; p < 4; ++p) {
            bitvec x(n);
            x.set(0, p & 1);
            x.set(1, p & 2);
            CHECK(evaluate_target(zero, x) == 0);
        }
    }
    SECTION("AND truth table lookup") {
        const target_function land(n, {0, 1}, {0, 0, 0, 1});
        CHECK(evaluate_target(land, bitvec::from_string("11000000")) == 1);
        CHECK(evaluate_target(land, bitvec::from_string("01000000")) == 0);
    }
    SECTION("length mismatch throws") {
        const auto parity = make_parity(n, {0, 1});
        CHECK_THROWS_AS(evaluate_target(parity, bitvec(4)), std::invalid_argument);
    }
}

TEST_CASE("evaluate_target ignores every non-support coordinate") {
    rng gen(23);
    for (int round = 0; round < 60; ++round) {
        const std::size_t n = 6 + gen.below(6);
        const std::size_t k = 1 + gen.below(4);
        const auto support = testutil::random_support(gen, n, k);
        const target_function f(n, support, testutil::random_nonconstant_table(gen, k));

        bitvec x(n);
        for (std::size_t i = 0; i < n; ++i) x.set(i, gen.bernoulli(0.5));
        const auto before = evaluate_target(f, x);
        for (std::size_t i = 0; i < n; ++i) {
            if (f.in_support(static_cast<std::uint32_t>(i))) continue;
            bitvec flipped = x;
            flipped.set(i, !x.get(i));
            CHECK(evaluate_target(f, flipped) == before);
        }
    }
}

TEST_CASE("make_parity builds the popcount table") {
    CHECK(make_parity(4, {0}).table() == std::vector<std::uint8_t>{0, 1});
    CHECK(make_parity(4, {0, 1}).table()[3] == 0); // even sum
    CHECK(make_parity(4, {0, 1, 2}).table()[7] == 1);
    CHECK_THROWS_AS(make_parity(4, {}), std::invalid_argument);
    CHECK_THROWS_AS(make_parity(4, {5}), std::invalid_argument);
}

TEST_CASE("evaluate_tree follows the bits to a leaf") {
    SECTION("single leaf") {
        const auto tree = decision_tree::leaf(1);
        CHECK(evaluate_tree(tree, bitvec(3)) == 1);
        CHECK(tree.depth() == 0);
        CHECK(tree.node_count() == 1);
    }
    SECTION("dictator on feature 0") {
        decision_tree tree;
        const auto zero = tree.add_leaf(0);
        const auto one = tree.add_leaf(1);
        tree.set_root(tree.add_split(0, zero, one));
        for (int b = 0; b < 2; ++b) {
            bitvec x(2);
            x.set(0, b);
            x.set(1, !b);
            CHECK(evaluate_tree(tree, x) == b);
        }
    }
    SECTION("full tree from a parity table reproduces the parity") {
        for (std::size_t k = 1; k <= 4; ++k) {
            const auto parity = make_parity(k, iota_support(k));
            decision_tree tree;
            tree.set_root(build_table_tree(tree, parity.table(), k, 0, 0));
            for (std::uint32_t pattern = 0; pattern < (1u << k); ++pattern) {
                bitvec x(k);
                for (std::size_t i = 0; i < k; ++i) x.set(i, pattern & (1u << i));
                CHECK(evaluate_tree(tree, x) == evaluate_target(parity, x));
            }
        }
    }
}

TEST_CASE("trees reject repeated features along a path") {
    decision_tree tree;
    const auto leaf0 = tree.add_leaf(0);
    const auto leaf1 = tree.add_leaf(1);
    const auto inner = tree.add_split(3, leaf0, leaf1);
    const auto outer = tree.add_split(3, inner, leaf1);
    CHECK_THROWS_AS(tree.set_root(outer), std::invalid_argument);
}

TEST_CASE("tree JSON round-trips") {
    decision_tree tree;
    const auto leaf0 = tree.add_leaf(0);
    const auto leaf1 = tree.add_leaf(1);
    const auto inner = tree.add_split(2, leaf0, leaf1);
    tree.set_root(tree.add_split(0, inner, leaf1));

    const auto j = tree_to_json(tree);
    CHECK(j.at("feature") == 0);
    const auto back = tree_from_json(j);
    CHECK(back == tree);
    CHECK(tree_to_text(back) == tree_to_text(tree));
    CHECK(back.split_features() == std::vector<std::uint32_t>{0, 2});
}

TEST_CASE("traced evaluation consults only path features") {
    decision_tree tree;
    const auto leaf0 = tree.add_leaf(0);
    const auto leaf1 = tree.add_leaf(1);
    const auto inner = tree.add_split(2, leaf0, leaf1);
    tree.set_root(tree.add_split(0, inner, leaf1));

    std::vector<std::uint32_t> consulted;
    bitvec x(4);
    evaluate_tree_traced(tree, x, consulted); // 0 -> zero branch -> 2
    CHECK(consulted == std::vector<std::uint32_t>{0, 2});
    x.set(0, true);
    evaluate_tree_traced(tree, x, consulted);
    CHECK(consulted == std::vector<std::uint32_t>{0});
}

TEST_CASE("dataset text format round-trips byte for byte") {
    const dataset data = make_dataset(3, {{"010", 1}, {"111", 0}, {"000", 0}});
    const std::string text = dataset_to_string(data);
    CHECK(text == "n=3 m=3\n010,1\n111,0\n000,0\n");

    const dataset back = dataset_from_string(text);
    CHECK(back == data);
    CHECK(dataset_to_string(back) == text);

    CHECK_THROWS_AS(dataset_from_string("garbage\n"), std::invalid_argument);
    CHECK_THROWS_AS(dataset_from_string("n=3 m=1\n01,1\n"), std::invalid_argument);
    CHECK_THROWS_AS(dataset_from_string("n=3 m=1\n010,x\n"), std::invalid_argument);
    CHECK_THROWS_AS(dataset_from_string("n=3 m=2\n010,1\n"), std::invalid_argument);
}

TEST_CASE("dataset enforces a uniform dimension") {
    dataset data(3);
    example ex;
    ex.bits = bitvec(2);
    CHECK_THROWS_AS(data.push_back(ex), std::invalid_argument);
}
