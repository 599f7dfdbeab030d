#include <algorithm>
#include <numeric>
#include <vector>

#include <doctest.h>

#include "radixlab/chain_laws.hpp"
#include "radixlab/oracle.hpp"
#include "support/brute_force.hpp"

using namespace radixlab;

namespace {

Rational q(const char* text) { return parse_rational(text); }
RadixTree T(const char* text) { return RadixTree::parse(text); }

// Bridge law obtained by pruning the highest label under every labeling.
oracle::PathLaw bridge_by_pruning(const RadixTree& t) {
    std::vector<std::size_t> perm(t.leaf_count());
    std::iota(perm.begin(), perm.end(), 0);
    oracle::PathLaw law;
    std::size_t count = 0;
    do {
        std::vector<Word> leaf_of_label;
        for (auto i : perm) leaf_of_label.push_back(t.leaves()[i]);
        RadixTree cur = t;
        oracle::Path path{cur};
        while (leaf_of_label.size() > 1) {
            const Word top = leaf_of_label.back();
            leaf_of_label.pop_back();
            const auto pruned = prune_leaf(cur, top);
            if (pruned.merged_leaf) {
                for (auto& w : leaf_of_label) {
                    if (w == top.sibling()) w = *pruned.merged_leaf;
                }
            }
            cur = pruned.tree;
            path.push_back(cur);
        }
        std::reverse(path.begin(), path.end());
        law[path] += 1;
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (auto& [p, mass] : law) mass /= count;
    return law;
}

}  // namespace

TEST_CASE("shape counts") {
    CHECK(oracle::enumerate_shapes(1, 0) == std::vector<RadixTree>{RadixTree()});
    CHECK(oracle::enumerate_shapes(2, 2).size() == 3);
    CHECK(oracle::enumerate_shapes(2, 3).size() == 7);
    for (std::size_t n = 1; n <= 5; ++n) {
        for (std::size_t d = 0; d <= 4; ++d) {
            const auto trees = oracle::enumerate_shapes(n, d);
            CHECK(trees.size() == oracle::count_shapes(n, d));
            CHECK(std::is_sorted(trees.begin(), trees.end()));
            for (const auto& t : trees) CHECK(t.leaf_count() == n);
        }
    }
    CHECK_THROWS(oracle::enumerate_shapes(12, 12, 1000));
}

TEST_CASE("shape enumeration matches input enumeration support") {
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto support = brute::marginals(n, 3, q("1/2"));
        const auto trees = oracle::enumerate_shapes(n, 3);
        REQUIRE(support.size() == trees.size());
        for (const auto& t : trees) {
            brute::Leaves leaves;
            for (const auto& w : t.leaves()) leaves.insert(w.bits());
            CHECK(support.count(leaves) == 1);
        }
    }
}

TEST_CASE("exact path laws") {
    const auto single = oracle::exact_path_laws(T("0,1"));
    CHECK(single.conditional.size() == 1);
    CHECK(single.conditional.begin()->second == 1);

    const auto law = oracle::exact_path_laws(T("00,01,1"));
    CHECK(law.total == q("3/16"));
    CHECK(law.conditional.at({RadixTree(), T("0,1"), T("00,01,1")}) == q("2/3"));
    CHECK(law.conditional.at({RadixTree(), T("00,01"), T("00,01,1")}) == q("1/3"));
}

TEST_CASE("bridge law equals uniform-label pruning") {
    for (std::size_t n = 2; n <= 4; ++n) {
        for (const auto& t : oracle::enumerate_shapes(n, 3)) {
            CHECK_MESSAGE(oracle::exact_path_laws(t).conditional == bridge_by_pruning(t), t.to_string());
        }
    }
}

TEST_CASE("input path law matches independent enumeration") {
    const auto nu = SourceMeasure::bernoulli(q("1/3"));
    const auto mine = oracle::input_path_law(nu, 3, 3);
    const auto ref = brute::path_law(3, 3, q("1/3"));
    REQUIRE(mine.size() == ref.size());
    for (const auto& [path, mass] : ref) {
        oracle::Path p;
        for (const auto& leaves : path) p.push_back(T(brute::join(leaves).c_str()));
        CHECK(mine.at(p) == mass);
    }
}

TEST_CASE("killed path laws of the four atomic measures") {
    for (int j = 1; j <= 4; ++j) {
        const auto law = oracle::killed_path_law(counterexample_measure(j));
        CHECK(law.size() == 2);
        CHECK(law.at({RadixTree()}) == q("5/9"));
        CHECK(law.at({RadixTree(), T("0,1")}) == q("4/9"));
    }
    const auto nu1 = counterexample_measure(1);
    CHECK(theta(nu1, RadixTree()) == q("5/9"));
    CHECK(theta(nu1, T("0,1")) == q("4/9"));
}

TEST_CASE("definitional recheck") {
    for (const auto& nu : {SourceMeasure::fair_coin(), SourceMeasure::bernoulli(q("1/3")), counterexample_measure(1)}) {
        const auto report = oracle::definitional_recheck(nu, {3, 3});
        CHECK_MESSAGE(report.ok(), report.to_json(true));
        CHECK(report.records.size() > 10);
    }
    const auto report = oracle::definitional_recheck(SourceMeasure::bernoulli(q("1/3")), {3, 3});
    const auto summary = report.summary();
    for (const char* id : {"margindist", "backward", "h-transform"}) {
        REQUIRE(summary.count(id) == 1);
        CHECK(summary.at(id).first > 0);
    }
}
