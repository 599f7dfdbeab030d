#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <doctest.h>

#include "radixlab/chain_laws.hpp"
#include "radixlab/error.hpp"
#include "radixlab/simulator.hpp"

using namespace radixlab;

namespace {

Rational q(const char* text) { return parse_rational(text); }
RadixTree T(const char* text) { return RadixTree::parse(text); }

double within(double freq, double p, std::size_t n) { return std::abs(freq - p) / std::sqrt(p * (1 - p) / n); }

}  // namespace

TEST_CASE("chain path validation") {
    CHECK_NOTHROW(ChainPath({RadixTree(), T("0,1"), T("00,01,1")}));
    CHECK_THROWS_AS(ChainPath({T("0,1")}), Error);
    CHECK_THROWS_AS(ChainPath({RadixTree(), T("00,01,10,11")}), Error);
    CHECK(ChainPath({RadixTree()}, true).kill_time() == std::size_t{2});
}

TEST_CASE("sample chain basics") {
    const auto gamma = SourceMeasure::fair_coin();
    CHECK(sample_chain(gamma, 1, 3).trees() == std::vector<RadixTree>{RadixTree()});
    const auto path = sample_chain(gamma, 20, 3, 5);
    CHECK(path.trees().size() == 20);
    CHECK(path.trees().back() == sample_tree(gamma, 20, 3, 5));
    CHECK(path == sample_chain(gamma, 20, 3, 5));
    CHECK_THROWS_AS(sample_chain(counterexample_measure(1), 3, 1), Error);
}

TEST_CASE("two-input marginal frequencies") {
    const std::size_t reps = 10000;
    for (const char* p : {"1/2", "3/10"}) {
        const auto nu = SourceMeasure::bernoulli(q(p));
        std::size_t hits = 0;
        for (std::size_t r = 0; r < reps; ++r) hits += sample_tree(nu, 2, 11, r) == T("0,1");
        const double exact = marginal_law(nu, T("0,1")).to_double();
        CHECK(std::abs(static_cast<double>(hits) / reps - exact) <= 0.02);
    }
}

TEST_CASE("bridge to a fixed tree") {
    CHECK(sample_bridge(RadixTree(), 1).trees() == std::vector<RadixTree>{RadixTree()});
    const std::size_t reps = 10000;
    std::size_t via_pair = 0, via_cherry = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto path = sample_bridge(T("00,01,1"), 9, r);
        REQUIRE(path.trees().size() == 3);
        CHECK(path.trees().back() == T("00,01,1"));
        via_pair += path.trees()[1] == T("0,1");
        via_cherry += path.trees()[1] == T("00,01");
    }
    CHECK(via_pair + via_cherry == reps);
    CHECK(std::abs(static_cast<double>(via_pair) / reps - 2.0 / 3) <= 0.02);
}

TEST_CASE("labeled chains") {
    const auto gamma = SourceMeasure::fair_coin();
    const std::size_t reps = 10000;
    std::size_t pair = 0, label_one_left = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto chain = sample_labeled_chain(gamma, 2, 4, r);
        if (chain.path.trees().back() != T("0,1")) continue;
        ++pair;
        label_one_left += chain.trace.at(1, 2) == Word("0");
    }
    CHECK(pair > reps / 3);
    CHECK(std::abs(static_cast<double>(label_one_left) / pair - 0.5) <= 0.02);

    for (std::size_t r = 0; r < 200; ++r) {
        const auto chain = sample_labeled_chain(SourceMeasure::bernoulli(q("1/3")), 8, 4, r);
        CHECK(chain.trace.is_monotone());
        CHECK(chain.trace.meets_are_stable());
        CHECK(chain.path.trees() == sample_chain(SourceMeasure::bernoulli(q("1/3")), 8, 4, r).trees());
        const auto meet2 = common_prefix(chain.trace.at(1, 2), chain.trace.at(2, 2));
        CHECK(meet2 == common_prefix(chain.trace.at(1, 5), chain.trace.at(2, 5)));
    }
}

TEST_CASE("labels are uniform given the tree") {
    const auto gamma = SourceMeasure::fair_coin();
    const std::size_t reps = 20000;
    std::map<std::vector<Word>, std::size_t> counts;
    std::size_t total = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto chain = sample_labeled_chain(gamma, 3, 13, r);
        if (chain.path.trees().back() != T("00,01,1")) continue;
        counts[chain.path.labels().back()]++;
        ++total;
    }
    CHECK(counts.size() == 6);
    for (const auto& [labels, c] : counts) CHECK(within(static_cast<double>(c) / total, 1.0 / 6, total) < 4);
}

TEST_CASE("killed chains") {
    const std::size_t reps = 10000;
    for (int j = 1; j <= 4; ++j) {
        const auto nu = counterexample_measure(j);
        std::size_t short_paths = 0, long_paths = 0;
        for (std::size_t r = 0; r < reps; ++r) {
            const auto path = sample_killed_chain(nu, 21, 10, r);
            CHECK(path.killed());
            short_paths += path.trees() == std::vector<RadixTree>{RadixTree()};
            long_paths += path.trees() == std::vector<RadixTree>{RadixTree(), T("0,1")};
        }
        CHECK(short_paths + long_paths == reps);
        CHECK(std::abs(static_cast<double>(short_paths) / reps - 5.0 / 9) <= 0.02);
        CHECK(std::abs(static_cast<double>(long_paths) / reps - 4.0 / 9) <= 0.02);
    }
    const auto alive = sample_killed_chain(SourceMeasure::fair_coin(), 1, 6);
    CHECK_FALSE(alive.killed());
    CHECK(alive.trees().size() == 6);
}

TEST_CASE("cylinder recovery") {
    const auto nu = SourceMeasure::bernoulli(q("3/10"));
    const std::vector<RadixTree> trees{sample_tree(nu, 5000, 2)};
    CHECK(std::abs(estimate_cylinder(trees, Word("1")) - 0.30) <= 0.03);
    CHECK(std::abs(estimate_cylinder(trees, Word("11")) - 0.09) <= 0.02);
    const std::vector<RadixTree> fair{sample_tree(SourceMeasure::fair_coin(), 5000, 2)};
    CHECK(std::abs(estimate_cylinder(fair, Word("0")) - 0.5) <= 0.03);
    CHECK(estimate_cylinder(fair, Word()) == 1.0);
}

TEST_CASE("kernel convergence") {
    const auto gamma = SourceMeasure::fair_coin();
    for (const auto& row : kernel_convergence(gamma, RadixTree(), 10, 5, 1)) CHECK(row.mean == 1.0);
    const auto rows = kernel_convergence(SourceMeasure::bernoulli(q("3/10")), T("0,1"), 400, 40, 3);
    CHECK(rows.front().k == 2);
    CHECK(rows.back().k == 400);
    CHECK(std::abs(rows.back().mean - 0.84) < 0.05);
    CHECK_THROWS_AS(kernel_convergence(counterexample_measure(1), T("0,1"), 5, 2, 1), Error);
}

TEST_CASE("replica results do not depend on the thread count") {
    const auto nu = SourceMeasure::bernoulli(q("1/3"));
    const auto one = kernel_convergence(nu, T("0,1"), 60, 12, 8, 1);
    const auto four = kernel_convergence(nu, T("0,1"), 60, 12, 8, 4);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].mean == four[i].mean);
        CHECK(one[i].sd == four[i].sd);
    }
}
