#include <cmath>
#include <map>
#include <vector>

#include <doctest.h>

#include "radixlab/error.hpp"
#include "radixlab/rng.hpp"
#include "radixlab/source_measure.hpp"

using namespace radixlab;

namespace {

Rational q(const char* text) { return parse_rational(text); }

std::vector<SourceMeasure> zoo() {
    return {
        SourceMeasure::fair_coin(),
        SourceMeasure::bernoulli(q("3/10")),
        SourceMeasure::markov({q("1/4"), q("3/4")}, {{{q("2/3"), q("1/3")}, {q("1/5"), q("4/5")}}}),
        SourceMeasure::dyadic_density(2, {q("1/8"), q("1/2"), q("0"), q("3/8")}),
        counterexample_measure(1),
        SourceMeasure::mixture({{q("1/2"), SourceMeasure::bernoulli(q("1/3"))}, {q("1/2"), counterexample_measure(4)}}),
    };
}

}  // namespace

TEST_CASE("cylinder masses") {
    CHECK(cylinder_mass(SourceMeasure::fair_coin(), Word("01")) == q("1/4"));
    CHECK(cylinder_mass(SourceMeasure::bernoulli(q("3/10")), Word("0")) == q("7/10"));
    CHECK(cylinder_mass(counterexample_measure(1), Word("1")) == q("2/3"));
    CHECK(cylinder_mass(counterexample_measure(1), Word("01")) == 0);
    const auto m = SourceMeasure::markov({q("1/4"), q("3/4")}, {{{q("2/3"), q("1/3")}, {q("1/5"), q("4/5")}}});
    CHECK(cylinder_mass(m, Word("101")) == q("3/4") * q("1/5") * q("1/3"));
    const auto d = SourceMeasure::dyadic_density(2, {q("1/8"), q("1/2"), q("0"), q("3/8")});
    CHECK(cylinder_mass(d, Word("01")) == q("1/2"));
    CHECK(cylinder_mass(d, Word("0")) == q("5/8"));
    CHECK(cylinder_mass(d, Word("011")) == q("1/4"));
}

TEST_CASE("additivity up to depth 16") {
    for (const auto& nu : zoo()) {
        std::vector<Word> layer{Word{}};
        std::size_t failures = 0;
        for (std::size_t depth = 0; depth < 16; ++depth) {
            std::vector<Word> next;
            for (const auto& y : layer) {
                const auto a = cylinder_mass(nu, y.child(0)).value();
                const auto b = cylinder_mass(nu, y.child(1)).value();
                if (cylinder_mass(nu, y).value() != a + b) ++failures;
                next.push_back(y.child(0));
                next.push_back(y.child(1));
            }
            layer = std::move(next);
        }
        CHECK_MESSAGE(failures == 0, nu.to_json());
    }
}

TEST_CASE("next bit probabilities") {
    CHECK(next_bit_probability(SourceMeasure::fair_coin(), Word("0110")) == q("1/2"));
    CHECK(next_bit_probability(counterexample_measure(1), Word("1")) == 1);
    try {
        next_bit_probability(counterexample_measure(1), Word("01"));
        FAIL("expected ZeroMassPrefix");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ZeroMassPrefix);
    }
}

TEST_CASE("sampled prefixes match cylinder masses") {
    const std::size_t samples = 10000;
    for (const auto& nu : zoo()) {
        Rng rng(7, 0);
        std::map<Word, std::size_t> hits;
        for (std::size_t s = 0; s < samples; ++s) {
            Word w;
            for (int d = 0; d < 3; ++d) {
                w = w.child(sample_next_bit(nu, w, rng));
                hits[w]++;
            }
        }
        for (const auto& [y, count] : hits) {
            const double p = cylinder_mass(nu, y).to_double();
            const double freq = static_cast<double>(count) / samples;
            CHECK_MESSAGE(std::abs(freq - p) <= 4 * std::sqrt(p * (1 - p) / samples) + 1e-12, y.to_string());
        }
    }
}

TEST_CASE("sampling is reproducible") {
    const auto nu = SourceMeasure::bernoulli(q("3/10"));
    Rng a(42, 3), b(42, 3);
    for (int i = 0; i < 100; ++i) CHECK(sample_next_bit(nu, Word(), a) == sample_next_bit(nu, Word(), b));
}

TEST_CASE("collision masses") {
    CHECK(collision_mass(SourceMeasure::fair_coin(), Word("01")) == 0);
    CHECK(collision_mass(counterexample_measure(1), Word()) == q("5/9"));
    CHECK(collision_mass(counterexample_measure(1), Word("0")) == 1);
    CHECK(collision_mass(counterexample_measure(1), Word("01")) == 0);
    CHECK(collision_mass(uniform_four_atoms(), Word()) == q("1/4"));
    CHECK(collision_mass(uniform_four_atoms(), Word("1")) == q("1/2"));
}

TEST_CASE("atomic weight") {
    CHECK(is_diffuse(SourceMeasure::bernoulli(q("1/3"))));
    CHECK(is_purely_atomic(counterexample_measure(2)));
    const auto mix = SourceMeasure::mixture({{q("1/4"), counterexample_measure(1)}, {q("3/4"), SourceMeasure::fair_coin()}});
    CHECK(atomic_weight(mix) == q("1/4"));
    CHECK(atoms_of(mix).size() == 2);
}

TEST_CASE("agreement tail") {
    const Rational p1 = q("3/10");
    const auto nu = SourceMeasure::bernoulli(p1);
    Rational r = p1 * p1 + (1 - p1) * (1 - p1);
    CHECK(agreement_tail(nu, Word("1"), 2) == q("3/10") * r * r);
    const auto m = SourceMeasure::markov({q("1/4"), q("3/4")}, {{{q("2/3"), q("1/3")}, {q("1/5"), q("4/5")}}});
    Rational brute = 0;
    for (const char* u : {"00", "01", "10", "11"}) {
        const auto c = cylinder_mass(m, Word(std::string("0") + u)).value();
        brute += c * c;
    }
    CHECK(agreement_tail(m, Word("0"), 2) == brute / cylinder_mass(m, Word("0")).value());
    CHECK(agreement_tail(counterexample_measure(1), Word(), 5) == q("5/9"));
    CHECK(agreement_tail(counterexample_measure(1), Word("01"), 3) == 0);
}

TEST_CASE("json configs") {
    const auto nu = SourceMeasure::from_json(R"j({"type":"bernoulli","p1":"3/10"})j");
    CHECK(cylinder_mass(nu, Word("1")) == q("3/10"));
    const auto a = SourceMeasure::from_json(R"j({"type":"atomic","atoms":[{"s":"0(0)","mass":"1/3"},{"s":"1(1)","mass":"2/3"}]})j");
    CHECK(cylinder_mass(a, Word("11")) == q("2/3"));
    const auto mix = SourceMeasure::from_json(
        R"j({"type":"mixture","parts":[{"w":"1/2","m":{"type":"fair"}},{"w":"1/2","m":{"type":"bernoulli","p1":"1/4"}}]})j");
    CHECK(cylinder_mass(mix, Word("1")) == q("3/8"));
    for (const auto& m : zoo()) CHECK(SourceMeasure::from_json(m.to_json()).to_json() == m.to_json());
    CHECK(SourceMeasure::from_argument("nu3").to_json() == counterexample_measure(3).to_json());
}

TEST_CASE("invalid configs are rejected") {
    const char* bad[] = {
        R"j({"type":"bernoulli","p1":0.3})j",
        R"j({"type":"bernoulli","p1":"0.3"})j",
        R"j({"type":"bernoulli","p1":"3/2"})j",
        R"j({"type":"atomic","atoms":[{"s":"0(0)","mass":"1/3"}]})j",
        R"j({"type":"atomic","atoms":[{"s":"0(0)","mass":"1/2"},{"s":"(0)","mass":"1/2"}]})j",
        R"j({"type":"dyadic_density","depth":1,"weights":["1/2","1/3"]})j",
        R"j({"type":"mixture","parts":[{"w":"1/3","m":{"type":"fair"}}]})j",
        R"j({"type":"unknown"})j",
    };
    for (const char* text : bad) {
        bool threw = false;
        try {
            SourceMeasure::from_json(text);
        } catch (const Error& e) {
            threw = e.kind() == ErrorKind::InvalidMeasure || e.kind() == ErrorKind::ParseError;
        }
        CHECK_MESSAGE(threw, text);
    }
}
