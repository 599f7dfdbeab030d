#include "radixlab/source_measure.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "radixlab/error.hpp"

namespace radixlab {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::InvalidMeasure, what);
}

void require_prob(const Rational& q, const std::string& what) {
    require(q >= 0 && q <= 1, what + " must lie in [0,1], got " + to_fraction_string(q));
}

Rational rational_field(const json& j, const std::string& what) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer() || j.is_number_unsigned()) return Rational(j.get<long>());
    throw Error(ErrorKind::InvalidMeasure, what + " must be an exact rational string \"num/den\" (floats are rejected)");
}

json rational_json(const Rational& q) { return to_fraction_string(q); }

Rational dyadic_cell_sum(const DyadicDensity& d, const Word& y) {
    // |y| <= depth: cells whose address starts with y.
    std::size_t index = 0;
    for (std::size_t i = 0; i < y.size(); ++i) index = (index << 1) | static_cast<std::size_t>(y.bit(i));
    const std::size_t shift = d.depth - y.size();
    Rational sum = 0;
    for (std::size_t k = index << shift; k < ((index + 1) << shift); ++k) sum += d.weights[k];
    return sum;
}

Rational mass_of(const SourceMeasure& nu, const Word& y);

Rational mass_of(const Bernoulli& b, const Word& y) {
    std::size_t ones = 0;
    for (std::size_t i = 0; i < y.size(); ++i) ones += static_cast<std::size_t>(y.bit(i));
    const std::size_t zeros = y.size() - ones;
    Rational q0 = 1 - b.p1;
    mpz_class n1, d1, n0, d0;
    mpz_pow_ui(n1.get_mpz_t(), b.p1.get_num_mpz_t(), ones);
    mpz_pow_ui(d1.get_mpz_t(), b.p1.get_den_mpz_t(), ones);
    mpz_pow_ui(n0.get_mpz_t(), q0.get_num_mpz_t(), zeros);
    mpz_pow_ui(d0.get_mpz_t(), q0.get_den_mpz_t(), zeros);
    Rational out(n1 * n0, d1 * d0);
    out.canonicalize();
    return out;
}

Rational mass_of(const MarkovSource& m, const Word& y) {
    if (y.empty()) return 1;
    Rational out = m.initial[static_cast<std::size_t>(y.bit(0))];
    for (std::size_t i = 1; i < y.size() && out != 0; ++i) {
        out *= m.transition[static_cast<std::size_t>(y.bit(i - 1))][static_cast<std::size_t>(y.bit(i))];
    }
    return out;
}

Rational mass_of(const DyadicDensity& d, const Word& y) {
    if (y.size() <= d.depth) return dyadic_cell_sum(d, y);
    return dyadic_cell_sum(d, y.prefix(d.depth)) * pow2(-static_cast<long>(y.size() - d.depth));
}

Rational mass_of(const Atomic& a, const Word& y) {
    Rational out = 0;
    for (const auto& atom : a.atoms) {
        if (atom.string.prefix(y.size()) == y) out += atom.mass;
    }
    return out;
}

Rational mass_of(const Mixture& m, const Word& y) {
    Rational out = 0;
    for (const auto& part : m.parts) {
        if (part.weight != 0) out += part.weight * mass_of(part.measure, y);
    }
    return out;
}

Rational mass_of(const SourceMeasure& nu, const Word& y) {
    return std::visit([&](const auto& k) { return mass_of(k, y); }, nu.kind());
}

void collect_atoms(const SourceMeasure& nu, const Rational& scale, std::vector<Atom>& out) {
    std::visit(Overloaded{
                   [&](const Atomic& a) {
                       for (const auto& atom : a.atoms) {
                           Rational mass = scale * atom.mass;
                           bool merged = false;
                           for (auto& existing : out) {
                               if (existing.string.same_as(atom.string)) {
                                   existing.mass += mass;
                                   merged = true;
                                   break;
                               }
                           }
                           if (!merged) out.push_back({atom.string, mass});
                       }
                   },
                   [&](const Mixture& m) {
                       for (const auto& part : m.parts) {
                           if (part.weight != 0) collect_atoms(part.measure, scale * part.weight, out);
                       }
                   },
                   [](const auto&) {},
               },
               nu.kind());
}

void sum_squares_below(const SourceMeasure& nu, const Word& y, const Rational& mass, std::size_t p,
                       Rational& acc) {
    if (mass == 0) return;
    if (p == 0) {
        acc += mass * mass;
        return;
    }
    const Word left = y.child(0);
    const Rational left_mass = mass_of(nu, left);
    sum_squares_below(nu, left, left_mass, p - 1, acc);
    sum_squares_below(nu, y.child(1), mass - left_mass, p - 1, acc);
}

json measure_json(const SourceMeasure& nu) {
    return std::visit(
        Overloaded{
            [](const Bernoulli& b) { return json{{"type", "bernoulli"}, {"p1", rational_json(b.p1)}}; },
            [](const MarkovSource& m) {
                json row0 = json::array({rational_json(m.transition[0][0]), rational_json(m.transition[0][1])});
                json row1 = json::array({rational_json(m.transition[1][0]), rational_json(m.transition[1][1])});
                return json{{"type", "markov"},
                            {"initial", json::array({rational_json(m.initial[0]), rational_json(m.initial[1])})},
                            {"transition", json::array({row0, row1})}};
            },
            [](const DyadicDensity& d) {
                json w = json::array();
                for (const auto& q : d.weights) w.push_back(rational_json(q));
                return json{{"type", "dyadic_density"}, {"depth", d.depth}, {"weights", w}};
            },
            [](const Atomic& a) {
                json atoms = json::array();
                for (const auto& atom : a.atoms) {
                    atoms.push_back({{"s", atom.string.to_string()}, {"mass", rational_json(atom.mass)}});
                }
                return json{{"type", "atomic"}, {"atoms", atoms}};
            },
            [](const Mixture& m) {
                json parts = json::array();
                for (const auto& part : m.parts) {
                    parts.push_back({{"w", rational_json(part.weight)}, {"m", measure_json(part.measure)}});
                }
                return json{{"type", "mixture"}, {"parts", parts}};
            },
        },
        nu.kind());
}

SourceMeasure measure_from(const json& j) {
    require(j.is_object() && j.contains("type") && j["type"].is_string(), "measure must be an object with a \"type\"");
    const auto type = j["type"].get<std::string>();
    auto field = [&](const char* name) -> const json& {
        require(j.contains(name), "measure of type " + type + " needs field \"" + name + "\"");
        return j[name];
    };
    if (type == "fair" || type == "gamma") return SourceMeasure::fair_coin();
    if (type == "bernoulli") return SourceMeasure::bernoulli(rational_field(field("p1"), "p1"));
    if (type == "markov") {
        const auto& init = field("initial");
        const auto& tr = field("transition");
        require(init.is_array() && init.size() == 2, "markov initial must have 2 entries");
        require(tr.is_array() && tr.size() == 2 && tr[0].is_array() && tr[0].size() == 2 && tr[1].is_array() &&
                    tr[1].size() == 2,
                "markov transition must be 2x2");
        return SourceMeasure::markov(
            {rational_field(init[0], "initial"), rational_field(init[1], "initial")},
            {{{rational_field(tr[0][0], "transition"), rational_field(tr[0][1], "transition")},
              {rational_field(tr[1][0], "transition"), rational_field(tr[1][1], "transition")}}});
    }
    if (type == "dyadic_density" || type == "dyadic") {
        const auto& depth = field("depth");
        require(depth.is_number_unsigned() || depth.is_number_integer(), "dyadic depth must be an integer");
        std::vector<Rational> weights;
        for (const auto& w : field("weights")) weights.push_back(rational_field(w, "weight"));
        return SourceMeasure::dyadic_density(depth.get<std::size_t>(), std::move(weights));
    }
    if (type == "atomic") {
        std::vector<Atom> atoms;
        for (const auto& a : field("atoms")) {
            require(a.is_object() && a.contains("s") && a["s"].is_string() && a.contains("mass"),
                    "atom needs \"s\" and \"mass\"");
            atoms.push_back({InfiniteString::parse(a["s"].get<std::string>()), rational_field(a["mass"], "mass")});
        }
        return SourceMeasure::atomic(std::move(atoms));
    }
    if (type == "mixture") {
        std::vector<MixturePart> parts;
        for (const auto& p : field("parts")) {
            require(p.is_object() && p.contains("w") && p.contains("m"), "mixture part needs \"w\" and \"m\"");
            parts.push_back({rational_field(p["w"], "w"), measure_from(p["m"])});
        }
        return SourceMeasure::mixture(std::move(parts));
    }
    throw Error(ErrorKind::InvalidMeasure, "unknown measure type '" + type + "'");
}

}  // namespace

SourceMeasure::SourceMeasure(Kind kind) : kind_(std::make_shared<const Kind>(std::move(kind))) {}

SourceMeasure SourceMeasure::fair_coin() { return bernoulli(Rational(1, 2)); }

SourceMeasure SourceMeasure::bernoulli(Rational p1) {
    p1.canonicalize();
    require_prob(p1, "bernoulli p1");
    return SourceMeasure{Bernoulli{std::move(p1)}};
}

SourceMeasure SourceMeasure::markov(std::array<Rational, 2> initial,
                                    std::array<std::array<Rational, 2>, 2> transition) {
    for (auto& q : initial) require_prob(q, "markov initial probability");
    require(initial[0] + initial[1] == 1, "markov initial distribution must sum to 1");
    for (auto& row : transition) {
        for (auto& q : row) require_prob(q, "markov transition probability");
        require(row[0] + row[1] == 1, "markov transition rows must sum to 1");
    }
    return SourceMeasure{MarkovSource{std::move(initial), std::move(transition)}};
}

SourceMeasure SourceMeasure::dyadic_density(std::size_t depth, std::vector<Rational> weights) {
    require(depth <= 24, "dyadic depth above 24 is not supported");
    require(weights.size() == (std::size_t{1} << depth), "dyadic density needs 2^depth weights");
    Rational total = 0;
    for (const auto& w : weights) {
        require(w >= 0, "dyadic weights must be nonnegative");
        total += w;
    }
    require(total == 1, "dyadic weights must sum to 1");
    return SourceMeasure{DyadicDensity{depth, std::move(weights)}};
}

SourceMeasure SourceMeasure::atomic(std::vector<Atom> atoms) {
    require(!atoms.empty(), "atomic measure needs at least one atom");
    Rational total = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        require(atoms[i].string.is_periodic(), "atoms must be eventually periodic");
        require(atoms[i].mass > 0, "atom masses must be positive");
        total += atoms[i].mass;
        for (std::size_t k = 0; k < i; ++k) {
            require(!atoms[i].string.same_as(atoms[k].string),
                    "duplicate atom " + atoms[i].string.to_string());
        }
    }
    require(total == 1, "atom masses must sum to 1, got " + to_fraction_string(total));
    return SourceMeasure{Atomic{std::move(atoms)}};
}

SourceMeasure SourceMeasure::mixture(std::vector<MixturePart> parts) {
    require(!parts.empty(), "mixture needs at least one part");
    Rational total = 0;
    for (const auto& p : parts) {
        require(p.weight >= 0, "mixture weights must be nonnegative");
        total += p.weight;
    }
    require(total == 1, "mixture weights must sum to 1");
    return SourceMeasure{Mixture{std::move(parts)}};
}

SourceMeasure SourceMeasure::from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidMeasure, std::string("malformed measure JSON: ") + e.what());
    }
    try {
        return measure_from(doc);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ParseError) throw Error(ErrorKind::InvalidMeasure, e.what());
        throw;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidMeasure, e.what());
    }
}

SourceMeasure SourceMeasure::from_argument(std::string_view text) {
    if (text == "gamma" || text == "fair") return fair_coin();
    if (text.size() == 3 && text.substr(0, 2) == "nu" && text[2] >= '1' && text[2] <= '4') {
        return counterexample_measure(text[2] - '0');
    }
    if (text == "abcd") return uniform_four_atoms();
    auto first = text.find_first_not_of(" \t\n");
    if (first != std::string_view::npos && text[first] == '{') return from_json(text);
    std::ifstream in{std::string(text)};
    if (!in) throw Error(ErrorKind::InvalidMeasure, "measure is neither a preset, inline JSON, nor a readable file: " +
                                                        std::string(text));
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

std::string SourceMeasure::to_json() const { return measure_json(*this).dump(); }

Prob cylinder_mass(const SourceMeasure& nu, const Word& y) { return Prob{mass_of(nu, y)}; }

Rational next_bit_probability(const SourceMeasure& nu, const Word& prefix) {
    if (const auto* b = std::get_if<Bernoulli>(&nu.kind())) return b->p1;
    if (const auto* m = std::get_if<MarkovSource>(&nu.kind())) {
        return prefix.empty() ? m->initial[1] : m->transition[static_cast<std::size_t>(prefix.bit(prefix.size() - 1))][1];
    }
    const Rational total = mass_of(nu, prefix);
    if (total == 0) {
        throw Error(ErrorKind::ZeroMassPrefix, "prefix " + prefix.to_string() + " has zero mass");
    }
    return mass_of(nu, prefix.child(1)) / total;
}

int sample_next_bit(const SourceMeasure& nu, const Word& prefix, Rng& rng) {
    // The fast paths above skip the mass check; do it here for the contract.
    if (std::holds_alternative<MarkovSource>(nu.kind()) && mass_of(nu, prefix) == 0) {
        throw Error(ErrorKind::ZeroMassPrefix, "prefix " + prefix.to_string() + " has zero mass");
    }
    if (const auto* b = std::get_if<Bernoulli>(&nu.kind())) {
        if ((b->p1 == 0 || b->p1 == 1) && mass_of(nu, prefix) == 0) {
            throw Error(ErrorKind::ZeroMassPrefix, "prefix " + prefix.to_string() + " has zero mass");
        }
    }
    return rng.bernoulli(next_bit_probability(nu, prefix)) ? 1 : 0;
}

std::vector<Atom> atoms_of(const SourceMeasure& nu) {
    std::vector<Atom> out;
    collect_atoms(nu, Rational(1), out);
    return out;
}

Rational atomic_weight(const SourceMeasure& nu) {
    Rational total = 0;
    for (const auto& a : atoms_of(nu)) total += a.mass;
    return total;
}

Prob collision_mass(const SourceMeasure& nu, const Word& y) {
    const Rational total = mass_of(nu, y);
    if (total == 0) return Prob{Rational(0)};
    Rational sum = 0;
    for (const auto& a : atoms_of(nu)) {
        if (a.string.prefix(y.size()) == y) sum += a.mass * a.mass;
    }
    return Prob{sum / (total * total)};
}

Rational agreement_tail(const SourceMeasure& nu, const Word& y, std::size_t p) {
    const Rational mass = mass_of(nu, y);
    if (mass == 0) return 0;
    if (const auto* b = std::get_if<Bernoulli>(&nu.kind())) {
        const Rational same = b->p1 * b->p1 + (1 - b->p1) * (1 - b->p1);
        Rational out = mass;
        for (std::size_t i = 0; i < p; ++i) out *= same;
        return out;
    }
    Rational acc = 0;
    sum_squares_below(nu, y, mass, p, acc);
    return acc / mass;
}

SourceMeasure counterexample_measure(int index) {
    const auto a = InfiniteString::parse("0(0)");
    const auto b = InfiniteString::parse("0(1)");
    const auto c = InfiniteString::parse("(1)");
    const auto d = InfiniteString::parse("1(0)");
    const Rational third(1, 3);
    const Rational two_thirds(2, 3);
    switch (index) {
        case 1: return SourceMeasure::atomic({{a, third}, {c, two_thirds}});
        case 2: return SourceMeasure::atomic({{b, third}, {d, two_thirds}});
        case 3: return SourceMeasure::atomic({{a, two_thirds}, {c, third}});
        case 4: return SourceMeasure::atomic({{b, two_thirds}, {d, third}});
        default: throw Error(ErrorKind::PreconditionViolated, "counterexample measures are indexed 1..4");
    }
}

SourceMeasure uniform_four_atoms() {
    const Rational quarter(1, 4);
    return SourceMeasure::atomic({{InfiniteString::parse("0(0)"), quarter},
                                  {InfiniteString::parse("0(1)"), quarter},
                                  {InfiniteString::parse("(1)"), quarter},
                                  {InfiniteString::parse("1(0)"), quarter}});
}

}  // namespace radixlab
