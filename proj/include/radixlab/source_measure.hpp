#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "radixlab/infinite_string.hpp"
#include "radixlab/rational.hpp"
#include "radixlab/rng.hpp"
#include "radixlab/word.hpp"

namespace radixlab {

class SourceMeasure;

/// i.i.d. bits with P(bit = 1) = p1.
struct Bernoulli {
    Rational p1;
};

/// First bit from `initial`, then transition[i][j] = P(next = j | current = i).
struct MarkovSource {
    std::array<Rational, 2> initial;
    std::array<std::array<Rational, 2>, 2> transition;
};

/// Step density on the 2^depth dyadic cells; weights[k] is the mass of the cell
/// whose address is k written in `depth` bits (most significant bit first).
/// Below the resolution, mass splits uniformly.
struct DyadicDensity {
    std::size_t depth = 0;
    std::vector<Rational> weights;
};

struct Atom {
    InfiniteString string;
    Rational mass;
};

/// Finitely many eventually periodic atoms; masses sum to 1.
struct Atomic {
    std::vector<Atom> atoms;
};

struct MixturePart;

/// Convex combination of measures.
struct Mixture {
    std::vector<MixturePart> parts;
};

/// A probability measure ν on {0,1}^∞ with rational cylinder masses.
/// Immutable; copies share the same parameters.
class SourceMeasure {
public:
    using Kind = std::variant<Bernoulli, MarkovSource, DyadicDensity, Atomic, Mixture>;

    /// Factories validate their parameters and throw Error(InvalidMeasure).
    static SourceMeasure fair_coin();
    static SourceMeasure bernoulli(Rational p1);
    static SourceMeasure markov(std::array<Rational, 2> initial, std::array<std::array<Rational, 2>, 2> transition);
    static SourceMeasure dyadic_density(std::size_t depth, std::vector<Rational> weights);
    static SourceMeasure atomic(std::vector<Atom> atoms);
    static SourceMeasure mixture(std::vector<MixturePart> parts);

    /// JSON config, e.g. {"type":"bernoulli","p1":"3/10"}.
    static SourceMeasure from_json(std::string_view json);
    /// A JSON document, or one of the presets: gamma, nu1, nu2, nu3, nu4, abcd.
    static SourceMeasure from_argument(std::string_view text);

    [[nodiscard]] const Kind& kind() const noexcept { return *kind_; }
    [[nodiscard]] std::string to_json() const;

private:
    explicit SourceMeasure(Kind kind);
    std::shared_ptr<const Kind> kind_;
};

struct MixturePart {
    Rational weight;
    SourceMeasure measure;
};

/// ν(τ(y)).
Prob cylinder_mass(const SourceMeasure& nu, const Word& y);

/// P(next bit = 1 | prefix). Throws Error(ZeroMassPrefix) if ν(τ(prefix)) = 0.
Rational next_bit_probability(const SourceMeasure& nu, const Word& prefix);

/// Draws the bit following `prefix` under ν.
int sample_next_bit(const SourceMeasure& nu, const Word& prefix, Rng& rng);

/// Atoms of ν with their absolute masses; equal atoms from different parts are merged.
std::vector<Atom> atoms_of(const SourceMeasure& nu);

/// Total mass carried by atoms.
Rational atomic_weight(const SourceMeasure& nu);
inline bool is_diffuse(const SourceMeasure& nu) { return atomic_weight(nu) == 0; }
inline bool is_purely_atomic(const SourceMeasure& nu) { return atomic_weight(nu) == 1; }

/// ν̄_y ⊗ ν̄_y{x' = x''}: chance that two independent draws from ν restricted
/// to τ(y) coincide. Zero when ν(τ(y)) = 0.
Prob collision_mass(const SourceMeasure& nu, const Word& y);

/// Σ over words u of length p of ν(τ(yu))² / ν(τ(y)), i.e. ν(τ(y)) times the
/// chance that two draws from τ(y) still agree p bits below y. Zero when
/// ν(τ(y)) = 0. Closed form for Bernoulli sources.
Rational agreement_tail(const SourceMeasure& nu, const Word& y, std::size_t p);

/// The measures ν₁..ν₄ built from a = 0(0), b = 0(1), c = (1), d = 1(0), and
/// the uniform measure on {a, b, c, d}.
SourceMeasure counterexample_measure(int index);
SourceMeasure uniform_four_atoms();

}  // namespace radixlab
