#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "radixlab/radix_tree.hpp"
#include "radixlab/rational.hpp"
#include "radixlab/source_measure.hpp"

namespace radixlab::oracle {

/// Refuse enumerations projected to exceed this many items.
inline constexpr std::uint64_t kDefaultEnumerationLimit = 1'000'000;

/// |{t ∈ 𝕊_n : every leaf depth <= depth_cap}|, saturating at UINT64_MAX.
std::uint64_t count_shapes(std::size_t n, std::size_t depth_cap);

/// All trees with n leaves and leaf depths <= depth_cap, sorted. Built
/// generatively (split or descend), not by filtering with is_valid_shape.
std::vector<RadixTree> enumerate_shapes(std::size_t n, std::size_t depth_cap,
                                        std::uint64_t limit = kDefaultEnumerationLimit);

using Path = std::vector<RadixTree>;
using PathLaw = std::map<Path, Rational>;

struct BridgeLaw {
    /// P{(R_1..R_M) = path | R_M = t}.
    PathLaw conditional;
    /// Σ of unconditioned path masses; equals P{R_M = t}.
    Rational total;
};

/// Every forward path from {∅} to t under the fair-coin chain. Limited to
/// M(t) <= 6 and depth <= 5 (Error(ExplosionGuard)); throws
/// Error(IdentityViolation) if the path total differs from the marginal law.
BridgeLaw exact_path_laws(const RadixTree& t);

/// Exact law of the path of trees before the cemetery for a purely atomic ν,
/// by enumerating atom sequences up to the first repeat.
PathLaw killed_path_law(const SourceMeasure& nu);

/// Law of (R_1..R_n) restricted to paths whose leaves have depth <= depth,
/// obtained by summing over n-tuples of depth-bit input prefixes.
PathLaw input_path_law(const SourceMeasure& nu, std::size_t n, std::size_t depth);

struct CheckRecord {
    std::string identity;
    std::string instance;
    std::string expected;
    std::string actual;
    bool pass = false;
};

struct Report {
    std::string measure;
    std::vector<CheckRecord> records;

    [[nodiscard]] std::size_t failures() const;
    [[nodiscard]] bool ok() const { return failures() == 0; }
    /// Records as a JSON array of {identity, instance, expected, actual, status};
    /// with only_failures, passing records are dropped.
    [[nodiscard]] std::string to_json(bool only_failures = false) const;
    /// identity -> (passed, failed)
    [[nodiscard]] std::map<std::string, std::pair<std::size_t, std::size_t>> summary() const;
};

struct Scope {
    std::size_t max_leaves = 4;
    std::size_t max_depth = 4;
};

/// Recomputes every closed-form law from brute-force input enumeration and
/// compares with exact equality.
Report definitional_recheck(const SourceMeasure& nu, Scope scope = {});

}  // namespace radixlab::oracle
