#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "radixlab/word.hpp"

namespace radixlab {

/// Default number of bits probed before two black-box strings are declared equal.
inline constexpr std::size_t kDefaultProbeDepth = 4096;

/// An infinite binary string, either eventually periodic (exact) or given by a
/// black-box bit oracle.
///
/// Eventually periodic strings are kept normalized: the period is primitive
/// and the preperiod is as short as possible, so two such strings are equal
/// iff their (preperiod, period) pairs are equal.
class InfiniteString {
public:
    using BitOracle = std::function<int(std::size_t)>;

    /// Throws Error(ParseError) if the period is empty.
    static InfiniteString periodic(const Word& preperiod, const Word& period);
    /// Parses "pre(period)", e.g. "0(0)" or "(01)".
    static InfiniteString parse(std::string_view text);
    static InfiniteString from_oracle(BitOracle oracle);

    [[nodiscard]] int bit(std::size_t i) const;
    [[nodiscard]] Word prefix(std::size_t k) const;

    [[nodiscard]] bool is_periodic() const noexcept { return !oracle_; }
    [[nodiscard]] const Word& preperiod() const noexcept { return pre_; }
    [[nodiscard]] const Word& period() const noexcept { return period_; }

    /// Canonical "pre(period)" text; black-box strings print as "<oracle>".
    [[nodiscard]] std::string to_string() const;

    /// Exact comparison; only defined for two periodic strings.
    [[nodiscard]] bool same_as(const InfiniteString& other) const;

private:
    InfiniteString() = default;

    Word pre_;
    Word period_;
    std::shared_ptr<const BitOracle> oracle_;
};

/// Index of the first bit where the two strings differ, or nullopt if they are
/// equal. Exact when both are periodic; otherwise probes at most `probe_depth` bits.
std::optional<std::size_t> first_difference(const InfiniteString& a, const InfiniteString& b,
                                            std::size_t probe_depth = kDefaultProbeDepth);

/// Number of bits after which two periodic strings that still agree must be equal.
std::size_t exact_comparison_bound(const InfiniteString& a, const InfiniteString& b);

}  // namespace radixlab
