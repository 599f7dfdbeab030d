#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace radixlab {

/// Exact arbitrary-precision rational.
using Rational = mpq_class;

/// "num/den" (or "num" when den == 1) into a canonical Rational.
/// Rejects decimals and floats: Error(ParseError).
Rational parse_rational(std::string_view text);

/// Always "num/den", e.g. "3/16", "1/1", "0/1".
std::string to_fraction_string(const Rational& q);

/// 2^k for signed k.
Rational pow2(long k);

/// Lossy conversion for Monte-Carlo reporting.
inline double to_double(const Rational& q) { return q.get_d(); }

/// An exact probability in [0, 1].
class Prob {
public:
    Prob() = default;
    /// Throws Error(PreconditionViolated) outside [0, 1].
    explicit Prob(Rational value);

    [[nodiscard]] const Rational& value() const noexcept { return value_; }
    [[nodiscard]] double to_double() const { return value_.get_d(); }
    [[nodiscard]] std::string to_string() const { return to_fraction_string(value_); }

    friend bool operator==(const Prob& a, const Prob& b) { return a.value_ == b.value_; }
    friend bool operator==(const Prob& a, const Rational& b) { return a.value_ == b; }

private:
    Rational value_{0};
};

}  // namespace radixlab
