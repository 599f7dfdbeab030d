#include "radixlab/infinite_string.hpp"

#include <numeric>

#include "radixlab/error.hpp"

namespace radixlab {
namespace {

// Smallest root r with period == r^k.
std::string primitive_root(const std::string& period) {
    const std::size_t n = period.size();
    for (std::size_t len = 1; len < n; ++len) {
        if (n % len != 0) continue;
        bool ok = true;
        for (std::size_t i = len; i < n && ok; ++i) ok = period[i] == period[i - len];
        if (ok) return period.substr(0, len);
    }
    return period;
}

}  // namespace

InfiniteString InfiniteString::periodic(const Word& preperiod, const Word& period) {
    if (period.empty()) throw Error(ErrorKind::ParseError, "period must be nonempty");
    std::string pre = preperiod.bits();
    std::string per = primitive_root(period.bits());
    // Absorb trailing preperiod bits into the period by rotation.
    while (!pre.empty() && pre.back() == per.back()) {
        pre.pop_back();
        per = per.back() + per.substr(0, per.size() - 1);
    }
    InfiniteString s;
    s.pre_ = Word{pre};
    s.period_ = Word{per};
    return s;
}

InfiniteString InfiniteString::parse(std::string_view text) {
    const auto open = text.find('(');
    if (open == std::string_view::npos || text.empty() || text.back() != ')' ||
        text.find('(', open + 1) != std::string_view::npos) {
        throw Error(ErrorKind::ParseError,
                    "expected eventually periodic string 'pre(period)', got '" + std::string(text) + "'");
    }
    const auto pre = text.substr(0, open);
    const auto per = text.substr(open + 1, text.size() - open - 2);
    return periodic(Word{pre}, Word{per});
}

InfiniteString InfiniteString::from_oracle(BitOracle oracle) {
    InfiniteString s;
    s.oracle_ = std::make_shared<const BitOracle>(std::move(oracle));
    return s;
}

int InfiniteString::bit(std::size_t i) const {
    if (oracle_) return (*oracle_)(i) ? 1 : 0;
    if (i < pre_.size()) return pre_.bit(i);
    return period_.bit((i - pre_.size()) % period_.size());
}

Word InfiniteString::prefix(std::size_t k) const {
    std::string bits(k, '0');
    for (std::size_t i = 0; i < k; ++i) bits[i] = bit(i) ? '1' : '0';
    return Word{bits};
}

std::string InfiniteString::to_string() const {
    if (oracle_) return "<oracle>";
    return pre_.bits() + "(" + period_.bits() + ")";
}

bool InfiniteString::same_as(const InfiniteString& other) const {
    if (!is_periodic() || !other.is_periodic()) {
        throw Error(ErrorKind::PreconditionViolated, "exact equality needs eventually periodic strings");
    }
    return pre_ == other.pre_ && period_ == other.period_;
}

std::size_t exact_comparison_bound(const InfiniteString& a, const InfiniteString& b) {
    return std::max(a.preperiod().size(), b.preperiod().size()) +
           std::lcm(a.period().size(), b.period().size());
}

std::optional<std::size_t> first_difference(const InfiniteString& a, const InfiniteString& b,
                                            std::size_t probe_depth) {
    const bool exact = a.is_periodic() && b.is_periodic();
    const std::size_t limit = exact ? exact_comparison_bound(a, b) : probe_depth;
    for (std::size_t i = 0; i < limit; ++i) {
        if (a.bit(i) != b.bit(i)) return i;
    }
    return std::nullopt;
}

}  // namespace radixlab
