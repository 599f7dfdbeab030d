#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>

namespace radixlab {

/// Finite binary string. Doubles as the Ulam-Harris address of a tree vertex.
///
/// Ordering is lexicographic on the bit characters, so a word sorts before
/// every proper extension of itself.
class Word {
public:
    Word() = default;

    /// Accepts a string over {'0','1'}; throws Error(ParseError) otherwise.
    explicit Word(std::string_view bits);

    /// Parses the text form, where "e" (or "") denotes the empty word.
    static Word parse(std::string_view text);

    [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }
    [[nodiscard]] bool empty() const noexcept { return bits_.empty(); }
    [[nodiscard]] int bit(std::size_t i) const { return bits_.at(i) == '1' ? 1 : 0; }
    [[nodiscard]] const std::string& bits() const noexcept { return bits_; }

    [[nodiscard]] Word child(int b) const;
    [[nodiscard]] Word prefix(std::size_t k) const;
    /// Requires a nonempty word.
    [[nodiscard]] Word parent() const;
    /// Same word with the last bit flipped. Requires a nonempty word.
    [[nodiscard]] Word sibling() const;

    /// u.is_prefix_of(v) iff u <= v in the prefix order (reflexive).
    [[nodiscard]] bool is_prefix_of(const Word& other) const noexcept;
    [[nodiscard]] bool is_proper_prefix_of(const Word& other) const noexcept {
        return size() < other.size() && is_prefix_of(other);
    }

    /// Text form; the empty word prints as "e".
    [[nodiscard]] std::string to_string() const { return bits_.empty() ? "e" : bits_; }

    auto operator<=>(const Word&) const = default;
    bool operator==(const Word&) const = default;

private:
    std::string bits_;
};

/// Longest common prefix u ∧ v.
Word common_prefix(const Word& u, const Word& v);

}  // namespace radixlab
