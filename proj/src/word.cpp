#include "radixlab/word.hpp"

#include <algorithm>

#include "radixlab/error.hpp"

namespace radixlab {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DuplicateInput: return "DuplicateInput";
        case ErrorKind::NotALeaf: return "NotALeaf";
        case ErrorKind::Underflow: return "Underflow";
        case ErrorKind::CapTooSmall: return "CapTooSmall";
        case ErrorKind::ZeroMassPrefix: return "ZeroMassPrefix";
        case ErrorKind::InvalidTree: return "InvalidTree";
        case ErrorKind::InvalidMeasure: return "InvalidMeasure";
        case ErrorKind::NonAtomic: return "NonAtomic";
        case ErrorKind::SeparationDepthExceeded: return "SeparationDepthExceeded";
        case ErrorKind::ExplosionGuard: return "ExplosionGuard";
        case ErrorKind::PreconditionViolated: return "PreconditionViolated";
        case ErrorKind::IdentityViolation: return "IdentityViolation";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

Word::Word(std::string_view bits) : bits_(bits) {
    if (!std::all_of(bits_.begin(), bits_.end(), [](char c) { return c == '0' || c == '1'; })) {
        throw Error(ErrorKind::ParseError, "not a binary word: '" + std::string(bits) + "'");
    }
}

Word Word::parse(std::string_view text) {
    if (text == "e") return Word{};
    return Word{text};
}

Word Word::child(int b) const {
    Word w = *this;
    w.bits_.push_back(b ? '1' : '0');
    return w;
}

Word Word::prefix(std::size_t k) const {
    Word w;
    w.bits_ = bits_.substr(0, std::min(k, bits_.size()));
    return w;
}

Word Word::parent() const {
    if (empty()) throw Error(ErrorKind::PreconditionViolated, "the empty word has no parent");
    return prefix(size() - 1);
}

Word Word::sibling() const {
    if (empty()) throw Error(ErrorKind::PreconditionViolated, "the empty word has no sibling");
    Word w = *this;
    w.bits_.back() = w.bits_.back() == '0' ? '1' : '0';
    return w;
}

bool Word::is_prefix_of(const Word& other) const noexcept {
    return bits_.size() <= other.bits_.size() &&
           std::equal(bits_.begin(), bits_.end(), other.bits_.begin());
}

Word common_prefix(const Word& u, const Word& v) {
    auto [iu, iv] = std::mismatch(u.bits().begin(), u.bits().end(), v.bits().begin(), v.bits().end());
    return u.prefix(static_cast<std::size_t>(iu - u.bits().begin()));
}

}  // namespace radixlab
