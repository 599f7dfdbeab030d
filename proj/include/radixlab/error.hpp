#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace radixlab {

enum class ErrorKind {
    DuplicateInput,
    NotALeaf,
    Underflow,
    CapTooSmall,
    ZeroMassPrefix,
    InvalidTree,
    InvalidMeasure,
    NonAtomic,
    SeparationDepthExceeded,
    ExplosionGuard,
    PreconditionViolated,
    IdentityViolation,
    ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Domain error carrying a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace radixlab
