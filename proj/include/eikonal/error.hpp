#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace eikonal {

enum class ErrorKind {
    NonFinite,
    SingularQuaternion,
    UnsupportedVariant,
    InvalidParameter,
    BridgeTimeOverflow,
    KempHallAxis,
    BranchAmbiguity,
    NonHermitianSpec,
    NoConvergence,
    StepUnderflow,
    GridTooSmall,
    NegativeDensity,
    EmptySupport,
    AtomCollision,
    DegenerateDensity,
    BadDimension,
    EigFailure,
    DefectiveMatrix,
    ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (and the CLI)
/// can branch on it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised for malformed run configurations; `field()` names the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(ErrorKind::ConfigError, "field '" + field + "': " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace eikonal
