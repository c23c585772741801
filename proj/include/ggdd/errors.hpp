#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace ggdd {

enum class ErrorKind {
    NonSkewInput,
    GridMismatch,
    BandTooHigh,
    BadMagic,
    DimMismatch,
    TruncatedPayload,
    BadSpacePairing,
    NoAdjoint,
    UnknownIdentity,
    WrongMode,
    SolverStall,
    ConstraintViolated,
    GridTooLarge,
    NoConvergence,
    NotInRange,
    NotInKernel,
    NonSymmetricOperator,
    UnknownCase,
    InvalidArgument,
    IoError,
};

const char* error_kind_name(ErrorKind k);
// %.3e formatting for residuals in messages.
inline std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace ggdd
