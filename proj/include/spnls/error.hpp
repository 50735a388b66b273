#pragma once

#include <stdexcept>
#include <string>

namespace spnls {

enum class ErrorKind {
    InvariantViolation,
    MalformedHeader,
    TruncatedPayload,
    DimensionMismatch,
    OutOfRange,
    Resolution,
    NumericalAbort,
    NonContraction,
    Config,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

}  // namespace spnls
