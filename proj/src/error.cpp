#include "spnls/error.hpp"

namespace spnls {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvariantViolation: return "invariant violation";
        case ErrorKind::MalformedHeader: return "malformed header";
        case ErrorKind::TruncatedPayload: return "truncated payload";
        case ErrorKind::DimensionMismatch: return "dimension mismatch";
        case ErrorKind::OutOfRange: return "out of range";
        case ErrorKind::Resolution: return "resolution insufficient";
        case ErrorKind::NumericalAbort: return "numerical abort";
        case ErrorKind::NonContraction: return "smallness condition violated";
        case ErrorKind::Config: return "invalid config";
    }
    return "error";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace spnls
