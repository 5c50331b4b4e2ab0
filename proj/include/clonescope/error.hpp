#pragma once

#include <stdexcept>
#include <string>

namespace clonescope {

enum class ErrorKind {
    Io,
    Parse,
    InvalidArgument,
    UndefinedMetric,
    Backend,
    UnparseableResponse,
    Combinatorial,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Io:                  return "io";
        case ErrorKind::Parse:               return "parse";
        case ErrorKind::InvalidArgument:     return "invalid-argument";
        case ErrorKind::UndefinedMetric:     return "undefined-metric";
        case ErrorKind::Backend:             return "backend";
        case ErrorKind::UnparseableResponse: return "unparseable-response";
        case ErrorKind::Combinatorial:       return "combinatorial";
    }
    return "unknown";
}

/**
 * Single exception type used across the toolkit. The kind lets callers
 * (mostly the CLI) map failures to exit codes without string matching.
 */
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace clonescope
