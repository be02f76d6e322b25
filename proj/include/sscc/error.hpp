#ifndef SSCC_ERROR_HPP
#define SSCC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sscc {

/// Failure categories surfaced by the library. Tests and the CLI dispatch on
/// the kind; the message carries context (offending key, index, dimension).
enum class ErrorKind {
    ZeroDimension,
    ChunkOutOfRange,
    DimensionMismatch,
    DuplicatePoints,
    BadShape,
    MisalignedRange,
    SingularSubmatrix,
    InsufficientResponses,
    MissingChunk,
    TooFewWorkers,
    MissingBlock,
    AllDead,
    InsufficientCapacity,
    EmptyList,
    Undecodable,
    NonPositiveTime,
    TooShort,
    ZeroActual,
    LengthMismatch,
    EmptyHistory,
    Io,
    UnknownKey,
    InvalidValue,
    SchemaMismatch,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace sscc

#endif
