#include "sscc/error.hpp"

namespace sscc {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ZeroDimension: return "zero dimension";
    case ErrorKind::ChunkOutOfRange: return "chunk out of range";
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::DuplicatePoints: return "duplicate evaluation points";
    case ErrorKind::BadShape: return "bad shape";
    case ErrorKind::MisalignedRange: return "misaligned row range";
    case ErrorKind::SingularSubmatrix: return "singular submatrix";
    case ErrorKind::InsufficientResponses: return "insufficient responses";
    case ErrorKind::MissingChunk: return "missing chunk";
    case ErrorKind::TooFewWorkers: return "too few workers";
    case ErrorKind::MissingBlock: return "missing block";
    case ErrorKind::AllDead: return "all workers dead";
    case ErrorKind::InsufficientCapacity: return "insufficient capacity";
    case ErrorKind::EmptyList: return "empty list";
    case ErrorKind::Undecodable: return "undecodable assignment";
    case ErrorKind::NonPositiveTime: return "non-positive time";
    case ErrorKind::TooShort: return "sequence too short";
    case ErrorKind::ZeroActual: return "zero actual value";
    case ErrorKind::LengthMismatch: return "length mismatch";
    case ErrorKind::EmptyHistory: return "empty history";
    case ErrorKind::Io: return "io error";
    case ErrorKind::UnknownKey: return "unknown key";
    case ErrorKind::InvalidValue: return "invalid value";
    case ErrorKind::SchemaMismatch: return "schema mismatch";
    }
    return "unknown error";
}

} // namespace sscc
