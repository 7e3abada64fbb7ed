#pragma once

#include <stdexcept>
#include <string>

namespace acta {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tensor/layer dimension mismatch. Message names expected vs actual shapes.
struct ShapeError : Error {
    using Error::Error;
};

// A raw value lies outside its InputVariableSpec domain.
struct DomainError : Error {
    using Error::Error;
};

// Invalid experiment or driver configuration.
struct ConfigError : Error {
    using Error::Error;
};

// API misuse, e.g. backward() without a preceding forward().
struct UsageError : Error {
    using Error::Error;
};

struct CheckpointError : Error {
    using Error::Error;
};

// Magic bytes wrong or stream not a checkpoint at all.
struct CheckpointFormatError : CheckpointError {
    using CheckpointError::CheckpointError;
};

// Known format but unsupported version.
struct CheckpointVersionError : CheckpointError {
    using CheckpointError::CheckpointError;
};

// File ends mid-record.
struct CheckpointTruncatedError : CheckpointError {
    using CheckpointError::CheckpointError;
};

// Stored arrays disagree with their declared shapes or with each other.
struct CheckpointShapeError : CheckpointError {
    using CheckpointError::CheckpointError;
};

inline std::string shape_msg(const std::string& where, std::size_t expected, std::size_t actual) {
    return where + ": expected size " + std::to_string(expected) + ", got " + std::to_string(actual);
}

}  // namespace acta
