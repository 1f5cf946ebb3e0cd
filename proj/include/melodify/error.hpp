#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace melodify {

enum class ErrorCode {
    Io,
    MalformedInput,
    EmptyDataset,
    UnknownIdiom,
    UnknownPalette,
    MissingField,
    InvalidValue,
    UnknownColumn,
    KindMismatch,
    NegativeProportion,
    AllZero,
    TooShort,
    InvalidDegree,
    ChromaticMode,
    ModeMismatch,
    OutOfMidiRange,
    Overflow,
    UnexpandedLoop,
    StructuralViolation,
    MalformedSmf,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace melodify
