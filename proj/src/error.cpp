#include "melodify/error.hpp"

namespace melodify {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::Io: return "Io";
        case ErrorCode::MalformedInput: return "MalformedInput";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::UnknownIdiom: return "UnknownIdiom";
        case ErrorCode::UnknownPalette: return "UnknownPalette";
        case ErrorCode::MissingField: return "MissingField";
        case ErrorCode::InvalidValue: return "InvalidValue";
        case ErrorCode::UnknownColumn: return "UnknownColumn";
        case ErrorCode::KindMismatch: return "KindMismatch";
        case ErrorCode::NegativeProportion: return "NegativeProportion";
        case ErrorCode::AllZero: return "AllZero";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::InvalidDegree: return "InvalidDegree";
        case ErrorCode::ChromaticMode: return "ChromaticMode";
        case ErrorCode::ModeMismatch: return "ModeMismatch";
        case ErrorCode::OutOfMidiRange: return "OutOfMidiRange";
        case ErrorCode::Overflow: return "Overflow";
        case ErrorCode::UnexpandedLoop: return "UnexpandedLoop";
        case ErrorCode::StructuralViolation: return "StructuralViolation";
        case ErrorCode::MalformedSmf: return "MalformedSmf";
    }
    return "Unknown";
}

}  // namespace melodify
