#pragma once

#include <stdexcept>
#include <string>

namespace wsdt {

enum class ErrorCode {
    // ingest / data
    MissingColumn,
    NonNumericWeight,
    NegativeWeight,
    EmptyDataset,
    MissingValue,
    NonFiniteValue,
    MalformedCsv,
    NoInformativeColumns,
    EmptyThresholdSet,
    UnknownCategory,
    UnknownFeature,
    LengthMismatch,
    // model
    ColumnOutOfRange,
    SchemaVersionMismatch,
    MalformedModel,
    FeatureMismatch,
    // objective / search
    ZeroTotalWeight,
    KernelModeMismatch,
    EmptyCaptureSet,
    InfeasibleDepth,
    DigestCollision,
    // weights
    AllZeroWeights,
    OutputTooLarge,
    DegenerateRange,
    ZeroSampleSize,
    // reference
    RowCountMismatch,
    UnknownLabel,
    // oracle
    TooLargeToEnumerate,
    NonpositiveWeight,
    // generic
    InvalidArgument,
    IoError,
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::NonNumericWeight: return "NonNumericWeight";
        case ErrorCode::NegativeWeight: return "NegativeWeight";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::MissingValue: return "MissingValue";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::MalformedCsv: return "MalformedCsv";
        case ErrorCode::NoInformativeColumns: return "NoInformativeColumns";
        case ErrorCode::EmptyThresholdSet: return "EmptyThresholdSet";
        case ErrorCode::UnknownCategory: return "UnknownCategory";
        case ErrorCode::UnknownFeature: return "UnknownFeature";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::ColumnOutOfRange: return "ColumnOutOfRange";
        case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
        case ErrorCode::MalformedModel: return "MalformedModel";
        case ErrorCode::FeatureMismatch: return "FeatureMismatch";
        case ErrorCode::ZeroTotalWeight: return "ZeroTotalWeight";
        case ErrorCode::KernelModeMismatch: return "KernelModeMismatch";
        case ErrorCode::EmptyCaptureSet: return "EmptyCaptureSet";
        case ErrorCode::InfeasibleDepth: return "InfeasibleDepth";
        case ErrorCode::DigestCollision: return "DigestCollision";
        case ErrorCode::AllZeroWeights: return "AllZeroWeights";
        case ErrorCode::OutputTooLarge: return "OutputTooLarge";
        case ErrorCode::DegenerateRange: return "DegenerateRange";
        case ErrorCode::ZeroSampleSize: return "ZeroSampleSize";
        case ErrorCode::RowCountMismatch: return "RowCountMismatch";
        case ErrorCode::UnknownLabel: return "UnknownLabel";
        case ErrorCode::TooLargeToEnumerate: return "TooLargeToEnumerate";
        case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace wsdt
