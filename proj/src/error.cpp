#include "windsynth/error.hpp"

namespace windsynth {

std::string_view error_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::Io: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonContiguousAxis: return "NonContiguousAxis";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::NonContiguousDates: return "NonContiguousDates";
    case ErrorCode::EmptyRegistry: return "EmptyRegistry";
    case ErrorCode::MissingCapacityDate: return "MissingCapacityDate";
    case ErrorCode::ZeroCapacity: return "ZeroCapacity";
    case ErrorCode::NonConformingSpan: return "NonConformingSpan";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::AxisMismatch: return "AxisMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DivergenceDetected: return "DivergenceDetected";
    case ErrorCode::PeriodTooShort: return "PeriodTooShort";
    case ErrorCode::DegenerateSeries: return "DegenerateSeries";
    case ErrorCode::ZeroMeanObservations: return "ZeroMeanObservations";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::OutsideGrid: return "OutsideGrid";
    case ErrorCode::NonPositiveSpeed: return "NonPositiveSpeed";
    case ErrorCode::BisectionFailure: return "BisectionFailure";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ModelFormat: return "ModelFormat";
    }
    return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& location, const std::string& detail)
{
    std::string msg(error_name(code));
    if (!location.empty()) {
        msg += " at " + location;
    }
    if (!detail.empty()) {
        msg += ": " + detail;
    }
    return msg;
}

} // namespace

Error::Error(ErrorCode code, std::string location, const std::string& detail)
    : std::runtime_error(compose(code, location, detail))
    , code_(code)
    , location_(std::move(location))
{
}

} // namespace windsynth
