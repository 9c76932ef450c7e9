#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace windsynth {

enum class ErrorCode {
    Io,
    InvalidArgument,
    MalformedRow,
    NonContiguousAxis,
    NegativeValue,
    NonContiguousDates,
    EmptyRegistry,
    MissingCapacityDate,
    ZeroCapacity,
    NonConformingSpan,
    MissingColumn,
    EmptySelection,
    AxisMismatch,
    ShapeMismatch,
    DivergenceDetected,
    PeriodTooShort,
    DegenerateSeries,
    ZeroMeanObservations,
    SeriesTooShort,
    OutsideGrid,
    NonPositiveSpeed,
    BisectionFailure,
    InvalidConfig,
    ModelFormat,
};

std::string_view error_name(ErrorCode code) noexcept;

// Every failure surfaced by the library carries one code plus a location
// string (file:line, date, column name, ...) naming what went wrong.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string location, const std::string& detail = {});

    ErrorCode code() const noexcept { return code_; }
    const std::string& location() const noexcept { return location_; }

private:
    ErrorCode code_;
    std::string location_;
};

} // namespace windsynth
