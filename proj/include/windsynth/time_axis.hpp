#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace windsynth {

// Hours since 1970-01-01T00:00Z. All calendar logic is UTC.
using EpochHour = std::int64_t;

struct CivilHour {
    int year;
    unsigned month;   // 1..12
    unsigned day;     // 1..31
    unsigned hour;    // 0..23
    unsigned weekday; // 0 = Monday .. 6 = Sunday
};

CivilHour to_civil(EpochHour h) noexcept;
EpochHour to_epoch_hour(int year, unsigned month, unsigned day, unsigned hour) noexcept;
// Days since the epoch for a calendar date.
std::int64_t to_epoch_day(int year, unsigned month, unsigned day) noexcept;
std::int64_t epoch_day_of(EpochHour h) noexcept;

// Strict `YYYY-MM-DDTHH:00Z`.
std::optional<EpochHour> parse_timestamp(std::string_view text) noexcept;
// Strict `YYYY-MM-DD`, returns epoch day.
std::optional<std::int64_t> parse_date(std::string_view text) noexcept;
std::string format_timestamp(EpochHour h);
std::string format_date(std::int64_t epoch_day);

class TimeAxis {
public:
    TimeAxis() = default;
    TimeAxis(EpochHour start, std::size_t n_hours) : start_(start), n_hours_(n_hours) {}

    // Axis spanning whole calendar years [first_year, last_year].
    static TimeAxis for_years(int first_year, int last_year) noexcept;

    EpochHour start() const noexcept { return start_; }
    EpochHour end() const noexcept { return start_ + static_cast<EpochHour>(n_hours_); }
    std::size_t size() const noexcept { return n_hours_; }
    bool empty() const noexcept { return n_hours_ == 0; }

    EpochHour at(std::size_t i) const noexcept { return start_ + static_cast<EpochHour>(i); }
    CivilHour civil(std::size_t i) const noexcept { return to_civil(at(i)); }

    bool covers(const TimeAxis& other) const noexcept
    {
        return other.start_ >= start_ && other.end() <= end();
    }
    std::size_t index_of(EpochHour h) const noexcept { return static_cast<std::size_t>(h - start_); }

    friend bool operator==(const TimeAxis&, const TimeAxis&) = default;

private:
    EpochHour start_ = 0;
    std::size_t n_hours_ = 0;
};

// Hourly generation relative to installed capacity. Observed series lie in
// [0, 1]; modelled series may dip below zero and are kept as-is.
struct CapacityFactorSeries {
    TimeAxis axis;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    std::size_t count_negative() const noexcept;
};

// Sub-series covering `window`, which must lie inside `series.axis`.
CapacityFactorSeries slice(const CapacityFactorSeries& series, const TimeAxis& window);

} // namespace windsynth
