#include "windsynth/time_axis.hpp"
#include "windsynth/error.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace windsynth {

namespace chr = std::chrono;

std::int64_t to_epoch_day(int year, unsigned month, unsigned day) noexcept
{
    const chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
    return chr::sys_days{ymd}.time_since_epoch().count();
}

EpochHour to_epoch_hour(int year, unsigned month, unsigned day, unsigned hour) noexcept
{
    return to_epoch_day(year, month, day) * 24 + hour;
}

std::int64_t epoch_day_of(EpochHour h) noexcept
{
    // floor division for pre-epoch hours
    return h >= 0 ? h / 24 : -((-h + 23) / 24);
}

CivilHour to_civil(EpochHour h) noexcept
{
    const std::int64_t day = epoch_day_of(h);
    const chr::sys_days sd{chr::days{day}};
    const chr::year_month_day ymd{sd};
    const chr::weekday wd{sd};
    return CivilHour{
        static_cast<int>(ymd.year()),
        static_cast<unsigned>(ymd.month()),
        static_cast<unsigned>(ymd.day()),
        static_cast<unsigned>(h - day * 24),
        wd.iso_encoding() - 1,
    };
}

namespace {

bool read_uint(std::string_view text, std::size_t pos, std::size_t len, unsigned& out) noexcept
{
    if (pos + len > text.size()) {
        return false;
    }
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (text[i] < '0' || text[i] > '9') {
            return false;
        }
    }
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return ec == std::errc{} && ptr == text.data() + pos + len;
}

std::optional<std::int64_t> parse_ymd(std::string_view text) noexcept
{
    unsigned y = 0, m = 0, d = 0;
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
        return std::nullopt;
    }
    if (!read_uint(text, 0, 4, y) || !read_uint(text, 5, 2, m) || !read_uint(text, 8, 2, d)) {
        return std::nullopt;
    }
    const chr::year_month_day ymd{chr::year{static_cast<int>(y)}, chr::month{m}, chr::day{d}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    return chr::sys_days{ymd}.time_since_epoch().count();
}

} // namespace

std::optional<std::int64_t> parse_date(std::string_view text) noexcept
{
    if (text.size() != 10) {
        return std::nullopt;
    }
    return parse_ymd(text);
}

std::optional<EpochHour> parse_timestamp(std::string_view text) noexcept
{
    // YYYY-MM-DDTHH:00Z
    if (text.size() != 17 || text[10] != 'T' || text.substr(13) != ":00Z") {
        return std::nullopt;
    }
    auto day = parse_ymd(text.substr(0, 10));
    unsigned hour = 0;
    if (!day || !read_uint(text, 11, 2, hour) || hour > 23) {
        return std::nullopt;
    }
    return *day * 24 + hour;
}

std::string format_date(std::int64_t epoch_day)
{
    const chr::year_month_day ymd{chr::sys_days{chr::days{epoch_day}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
        static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_timestamp(EpochHour h)
{
    const CivilHour c = to_civil(h);
    char buf[24];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02u:00Z", c.year, c.month, c.day, c.hour);
    return buf;
}

TimeAxis TimeAxis::for_years(int first_year, int last_year) noexcept
{
    const EpochHour start = to_epoch_hour(first_year, 1, 1, 0);
    const EpochHour end = to_epoch_hour(last_year + 1, 1, 1, 0);
    return TimeAxis{start, static_cast<std::size_t>(end - start)};
}

std::size_t CapacityFactorSeries::count_negative() const noexcept
{
    std::size_t n = 0;
    for (double v : values) {
        n += v < 0.0 ? 1 : 0;
    }
    return n;
}

CapacityFactorSeries slice(const CapacityFactorSeries& series, const TimeAxis& window)
{
    if (!series.axis.covers(window)) {
        throw Error(ErrorCode::AxisMismatch, format_timestamp(window.start()),
            "requested window is not covered by the series");
    }
    const std::size_t first = series.axis.index_of(window.start());
    CapacityFactorSeries out{window, {}};
    out.values.assign(series.values.begin() + static_cast<std::ptrdiff_t>(first),
        series.values.begin() + static_cast<std::ptrdiff_t>(first + window.size()));
    return out;
}

} // namespace windsynth
