#include "windsynth/ingest.hpp"
#include "windsynth/csv.hpp"
#include "windsynth/error.hpp"

#include <cmath>
#include <fstream>

namespace windsynth::ingest {

namespace {

// Shared reader for the two hourly formats (`timestamp,<value>`).
struct HourlyRows {
    TimeAxis axis;
    std::vector<double> values;
};

HourlyRows read_hourly(const std::string& path, std::string_view value_column, bool non_negative)
{
    csv::Reader reader(path);
    std::vector<std::string_view> fields;
    if (!reader.next(fields)) {
        throw Error(ErrorCode::MalformedRow, path + ":1", "missing header");
    }
    csv::expect_header(reader, fields, {"timestamp", value_column});

    HourlyRows rows;
    EpochHour start = 0;
    EpochHour expected = 0;
    while (reader.next(fields)) {
        if (fields.size() != 2) {
            throw Error(ErrorCode::MalformedRow, reader.where(), "expected 2 fields");
        }
        const auto stamp = parse_timestamp(fields[0]);
        const auto value = csv::parse_double(fields[1]);
        if (!stamp || !value) {
            throw Error(ErrorCode::MalformedRow, reader.where());
        }
        if (rows.values.empty()) {
            start = *stamp;
        } else if (*stamp != expected) {
            throw Error(ErrorCode::NonContiguousAxis, reader.where(),
                "expected " + format_timestamp(expected) + ", found " + std::string(fields[0]));
        }
        if (non_negative && *value < 0.0) {
            throw Error(ErrorCode::NegativeValue, reader.where());
        }
        rows.values.push_back(*value);
        expected = *stamp + 1;
    }
    rows.axis = TimeAxis{start, rows.values.size()};
    return rows;
}

void open_for_write(std::ofstream& out, const std::string& path)
{
    out.open(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, path, "cannot open for writing");
    }
}

} // namespace

GenerationSeries parse_generation_csv(const std::string& path)
{
    auto rows = read_hourly(path, "generation_mwh", true);
    return GenerationSeries{rows.axis, std::move(rows.values)};
}

CapacityFactorSeries parse_cf_csv(const std::string& path)
{
    auto rows = read_hourly(path, "cf", false);
    return CapacityFactorSeries{rows.axis, std::move(rows.values)};
}

CapacitySeries parse_capacity_csv(const std::string& path)
{
    csv::Reader reader(path);
    std::vector<std::string_view> fields;
    if (!reader.next(fields)) {
        throw Error(ErrorCode::MalformedRow, path + ":1", "missing header");
    }
    csv::expect_header(reader, fields, {"date", "capacity_mw"});

    CapacitySeries cap;
    while (reader.next(fields)) {
        if (fields.size() != 2) {
            throw Error(ErrorCode::MalformedRow, reader.where(), "expected 2 fields");
        }
        const auto day = parse_date(fields[0]);
        const auto value = csv::parse_double(fields[1]);
        if (!day || !value || *value < 0.0) {
            throw Error(ErrorCode::MalformedRow, reader.where());
        }
        if (cap.values.empty()) {
            cap.first_day = *day;
        } else if (*day != cap.last_day() + 1) {
            throw Error(ErrorCode::NonContiguousDates, reader.where(),
                "expected " + format_date(cap.last_day() + 1));
        }
        cap.values.push_back(*value);
    }
    return cap;
}

PlantRegistry parse_plants_csv(const std::string& path)
{
    csv::Reader reader(path);
    std::vector<std::string_view> fields;
    if (!reader.next(fields)) {
        throw Error(ErrorCode::EmptyRegistry, path, "missing header");
    }
    csv::expect_header(reader, fields, {"lon", "lat", "capacity_mw"});

    PlantRegistry registry;
    while (reader.next(fields)) {
        if (fields.size() != 3) {
            throw Error(ErrorCode::MalformedRow, reader.where(), "expected 3 fields");
        }
        const auto lon = csv::parse_double(fields[0]);
        const auto lat = csv::parse_double(fields[1]);
        const auto cap = csv::parse_double(fields[2]);
        if (!lon || !lat || !cap || *cap <= 0.0) {
            throw Error(ErrorCode::MalformedRow, reader.where());
        }
        registry.plants.push_back(Plant{*lon, *lat, *cap});
    }
    if (registry.plants.empty()) {
        throw Error(ErrorCode::EmptyRegistry, path);
    }
    return registry;
}

CapacityFactorSeries to_capacity_factors(const GenerationSeries& gen, const CapacitySeries& cap)
{
    CapacityFactorSeries out{gen.axis, std::vector<double>(gen.values.size())};
    for (std::size_t t = 0; t < gen.values.size(); ++t) {
        const std::int64_t day = epoch_day_of(gen.axis.at(t));
        if (day < cap.first_day || day > cap.last_day()) {
            throw Error(ErrorCode::MissingCapacityDate, format_date(day));
        }
        const double mw = cap.values[static_cast<std::size_t>(day - cap.first_day)];
        if (!(mw > 0.0)) {
            throw Error(ErrorCode::ZeroCapacity, format_date(day));
        }
        out.values[t] = gen.values[t] / mw;
    }
    return out;
}

void write_generation_csv(const std::string& path, const GenerationSeries& gen)
{
    std::ofstream out;
    open_for_write(out, path);
    out << "timestamp,generation_mwh\n";
    for (std::size_t t = 0; t < gen.values.size(); ++t) {
        out << format_timestamp(gen.axis.at(t)) << ',' << csv::format_double(gen.values[t]) << '\n';
    }
}

void write_cf_csv(const std::string& path, const CapacityFactorSeries& series)
{
    std::ofstream out;
    open_for_write(out, path);
    out << "timestamp,cf\n";
    for (std::size_t t = 0; t < series.values.size(); ++t) {
        out << format_timestamp(series.axis.at(t)) << ',' << csv::format_double(series.values[t]) << '\n';
    }
}

void write_capacity_csv(const std::string& path, const CapacitySeries& cap)
{
    std::ofstream out;
    open_for_write(out, path);
    out << "date,capacity_mw\n";
    for (std::size_t d = 0; d < cap.values.size(); ++d) {
        out << format_date(cap.first_day + static_cast<std::int64_t>(d)) << ','
            << csv::format_double(cap.values[d]) << '\n';
    }
}

void write_plants_csv(const std::string& path, const PlantRegistry& registry)
{
    std::ofstream out;
    open_for_write(out, path);
    out << "lon,lat,capacity_mw\n";
    for (const auto& p : registry.plants) {
        out << csv::format_double(p.lon) << ',' << csv::format_double(p.lat) << ','
            << csv::format_double(p.capacity_mw) << '\n';
    }
}

} // namespace windsynth::ingest
