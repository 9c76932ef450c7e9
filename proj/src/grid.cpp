#include "windsynth/grid.hpp"
#include "windsynth/csv.hpp"
#include "windsynth/error.hpp"
#include "windsynth/quality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <unordered_map>

namespace windsynth::grid {

void GridSpec::validate() const
{
    if (!(dlon > 0.0) || !(dlat > 0.0) || nlon < 1 || nlat < 1 || !std::isfinite(lon0)
        || !std::isfinite(lat0) || !std::isfinite(dlon) || !std::isfinite(dlat)) {
        throw Error(ErrorCode::InvalidArgument, "GridSpec", "spacing must be positive and counts >= 1");
    }
}

GridSpec grid_from_bbox(double lon_min, double lon_max, double lat_min, double lat_max,
    double dlon, double dlat)
{
    if (!(lon_min <= lon_max) || !(lat_min <= lat_max) || !(dlon > 0.0) || !(dlat > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "bbox", "need min <= max and positive spacing");
    }
    const double steps_lon = (lon_max - lon_min) / dlon;
    const double steps_lat = (lat_max - lat_min) / dlat;
    if (std::abs(steps_lon - std::round(steps_lon)) > 1e-9) {
        throw Error(ErrorCode::NonConformingSpan, "longitude",
            "span is not an integer multiple of " + csv::format_double(dlon));
    }
    if (std::abs(steps_lat - std::round(steps_lat)) > 1e-9) {
        throw Error(ErrorCode::NonConformingSpan, "latitude",
            "span is not an integer multiple of " + csv::format_double(dlat));
    }
    GridSpec g;
    g.lon0 = lon_min;
    g.lat0 = lat_min;
    g.dlon = dlon;
    g.dlat = dlat;
    g.nlon = static_cast<std::size_t>(std::llround(steps_lon)) + 1;
    g.nlat = static_cast<std::size_t>(std::llround(steps_lat)) + 1;
    return g;
}

std::string_view variable_name(WindVariable v) noexcept
{
    switch (v) {
    case WindVariable::U2M: return "U2M";
    case WindVariable::V2M: return "V2M";
    case WindVariable::U10M: return "U10M";
    case WindVariable::V10M: return "V10M";
    case WindVariable::U50M: return "U50M";
    case WindVariable::V50M: return "V50M";
    }
    return "?";
}

std::string wind_column_name(WindVariable v, LonLat p)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%.3f_%.3f", variable_name(v).data(), p.lon, p.lat);
    return buf;
}

WindField::WindField(GridSpec grid, TimeAxis axis, std::vector<double> data)
    : grid_(grid)
    , axis_(axis)
    , data_(std::move(data))
{
    grid_.validate();
    if (data_.size() != axis_.size() * kWindVariableCount * grid_.size()) {
        throw Error(ErrorCode::ShapeMismatch, "WindField", "data size does not match grid x axis");
    }
}

double WindField::speed10(std::size_t point, std::size_t hour) const noexcept
{
    return std::hypot(at(WindVariable::U10M, point, hour), at(WindVariable::V10M, point, hour));
}

double WindField::speed50(std::size_t point, std::size_t hour) const noexcept
{
    return std::hypot(at(WindVariable::U50M, point, hour), at(WindVariable::V50M, point, hour));
}

WindField load_wind_csv(const std::string& path, const GridSpec& grid)
{
    grid.validate();
    csv::Reader reader(path);
    std::vector<std::string_view> fields;
    if (!reader.next(fields) || fields.empty() || fields[0] != "timestamp") {
        throw Error(ErrorCode::MalformedRow, path + ":1", "header must start with `timestamp`");
    }
    std::unordered_map<std::string, std::size_t> by_name;
    for (std::size_t c = 1; c < fields.size(); ++c) {
        by_name.emplace(std::string(fields[c]), c);
    }
    const std::size_t n_points = grid.size();
    // source column for each (variable, point) slot in hour-major storage order
    std::vector<std::size_t> source(kWindVariableCount * n_points);
    for (auto v : kWindVariables) {
        for (std::size_t p = 0; p < n_points; ++p) {
            const std::string name = wind_column_name(v, grid.point(p));
            auto it = by_name.find(name);
            if (it == by_name.end()) {
                throw Error(ErrorCode::MissingColumn, name);
            }
            source[static_cast<std::size_t>(v) * n_points + p] = it->second;
        }
    }

    const std::size_t width = fields.size();
    std::vector<double> data;
    EpochHour start = 0;
    EpochHour expected = 0;
    std::size_t n_hours = 0;
    std::vector<double> row(width);
    while (reader.next(fields)) {
        if (fields.size() != width) {
            throw Error(ErrorCode::MalformedRow, reader.where(),
                "expected " + std::to_string(width) + " fields");
        }
        const auto stamp = parse_timestamp(fields[0]);
        if (!stamp) {
            throw Error(ErrorCode::MalformedRow, reader.where(), "bad timestamp");
        }
        if (n_hours == 0) {
            start = *stamp;
        } else if (*stamp != expected) {
            throw Error(ErrorCode::NonContiguousAxis, reader.where(),
                "expected " + format_timestamp(expected));
        }
        for (std::size_t c = 1; c < width; ++c) {
            const auto value = csv::parse_double(fields[c]);
            if (!value) {
                throw Error(ErrorCode::MalformedRow, reader.where(),
                    "bad value in column " + std::to_string(c + 1));
            }
            row[c] = *value;
        }
        for (std::size_t slot : source) {
            data.push_back(row[slot]);
        }
        expected = *stamp + 1;
        ++n_hours;
    }
    return WindField(grid, TimeAxis{start, n_hours}, std::move(data));
}

void write_wind_csv(const std::string& path, const WindField& field)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, path, "cannot open for writing");
    }
    const GridSpec& g = field.grid();
    out << "timestamp";
    for (auto v : kWindVariables) {
        for (std::size_t p = 0; p < g.size(); ++p) {
            out << ',' << wind_column_name(v, g.point(p));
        }
    }
    out << '\n';
    std::string line;
    for (std::size_t t = 0; t < field.axis().size(); ++t) {
        line = format_timestamp(field.axis().at(t));
        for (auto v : kWindVariables) {
            const double* slab = field.slab(v, t);
            for (std::size_t p = 0; p < g.size(); ++p) {
                line += ',';
                line += csv::format_double(slab[p]);
            }
        }
        line += '\n';
        out << line;
    }
}

GridSpec infer_grid_from_wind_csv(const std::string& path)
{
    csv::Reader reader(path);
    std::vector<std::string_view> fields;
    if (!reader.next(fields) || fields.empty() || fields[0] != "timestamp") {
        throw Error(ErrorCode::MalformedRow, path + ":1", "header must start with `timestamp`");
    }
    std::set<double> lons;
    std::set<double> lats;
    std::size_t count = 0;
    for (std::size_t c = 1; c < fields.size(); ++c) {
        std::string_view name = fields[c];
        if (!name.starts_with("U2M_")) {
            continue;
        }
        name.remove_prefix(4);
        const std::size_t sep = name.find('_', 1);
        const auto lon = sep == std::string_view::npos ? std::nullopt : csv::parse_double(name.substr(0, sep));
        const auto lat = sep == std::string_view::npos ? std::nullopt : csv::parse_double(name.substr(sep + 1));
        if (!lon || !lat) {
            throw Error(ErrorCode::MalformedRow, path + ":1", "bad column name " + std::string(fields[c]));
        }
        lons.insert(*lon);
        lats.insert(*lat);
        ++count;
    }
    if (count == 0) {
        throw Error(ErrorCode::MissingColumn, "U2M_*");
    }
    auto spacing = [](const std::set<double>& s) {
        double d = 1.0;
        if (s.size() > 1) {
            d = *std::next(s.begin()) - *s.begin();
        }
        return d;
    };
    const double dlon = spacing(lons);
    const double dlat = spacing(lats);
    // column names carry 3 decimals; round the spacing to that resolution
    GridSpec g = grid_from_bbox(*lons.begin(), *lons.rbegin(), *lats.begin(), *lats.rbegin(),
        lons.size() > 1 ? std::round(dlon * 1e3) / 1e3 : 1.0,
        lats.size() > 1 ? std::round(dlat * 1e3) / 1e3 : 1.0);
    if (g.size() != count) {
        throw Error(ErrorCode::MissingColumn, "U2M_*", "header does not describe a complete regular grid");
    }
    return g;
}

std::string_view strategy_name(Strategy s) noexcept
{
    switch (s) {
    case Strategy::All: return "all";
    case Strategy::KNearest: return "k_nearest";
    case Strategy::CapacityQuartile: return "capacity_quartile";
    }
    return "?";
}

void SubsetSelection::validate(const GridSpec& grid) const
{
    if (indices.empty()) {
        throw Error(ErrorCode::EmptySelection, "SubsetSelection");
    }
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= grid.size()) {
            throw Error(ErrorCode::InvalidArgument, "SubsetSelection",
                "index " + std::to_string(indices[i]) + " outside grid");
        }
        if (i > 0 && indices[i] <= indices[i - 1]) {
            throw Error(ErrorCode::InvalidArgument, "SubsetSelection", "indices must be strictly increasing");
        }
    }
}

double haversine_km(LonLat a, LonLat b) noexcept
{
    constexpr double kEarthRadiusKm = 6371.0088;
    constexpr double kDeg = std::numbers::pi / 180.0;
    const double phi1 = a.lat * kDeg;
    const double phi2 = b.lat * kDeg;
    const double dphi = (b.lat - a.lat) * kDeg;
    const double dlambda = (b.lon - a.lon) * kDeg;
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlambda / 2.0);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

std::size_t nearest_point(const GridSpec& grid, LonLat p) noexcept
{
    std::size_t best = 0;
    double best_d = haversine_km(grid.point(0), p);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double d = haversine_km(grid.point(i), p);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

std::vector<std::size_t> k_nearest_points(const GridSpec& grid, LonLat p, std::size_t k)
{
    const std::size_t n = grid.size();
    k = std::min(k, n);
    std::vector<std::pair<double, std::size_t>> ranked(n);
    for (std::size_t i = 0; i < n; ++i) {
        ranked[i] = {haversine_km(grid.point(i), p), i};
    }
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end());
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) {
        out[i] = ranked[i].second;
    }
    return out;
}

SubsetSelection select_all(const GridSpec& grid)
{
    grid.validate();
    SubsetSelection sel{Strategy::All, std::vector<std::size_t>(grid.size())};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        sel.indices[i] = i;
    }
    return sel;
}

SubsetSelection select_k_nearest(const GridSpec& grid, const ingest::PlantRegistry& plants, std::size_t k)
{
    grid.validate();
    if (k == 0) {
        throw Error(ErrorCode::InvalidArgument, "k", "k must be >= 1");
    }
    if (plants.plants.empty()) {
        throw Error(ErrorCode::EmptyRegistry, "plants");
    }
    std::vector<char> used(grid.size(), 0);
    for (const auto& plant : plants.plants) {
        for (std::size_t idx : k_nearest_points(grid, {plant.lon, plant.lat}, k)) {
            used[idx] = 1;
        }
    }
    SubsetSelection sel{Strategy::KNearest, {}};
    for (std::size_t i = 0; i < used.size(); ++i) {
        if (used[i]) {
            sel.indices.push_back(i);
        }
    }
    return sel;
}

std::vector<double> assign_capacity(const GridSpec& grid, const ingest::PlantRegistry& plants)
{
    std::vector<double> capacity(grid.size(), 0.0);
    for (const auto& plant : plants.plants) {
        capacity[nearest_point(grid, {plant.lon, plant.lat})] += plant.capacity_mw;
    }
    return capacity;
}

SubsetSelection select_capacity_quartile(const GridSpec& grid, const ingest::PlantRegistry& plants)
{
    grid.validate();
    if (plants.plants.empty()) {
        throw Error(ErrorCode::EmptyRegistry, "plants");
    }
    const std::vector<double> capacity = assign_capacity(grid, plants);
    std::vector<double> nonzero;
    for (double c : capacity) {
        if (c > 0.0) {
            nonzero.push_back(c);
        }
    }
    std::vector<double> distinct = nonzero;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 2) {
        throw Error(ErrorCode::EmptySelection, "capacity quartile",
            "need at least two distinct nonzero grid-point capacities");
    }
    const double q3 = quality::quantile(nonzero, 0.75);
    SubsetSelection sel{Strategy::CapacityQuartile, {}};
    for (std::size_t i = 0; i < capacity.size(); ++i) {
        if (capacity[i] > q3) {
            sel.indices.push_back(i);
        }
    }
    if (sel.indices.empty()) {
        throw Error(ErrorCode::EmptySelection, "capacity quartile");
    }
    return sel;
}

} // namespace windsynth::grid
