#pragma once

#include "windsynth/ingest.hpp"
#include "windsynth/time_axis.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace windsynth::grid {

struct LonLat {
    double lon;
    double lat;
};

// Regular lon/lat lattice. Point indices are row-major with longitude
// varying fastest: index = j * nlon + i, point = (lon0 + i*dlon, lat0 + j*dlat).
struct GridSpec {
    double lon0 = 0.0;
    double lat0 = 0.0;
    double dlon = 1.0;
    double dlat = 1.0;
    std::size_t nlon = 1;
    std::size_t nlat = 1;

    std::size_t size() const noexcept { return nlon * nlat; }
    std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * nlon + i; }
    LonLat point(std::size_t index) const noexcept
    {
        return {lon0 + static_cast<double>(index % nlon) * dlon,
            lat0 + static_cast<double>(index / nlon) * dlat};
    }
    double lon_max() const noexcept { return lon0 + static_cast<double>(nlon - 1) * dlon; }
    double lat_max() const noexcept { return lat0 + static_cast<double>(nlat - 1) * dlat; }

    void validate() const;
    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

GridSpec grid_from_bbox(double lon_min, double lon_max, double lat_min, double lat_max,
    double dlon, double dlat);

enum class WindVariable : std::size_t { U2M = 0, V2M, U10M, V10M, U50M, V50M };
inline constexpr std::size_t kWindVariableCount = 6;
inline constexpr std::array<WindVariable, kWindVariableCount> kWindVariables{WindVariable::U2M,
    WindVariable::V2M, WindVariable::U10M, WindVariable::V10M, WindVariable::U50M, WindVariable::V50M};

std::string_view variable_name(WindVariable v) noexcept;
// `{VAR}_{lon:.3f}_{lat:.3f}`
std::string wind_column_name(WindVariable v, LonLat p);

// Immutable (hour, variable, point) tensor of wind components in m/s.
class WindField {
public:
    WindField(GridSpec grid, TimeAxis axis, std::vector<double> data);

    const GridSpec& grid() const noexcept { return grid_; }
    const TimeAxis& axis() const noexcept { return axis_; }

    double at(WindVariable v, std::size_t point, std::size_t hour) const noexcept
    {
        return data_[(hour * kWindVariableCount + static_cast<std::size_t>(v)) * grid_.size() + point];
    }
    // Components of one variable for every grid point at `hour`.
    const double* slab(WindVariable v, std::size_t hour) const noexcept
    {
        return data_.data() + (hour * kWindVariableCount + static_cast<std::size_t>(v)) * grid_.size();
    }
    // |(u, v)| at 10 m or 50 m.
    double speed10(std::size_t point, std::size_t hour) const noexcept;
    double speed50(std::size_t point, std::size_t hour) const noexcept;

    std::size_t value_count() const noexcept { return data_.size(); }

private:
    GridSpec grid_;
    TimeAxis axis_;
    std::vector<double> data_;
};

WindField load_wind_csv(const std::string& path, const GridSpec& grid);
void write_wind_csv(const std::string& path, const WindField& field);
// Reconstructs the grid from the U2M columns of a wind CSV header.
GridSpec infer_grid_from_wind_csv(const std::string& path);

enum class Strategy { All, KNearest, CapacityQuartile };
std::string_view strategy_name(Strategy s) noexcept;

struct SubsetSelection {
    Strategy strategy = Strategy::All;
    std::vector<std::size_t> indices; // strictly increasing

    void validate(const GridSpec& grid) const;
};

double haversine_km(LonLat a, LonLat b) noexcept;

// Nearest grid point, ties to the smaller index.
std::size_t nearest_point(const GridSpec& grid, LonLat p) noexcept;
// The k nearest grid points ordered by (distance, index).
std::vector<std::size_t> k_nearest_points(const GridSpec& grid, LonLat p, std::size_t k);

SubsetSelection select_all(const GridSpec& grid);
SubsetSelection select_k_nearest(const GridSpec& grid, const ingest::PlantRegistry& plants, std::size_t k);
SubsetSelection select_capacity_quartile(const GridSpec& grid, const ingest::PlantRegistry& plants);

// Capacity assigned to each grid point by nearest-point aggregation.
std::vector<double> assign_capacity(const GridSpec& grid, const ingest::PlantRegistry& plants);

} // namespace windsynth::grid
