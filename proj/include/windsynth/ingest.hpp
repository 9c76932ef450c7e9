#pragma once

#include "windsynth/time_axis.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace windsynth::ingest {

/// Hourly energy (MWh) on a gapless UTC axis.
struct GenerationSeries {
    TimeAxis axis;
    std::vector<double> values;
};

/// Installed capacity (MW), one value per contiguous UTC day.
struct CapacitySeries {
    std::int64_t first_day = 0; // epoch day of values[0]
    std::vector<double> values;

    std::int64_t last_day() const noexcept
    {
        return first_day + static_cast<std::int64_t>(values.size()) - 1;
    }
};

struct Plant {
    double lon;
    double lat;
    double capacity_mw;
};

struct PlantRegistry {
    std::vector<Plant> plants;
};

GenerationSeries parse_generation_csv(const std::string& path);
CapacitySeries parse_capacity_csv(const std::string& path);
PlantRegistry parse_plants_csv(const std::string& path);

/// Capacity-factor series (`timestamp,cf`), the format used for predictions.
CapacityFactorSeries parse_cf_csv(const std::string& path);

/// gen[t] / cap[date(t)], capacity held constant over each UTC day.
CapacityFactorSeries to_capacity_factors(const GenerationSeries& gen, const CapacitySeries& cap);

void write_generation_csv(const std::string& path, const GenerationSeries& gen);
void write_capacity_csv(const std::string& path, const CapacitySeries& cap);
void write_plants_csv(const std::string& path, const PlantRegistry& registry);
void write_cf_csv(const std::string& path, const CapacityFactorSeries& series);

} // namespace windsynth::ingest
