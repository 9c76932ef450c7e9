#pragma once

#include "windsynth/grid.hpp"
#include "windsynth/ingest.hpp"
#include "windsynth/time_axis.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Simplified power-curve fleet model: interpolate speeds to each plant,
// extrapolate to hub height, apply one power curve, aggregate by capacity,
// optionally rescale speeds so the mean matches observations.
namespace windsynth::baseline {

struct CurvePoint {
    double speed;    // m/s
    double fraction; // of rated power
};

class PowerCurve {
public:
    /// Speeds strictly increasing, fractions in [0, 1], first fraction 0.
    explicit PowerCurve(std::vector<CurvePoint> points);

    const std::vector<CurvePoint>& points() const noexcept { return points_; }

private:
    std::vector<CurvePoint> points_;
};

/// Generic normalised curve of a modern onshore turbine (cut-in 3, rated 13, cut-out 25 m/s).
PowerCurve default_power_curve();
PowerCurve parse_curve_csv(const std::string& path);
void write_curve_csv(const std::string& path, const PowerCurve& curve);

enum class BiasMode { None, MeanMatch };

struct BaselineConfig {
    double hub_height_m = 100.0;
    PowerCurve curve = default_power_curve();
    BiasMode bias = BiasMode::None;
};

struct WindAt {
    double v10;
    double v50;
};

// Bilinear weights of the grid cell enclosing a location.
struct Stencil {
    std::array<std::size_t, 4> index;
    std::array<double, 4> weight;
};

Stencil stencil_for(const grid::GridSpec& grid, grid::LonLat p);

/// Bilinear interpolation of 10 m and 50 m speed magnitudes.
WindAt interpolate_wind(const grid::WindField& field, grid::LonLat p, std::size_t hour);

/// Power law through the 10 m and 50 m speeds: v50 * (h / 50)^(ln(v50/v10) / ln 5).
double hub_height_speed(double v10, double v50, double hub_height_m);

/// Piecewise-linear in the curve points, 0 outside their span.
double apply_curve(const PowerCurve& curve, double speed);

/// Observations and window used to fit the MeanMatch speed factor.
struct Calibration {
    const CapacityFactorSeries* observed;
    TimeAxis window;
};

struct FleetSimulation {
    CapacityFactorSeries series;
    double speed_scale = 1.0;
};

/// Unscaled hub-height speed per (hour, plant), hour-major.
std::vector<double> fleet_hub_speeds(const grid::WindField& field, const ingest::PlantRegistry& plants,
    const BaselineConfig& cfg);

FleetSimulation simulate_fleet(const grid::WindField& field, const ingest::PlantRegistry& plants,
    const BaselineConfig& cfg, std::optional<Calibration> calibration = std::nullopt);

/// 6 x 6 points at 0.625 x 0.5 degree spacing in central Germany.
grid::GridSpec default_synth_grid();

struct SynthOptions {
    std::uint64_t seed = 7;
    int first_year = 2010;
    int years = 3;
    grid::GridSpec grid = default_synth_grid();
    std::size_t n_plants = 24;
    double noise_sd = 0.01;
    BaselineConfig fleet;
};

struct Scenario {
    grid::WindField wind;
    ingest::PlantRegistry plants;
    CapacityFactorSeries observed;
};

/// Deterministic desk-scale scenario: correlated wind fields, random plants and
/// the fleet's capacity factors with small observation noise, clamped to [0, 1].
Scenario synth_scenario(const SynthOptions& options);

} // namespace windsynth::baseline
