#pragma once

#include "windsynth/grid.hpp"
#include "windsynth/matrix.hpp"
#include "windsynth/time_axis.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace windsynth::features {

inline constexpr std::size_t kDummyCount = 24 + 7 + 12;

struct FeatureMatrix {
    TimeAxis axis;
    std::vector<std::string> columns;
    std::vector<double> data; // axis.size() x columns.size(), row-major

    std::size_t rows() const noexcept { return axis.size(); }
    std::size_t cols() const noexcept { return columns.size(); }
    std::span<const double> row(std::size_t i) const noexcept
    {
        return std::span<const double>(data).subspan(i * cols(), cols());
    }
    MatrixView view() const noexcept { return {data, rows(), cols()}; }
};

// Per-column centre and spread for x -> (x - mean) / range.
struct ScalingParams {
    std::vector<double> mean;
    std::vector<double> range; // max - min, >= 0

    std::size_t size() const noexcept { return mean.size(); }
};

struct ScaledTarget {
    std::vector<double> values;
    ScalingParams params; // single column
};

/// hour_00..hour_23, dow_mon..dow_sun, month_01..month_12
std::vector<std::string> dummy_column_names();

/// One-hot hour-of-day, weekday and month indicators (UTC), 43 columns.
FeatureMatrix date_dummies(const TimeAxis& axis);

/// Wind block (variable-major, selection order) followed by the calendar dummies.
FeatureMatrix assemble(const grid::WindField& field, const grid::SubsetSelection& sel, const TimeAxis& axis);

ScalingParams fit_scaling(const FeatureMatrix& m, std::span<const std::size_t> rows);
ScalingParams fit_scaling(MatrixView m, std::span<const std::size_t> rows);

/// Columns with zero range map to 0.
FeatureMatrix apply_scaling(const FeatureMatrix& m, const ScalingParams& params);
void apply_scaling_inplace(std::span<double> data, std::size_t cols, const ScalingParams& params);

/// Single-column forms used for the target series.
std::vector<double> scale_values(std::span<const double> values, const ScalingParams& params);
std::vector<double> invert_scaling(std::span<const double> values, const ScalingParams& params);
ScaledTarget scale_target(std::span<const double> values, std::span<const std::size_t> rows);

/// Wide CSV: timestamp followed by every column of `m`.
void write_features_csv(const std::string& path, const FeatureMatrix& m);

} // namespace windsynth::features
