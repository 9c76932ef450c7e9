#pragma once

#include "windsynth/pipeline.hpp"
#include "windsynth/quality.hpp"

#include <map>
#include <span>
#include <string>

// Serialises a quality report as JSON, table CSVs and plot-data CSVs.
namespace windsynth::report {

using Metadata = std::map<std::string, std::string>;

std::string to_json(const quality::QualityReport& report, const Metadata& metadata = {});
void write_json(const std::string& path, const quality::QualityReport& report, const Metadata& metadata = {});

/// model,correlation,nmae,nrmse
void write_table2(const std::string& path, std::span<const pipeline::CandidateMetrics> rows);
/// Variance, quantiles, negatives and distribution counts per series.
void write_table3(const std::string& path, const quality::QualityReport& report);
/// Run-length statistics of the extreme-value predicates per series.
void write_table3_extremes(const std::string& path, const quality::QualityReport& report);
/// Pooled ramp statistics per timeframe and series.
void write_table4(const std::string& path, const quality::QualityReport& report);

/// ramp_cdf.csv, histogram.csv, bin_deviations.csv, diurnal.csv, seasonal.csv
void write_plot_data(const std::string& dir, const quality::QualityReport& report);

/// report.json, table3*.csv, table4.csv and the plot data into `dir` (created if needed).
void write_all(const std::string& dir, const quality::QualityReport& report, const Metadata& metadata = {});

} // namespace windsynth::report
