#pragma once

#include "windsynth/features.hpp"
#include "windsynth/grid.hpp"
#include "windsynth/ingest.hpp"
#include "windsynth/mlp.hpp"
#include "windsynth/time_axis.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace windsynth::pipeline {

/// One rolling block: predict `predict_first..predict_last`, train on every other year.
struct Fold {
    int predict_first;
    int predict_last;
    std::vector<int> train_years;
};

struct FoldPlan {
    int first_year;
    int last_year;
    std::vector<Fold> folds;
};

/// Blocks of `block` consecutive years from the start of the range; the last
/// block may be shorter. Throws PeriodTooShort unless the range spans > block years.
FoldPlan build_fold_plan(int first_year, int last_year, int block);

/// [begin, end) in epoch hours.
struct HourRange {
    EpochHour begin;
    EpochHour end;

    bool contains(EpochHour h) const noexcept { return h >= begin && h < end; }
    bool overlaps(const HourRange& o) const noexcept { return begin < o.end && o.begin < end; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(end - begin); }
};

HourRange year_hours(int year) noexcept;
HourRange year_hours(int first_year, int last_year) noexcept;

enum class Variant { Mlm1, Mlm2, Mlm3 };
std::string_view variant_name(Variant v) noexcept;
std::optional<Variant> parse_variant(std::string_view text) noexcept;

struct ExperimentConfig {
    Variant variant = Variant::Mlm2;
    mlp::MlpConfig mlp; // hidden sizes, seed and training knobs
    int first_year = 2010;
    int last_year = 2016;
    int block = 2;
    std::size_t k_nearest = 4;
    std::size_t jobs = 1; // folds trained concurrently; results do not depend on it
};

struct DataBundle {
    grid::WindField wind;
    std::optional<ingest::PlantRegistry> plants; // required by Mlm2 and Mlm3
    CapacityFactorSeries observed;
};

grid::SubsetSelection select_subset(Variant variant, const grid::GridSpec& grid,
    const std::optional<ingest::PlantRegistry>& plants, std::size_t k_nearest = 4);

/// Everything needed to turn wind fields into capacity factors after training.
struct TrainedPredictor {
    grid::GridSpec grid;
    grid::SubsetSelection selection;
    features::ScalingParams feature_scaling;
    features::ScalingParams target_scaling;
    mlp::MlpModel model;
    mlp::TrainReport report;
};

/// Fits scaling on `train_rows`, scales features and target, trains the perceptron.
TrainedPredictor fit_predictor(const grid::GridSpec& grid, const grid::SubsetSelection& selection,
    const features::FeatureMatrix& features, std::span<const double> target_cf,
    std::span<const std::size_t> train_rows, const mlp::MlpConfig& config, std::uint64_t stream = 0);

/// Capacity factors for `rows` of an unscaled feature matrix.
std::vector<double> apply_predictor(const TrainedPredictor& predictor, const features::FeatureMatrix& features,
    std::span<const std::size_t> rows);

/// Capacity factors for every hour of `axis` from a wind field.
CapacityFactorSeries predict_series(const TrainedPredictor& predictor, const grid::WindField& wind,
    const TimeAxis& axis);

void save_predictor(const TrainedPredictor& predictor, const std::string& path);
TrainedPredictor load_predictor(const std::string& path);

struct FoldProvenance {
    std::size_t fold;
    HourRange predicted;
    std::vector<HourRange> training;
    mlp::TrainReport report;
};

struct FoldOutput {
    std::vector<double> cf; // one value per predicted hour
    FoldProvenance provenance;
};

/// Train on the fold's training years, predict its window (capacity-factor units).
FoldOutput run_fold(const Fold& fold, std::size_t fold_index, const features::FeatureMatrix& features,
    const CapacityFactorSeries& target, const mlp::MlpConfig& config);

struct SyntheticSeries {
    CapacityFactorSeries series;
    std::vector<FoldProvenance> provenance; // fold order
    grid::SubsetSelection selection;
};

SyntheticSeries run_experiment(const ExperimentConfig& cfg, const DataBundle& data);

struct CandidateMetrics {
    std::string label;
    double nmae;
    double nrmse;
    double correlation; // NaN when unknown
};

/// Lowest NMAE, then lowest NRMSE, then highest correlation; earlier candidates win ties.
std::string select_model(std::span<const CandidateMetrics> candidates);
std::string select_model(const std::vector<std::pair<std::string, CapacityFactorSeries>>& candidates,
    const CapacityFactorSeries& obs);

/// Mean observed CF per (month, day, hour) over each fold's training years,
/// evaluated on that fold's prediction window. Calendar slots missing from the
/// training years (29 February) fall back to the hour-of-day mean.
CapacityFactorSeries hourly_climatology(const CapacityFactorSeries& observed, const FoldPlan& plan);

} // namespace windsynth::pipeline
