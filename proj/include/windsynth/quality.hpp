#pragma once

#include "windsynth/time_axis.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace windsynth::quality {

// Scalar metrics over aligned (observed, predicted) samples. Length mismatch
// raises AxisMismatch.

double mean(std::span<const double> x);
/// Sample variance (n - 1 denominator); a single sample has variance 0.
double variance(std::span<const double> x);
/// Pearson correlation. Throws DegenerateSeries if either input is constant.
double correlation(std::span<const double> obs, std::span<const double> pred);
/// mean(|pred - obs|) / mean(obs)
double nmae(std::span<const double> obs, std::span<const double> pred);
/// sqrt(mean((pred - obs)^2)) / mean(obs)
double nrmse(std::span<const double> obs, std::span<const double> pred);

/// Linear interpolation between order statistics at position p*(n-1)+1.
double quantile(std::span<const double> x, double p);
std::vector<double> quantiles(std::span<const double> x, std::span<const double> ps);

/// Summary of deviations pred - obs inside one group. Statistics are NaN when n == 0.
struct DeviationSummary {
    std::size_t n = 0;
    double median;
    double mean;
    double min;
    double max;
};

DeviationSummary summarize(std::vector<double> deviations);

struct BinDeviation {
    double lower;
    double upper; // +inf for the last, open-ended bin
    DeviationSummary deviation;
};

/// Deviations binned by the OBSERVED value into [0,w), [w,2w), ..., [top, inf).
/// Observations below zero fall into the first bin.
std::vector<BinDeviation> bin_deviations(std::span<const double> obs, std::span<const double> pred,
    double width = 0.1, double top = 0.8);

struct Predicate {
    enum class Kind { Less, Greater, Between };
    Kind kind;
    double a;
    double b = 0.0; // upper bound for Between (inclusive on both ends)

    static Predicate less(double t) { return {Kind::Less, t}; }
    static Predicate greater(double t) { return {Kind::Greater, t}; }
    static Predicate between(double lo, double hi) { return {Kind::Between, lo, hi}; }

    bool operator()(double x) const noexcept
    {
        switch (kind) {
        case Kind::Less: return x < a;
        case Kind::Greater: return x > a;
        case Kind::Between: return x >= a && x <= b;
        }
        return false;
    }
    std::string label() const;
};

std::vector<std::size_t> distribution_counts(std::span<const double> x, std::span<const Predicate> predicates);

struct Histogram {
    double origin; // left edge of bin 0
    double width;
    std::vector<double> density; // integrates to 1
};

Histogram histogram(std::span<const double> x, double width);

/// Deviation summaries per hour-of-day, index h holding label h+1 (UTC hour h).
std::array<DeviationSummary, 24> diurnal_stats(const CapacityFactorSeries& obs, const CapacityFactorSeries& pred);

enum class Season { Winter = 0, Spring, Summer, Autumn }; // DJF, MAM, JJA, SON
std::string season_name(Season s);
Season season_of_month(unsigned month) noexcept;

struct SeasonalCell {
    Season season;
    double lower;
    double upper; // +inf for the top class
    DeviationSummary deviation;
};

/// Season x observed-CF-class cells (classes of width 0.2, last one open),
/// season-major order. Empty cells keep n = 0.
std::vector<SeasonalCell> seasonal_stats(const CapacityFactorSeries& obs, const CapacityFactorSeries& pred);

struct ExtremeEventStats {
    std::size_t frequency = 0;
    std::optional<double> mean_duration;
    std::optional<std::size_t> max_duration;
    std::size_t total_hours = 0;
};

/// Maximal runs of consecutive hours satisfying `predicate`.
ExtremeEventStats extreme_events(std::span<const double> x, const Predicate& predicate);

/// Differences x[t+k] - x[t] pooled over every lag k = 1..T.
struct RampStats {
    std::size_t timeframe;
    double min;
    double max;
    double neg_mean; // NaN when no negative ramp
    std::size_t neg_freq;
    double pos_mean; // NaN when no positive ramp
    std::size_t pos_freq;
    std::size_t zero_freq;
    std::size_t freq_below; // < -0.2
    std::size_t freq_above; // > +0.2
};

inline constexpr double kHighRamp = 0.2;

RampStats ramp_stats(std::span<const double> x, std::size_t timeframe);

struct CdfPoint {
    double value;
    double cumulative;
};

/// Empirical CDF of x[t+lag] - x[t]; ties collapse onto the highest cumulative probability.
std::vector<CdfPoint> ramp_cdf(std::span<const double> x, std::size_t lag = 1);

inline constexpr std::array<double, 5> kReportQuantiles{0.0, 0.25, 0.5, 0.75, 1.0};
inline constexpr std::array<std::size_t, 4> kRampTimeframes{1, 3, 6, 12};
inline constexpr double kHistogramWidth = 0.01;

std::vector<Predicate> default_distribution_predicates();
std::vector<Predicate> default_extreme_predicates();

struct SeriesSummary {
    double variance;
    std::vector<double> quantiles; // at kReportQuantiles
    std::size_t n_negative;
    std::vector<std::size_t> distribution; // per default_distribution_predicates()
    Histogram histogram;
    std::vector<ExtremeEventStats> extremes; // per default_extreme_predicates()
    std::vector<RampStats> ramps; // per kRampTimeframes
    std::vector<CdfPoint> ramp_cdf;
};

SeriesSummary summarize_series(std::span<const double> x);

struct QualityReport {
    TimeAxis axis;
    double correlation;
    double nmae;
    double nrmse;
    SeriesSummary observed;
    SeriesSummary predicted;
    std::vector<BinDeviation> bins;
    std::array<DeviationSummary, 24> diurnal;
    std::vector<SeasonalCell> seasonal;
};

QualityReport full_report(const CapacityFactorSeries& obs, const CapacityFactorSeries& pred);

} // namespace windsynth::quality
