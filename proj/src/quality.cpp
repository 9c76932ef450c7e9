#include "windsynth/quality.hpp"
#include "windsynth/error.hpp"
#include "windsynth/csv.hpp"
#include "windsynth/simd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace windsynth::quality {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_aligned(std::span<const double> obs, std::span<const double> pred)
{
    if (obs.size() != pred.size()) {
        throw Error(ErrorCode::AxisMismatch, "series",
            std::to_string(obs.size()) + " vs " + std::to_string(pred.size()) + " samples");
    }
}

void require_aligned(const CapacityFactorSeries& obs, const CapacityFactorSeries& pred)
{
    if (!(obs.axis == pred.axis) || obs.values.size() != pred.values.size()) {
        throw Error(ErrorCode::AxisMismatch, format_timestamp(pred.axis.start()),
            "observed and predicted axes differ");
    }
}

void require_nonempty(std::span<const double> x, const char* what)
{
    if (x.empty()) {
        throw Error(ErrorCode::InvalidArgument, what, "empty series");
    }
}

double sorted_quantile(std::span<const double> sorted, double p)
{
    const std::size_t n = sorted.size();
    const double h = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= n) {
        return sorted[n - 1];
    }
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

// Rounds away the binary noise of k * width so that decimal edges such as 0.3 are exact.
double snap(double x)
{
    return std::round(x * 1e12) / 1e12;
}

double decimal_edge(std::size_t b, double width)
{
    return snap(static_cast<double>(b) * width);
}

// Number of interior edges at or below x; values below the first edge go to class 0.
std::size_t class_of(double x, std::span<const double> interior_edges)
{
    return static_cast<std::size_t>(
        std::upper_bound(interior_edges.begin(), interior_edges.end(), x) - interior_edges.begin());
}

double mean_of_obs(std::span<const double> obs)
{
    const double m = mean(obs);
    if (!(m > 0.0)) {
        throw Error(ErrorCode::ZeroMeanObservations, "obs", "mean observed value must be positive");
    }
    return m;
}

} // namespace

double mean(std::span<const double> x)
{
    require_nonempty(x, "mean");
    return simd::sum(x) / static_cast<double>(x.size());
}

double variance(std::span<const double> x)
{
    require_nonempty(x, "variance");
    if (x.size() == 1) {
        return 0.0;
    }
    const double m = mean(x);
    std::vector<double> centre(x.size(), m);
    return simd::sum_sq_diff(x, centre) / static_cast<double>(x.size() - 1);
}

double correlation(std::span<const double> obs, std::span<const double> pred)
{
    require_aligned(obs, pred);
    if (obs.size() < 2) {
        throw Error(ErrorCode::DegenerateSeries, "correlation", "need at least two samples");
    }
    const double mo = mean(obs);
    const double mp = mean(pred);
    std::vector<double> co(obs.begin(), obs.end());
    std::vector<double> cp(pred.begin(), pred.end());
    for (auto& v : co) {
        v -= mo;
    }
    for (auto& v : cp) {
        v -= mp;
    }
    const double sxy = simd::dot(co, cp);
    const double sxx = simd::dot(co, co);
    const double syy = simd::dot(cp, cp);
    if (!(sxx > 0.0) || !(syy > 0.0)) {
        throw Error(ErrorCode::DegenerateSeries, "correlation", "zero variance input");
    }
    return sxy / std::sqrt(sxx * syy);
}

double nmae(std::span<const double> obs, std::span<const double> pred)
{
    require_aligned(obs, pred);
    const double m = mean_of_obs(obs);
    return simd::sum_abs_diff(pred, obs) / static_cast<double>(obs.size()) / m;
}

double nrmse(std::span<const double> obs, std::span<const double> pred)
{
    require_aligned(obs, pred);
    const double m = mean_of_obs(obs);
    return std::sqrt(simd::sum_sq_diff(pred, obs) / static_cast<double>(obs.size())) / m;
}

double quantile(std::span<const double> x, double p)
{
    const double ps[1] = {p};
    return quantiles(x, ps).front();
}

std::vector<double> quantiles(std::span<const double> x, std::span<const double> ps)
{
    require_nonempty(x, "quantiles");
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out;
    out.reserve(ps.size());
    for (double p : ps) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "quantiles", "p outside [0, 1]");
        }
        out.push_back(sorted_quantile(sorted, p));
    }
    return out;
}

DeviationSummary summarize(std::vector<double> deviations)
{
    DeviationSummary s{deviations.size(), kNaN, kNaN, kNaN, kNaN};
    if (deviations.empty()) {
        return s;
    }
    std::sort(deviations.begin(), deviations.end());
    s.median = sorted_quantile(deviations, 0.5);
    s.mean = simd::sum(deviations) / static_cast<double>(deviations.size());
    s.min = deviations.front();
    s.max = deviations.back();
    return s;
}

std::vector<BinDeviation> bin_deviations(std::span<const double> obs, std::span<const double> pred,
    double width, double top)
{
    require_aligned(obs, pred);
    if (!(width > 0.0) || !(top > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "bin_deviations", "width and top must be positive");
    }
    const auto n_closed = static_cast<std::size_t>(std::llround(top / width));
    std::vector<double> edges(n_closed + 2);
    for (std::size_t b = 0; b <= n_closed; ++b) {
        edges[b] = decimal_edge(b, width);
    }
    edges[n_closed + 1] = kInf;
    std::vector<std::vector<double>> groups(n_closed + 1);
    for (std::size_t t = 0; t < obs.size(); ++t) {
        groups[class_of(obs[t], std::span(edges).subspan(1, n_closed))].push_back(pred[t] - obs[t]);
    }
    std::vector<BinDeviation> out;
    for (std::size_t b = 0; b <= n_closed; ++b) {
        out.push_back({edges[b], edges[b + 1], summarize(std::move(groups[b]))});
    }
    return out;
}

std::string Predicate::label() const
{
    switch (kind) {
    case Kind::Less: return "<" + csv::format_double(a);
    case Kind::Greater: return ">" + csv::format_double(a);
    case Kind::Between: return "[" + csv::format_double(a) + "," + csv::format_double(b) + "]";
    }
    return "?";
}

std::vector<std::size_t> distribution_counts(std::span<const double> x, std::span<const Predicate> predicates)
{
    require_nonempty(x, "distribution_counts");
    std::vector<std::size_t> counts(predicates.size(), 0);
    for (double v : x) {
        for (std::size_t i = 0; i < predicates.size(); ++i) {
            counts[i] += predicates[i](v) ? 1 : 0;
        }
    }
    return counts;
}

Histogram histogram(std::span<const double> x, double width)
{
    require_nonempty(x, "histogram");
    if (!(width > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "histogram", "width must be positive");
    }
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    auto edge = [width](long long k) { return snap(static_cast<double>(k) * width); };
    auto k0 = static_cast<long long>(std::floor(*lo / width));
    while (edge(k0) > *lo) {
        --k0;
    }
    while (edge(k0 + 1) <= *lo) {
        ++k0;
    }
    auto bin_of = [&](double v) {
        auto k = static_cast<long long>(std::floor(v / width));
        while (edge(k) > v) {
            --k;
        }
        while (edge(k + 1) <= v) {
            ++k;
        }
        return static_cast<std::size_t>(k - k0);
    };
    const std::size_t n_bins = bin_of(*hi) + 1;
    Histogram h{edge(k0), width, std::vector<double>(n_bins, 0.0)};
    for (double v : x) {
        h.density[bin_of(v)] += 1.0;
    }
    const double scale = 1.0 / (static_cast<double>(x.size()) * width);
    for (auto& d : h.density) {
        d *= scale;
    }
    return h;
}

std::array<DeviationSummary, 24> diurnal_stats(const CapacityFactorSeries& obs, const CapacityFactorSeries& pred)
{
    require_aligned(obs, pred);
    std::array<std::vector<double>, 24> groups;
    for (std::size_t t = 0; t < obs.values.size(); ++t) {
        groups[obs.axis.civil(t).hour].push_back(pred.values[t] - obs.values[t]);
    }
    std::array<DeviationSummary, 24> out;
    for (std::size_t h = 0; h < 24; ++h) {
        out[h] = summarize(std::move(groups[h]));
    }
    return out;
}

Season season_of_month(unsigned month) noexcept
{
    switch (month) {
    case 12: case 1: case 2: return Season::Winter;
    case 3: case 4: case 5: return Season::Spring;
    case 6: case 7: case 8: return Season::Summer;
    default: return Season::Autumn;
    }
}

std::string season_name(Season s)
{
    switch (s) {
    case Season::Winter: return "winter";
    case Season::Spring: return "spring";
    case Season::Summer: return "summer";
    case Season::Autumn: return "autumn";
    }
    return "?";
}

std::vector<SeasonalCell> seasonal_stats(const CapacityFactorSeries& obs, const CapacityFactorSeries& pred)
{
    require_aligned(obs, pred);
    constexpr std::size_t kClasses = 5;
    constexpr std::array<double, kClasses + 1> edges{0.0, 0.2, 0.4, 0.6, 0.8, kInf};
    std::array<std::array<std::vector<double>, kClasses>, 4> groups;
    for (std::size_t t = 0; t < obs.values.size(); ++t) {
        const auto season = static_cast<std::size_t>(season_of_month(obs.axis.civil(t).month));
        const double o = obs.values[t];
        groups[season][class_of(o, std::span(edges).subspan(1, kClasses - 1))].push_back(pred.values[t] - o);
    }
    std::vector<SeasonalCell> out;
    for (std::size_t s = 0; s < 4; ++s) {
        for (std::size_t c = 0; c < kClasses; ++c) {
            out.push_back({static_cast<Season>(s), edges[c], edges[c + 1], summarize(std::move(groups[s][c]))});
        }
    }
    return out;
}

ExtremeEventStats extreme_events(std::span<const double> x, const Predicate& predicate)
{
    require_nonempty(x, "extreme_events");
    ExtremeEventStats s;
    std::size_t run = 0;
    std::size_t longest = 0;
    auto close_run = [&] {
        if (run > 0) {
            ++s.frequency;
            s.total_hours += run;
            longest = std::max(longest, run);
            run = 0;
        }
    };
    for (double v : x) {
        if (predicate(v)) {
            ++run;
        } else {
            close_run();
        }
    }
    close_run();
    if (s.frequency > 0) {
        s.mean_duration = static_cast<double>(s.total_hours) / static_cast<double>(s.frequency);
        s.max_duration = longest;
    }
    return s;
}

RampStats ramp_stats(std::span<const double> x, std::size_t timeframe)
{
    if (timeframe == 0) {
        throw Error(ErrorCode::InvalidArgument, "ramp_stats", "timeframe must be >= 1");
    }
    if (x.size() <= timeframe) {
        throw Error(ErrorCode::SeriesTooShort, "ramp_stats",
            "need more than " + std::to_string(timeframe) + " samples");
    }
    RampStats r{timeframe, kInf, -kInf, kNaN, 0, kNaN, 0, 0, 0, 0};
    double neg_sum = 0.0;
    double pos_sum = 0.0;
    const std::size_t n = x.size();
    for (std::size_t k = 1; k <= timeframe; ++k) {
        for (std::size_t t = 0; t + k < n; ++t) {
            const double d = x[t + k] - x[t];
            r.min = std::min(r.min, d);
            r.max = std::max(r.max, d);
            if (d < 0.0) {
                ++r.neg_freq;
                neg_sum += d;
            } else if (d > 0.0) {
                ++r.pos_freq;
                pos_sum += d;
            } else {
                ++r.zero_freq;
            }
            r.freq_below += d < -kHighRamp ? 1 : 0;
            r.freq_above += d > kHighRamp ? 1 : 0;
        }
    }
    if (r.neg_freq > 0) {
        r.neg_mean = neg_sum / static_cast<double>(r.neg_freq);
    }
    if (r.pos_freq > 0) {
        r.pos_mean = pos_sum / static_cast<double>(r.pos_freq);
    }
    return r;
}

std::vector<CdfPoint> ramp_cdf(std::span<const double> x, std::size_t lag)
{
    if (lag == 0) {
        throw Error(ErrorCode::InvalidArgument, "ramp_cdf", "lag must be >= 1");
    }
    if (x.size() <= lag) {
        throw Error(ErrorCode::SeriesTooShort, "ramp_cdf", "need more than " + std::to_string(lag) + " samples");
    }
    std::vector<double> diffs(x.size() - lag);
    for (std::size_t t = 0; t + lag < x.size(); ++t) {
        diffs[t] = x[t + lag] - x[t];
    }
    std::sort(diffs.begin(), diffs.end());
    const double n = static_cast<double>(diffs.size());
    std::vector<CdfPoint> out;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        if (i + 1 < diffs.size() && diffs[i + 1] == diffs[i]) {
            continue;
        }
        out.push_back({diffs[i], static_cast<double>(i + 1) / n});
    }
    return out;
}

std::vector<Predicate> default_distribution_predicates()
{
    return {Predicate::less(0.04), Predicate::between(0.08, 0.12), Predicate::greater(0.8)};
}

std::vector<Predicate> default_extreme_predicates()
{
    return {Predicate::less(0.005), Predicate::less(0.01), Predicate::greater(0.75), Predicate::greater(0.8)};
}

SeriesSummary summarize_series(std::span<const double> x)
{
    SeriesSummary s;
    s.variance = variance(x);
    s.quantiles = quantiles(x, kReportQuantiles);
    s.n_negative = static_cast<std::size_t>(std::count_if(x.begin(), x.end(), [](double v) { return v < 0.0; }));
    const auto dist = default_distribution_predicates();
    s.distribution = distribution_counts(x, dist);
    s.histogram = histogram(x, kHistogramWidth);
    for (const auto& p : default_extreme_predicates()) {
        s.extremes.push_back(extreme_events(x, p));
    }
    for (std::size_t tf : kRampTimeframes) {
        s.ramps.push_back(ramp_stats(x, tf));
    }
    s.ramp_cdf = ramp_cdf(x, 1);
    return s;
}

QualityReport full_report(const CapacityFactorSeries& obs, const CapacityFactorSeries& pred)
{
    require_aligned(obs, pred);
    QualityReport r;
    r.axis = obs.axis;
    r.correlation = correlation(obs.values, pred.values);
    r.nmae = nmae(obs.values, pred.values);
    r.nrmse = nrmse(obs.values, pred.values);
    r.observed = summarize_series(obs.values);
    r.predicted = summarize_series(pred.values);
    r.bins = bin_deviations(obs.values, pred.values);
    r.diurnal = diurnal_stats(obs, pred);
    r.seasonal = seasonal_stats(obs, pred);
    return r;
}

} // namespace windsynth::quality
