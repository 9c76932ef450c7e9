#include "windsynth/baseline.hpp"
#include "windsynth/csv.hpp"
#include "windsynth/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace windsynth::baseline {

PowerCurve::PowerCurve(std::vector<CurvePoint> points)
    : points_(std::move(points))
{
    if (points_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "power curve", "no points");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!std::isfinite(p.speed) || !(p.fraction >= 0.0 && p.fraction <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "power curve point " + std::to_string(i + 1),
                "fraction must lie in [0, 1]");
        }
        if (i > 0 && !(p.speed > points_[i - 1].speed)) {
            throw Error(ErrorCode::InvalidArgument, "power curve point " + std::to_string(i + 1),
                "speeds must be strictly increasing");
        }
    }
    if (points_.front().fraction != 0.0) {
        throw Error(ErrorCode::InvalidArgument, "power curve", "first fraction must be 0 (cut-in)");
    }
}

PowerCurve default_power_curve()
{
    return PowerCurve({{3.0, 0.0}, {4.0, 0.03}, {5.0, 0.08}, {6.0, 0.16}, {7.0, 0.27}, {8.0, 0.41},
        {9.0, 0.58}, {10.0, 0.75}, {11.0, 0.89}, {12.0, 0.97}, {13.0, 1.0}, {25.0, 1.0}, {25.01, 0.0}});
}

PowerCurve parse_curve_csv(const std::string& path)
{
    csv::Reader reader(path);
    std::vector<std::string_view> fields;
    if (!reader.next(fields)) {
        throw Error(ErrorCode::MalformedRow, path + ":1", "missing header");
    }
    csv::expect_header(reader, fields, {"speed_ms", "power_fraction"});
    std::vector<CurvePoint> points;
    while (reader.next(fields)) {
        const auto speed = fields.size() == 2 ? csv::parse_double(fields[0]) : std::nullopt;
        const auto frac = fields.size() == 2 ? csv::parse_double(fields[1]) : std::nullopt;
        if (!speed || !frac || *speed < 0.0) {
            throw Error(ErrorCode::MalformedRow, reader.where());
        }
        points.push_back({*speed, *frac});
    }
    return PowerCurve(std::move(points));
}

void write_curve_csv(const std::string& path, const PowerCurve& curve)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, path, "cannot open for writing");
    }
    out << "speed_ms,power_fraction\n";
    for (const auto& p : curve.points()) {
        out << csv::format_double(p.speed) << ',' << csv::format_double(p.fraction) << '\n';
    }
}

Stencil stencil_for(const grid::GridSpec& g, grid::LonLat p)
{
    constexpr double kSlack = 1e-9;
    const double fx = (p.lon - g.lon0) / g.dlon;
    const double fy = (p.lat - g.lat0) / g.dlat;
    const double max_x = static_cast<double>(g.nlon - 1);
    const double max_y = static_cast<double>(g.nlat - 1);
    if (!(fx >= -kSlack && fx <= max_x + kSlack && fy >= -kSlack && fy <= max_y + kSlack)) {
        throw Error(ErrorCode::OutsideGrid, csv::format_double(p.lon) + "," + csv::format_double(p.lat));
    }
    auto axis = [](double f, std::size_t n, std::size_t& i0, double& t) {
        if (n == 1) {
            i0 = 0;
            t = 0.0;
            return;
        }
        const double clamped = std::clamp(f, 0.0, static_cast<double>(n - 1));
        i0 = std::min(static_cast<std::size_t>(std::floor(clamped)), n - 2);
        t = clamped - static_cast<double>(i0);
    };
    std::size_t i0 = 0, j0 = 0;
    double tx = 0.0, ty = 0.0;
    axis(fx, g.nlon, i0, tx);
    axis(fy, g.nlat, j0, ty);
    const std::size_t i1 = g.nlon == 1 ? i0 : i0 + 1;
    const std::size_t j1 = g.nlat == 1 ? j0 : j0 + 1;
    return Stencil{
        {g.index(i0, j0), g.index(i1, j0), g.index(i0, j1), g.index(i1, j1)},
        {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty},
    };
}

namespace {

WindAt interpolate(const grid::WindField& field, const Stencil& s, std::size_t hour) noexcept
{
    WindAt w{0.0, 0.0};
    for (std::size_t c = 0; c < 4; ++c) {
        w.v10 += s.weight[c] * field.speed10(s.index[c], hour);
        w.v50 += s.weight[c] * field.speed50(s.index[c], hour);
    }
    return w;
}

} // namespace

WindAt interpolate_wind(const grid::WindField& field, grid::LonLat p, std::size_t hour)
{
    if (hour >= field.axis().size()) {
        throw Error(ErrorCode::InvalidArgument, "hour", "outside the wind field axis");
    }
    return interpolate(field, stencil_for(field.grid(), p), hour);
}

double hub_height_speed(double v10, double v50, double hub_height_m)
{
    if (!(hub_height_m > 0.0) || v10 < 0.0 || v50 < 0.0 || !std::isfinite(v10) || !std::isfinite(v50)) {
        throw Error(ErrorCode::NonPositiveSpeed, "hub_height_speed",
            "speeds must be >= 0 and hub height > 0");
    }
    if (v10 <= 0.01 || v50 <= 0.01) {
        return v50;
    }
    const double alpha = std::log(v50 / v10) / std::log(5.0);
    return v50 * std::pow(hub_height_m / 50.0, alpha);
}

double apply_curve(const PowerCurve& curve, double speed)
{
    const auto& pts = curve.points();
    if (speed < pts.front().speed || speed > pts.back().speed) {
        return 0.0;
    }
    auto hi = std::upper_bound(pts.begin(), pts.end(), speed,
        [](double s, const CurvePoint& p) { return s < p.speed; });
    if (hi == pts.end()) {
        return pts.back().fraction;
    }
    const auto lo = std::prev(hi);
    const double t = (speed - lo->speed) / (hi->speed - lo->speed);
    return lo->fraction + t * (hi->fraction - lo->fraction);
}

std::vector<double> fleet_hub_speeds(const grid::WindField& field, const ingest::PlantRegistry& plants,
    const BaselineConfig& cfg)
{
    if (plants.plants.empty()) {
        throw Error(ErrorCode::EmptyRegistry, "plants");
    }
    std::vector<Stencil> stencils;
    stencils.reserve(plants.plants.size());
    for (const auto& p : plants.plants) {
        stencils.push_back(stencil_for(field.grid(), {p.lon, p.lat}));
    }
    const std::size_t n_plants = plants.plants.size();
    std::vector<double> speeds(field.axis().size() * n_plants);
    for (std::size_t t = 0; t < field.axis().size(); ++t) {
        for (std::size_t k = 0; k < n_plants; ++k) {
            const WindAt w = interpolate(field, stencils[k], t);
            speeds[t * n_plants + k] = hub_height_speed(w.v10, w.v50, cfg.hub_height_m);
        }
    }
    return speeds;
}

namespace {

std::vector<double> fleet_cf(const std::vector<double>& speeds, const ingest::PlantRegistry& plants,
    const PowerCurve& curve, double scale, std::size_t first_hour, std::size_t n_hours)
{
    const std::size_t n_plants = plants.plants.size();
    double total = 0.0;
    for (const auto& p : plants.plants) {
        total += p.capacity_mw;
    }
    std::vector<double> cf(n_hours);
    for (std::size_t i = 0; i < n_hours; ++i) {
        const double* row = speeds.data() + (first_hour + i) * n_plants;
        double acc = 0.0;
        for (std::size_t k = 0; k < n_plants; ++k) {
            acc += plants.plants[k].capacity_mw * apply_curve(curve, scale * row[k]);
        }
        cf[i] = acc / total;
    }
    return cf;
}

double mean_of(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

double calibrate_scale(const std::vector<double>& speeds, const ingest::PlantRegistry& plants,
    const PowerCurve& curve, const TimeAxis& field_axis, const Calibration& cal)
{
    if (cal.observed == nullptr || !cal.observed->axis.covers(cal.window) || !field_axis.covers(cal.window)
        || cal.window.empty()) {
        throw Error(ErrorCode::AxisMismatch, "calibration window",
            "observations and wind field must cover the calibration window");
    }
    const CapacityFactorSeries target_slice = slice(*cal.observed, cal.window);
    const double target = mean_of(target_slice.values);
    const std::size_t first = field_axis.index_of(cal.window.start());
    auto gap = [&](double s) {
        return mean_of(fleet_cf(speeds, plants, curve, s, first, cal.window.size())) - target;
    };
    // scan for the first factor that reaches the target, then bisect below it
    double lo = 0.0;
    double hi = 0.0;
    bool bracketed = false;
    for (int k = 1; k <= 100; ++k) {
        hi = 0.1 * k;
        if (gap(hi) >= 0.0) {
            bracketed = true;
            break;
        }
        lo = hi;
    }
    if (!bracketed || gap(lo) > 0.0) {
        throw Error(ErrorCode::BisectionFailure, "mean match", "target mean CF not reachable");
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double g = gap(mid);
        if (std::abs(g) < 1e-10) {
            return mid;
        }
        (g < 0.0 ? lo : hi) = mid;
    }
    const double s = 0.5 * (lo + hi);
    if (std::abs(gap(s)) >= 1e-6) {
        throw Error(ErrorCode::BisectionFailure, "mean match", "did not converge");
    }
    return s;
}

} // namespace

FleetSimulation simulate_fleet(const grid::WindField& field, const ingest::PlantRegistry& plants,
    const BaselineConfig& cfg, std::optional<Calibration> calibration)
{
    const std::vector<double> speeds = fleet_hub_speeds(field, plants, cfg);
    FleetSimulation sim;
    if (cfg.bias == BiasMode::MeanMatch) {
        if (!calibration) {
            throw Error(ErrorCode::InvalidArgument, "simulate_fleet", "MeanMatch needs observations");
        }
        sim.speed_scale = calibrate_scale(speeds, plants, cfg.curve, field.axis(), *calibration);
    }
    sim.series.axis = field.axis();
    sim.series.values = fleet_cf(speeds, plants, cfg.curve, sim.speed_scale, 0, field.axis().size());
    return sim;
}

} // namespace windsynth::baseline
