#include "windsynth/baseline.hpp"
#include "windsynth/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace windsynth::baseline {

grid::GridSpec default_synth_grid()
{
    return grid::grid_from_bbox(8.125, 11.25, 49.0, 51.5, 0.625, 0.5);
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Stationary AR(1) with the given marginal standard deviation.
class Ar1 {
public:
    Ar1(double phi, double sd)
        : phi_(phi)
        , innovation_sd_(sd * std::sqrt(1.0 - phi * phi))
    {
    }

    double step(std::mt19937_64& rng, std::normal_distribution<double>& normal)
    {
        value_ = phi_ * value_ + innovation_sd_ * normal(rng);
        return value_;
    }
    void reset(double v) noexcept { value_ = v; }

private:
    double phi_;
    double innovation_sd_;
    double value_ = 0.0;
};

// Components are stored to 1 mm/s, as exported reanalysis files are.
double millis(double x) { return std::round(x * 1000.0) / 1000.0; }

} // namespace

Scenario synth_scenario(const SynthOptions& o)
{
    if (o.years < 1 || o.n_plants < 1) {
        throw Error(ErrorCode::InvalidArgument, "synth", "need years >= 1 and n_plants >= 1");
    }
    const grid::GridSpec& g = o.grid;
    g.validate();
    std::seed_seq seq{static_cast<std::uint32_t>(o.seed), static_cast<std::uint32_t>(o.seed >> 32), 0x5eedu};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const TimeAxis axis = TimeAxis::for_years(o.first_year, o.first_year + o.years - 1);
    const std::size_t n_points = g.size();
    const double lon_c = 0.5 * (g.lon0 + g.lon_max());
    const double lat_c = 0.5 * (g.lat0 + g.lat_max());

    // per-point climate: mean level, shear exponent, direction offset
    std::vector<double> base(n_points), shear(n_points), veer(n_points);
    for (std::size_t p = 0; p < n_points; ++p) {
        const auto pt = g.point(p);
        base[p] = 6.0 + 0.3 * (pt.lat - lat_c) + 0.6 * (unit(rng) - 0.5);
        shear[p] = 0.12 + 0.10 * unit(rng);
        veer[p] = 0.05 * normal(rng);
    }

    Ar1 synoptic(0.985, 2.2);
    Ar1 grad_lon(0.98, 0.5);
    Ar1 grad_lat(0.98, 0.5);
    Ar1 direction(0.99, 0.6);
    std::vector<Ar1> local(n_points, Ar1(0.9, 0.5));

    std::vector<double> data(axis.size() * grid::kWindVariableCount * n_points);
    for (std::size_t t = 0; t < axis.size(); ++t) {
        const CivilHour c = axis.civil(t);
        const double day = static_cast<double>(axis.at(t)) / 24.0;
        const double seasonal = 1.5 * std::cos(kTwoPi * (day - 15.0) / 365.25);
        const double diurnal = 0.4 * std::cos(kTwoPi * (static_cast<double>(c.hour) - 3.0) / 24.0);
        const double shear_cycle = 0.06 * std::cos(kTwoPi * (static_cast<double>(c.hour) - 2.0) / 24.0);
        const double r = synoptic.step(rng, normal);
        const double gx = grad_lon.step(rng, normal);
        const double gy = grad_lat.step(rng, normal);
        const double theta = 0.35 + direction.step(rng, normal);

        double* slab = data.data() + t * grid::kWindVariableCount * n_points;
        for (std::size_t p = 0; p < n_points; ++p) {
            const auto pt = g.point(p);
            const double s50 = std::max(0.3,
                base[p] + seasonal + diurnal + r + gx * (pt.lon - lon_c) + gy * (pt.lat - lat_c)
                    + local[p].step(rng, normal));
            const double alpha = std::clamp(shear[p] + shear_cycle, 0.05, 0.4);
            const double s10 = s50 * std::pow(10.0 / 50.0, alpha);
            const double s2 = s50 * std::pow(2.0 / 50.0, alpha);
            const double cu = std::cos(theta + veer[p]);
            const double cv = std::sin(theta + veer[p]);
            const double speeds[3] = {s2, s10, s50};
            for (std::size_t level = 0; level < 3; ++level) {
                slab[(2 * level) * n_points + p] = millis(speeds[level] * cu);
                slab[(2 * level + 1) * n_points + p] = millis(speeds[level] * cv);
            }
        }
    }
    grid::WindField wind(g, axis, std::move(data));

    ingest::PlantRegistry plants;
    const double lon_span = g.lon_max() - g.lon0;
    const double lat_span = g.lat_max() - g.lat0;
    for (std::size_t k = 0; k < o.n_plants; ++k) {
        const double lon = g.lon0 + lon_span * (0.05 + 0.9 * unit(rng));
        const double lat = g.lat0 + lat_span * (0.05 + 0.9 * unit(rng));
        const double cap = 2.0 + 58.0 * unit(rng);
        plants.plants.push_back({lon, lat, cap});
    }

    BaselineConfig fleet = o.fleet;
    fleet.bias = BiasMode::None;
    FleetSimulation sim = simulate_fleet(wind, plants, fleet);
    for (double& v : sim.series.values) {
        v = std::clamp(v + o.noise_sd * normal(rng), 0.0, 1.0);
    }
    return Scenario{std::move(wind), std::move(plants), std::move(sim.series)};
}

} // namespace windsynth::baseline
