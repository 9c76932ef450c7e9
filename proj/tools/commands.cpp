#include "commands.hpp"

#include "windsynth/baseline.hpp"
#include "windsynth/config.hpp"
#include "windsynth/csv.hpp"
#include "windsynth/error.hpp"
#include "windsynth/features.hpp"
#include "windsynth/ingest.hpp"
#include "windsynth/pipeline.hpp"
#include "windsynth/quality.hpp"
#include "windsynth/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <iostream>
#include <numeric>
#include <string_view>

namespace windsynth::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class T>
T parse_number(std::string_view text, const std::string& what)
{
    T v{};
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size())
        throw UsageError(what + ": cannot parse '" + std::string(text) + "'");
    return v;
}

std::vector<std::string_view> tokens(std::string_view text, char sep)
{
    std::vector<std::string_view> out;
    for (std::size_t pos = 0;;) {
        auto next = text.find(sep, pos);
        out.push_back(text.substr(pos, next - pos));
        if (next == std::string_view::npos)
            return out;
        pos = next + 1;
    }
}

struct YearRange {
    int first;
    int last;
};

YearRange parse_years(const std::string& text)
{
    auto parts = tokens(text, '-');
    if (parts.size() == 1) {
        int y = parse_number<int>(parts[0], "--years");
        return {y, y};
    }
    if (parts.size() != 2)
        throw UsageError("--years: expected YYYY or YYYY-YYYY, got '" + text + "'");
    YearRange r{parse_number<int>(parts[0], "--years"), parse_number<int>(parts[1], "--years")};
    if (r.last < r.first)
        throw UsageError("--years: range is reversed");
    return r;
}

std::string years_text(YearRange r) { return std::to_string(r.first) + "-" + std::to_string(r.last); }

// "60" -> {60,60,60}; "60,80" -> two candidates; "40x60x80" -> per-layer sizes.
std::vector<std::array<std::size_t, 3>> parse_hidden(const std::string& text)
{
    std::vector<std::array<std::size_t, 3>> out;
    for (auto item : tokens(text, ',')) {
        auto layers = tokens(item, 'x');
        std::array<std::size_t, 3> h{};
        if (layers.size() == 1) {
            h.fill(parse_number<std::size_t>(layers[0], "--hidden"));
        } else if (layers.size() == 3) {
            for (int i = 0; i < 3; ++i)
                h[i] = parse_number<std::size_t>(layers[i], "--hidden");
        } else {
            throw UsageError("--hidden: expected N or AxBxC, got '" + std::string(item) + "'");
        }
        if (std::find(h.begin(), h.end(), 0u) != h.end())
            throw UsageError("--hidden: layer sizes must be positive");
        out.push_back(h);
    }
    return out;
}

std::string hidden_label(const std::array<std::size_t, 3>& h)
{
    if (h[0] == h[1] && h[1] == h[2])
        return std::to_string(h[0]);
    return std::to_string(h[0]) + "x" + std::to_string(h[1]) + "x" + std::to_string(h[2]);
}

pipeline::Variant parse_variant_flag(const std::string& text)
{
    auto v = pipeline::parse_variant(text);
    if (!v)
        throw UsageError("--variant: expected mlm1, mlm2 or mlm3, got '" + text + "'");
    return *v;
}

// Input file locations shared by most commands.
struct Inputs {
    std::string wind;
    std::string grid; // lon_min,lon_max,lat_min,lat_max,dlon,dlat; empty = read from wind header
    std::string plants;
    std::string obs;
    std::string generation;
    std::string capacity;
    std::string curve;
};

grid::GridSpec resolve_grid(const Inputs& in)
{
    if (!in.grid.empty()) {
        auto parts = tokens(in.grid, ',');
        if (parts.size() != 6)
            throw UsageError("--grid: expected lon_min,lon_max,lat_min,lat_max,dlon,dlat");
        double v[6];
        for (int i = 0; i < 6; ++i) {
            auto d = csv::parse_double(parts[i]);
            if (!d)
                throw UsageError("--grid: cannot parse '" + std::string(parts[i]) + "'");
            v[i] = *d;
        }
        return grid::grid_from_bbox(v[0], v[1], v[2], v[3], v[4], v[5]);
    }
    if (in.wind.empty())
        throw UsageError("--wind is required");
    return grid::infer_grid_from_wind_csv(in.wind);
}

grid::WindField load_wind(const Inputs& in)
{
    if (in.wind.empty())
        throw UsageError("--wind is required");
    return grid::load_wind_csv(in.wind, resolve_grid(in));
}

std::optional<ingest::PlantRegistry> load_plants(const Inputs& in)
{
    if (in.plants.empty())
        return std::nullopt;
    return ingest::parse_plants_csv(in.plants);
}

CapacityFactorSeries load_observed(const Inputs& in)
{
    if (!in.obs.empty())
        return ingest::parse_cf_csv(in.obs);
    if (!in.generation.empty() && !in.capacity.empty())
        return ingest::to_capacity_factors(
            ingest::parse_generation_csv(in.generation), ingest::parse_capacity_csv(in.capacity));
    throw UsageError("observations required: --obs, or --generation with --capacity");
}

// Whole calendar years lying inside every axis.
YearRange covered_years(std::initializer_list<TimeAxis> axes)
{
    EpochHour lo = std::numeric_limits<EpochHour>::min();
    EpochHour hi = std::numeric_limits<EpochHour>::max();
    for (const auto& a : axes) {
        lo = std::max(lo, a.start());
        hi = std::min(hi, a.end());
    }
    auto c = to_civil(lo);
    int first = (c.month == 1 && c.day == 1 && c.hour == 0) ? c.year : c.year + 1;
    int last = to_civil(hi).year - 1;
    if (last < first || lo >= hi)
        throw Error(ErrorCode::PeriodTooShort, "inputs", "no complete calendar year shared by all inputs");
    return {first, last};
}

CapacityFactorSeries overlap(const CapacityFactorSeries& s, const TimeAxis& other)
{
    const EpochHour lo = std::max(s.axis.start(), other.start());
    const EpochHour hi = std::min(s.axis.end(), other.end());
    if (lo >= hi)
        throw Error(ErrorCode::AxisMismatch, "evaluate", "observed and predicted series do not overlap");
    return slice(s, TimeAxis(lo, static_cast<std::size_t>(hi - lo)));
}

// Training knobs shared by `train` and `run`.
struct TrainSettings {
    std::string variant = "mlm2";
    std::string hidden = "60";
    std::uint64_t seed = 42;
    std::string years;
    std::size_t k = 4;
    double learning_rate = 0.1;
    std::size_t epochs = 500;
    std::string batch_mode = "full";
    std::size_t batch_size = 32;
    bool shuffle = false;

    mlp::MlpConfig mlp(const std::array<std::size_t, 3>& hidden_sizes) const
    {
        mlp::MlpConfig c;
        c.hidden_sizes = hidden_sizes;
        c.learning_rate = learning_rate;
        c.epochs = epochs;
        c.seed = seed;
        if (batch_mode == "full")
            c.batch_mode = mlp::BatchMode::Full;
        else if (batch_mode == "minibatch")
            c.batch_mode = mlp::BatchMode::MiniBatch;
        else
            throw UsageError("--batch-mode: expected full or minibatch, got '" + batch_mode + "'");
        c.batch_size = batch_size;
        c.shuffle = shuffle;
        try {
            c.validate();
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        return c;
    }
};

void add_input_options(CLI::App* cmd, Inputs& in, bool observations)
{
    cmd->add_option("--wind", in.wind, "Wind component CSV (timestamp + U2M..V50M columns per grid point)");
    cmd->add_option("--grid", in.grid, "Grid as lon_min,lon_max,lat_min,lat_max,dlon,dlat; empty = from wind header");
    cmd->add_option("--plants", in.plants, "Plant registry CSV (lon,lat,capacity_mw); needed by mlm2 and mlm3");
    if (observations) {
        cmd->add_option("--obs", in.obs, "Observed capacity factors CSV (timestamp,cf)");
        cmd->add_option("--generation", in.generation, "Observed generation CSV (timestamp,generation_mwh)");
        cmd->add_option("--capacity", in.capacity, "Installed capacity CSV (date,capacity_mw)");
    }
}

void add_train_options(CLI::App* cmd, TrainSettings& s, bool candidates)
{
    cmd->add_option("--variant", s.variant, "Grid subset: mlm1 (all points), mlm2 (k nearest), mlm3 (capacity quartile)");
    cmd->add_option("--hidden", s.hidden,
        candidates ? "Hidden sizes; N, AxBxC, or a comma list of candidates to select from"
                   : "Hidden sizes; N or AxBxC");
    cmd->add_option("--seed", s.seed, "Weight initialisation and shuffling seed");
    cmd->add_option("--years", s.years, "Period YYYY or YYYY-YYYY; empty = every whole year in the inputs");
    cmd->add_option("--k", s.k, "Nearest grid points per plant for mlm2");
    cmd->add_option("--learning-rate", s.learning_rate, "Gradient descent step size");
    cmd->add_option("--epochs", s.epochs, "Training epochs");
    cmd->add_option("--batch-mode", s.batch_mode, "full or minibatch");
    cmd->add_option("--batch-size", s.batch_size, "Rows per update in minibatch mode");
    cmd->add_flag("--shuffle,!--no-shuffle", s.shuffle, "Reshuffle rows every epoch in minibatch mode");
}

const std::vector<std::string> kPathKeys{"wind", "plants", "obs", "generation", "capacity", "curve", "out"};

// Config values fill every option not given on the command line. Relative
// paths are taken relative to the config file.
// Keys that `vocabulary` knows but `cmd` lacks are skipped, so one file can
// drive both run and train. Keys listed in `skip` are never applied.
void apply_config(CLI::App* cmd, const std::string& path, const CLI::App* vocabulary = nullptr,
    std::initializer_list<std::string_view> skip = {})
{
    if (path.empty())
        return;
    const auto values = config::parse_file(path);
    const fs::path base = fs::path(path).parent_path();
    for (const auto& [key, raw] : values) {
        std::string flag = key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        auto* opt = cmd->get_option_no_throw("--" + flag);
        const bool shared = vocabulary != nullptr && vocabulary->get_option_no_throw("--" + flag) != nullptr;
        if (key == "config" || (opt == nullptr && !shared))
            throw Error(ErrorCode::InvalidConfig, path, "unknown key '" + key + "'");
        if (opt == nullptr || std::find(skip.begin(), skip.end(), flag) != skip.end())
            continue;
        if (opt->count() > 0)
            continue;
        std::string value = raw;
        if (std::find(kPathKeys.begin(), kPathKeys.end(), flag) != kPathKeys.end() && !value.empty() &&
            fs::path(value).is_relative())
            value = (base / value).lexically_normal().string();
        try {
            opt->add_result(value);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw Error(ErrorCode::InvalidConfig, path, key + ": " + e.what());
        }
    }
}

void ensure_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorCode::Io, dir, ec.message());
}

void print_metrics(const quality::QualityReport& r)
{
    std::printf("hours        %zu\n", r.axis.size());
    std::printf("correlation  %.6f\n", r.correlation);
    std::printf("nmae         %.6f\n", r.nmae);
    std::printf("nrmse        %.6f\n", r.nrmse);
}

// ---- synth ----

struct SynthArgs {
    std::uint64_t seed = 7;
    int first_year = 2010;
    int years = 3;
    std::size_t n_plants = 24;
    double noise = 0.01;
    double hub_height = 100.0;
    std::string curve;
    std::string out;
};

// Training settings written into the scenario's run.cfg.
constexpr const char* kSynthRunConfig = R"(# Experiment over the generated scenario; paths are relative to this file.
variant = mlm2
hidden = 60
seed = 42
block = 1
k = 4
wind = wind.csv
plants = plants.csv
obs = observed_cf.csv
batch-mode = minibatch
batch-size = 32
learning-rate = 0.05
epochs = 40
shuffle = true
out = results
)";

void cmd_synth(const SynthArgs& a)
{
    baseline::SynthOptions o;
    o.seed = a.seed;
    o.first_year = a.first_year;
    o.years = a.years;
    o.n_plants = a.n_plants;
    o.noise_sd = a.noise;
    o.fleet.hub_height_m = a.hub_height;
    if (!a.curve.empty())
        o.fleet.curve = baseline::parse_curve_csv(a.curve);
    auto sc = baseline::synth_scenario(o);

    ensure_dir(a.out);
    const fs::path d(a.out);
    grid::write_wind_csv((d / "wind.csv").string(), sc.wind);
    ingest::write_plants_csv((d / "plants.csv").string(), sc.plants);
    ingest::write_cf_csv((d / "observed_cf.csv").string(), sc.observed);
    baseline::write_curve_csv((d / "curve.csv").string(), o.fleet.curve);

    double total = 0.0;
    for (const auto& p : sc.plants.plants)
        total += p.capacity_mw;
    const auto& axis = sc.observed.axis;
    ingest::CapacitySeries cap{epoch_day_of(axis.start()), {}};
    cap.values.assign(static_cast<std::size_t>(epoch_day_of(axis.end() - 1) - cap.first_day + 1), total);
    ingest::write_capacity_csv((d / "capacity.csv").string(), cap);
    ingest::GenerationSeries gen{axis, sc.observed.values};
    for (auto& v : gen.values)
        v *= total;
    ingest::write_generation_csv((d / "generation.csv").string(), gen);

    std::ofstream cfg(d / "run.cfg");
    cfg << kSynthRunConfig << "years = " << a.first_year << "-" << a.first_year + a.years - 1 << "\n";
    if (!cfg)
        throw Error(ErrorCode::Io, (d / "run.cfg").string(), "write failed");

    std::printf("wrote %zu hours, %zu grid points, %zu plants (%.1f MW) to %s\n", axis.size(),
        sc.wind.grid().size(), sc.plants.plants.size(), total, a.out.c_str());
}

// ---- subset ----

void cmd_subset(const Inputs& in, const std::string& variant, std::size_t k, const std::string& out)
{
    const auto g = resolve_grid(in);
    auto sel = pipeline::select_subset(parse_variant_flag(variant), g, load_plants(in), k);
    std::printf("%s: %zu of %zu grid points\n", std::string(grid::strategy_name(sel.strategy)).c_str(),
        sel.indices.size(), g.size());
    if (out.empty()) {
        for (auto i : sel.indices)
            std::printf("%zu\n", i);
        return;
    }
    std::ofstream f(out);
    if (!f)
        throw Error(ErrorCode::Io, out, "cannot open for writing");
    f << "index,lon,lat\n";
    for (auto i : sel.indices) {
        auto p = g.point(i);
        f << i << ',' << csv::format_double(p.lon) << ',' << csv::format_double(p.lat) << '\n';
    }
}

// ---- dump-features ----

void cmd_dump_features(const Inputs& in, const std::string& variant, std::size_t k, const std::string& years,
    const std::string& out)
{
    auto wind = load_wind(in);
    auto sel = pipeline::select_subset(parse_variant_flag(variant), wind.grid(), load_plants(in), k);
    TimeAxis axis = wind.axis();
    if (!years.empty()) {
        auto r = parse_years(years);
        axis = TimeAxis::for_years(r.first, r.last);
    }
    auto m = features::assemble(wind, sel, axis);
    features::write_features_csv(out, m);
    std::printf("%zu rows x %zu columns -> %s\n", m.rows(), m.cols(), out.c_str());
}

// ---- train / predict ----

void cmd_train(const Inputs& in, const TrainSettings& s, const std::string& out)
{
    auto hidden = parse_hidden(s.hidden);
    if (hidden.size() != 1)
        throw UsageError("train takes exactly one --hidden size");
    const auto cfg = s.mlp(hidden.front());
    const auto variant = parse_variant_flag(s.variant);

    auto wind = load_wind(in);
    auto observed = load_observed(in);
    auto years = s.years.empty() ? covered_years({wind.axis(), observed.axis}) : parse_years(s.years);
    const auto axis = TimeAxis::for_years(years.first, years.last);
    auto sel = pipeline::select_subset(variant, wind.grid(), load_plants(in), s.k);
    auto feats = features::assemble(wind, sel, axis);
    if (!observed.axis.covers(axis))
        throw Error(ErrorCode::AxisMismatch, "observed", "series does not cover " + years_text(years));
    auto target = slice(observed, axis);
    std::vector<std::size_t> rows(axis.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});

    auto predictor = pipeline::fit_predictor(wind.grid(), sel, feats, target.values, rows, cfg);
    pipeline::save_predictor(predictor, out);
    std::printf("trained %s on %s (%zu hours, %zu inputs): loss %.6g -> %.6g\n", s.variant.c_str(),
        years_text(years).c_str(), axis.size(), feats.cols(), predictor.report.initial_loss,
        predictor.report.final_loss);
}

void cmd_predict(const std::string& model, const Inputs& in, const std::string& years, const std::string& out)
{
    auto predictor = pipeline::load_predictor(model);
    if (in.wind.empty())
        throw UsageError("--wind is required");
    auto wind = grid::load_wind_csv(in.wind, predictor.grid);
    TimeAxis axis = wind.axis();
    if (!years.empty()) {
        auto r = parse_years(years);
        axis = TimeAxis::for_years(r.first, r.last);
    }
    auto series = pipeline::predict_series(predictor, wind, axis);
    ingest::write_cf_csv(out, series);
    std::printf("%zu hours -> %s\n", series.size(), out.c_str());
}

// ---- evaluate / report ----

quality::QualityReport evaluate_files(const std::string& obs_path, const std::string& pred_path)
{
    if (obs_path.empty() || pred_path.empty())
        throw UsageError("--obs and --pred are required");
    auto obs = ingest::parse_cf_csv(obs_path);
    auto pred = ingest::parse_cf_csv(pred_path);
    auto o = overlap(obs, pred.axis);
    auto p = overlap(pred, o.axis);
    return quality::full_report(o, p);
}

// ---- run ----

struct RunArgs {
    TrainSettings train;
    Inputs in;
    int block = 2;
    std::size_t jobs = 1;
    std::string out = "results";
};

void write_provenance(std::ostream& out, const std::string& label, const pipeline::SyntheticSeries& s)
{
    for (const auto& p : s.provenance) {
        std::string train;
        for (const auto& r : p.training) {
            if (!train.empty())
                train += ';';
            train += format_timestamp(r.begin) + "/" + format_timestamp(r.end - 1);
        }
        out << label << ',' << p.fold << ',' << format_timestamp(p.predicted.begin) << ','
            << format_timestamp(p.predicted.end - 1) << ',' << train << ',' << csv::format_double(p.report.initial_loss)
            << ',' << csv::format_double(p.report.final_loss) << ',' << p.report.epochs_run << '\n';
    }
}

void cmd_run(const RunArgs& a)
{
    const auto& s = a.train;
    const auto variant = parse_variant_flag(s.variant);
    const auto hidden = parse_hidden(s.hidden);
    std::vector<mlp::MlpConfig> configs;
    for (const auto& h : hidden)
        configs.push_back(s.mlp(h));

    pipeline::DataBundle data{load_wind(a.in), load_plants(a.in), load_observed(a.in)};
    const auto years = s.years.empty() ? covered_years({data.wind.axis(), data.observed.axis}) : parse_years(s.years);
    const auto axis = TimeAxis::for_years(years.first, years.last);
    if (!data.observed.axis.covers(axis))
        throw Error(ErrorCode::AxisMismatch, "observed", "series does not cover " + years_text(years));
    const auto obs = slice(data.observed, axis);

    ensure_dir(a.out);
    const fs::path d(a.out);
    std::ofstream prov(d / "provenance.csv", std::ios::binary);
    prov << "model,fold,predict_start,predict_end,training,initial_loss,final_loss,epochs\n";

    std::vector<std::pair<std::string, CapacityFactorSeries>> series;
    std::vector<pipeline::CandidateMetrics> table;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        pipeline::ExperimentConfig cfg;
        cfg.variant = variant;
        cfg.mlp = configs[i];
        cfg.first_year = years.first;
        cfg.last_year = years.last;
        cfg.block = a.block;
        cfg.k_nearest = s.k;
        cfg.jobs = a.jobs;
        const std::string label = std::string(pipeline::variant_name(variant)) + "-" + hidden_label(hidden[i]);
        std::fprintf(stderr, "training %s over %s (%zu folds)\n", label.c_str(), years_text(years).c_str(),
            pipeline::build_fold_plan(years.first, years.last, a.block).folds.size());
        auto result = pipeline::run_experiment(cfg, data);
        write_provenance(prov, label, result);
        if (configs.size() > 1)
            ingest::write_cf_csv((d / ("prediction_" + label + ".csv")).string(), result.series);
        auto r = quality::full_report(obs, result.series);
        table.push_back({label, r.nmae, r.nrmse, r.correlation});
        series.emplace_back(label, std::move(result.series));
    }
    const auto selected = pipeline::select_model(table);
    auto& chosen = std::find_if(series.begin(), series.end(), [&](const auto& c) { return c.first == selected; })->second;
    ingest::write_cf_csv((d / "prediction.csv").string(), chosen);

    if (!a.in.curve.empty()) {
        if (!data.plants)
            throw UsageError("--curve comparison needs --plants");
        baseline::BaselineConfig bc;
        bc.curve = baseline::parse_curve_csv(a.in.curve);
        bc.bias = baseline::BiasMode::MeanMatch;
        auto sim = baseline::simulate_fleet(data.wind, *data.plants, bc, baseline::Calibration{&obs, axis});
        auto pc = slice(sim.series, axis);
        ingest::write_cf_csv((d / "prediction_powercurve.csv").string(), pc);
        table.push_back({"powercurve", quality::nmae(obs.values, pc.values), quality::nrmse(obs.values, pc.values),
            quality::correlation(obs.values, pc.values)});
    }
    report::write_table2((d / "table2.csv").string(), table);

    const auto r = quality::full_report(obs, chosen);
    report::write_all(a.out, r,
        {{"model", selected}, {"variant", s.variant}, {"hidden", s.hidden}, {"seed", std::to_string(s.seed)},
            {"years", years_text(years)}, {"block", std::to_string(a.block)}});
    std::printf("selected     %s\n", selected.c_str());
    print_metrics(r);
    std::printf("outputs      %s\n", a.out.c_str());
}

} // namespace

int run(int argc, char** argv)
{
    CLI::App app{"Synthetic wind power capacity factors from gridded wind fields"};
    app.name("windsynth");
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    SynthArgs synth;
    auto* c_synth = app.add_subcommand("synth", "Generate a deterministic synthetic scenario");
    c_synth->add_option("--seed", synth.seed, "Scenario seed");
    c_synth->add_option("--first-year", synth.first_year, "First calendar year");
    c_synth->add_option("--years", synth.years, "Number of years")->check(CLI::PositiveNumber);
    c_synth->add_option("--n-plants", synth.n_plants, "Number of plants")->check(CLI::PositiveNumber);
    c_synth->add_option("--noise", synth.noise, "Observation noise standard deviation")->check(CLI::NonNegativeNumber);
    c_synth->add_option("--hub-height", synth.hub_height, "Hub height in metres")->check(CLI::PositiveNumber);
    c_synth->add_option("--curve", synth.curve, "Power curve CSV (speed_ms,power_fraction); empty = built-in");
    c_synth->add_option("--out", synth.out, "Output directory")->required();

    Inputs sub_in;
    std::string sub_variant = "mlm2", sub_out;
    std::size_t sub_k = 4;
    auto* c_subset = app.add_subcommand("subset", "Print or write the grid points a variant selects");
    add_input_options(c_subset, sub_in, false);
    c_subset->add_option("--variant", sub_variant, "mlm1, mlm2 or mlm3");
    c_subset->add_option("--k", sub_k, "Nearest grid points per plant for mlm2");
    c_subset->add_option("--out", sub_out, "CSV of index,lon,lat; empty = print indices");

    Inputs df_in;
    std::string df_variant = "mlm2", df_years, df_out;
    std::size_t df_k = 4;
    auto* c_dump = app.add_subcommand("dump-features", "Write the unscaled feature matrix");
    add_input_options(c_dump, df_in, false);
    c_dump->add_option("--variant", df_variant, "mlm1, mlm2 or mlm3");
    c_dump->add_option("--k", df_k, "Nearest grid points per plant for mlm2");
    c_dump->add_option("--years", df_years, "YYYY or YYYY-YYYY; empty = whole wind axis");
    c_dump->add_option("--out", df_out, "Output CSV")->required();

    Inputs tr_in;
    TrainSettings tr;
    std::string tr_out, tr_config;
    auto* c_train = app.add_subcommand("train", "Train one predictor on a whole period and save it");
    c_train->add_option("--config", tr_config, "key = value file; command-line flags take precedence");
    add_input_options(c_train, tr_in, true);
    add_train_options(c_train, tr, false);
    c_train->add_option("--out", tr_out, "Model file");

    Inputs pr_in;
    std::string pr_model, pr_years, pr_out;
    auto* c_predict = app.add_subcommand("predict", "Apply a saved predictor to a wind field");
    c_predict->add_option("--model", pr_model, "Model file written by train")->required();
    c_predict->add_option("--wind", pr_in.wind, "Wind component CSV on the model's grid")->required();
    c_predict->add_option("--years", pr_years, "YYYY or YYYY-YYYY; empty = whole wind axis");
    c_predict->add_option("--out", pr_out, "Prediction CSV (timestamp,cf)")->required();

    std::string ev_obs, ev_pred, ev_out;
    auto* c_eval = app.add_subcommand("evaluate", "Compare a predicted series with observations");
    c_eval->add_option("--obs", ev_obs, "Observed CSV (timestamp,cf)")->required();
    c_eval->add_option("--pred", ev_pred, "Predicted CSV (timestamp,cf)")->required();
    c_eval->add_option("--out", ev_out, "Report JSON; empty = metrics to standard output only");

    std::string rp_obs, rp_pred, rp_out;
    auto* c_report = app.add_subcommand("report", "Write the report JSON, table CSVs and plot data");
    c_report->add_option("--obs", rp_obs, "Observed CSV (timestamp,cf)")->required();
    c_report->add_option("--pred", rp_pred, "Predicted CSV (timestamp,cf)")->required();
    c_report->add_option("--out", rp_out, "Output directory")->required();

    RunArgs ra;
    std::string ra_config;
    auto* c_run = app.add_subcommand("run", "Rolling train/predict experiment with evaluation and reports");
    c_run->add_option("--config", ra_config, "key = value file; command-line flags take precedence");
    add_input_options(c_run, ra.in, true);
    add_train_options(c_run, ra.train, true);
    c_run->add_option("--block", ra.block, "Years per prediction window");
    c_run->add_option("--jobs", ra.jobs, "Folds trained in parallel (results do not depend on it)");
    c_run->add_option("--curve", ra.in.curve, "Power curve CSV; adds a mean-matched power-curve row to table2");
    c_run->add_option("--out", ra.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (c_synth->parsed()) {
            cmd_synth(synth);
        } else if (c_subset->parsed()) {
            cmd_subset(sub_in, sub_variant, sub_k, sub_out);
        } else if (c_dump->parsed()) {
            cmd_dump_features(df_in, df_variant, df_k, df_years, df_out);
        } else if (c_train->parsed()) {
            apply_config(c_train, tr_config, c_run, {"out"}); // out names a results directory there
            if (tr_out.empty())
                throw UsageError("--out is required");
            cmd_train(tr_in, tr, tr_out);
        } else if (c_predict->parsed()) {
            cmd_predict(pr_model, pr_in, pr_years, pr_out);
        } else if (c_eval->parsed()) {
            auto r = evaluate_files(ev_obs, ev_pred);
            if (!ev_out.empty())
                report::write_json(ev_out, r);
            print_metrics(r);
        } else if (c_report->parsed()) {
            auto r = evaluate_files(rp_obs, rp_pred);
            report::write_all(rp_out, r);
            print_metrics(r);
        } else if (c_run->parsed()) {
            apply_config(c_run, ra_config);
            cmd_run(ra);
        }
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\nRun with --help for usage.\n", e.what());
        return 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}

} // namespace windsynth::cli
