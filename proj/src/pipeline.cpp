#include "windsynth/pipeline.hpp"

#include "windsynth/error.hpp"
#include "windsynth/quality.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace windsynth::pipeline {

FoldPlan build_fold_plan(int first_year, int last_year, int block)
{
    if (block < 1)
        throw Error(ErrorCode::InvalidArgument, "build_fold_plan", "block must be >= 1");
    const long span = static_cast<long>(last_year) - first_year + 1;
    if (span < block + 1)
        throw Error(ErrorCode::PeriodTooShort, "build_fold_plan",
            std::to_string(first_year) + "-" + std::to_string(last_year) + " with block " + std::to_string(block));

    FoldPlan plan{first_year, last_year, {}};
    for (int start = first_year; start <= last_year; start += block) {
        Fold f{start, std::min(last_year, start + block - 1), {}};
        for (int y = first_year; y <= last_year; ++y)
            if (y < f.predict_first || y > f.predict_last)
                f.train_years.push_back(y);
        plan.folds.push_back(std::move(f));
    }
    return plan;
}

HourRange year_hours(int year) noexcept { return year_hours(year, year); }

HourRange year_hours(int first_year, int last_year) noexcept
{
    return {to_epoch_hour(first_year, 1, 1, 0), to_epoch_hour(last_year + 1, 1, 1, 0)};
}

std::string_view variant_name(Variant v) noexcept
{
    switch (v) {
    case Variant::Mlm1: return "mlm1";
    case Variant::Mlm2: return "mlm2";
    case Variant::Mlm3: return "mlm3";
    }
    return "?";
}

std::optional<Variant> parse_variant(std::string_view text) noexcept
{
    std::string lower(text);
    for (auto& c : lower)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (Variant v : {Variant::Mlm1, Variant::Mlm2, Variant::Mlm3})
        if (lower == variant_name(v))
            return v;
    return std::nullopt;
}

grid::SubsetSelection select_subset(Variant variant, const grid::GridSpec& grid,
    const std::optional<ingest::PlantRegistry>& plants, std::size_t k_nearest)
{
    if (variant == Variant::Mlm1)
        return grid::select_all(grid);
    if (!plants)
        throw Error(ErrorCode::InvalidArgument, std::string(variant_name(variant)), "plant registry required");
    if (variant == Variant::Mlm2)
        return grid::select_k_nearest(grid, *plants, k_nearest);
    return grid::select_capacity_quartile(grid, *plants);
}

namespace {

std::vector<double> gather_rows(const features::FeatureMatrix& m, std::span<const std::size_t> rows)
{
    const std::size_t c = m.cols();
    std::vector<double> out(rows.size() * c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto src = m.row(rows[i]);
        std::copy(src.begin(), src.end(), out.begin() + static_cast<std::ptrdiff_t>(i * c));
    }
    return out;
}

std::vector<std::size_t> rows_in(const TimeAxis& axis, HourRange r)
{
    std::vector<std::size_t> rows;
    const EpochHour lo = std::max(r.begin, axis.start());
    const EpochHour hi = std::min(r.end, axis.end());
    for (EpochHour h = lo; h < hi; ++h)
        rows.push_back(axis.index_of(h));
    return rows;
}

} // namespace

TrainedPredictor fit_predictor(const grid::GridSpec& grid, const grid::SubsetSelection& selection,
    const features::FeatureMatrix& features, std::span<const double> target_cf,
    std::span<const std::size_t> train_rows, const mlp::MlpConfig& config, std::uint64_t stream)
{
    if (target_cf.size() != features.rows())
        throw Error(ErrorCode::ShapeMismatch, "fit_predictor", "target length differs from feature rows");
    if (train_rows.empty())
        throw Error(ErrorCode::PeriodTooShort, "fit_predictor", "no training rows");

    auto fscale = features::fit_scaling(features, train_rows);
    auto target = features::scale_target(target_cf, train_rows);

    auto x = gather_rows(features, train_rows);
    features::apply_scaling_inplace(x, features.cols(), fscale);
    std::vector<double> y(train_rows.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i)
        y[i] = target.values[train_rows[i]];

    auto model = mlp::init(config, features.cols(), stream);
    auto result = mlp::train(std::move(model), MatrixView{x, train_rows.size(), features.cols()}, y, config, stream);
    return {grid, selection, std::move(fscale), std::move(target.params), std::move(result.model),
        std::move(result.report)};
}

std::vector<double> apply_predictor(const TrainedPredictor& predictor, const features::FeatureMatrix& features,
    std::span<const std::size_t> rows)
{
    if (features.cols() != predictor.model.n_inputs())
        throw Error(ErrorCode::ShapeMismatch, "apply_predictor",
            "model expects " + std::to_string(predictor.model.n_inputs()) + " inputs, got " +
                std::to_string(features.cols()));
    auto x = gather_rows(features, rows);
    features::apply_scaling_inplace(x, features.cols(), predictor.feature_scaling);
    auto scaled = mlp::predict(predictor.model, MatrixView{x, rows.size(), features.cols()});
    return features::invert_scaling(scaled, predictor.target_scaling);
}

CapacityFactorSeries predict_series(const TrainedPredictor& predictor, const grid::WindField& wind,
    const TimeAxis& axis)
{
    if (!(wind.grid() == predictor.grid))
        throw Error(ErrorCode::ShapeMismatch, "predict_series", "wind grid differs from the trained grid");
    auto m = features::assemble(wind, predictor.selection, axis);
    std::vector<std::size_t> rows(m.rows());
    for (std::size_t i = 0; i < rows.size(); ++i)
        rows[i] = i;
    return {axis, apply_predictor(predictor, m, rows)};
}

FoldOutput run_fold(const Fold& fold, std::size_t fold_index, const features::FeatureMatrix& features,
    const CapacityFactorSeries& target, const mlp::MlpConfig& config)
{
    if (!(target.axis == features.axis))
        throw Error(ErrorCode::AxisMismatch, "run_fold", "target and features must share one axis");

    FoldProvenance prov{fold_index, year_hours(fold.predict_first, fold.predict_last), {}, {}};
    std::vector<std::size_t> train_rows;
    for (int y : fold.train_years) {
        HourRange r = year_hours(y);
        if (!prov.training.empty() && prov.training.back().end == r.begin)
            prov.training.back().end = r.end;
        else
            prov.training.push_back(r);
        auto rows = rows_in(features.axis, r);
        train_rows.insert(train_rows.end(), rows.begin(), rows.end());
    }
    auto predict_rows = rows_in(features.axis, prov.predicted);
    if (predict_rows.size() != prov.predicted.size())
        throw Error(ErrorCode::AxisMismatch, "run_fold", "features do not cover the prediction window");
    if (predict_rows.empty())
        throw Error(ErrorCode::PeriodTooShort, "run_fold", "empty prediction window");

    // Unused: grid and selection are only needed when the predictor outlives the fold.
    auto predictor = fit_predictor({}, {}, features, target.values, train_rows, config, fold_index);
    prov.report = predictor.report;
    return {apply_predictor(predictor, features, predict_rows), std::move(prov)};
}

SyntheticSeries run_experiment(const ExperimentConfig& cfg, const DataBundle& data)
{
    cfg.mlp.validate();
    const auto plan = build_fold_plan(cfg.first_year, cfg.last_year, cfg.block);
    const TimeAxis axis = TimeAxis::for_years(cfg.first_year, cfg.last_year);
    if (!data.observed.axis.covers(axis))
        throw Error(ErrorCode::AxisMismatch, "observed", "series does not cover " + std::to_string(cfg.first_year) +
                                                             "-" + std::to_string(cfg.last_year));

    auto selection = select_subset(cfg.variant, data.wind.grid(), data.plants, cfg.k_nearest);
    const auto feats = features::assemble(data.wind, selection, axis);
    const auto target = slice(data.observed, axis);

    const std::size_t n = plan.folds.size();
    std::vector<std::optional<FoldOutput>> outputs(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                outputs[i] = run_fold(plan.folds[i], i, feats, target, cfg.mlp);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t jobs = std::clamp<std::size_t>(cfg.jobs, 1, n);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    SyntheticSeries out{{axis, std::vector<double>(axis.size())}, {}, std::move(selection)};
    for (auto& o : outputs) {
        auto first = static_cast<std::ptrdiff_t>(axis.index_of(o->provenance.predicted.begin));
        std::copy(o->cf.begin(), o->cf.end(), out.series.values.begin() + first);
        out.provenance.push_back(std::move(o->provenance));
    }
    return out;
}

std::string select_model(std::span<const CandidateMetrics> candidates)
{
    if (candidates.empty())
        throw Error(ErrorCode::InvalidArgument, "select_model", "no candidates");
    auto key = [](const CandidateMetrics& c) {
        // NaN correlation ranks below any finite value
        double corr = std::isnan(c.correlation) ? -std::numeric_limits<double>::infinity() : c.correlation;
        return std::array<double, 3>{c.nmae, c.nrmse, -corr};
    };
    const CandidateMetrics* best = &candidates.front();
    for (const auto& c : candidates.subspan(1))
        if (key(c) < key(*best))
            best = &c;
    return best->label;
}

std::string select_model(const std::vector<std::pair<std::string, CapacityFactorSeries>>& candidates,
    const CapacityFactorSeries& obs)
{
    std::vector<CandidateMetrics> metrics;
    for (const auto& [label, s] : candidates) {
        if (!(s.axis == obs.axis))
            throw Error(ErrorCode::AxisMismatch, label, "candidate axis differs from observations");
        double corr;
        try {
            corr = quality::correlation(obs.values, s.values);
        } catch (const Error&) {
            corr = std::numeric_limits<double>::quiet_NaN();
        }
        metrics.push_back({label, quality::nmae(obs.values, s.values), quality::nrmse(obs.values, s.values), corr});
    }
    return select_model(metrics);
}

CapacityFactorSeries hourly_climatology(const CapacityFactorSeries& observed, const FoldPlan& plan)
{
    const TimeAxis axis = TimeAxis::for_years(plan.first_year, plan.last_year);
    const auto obs = slice(observed, axis);
    CapacityFactorSeries out{axis, std::vector<double>(axis.size())};

    constexpr std::size_t kSlots = 12 * 31 * 24;
    auto slot = [](const CivilHour& c) { return ((c.month - 1) * 31 + (c.day - 1)) * 24 + c.hour; };

    for (const auto& fold : plan.folds) {
        std::vector<double> sum(kSlots, 0.0), hour_sum(24, 0.0);
        std::vector<std::size_t> count(kSlots, 0), hour_count(24, 0);
        for (int y : fold.train_years)
            for (auto i : rows_in(axis, year_hours(y))) {
                auto c = axis.civil(i);
                sum[slot(c)] += obs.values[i];
                ++count[slot(c)];
                hour_sum[c.hour] += obs.values[i];
                ++hour_count[c.hour];
            }
        for (auto i : rows_in(axis, year_hours(fold.predict_first, fold.predict_last))) {
            auto c = axis.civil(i);
            auto s = slot(c);
            out.values[i] = count[s] ? sum[s] / static_cast<double>(count[s])
                                     : hour_sum[c.hour] / static_cast<double>(hour_count[c.hour]);
        }
    }
    return out;
}

} // namespace windsynth::pipeline
