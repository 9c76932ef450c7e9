#include "windsynth/report.hpp"

#include "windsynth/csv.hpp"
#include "windsynth/error.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

namespace windsynth::report {

namespace {

using Json = nlohmann::ordered_json;

// NaN and infinities have no JSON form and become null.
Json num(double v)
{
    if (!std::isfinite(v))
        return nullptr;
    return v;
}

std::string cell(double v)
{
    if (std::isnan(v))
        return "";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return csv::format_double(v);
}

std::string quoted(const std::string& s)
{
    if (s.find_first_of(",\"") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

std::ofstream open(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::Io, path, "cannot open for writing");
    return out;
}

Json summary_json(const quality::DeviationSummary& s)
{
    return Json{{"n", s.n}, {"median", num(s.median)}, {"mean", num(s.mean)}, {"min", num(s.min)},
        {"max", num(s.max)}};
}

std::string summary_cells(const quality::DeviationSummary& s)
{
    return std::to_string(s.n) + "," + cell(s.median) + "," + cell(s.mean) + "," + cell(s.min) + "," + cell(s.max);
}

Json series_json(const quality::SeriesSummary& s)
{
    Json j;
    j["variance"] = num(s.variance);
    Json q = Json::object();
    for (std::size_t i = 0; i < quality::kReportQuantiles.size(); ++i)
        q[csv::format_double(quality::kReportQuantiles[i])] = num(s.quantiles[i]);
    j["quantiles"] = q;
    j["negative_hours"] = s.n_negative;

    Json dist = Json::object();
    const auto dp = quality::default_distribution_predicates();
    for (std::size_t i = 0; i < dp.size(); ++i)
        dist[dp[i].label()] = s.distribution[i];
    j["distribution"] = dist;

    Json ext = Json::array();
    const auto ep = quality::default_extreme_predicates();
    for (std::size_t i = 0; i < ep.size(); ++i) {
        const auto& e = s.extremes[i];
        ext.push_back(Json{{"predicate", ep[i].label()}, {"frequency", e.frequency},
            {"mean_duration", e.mean_duration ? num(*e.mean_duration) : Json(nullptr)},
            {"max_duration", e.max_duration ? Json(*e.max_duration) : Json(nullptr)},
            {"total_hours", e.total_hours}});
    }
    j["extremes"] = ext;

    Json ramps = Json::array();
    for (const auto& r : s.ramps)
        ramps.push_back(Json{{"timeframe", r.timeframe}, {"min", num(r.min)}, {"max", num(r.max)},
            {"neg_mean", num(r.neg_mean)}, {"neg_freq", r.neg_freq}, {"pos_mean", num(r.pos_mean)},
            {"pos_freq", r.pos_freq}, {"zero_freq", r.zero_freq}, {"freq_below", r.freq_below},
            {"freq_above", r.freq_above}});
    j["ramps"] = ramps;
    return j;
}

} // namespace

std::string to_json(const quality::QualityReport& r, const Metadata& metadata)
{
    Json j;
    if (!metadata.empty()) {
        Json m = Json::object();
        for (const auto& [k, v] : metadata)
            m[k] = v;
        j["run"] = m;
    }
    j["period"] = Json{{"start", format_timestamp(r.axis.start())},
        {"end", format_timestamp(r.axis.end() - 1)}, {"hours", r.axis.size()}};
    j["metrics"] = Json{{"correlation", num(r.correlation)}, {"nmae", num(r.nmae)}, {"nrmse", num(r.nrmse)}};
    j["observed"] = series_json(r.observed);
    j["predicted"] = series_json(r.predicted);

    Json bins = Json::array();
    for (const auto& b : r.bins)
        bins.push_back(Json{{"lower", num(b.lower)}, {"upper", num(b.upper)}, {"deviation", summary_json(b.deviation)}});
    j["bin_deviations"] = bins;

    Json diurnal = Json::array();
    for (std::size_t h = 0; h < r.diurnal.size(); ++h)
        diurnal.push_back(Json{{"hour", h + 1}, {"deviation", summary_json(r.diurnal[h])}});
    j["diurnal"] = diurnal;

    Json seasonal = Json::array();
    for (const auto& c : r.seasonal)
        seasonal.push_back(Json{{"season", quality::season_name(c.season)}, {"lower", num(c.lower)},
            {"upper", num(c.upper)}, {"deviation", summary_json(c.deviation)}});
    j["seasonal"] = seasonal;
    return j.dump(2) + "\n";
}

void write_json(const std::string& path, const quality::QualityReport& report, const Metadata& metadata)
{
    auto out = open(path);
    out << to_json(report, metadata);
}

void write_table2(const std::string& path, std::span<const pipeline::CandidateMetrics> rows)
{
    auto out = open(path);
    out << "model,correlation,nmae,nrmse\n";
    for (const auto& r : rows)
        out << quoted(r.label) << ',' << cell(r.correlation) << ',' << cell(r.nmae) << ',' << cell(r.nrmse) << '\n';
}

void write_table3(const std::string& path, const quality::QualityReport& r)
{
    auto out = open(path);
    out << "statistic,observed,predicted\n";
    out << "correlation,," << cell(r.correlation) << '\n';
    out << "nmae,," << cell(r.nmae) << '\n';
    out << "nrmse,," << cell(r.nrmse) << '\n';
    out << "variance," << cell(r.observed.variance) << ',' << cell(r.predicted.variance) << '\n';
    for (std::size_t i = 0; i < quality::kReportQuantiles.size(); ++i)
        out << "q" << csv::format_double(quality::kReportQuantiles[i] * 100) << ',' << cell(r.observed.quantiles[i])
            << ',' << cell(r.predicted.quantiles[i]) << '\n';
    out << "negative_hours," << r.observed.n_negative << ',' << r.predicted.n_negative << '\n';
    const auto dp = quality::default_distribution_predicates();
    for (std::size_t i = 0; i < dp.size(); ++i)
        out << quoted("hours " + dp[i].label()) << ',' << r.observed.distribution[i] << ','
            << r.predicted.distribution[i] << '\n';
}

void write_table3_extremes(const std::string& path, const quality::QualityReport& r)
{
    auto out = open(path);
    out << "predicate,series,frequency,mean_duration,max_duration,total_hours\n";
    const auto ep = quality::default_extreme_predicates();
    for (std::size_t i = 0; i < ep.size(); ++i)
        for (auto [name, s] : {std::pair{"observed", &r.observed}, std::pair{"predicted", &r.predicted}}) {
            const auto& e = s->extremes[i];
            out << quoted(ep[i].label()) << ',' << name << ',' << e.frequency << ','
                << (e.mean_duration ? cell(*e.mean_duration) : "") << ','
                << (e.max_duration ? std::to_string(*e.max_duration) : "") << ',' << e.total_hours << '\n';
        }
}

void write_table4(const std::string& path, const quality::QualityReport& r)
{
    auto out = open(path);
    out << "timeframe,series,min,max,neg_mean,neg_freq,pos_mean,pos_freq,zero_freq,freq_below,freq_above\n";
    for (std::size_t i = 0; i < quality::kRampTimeframes.size(); ++i)
        for (auto [name, s] : {std::pair{"observed", &r.observed}, std::pair{"predicted", &r.predicted}}) {
            const auto& x = s->ramps[i];
            out << x.timeframe << ',' << name << ',' << cell(x.min) << ',' << cell(x.max) << ',' << cell(x.neg_mean)
                << ',' << x.neg_freq << ',' << cell(x.pos_mean) << ',' << x.pos_freq << ',' << x.zero_freq << ','
                << x.freq_below << ',' << x.freq_above << '\n';
        }
}

void write_plot_data(const std::string& dir, const quality::QualityReport& r)
{
    namespace fs = std::filesystem;
    const fs::path d(dir);
    const std::pair<const char*, const quality::SeriesSummary*> both[] = {
        {"observed", &r.observed}, {"predicted", &r.predicted}};
    {
        auto out = open((d / "ramp_cdf.csv").string());
        out << "series,ramp,cumulative\n";
        for (auto [name, s] : both)
            for (const auto& p : s->ramp_cdf)
                out << name << ',' << cell(p.value) << ',' << cell(p.cumulative) << '\n';
    }
    {
        auto out = open((d / "histogram.csv").string());
        out << "series,lower,upper,density\n";
        for (auto [name, s] : both) {
            const auto& h = s->histogram;
            for (std::size_t i = 0; i < h.density.size(); ++i)
                out << name << ',' << cell(h.origin + static_cast<double>(i) * h.width) << ','
                    << cell(h.origin + static_cast<double>(i + 1) * h.width) << ',' << cell(h.density[i]) << '\n';
        }
    }
    {
        auto out = open((d / "bin_deviations.csv").string());
        out << "lower,upper,n,median,mean,min,max\n";
        for (const auto& b : r.bins)
            out << cell(b.lower) << ',' << cell(b.upper) << ',' << summary_cells(b.deviation) << '\n';
    }
    {
        auto out = open((d / "diurnal.csv").string());
        out << "hour,n,median,mean,min,max\n";
        for (std::size_t h = 0; h < r.diurnal.size(); ++h)
            out << h + 1 << ',' << summary_cells(r.diurnal[h]) << '\n';
    }
    {
        auto out = open((d / "seasonal.csv").string());
        out << "season,lower,upper,n,median,mean,min,max\n";
        for (const auto& c : r.seasonal)
            out << quality::season_name(c.season) << ',' << cell(c.lower) << ',' << cell(c.upper) << ','
                << summary_cells(c.deviation) << '\n';
    }
}

void write_all(const std::string& dir, const quality::QualityReport& report, const Metadata& metadata)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorCode::Io, dir, ec.message());
    const fs::path d(dir);
    write_json((d / "report.json").string(), report, metadata);
    write_table3((d / "table3.csv").string(), report);
    write_table3_extremes((d / "table3_extremes.csv").string(), report);
    write_table4((d / "table4.csv").string(), report);
    write_plot_data(dir, report);
}

} // namespace windsynth::report
