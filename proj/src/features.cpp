#include "windsynth/features.hpp"
#include "windsynth/csv.hpp"
#include "windsynth/error.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace windsynth::features {

namespace {

constexpr const char* kWeekdays[7] = {"mon", "tue", "wed", "thu", "fri", "sat", "sun"};

void fill_dummies(const CivilHour& c, double* out)
{
    std::fill(out, out + kDummyCount, 0.0);
    out[c.hour] = 1.0;
    out[24 + c.weekday] = 1.0;
    out[31 + (c.month - 1)] = 1.0;
}

void require_single_column(const ScalingParams& params)
{
    if (params.size() != 1 || params.range.size() != 1) {
        throw Error(ErrorCode::ShapeMismatch, "ScalingParams", "expected exactly one column");
    }
}

} // namespace

std::vector<std::string> dummy_column_names()
{
    std::vector<std::string> names;
    char buf[16];
    for (int h = 0; h < 24; ++h) {
        std::snprintf(buf, sizeof buf, "hour_%02d", h);
        names.emplace_back(buf);
    }
    for (const char* d : kWeekdays) {
        names.emplace_back(std::string("dow_") + d);
    }
    for (int m = 1; m <= 12; ++m) {
        std::snprintf(buf, sizeof buf, "month_%02d", m);
        names.emplace_back(buf);
    }
    return names;
}

FeatureMatrix date_dummies(const TimeAxis& axis)
{
    FeatureMatrix m{axis, dummy_column_names(), std::vector<double>(axis.size() * kDummyCount)};
    for (std::size_t t = 0; t < axis.size(); ++t) {
        fill_dummies(axis.civil(t), m.data.data() + t * kDummyCount);
    }
    return m;
}

FeatureMatrix assemble(const grid::WindField& field, const grid::SubsetSelection& sel, const TimeAxis& axis)
{
    sel.validate(field.grid());
    if (!field.axis().covers(axis)) {
        throw Error(ErrorCode::AxisMismatch, format_timestamp(axis.start()),
            "wind field does not cover the requested axis");
    }
    FeatureMatrix m;
    m.axis = axis;
    for (auto v : grid::kWindVariables) {
        for (std::size_t p : sel.indices) {
            m.columns.push_back(grid::wind_column_name(v, field.grid().point(p)));
        }
    }
    for (auto& name : dummy_column_names()) {
        m.columns.push_back(std::move(name));
    }
    const std::size_t cols = m.columns.size();
    m.data.resize(axis.size() * cols);
    for (std::size_t t = 0; t < axis.size(); ++t) {
        const std::size_t src_hour = field.axis().index_of(axis.at(t));
        double* out = m.data.data() + t * cols;
        for (auto v : grid::kWindVariables) {
            const double* slab = field.slab(v, src_hour);
            for (std::size_t p : sel.indices) {
                *out++ = slab[p];
            }
        }
        fill_dummies(axis.civil(t), out);
    }
    return m;
}

ScalingParams fit_scaling(const FeatureMatrix& m, std::span<const std::size_t> rows)
{
    return fit_scaling(m.view(), rows);
}

ScalingParams fit_scaling(MatrixView m, std::span<const std::size_t> rows)
{
    if (rows.empty()) {
        throw Error(ErrorCode::InvalidArgument, "fit_scaling", "no rows to fit on");
    }
    ScalingParams params{std::vector<double>(m.cols, 0.0), std::vector<double>(m.cols, 0.0)};
    std::vector<double> lo(m.cols), hi(m.cols);
    const auto first = m.row(rows.front());
    std::copy(first.begin(), first.end(), lo.begin());
    std::copy(first.begin(), first.end(), hi.begin());
    for (std::size_t r : rows) {
        if (r >= m.rows) {
            throw Error(ErrorCode::InvalidArgument, "fit_scaling", "row index out of range");
        }
        const auto row = m.row(r);
        for (std::size_t c = 0; c < m.cols; ++c) {
            params.mean[c] += row[c];
            lo[c] = std::min(lo[c], row[c]);
            hi[c] = std::max(hi[c], row[c]);
        }
    }
    const double n = static_cast<double>(rows.size());
    for (std::size_t c = 0; c < m.cols; ++c) {
        params.mean[c] /= n;
        params.range[c] = hi[c] - lo[c];
    }
    return params;
}

void apply_scaling_inplace(std::span<double> data, std::size_t cols, const ScalingParams& params)
{
    if (params.size() != cols || params.range.size() != cols) {
        throw Error(ErrorCode::ShapeMismatch, "apply_scaling", "parameters do not cover every column");
    }
    for (std::size_t i = 0; i < data.size(); i += cols) {
        for (std::size_t c = 0; c < cols; ++c) {
            double& x = data[i + c];
            x = params.range[c] > 0.0 ? (x - params.mean[c]) / params.range[c] : 0.0;
        }
    }
}

FeatureMatrix apply_scaling(const FeatureMatrix& m, const ScalingParams& params)
{
    FeatureMatrix out = m;
    apply_scaling_inplace(out.data, out.cols(), params);
    return out;
}

std::vector<double> scale_values(std::span<const double> values, const ScalingParams& params)
{
    require_single_column(params);
    std::vector<double> out(values.begin(), values.end());
    apply_scaling_inplace(out, 1, params);
    return out;
}

std::vector<double> invert_scaling(std::span<const double> values, const ScalingParams& params)
{
    require_single_column(params);
    std::vector<double> out(values.size());
    const double mean = params.mean[0];
    const double range = params.range[0];
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = range > 0.0 ? values[i] * range + mean : mean;
    }
    return out;
}

ScaledTarget scale_target(std::span<const double> values, std::span<const std::size_t> rows)
{
    ScaledTarget target;
    target.params = fit_scaling(MatrixView{values, values.size(), 1}, rows);
    target.values = scale_values(values, target.params);
    return target;
}

void write_features_csv(const std::string& path, const FeatureMatrix& m)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, path, "cannot open for writing");
    }
    out << "timestamp";
    for (const auto& c : m.columns) {
        out << ',' << c;
    }
    out << '\n';
    std::string line;
    for (std::size_t t = 0; t < m.rows(); ++t) {
        line = format_timestamp(m.axis.at(t));
        for (double v : m.row(t)) {
            line += ',';
            line += csv::format_double(v);
        }
        line += '\n';
        out << line;
    }
}

} // namespace windsynth::features
