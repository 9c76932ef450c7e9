#include "windsynth/pipeline.hpp"

#include "detail/binary_io.hpp"
#include "windsynth/error.hpp"

#include <array>
#include <fstream>

namespace windsynth::pipeline {

namespace {

constexpr std::array<char, 8> kMagic{'W', 'S', 'P', 'R', 'E', 'D', '0', '1'};
constexpr std::uint64_t kMaxCount = 1u << 24;

void put_params(std::ostream& out, const features::ScalingParams& p)
{
    detail::put_u64(out, p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        detail::put_f64(out, p.mean[i]);
        detail::put_f64(out, p.range[i]);
    }
}

features::ScalingParams get_params(std::istream& in, const std::string& path)
{
    const auto n = detail::get_u64(in, path);
    if (n > kMaxCount)
        throw Error(ErrorCode::ModelFormat, path, "implausible scaling width");
    features::ScalingParams p;
    p.mean.resize(n);
    p.range.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.mean[i] = detail::get_f64(in, path);
        p.range[i] = detail::get_f64(in, path);
    }
    return p;
}

} // namespace

void save_predictor(const TrainedPredictor& predictor, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::Io, path, "cannot open for writing");
    out.write(kMagic.data(), kMagic.size());
    const auto& g = predictor.grid;
    for (double v : {g.lon0, g.lat0, g.dlon, g.dlat})
        detail::put_f64(out, v);
    detail::put_u64(out, g.nlon);
    detail::put_u64(out, g.nlat);
    detail::put_u64(out, static_cast<std::uint64_t>(predictor.selection.strategy));
    detail::put_u64(out, predictor.selection.indices.size());
    for (auto i : predictor.selection.indices)
        detail::put_u64(out, i);
    put_params(out, predictor.feature_scaling);
    put_params(out, predictor.target_scaling);
    mlp::save(predictor.model, out);
    if (!out)
        throw Error(ErrorCode::Io, path, "write failed");
}

TrainedPredictor load_predictor(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::Io, path, "cannot open");
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic)
        throw Error(ErrorCode::ModelFormat, path, "not a predictor file");

    TrainedPredictor p{};
    auto& g = p.grid;
    g.lon0 = detail::get_f64(in, path);
    g.lat0 = detail::get_f64(in, path);
    g.dlon = detail::get_f64(in, path);
    g.dlat = detail::get_f64(in, path);
    g.nlon = detail::get_u64(in, path);
    g.nlat = detail::get_u64(in, path);
    if (g.nlon == 0 || g.nlat == 0 || g.nlon > kMaxCount || g.nlat > kMaxCount)
        throw Error(ErrorCode::ModelFormat, path, "bad grid shape");

    const auto strategy = detail::get_u64(in, path);
    if (strategy > static_cast<std::uint64_t>(grid::Strategy::CapacityQuartile))
        throw Error(ErrorCode::ModelFormat, path, "unknown subset strategy");
    p.selection.strategy = static_cast<grid::Strategy>(strategy);
    const auto n = detail::get_u64(in, path);
    if (n > g.size())
        throw Error(ErrorCode::ModelFormat, path, "selection larger than grid");
    p.selection.indices.resize(n);
    for (auto& i : p.selection.indices)
        i = detail::get_u64(in, path);
    try {
        p.selection.validate(g);
    } catch (const Error& e) {
        throw Error(ErrorCode::ModelFormat, path, e.what());
    }

    p.feature_scaling = get_params(in, path);
    p.target_scaling = get_params(in, path);
    p.model = mlp::load(in);
    const std::size_t expected = n * grid::kWindVariableCount + features::kDummyCount;
    if (p.feature_scaling.size() != expected || p.model.n_inputs() != expected || p.target_scaling.size() != 1)
        throw Error(ErrorCode::ModelFormat, path, "inconsistent input width");
    return p;
}

} // namespace windsynth::pipeline
