#include "windsynth/mlp.hpp"
#include "windsynth/error.hpp"
#include "detail/binary_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace windsynth::mlp {

namespace {

constexpr std::array<char, 8> kMagic{'W', 'S', 'M', 'L', 'P', '0', '0', '1'};
constexpr std::uint64_t kMaxWidth = 1u << 20;

std::uint64_t get_u64(std::istream& in) { return detail::get_u64(in, "model"); }
double get_f64(std::istream& in) { return detail::get_f64(in, "model"); }
using detail::put_f64;
using detail::put_u64;

} // namespace

void save(const MlpModel& model, std::ostream& out)
{
    const MlpConfig& c = model.config;
    out.write(kMagic.data(), kMagic.size());
    put_u64(out, model.n_inputs());
    for (std::size_t h : c.hidden_sizes) {
        put_u64(out, h);
    }
    put_f64(out, c.learning_rate);
    put_u64(out, c.epochs);
    put_u64(out, c.seed);
    put_u64(out, c.batch_mode == BatchMode::Full ? 0 : 1);
    put_u64(out, c.batch_size);
    put_u64(out, c.shuffle ? 1 : 0);
    for (const Layer& layer : model.layers) {
        put_u64(out, layer.n_in);
        put_u64(out, layer.n_out);
        for (double w : layer.weights) {
            put_f64(out, w);
        }
        for (double b : layer.bias) {
            put_f64(out, b);
        }
    }
    if (!out) {
        throw Error(ErrorCode::Io, "model", "write failed");
    }
}

MlpModel load(std::istream& in)
{
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw Error(ErrorCode::ModelFormat, "model", "bad magic");
    }
    MlpModel m;
    const std::uint64_t n_inputs = get_u64(in);
    for (auto& h : m.config.hidden_sizes) {
        h = get_u64(in);
    }
    m.config.learning_rate = get_f64(in);
    m.config.epochs = get_u64(in);
    m.config.seed = get_u64(in);
    const std::uint64_t mode = get_u64(in);
    if (mode > 1) {
        throw Error(ErrorCode::ModelFormat, "model", "bad batch mode");
    }
    m.config.batch_mode = mode == 0 ? BatchMode::Full : BatchMode::MiniBatch;
    m.config.batch_size = get_u64(in);
    m.config.shuffle = get_u64(in) != 0;

    const std::array<std::uint64_t, kLayerCount + 1> widths{
        n_inputs, m.config.hidden_sizes[0], m.config.hidden_sizes[1], m.config.hidden_sizes[2], 1};
    for (std::size_t l = 0; l < kLayerCount; ++l) {
        Layer& layer = m.layers[l];
        layer.n_in = get_u64(in);
        layer.n_out = get_u64(in);
        if (layer.n_in != widths[l] || layer.n_out != widths[l + 1] || layer.n_in == 0 || layer.n_in > kMaxWidth
            || layer.n_out > kMaxWidth) {
            throw Error(ErrorCode::ModelFormat, "model", "layer " + std::to_string(l) + " shape mismatch");
        }
        layer.weights.resize(layer.n_in * layer.n_out);
        for (auto& w : layer.weights) {
            w = get_f64(in);
        }
        layer.bias.resize(layer.n_out);
        for (auto& b : layer.bias) {
            b = get_f64(in);
        }
    }
    m.config.validate();
    return m;
}

void save_file(const MlpModel& model, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, path, "cannot open for writing");
    }
    save(model, out);
}

MlpModel load_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, path, "cannot open file");
    }
    return load(in);
}

} // namespace windsynth::mlp
