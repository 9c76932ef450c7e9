#include "windsynth/mlp.hpp"
#include "windsynth/error.hpp"
#include "windsynth/simd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace windsynth::mlp {

void MlpConfig::validate() const
{
    for (std::size_t h : hidden_sizes) {
        if (h < 1) {
            throw Error(ErrorCode::InvalidConfig, "hidden_sizes", "every hidden layer needs >= 1 unit");
        }
    }
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw Error(ErrorCode::InvalidConfig, "learning_rate", "must be positive");
    }
    if (epochs < 1) {
        throw Error(ErrorCode::InvalidConfig, "epochs", "must be >= 1");
    }
    if (batch_mode == BatchMode::MiniBatch && batch_size < 1) {
        throw Error(ErrorCode::InvalidConfig, "batch_size", "must be >= 1");
    }
}

std::size_t MlpModel::parameter_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& l : layers) {
        n += l.weights.size() + l.bias.size();
    }
    return n;
}

namespace {

inline double logistic(double z) noexcept
{
    return 1.0 / (1.0 + std::exp(-z));
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t purpose)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
        static_cast<std::uint32_t>(purpose)};
    return std::mt19937_64(seq);
}

constexpr std::uint64_t kInitPurpose = 1;
constexpr std::uint64_t kShufflePurpose = 2;

// Scratch buffers for one forward/backward pass.
struct Workspace {
    std::array<std::vector<double>, 3> hidden;
    std::array<std::vector<double>, kLayerCount> delta; // error signal at each layer's output

    explicit Workspace(const MlpModel& m)
    {
        for (std::size_t l = 0; l < 3; ++l) {
            hidden[l].resize(m.layers[l].n_out);
        }
        for (std::size_t l = 0; l < kLayerCount; ++l) {
            delta[l].resize(m.layers[l].n_out);
        }
    }
};

double forward_pass(const MlpModel& m, std::span<const double> x, Workspace& ws) noexcept
{
    std::span<const double> input = x;
    for (std::size_t l = 0; l < 3; ++l) {
        const Layer& layer = m.layers[l];
        auto& out = ws.hidden[l];
        for (std::size_t i = 0; i < layer.n_out; ++i) {
            out[i] = logistic(layer.bias[i] + simd::dot(layer.row(i), input));
        }
        input = out;
    }
    const Layer& head = m.layers[3];
    return head.bias[0] + simd::dot(head.row(0), input);
}

// Adds d(loss)/d(params) for one sample to `grad`, given d(loss)/d(output).
void backward_pass(const MlpModel& m, std::span<const double> x, double d_output, Workspace& ws, Gradient& grad) noexcept
{
    ws.delta[3][0] = d_output;
    for (std::size_t l = kLayerCount; l-- > 0;) {
        const Layer& layer = m.layers[l];
        const std::span<const double> input = l == 0 ? x : std::span<const double>(ws.hidden[l - 1]);
        const auto& delta = ws.delta[l];
        std::span<double> gw(grad.weights[l]);
        for (std::size_t i = 0; i < layer.n_out; ++i) {
            simd::axpy(delta[i], input, gw.subspan(i * layer.n_in, layer.n_in));
            grad.bias[l][i] += delta[i];
        }
        if (l == 0) {
            break;
        }
        auto& below = ws.delta[l - 1];
        std::fill(below.begin(), below.end(), 0.0);
        for (std::size_t i = 0; i < layer.n_out; ++i) {
            simd::axpy(delta[i], layer.row(i), below);
        }
        const auto& a = ws.hidden[l - 1];
        for (std::size_t j = 0; j < below.size(); ++j) {
            below[j] *= a[j] * (1.0 - a[j]);
        }
    }
}

Gradient zero_gradient(const MlpModel& m)
{
    Gradient g;
    for (std::size_t l = 0; l < kLayerCount; ++l) {
        g.weights[l].assign(m.layers[l].weights.size(), 0.0);
        g.bias[l].assign(m.layers[l].bias.size(), 0.0);
    }
    return g;
}

void clear(Gradient& g)
{
    for (std::size_t l = 0; l < kLayerCount; ++l) {
        std::fill(g.weights[l].begin(), g.weights[l].end(), 0.0);
        std::fill(g.bias[l].begin(), g.bias[l].end(), 0.0);
    }
}

void require_shape(const MlpModel& m, MatrixView x)
{
    if (x.cols != m.n_inputs()) {
        throw Error(ErrorCode::ShapeMismatch, "features",
            "model expects " + std::to_string(m.n_inputs()) + " inputs, got " + std::to_string(x.cols));
    }
}

void require_target(MatrixView x, std::span<const double> y)
{
    if (x.rows != y.size()) {
        throw Error(ErrorCode::ShapeMismatch, "target",
            std::to_string(x.rows) + " rows vs " + std::to_string(y.size()) + " targets");
    }
}

} // namespace

MlpModel init(const MlpConfig& config, std::size_t n_inputs, std::uint64_t stream)
{
    config.validate();
    if (n_inputs < 1) {
        throw Error(ErrorCode::InvalidArgument, "n_inputs", "must be >= 1");
    }
    MlpModel m;
    m.config = config;
    const std::array<std::size_t, kLayerCount + 1> widths{
        n_inputs, config.hidden_sizes[0], config.hidden_sizes[1], config.hidden_sizes[2], 1};
    auto engine = make_engine(config.seed, stream, kInitPurpose);
    std::uniform_real_distribution<double> uniform(-0.5, 0.5);
    for (std::size_t l = 0; l < kLayerCount; ++l) {
        Layer& layer = m.layers[l];
        layer.n_in = widths[l];
        layer.n_out = widths[l + 1];
        layer.weights.resize(layer.n_in * layer.n_out);
        for (auto& w : layer.weights) {
            w = uniform(engine);
        }
        layer.bias.assign(layer.n_out, 0.0);
    }
    return m;
}

double forward(const MlpModel& model, std::span<const double> row)
{
    if (row.size() != model.n_inputs()) {
        throw Error(ErrorCode::ShapeMismatch, "row",
            "model expects " + std::to_string(model.n_inputs()) + " inputs, got " + std::to_string(row.size()));
    }
    Workspace ws(model);
    return forward_pass(model, row, ws);
}

std::vector<double> predict(const MlpModel& model, MatrixView x)
{
    if (x.rows == 0) {
        return {};
    }
    require_shape(model, x);
    Workspace ws(model);
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        out[r] = forward_pass(model, x.row(r), ws);
    }
    return out;
}

double mse(const MlpModel& model, MatrixView x, std::span<const double> y)
{
    require_target(x, y);
    if (x.rows == 0) {
        return 0.0;
    }
    require_shape(model, x);
    Workspace ws(model);
    double acc = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
        const double e = forward_pass(model, x.row(r), ws) - y[r];
        acc += e * e;
    }
    return acc / static_cast<double>(x.rows);
}

Gradient loss_gradient(const MlpModel& model, MatrixView x, std::span<const double> y)
{
    require_shape(model, x);
    require_target(x, y);
    Workspace ws(model);
    Gradient grad = zero_gradient(model);
    const double scale = 2.0 / static_cast<double>(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const double out = forward_pass(model, x.row(r), ws);
        backward_pass(model, x.row(r), scale * (out - y[r]), ws, grad);
    }
    return grad;
}

TrainResult train(MlpModel model, MatrixView x, std::span<const double> y, const MlpConfig& config,
    std::uint64_t stream)
{
    config.validate();
    require_shape(model, x);
    require_target(x, y);
    if (x.rows == 0) {
        throw Error(ErrorCode::InvalidArgument, "train", "no training rows");
    }
    TrainReport report;
    report.initial_loss = mse(model, x, y);
    if (!std::isfinite(report.initial_loss)) {
        throw Error(ErrorCode::DivergenceDetected, "epoch 0");
    }

    const std::size_t n = x.rows;
    const std::size_t batch = config.batch_mode == BatchMode::Full ? n : std::min(config.batch_size, n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto engine = make_engine(config.seed, stream, kShufflePurpose);

    Workspace ws(model);
    Gradient grad = zero_gradient(model);
    report.epoch_loss.reserve(config.epochs);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.batch_mode == BatchMode::MiniBatch && config.shuffle) {
            std::shuffle(order.begin(), order.end(), engine);
        }
        double loss_sum = 0.0;
        for (std::size_t begin = 0; begin < n; begin += batch) {
            const std::size_t end = std::min(begin + batch, n);
            const double scale = 2.0 / static_cast<double>(end - begin);
            clear(grad);
            for (std::size_t k = begin; k < end; ++k) {
                const auto row = x.row(order[k]);
                const double err = forward_pass(model, row, ws) - y[order[k]];
                loss_sum += err * err;
                backward_pass(model, row, scale * err, ws, grad);
            }
            for (std::size_t l = 0; l < kLayerCount; ++l) {
                simd::axpy(-config.learning_rate, grad.weights[l], model.layers[l].weights);
                simd::axpy(-config.learning_rate, grad.bias[l], model.layers[l].bias);
            }
        }
        const double epoch_loss = loss_sum / static_cast<double>(n);
        report.epoch_loss.push_back(epoch_loss);
        report.epochs_run = epoch + 1;
        if (!std::isfinite(epoch_loss)) {
            throw Error(ErrorCode::DivergenceDetected, "epoch " + std::to_string(epoch + 1));
        }
    }
    report.final_loss = mse(model, x, y);
    if (!std::isfinite(report.final_loss)) {
        throw Error(ErrorCode::DivergenceDetected, "final weights");
    }
    model.config = config;
    return {std::move(model), std::move(report)};
}

GradientCheck gradient_check(const MlpModel& model, MatrixView x, std::span<const double> y, double epsilon,
    const GradientFn& gradient)
{
    if (!(epsilon > 0.0 && epsilon <= 1e-3)) {
        throw Error(ErrorCode::InvalidArgument, "epsilon", "must lie in (0, 1e-3]");
    }
    const Gradient analytic = gradient(model, x, y);
    MlpModel probe = model;
    GradientCheck result;
    auto compare = [&](std::size_t l, double a, double& param) {
        const double saved = param;
        param = saved + epsilon;
        const double up = mse(probe, x, y);
        param = saved - epsilon;
        const double down = mse(probe, x, y);
        param = saved;
        const double numeric = (up - down) / (2.0 * epsilon);
        const double diff = std::abs(a - numeric);
        result.max_abs_error[l] = std::max(result.max_abs_error[l], diff);
        result.max_relative_error = std::max(result.max_relative_error,
            diff / std::max(std::abs(a) + std::abs(numeric), 1e-8));
    };
    for (std::size_t l = 0; l < kLayerCount; ++l) {
        for (std::size_t i = 0; i < probe.layers[l].weights.size(); ++i) {
            compare(l, analytic.weights[l][i], probe.layers[l].weights[i]);
        }
        for (std::size_t i = 0; i < probe.layers[l].bias.size(); ++i) {
            compare(l, analytic.bias[l][i], probe.layers[l].bias[i]);
        }
    }
    return result;
}

} // namespace windsynth::mlp
