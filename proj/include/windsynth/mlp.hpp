#pragma once

#include "windsynth/matrix.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

// Three-hidden-layer perceptron with logistic hidden units and a single
// linear output unit, trained by plain gradient descent on mean squared error.
namespace windsynth::mlp {

enum class BatchMode { Full, MiniBatch };

struct MlpConfig {
    std::array<std::size_t, 3> hidden_sizes{60, 60, 60};
    double learning_rate = 0.1;
    std::size_t epochs = 500;
    std::uint64_t seed = 42;
    BatchMode batch_mode = BatchMode::Full;
    std::size_t batch_size = 32; // used by MiniBatch only
    bool shuffle = false;        // MiniBatch only: reshuffle rows every epoch

    void validate() const;
    friend bool operator==(const MlpConfig&, const MlpConfig&) = default;
};

inline constexpr std::size_t kLayerCount = 4;

// Dense layer, weights stored row-major as n_out x n_in.
struct Layer {
    std::size_t n_in = 0;
    std::size_t n_out = 0;
    std::vector<double> weights;
    std::vector<double> bias;

    std::span<const double> row(std::size_t unit) const noexcept
    {
        return std::span<const double>(weights).subspan(unit * n_in, n_in);
    }
    friend bool operator==(const Layer&, const Layer&) = default;
};

struct MlpModel {
    MlpConfig config;
    std::array<Layer, kLayerCount> layers; // input->h1, h1->h2, h2->h3, h3->output

    std::size_t n_inputs() const noexcept { return layers[0].n_in; }
    std::size_t parameter_count() const noexcept;
    friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

struct TrainReport {
    std::vector<double> epoch_loss; // mean squared error seen during each epoch
    double initial_loss = 0.0;      // before the first update
    double final_loss = 0.0;        // of the returned weights over all rows
    std::size_t epochs_run = 0;
};

struct TrainResult {
    MlpModel model;
    TrainReport report;
};

// dMSE/dparameter, same shapes as the model layers.
struct Gradient {
    std::array<std::vector<double>, kLayerCount> weights;
    std::array<std::vector<double>, kLayerCount> bias;
};

/// Weights i.i.d. uniform on [-0.5, 0.5] drawn from (config.seed, stream); biases zero.
MlpModel init(const MlpConfig& config, std::size_t n_inputs, std::uint64_t stream = 0);

double forward(const MlpModel& model, std::span<const double> row);
std::vector<double> predict(const MlpModel& model, MatrixView x);
double mse(const MlpModel& model, MatrixView x, std::span<const double> y);

/// Trains `model` in place of a copy. `stream` decorrelates shuffling between
/// models that share one seed. Throws DivergenceDetected on a non-finite loss.
TrainResult train(MlpModel model, MatrixView x, std::span<const double> y, const MlpConfig& config,
    std::uint64_t stream = 0);

Gradient loss_gradient(const MlpModel& model, MatrixView x, std::span<const double> y);

using GradientFn = std::function<Gradient(const MlpModel&, MatrixView, std::span<const double>)>;

struct GradientCheck {
    double max_relative_error = 0.0;
    // max |analytic - numeric| per layer, weights and biases together
    std::array<double, kLayerCount> max_abs_error{};
};

/// Compares `gradient` against central differences of the MSE for every
/// weight and bias. Relative error is |a - n| / max(|a| + |n|, 1e-8).
GradientCheck gradient_check(const MlpModel& model, MatrixView x, std::span<const double> y, double epsilon,
    const GradientFn& gradient = loss_gradient);

// Binary container: magic, configuration, then every layer's weights and
// biases as little-endian IEEE-754 doubles. Round-trips bit-exactly.
void save(const MlpModel& model, std::ostream& out);
MlpModel load(std::istream& in);
void save_file(const MlpModel& model, const std::string& path);
MlpModel load_file(const std::string& path);

} // namespace windsynth::mlp
