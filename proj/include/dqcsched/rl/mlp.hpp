#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dqcsched/random.hpp"

namespace dqc::rl {

/// Fully connected network with tanh hidden layers and a linear output layer.
/// Parameters live in one flat buffer: for each layer, the weight matrix
/// (out x in, row-major) followed by the bias vector.
class Mlp {
 public:
  Mlp() = default;
  /// Zero-initialized network; layer_sizes = {input, hidden..., output}.
  explicit Mlp(std::vector<std::size_t> layer_sizes);

  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases. The
  /// output layer weights are additionally multiplied by `output_gain`.
  void initialize(Rng& rng, double output_gain = 1.0);

  std::size_t input_size() const noexcept { return sizes_.front(); }
  std::size_t output_size() const noexcept { return sizes_.back(); }
  std::size_t layer_count() const noexcept { return sizes_.size() - 1; }
  const std::vector<std::size_t>& layer_sizes() const noexcept { return sizes_; }

  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> parameters() const noexcept { return params_; }

  double& weight(std::size_t layer, std::size_t out, std::size_t in);
  double& bias(std::size_t layer, std::size_t out);

  /// Activations of every layer, input first; filled by forward().
  struct Tape {
    std::vector<std::vector<double>> activations;
  };

  std::vector<double> forward(std::span<const double> input) const;
  const std::vector<double>& forward(std::span<const double> input, Tape& tape) const;
  /// Adds d(loss)/d(params) to `grad_params` given d(loss)/d(output).
  void backward(const Tape& tape, std::span<const double> grad_output,
                std::span<double> grad_params) const;

 private:
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + sizes_[layer + 1] * sizes_[layer];
  }

  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

/// Adaptive moment estimation over a flat parameter buffer.
class Adam {
 public:
  Adam() = default;
  Adam(std::size_t n_params, double learning_rate, double beta1 = 0.9,
       double beta2 = 0.999, double epsilon = 1e-8);

  void step(std::span<double> params, std::span<const double> grad);

 private:
  double lr_ = 3e-4;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  std::size_t t_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

}  // namespace dqc::rl
