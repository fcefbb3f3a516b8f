#include "dqcsched/rl/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace dqc::rl {

Mlp::Mlp(std::vector<std::size_t> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp needs at least two layer sizes");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] == 0 || sizes_[l + 1] == 0) throw std::invalid_argument("empty Mlp layer");
    offsets_.push_back(total);
    total += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
  }
  params_.assign(total, 0.0);
}

void Mlp::initialize(Rng& rng, double output_gain) {
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    const double gain = (l + 1 == layer_count()) ? output_gain : 1.0;
    double* w = params_.data() + weight_offset(l);
    for (std::size_t i = 0; i < sizes_[l + 1] * sizes_[l]; ++i) {
      w[i] = gain * bound * (2.0 * rng.uniform01() - 1.0);
    }
    double* b = params_.data() + bias_offset(l);
    for (std::size_t i = 0; i < sizes_[l + 1]; ++i) b[i] = 0.0;
  }
}

double& Mlp::weight(std::size_t layer, std::size_t out, std::size_t in) {
  return params_.at(weight_offset(layer) + out * sizes_[layer] + in);
}

double& Mlp::bias(std::size_t layer, std::size_t out) {
  return params_.at(bias_offset(layer) + out);
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  Tape tape;
  return forward(input, tape);
}

const std::vector<double>& Mlp::forward(std::span<const double> input, Tape& tape) const {
  if (input.size() != input_size()) throw std::invalid_argument("Mlp input size mismatch");
  tape.activations.resize(sizes_.size());
  tape.activations[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const std::size_t n_in = sizes_[l];
    const std::size_t n_out = sizes_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    const double* b = params_.data() + bias_offset(l);
    const auto& x = tape.activations[l];
    auto& y = tape.activations[l + 1];
    y.assign(n_out, 0.0);
    const bool hidden = l + 1 < layer_count();
    for (std::size_t o = 0; o < n_out; ++o) {
      double acc = b[o];
      const double* row = w + o * n_in;
      for (std::size_t i = 0; i < n_in; ++i) acc += row[i] * x[i];
      y[o] = hidden ? std::tanh(acc) : acc;
    }
  }
  return tape.activations.back();
}

void Mlp::backward(const Tape& tape, std::span<const double> grad_output,
                   std::span<double> grad_params) const {
  if (grad_output.size() != output_size() || grad_params.size() != params_.size()) {
    throw std::invalid_argument("Mlp backward size mismatch");
  }
  std::vector<double> delta(grad_output.begin(), grad_output.end());
  std::vector<double> next;
  for (std::size_t l = layer_count(); l-- > 0;) {
    const std::size_t n_in = sizes_[l];
    const std::size_t n_out = sizes_[l + 1];
    const auto& x = tape.activations[l];
    const double* w = params_.data() + weight_offset(l);
    double* gw = grad_params.data() + weight_offset(l);
    double* gb = grad_params.data() + bias_offset(l);
    for (std::size_t o = 0; o < n_out; ++o) {
      gb[o] += delta[o];
      double* grow = gw + o * n_in;
      for (std::size_t i = 0; i < n_in; ++i) grow[i] += delta[o] * x[i];
    }
    if (l == 0) break;
    next.assign(n_in, 0.0);
    for (std::size_t o = 0; o < n_out; ++o) {
      const double* row = w + o * n_in;
      for (std::size_t i = 0; i < n_in; ++i) next[i] += row[i] * delta[o];
    }
    // x holds tanh outputs of layer l-1: d tanh = 1 - y^2.
    for (std::size_t i = 0; i < n_in; ++i) next[i] *= 1.0 - x[i] * x[i];
    delta.swap(next);
  }
}

Adam::Adam(std::size_t n_params, double learning_rate, double beta1, double beta2,
           double epsilon)
    : lr_(learning_rate),
      beta1_(beta1),
      beta2_(beta2),
      eps_(epsilon),
      m_(n_params, 0.0),
      v_(n_params, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw std::invalid_argument("Adam parameter size mismatch");
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
  }
}

}  // namespace dqc::rl
