#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "rlens/error.hpp"
#include "rlens/rng.hpp"

namespace rlens {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation { relu, tanh_fn, identity };

inline const char* to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh_fn: return "tanh";
    case Activation::identity: return "identity";
  }
  return "?";
}

inline Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh_fn;
  if (s == "identity") return Activation::identity;
  throw ConfigError("unknown activation: " + s);
}

/// Fully connected net: `depth` hidden layers of `width` units, then a
/// linear output layer with its own activation.
struct MlpSpec {
  int input_dim = 0;
  int width = 0;
  int depth = 0;
  int output_dim = 0;
  Activation hidden_activation = Activation::relu;
  Activation output_activation = Activation::identity;
  std::uint64_t init_seed = 0;

  void validate() const {
    if (input_dim < 1 || width < 1 || depth < 1 || output_dim < 1) {
      throw ConfigError("mlp spec: all dimensions must be >= 1");
    }
  }

  int num_layers() const { return depth + 1; }

  int layer_in(int l) const { return l == 0 ? input_dim : width; }
  int layer_out(int l) const { return l == depth ? output_dim : width; }

  std::int64_t param_count() const {
    std::int64_t n = 0;
    for (int l = 0; l < num_layers(); ++l) {
      n += static_cast<std::int64_t>(layer_in(l)) * layer_out(l) + layer_out(l);
    }
    return n;
  }
};

/// Per-layer weights (rows = outputs, cols = inputs) and biases.
struct ParamSet {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;

  bool all_finite() const {
    for (const Matrix& w : weights) {
      if (!w.allFinite()) return false;
    }
    for (const Vector& b : biases) {
      if (!b.allFinite()) return false;
    }
    return true;
  }
};

namespace detail {

inline void apply_activation(Matrix& z, Activation a) {
  switch (a) {
    case Activation::relu:
      z = z.cwiseMax(0.0);
      break;
    case Activation::tanh_fn:
      z = z.array().tanh().matrix();
      break;
    case Activation::identity:
      break;
  }
}

/// Derivative expressed through the post-activation value.
inline Matrix activation_grad_from_output(const Matrix& activated, Activation a) {
  switch (a) {
    case Activation::relu:
      return (activated.array() > 0.0).cast<double>().matrix();
    case Activation::tanh_fn:
      return (1.0 - activated.array().square()).matrix();
    case Activation::identity:
      return Matrix::Ones(activated.rows(), activated.cols());
  }
  throw ContractError("unknown activation");
}

}  // namespace detail

/// Deterministic uniform fan-in init: W, b ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)),
/// filled layer by layer, weights row-major then bias.
inline ParamSet mlp_init(const MlpSpec& spec) {
  spec.validate();
  Rng rng(spec.init_seed);
  ParamSet p;
  p.weights.reserve(static_cast<std::size_t>(spec.num_layers()));
  p.biases.reserve(static_cast<std::size_t>(spec.num_layers()));
  for (int l = 0; l < spec.num_layers(); ++l) {
    const int in = spec.layer_in(l);
    const int out = spec.layer_out(l);
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    Matrix w(out, in);
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) w(r, c) = rng.uniform(-bound, bound);
    }
    Vector b(out);
    for (int r = 0; r < out; ++r) b(r) = rng.uniform(-bound, bound);
    p.weights.push_back(std::move(w));
    p.biases.push_back(std::move(b));
  }
  return p;
}

/// Post-activation values of every layer; [0] is the input batch itself.
struct MlpWorkspace {
  std::vector<Matrix> activations;
};

inline Matrix mlp_forward(const MlpSpec& spec, const ParamSet& params, const Matrix& batch,
                          MlpWorkspace* ws = nullptr) {
  if (batch.cols() != spec.input_dim) {
    throw ContractError("mlp_forward: input width " + std::to_string(batch.cols()) +
                        " does not match spec input_dim " + std::to_string(spec.input_dim));
  }
  if (static_cast<int>(params.weights.size()) != spec.num_layers()) {
    throw ContractError("mlp_forward: parameter/spec layer count mismatch");
  }
  if (ws != nullptr) {
    ws->activations.clear();
    ws->activations.push_back(batch);
  }
  Matrix a = batch;
  for (int l = 0; l < spec.num_layers(); ++l) {
    Matrix z = a * params.weights[static_cast<std::size_t>(l)].transpose();
    z.rowwise() += params.biases[static_cast<std::size_t>(l)].transpose();
    detail::apply_activation(z, l == spec.depth ? spec.output_activation : spec.hidden_activation);
    a = std::move(z);
    if (ws != nullptr) ws->activations.push_back(a);
  }
  return a;
}

struct MlpGradients {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
  Matrix input;  // dL/dX, needed to push critic gradients into an actor

  bool all_finite() const {
    for (const Matrix& w : weights) {
      if (!w.allFinite()) return false;
    }
    for (const Vector& b : biases) {
      if (!b.allFinite()) return false;
    }
    return true;
  }
};

/// Exact reverse-mode gradients for the forward pass captured in `ws`,
/// composed with `loss_grad` = dL/d(output).
inline MlpGradients mlp_backward(const MlpSpec& spec, const ParamSet& params,
                                 const MlpWorkspace& ws, const Matrix& loss_grad) {
  const int layers = spec.num_layers();
  if (static_cast<int>(ws.activations.size()) != layers + 1) {
    throw ContractError("mlp_backward: workspace does not match spec");
  }
  if (loss_grad.rows() != ws.activations.front().rows() || loss_grad.cols() != spec.output_dim) {
    throw ContractError("mlp_backward: loss gradient shape mismatch");
  }

  MlpGradients g;
  g.weights.resize(static_cast<std::size_t>(layers));
  g.biases.resize(static_cast<std::size_t>(layers));

  Matrix delta = loss_grad;
  for (int l = layers - 1; l >= 0; --l) {
    const Activation act = (l == spec.depth) ? spec.output_activation : spec.hidden_activation;
    const Matrix& out_act = ws.activations[static_cast<std::size_t>(l + 1)];
    if (act != Activation::identity) {
      delta = delta.cwiseProduct(detail::activation_grad_from_output(out_act, act));
    }
    const Matrix& in_act = ws.activations[static_cast<std::size_t>(l)];
    g.weights[static_cast<std::size_t>(l)] = delta.transpose() * in_act;
    g.biases[static_cast<std::size_t>(l)] = delta.colwise().sum().transpose();
    if (l > 0) {
      delta = delta * params.weights[static_cast<std::size_t>(l)];
    } else {
      g.input = delta * params.weights[0];
    }
  }
  return g;
}

}  // namespace rlens
