#pragma once

#include <cmath>
#include <string>

#include "rlens/error.hpp"
#include "rlens/mlp.hpp"

namespace rlens {

enum class OptKind { sgd, adam };

inline const char* to_string(OptKind k) { return k == OptKind::sgd ? "sgd" : "adam"; }
inline OptKind opt_kind_from_string(const std::string& s) {
  if (s == "sgd") return OptKind::sgd;
  if (s == "adam") return OptKind::adam;
  throw ConfigError("unknown optimizer: " + s);
}

/// SGD or Adam (bias-corrected first/second moments, beta1=0.9, beta2=0.999,
/// eps_hat=1e-8). Gradients are clipped to a global L2 norm of 10 before any
/// update; the clip keeps the hottest sampled learning rates (up to 0.1)
/// from blowing parameters up.
struct OptimizerState {
  OptKind kind = OptKind::adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_hat = 1e-8;
  double grad_clip_norm = 10.0;
  std::int64_t step_count = 0;
  std::vector<Matrix> m_w, v_w;
  std::vector<Vector> m_b, v_b;

  static OptimizerState sgd(double lr) {
    OptimizerState s;
    s.kind = OptKind::sgd;
    s.learning_rate = lr;
    return s;
  }
  static OptimizerState adam(double lr) {
    OptimizerState s;
    s.kind = OptKind::adam;
    s.learning_rate = lr;
    return s;
  }
};

namespace detail {

inline void ensure_moments(OptimizerState& opt, const ParamSet& params) {
  if (!opt.m_w.empty()) return;
  for (const Matrix& w : params.weights) {
    opt.m_w.push_back(Matrix::Zero(w.rows(), w.cols()));
    opt.v_w.push_back(Matrix::Zero(w.rows(), w.cols()));
  }
  for (const Vector& b : params.biases) {
    opt.m_b.push_back(Vector::Zero(b.size()));
    opt.v_b.push_back(Vector::Zero(b.size()));
  }
}

}  // namespace detail

inline double global_grad_norm(const MlpGradients& g) {
  double sq = 0.0;
  for (const Matrix& w : g.weights) sq += w.squaredNorm();
  for (const Vector& b : g.biases) sq += b.squaredNorm();
  return std::sqrt(sq);
}

/// One optimizer step. Rejects non-finite gradients (NumericError) without
/// touching parameters or optimizer state.
inline void apply_update(ParamSet& params, const MlpGradients& grads, OptimizerState& opt) {
  if (params.weights.size() != grads.weights.size() || params.biases.size() != grads.biases.size()) {
    throw ContractError("apply_update: parameter/gradient shape mismatch");
  }
  if (!grads.all_finite()) {
    throw NumericError("apply_update: non-finite gradients, update rejected");
  }

  double scale = 1.0;
  if (opt.grad_clip_norm > 0.0) {
    const double norm = global_grad_norm(grads);
    if (norm > opt.grad_clip_norm) scale = opt.grad_clip_norm / norm;
  }

  if (opt.kind == OptKind::sgd) {
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
      params.weights[l] -= opt.learning_rate * scale * grads.weights[l];
      params.biases[l] -= opt.learning_rate * scale * grads.biases[l];
    }
    ++opt.step_count;
    return;
  }

  detail::ensure_moments(opt, params);
  ++opt.step_count;
  const double t = static_cast<double>(opt.step_count);
  const double bc1 = 1.0 - std::pow(opt.beta1, t);
  const double bc2 = 1.0 - std::pow(opt.beta2, t);
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    const Matrix gw = scale * grads.weights[l];
    const Vector gb = scale * grads.biases[l];
    opt.m_w[l] = opt.beta1 * opt.m_w[l] + (1.0 - opt.beta1) * gw;
    opt.v_w[l] = opt.beta2 * opt.v_w[l].array().matrix() + (1.0 - opt.beta2) * gw.cwiseProduct(gw);
    opt.m_b[l] = opt.beta1 * opt.m_b[l] + (1.0 - opt.beta1) * gb;
    opt.v_b[l] = opt.beta2 * opt.v_b[l] + (1.0 - opt.beta2) * gb.cwiseProduct(gb);
    params.weights[l].array() -=
        opt.learning_rate * (opt.m_w[l] / bc1).array() /
        ((opt.v_w[l] / bc2).array().sqrt() + opt.eps_hat);
    params.biases[l].array() -=
        opt.learning_rate * (opt.m_b[l] / bc1).array() /
        ((opt.v_b[l] / bc2).array().sqrt() + opt.eps_hat);
  }
}

/// target <- (1 - tau) * target + tau * online, elementwise. tau in (0, 1].
inline void soft_update(ParamSet& target, const ParamSet& online, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("soft_update: tau must be in (0,1]");
  if (target.weights.size() != online.weights.size()) {
    throw ContractError("soft_update: shape mismatch");
  }
  for (std::size_t l = 0; l < target.weights.size(); ++l) {
    target.weights[l] = (1.0 - tau) * target.weights[l] + tau * online.weights[l];
    target.biases[l] = (1.0 - tau) * target.biases[l] + tau * online.biases[l];
  }
}

}  // namespace rlens
