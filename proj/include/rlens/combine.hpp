#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "rlens/error.hpp"

namespace rlens {

inline constexpr double kBetaInfinity = std::numeric_limits<double>::infinity();

/// How member predictions are fused into the ensemble action.
///   avg     - plain averaging (uniform weights, beta = 0 limit)
///   wavg    - soft-gating weighted averaging from validation scores
///   best    - the best-validation member alone (beta -> infinity limit)
///   closest - weighted average, then the member prediction nearest to it
///             (continuous action spaces only)
enum class CombineRule { avg, wavg, best, closest };

inline const char* to_string(CombineRule r) {
  switch (r) {
    case CombineRule::avg: return "avg";
    case CombineRule::wavg: return "wavg";
    case CombineRule::best: return "best";
    case CombineRule::closest: return "closest";
  }
  return "?";
}

inline CombineRule combine_rule_from_string(const std::string& s) {
  if (s == "avg") return CombineRule::avg;
  if (s == "wavg") return CombineRule::wavg;
  if (s == "best") return CombineRule::best;
  if (s == "closest") return CombineRule::closest;
  throw ConfigError("unknown combination rule: " + s);
}

/// Normalized per-member weights plus the inputs they were derived from.
struct CombinerWeights {
  std::vector<double> weights;
  double beta = 0.0;
  double epsilon = 1e-7;
  std::vector<double> source_scores;  // validation R_j, kept for provenance
};

/// Calibrates validation scores into positive lower-is-better values for the
/// soft-gating denominator: best score -> 1, worst -> 2, affine in between.
/// Shift-invariant, and total on the negative cumulative rewards a microgrid
/// produces. All-equal scores map to all-ones.
inline std::vector<double> score_to_badness(const std::vector<double>& scores) {
  if (scores.empty()) throw ContractError("score_to_badness: empty score list");
  for (double s : scores) {
    if (!std::isfinite(s)) throw ContractError("score_to_badness: non-finite score");
  }
  const auto [mn, mx] = std::minmax_element(scores.begin(), scores.end());
  std::vector<double> badness(scores.size(), 1.0);
  if (*mx == *mn) return badness;
  const double span = *mx - *mn;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    badness[j] = 2.0 - (scores[j] - *mn) / span;
  }
  return badness;
}

namespace detail {

inline std::size_t argmin_first(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[best]) best = i;
  }
  return best;
}

}  // namespace detail

/// Soft-gating weights: raw_j = 1 / (e_j^beta + eps), normalized to sum 1.
/// beta = 0 is exact averaging (0^0 := 1), beta = +inf selects the first
/// minimum-badness member. Monotone: lower badness never gets less weight.
/// When e_j^beta overflows for every member the normalizer vanishes; that is
/// the beta -> inf regime and resolves to the same argmin selection.
inline CombinerWeights compute_weights(const std::vector<double>& badness, double beta,
                                       double epsilon = 1e-7) {
  if (badness.empty()) throw ContractError("compute_weights: empty badness list");
  if (std::isnan(beta) || beta < 0.0) throw ConfigError("compute_weights: beta must be >= 0");
  if (epsilon < 0.0) throw ConfigError("compute_weights: epsilon must be >= 0");

  const std::size_t n = badness.size();
  CombinerWeights cw;
  cw.beta = beta;
  cw.epsilon = epsilon;
  cw.weights.assign(n, 0.0);

  if (std::isinf(beta)) {
    cw.weights[detail::argmin_first(badness)] = 1.0;
    return cw;
  }

  for (double e : badness) {
    if (beta != 0.0 && e <= 0.0) {
      throw ContractError("compute_weights: badness must be positive for beta > 0");
    }
  }

  std::vector<double> raw(n);
  double sum = 0.0;
  bool saturated = false;
  for (std::size_t j = 0; j < n; ++j) {
    const double denom = std::pow(badness[j], beta) + epsilon;
    raw[j] = 1.0 / denom;
    if (std::isinf(raw[j])) saturated = true;
    sum += raw[j];
  }
  if (saturated || sum <= 0.0 || !std::isfinite(sum)) {
    cw.weights[detail::argmin_first(badness)] = 1.0;
    return cw;
  }
  for (std::size_t j = 0; j < n; ++j) cw.weights[j] = raw[j] / sum;
  return cw;
}

/// Weights straight from validation scores (badness calibration included).
inline CombinerWeights weights_from_scores(const std::vector<double>& scores, double beta,
                                           double epsilon = 1e-7) {
  CombinerWeights cw = compute_weights(score_to_badness(scores), beta, epsilon);
  cw.source_scores = scores;
  return cw;
}

/// Weighted plurality vote over member greedy actions. Ties break to the
/// lowest action index.
inline int combine_discrete(const std::vector<int>& actions, const std::vector<double>& weights) {
  if (actions.empty()) throw ContractError("combine_discrete: empty ensemble");
  if (actions.size() != weights.size()) {
    throw ContractError("combine_discrete: size mismatch between actions and weights");
  }
  int max_action = *std::max_element(actions.begin(), actions.end());
  std::vector<double> tally(static_cast<std::size_t>(max_action) + 1, 0.0);
  for (std::size_t j = 0; j < actions.size(); ++j) {
    if (actions[j] < 0) throw ContractError("combine_discrete: negative action index");
    tally[static_cast<std::size_t>(actions[j])] += weights[j];
  }
  int winner = 0;
  for (int a = 1; a <= max_action; ++a) {
    if (tally[static_cast<std::size_t>(a)] > tally[static_cast<std::size_t>(winner)]) winner = a;
  }
  return winner;
}

/// Elementwise convex combination of member action vectors.
inline std::vector<double> combine_continuous_wavg(const std::vector<std::vector<double>>& preds,
                                                   const std::vector<double>& weights) {
  if (preds.empty()) throw ContractError("combine_continuous_wavg: empty ensemble");
  if (preds.size() != weights.size()) {
    throw ContractError("combine_continuous_wavg: size mismatch");
  }
  const std::size_t dim = preds.front().size();
  std::vector<double> out(dim, 0.0);
  for (std::size_t j = 0; j < preds.size(); ++j) {
    if (preds[j].size() != dim) throw ContractError("combine_continuous_wavg: ragged predictions");
    for (std::size_t d = 0; d < dim; ++d) out[d] += weights[j] * preds[j][d];
  }
  return out;
}

/// Weighted average first, then the member prediction with the smallest
/// Euclidean distance to it; ties break to the lowest member index. The
/// returned action is always one of the member predictions.
inline std::vector<double> combine_continuous_closest(const std::vector<std::vector<double>>& preds,
                                                      const std::vector<double>& weights) {
  const std::vector<double> target = combine_continuous_wavg(preds, weights);
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < preds.size(); ++j) {
    double d2 = 0.0;
    for (std::size_t d = 0; d < target.size(); ++d) {
      const double diff = preds[j][d] - target[d];
      d2 += diff * diff;
    }
    if (d2 < best_d2) {
      best_d2 = d2;
      best = j;
    }
  }
  return preds[best];
}

namespace detail {

inline std::vector<double> rule_weights(const CombinerWeights& cw, std::size_t n, CombineRule rule) {
  if (cw.weights.size() != n) throw ContractError("ensemble_act: weight/prediction size mismatch");
  switch (rule) {
    case CombineRule::avg:
      return std::vector<double>(n, 1.0 / static_cast<double>(n));
    case CombineRule::best: {
      if (cw.source_scores.size() != n) {
        throw ContractError("ensemble_act: rule 'best' needs source scores");
      }
      std::vector<double> w(n, 0.0);
      std::size_t best = 0;
      for (std::size_t j = 1; j < n; ++j) {
        if (cw.source_scores[j] > cw.source_scores[best]) best = j;
      }
      w[best] = 1.0;
      return w;
    }
    case CombineRule::wavg:
    case CombineRule::closest:
      return cw.weights;
  }
  throw ContractError("ensemble_act: unknown rule");
}

}  // namespace detail

inline int ensemble_act_discrete(const std::vector<int>& actions, const CombinerWeights& cw,
                                 CombineRule rule) {
  if (rule == CombineRule::closest) {
    throw ConfigError("rule 'closest' applies to continuous action spaces only");
  }
  return combine_discrete(actions, detail::rule_weights(cw, actions.size(), rule));
}

inline std::vector<double> ensemble_act_continuous(const std::vector<std::vector<double>>& preds,
                                                   const CombinerWeights& cw, CombineRule rule) {
  const std::vector<double> w = detail::rule_weights(cw, preds.size(), rule);
  if (rule == CombineRule::closest) return combine_continuous_closest(preds, w);
  return combine_continuous_wavg(preds, w);
}

}  // namespace rlens
