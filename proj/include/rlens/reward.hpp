#pragma once

#include <cmath>

namespace rlens {

/// Training-time reward shaping r' = sign(r) * s * |r|^p. Raw rewards stay
/// untouched for evaluation; only replayed transitions carry r'.
inline double transform_reward(double r, double scale, double power) {
  if (r == 0.0) return 0.0;
  const double sign = r > 0.0 ? 1.0 : -1.0;
  return sign * scale * std::pow(std::fabs(r), power);
}

}  // namespace rlens
