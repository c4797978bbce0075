#pragma once

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <vector>
#include <random>

#include "pdmp/quat.hpp"

namespace pdmp::testing {

inline UnitQuaternion random_quat(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return UnitQuaternion::normalized(n(rng), n(rng), n(rng), n(rng));
}

/// Uniform direction scaled to a norm drawn from [0, max_norm].
inline Eigen::Vector3d random_tangent(std::mt19937_64& rng, double max_norm) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> r(0.0, max_norm);
  Eigen::Vector3d v(n(rng), n(rng), n(rng));
  return v.normalized() * r(rng);
}

inline Eigen::Quaterniond to_eigen(const UnitQuaternion& q) {
  return {q.w(), q.vec().x(), q.vec().y(), q.vec().z()};
}

inline Eigen::Matrix3d rotation(const UnitQuaternion& q) {
  return to_eigen(q).toRotationMatrix();
}

/// Angle between orientations from rotation matrices: acos((tr R - 1)/2),
/// i.e. the full rotation angle (twice the half-angle distance).
inline double matrix_angle(const UnitQuaternion& a, const UnitQuaternion& b) {
  const Eigen::Matrix3d r = rotation(a).transpose() * rotation(b);
  return std::acos(std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0));
}

/// Minimizer of sum acos(|q.mu|)^2 by projected gradient descent in R^4,
/// started from `mu`. Uses neither log_map nor exp_map.
inline Eigen::Vector4d brute_force_mean(const std::vector<UnitQuaternion>& qs,
                                        Eigen::Vector4d mu) {
  mu.normalize();
  for (int it = 0; it < 200000; ++it) {
    Eigen::Vector4d grad = Eigen::Vector4d::Zero();
    for (const auto& q : qs) {
      Eigen::Vector4d x = q.coeffs();
      double c = x.dot(mu);
      if (c < 0) {
        x = -x;
        c = -c;
      }
      c = std::min(c, 1.0);
      const double d = std::acos(c);
      if (d < 1e-14) continue;
      // d/dmu acos(x.mu)^2 = -2 d x / sqrt(1 - c^2)
      grad += -2.0 * d / std::sqrt(1.0 - c * c) * x;
    }
    grad -= grad.dot(mu) * mu;  // tangent projection
    if (grad.norm() < 1e-13 * qs.size()) break;
    mu = (mu - 0.2 / qs.size() * grad).normalized();
  }
  return mu;
}

}  // namespace pdmp::testing
