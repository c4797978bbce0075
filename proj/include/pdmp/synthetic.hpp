#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "pdmp/quat.hpp"
#include "pdmp/trajectory.hpp"

namespace pdmp {

/// One term of zeta(t) = sum_k a_k .* sin(m_k w t + p_k).
struct Harmonic {
  int multiple = 1;
  Eigen::Vector3d amplitude = Eigen::Vector3d::Zero();
  Eigen::Vector3d phase = Eigen::Vector3d::Zero();
};

/// Band-limited periodic orientation demo q(t) = exp_map(zeta(t), center)
/// with optional Gaussian noise added to zeta.
struct SyntheticDemo {
  UnitQuaternion center;
  double frequency = 6.283185307179586;  // fundamental, rad/s
  std::vector<Harmonic> harmonics;
  double dt = 1e-3;
  int cycles = 1;
  double noise = 0.0;  // std dev per tangent coordinate
  std::uint64_t seed = 0;
};

/// The three-harmonic demo used by the examples and acceptance runs.
SyntheticDemo default_synthetic_demo();

/// Samples whole periods: the step is adjusted so a period holds an integer
/// number of samples, and the closing sample of the last period is omitted.
/// Throws DomainError when the summed amplitude norms reach pi or any
/// parameter is out of range.
QuatTrajectory generate_demo(const SyntheticDemo& spec);

}  // namespace pdmp
