#pragma once

#include <limits>
#include <span>

#include "pdmp/quat.hpp"
#include "pdmp/trajectory.hpp"

namespace pdmp {

/// One generated orientation sample.
struct RolloutSample {
  double t = 0.0;
  double phi = 0.0;
  UnitQuaternion q;
};

/// Looks up the demonstrated orientation at a given phase, assuming the
/// demo starts at phase 0 and repeats with period 2 pi / omega. Between
/// samples the demo is interpolated along the geodesic; past the last
/// sample it wraps to the first.
class CycleReference {
 public:
  CycleReference(QuatTrajectory demo, double omega);

  UnitQuaternion at_phase(double phi) const;
  double omega() const { return omega_; }

 private:
  QuatTrajectory demo_;
  double omega_;
};

/// Largest geodesic distance between rollout samples with
/// from_time <= t < to_time and the demo at the same phase.
double max_phase_error(std::span<const RolloutSample> rollout,
                       const CycleReference& reference, double from_time,
                       double to_time = std::numeric_limits<double>::infinity());

/// Largest geodesic distance between two rollouts sample by sample, for
/// samples with t >= from_time. Both must share the time grid.
double max_rollout_difference(std::span<const RolloutSample> a,
                              std::span<const RolloutSample> b,
                              double from_time);

/// Rotation rates 2 log_map(q_{k+1}, q_k) / dt along a rollout; the last
/// entry repeats the previous one.
Vec3Series rollout_angular_velocity(std::span<const RolloutSample> rollout);

}  // namespace pdmp
