#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "pdmp/quat.hpp"

namespace pdmp {

using Vec3Series = std::vector<Eigen::Vector3d>;

/// How finite differences treat the first and last samples.
enum class Boundary {
  /// Wrap around: the sample after the last one is the first one. Use for a
  /// demonstration covering a whole number of periods without repeating the
  /// first sample at the end.
  kCircular,
  /// Second-order one-sided stencils at the ends.
  kOneSided,
};

/// Uniformly sampled, hemisphere-aligned orientation demonstration.
class QuatTrajectory {
 public:
  /// Maximum deviation of any step from the mean step before a trajectory is
  /// considered non-uniform and resampled.
  static constexpr double kUniformTol = 1e-9;

  /// Validating ingest: requires >= 3 samples and strictly increasing
  /// timestamps, applies hemisphere alignment, and resamples onto the mean
  /// step when the sampling is not uniform.
  static QuatTrajectory from_samples(std::vector<double> timestamps,
                                     std::vector<UnitQuaternion> samples);

  const std::vector<double>& timestamps() const { return t_; }
  const std::vector<UnitQuaternion>& samples() const { return q_; }
  std::size_t size() const { return q_.size(); }
  const UnitQuaternion& operator[](std::size_t i) const { return q_[i]; }

  /// Mean sampling step.
  double dt() const;
  double duration() const { return t_.back() - t_.front(); }

 private:
  QuatTrajectory(std::vector<double> t, std::vector<UnitQuaternion> q)
      : t_(std::move(t)), q_(std::move(q)) {}

  std::vector<double> t_;
  std::vector<UnitQuaternion> q_;

  friend QuatTrajectory resample_uniform(std::span<const double>,
                                         std::span<const UnitQuaternion>,
                                         double);
};

/// Demonstration projected onto the tangent space at `center`.
struct TangentTrajectory {
  std::vector<double> timestamps;
  Vec3Series zeta;
  Vec3Series dzeta;
  Vec3Series ddzeta;
  UnitQuaternion center;
};

struct OmegaTrajectory {
  std::vector<double> timestamps;
  Vec3Series omega;
  Vec3Series domega;
};

/// First derivative by second-order central differences.
Vec3Series differentiate(std::span<const Eigen::Vector3d> x, double dt,
                         Boundary boundary);

/// Second derivative by the three-point stencil (four-point one-sided at
/// the ends for Boundary::kOneSided).
Vec3Series second_derivative(std::span<const Eigen::Vector3d> x, double dt,
                             Boundary boundary);

/// zeta_t = log_map(q_t, center) with first and second time derivatives.
TangentTrajectory project_to_tangent(const QuatTrajectory& traj,
                                     const UnitQuaternion& center,
                                     Boundary boundary = Boundary::kCircular);

/// omega_t = 2 log_map(q_{t+1}, q_t) / dt, i.e. the rate that carries q_t to
/// q_{t+1} through q_{t+1} = Exp(dt/2 omega_t) * q_t. The last sample uses
/// q_0 as successor (circular) or repeats the previous rate (one-sided).
/// domega is the central difference of omega.
OmegaTrajectory angular_velocity(const QuatTrajectory& traj,
                                 Boundary boundary = Boundary::kCircular);

/// Piecewise shortest-arc interpolation onto a uniform grid spanning
/// [t_0, t_end]. The step is adjusted to span / round(span / target_dt) so
/// both endpoints are kept.
QuatTrajectory resample_uniform(std::span<const double> timestamps,
                                std::span<const UnitQuaternion> samples,
                                double target_dt);

/// Geodesic interpolation between samples a and b at fraction s in [0, 1].
UnitQuaternion interpolate(const UnitQuaternion& a, const UnitQuaternion& b,
                           double s);

}  // namespace pdmp
