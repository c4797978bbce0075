#include "pdmp/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdmp/error.hpp"

namespace pdmp {

QuatTrajectory QuatTrajectory::from_samples(
    std::vector<double> timestamps, std::vector<UnitQuaternion> samples) {
  if (timestamps.size() != samples.size()) {
    throw DegenerateInput("timestamp and sample counts differ");
  }
  if (samples.size() < 3) {
    throw DegenerateInput("a trajectory needs at least 3 samples, got " +
                          std::to_string(samples.size()));
  }
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (!(timestamps[i] > timestamps[i - 1])) {
      throw DegenerateInput("timestamps must be strictly increasing (row " +
                            std::to_string(i) + ")");
    }
  }
  samples = hemisphere_align(samples);

  const double mean_dt =
      (timestamps.back() - timestamps.front()) / double(timestamps.size() - 1);
  double max_dev = 0.0;
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    max_dev = std::max(max_dev,
                       std::abs(timestamps[i] - timestamps[i - 1] - mean_dt));
  }
  if (max_dev > kUniformTol) {
    return resample_uniform(timestamps, samples, mean_dt);
  }
  return {std::move(timestamps), std::move(samples)};
}

double QuatTrajectory::dt() const { return duration() / double(size() - 1); }

Vec3Series differentiate(std::span<const Eigen::Vector3d> x, double dt,
                         Boundary boundary) {
  const std::size_t n = x.size();
  if (n < 3) {
    throw DegenerateInput("differentiate needs at least 3 samples");
  }
  Vec3Series d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d[i] = (x[i + 1] - x[i - 1]) / (2.0 * dt);
  }
  if (boundary == Boundary::kCircular) {
    d[0] = (x[1] - x[n - 1]) / (2.0 * dt);
    d[n - 1] = (x[0] - x[n - 2]) / (2.0 * dt);
  } else {
    d[0] = (-3.0 * x[0] + 4.0 * x[1] - x[2]) / (2.0 * dt);
    d[n - 1] = (3.0 * x[n - 1] - 4.0 * x[n - 2] + x[n - 3]) / (2.0 * dt);
  }
  return d;
}

Vec3Series second_derivative(std::span<const Eigen::Vector3d> x, double dt,
                             Boundary boundary) {
  const std::size_t n = x.size();
  if (n < 3) {
    throw DegenerateInput("second_derivative needs at least 3 samples");
  }
  const double h2 = dt * dt;
  Vec3Series d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d[i] = (x[i + 1] - 2.0 * x[i] + x[i - 1]) / h2;
  }
  if (boundary == Boundary::kCircular) {
    d[0] = (x[1] - 2.0 * x[0] + x[n - 1]) / h2;
    d[n - 1] = (x[0] - 2.0 * x[n - 1] + x[n - 2]) / h2;
  } else if (n >= 4) {
    d[0] = (2.0 * x[0] - 5.0 * x[1] + 4.0 * x[2] - x[3]) / h2;
    d[n - 1] =
        (2.0 * x[n - 1] - 5.0 * x[n - 2] + 4.0 * x[n - 3] - x[n - 4]) / h2;
  } else {
    d[0] = d[1];
    d[n - 1] = d[n - 2];
  }
  return d;
}

TangentTrajectory project_to_tangent(const QuatTrajectory& traj,
                                     const UnitQuaternion& center,
                                     Boundary boundary) {
  TangentTrajectory out;
  out.timestamps = traj.timestamps();
  out.center = center;
  out.zeta.reserve(traj.size());
  for (const auto& q : traj.samples()) {
    out.zeta.push_back(log_map(q, center));
  }
  out.dzeta = differentiate(out.zeta, traj.dt(), boundary);
  out.ddzeta = second_derivative(out.zeta, traj.dt(), boundary);
  return out;
}

OmegaTrajectory angular_velocity(const QuatTrajectory& traj,
                                 Boundary boundary) {
  const std::size_t n = traj.size();
  const double dt = traj.dt();
  OmegaTrajectory out;
  out.timestamps = traj.timestamps();
  out.omega.resize(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out.omega[i] = 2.0 * log_map(traj[i + 1], traj[i]) / dt;
  }
  if (boundary == Boundary::kCircular) {
    // The demo is one period, q_0 follows q_{n-1}; keep the pair in the same
    // hemisphere.
    const UnitQuaternion next =
        dot(traj[0], traj[n - 1]) < 0.0 ? -traj[0] : traj[0];
    out.omega[n - 1] = 2.0 * log_map(next, traj[n - 1]) / dt;
  } else {
    out.omega[n - 1] = out.omega[n - 2];
  }
  out.domega = differentiate(out.omega, dt, boundary);
  return out;
}

UnitQuaternion interpolate(const UnitQuaternion& a, const UnitQuaternion& b,
                           double s) {
  const UnitQuaternion bb = dot(a, b) < 0.0 ? -b : b;
  return exp_map(s * log_map(bb, a), a);
}

QuatTrajectory resample_uniform(std::span<const double> timestamps,
                                std::span<const UnitQuaternion> samples,
                                double target_dt) {
  if (timestamps.size() != samples.size() || samples.size() < 2) {
    throw DegenerateInput("resample_uniform needs at least 2 samples");
  }
  const double t0 = timestamps.front();
  const double span = timestamps.back() - t0;
  if (!(span > 0.0) || !(target_dt > 0.0)) {
    throw DegenerateInput("resample_uniform: zero time span or step");
  }
  const auto intervals =
      static_cast<std::size_t>(std::max(1.0, std::round(span / target_dt)));
  const double step = span / double(intervals);

  std::vector<double> t(intervals + 1);
  std::vector<UnitQuaternion> q(intervals + 1);
  std::size_t seg = 0;
  for (std::size_t k = 0; k <= intervals; ++k) {
    const double tk = k == intervals ? timestamps.back() : t0 + double(k) * step;
    while (seg + 2 < timestamps.size() && timestamps[seg + 1] <= tk) {
      ++seg;
    }
    const double ta = timestamps[seg];
    const double tb = timestamps[seg + 1];
    const double s = std::clamp((tk - ta) / (tb - ta), 0.0, 1.0);
    t[k] = tk;
    // Grid points that coincide with a knot keep the knot exactly.
    constexpr double kSnap = 1e-12;
    if (s <= kSnap) {
      q[k] = samples[seg];
    } else if (s >= 1.0 - kSnap) {
      q[k] = samples[seg + 1];
    } else {
      q[k] = interpolate(samples[seg], samples[seg + 1], s);
    }
  }
  if (q.size() < 3) {
    throw DegenerateInput("resampled trajectory has fewer than 3 samples");
  }
  return {std::move(t), hemisphere_align(q)};
}

}  // namespace pdmp
