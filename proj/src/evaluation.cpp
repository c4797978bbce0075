#include "pdmp/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "pdmp/error.hpp"
#include "pdmp/periodic_dmp.hpp"

namespace pdmp {

CycleReference::CycleReference(QuatTrajectory demo, double omega)
    : demo_(std::move(demo)), omega_(omega) {
  if (!(omega > 0.0)) throw DomainError("reference frequency must be positive");
}

UnitQuaternion CycleReference::at_phase(double phi) const {
  const double t = wrap_phase(phi) / omega_;
  const double pos = t / demo_.dt();
  const auto n = demo_.size();
  const auto i = static_cast<std::size_t>(std::floor(pos)) % n;
  const double s = pos - std::floor(pos);
  return interpolate(demo_[i], demo_[(i + 1) % n], s);
}

double max_phase_error(std::span<const RolloutSample> rollout,
                       const CycleReference& reference, double from_time,
                       double to_time) {
  double err = 0.0;
  for (const auto& r : rollout) {
    if (r.t < from_time || r.t >= to_time) continue;
    err = std::max(err, geodesic_distance(r.q, reference.at_phase(r.phi)));
  }
  return err;
}

double max_rollout_difference(std::span<const RolloutSample> a,
                              std::span<const RolloutSample> b,
                              double from_time) {
  if (a.size() != b.size()) {
    throw DomainError("rollouts of different lengths");
  }
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].t < from_time) continue;
    err = std::max(err, geodesic_distance(a[i].q, b[i].q));
  }
  return err;
}

Vec3Series rollout_angular_velocity(std::span<const RolloutSample> rollout) {
  Vec3Series w(rollout.size(), Eigen::Vector3d::Zero());
  for (std::size_t k = 0; k + 1 < rollout.size(); ++k) {
    const double dt = rollout[k + 1].t - rollout[k].t;
    UnitQuaternion next = rollout[k + 1].q;
    if (dot(next, rollout[k].q) < 0.0) next = -next;
    w[k] = 2.0 * log_map(next, rollout[k].q) / dt;
  }
  if (rollout.size() >= 2) w.back() = w[w.size() - 2];
  return w;
}

}  // namespace pdmp
