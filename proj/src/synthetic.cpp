#include "pdmp/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "pdmp/error.hpp"

namespace pdmp {

SyntheticDemo default_synthetic_demo() {
  SyntheticDemo d;
  d.center = UnitQuaternion::normalized(0.9, 0.2, -0.3, 0.25);
  d.harmonics = {
      {1, {0.45, 0.25, 0.10}, {0.0, 1.2, -0.4}},
      {2, {0.12, 0.18, 0.08}, {0.5, -0.9, 2.0}},
      {3, {0.04, 0.03, 0.06}, {1.1, 0.3, -1.7}},
  };
  return d;
}

QuatTrajectory generate_demo(const SyntheticDemo& spec) {
  if (!(spec.frequency > 0.0) || !(spec.dt > 0.0) || spec.cycles < 1 ||
      !(spec.noise >= 0.0)) {
    throw DomainError("frequency, dt, cycles must be positive, noise >= 0");
  }
  double bound = 0.0;
  for (const Harmonic& h : spec.harmonics) {
    if (h.multiple < 1) throw DomainError("harmonic multiple must be >= 1");
    bound += h.amplitude.norm();
  }
  if (!(bound < std::numbers::pi)) {
    throw DomainError("summed harmonic amplitudes must stay below pi");
  }
  const double period = 2.0 * std::numbers::pi / spec.frequency;
  const auto per_cycle =
      static_cast<std::size_t>(std::llround(period / spec.dt));
  if (per_cycle < 3) throw DomainError("dt too coarse for the frequency");
  const double dt = period / static_cast<double>(per_cycle);
  const std::size_t n = per_cycle * static_cast<std::size_t>(spec.cycles);

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> t(n);
  std::vector<UnitQuaternion> q(n);
  for (std::size_t k = 0; k < n; ++k) {
    t[k] = static_cast<double>(k) * dt;
    Eigen::Vector3d zeta = Eigen::Vector3d::Zero();
    for (const Harmonic& h : spec.harmonics) {
      for (int a = 0; a < 3; ++a) {
        zeta[a] += h.amplitude[a] *
                   std::sin(h.multiple * spec.frequency * t[k] + h.phase[a]);
      }
    }
    if (spec.noise > 0.0) {
      for (int a = 0; a < 3; ++a) zeta[a] += spec.noise * gauss(rng);
    }
    q[k] = exp_map(zeta, spec.center);
  }
  return QuatTrajectory::from_samples(std::move(t), std::move(q));
}

}  // namespace pdmp
