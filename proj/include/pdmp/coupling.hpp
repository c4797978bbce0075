#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pdmp/oscillator.hpp"
#include "pdmp/quat.hpp"
#include "pdmp/trajectory.hpp"
#include "pdmp/training.hpp"

namespace pdmp {

enum class Method { kRmp, kQp };

struct CoupledSample {
  double t = 0.0;
  double phi = 0.0;    // wrapped oscillator phase
  double omega = 0.0;  // oscillator frequency
  double u = 0.0;
  double u_hat = 0.0;
  std::optional<UnitQuaternion> q;  // DMP output, when a demo is coupled
};

/// Oscillator alone over a uniformly sampled input.
std::vector<CoupledSample> run_oscillator(std::span<const double> input,
                                          double dt, double frequency_guess,
                                          const OscillatorParams& params = {});

struct CouplingConfig {
  Method method = Method::kRmp;
  double frequency_guess = 1.0;
  /// Gains, kernels, goal, anchor, amplitude, lambda and initial covariance
  /// are taken from here. `learning` picks the online learner: kRecursive
  /// for the per-kernel one, anything else for JointRecursiveFit. `omega`
  /// and `fit` are ignored.
  TrainConfig train;
};

/// Oscillator driven by `input` while a DMP learns the demo online.
/// At each step the demo sample at the same time (the demo repeats with its
/// own period) becomes an RLS target at the oscillator phase, and the DMP
/// is stepped with the oscillator's phase and frequency. `input` shares the
/// time grid t_k = k dt.
std::vector<CoupledSample> run_coupled(const QuatTrajectory& demo,
                                       std::span<const double> input,
                                       double dt, const CouplingConfig& config);

/// Demo orientation at time t, repeating with period size() * dt(). The
/// demo must not end with a copy of its first sample.
UnitQuaternion demo_at_time(const QuatTrajectory& demo, double t);

}  // namespace pdmp
