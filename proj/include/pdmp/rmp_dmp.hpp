#pragma once

#include <vector>

#include "pdmp/evaluation.hpp"
#include "pdmp/periodic_dmp.hpp"
#include "pdmp/quat.hpp"
#include "pdmp/training.hpp"

namespace pdmp::rmp {

/// Projection DMP: a 3-DoF periodic DMP over zeta = log_map(q, center),
/// mapped back through exp_map(y, center) at every step.
struct RmpDmpModel {
  PeriodicDmpModel inner;
  UnitQuaternion center;
  /// Phase-0 state on the demonstrated cycle, set by train().
  DmpState initial;

  void validate() const;
};

/// Projects the demo onto the tangent space at its Karcher mean (or first
/// sample, see TrainConfig::anchor) and fits the inner DMP there.
RmpDmpModel train(const QuatTrajectory& demo, const TrainConfig& config = {});

/// exp_map(state.y, center). Throws DomainError when ||y|| >= pi.
UnitQuaternion output(const DmpState& state, const RmpDmpModel& model);

struct StepResult {
  DmpState state;
  UnitQuaternion q;
};

StepResult step(const DmpState& state, const RmpDmpModel& model, double dt,
                Integrator integrator = Integrator::kEuler);

/// Step with phase and frequency supplied from outside.
StepResult step_driven(const DmpState& state, const RmpDmpModel& model,
                       double phi, double omega, double dt);

/// State at phase 0 matching the first demo sample and its tangent velocity.
/// `perturbation` rotates the initial orientation: q0 = Exp(p) * demo[0].
DmpState start_state(const RmpDmpModel& model, const QuatTrajectory& demo,
                     const TangentVector& perturbation = TangentVector::Zero(),
                     Boundary boundary = Boundary::kCircular);

/// `initial` with its orientation rotated by Exp(perturbation).
DmpState start_state(const RmpDmpModel& model,
                     const TangentVector& perturbation = TangentVector::Zero());

/// `steps` integration steps; the result holds steps + 1 samples including
/// the initial one at t = 0.
std::vector<RolloutSample> rollout(const RmpDmpModel& model,
                                   const DmpState& initial, double dt,
                                   std::size_t steps,
                                   Integrator integrator = Integrator::kEuler);

}  // namespace pdmp::rmp
