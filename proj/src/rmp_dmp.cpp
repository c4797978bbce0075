#include "pdmp/rmp_dmp.hpp"

#include <cmath>
#include <numbers>

#include "pdmp/error.hpp"

namespace pdmp::rmp {

void RmpDmpModel::validate() const {
  inner.validate();
  if (inner.dofs() != 3) {
    throw DomainError("projection DMP needs a 3-DoF inner model");
  }
  if (std::abs(center.norm() - 1.0) > 1e-9) {
    throw DomainError("tangent-space center is not a unit quaternion");
  }
  if (initial.y.size() != 3 || initial.z.size() != 3 ||
      !initial.y.allFinite() || !initial.z.allFinite()) {
    throw DomainError("initial state must hold finite 3-vectors");
  }
}

RmpDmpModel train(const QuatTrajectory& raw_demo, const TrainConfig& config) {
  const QuatTrajectory demo = config.boundary == Boundary::kCircular
                                  ? drop_closing_sample(raw_demo)
                                  : raw_demo;
  RmpDmpModel model;
  model.center = config.anchor == Anchor::kKarcherMean
                     ? karcher_mean(demo.samples())
                     : demo[0];
  const TangentTrajectory tan =
      project_to_tangent(demo, model.center, config.boundary);
  const double omega = resolve_frequency(demo, config);

  model.inner = PeriodicDmpModel::make(3, config.dmp, omega);
  model.inner.amplitude = config.amplitude;

  const Eigen::MatrixXd zeta = stack_rows(tan.zeta);
  switch (config.goal) {
    case GoalChoice::kMean:
      model.inner.goal = zeta.colwise().mean().transpose();
      break;
    case GoalChoice::kZero:
      model.inner.goal = Eigen::VectorXd::Zero(3);
      break;
    case GoalChoice::kIdentity:
      model.inner.goal = log_map(UnitQuaternion::identity(), model.center);
      break;
  }

  const Eigen::MatrixXd targets =
      euclidean_targets(zeta, stack_rows(tan.dzeta), stack_rows(tan.ddzeta),
                        model.inner);
  const std::vector<double> phases = demo_phases(demo, omega);
  model.inner.weights = fit_targets(model.inner.basis, phases, targets,
                                    model.inner.amplitude, config);
  model.initial.y = tan.zeta.front();
  model.initial.z = tan.dzeta.front() / omega;
  model.initial.phi = 0.0;
  model.validate();
  return model;
}

UnitQuaternion output(const DmpState& state, const RmpDmpModel& model) {
  const TangentVector y = state.y;
  if (!(y.norm() < std::numbers::pi)) {
    throw DomainError("rollout left the tangent chart: ||y|| = " +
                      std::to_string(y.norm()));
  }
  return exp_map(y, model.center);
}

StepResult step(const DmpState& state, const RmpDmpModel& model, double dt,
                Integrator integrator) {
  DmpState next = pdmp::step(state, model.inner, dt, integrator);
  UnitQuaternion q = output(next, model);
  return {std::move(next), q};
}

StepResult step_driven(const DmpState& state, const RmpDmpModel& model,
                       double phi, double omega, double dt) {
  DmpState next = pdmp::step_driven(state, model.inner, phi, omega, dt);
  UnitQuaternion q = output(next, model);
  return {std::move(next), q};
}

DmpState start_state(const RmpDmpModel& model, const QuatTrajectory& raw_demo,
                     const TangentVector& perturbation, Boundary boundary) {
  const QuatTrajectory demo = boundary == Boundary::kCircular
                                  ? drop_closing_sample(raw_demo)
                                  : raw_demo;
  const TangentTrajectory tan =
      project_to_tangent(demo, model.center, boundary);
  DmpState s;
  s.y = log_map(exp_map(perturbation, demo[0]), model.center);
  s.z = tan.dzeta.front() / model.inner.omega;
  s.phi = 0.0;
  return s;
}

DmpState start_state(const RmpDmpModel& model,
                     const TangentVector& perturbation) {
  DmpState s = model.initial;
  s.y = log_map(exp_map(perturbation, output(s, model)), model.center);
  return s;
}

std::vector<RolloutSample> rollout(const RmpDmpModel& model,
                                   const DmpState& initial, double dt,
                                   std::size_t steps, Integrator integrator) {
  std::vector<RolloutSample> out;
  out.reserve(steps + 1);
  DmpState s = initial;
  out.push_back({0.0, s.phi, output(s, model)});
  for (std::size_t k = 1; k <= steps; ++k) {
    StepResult r = step(s, model, dt, integrator);
    s = std::move(r.state);
    out.push_back({double(k) * dt, s.phi, r.q});
  }
  return out;
}

}  // namespace pdmp::rmp
