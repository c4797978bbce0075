#include "pdmp/qp_dmp.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pdmp/error.hpp"

namespace pdmp::qp {

QpDmpModel QpDmpModel::make(const DmpConfig& config, double omega,
                            const UnitQuaternion& goal) {
  QpDmpModel m;
  m.basis = KernelBasis::uniform(config.kernels, config.resolved_width());
  m.weights = Eigen::MatrixXd::Zero(3, config.kernels);
  m.alpha_z = config.alpha_z;
  m.beta_z = config.resolved_beta();
  m.goal = goal;
  m.omega = Eigen::Vector3d::Constant(omega);
  m.phase_frequency = omega;
  m.validate();
  return m;
}

void QpDmpModel::validate() const {
  if (basis.size() < 2) throw DomainError("model needs at least 2 kernels");
  if (weights.rows() != 3 || weights.cols() != basis.size()) {
    throw DomainError("weight matrix must be 3 x kernels");
  }
  if (!(alpha_z > 0.0) || !(beta_z > 0.0)) {
    throw DomainError("alpha_z and beta_z must be positive");
  }
  if (!(omega.minCoeff() > 0.0) || !(amplitude.minCoeff() > 0.0) ||
      !(phase_frequency > 0.0)) {
    throw DomainError("Omega, A_r and the phase frequency must be positive");
  }
  if (std::abs(goal.norm() - 1.0) > 1e-9) {
    throw DomainError("goal is not a unit quaternion");
  }
  if (std::abs(initial.q.norm() - 1.0) > 1e-9 || !initial.eta.allFinite()) {
    throw DomainError("initial state is not valid");
  }
  if (!weights.allFinite() || !omega.allFinite() || !amplitude.allFinite()) {
    throw DomainError("model contains non-finite values");
  }
}

Eigen::Vector3d forcing_q(double phi, const QpDmpModel& model) {
  return model.amplitude.cwiseProduct(model.weights *
                                      model.basis.normalized(phi));
}

Eigen::MatrixXd compute_targets(const QuatTrajectory& demo,
                                const QpDmpModel& model, Boundary boundary) {
  const OmegaTrajectory rates = angular_velocity(demo, boundary);
  Eigen::MatrixXd f(static_cast<Eigen::Index>(demo.size()), 3);
  for (std::size_t t = 0; t < demo.size(); ++t) {
    const Eigen::Vector3d eta = rates.omega[t].cwiseQuotient(model.omega);
    const Eigen::Vector3d deta = rates.domega[t].cwiseQuotient(model.omega);
    const Eigen::Vector3d to_goal = 2.0 * log_map(model.goal, demo[t]);
    const Eigen::Vector3d raw =
        deta.cwiseQuotient(model.omega) -
        model.alpha_z * (model.beta_z * to_goal - eta);
    f.row(static_cast<Eigen::Index>(t)) =
        raw.cwiseQuotient(model.amplitude).transpose();
  }
  return f;
}

QpDmpModel train(const QuatTrajectory& raw_demo, const TrainConfig& config) {
  const QuatTrajectory demo = config.boundary == Boundary::kCircular
                                  ? drop_closing_sample(raw_demo)
                                  : raw_demo;
  const UnitQuaternion goal = config.goal == GoalChoice::kMean
                                  ? karcher_mean(demo.samples())
                                  : UnitQuaternion::identity();
  const double omega = resolve_frequency(demo, config);
  QpDmpModel model = QpDmpModel::make(config.dmp, omega, goal);
  model.amplitude = config.amplitude;

  const Eigen::MatrixXd targets = compute_targets(demo, model, config.boundary);
  // A_r is already divided out of the targets.
  model.weights = fit_targets(model.basis, demo_phases(demo, omega), targets,
                              Eigen::VectorXd::Ones(3), config);
  model.initial = start_state(model, demo, TangentVector::Zero(),
                              config.boundary);
  model.validate();
  return model;
}

namespace {

QpDmpState advance(const QpDmpState& s, const QpDmpModel& m, double phi,
                   const Eigen::Vector3d& omega, double phase_omega,
                   double dt) {
  if (!(dt > 0.0) || dt * phase_omega > kMaxPhaseStep) {
    throw StepTooLarge("QP-DMP step needs 0 < dt * Omega <= " +
                       std::to_string(kMaxPhaseStep));
  }
  const TangentVector rotation = dt / 2.0 * omega.cwiseProduct(s.eta);
  if (!(rotation.norm() < std::numbers::pi)) {
    throw DomainError("QP-DMP step leaves the exponential-map domain");
  }
  const Eigen::Vector3d to_goal = 2.0 * log_map(m.goal, s.q);
  const Eigen::Vector3d deta = omega.cwiseProduct(
      m.alpha_z * (m.beta_z * to_goal - s.eta) + forcing_q(phi, m));

  QpDmpState next;
  next.q = exp_map(rotation, s.q);
  next.eta = s.eta + dt * deta;
  next.phi = wrap_phase(phi + phase_omega * dt);
  return next;
}

}  // namespace

QpDmpState step(const QpDmpState& state, const QpDmpModel& model, double dt) {
  return advance(state, model, state.phi, model.omega, model.phase_frequency,
                 dt);
}

QpDmpState step_driven(const QpDmpState& state, const QpDmpModel& model,
                       double phi, double omega, double dt) {
  if (!(omega > 0.0)) throw DomainError("driving frequency must be positive");
  return advance(state, model, phi,
                 model.omega * (omega / model.phase_frequency), omega, dt);
}

QpDmpState start_state(const QpDmpModel& model, const QuatTrajectory& raw_demo,
                       const TangentVector& perturbation, Boundary boundary) {
  const QuatTrajectory demo = boundary == Boundary::kCircular
                                  ? drop_closing_sample(raw_demo)
                                  : raw_demo;
  const OmegaTrajectory rates = angular_velocity(demo, boundary);
  QpDmpState s;
  s.q = exp_map(perturbation, demo[0]);
  s.eta = rates.omega.front().cwiseQuotient(model.omega);
  s.phi = 0.0;
  return s;
}

QpDmpState start_state(const QpDmpModel& model,
                       const TangentVector& perturbation) {
  QpDmpState s = model.initial;
  s.q = exp_map(perturbation, s.q);
  return s;
}

std::vector<RolloutSample> rollout(const QpDmpModel& model,
                                   const QpDmpState& initial, double dt,
                                   std::size_t steps) {
  std::vector<RolloutSample> out;
  out.reserve(steps + 1);
  QpDmpState s = initial;
  out.push_back({0.0, s.phi, s.q});
  for (std::size_t k = 1; k <= steps; ++k) {
    s = step(s, model, dt);
    out.push_back({double(k) * dt, s.phi, s.q});
  }
  return out;
}

}  // namespace pdmp::qp
