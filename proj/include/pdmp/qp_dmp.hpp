#pragma once

#include <Eigen/Core>
#include <vector>

#include "pdmp/evaluation.hpp"
#include "pdmp/periodic_dmp.hpp"
#include "pdmp/quat.hpp"
#include "pdmp/training.hpp"

namespace pdmp::qp {

struct QpDmpState {
  UnitQuaternion q;
  /// Scaled angular velocity; the body rate is Omega * eta.
  Eigen::Vector3d eta = Eigen::Vector3d::Zero();
  double phi = 0.0;
};

/// Quaternion periodic DMP acting directly on S^3:
///   eta' = Omega (alpha_z (beta_z 2 Log(g * conj(q)) - eta) + f(phi))
///   q(t + dt) = Exp(dt/2 Omega eta) * q(t)
///   f(phi) = A_r sum_i w_i Psi_i / sum_i Psi_i
/// Omega and A_r are diagonal and stored as their diagonals. The kernel
/// phase advances with the scalar `phase_frequency`.
struct QpDmpModel {
  KernelBasis basis;
  Eigen::MatrixXd weights;  // 3 x N
  double alpha_z = 48.0;
  double beta_z = 12.0;
  UnitQuaternion goal;
  Eigen::Vector3d omega = Eigen::Vector3d::Ones();
  double phase_frequency = 1.0;
  Eigen::Vector3d amplitude = Eigen::Vector3d::Ones();
  /// Phase-0 state on the demonstrated cycle, set by train().
  QpDmpState initial;

  /// Zero weights, Omega = omega * I, A_r = I.
  static QpDmpModel make(const DmpConfig& config, double omega,
                         const UnitQuaternion& goal);

  void validate() const;
};

Eigen::Vector3d forcing_q(double phi, const QpDmpModel& model);

/// Per-sample forcing targets (samples x 3) for a demonstration, using the
/// model's goal, Omega, A_r and gains:
///   f = A_r^-1 (Omega^-1 eta' - alpha_z (beta_z 2 Log(g * conj(q)) - eta))
/// with eta = Omega^-1 omega and omega from angular_velocity().
Eigen::MatrixXd compute_targets(const QuatTrajectory& demo,
                                const QpDmpModel& model,
                                Boundary boundary = Boundary::kCircular);

/// Goal from config (Karcher mean by default, identity for kIdentity and
/// kZero), then weights fitted to compute_targets().
QpDmpModel train(const QuatTrajectory& demo, const TrainConfig& config = {});

/// Explicit Euler on eta and exponential-map update of q, both from the
/// pre-step state. q is never renormalized.
/// Throws StepTooLarge for dt <= 0 or dt * phase_frequency > kMaxPhaseStep,
/// DomainError when ||dt/2 Omega eta|| >= pi.
QpDmpState step(const QpDmpState& state, const QpDmpModel& model, double dt);

/// Phase from outside; Omega is rescaled by omega / phase_frequency.
QpDmpState step_driven(const QpDmpState& state, const QpDmpModel& model,
                       double phi, double omega, double dt);

/// Phase-0 state on the demonstrated cycle, optionally rotated by
/// Exp(perturbation).
QpDmpState start_state(const QpDmpModel& model, const QuatTrajectory& demo,
                       const TangentVector& perturbation = TangentVector::Zero(),
                       Boundary boundary = Boundary::kCircular);

/// `initial` with its orientation rotated by Exp(perturbation).
QpDmpState start_state(const QpDmpModel& model,
                       const TangentVector& perturbation = TangentVector::Zero());

std::vector<RolloutSample> rollout(const QpDmpModel& model,
                                   const QpDmpState& initial, double dt,
                                   std::size_t steps);

}  // namespace pdmp::qp
