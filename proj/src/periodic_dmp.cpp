#include "pdmp/periodic_dmp.hpp"

#include <Eigen/QR>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "pdmp/error.hpp"

namespace pdmp {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double wrap_phase(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

KernelBasis KernelBasis::uniform(int count, double width) {
  if (count < 2) {
    throw DomainError("a periodic basis needs at least 2 kernels");
  }
  if (!(width > 0.0)) {
    throw DomainError("kernel width must be positive");
  }
  KernelBasis b;
  b.width = width;
  b.centers.resize(count);
  for (int i = 0; i < count; ++i) {
    b.centers[i] = kTwoPi * i / count;
  }
  return b;
}

Eigen::VectorXd KernelBasis::eval(double phi) const {
  return (width * ((phi - centers.array()).cos() - 1.0)).exp().matrix();
}

Eigen::VectorXd KernelBasis::normalized(double phi) const {
  const Eigen::VectorXd psi = eval(phi);
  return psi / psi.sum();
}

Eigen::VectorXd KernelBasis::coverage(std::span<const double> phases) const {
  Eigen::VectorXd total = Eigen::VectorXd::Zero(size());
  for (double phi : phases) total += eval(phi);
  return total;
}

PeriodicDmpModel PeriodicDmpModel::make(int dofs, const DmpConfig& config,
                                        double omega) {
  PeriodicDmpModel m;
  m.basis = KernelBasis::uniform(config.kernels, config.resolved_width());
  m.weights = Eigen::MatrixXd::Zero(dofs, config.kernels);
  m.alpha_z = config.alpha_z;
  m.beta_z = config.resolved_beta();
  m.goal = Eigen::VectorXd::Zero(dofs);
  m.omega = omega;
  m.amplitude = Eigen::VectorXd::Ones(dofs);
  m.validate();
  return m;
}

void PeriodicDmpModel::validate() const {
  if (basis.size() < 2) throw DomainError("model needs at least 2 kernels");
  if (weights.cols() != basis.size()) {
    throw DomainError("weight matrix does not match the kernel count");
  }
  if (goal.size() != weights.rows() || amplitude.size() != weights.rows()) {
    throw DomainError("goal / amplitude size does not match the DoF count");
  }
  if (!(alpha_z > 0.0) || !(beta_z > 0.0)) {
    throw DomainError("alpha_z and beta_z must be positive");
  }
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError("frequency must be positive and finite");
  }
  if (!weights.allFinite() || !goal.allFinite() || !amplitude.allFinite()) {
    throw DomainError("model contains non-finite values");
  }
}

Eigen::VectorXd kernel_eval(double phi, const PeriodicDmpModel& model) {
  return model.basis.eval(phi);
}

Eigen::VectorXd forcing(double phi, const PeriodicDmpModel& model) {
  return (model.weights * model.basis.normalized(phi))
      .cwiseProduct(model.amplitude);
}

Eigen::MatrixXd fit_weights(const KernelBasis& basis,
                            std::span<const double> phases,
                            const Eigen::MatrixXd& targets,
                            const Eigen::VectorXd& amplitude,
                            FitMethod method) {
  const auto n_samples = static_cast<Eigen::Index>(phases.size());
  if (targets.rows() != n_samples || targets.cols() != amplitude.size()) {
    throw DomainError("targets must be (samples x dofs)");
  }
  const Eigen::VectorXd cover = basis.coverage(phases);
  for (int i = 0; i < basis.size(); ++i) {
    if (cover[i] < kMinCoverage) {
      throw InsufficientCoverage("kernel " + std::to_string(i) +
                                 " has total activation " +
                                 std::to_string(cover[i]));
    }
  }

  Eigen::MatrixXd scaled = targets;
  for (Eigen::Index d = 0; d < scaled.cols(); ++d) {
    scaled.col(d) /= amplitude[d];
  }

  Eigen::MatrixXd psi(n_samples, basis.size());
  for (Eigen::Index t = 0; t < n_samples; ++t) {
    psi.row(t) = basis.eval(phases[t]).transpose();
  }

  if (method == FitMethod::kLocallyWeighted) {
    // (N x T) * (T x D), each kernel row divided by its activation.
    Eigen::MatrixXd w = psi.transpose() * scaled;
    for (int i = 0; i < basis.size(); ++i) w.row(i) /= cover[i];
    return w.transpose();
  }

  for (Eigen::Index t = 0; t < n_samples; ++t) {
    psi.row(t) /= psi.row(t).sum();
  }
  return psi.colPivHouseholderQr().solve(scaled).transpose();
}

PeriodicDmpModel learn_batch(std::span<const double> phases,
                             const Eigen::MatrixXd& targets,
                             const PeriodicDmpModel& model,
                             FitMethod method) {
  PeriodicDmpModel out = model;
  out.weights =
      fit_weights(model.basis, phases, targets, model.amplitude, method);
  return out;
}

RecursiveFit::RecursiveFit(KernelBasis basis, Eigen::MatrixXd initial_weights,
                           Eigen::VectorXd amplitude, double lambda,
                           double initial_covariance)
    : RecursiveFit(basis, std::move(initial_weights), std::move(amplitude),
                   lambda,
                   Eigen::VectorXd::Constant(basis.size(), initial_covariance)) {}

RecursiveFit::RecursiveFit(KernelBasis basis, Eigen::MatrixXd initial_weights,
                           Eigen::VectorXd amplitude, double lambda,
                           Eigen::VectorXd covariance)
    : basis_(std::move(basis)),
      weights_(std::move(initial_weights)),
      amplitude_(std::move(amplitude)),
      p_(std::move(covariance)),
      lambda_(lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw DomainError("forgetting factor must lie in (0, 1]");
  }
  if (p_.size() != basis_.size() || !(p_.minCoeff() > 0.0)) {
    throw DomainError("covariance must be positive, one entry per kernel");
  }
  if (weights_.cols() != basis_.size() ||
      weights_.rows() != amplitude_.size()) {
    throw DomainError("initial weights do not match basis / amplitude");
  }
}

void RecursiveFit::update(double phi, const Eigen::VectorXd& target) {
  const Eigen::VectorXd psi = basis_.eval(phi);
  const Eigen::VectorXd scaled = target.cwiseQuotient(amplitude_);
  for (int i = 0; i < basis_.size(); ++i) {
    double& p = p_[i];
    if (psi[i] > 0.0) {
      p = (p - p * p / (lambda_ / psi[i] + p)) / lambda_;
      weights_.col(i) += psi[i] * p * (scaled - weights_.col(i));
    } else {
      p /= lambda_;
    }
  }
}

JointRecursiveFit::JointRecursiveFit(KernelBasis basis,
                                     Eigen::MatrixXd initial_weights,
                                     Eigen::VectorXd amplitude, double lambda,
                                     double initial_covariance)
    : basis_(std::move(basis)),
      weights_(std::move(initial_weights)),
      amplitude_(std::move(amplitude)),
      p_(Eigen::MatrixXd::Identity(basis_.size(), basis_.size()) *
         initial_covariance),
      lambda_(lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw DomainError("forgetting factor must lie in (0, 1]");
  }
  if (!(initial_covariance > 0.0)) {
    throw DomainError("initial covariance must be positive");
  }
  if (weights_.cols() != basis_.size() ||
      weights_.rows() != amplitude_.size()) {
    throw DomainError("initial weights do not match basis / amplitude");
  }
}

void JointRecursiveFit::update(double phi, const Eigen::VectorXd& target) {
  const Eigen::VectorXd psi = basis_.normalized(phi);
  const Eigen::VectorXd p_psi = p_ * psi;
  const Eigen::VectorXd gain = p_psi / (lambda_ + psi.dot(p_psi));
  const Eigen::VectorXd error =
      target.cwiseQuotient(amplitude_) - weights_ * psi;
  weights_.noalias() += error * gain.transpose();
  p_.noalias() -= gain * p_psi.transpose();
  p_ /= lambda_;
  // Keep P symmetric against rounding drift.
  p_ = 0.5 * (p_ + p_.transpose()).eval();
}

void learn_rls(double phi, const Eigen::VectorXd& target,
               PeriodicDmpModel& model, Eigen::VectorXd& covariance,
               double lambda) {
  RecursiveFit fit(model.basis, model.weights, model.amplitude, lambda,
                   covariance);
  fit.update(phi, target);
  model.weights = fit.weights();
  covariance = fit.covariance();
}

Eigen::MatrixXd euclidean_targets(const Eigen::MatrixXd& y,
                                  const Eigen::MatrixXd& dy,
                                  const Eigen::MatrixXd& ddy,
                                  const PeriodicDmpModel& model) {
  if (y.cols() != model.dofs() || dy.rows() != y.rows() ||
      ddy.rows() != y.rows() || dy.cols() != y.cols() ||
      ddy.cols() != y.cols()) {
    throw DomainError("position / derivative shapes differ");
  }
  const double w = model.omega;
  const Eigen::MatrixXd to_goal = (-y).rowwise() + model.goal.transpose();
  return ddy / (w * w) - model.alpha_z * (model.beta_z * to_goal - dy / w);
}

namespace {

struct Derivative {
  Eigen::VectorXd dy;
  Eigen::VectorXd dz;
};

Derivative dynamics(const Eigen::VectorXd& y, const Eigen::VectorXd& z,
                    double phi, double omega, const PeriodicDmpModel& m) {
  return {omega * z,
          omega * (m.alpha_z * (m.beta_z * (m.goal - y) - z) + forcing(phi, m))};
}

void check_step(const PeriodicDmpModel& m, double omega, double dt,
                Integrator integrator) {
  if (!(dt > 0.0)) throw StepTooLarge("dt must be positive");
  if (dt * omega > kMaxPhaseStep) {
    throw StepTooLarge("dt * Omega = " + std::to_string(dt * omega) +
                       " exceeds " + std::to_string(kMaxPhaseStep));
  }
  if (integrator == Integrator::kEuler) {
    // Poles of s^2 + Omega alpha s + Omega^2 alpha beta must map inside the
    // unit circle under z = 1 + s dt.
    const std::complex<double> disc =
        std::sqrt(std::complex<double>(m.alpha_z * m.alpha_z -
                                       4.0 * m.alpha_z * m.beta_z));
    for (const double sign : {-1.0, 1.0}) {
      const std::complex<double> s = omega * (-m.alpha_z + sign * disc) / 2.0;
      if (std::abs(1.0 + s * dt) >= 1.0) {
        throw StepTooLarge("explicit Euler step is unstable for dt = " +
                           std::to_string(dt));
      }
    }
  }
}

DmpState advance(const DmpState& s, const PeriodicDmpModel& m, double phi,
                 double omega, double dt, Integrator integrator) {
  check_step(m, omega, dt, integrator);
  if (s.y.size() != m.dofs() || s.z.size() != m.dofs()) {
    throw DomainError("state dimension does not match the model");
  }
  DmpState out;
  out.phi = wrap_phase(phi + omega * dt);
  if (integrator == Integrator::kEuler) {
    const Derivative k = dynamics(s.y, s.z, phi, omega, m);
    out.y = s.y + dt * k.dy;
    out.z = s.z + dt * k.dz;
    return out;
  }
  const double h = dt / 2.0;
  const Derivative k1 = dynamics(s.y, s.z, phi, omega, m);
  const Derivative k2 = dynamics(s.y + h * k1.dy, s.z + h * k1.dz,
                                 phi + omega * h, omega, m);
  const Derivative k3 = dynamics(s.y + h * k2.dy, s.z + h * k2.dz,
                                 phi + omega * h, omega, m);
  const Derivative k4 = dynamics(s.y + dt * k3.dy, s.z + dt * k3.dz,
                                 phi + omega * dt, omega, m);
  out.y = s.y + dt / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
  out.z = s.z + dt / 6.0 * (k1.dz + 2.0 * k2.dz + 2.0 * k3.dz + k4.dz);
  return out;
}

}  // namespace

DmpState step(const DmpState& state, const PeriodicDmpModel& model, double dt,
              Integrator integrator) {
  return advance(state, model, state.phi, model.omega, dt, integrator);
}

DmpState step_driven(const DmpState& state, const PeriodicDmpModel& model,
                     double phi, double omega, double dt,
                     Integrator integrator) {
  if (!(omega > 0.0)) throw DomainError("driving frequency must be positive");
  return advance(state, model, phi, omega, dt, integrator);
}

}  // namespace pdmp
