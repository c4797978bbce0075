#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>

namespace pdmp {

/// Wraps an angle to [0, 2pi).
double wrap_phase(double phi);

/// N von Mises kernels Psi_i(phi) = exp(h (cos(phi - c_i) - 1)) with centers
/// c_i = 2 pi i / N, i = 0..N-1.
struct KernelBasis {
  Eigen::VectorXd centers;
  double width = 0.0;

  static KernelBasis uniform(int count, double width);

  int size() const { return static_cast<int>(centers.size()); }
  Eigen::VectorXd eval(double phi) const;
  /// Kernel activations divided by their sum.
  Eigen::VectorXd normalized(double phi) const;
  /// Total activation each kernel receives over a set of phases.
  Eigen::VectorXd coverage(std::span<const double> phases) const;
};

/// Hyperparameters shared by all periodic DMP flavours.
struct DmpConfig {
  int kernels = 25;
  /// Defaults to 2.5 * kernels.
  std::optional<double> width;
  double alpha_z = 48.0;
  /// Defaults to alpha_z / 4 (critical damping).
  std::optional<double> beta_z;

  double resolved_width() const { return width.value_or(2.5 * kernels); }
  double resolved_beta() const { return beta_z.value_or(alpha_z / 4.0); }
};

/// Classical periodic DMP over D independent degrees of freedom:
///   z' = Omega (alpha_z (beta_z (g - y) - z) + f(phi))
///   y' = Omega z
///   phi' = Omega
/// with f(phi) = sum_i Psi_i w_i / sum_i Psi_i * r.
struct PeriodicDmpModel {
  Eigen::MatrixXd weights;  // D x N
  KernelBasis basis;
  double alpha_z = 48.0;
  double beta_z = 12.0;
  Eigen::VectorXd goal;       // D
  double omega = 1.0;         // rad/s
  Eigen::VectorXd amplitude;  // D, r

  /// Zero weights, zero goal, unit amplitude.
  static PeriodicDmpModel make(int dofs, const DmpConfig& config,
                               double omega);

  int dofs() const { return static_cast<int>(weights.rows()); }
  /// Throws DomainError if any invariant is broken.
  void validate() const;
};

struct DmpState {
  Eigen::VectorXd y;
  Eigen::VectorXd z;
  double phi = 0.0;
};

enum class FitMethod {
  /// Global least squares of the normalized-kernel expansion against the
  /// targets.
  kLeastSquares,
  /// Per-kernel locally weighted average w_i = sum Psi_i f / (r sum Psi_i).
  kLocallyWeighted,
};

enum class Integrator { kEuler, kRk4 };

/// Smallest total activation a kernel may receive during fitting.
inline constexpr double kMinCoverage = 1e-6;

Eigen::VectorXd kernel_eval(double phi, const PeriodicDmpModel& model);

/// Normalized kernel expansion scaled element-wise by the amplitude.
Eigen::VectorXd forcing(double phi, const PeriodicDmpModel& model);

/// Fits D x N weights to T x D targets sampled at `phases`, dividing the
/// targets by `amplitude` first. Throws InsufficientCoverage when a kernel
/// receives less than kMinCoverage total activation.
Eigen::MatrixXd fit_weights(const KernelBasis& basis,
                            std::span<const double> phases,
                            const Eigen::MatrixXd& targets,
                            const Eigen::VectorXd& amplitude,
                            FitMethod method = FitMethod::kLeastSquares);

/// Returns `model` with weights fitted by fit_weights.
PeriodicDmpModel learn_batch(std::span<const double> phases,
                             const Eigen::MatrixXd& targets,
                             const PeriodicDmpModel& model,
                             FitMethod method = FitMethod::kLeastSquares);

/// Per-kernel recursive least squares with forgetting factor lambda:
///   P_i <- (P_i - P_i^2 / (lambda / Psi_i + P_i)) / lambda
///   w_i <- w_i + Psi_i P_i (f / r - w_i)
/// With lambda = 1 this converges to the locally weighted fit.
class RecursiveFit {
 public:
  RecursiveFit(KernelBasis basis, Eigen::MatrixXd initial_weights,
               Eigen::VectorXd amplitude, double lambda,
               double initial_covariance = 1e3);
  /// Resumes from an existing per-kernel covariance.
  RecursiveFit(KernelBasis basis, Eigen::MatrixXd initial_weights,
               Eigen::VectorXd amplitude, double lambda,
               Eigen::VectorXd covariance);

  void update(double phi, const Eigen::VectorXd& target);

  const Eigen::MatrixXd& weights() const { return weights_; }
  const Eigen::VectorXd& covariance() const { return p_; }
  const KernelBasis& basis() const { return basis_; }

 private:
  KernelBasis basis_;
  Eigen::MatrixXd weights_;
  Eigen::VectorXd amplitude_;
  Eigen::VectorXd p_;
  double lambda_;
};

/// Exponentially weighted recursive least squares on the normalized kernel
/// features psi = Psi / sum(Psi), all kernels jointly:
///   k = P psi / (lambda + psi^T P psi)
///   w <- w + (f / r - w psi) k^T
///   P <- (P - k psi^T P) / lambda
/// With lambda = 1 this converges to the kLeastSquares batch fit.
class JointRecursiveFit {
 public:
  JointRecursiveFit(KernelBasis basis, Eigen::MatrixXd initial_weights,
                    Eigen::VectorXd amplitude, double lambda,
                    double initial_covariance = 1e3);

  void update(double phi, const Eigen::VectorXd& target);

  const Eigen::MatrixXd& weights() const { return weights_; }
  const Eigen::MatrixXd& covariance() const { return p_; }
  const KernelBasis& basis() const { return basis_; }

 private:
  KernelBasis basis_;
  Eigen::MatrixXd weights_;
  Eigen::VectorXd amplitude_;
  Eigen::MatrixXd p_;
  double lambda_;
};

/// Single-sample functional form of RecursiveFit on a model.
void learn_rls(double phi, const Eigen::VectorXd& target,
               PeriodicDmpModel& model, Eigen::VectorXd& covariance,
               double lambda);

/// Forcing values that make y(t) a solution of the DMP:
///   f = ddy / Omega^2 - alpha_z (beta_z (g - y) - dy / Omega)
/// Inputs and result are (samples x dofs).
Eigen::MatrixXd euclidean_targets(const Eigen::MatrixXd& y,
                                  const Eigen::MatrixXd& dy,
                                  const Eigen::MatrixXd& ddy,
                                  const PeriodicDmpModel& model);

/// Largest dt * Omega accepted by step().
inline constexpr double kMaxPhaseStep = 0.1;

/// Advances one step with the model's own phase oscillator. Throws
/// StepTooLarge when dt * Omega exceeds kMaxPhaseStep or the explicit Euler
/// update of the (y, z) system would be unstable.
DmpState step(const DmpState& state, const PeriodicDmpModel& model, double dt,
              Integrator integrator = Integrator::kEuler);

/// Same dynamics, but phase and frequency come from outside (e.g. an
/// adaptive oscillator). The returned phase is phi + omega * dt, wrapped.
DmpState step_driven(const DmpState& state, const PeriodicDmpModel& model,
                     double phi, double omega, double dt,
                     Integrator integrator = Integrator::kEuler);

}  // namespace pdmp
