#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <vector>

#include "pdmp/oscillator.hpp"
#include "pdmp/periodic_dmp.hpp"
#include "pdmp/trajectory.hpp"

namespace pdmp {

enum class Learning {
  /// One batch fit over the demonstration (see FitMethod).
  kBatch,
  /// Stream the demonstration through the per-kernel RecursiveFit
  /// `rls_passes` times.
  kRecursive,
  /// Same stream through JointRecursiveFit.
  kJointRecursive,
};

enum class GoalChoice { kMean, kIdentity, kZero };

/// Where the tangent space of the projection DMP is attached.
enum class Anchor { kKarcherMean, kFirstSample };

/// Training options shared by both orientation DMPs.
struct TrainConfig {
  /// Demonstration frequency (rad/s). When unset it is estimated with the
  /// adaptive oscillator.
  std::optional<double> omega;
  DmpConfig dmp;
  Learning learning = Learning::kBatch;
  FitMethod fit = FitMethod::kLeastSquares;
  double lambda = 0.994;
  int rls_passes = 10;
  double rls_initial_covariance = 1e3;
  GoalChoice goal = GoalChoice::kMean;
  Anchor anchor = Anchor::kKarcherMean;
  /// Diagonal of the amplitude modulation (r per DoF, or A_r).
  Eigen::Vector3d amplitude = Eigen::Vector3d::Ones();
  Boundary boundary = Boundary::kCircular;
  OscillatorParams oscillator;
};

/// Drops a final sample that repeats the first one (closed-loop recording),
/// so circular differences see exactly one period.
QuatTrajectory drop_closing_sample(const QuatTrajectory& demo);

/// Mean-removed tangent coordinate (at `center`) with the largest variance,
/// scaled to unit peak. Throws DegenerateInput for a constant demo.
std::vector<double> dominant_signal(const QuatTrajectory& demo,
                                    const UnitQuaternion& center);

/// Frequency of the demonstration: `config.omega`, or an oscillator
/// estimate driven by the demo's dominant tangent coordinate, starting from
/// the guess that the demo is one period long. A constant demo returns that
/// guess unchanged.
double resolve_frequency(const QuatTrajectory& demo, const TrainConfig& config);

/// phi_k = wrap(omega * (t_k - t_0)).
std::vector<double> demo_phases(const QuatTrajectory& demo, double omega);

/// Weights (dofs x N) for `targets` (samples x dofs) using the batch or
/// recursive learner selected in `config`.
Eigen::MatrixXd fit_targets(const KernelBasis& basis,
                            std::span<const double> phases,
                            const Eigen::MatrixXd& targets,
                            const Eigen::VectorXd& amplitude,
                            const TrainConfig& config);

/// Row-stacks a 3-vector series into (samples x 3).
Eigen::MatrixXd stack_rows(std::span<const Eigen::Vector3d> series);

}  // namespace pdmp
