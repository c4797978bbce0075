#include "pdmp/training.hpp"

#include <cmath>
#include <numbers>

#include "pdmp/error.hpp"

namespace pdmp {

QuatTrajectory drop_closing_sample(const QuatTrajectory& demo) {
  const std::size_t n = demo.size();
  if (n > 3 && geodesic_distance(demo[n - 1], demo[0]) < 1e-9) {
    std::vector<double> t(demo.timestamps().begin(),
                          demo.timestamps().end() - 1);
    std::vector<UnitQuaternion> q(demo.samples().begin(),
                                  demo.samples().end() - 1);
    return QuatTrajectory::from_samples(std::move(t), std::move(q));
  }
  return demo;
}

std::vector<double> dominant_signal(const QuatTrajectory& demo,
                                    const UnitQuaternion& center) {
  const TangentTrajectory tan = project_to_tangent(demo, center);
  // Coordinate of largest spread, scaled to unit peak so the oscillator
  // gain behaves the same for every demo.
  Eigen::MatrixXd z = stack_rows(tan.zeta);
  z.rowwise() -= z.colwise().mean();
  Eigen::Index axis = 0;
  z.colwise().squaredNorm().maxCoeff(&axis);
  const double peak = z.col(axis).cwiseAbs().maxCoeff();
  if (!(peak > 1e-12)) {
    throw DegenerateInput(
        "cannot estimate the frequency of a constant demonstration; "
        "pass it explicitly");
  }
  std::vector<double> signal(demo.size());
  for (std::size_t i = 0; i < demo.size(); ++i) {
    signal[i] = z(static_cast<Eigen::Index>(i), axis) / peak;
  }
  return signal;
}

double resolve_frequency(const QuatTrajectory& demo,
                         const TrainConfig& config) {
  if (config.omega) {
    if (!(*config.omega > 0.0)) {
      throw DomainError("frequency must be positive");
    }
    return *config.omega;
  }
  const double guess =
      2.0 * std::numbers::pi / (demo.dt() * static_cast<double>(demo.size()));
  std::vector<double> signal;
  try {
    signal = dominant_signal(demo, karcher_mean(demo.samples()));
  } catch (const DegenerateInput&) {
    // A constant demo has no frequency; any value reproduces it.
    return guess;
  }
  return estimate_frequency(signal, demo.dt(), guess, 20, config.oscillator);
}

std::vector<double> demo_phases(const QuatTrajectory& demo, double omega) {
  std::vector<double> phi(demo.size());
  const double t0 = demo.timestamps().front();
  for (std::size_t i = 0; i < demo.size(); ++i) {
    phi[i] = wrap_phase(omega * (demo.timestamps()[i] - t0));
  }
  return phi;
}

Eigen::MatrixXd fit_targets(const KernelBasis& basis,
                            std::span<const double> phases,
                            const Eigen::MatrixXd& targets,
                            const Eigen::VectorXd& amplitude,
                            const TrainConfig& config) {
  if (config.learning == Learning::kBatch) {
    return fit_weights(basis, phases, targets, amplitude, config.fit);
  }
  if (config.rls_passes < 1) {
    throw DomainError("recursive learning needs at least one pass");
  }
  const Eigen::VectorXd cover = basis.coverage(phases);
  if (cover.minCoeff() < kMinCoverage) {
    throw InsufficientCoverage("a kernel receives no activation from the demo");
  }
  const Eigen::MatrixXd w0 = Eigen::MatrixXd::Zero(targets.cols(), basis.size());
  auto stream = [&](auto&& rls) {
    for (int pass = 0; pass < config.rls_passes; ++pass) {
      for (std::size_t t = 0; t < phases.size(); ++t) {
        rls.update(phases[t],
                   targets.row(static_cast<Eigen::Index>(t)).transpose());
      }
    }
    return rls.weights();
  };
  if (config.learning == Learning::kJointRecursive) {
    return stream(JointRecursiveFit(basis, w0, amplitude, config.lambda,
                                    config.rls_initial_covariance));
  }
  return stream(RecursiveFit(basis, w0, amplitude, config.lambda,
                             config.rls_initial_covariance));
}

Eigen::MatrixXd stack_rows(std::span<const Eigen::Vector3d> series) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(series.size()), 3);
  for (std::size_t i = 0; i < series.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = series[i].transpose();
  }
  return m;
}

}  // namespace pdmp
