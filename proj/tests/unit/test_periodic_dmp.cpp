#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pdmp/error.hpp"
#include "pdmp/periodic_dmp.hpp"

namespace pdmp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * kPi;

std::vector<double> uniform_phases(int n) {
  std::vector<double> phases(n);
  for (int k = 0; k < n; ++k) phases[k] = kTwoPi * k / n;
  return phases;
}

Eigen::MatrixXd sin_targets(const std::vector<double>& phases) {
  Eigen::MatrixXd f(phases.size(), 1);
  for (std::size_t k = 0; k < phases.size(); ++k) f(k, 0) = std::sin(phases[k]);
  return f;
}

double sin_error(const PeriodicDmpModel& m) {
  double err = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double phi = kTwoPi * k / 10000;
    err = std::max(err, std::abs(forcing(phi, m)(0) - std::sin(phi)));
  }
  return err;
}

PeriodicDmpModel one_dof(int kernels = 25, std::optional<double> width = {}) {
  DmpConfig c;
  c.kernels = kernels;
  c.width = width;
  return PeriodicDmpModel::make(1, c, kTwoPi);
}

TEST(Kernels, PeakAndTrough) {
  const auto b = KernelBasis::uniform(25, 62.5);
  EXPECT_EQ(b.centers[0], 0.0);
  EXPECT_NEAR(b.centers[1], kTwoPi / 25, 1e-15);
  for (int i = 0; i < 25; ++i) {
    const Eigen::VectorXd psi = b.eval(b.centers[i]);
    EXPECT_EQ(psi[i], 1.0);
    EXPECT_GT(psi.minCoeff(), 0.0);
    EXPECT_LE(psi.maxCoeff(), 1.0);
  }
  const auto wide = KernelBasis::uniform(4, 5.0);
  EXPECT_NEAR(wide.eval(wide.centers[1] + kPi)[1], std::exp(-10.0), 1e-15);
}

TEST(Kernels, Periodic) {
  const auto b = KernelBasis::uniform(25, 62.5);
  for (double phi : {0.0, 0.3, 2.0, 5.9}) {
    const Eigen::VectorXd a = b.eval(phi);
    const Eigen::VectorXd c = b.eval(phi + kTwoPi);
    EXPECT_LT((a - c).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Kernels, RejectBadBasis) {
  EXPECT_THROW(KernelBasis::uniform(1, 1.0), DomainError);
  EXPECT_THROW(KernelBasis::uniform(5, 0.0), DomainError);
}

TEST(Forcing, ZeroAndEqualWeights) {
  PeriodicDmpModel m = one_dof();
  for (double phi : uniform_phases(97)) EXPECT_EQ(forcing(phi, m)(0), 0.0);
  m.weights.setConstant(0.7);
  m.amplitude(0) = 2.0;
  // Partition of unity: equal weights give a constant.
  for (double phi : uniform_phases(97)) {
    EXPECT_NEAR(forcing(phi, m)(0), 1.4, 1e-14);
  }
}

TEST(Forcing, SinFitWithNarrowKernels) {
  const auto phases = uniform_phases(1000);
  const PeriodicDmpModel m =
      learn_batch(phases, sin_targets(phases), one_dof(25, 25.0));
  EXPECT_LT(sin_error(m), 1e-3);
}

TEST(LearnBatch, ConstantTarget) {
  const auto phases = uniform_phases(500);
  PeriodicDmpModel m = one_dof();
  m.amplitude(0) = 4.0;
  const Eigen::MatrixXd f = Eigen::MatrixXd::Constant(500, 1, 3.0);
  for (auto method : {FitMethod::kLeastSquares, FitMethod::kLocallyWeighted}) {
    const auto fitted = learn_batch(phases, f, m, method);
    EXPECT_LT((fitted.weights.array() - 0.75).abs().maxCoeff(), 1e-9);
  }
}

TEST(LearnBatch, SinReconstruction) {
  const auto phases = uniform_phases(1000);
  const auto m = learn_batch(phases, sin_targets(phases), one_dof());
  EXPECT_LT(sin_error(m), 1e-2);
}

TEST(LearnBatch, LocallyWeightedClosedForm) {
  const auto phases = uniform_phases(300);
  const Eigen::MatrixXd f = sin_targets(phases);
  const PeriodicDmpModel m = one_dof(8);
  const Eigen::MatrixXd w =
      fit_weights(m.basis, phases, f, m.amplitude, FitMethod::kLocallyWeighted);
  for (int i = 0; i < 8; ++i) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < phases.size(); ++k) {
      const double psi =
          std::exp(m.basis.width * (std::cos(phases[k] - m.basis.centers[i]) - 1));
      num += psi * f(k, 0);
      den += psi;
    }
    EXPECT_NEAR(w(0, i), num / den, 1e-12);
  }
}

TEST(LearnBatch, InsufficientCoverage) {
  const std::vector<double> phases(50, 0.0);
  const Eigen::MatrixXd f = Eigen::MatrixXd::Zero(50, 1);
  EXPECT_THROW(learn_batch(phases, f, one_dof()), InsufficientCoverage);
}

TEST(Rls, InactiveKernelUnchanged) {
  PeriodicDmpModel m = one_dof(4, 1000.0);
  m.weights.setConstant(0.5);
  Eigen::VectorXd p = Eigen::VectorXd::Constant(4, 1e3);
  learn_rls(0.0, Eigen::VectorXd::Constant(1, 9.0), m, p, 0.994);
  // Kernel 2 sits at pi; its activation underflows to zero.
  EXPECT_EQ(m.weights(0, 2), 0.5);
  EXPECT_EQ(p(2), 1e3 / 0.994);
  EXPECT_NE(m.weights(0, 0), 0.5);
}

TEST(Rls, FixedPointAtPeak) {
  PeriodicDmpModel m = one_dof();
  m.amplitude(0) = 2.0;
  Eigen::VectorXd p = Eigen::VectorXd::Constant(25, 1e3);
  for (int k = 0; k < 10000; ++k) {
    learn_rls(m.basis.centers[3], Eigen::VectorXd::Constant(1, 5.0), m, p, 1.0);
  }
  EXPECT_NEAR(m.weights(0, 3), 2.5, 1e-6);
}

TEST(Rls, OnePassMatchesLocallyWeighted) {
  const auto phases = uniform_phases(1000);
  const Eigen::MatrixXd f = sin_targets(phases);
  const PeriodicDmpModel m = one_dof();
  const Eigen::MatrixXd lwr =
      fit_weights(m.basis, phases, f, m.amplitude, FitMethod::kLocallyWeighted);
  RecursiveFit fit(m.basis, m.weights, m.amplitude, 1.0, 1e12);
  for (std::size_t k = 0; k < phases.size(); ++k) {
    fit.update(phases[k], f.row(k).transpose());
  }
  EXPECT_LT((fit.weights() - lwr).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Rls, RepeatedPassesConvergeToLocallyWeighted) {
  const auto phases = uniform_phases(1000);
  const Eigen::MatrixXd f = sin_targets(phases);
  const PeriodicDmpModel m = one_dof();
  const Eigen::MatrixXd lwr =
      fit_weights(m.basis, phases, f, m.amplitude, FitMethod::kLocallyWeighted);
  RecursiveFit fit(m.basis, m.weights, m.amplitude, 1.0);
  for (int pass = 0; pass < 100; ++pass) {
    for (std::size_t k = 0; k < phases.size(); ++k) {
      fit.update(phases[k], f.row(k).transpose());
    }
  }
  EXPECT_LT((fit.weights() - lwr).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Rls, FunctionalFormMatchesClass) {
  const auto phases = uniform_phases(200);
  PeriodicDmpModel m = one_dof();
  Eigen::VectorXd p = Eigen::VectorXd::Constant(25, 1e3);
  RecursiveFit fit(m.basis, m.weights, m.amplitude, 0.994);
  for (double phi : phases) {
    const Eigen::VectorXd f = Eigen::VectorXd::Constant(1, std::cos(3 * phi));
    learn_rls(phi, f, m, p, 0.994);
    fit.update(phi, f);
  }
  EXPECT_EQ(m.weights, fit.weights());
  EXPECT_EQ(p, fit.covariance());
}

TEST(JointRls, StreamingSinWithForgetting) {
  const PeriodicDmpModel m = one_dof();
  const auto phases = uniform_phases(1000);
  const auto batch = learn_batch(phases, sin_targets(phases), m);
  JointRecursiveFit fit(m.basis, m.weights, m.amplitude, 0.994);
  for (int period = 0; period < 5; ++period) {
    for (double phi : phases) {
      fit.update(phi, Eigen::VectorXd::Constant(1, std::sin(phi)));
    }
  }
  PeriodicDmpModel streamed = m;
  streamed.weights = fit.weights();
  const double err = sin_error(streamed);
  EXPECT_LT(err, 1e-2);
  EXPECT_LT(std::abs(err - sin_error(batch)), 5e-3);
}

TEST(JointRls, ConvergesToLeastSquares) {
  const auto phases = uniform_phases(1000);
  const Eigen::MatrixXd f = sin_targets(phases);
  const PeriodicDmpModel m = one_dof();
  const Eigen::MatrixXd ls = fit_weights(m.basis, phases, f, m.amplitude);
  JointRecursiveFit fit(m.basis, m.weights, m.amplitude, 1.0, 1e6);
  for (std::size_t k = 0; k < phases.size(); ++k) {
    fit.update(phases[k], f.row(k).transpose());
  }
  EXPECT_LT((fit.weights() - ls).cwiseAbs().maxCoeff(), 1e-4);
  const Eigen::MatrixXd& p = fit.covariance();
  EXPECT_LT((p - p.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Step, EquilibriumAndPhase) {
  PeriodicDmpModel m = one_dof();
  m.goal(0) = 0.4;
  DmpState s{Eigen::VectorXd::Constant(1, 0.4), Eigen::VectorXd::Zero(1), 0.0};
  const double dt = 1e-3;
  for (int k = 1; k <= 2000; ++k) {
    const DmpState next = step(s, m, dt);
    EXPECT_EQ(next.y, s.y);
    EXPECT_EQ(next.z, s.z);
    // tau * dphi/dt = 1 with tau = 1 / Omega.
    const double advance = wrap_phase(next.phi - s.phi);
    EXPECT_NEAR(advance / m.omega, dt, 1e-15);
    EXPECT_GE(next.phi, 0.0);
    EXPECT_LT(next.phi, kTwoPi);
    s = next;
  }
}

TEST(Step, DecayToGoal) {
  PeriodicDmpModel m = one_dof();
  const double y0 = 0.8;
  DmpState s{Eigen::VectorXd::Constant(1, y0), Eigen::VectorXd::Zero(1), 0.0};
  const double horizon =
      10.0 / (m.omega * std::min(m.alpha_z * m.beta_z, m.alpha_z) / 4.0);
  const double dt = 1e-4;
  for (int k = 0; k < static_cast<int>(std::ceil(horizon / dt)); ++k) {
    s = step(s, m, dt);
  }
  EXPECT_LT(std::abs(s.y(0) - m.goal(0)), 1e-6 * y0);
}

TEST(Step, Rk4DecayMatchesAnalytic) {
  // Critically damped pair: y(t) = y0 (1 + a t) exp(-a t), a = Omega alpha_z / 2.
  PeriodicDmpModel m = one_dof();
  const double a = m.omega * m.alpha_z / 2;
  DmpState s{Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Zero(1), 0.0};
  const double dt = 1e-3;
  for (int k = 1; k <= 100; ++k) {
    s = step(s, m, dt, Integrator::kRk4);
    const double t = k * dt;
    EXPECT_NEAR(s.y(0), (1 + a * t) * std::exp(-a * t), 1e-5);
  }
}

TEST(Step, RejectsLargeSteps) {
  const PeriodicDmpModel m = one_dof();
  const DmpState s{Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1), 0.0};
  EXPECT_THROW(step(s, m, 0.1 / m.omega * 1.01), StepTooLarge);
  EXPECT_THROW(step(s, m, 0.0), StepTooLarge);
  EXPECT_NO_THROW(step(s, m, 1e-3));
  PeriodicDmpModel stiff = m;
  stiff.alpha_z = 400.0;
  stiff.beta_z = 100.0;
  // dt * Omega passes the phase guard but Euler would diverge.
  EXPECT_THROW(step(s, stiff, 0.01), StepTooLarge);
}

struct SinDemo {
  PeriodicDmpModel model;
  std::vector<double> y;
  double dt;
};

SinDemo train_on_sin(std::optional<double> width = {}) {
  const int n = 1000;
  const double dt = 1.0 / n;
  PeriodicDmpModel m = one_dof(25, width);
  Eigen::MatrixXd y(n, 1), dy(n, 1), ddy(n, 1);
  std::vector<double> phases(n);
  std::vector<double> ys(n);
  for (int k = 0; k < n; ++k) {
    const double t = k * dt;
    y(k, 0) = ys[k] = std::sin(kTwoPi * t);
    dy(k, 0) = kTwoPi * std::cos(kTwoPi * t);
    ddy(k, 0) = -kTwoPi * kTwoPi * std::sin(kTwoPi * t);
    phases[k] = wrap_phase(kTwoPi * t);
  }
  m = learn_batch(phases, euclidean_targets(y, dy, ddy, m), m);
  return {m, ys, dt};
}

TEST(Step, ReproducesTrainingSignal) {
  const SinDemo demo = train_on_sin();
  // Settle onto the cycle, then compare one period.
  DmpState s{Eigen::VectorXd::Zero(1),
             Eigen::VectorXd::Constant(1, 1.0), 0.0};
  const int n = static_cast<int>(demo.y.size());
  for (int k = 0; k < 3 * n; ++k) s = step(s, demo.model, demo.dt);
  double sq = 0.0;
  for (int k = 0; k < n; ++k) {
    sq += std::pow(s.y(0) - demo.y[k], 2);
    s = step(s, demo.model, demo.dt);
  }
  EXPECT_LT(std::sqrt(sq / n), 1e-2);
}

TEST(Step, LimitCycleAttracts) {
  const SinDemo demo = train_on_sin();
  DmpState a{Eigen::VectorXd::Constant(1, 2.0), Eigen::VectorXd::Constant(1, -3.0), 0.0};
  DmpState b{Eigen::VectorXd::Constant(1, -1.5), Eigen::VectorXd::Constant(1, 4.0), 0.0};
  const int n = static_cast<int>(demo.y.size());
  for (int k = 0; k < 5 * n; ++k) {
    a = step(a, demo.model, demo.dt);
    b = step(b, demo.model, demo.dt);
  }
  double diff = 0.0;
  for (int k = 0; k < n; ++k) {
    diff = std::max(diff, std::abs(a.y(0) - b.y(0)));
    a = step(a, demo.model, demo.dt);
    b = step(b, demo.model, demo.dt);
  }
  EXPECT_LT(diff, 1e-4 * 1.0);
}

TEST(Step, DrivenMatchesInternalPhase) {
  const SinDemo demo = train_on_sin();
  DmpState a{Eigen::VectorXd::Constant(1, 0.2), Eigen::VectorXd::Zero(1), 0.0};
  DmpState b = a;
  for (int k = 0; k < 500; ++k) {
    a = step(a, demo.model, demo.dt);
    b = step_driven(b, demo.model, b.phi, demo.model.omega, demo.dt);
  }
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.phi, b.phi);
}

TEST(Targets, InvertDynamics) {
  PeriodicDmpModel m = one_dof();
  m.goal(0) = 0.3;
  Eigen::MatrixXd y(1, 1), dy(1, 1), ddy(1, 1);
  y << 0.5;
  dy << 2.0;
  ddy << -4.0;
  const double expected =
      -4.0 / (m.omega * m.omega) - m.alpha_z * (m.beta_z * (0.3 - 0.5) - 2.0 / m.omega);
  EXPECT_NEAR(euclidean_targets(y, dy, ddy, m)(0, 0), expected, 1e-12);
}

TEST(Model, Validation) {
  PeriodicDmpModel m = one_dof();
  m.omega = -1.0;
  EXPECT_THROW(m.validate(), DomainError);
  m = one_dof();
  m.alpha_z = 0.0;
  EXPECT_THROW(m.validate(), DomainError);
  m = one_dof();
  m.weights.resize(1, 3);
  EXPECT_THROW(m.validate(), DomainError);
  DmpConfig c;
  EXPECT_EQ(c.resolved_beta(), 12.0);
  EXPECT_EQ(c.resolved_width(), 62.5);
}

}  // namespace
}  // namespace pdmp
