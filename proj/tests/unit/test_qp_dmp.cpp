#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pdmp/error.hpp"
#include "pdmp/evaluation.hpp"
#include "pdmp/qp_dmp.hpp"
#include "pdmp/rmp_dmp.hpp"
#include "pdmp/synthetic.hpp"

namespace pdmp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * kPi;

const UnitQuaternion kGoal = UnitQuaternion::normalized(0.6, -0.2, 0.5, 0.6);

TrainConfig with_omega(double omega = kTwoPi) {
  TrainConfig c;
  c.omega = omega;
  return c;
}

double steady_error(const qp::QpDmpModel& m, const QuatTrajectory& demo,
                    const qp::QpDmpState& start, double settle_cycles = 3) {
  const double period = kTwoPi / m.phase_frequency;
  const auto steps = static_cast<std::size_t>(
      std::round((settle_cycles + 2) * period / demo.dt()));
  const auto out = qp::rollout(m, start, demo.dt(), steps);
  return max_phase_error(out, CycleReference(demo, m.phase_frequency),
                         settle_cycles * period);
}

TEST(QpDmp, Forcing) {
  qp::QpDmpModel m = qp::QpDmpModel::make({}, kTwoPi, kGoal);
  for (double phi : {0.0, 1.0, 4.0}) {
    EXPECT_EQ(forcing_q(phi, m), Eigen::Vector3d::Zero());
  }
  m.weights.setConstant(0.3);
  m.amplitude = Eigen::Vector3d(2, 1, 1);
  for (double phi : {0.0, 1.0, 4.0}) {
    EXPECT_LT((forcing_q(phi, m) - Eigen::Vector3d(0.6, 0.3, 0.3)).norm(), 1e-14);
  }
}

TEST(QpDmp, Validation) {
  qp::QpDmpModel m = qp::QpDmpModel::make({}, kTwoPi, kGoal);
  EXPECT_EQ(m.amplitude, Eigen::Vector3d::Ones());
  EXPECT_EQ(m.omega, Eigen::Vector3d::Constant(kTwoPi));
  m.amplitude.y() = 0.0;
  EXPECT_THROW(m.validate(), DomainError);
  m = qp::QpDmpModel::make({}, kTwoPi, kGoal);
  m.omega.z() = -1.0;
  EXPECT_THROW(m.validate(), DomainError);
}

TEST(QpDmp, ConstantDemo) {
  const std::vector<UnitQuaternion> q(300, kGoal);
  std::vector<double> t(300);
  for (int k = 0; k < 300; ++k) t[k] = k * 1e-2;
  const auto demo = QuatTrajectory::from_samples(t, q);
  const auto m = qp::train(demo);
  EXPECT_LT(geodesic_distance(m.goal, kGoal), 1e-12);
  EXPECT_EQ(qp::compute_targets(demo, m).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(m.weights.cwiseAbs().maxCoeff(), 0.0);
  const auto out = qp::rollout(m, qp::start_state(m), 1e-3, 3000);
  for (const auto& s : out) EXPECT_LT(geodesic_distance(s.q, kGoal), 1e-12);
}

TEST(QpDmp, Equilibrium) {
  const qp::QpDmpModel m = qp::QpDmpModel::make({}, kTwoPi, kGoal);
  qp::QpDmpState s{kGoal, Eigen::Vector3d::Zero(), 0.0};
  for (int k = 0; k < 1000; ++k) {
    const auto next = qp::step(s, m, 1e-3);
    EXPECT_EQ(next.q, kGoal);
    EXPECT_EQ(next.eta, Eigen::Vector3d::Zero());
    s = next;
  }
}

TEST(QpDmp, ZeroForcingDecaysToGoal) {
  const qp::QpDmpModel m = qp::QpDmpModel::make({}, kTwoPi, kGoal);
  qp::QpDmpState s{exp_map({0.3, -0.2, 0.3}, kGoal), Eigen::Vector3d::Zero(), 0.0};
  const double dt = 1e-4;
  const double horizon = 10.0 * 4.0 / (m.alpha_z * kTwoPi);
  const int steps = static_cast<int>(std::ceil(horizon / dt));
  double prev = geodesic_distance(s.q, kGoal);
  bool monotone = true;
  for (int k = 0; k < steps; ++k) {
    s = qp::step(s, m, dt);
    const double d = geodesic_distance(s.q, kGoal);
    if (k > steps / 10 && d > prev) monotone = false;
    prev = d;
  }
  EXPECT_TRUE(monotone);
  EXPECT_LT(prev, 1e-6);
  EXPECT_LT(s.eta.norm(), 1e-4);
}

TEST(QpDmp, NormPreservedWithoutRenormalization) {
  const auto demo = generate_demo(default_synthetic_demo());
  const auto m = qp::train(demo, with_omega());
  qp::QpDmpState s = qp::start_state(m);
  double drift = 0.0;
  for (int k = 0; k < 100000; ++k) {
    s = qp::step(s, m, 1e-3);
    drift = std::max(drift, std::abs(s.q.norm() - 1.0));
  }
  EXPECT_LT(drift, 1e-9);
}

TEST(QpDmp, TargetsRecoverModelForcing) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 15.0);
  DmpConfig config;
  qp::QpDmpModel m = qp::QpDmpModel::make(config, kTwoPi, kGoal);
  for (int i = 0; i < m.weights.rows(); ++i) {
    for (int j = 0; j < m.weights.cols(); ++j) m.weights(i, j) = gauss(rng);
  }
  m.amplitude = Eigen::Vector3d(1.0, 2.0, 0.5);
  // Settle onto the limit cycle, then record exactly one period.
  const int per_period = 10000;
  const double dt = 1.0 / per_period;
  qp::QpDmpState s{kGoal, Eigen::Vector3d::Zero(), 0.0};
  for (int k = 0; k < 5 * per_period; ++k) s = qp::step(s, m, dt);
  std::vector<double> t(per_period);
  std::vector<UnitQuaternion> q(per_period);
  std::vector<double> phases(per_period);
  for (int k = 0; k < per_period; ++k) {
    t[k] = k * dt;
    q[k] = s.q;
    phases[k] = s.phi;
    s = qp::step(s, m, dt);
  }
  const auto cycle = QuatTrajectory::from_samples(t, q);
  const Eigen::MatrixXd f = qp::compute_targets(cycle, m);
  double err = 0.0;
  double peak = 0.0;
  for (int k = 0; k < per_period; ++k) {
    const Eigen::Vector3d expected =
        forcing_q(phases[k], m).cwiseQuotient(m.amplitude);
    err = std::max(err, (f.row(k).transpose() - expected).cwiseAbs().maxCoeff());
    peak = std::max(peak, expected.cwiseAbs().maxCoeff());
  }
  EXPECT_GT(peak, 10.0);
  // Central differences of the Euler rollout lag by half a step, so the
  // agreement is relative to the forcing scale.
  EXPECT_LT(err, 1e-3 * peak);
}

TEST(QpDmp, ReproducesDemo) {
  const auto demo = generate_demo(default_synthetic_demo());
  const auto m = qp::train(demo, with_omega());
  EXPECT_LT(steady_error(m, demo, qp::start_state(m)), 0.02);
  const auto r = rmp::train(demo, with_omega());
  const auto a = qp::rollout(m, qp::start_state(m), demo.dt(), 5000);
  const auto b = rmp::rollout(r, rmp::start_state(r), demo.dt(), 5000);
  EXPECT_LT(max_rollout_difference(a, b, 3.0), 0.05);
}

TEST(QpDmp, StartStateMatchesDemo) {
  const auto demo = generate_demo(default_synthetic_demo());
  const auto m = qp::train(demo, with_omega());
  EXPECT_LT(geodesic_distance(m.initial.q, demo[0]), 1e-12);
  const auto s = qp::start_state(m, demo);
  EXPECT_LT(geodesic_distance(s.q, m.initial.q), 1e-12);
  EXPECT_LT((s.eta - m.initial.eta).norm(), 1e-9);
  const auto p = qp::start_state(m, TangentVector(0.3, 0.0, 0.0));
  EXPECT_NEAR(geodesic_distance(p.q, m.initial.q), 0.3, 1e-12);
}

TEST(QpDmp, GoalChoiceConvergesToSameCycle) {
  const auto demo = generate_demo(default_synthetic_demo());
  TrainConfig ident = with_omega();
  ident.goal = GoalChoice::kIdentity;
  const auto a = qp::train(demo, with_omega());
  const auto b = qp::train(demo, ident);
  EXPECT_EQ(b.goal, UnitQuaternion::identity());
  const auto ra = qp::rollout(a, qp::start_state(a), demo.dt(), 5000);
  const auto rb = qp::rollout(b, qp::start_state(b), demo.dt(), 5000);
  EXPECT_LT(max_rollout_difference(ra, rb, 3.0), 0.05);
}

TEST(QpDmp, LimitCycleAttracts) {
  const auto demo = generate_demo(default_synthetic_demo());
  const auto m = qp::train(demo, with_omega());
  qp::QpDmpState a = qp::start_state(m, TangentVector(0.2, 0.1, -0.1));
  qp::QpDmpState b = qp::start_state(m, TangentVector(-0.1, 0.3, 0.0));
  b.eta += Eigen::Vector3d(0.5, -0.2, 0.1);
  const auto ra = qp::rollout(m, a, demo.dt(), 6000);
  const auto rb = qp::rollout(m, b, demo.dt(), 6000);
  EXPECT_LT(max_rollout_difference(ra, rb, 5.0), 1e-3);
}

TEST(QpDmp, SmallAnglesAgreeWithProjection) {
  SyntheticDemo spec;
  spec.center = kGoal;
  spec.harmonics = {{1, {0.02, 0.01, 0.005}, {0.0, 1.0, 2.0}},
                    {2, {0.005, 0.008, 0.004}, {0.5, 0.0, -1.0}}};
  const auto demo = generate_demo(spec);
  double excursion = 0.0;
  const UnitQuaternion mean = karcher_mean(demo.samples());
  for (const auto& q : demo.samples()) {
    excursion = std::max(excursion, geodesic_distance(q, mean));
  }
  ASSERT_LT(excursion, 0.05);
  const auto m = qp::train(demo, with_omega());
  const auto r = rmp::train(demo, with_omega());
  const auto a = qp::rollout(m, qp::start_state(m), demo.dt(), 5000);
  const auto b = rmp::rollout(r, rmp::start_state(r), demo.dt(), 5000);
  EXPECT_LT(max_rollout_difference(a, b, 0.0), 1e-3);
}

TEST(QpDmp, DrivenStepMatchesInternalPhase) {
  const auto demo = generate_demo(default_synthetic_demo());
  const auto m = qp::train(demo, with_omega());
  qp::QpDmpState a = qp::start_state(m);
  qp::QpDmpState b = a;
  for (int k = 0; k < 500; ++k) {
    a = qp::step(a, m, 1e-3);
    b = qp::step_driven(b, m, b.phi, m.phase_frequency, 1e-3);
  }
  EXPECT_LT(geodesic_distance(a.q, b.q), 1e-14);
  EXPECT_LT((a.eta - b.eta).norm(), 1e-10);
}

TEST(QpDmp, StepGuards) {
  const qp::QpDmpModel m = qp::QpDmpModel::make({}, kTwoPi, kGoal);
  qp::QpDmpState s{kGoal, Eigen::Vector3d::Zero(), 0.0};
  EXPECT_THROW(qp::step(s, m, 0.0), StepTooLarge);
  EXPECT_THROW(qp::step(s, m, 0.02), StepTooLarge);
  s.eta = Eigen::Vector3d(1e4, 0.0, 0.0);
  EXPECT_THROW(qp::step(s, m, 1e-3), DomainError);
}

TEST(QpDmp, AntipodalGoalRejected) {
  const auto demo = generate_demo(default_synthetic_demo());
  qp::QpDmpModel m = qp::QpDmpModel::make({}, kTwoPi, kGoal);
  m.goal = -demo[10];
  EXPECT_THROW(qp::compute_targets(demo, m), AntipodalError);
}

}  // namespace
}  // namespace pdmp
