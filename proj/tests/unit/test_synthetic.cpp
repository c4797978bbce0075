#include <gtest/gtest.h>

#include <numbers>

#include "pdmp/error.hpp"
#include "pdmp/synthetic.hpp"

namespace pdmp {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Synthetic, ZeroAmplitudeIsConstant) {
  SyntheticDemo spec;
  spec.center = UnitQuaternion::normalized(0.3, 0.1, 0.9, -0.2);
  spec.harmonics = {{1, Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()}};
  const auto demo = generate_demo(spec);
  for (const auto& q : demo.samples()) EXPECT_EQ(q, spec.center);
}

TEST(Synthetic, SingleSinusoidExcursion) {
  SyntheticDemo spec;
  spec.center = UnitQuaternion::normalized(0.3, 0.1, 0.9, -0.2);
  spec.harmonics = {{1, {0.3, 0.0, 0.0}, Eigen::Vector3d::Zero()}};
  const auto demo = generate_demo(spec);
  double max_dist = 0.0;
  for (const auto& q : demo.samples()) {
    max_dist = std::max(max_dist, geodesic_distance(q, spec.center));
  }
  EXPECT_NEAR(max_dist, 0.3, 1e-9);
}

TEST(Synthetic, WholePeriodsWithoutClosingSample) {
  SyntheticDemo spec = default_synthetic_demo();
  spec.dt = 0.0013;
  spec.cycles = 3;
  const auto demo = generate_demo(spec);
  const double period = 2 * kPi / spec.frequency;
  EXPECT_EQ(demo.size() % 3, 0u);
  EXPECT_NEAR(demo.dt() * static_cast<double>(demo.size()), 3 * period, 1e-12);
  EXPECT_NEAR(demo.dt(), spec.dt, spec.dt * 0.01);
}

TEST(Synthetic, NoiseIsSeeded) {
  SyntheticDemo spec = default_synthetic_demo();
  spec.noise = 0.01;
  spec.seed = 42;
  const auto a = generate_demo(spec);
  const auto b = generate_demo(spec);
  spec.seed = 43;
  const auto c = generate_demo(spec);
  EXPECT_EQ(a.samples(), b.samples());
  EXPECT_NE(a.samples(), c.samples());
}

TEST(Synthetic, RejectsBadSpecs) {
  SyntheticDemo spec = default_synthetic_demo();
  spec.harmonics = {{1, {kPi, 0.0, 0.0}, Eigen::Vector3d::Zero()}};
  EXPECT_THROW(generate_demo(spec), DomainError);
  spec = default_synthetic_demo();
  spec.harmonics[0].multiple = 0;
  EXPECT_THROW(generate_demo(spec), DomainError);
  spec = default_synthetic_demo();
  spec.dt = -1.0;
  EXPECT_THROW(generate_demo(spec), DomainError);
  spec = default_synthetic_demo();
  spec.noise = -0.1;
  EXPECT_THROW(generate_demo(spec), DomainError);
}

}  // namespace
}  // namespace pdmp
