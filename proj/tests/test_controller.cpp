#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "tether_dobc/controller.hpp"
#include "tether_dobc/errors.hpp"

using namespace tether_dobc;

namespace {

VehicleParams vehicle(double m) {
  VehicleParams p;
  p.mass = m;
  return p;
}

}  // namespace

TEST(PdControl, HoverCommand) {
  const VirtualInput nu = pd_control(Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), {}, vehicle(1.89));
  EXPECT_LT((nu.force - Vec3(0, 0, -18.5409)).norm(), 1e-12);
}

TEST(PdControl, FeedForwardSubtractsEstimate) {
  const VirtualInput nu =
      pd_control(Vec3::Zero(), Vec3::Zero(), Vec3(0, 0, -2), {}, vehicle(1.89));
  EXPECT_LT((nu.force - Vec3(0, 0, -16.5409)).norm(), 1e-12);
}

TEST(PdControl, ProportionalTerm) {
  const VirtualInput nu =
      pd_control(Vec3(0.1, 0, 0), Vec3::Zero(), Vec3::Zero(), {2.5, 5.0}, vehicle(1.89));
  EXPECT_LT((nu.force - Vec3(0.4725, 0, -18.5409)).norm(), 1e-12);
}

TEST(PdControl, DerivativeTerm) {
  const VirtualInput nu =
      pd_control(Vec3::Zero(), Vec3(0, 0.2, 0), Vec3::Zero(), {2.5, 5.0}, vehicle(2.0));
  EXPECT_LT((nu.force - Vec3(0, 2.0, -19.62)).norm(), 1e-12);
}

TEST(Gains, HurwitzForBothGainSets) {
  for (const ControllerGains g : {ControllerGains{2.5, 5.0}, ControllerGains{0.06, 0.018}}) {
    const Eigen::Vector2cd eig = g.error_matrix().eigenvalues();
    EXPECT_LT(eig.real().maxCoeff(), 0.0);
    EXPECT_TRUE(g.is_hurwitz());
  }
}

TEST(Gains, TableGainsEigenvalues) {
  // s^2 + 5 s + 2.5 = 0
  Eigen::Vector2d eig = ControllerGains{2.5, 5.0}.error_matrix().eigenvalues().real();
  std::sort(eig.begin(), eig.end());
  EXPECT_NEAR(eig[0], (-5.0 - std::sqrt(15.0)) / 2.0, 1e-12);
  EXPECT_NEAR(eig[1], (-5.0 + std::sqrt(15.0)) / 2.0, 1e-12);
}

TEST(Gains, ValidationRejectsNonPositive) {
  EXPECT_THROW((ControllerGains{0.0, 1.0}).validate(), ConfigError);
  EXPECT_THROW((ControllerGains{1.0, -1.0}).validate(), ConfigError);
  EXPECT_NO_THROW((ControllerGains{1.0, 1.0}).validate());
}

TEST(Allocate, PureVertical) {
  for (double yaw : {0.0, 0.7, -2.5}) {
    const ThrustAttitudeCommand cmd = allocate({Vec3(0, 0, -7.0)}, yaw);
    EXPECT_DOUBLE_EQ(cmd.thrust, 7.0);
    EXPECT_NEAR(cmd.attitude.roll, 0.0, 1e-15);
    EXPECT_NEAR(cmd.attitude.pitch, 0.0, 1e-15);
    EXPECT_EQ(cmd.attitude.yaw, yaw);
  }
}

TEST(Allocate, Hover) {
  const ThrustAttitudeCommand cmd = allocate({Vec3(0, 0, -18.5409)}, 0.0);
  EXPECT_NEAR(cmd.thrust, 18.5409, 1e-12);
  EXPECT_NEAR(cmd.attitude.roll, 0.0, 1e-15);
  EXPECT_NEAR(cmd.attitude.pitch, 0.0, 1e-15);
}

TEST(Allocate, TiltedRoundTrip) {
  const Vec3 nu(1, 0, -10);
  const ThrustAttitudeCommand cmd = allocate({nu}, 0.0);
  EXPECT_NEAR(cmd.thrust, nu.norm(), 1e-12);
  EXPECT_LT((realised_force(cmd.thrust, cmd.attitude) - nu).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Allocate, RandomRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> horiz(-20.0, 20.0), vert(-30.0, -0.1),
      yaw(-3.1, 3.1);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 nu(horiz(rng), horiz(rng), vert(rng));
    const ThrustAttitudeCommand cmd = allocate({nu}, yaw(rng));
    ASSERT_LT((realised_force(cmd.thrust, cmd.attitude) - nu).norm(), 1e-9);
    ASSERT_LT(std::abs(cmd.attitude.roll), std::numbers::pi / 2);
    ASSERT_LT(std::abs(cmd.attitude.pitch), std::numbers::pi / 2);
    ASSERT_GE(cmd.thrust, 0.0);
  }
}

TEST(Allocate, RejectsUpwardOrLevelForce) {
  EXPECT_THROW(allocate({Vec3(0, 0, 0)}, 0.0), AllocationError);
  EXPECT_THROW(allocate({Vec3(1, 0, 0.5)}, 0.0), AllocationError);
  EXPECT_THROW(allocate({Vec3(0, 0, std::nan(""))}, 0.0), AllocationError);
}

TEST(AttitudeStep, InstantaneousWhenTauZero) {
  const Attitude cmd{0.1, -0.2, 0.3};
  const Attitude a = attitude_step({}, cmd, 0.0, 0.01);
  EXPECT_EQ(a.roll, cmd.roll);
  EXPECT_EQ(a.pitch, cmd.pitch);
  EXPECT_EQ(a.yaw, cmd.yaw);
}

TEST(AttitudeStep, SingleEulerStep) {
  const Attitude a = attitude_step({}, {0.1, 0.0, 0.0}, 0.1, 0.01);
  EXPECT_NEAR(a.roll, 0.01, 1e-15);
}

TEST(AttitudeStep, ConvergesAfterTenTimeConstants) {
  // The residual after 10 tau is e^-10 of the initial gap, so the 1e-6 bound
  // holds for gaps up to about 0.02 rad.
  const double tau = 0.05, dt = 1e-4;
  const Attitude cmd{0.02, -0.02, 0.02};
  Attitude a;
  for (int k = 0; k < static_cast<int>(std::lround(10 * tau / dt)); ++k)
    a = attitude_step(a, cmd, tau, dt);
  EXPECT_NEAR(a.roll, cmd.roll, 1e-6);
  EXPECT_NEAR(a.pitch, cmd.pitch, 1e-6);
  EXPECT_NEAR(a.yaw, cmd.yaw, 1e-6);
}

TEST(AttitudeStep, LargeStepDoesNotOvershoot) {
  const Attitude a = attitude_step({}, {0.3, 0.0, 0.0}, 0.01, 0.1);
  EXPECT_DOUBLE_EQ(a.roll, 0.3);
}
