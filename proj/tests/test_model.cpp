#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "tether_dobc/errors.hpp"
#include "tether_dobc/model.hpp"

using namespace tether_dobc;

namespace {

VehicleState at(const Vec3& p) {
  VehicleState s;
  s.position = p;
  return s;
}

TetherConfig tether(double k, double l0) {
  TetherConfig t;
  t.stiffness = k;
  t.natural_length = l0;
  return t;
}

}  // namespace

TEST(RotationMatrix, ZeroAnglesIsIdentity) {
  EXPECT_TRUE(rotation_matrix({}).isApprox(Mat3::Identity(), 0.0));
}

TEST(RotationMatrix, PureYawMapsE1ToE2) {
  const Mat3 r = rotation_matrix({0.0, 0.0, std::numbers::pi / 2});
  EXPECT_LT((r * Vec3::UnitX() - Vec3::UnitY()).norm(), 1e-15);
}

TEST(RotationMatrix, MixedAnglesOrthonormal) {
  const Mat3 r = rotation_matrix({0.1, -0.2, 0.3});
  EXPECT_LT((r.transpose() * r - Mat3::Identity()).norm(), 1e-12);
  EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
}

TEST(RotationMatrix, MatchesAxisAngleComposition) {
  const Attitude a{0.3, -0.7, 1.9};
  const Mat3 expected = (Eigen::AngleAxisd(a.yaw, Vec3::UnitZ()) *
                         Eigen::AngleAxisd(a.pitch, Vec3::UnitY()) *
                         Eigen::AngleAxisd(a.roll, Vec3::UnitX()))
                            .toRotationMatrix();
  EXPECT_LT((rotation_matrix(a) - expected).norm(), 1e-14);
}

TEST(RotationMatrix, OrthonormalForRandomAttitudes) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int i = 0; i < 1000; ++i) {
    const Mat3 r = rotation_matrix({angle(rng), angle(rng), angle(rng)});
    ASSERT_LT((r.transpose() * r - Mat3::Identity()).norm(), 1e-10);
    ASSERT_LT(std::abs(r.determinant() - 1.0), 1e-10);
  }
}

TEST(CableExtension, AxisAlignedStretch) {
  const CableExtension ext = cable_extension(at({0, 0, -2}), {}, tether(14, 1.4));
  EXPECT_TRUE(ext.taut);
  EXPECT_LT((ext.delta - Vec3(0, 0, -0.6)).norm(), 1e-15);
}

TEST(CableExtension, SlackInsideNaturalLength) {
  const CableExtension ext = cable_extension(at({0, 0, -1}), {}, tether(14, 1.4));
  EXPECT_FALSE(ext.taut);
  EXPECT_EQ(ext.delta, Vec3::Zero());
}

TEST(CableExtension, OffAxisStretch) {
  const CableExtension ext = cable_extension(at({3, 4, 0}), {}, tether(16.5, 1.4));
  EXPECT_LT((ext.delta - Vec3(2.16, 2.88, 0)).norm(), 1e-14);
}

TEST(CableExtension, AtAnchorIsSlack) {
  const CableExtension ext = cable_extension(at(Vec3::Zero()), {}, tether(14, 1.4));
  EXPECT_FALSE(ext.taut);
  EXPECT_TRUE(ext.delta.allFinite());
  EXPECT_EQ(ext.delta, Vec3::Zero());
}

TEST(CableExtension, AttachmentOffsetRotatesWithBody) {
  VehicleParams params;
  params.attachment = Vec3(0, 0, 0.1);
  VehicleState s = at({0, 0, -2});
  s.attitude.roll = std::numbers::pi / 2;  // body z maps to world -y
  const Vec3 rel = attachment_relative_to_anchor(s, params, tether(0, 1));
  EXPECT_LT((rel - Vec3(0, -0.1, -2)).norm(), 1e-15);
}

TEST(CableExtension, ReleasedTetherHasNoExtension) {
  TetherConfig t = tether(14, 1.4);
  t.released = true;
  const CableExtension ext = cable_extension(at({0, 0, -3}), {}, t);
  EXPECT_FALSE(ext.taut);
  EXPECT_EQ(ext.delta, Vec3::Zero());
}

TEST(CableExtension, SlackIffZero) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const TetherConfig t = tether(14, 1.4);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 p(u(rng), u(rng), u(rng));
    const CableExtension ext = cable_extension(at(p), {}, t);
    ASSERT_EQ(ext.taut, !ext.delta.isZero(0.0));
    if (ext.taut) {
      ASSERT_NEAR(ext.delta.norm(), p.norm() - 1.4, 1e-12);
      ASSERT_LT(ext.delta.cross(p).norm(), 1e-12);
      // Restoring force points back toward the anchor.
      ASSERT_LT((-t.stiffness * ext.delta).dot(p), 0.0);
    }
  }
}

TEST(CableExtension, ContinuousAcrossSlackBoundary) {
  const Vec3 dir = Vec3(1, -2, 0.5).normalized();
  const TetherConfig t = tether(14, 1.4);
  for (double eps : {1e-3, 1e-6, 1e-9}) {
    const CableExtension ext = cable_extension(at((1.4 + eps) * dir), {}, t);
    EXPECT_NEAR(ext.delta.norm(), eps, 1e-12);
  }
}

TEST(DisturbanceForce, SlackIsVerticalOnly) {
  const Vec3 f = disturbance_force({}, tether(14, 1.4), 0.7);
  EXPECT_EQ(f, Vec3(0, 0, -0.7));
}

TEST(DisturbanceForce, ReleasedIgnoresStiffness) {
  TetherConfig t = tether(14, 1.4);
  t.released = true;
  const Vec3 f = disturbance_force({Vec3(1, 0, 0), true}, t, 0.0);
  EXPECT_EQ(f, Vec3::Zero());
}

TEST(TranslationalAccel, HoverIsEquilibrium) {
  VehicleParams p;
  p.mass = 1.89;
  const Vec3 a = translational_accel(at({0, 0, -1}), p.mass * p.gravity, tether(0, 1.4), 0.0, p);
  EXPECT_LT(a.norm(), 1e-14);
}

TEST(TranslationalAccel, ZeroThrustFreeFall) {
  VehicleParams p;
  const Vec3 a = translational_accel(at({0, 0, -1}), 0.0, tether(0, 1.4), 0.0, p);
  EXPECT_EQ(a, Vec3(0, 0, p.gravity));
}

TEST(TranslationalAccel, StretchedTetherPullsBack) {
  VehicleParams p;
  p.mass = 1.89;
  const Vec3 a = translational_accel(at({3, 4, 0}), p.mass * p.gravity, tether(16.5, 1.4), 0.0, p);
  const Vec3 expected = -(16.5 / 1.89) * Vec3(2.16, 2.88, 0);
  EXPECT_LT((a - expected).norm(), 1e-12);
}

TEST(TranslationalAccel, BallisticClosedForm) {
  // Slack cable, constant d and thrust: integrate with a fine explicit scheme
  // and compare against the closed-form constant-acceleration solution.
  VehicleParams p;
  p.mass = 0.5;
  const double thrust = 3.0, d = 0.4;
  VehicleState s = at({0.1, 0.2, -0.3});
  s.velocity = Vec3(0.5, -0.2, 0.1);
  s.attitude = {0.05, -0.1, 0.2};
  const Vec3 p0 = s.position, v0 = s.velocity;
  const Vec3 a = translational_accel(s, thrust, tether(0, 100), d, p);
  const Vec3 expected_a = rotation_matrix(s.attitude) * Vec3(0, 0, -thrust) / p.mass +
                          p.gravity * e3() - d * e3() / p.mass;
  EXPECT_LT((a - expected_a).norm(), 1e-14);

  const double dt = 1e-3;
  for (int k = 0; k < 1000; ++k) {
    // Velocity Verlet is exact for constant acceleration.
    const Vec3 acc = translational_accel(s, thrust, tether(0, 100), d, p);
    s.position += dt * s.velocity + 0.5 * dt * dt * acc;
    s.velocity += dt * acc;
  }
  EXPECT_LT((s.position - (p0 + v0 + 0.5 * expected_a)).norm(), 1e-8);
  EXPECT_LT((s.velocity - (v0 + expected_a)).norm(), 1e-8);
}

TEST(Validation, RejectsBadParameters) {
  VehicleParams p;
  p.mass = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p.mass = 1.0;
  p.gravity = -1.0;
  EXPECT_THROW(p.validate(), ConfigError);

  TetherConfig t = tether(-1, 1);
  EXPECT_THROW(t.validate(), ConfigError);
  t = tether(1, 0);
  EXPECT_THROW(t.validate(), ConfigError);
  t = tether(1, 1);
  t.release_force = 0.0;
  EXPECT_THROW(t.validate(), ConfigError);
  t.release_force = std::numeric_limits<double>::infinity();
  EXPECT_NO_THROW(t.validate());
}
