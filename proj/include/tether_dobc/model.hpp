#pragma once

#include <limits>

#include <Eigen/Dense>

namespace tether_dobc {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// World frame: e3 points along gravity (z down). Thrust acts along -e3 of the
// body frame, so a hovering vehicle commands a force of -m*g*e3.
inline Vec3 e3() { return Vec3::UnitZ(); }

/// Roll, pitch, yaw [rad].
struct Attitude {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};

struct VehicleParams {
  double mass = 1.0;       // [kg]
  double gravity = 9.81;   // [m/s^2]
  Vec3 attachment = Vec3::Zero();  // cable attachment, body frame [m]

  void validate() const;
};

/// Elastic tether fixed at `anchor`, optionally held by a threshold release
/// mechanism. `released` only ever goes false -> true within a run.
struct TetherConfig {
  double stiffness = 0.0;       // K [N/m]
  double natural_length = 1.0;  // l0 [m]
  Vec3 anchor = Vec3::Zero();   // p0, world frame [m]
  double release_force = std::numeric_limits<double>::infinity();  // [N]
  double residual_weight = 0.0;  // vertical load added to d after release [N]
  bool released = false;

  /// Stiffness acting on the vehicle: zero once the mechanism has released.
  double effective_stiffness() const { return released ? 0.0 : stiffness; }
  void validate() const;
};

struct VehicleState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Attitude attitude;
};

struct CableExtension {
  Vec3 delta = Vec3::Zero();
  bool taut = false;
};

/// Body-to-world rotation, yaw-pitch-roll (Z-Y-X) composition.
Mat3 rotation_matrix(const Attitude& att);

/// Attachment point relative to the anchor, world frame.
Vec3 attachment_relative_to_anchor(const VehicleState& state, const VehicleParams& params,
                                   const TetherConfig& tether);

/// Cable extension along the anchor-to-attachment direction. Zero when slack
/// and after release, when the freed cable hangs below the vehicle.
CableExtension cable_extension(const VehicleState& state, const VehicleParams& params,
                               const TetherConfig& tether);

/// F_d = -d*e3 - K*delta, with K = 0 after release.
Vec3 disturbance_force(const CableExtension& ext, const TetherConfig& tether, double d);

/// Translational acceleration of the tethered vehicle for a given thrust.
Vec3 translational_accel(const VehicleState& state, double thrust, const TetherConfig& tether,
                         double d, const VehicleParams& params);

}  // namespace tether_dobc
