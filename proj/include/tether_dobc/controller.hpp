#pragma once

#include <Eigen/Dense>

#include "tether_dobc/model.hpp"

namespace tether_dobc {

struct ControllerGains {
  double kp = 2.5;  // [1/s^2]
  double kd = 5.0;  // [1/s]

  /// Per-axis tracking error dynamics [[0, 1], [-kp, -kd]].
  Eigen::Matrix2d error_matrix() const;
  bool is_hurwitz() const;
  void validate() const;
};

/// World-frame force the vehicle should produce.
struct VirtualInput {
  Vec3 force = Vec3::Zero();
};

struct ThrustAttitudeCommand {
  double thrust = 0.0;  // [N]
  Attitude attitude;
};

/// PD tracking law with disturbance feed-forward:
/// nu = m (kp e + kd de - g e3) - F_hat.
VirtualInput pd_control(const Vec3& error, const Vec3& error_rate, const Vec3& force_estimate,
                        const ControllerGains& gains, const VehicleParams& params);

/// Exact inverse of nu = R(roll, pitch, yaw) [0, 0, -T]^T for a given yaw.
/// Throws AllocationError when nu_z >= 0.
ThrustAttitudeCommand allocate(const VirtualInput& nu, double yaw);

/// Forward map of a thrust-attitude command to the world-frame force.
Vec3 realised_force(double thrust, const Attitude& att);

/// First-order lag surrogate for the inner attitude loop. tau = 0 tracks the
/// command instantly.
Attitude attitude_step(const Attitude& current, const Attitude& command, double tau, double dt);

}  // namespace tether_dobc
