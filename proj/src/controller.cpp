#include "tether_dobc/controller.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tether_dobc/errors.hpp"

namespace tether_dobc {

Eigen::Matrix2d ControllerGains::error_matrix() const {
  Eigen::Matrix2d a;
  a << 0.0, 1.0, -kp, -kd;
  return a;
}

bool ControllerGains::is_hurwitz() const {
  const Eigen::Vector2cd eig = error_matrix().eigenvalues();
  return eig.real().maxCoeff() < 0.0;
}

void ControllerGains::validate() const {
  if (!(kp > 0.0) || !std::isfinite(kp)) throw ConfigError("controller.kp must be > 0");
  if (!(kd > 0.0) || !std::isfinite(kd)) throw ConfigError("controller.kd must be > 0");
}

VirtualInput pd_control(const Vec3& error, const Vec3& error_rate, const Vec3& force_estimate,
                        const ControllerGains& gains, const VehicleParams& params) {
  return {params.mass * (gains.kp * error + gains.kd * error_rate - params.gravity * e3()) -
          force_estimate};
}

ThrustAttitudeCommand allocate(const VirtualInput& nu, double yaw) {
  const Vec3& f = nu.force;
  if (!(f.z() < 0.0)) {
    std::ostringstream msg;
    msg << "allocation: nu_z = " << f.z() << " does not oppose gravity";
    throw AllocationError(msg.str());
  }
  const double thrust = f.norm();
  // Thrust direction -R e3, expressed in the yaw-aligned frame.
  const Vec3 n = -f / thrust;
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double nx = cy * n.x() + sy * n.y();   // cos(roll) sin(pitch)
  const double ny = -sy * n.x() + cy * n.y();  // -sin(roll)
  const double nz = n.z();                      // cos(roll) cos(pitch)

  ThrustAttitudeCommand cmd;
  cmd.thrust = thrust;
  cmd.attitude.pitch = std::atan2(nx, nz);
  cmd.attitude.roll = std::atan2(-ny, std::hypot(nx, nz));
  cmd.attitude.yaw = yaw;
  return cmd;
}

Vec3 realised_force(double thrust, const Attitude& att) {
  return rotation_matrix(att) * Vec3(0.0, 0.0, -thrust);
}

Attitude attitude_step(const Attitude& current, const Attitude& command, double tau, double dt) {
  if (tau <= 0.0) return command;
  const double k = std::min(dt / tau, 1.0);
  return {current.roll + k * (command.roll - current.roll),
          current.pitch + k * (command.pitch - current.pitch),
          current.yaw + k * (command.yaw - current.yaw)};
}

}  // namespace tether_dobc
