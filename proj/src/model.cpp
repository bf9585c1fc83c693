#include "tether_dobc/model.hpp"

#include <cmath>

#include "tether_dobc/errors.hpp"

namespace tether_dobc {

void VehicleParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw ConfigError("vehicle.mass must be > 0");
  if (!(gravity > 0.0) || !std::isfinite(gravity))
    throw ConfigError("vehicle.gravity must be > 0");
  if (!attachment.allFinite()) throw ConfigError("vehicle.attachment must be finite");
}

void TetherConfig::validate() const {
  if (!(stiffness >= 0.0) || !std::isfinite(stiffness))
    throw ConfigError("tether.stiffness must be >= 0");
  if (!(natural_length > 0.0) || !std::isfinite(natural_length))
    throw ConfigError("tether.natural_length must be > 0");
  if (!(release_force > 0.0)) throw ConfigError("tether.release_force must be > 0");
  if (!anchor.allFinite()) throw ConfigError("tether.anchor must be finite");
  if (!std::isfinite(residual_weight)) throw ConfigError("tether.residual_weight must be finite");
}

Mat3 rotation_matrix(const Attitude& att) {
  const double cr = std::cos(att.roll), sr = std::sin(att.roll);
  const double cp = std::cos(att.pitch), sp = std::sin(att.pitch);
  const double cy = std::cos(att.yaw), sy = std::sin(att.yaw);
  Mat3 r;
  r << cp * cy, sr * sp * cy - cr * sy, cr * sp * cy + sr * sy,
       cp * sy, sr * sp * sy + cr * cy, cr * sp * sy - sr * cy,
       -sp,     sr * cp,                cr * cp;
  return r;
}

Vec3 attachment_relative_to_anchor(const VehicleState& state, const VehicleParams& params,
                                   const TetherConfig& tether) {
  return state.position + rotation_matrix(state.attitude) * params.attachment - tether.anchor;
}

CableExtension cable_extension(const VehicleState& state, const VehicleParams& params,
                               const TetherConfig& tether) {
  if (tether.released) return {};
  const Vec3 rel = attachment_relative_to_anchor(state, params, tether);
  const double length = rel.norm();
  if (length - tether.natural_length <= 0.0) return {};
  return {(length - tether.natural_length) * rel / length, true};
}

Vec3 disturbance_force(const CableExtension& ext, const TetherConfig& tether, double d) {
  return -d * e3() - tether.effective_stiffness() * ext.delta;
}

Vec3 translational_accel(const VehicleState& state, double thrust, const TetherConfig& tether,
                         double d, const VehicleParams& params) {
  const Vec3 thrust_force = rotation_matrix(state.attitude) * Vec3(0.0, 0.0, -thrust);
  const Vec3 f_d = disturbance_force(cable_extension(state, params, tether), tether, d);
  return thrust_force / params.mass + params.gravity * e3() + f_d / params.mass;
}

}  // namespace tether_dobc
