#include "tether_dobc/observers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "tether_dobc/errors.hpp"

namespace tether_dobc {

void RdoConfig::validate() const {
  if (!(c1 > 0.0)) throw ConfigError("rdo.c1 must be > 0");
  if (!(c2 > 0.0)) throw ConfigError("rdo.c2 must be > 0");
  if (!(c3 > 0.0)) throw ConfigError("rdo.c3 must be > 0");
}

ObserverGainRows rdo_gains(const Vec3& delta, const RdoConfig& cfg) {
  const double q = delta.x() * delta.x() + delta.y() * delta.y() + cfg.c3;
  ObserverGainRows rows;
  if (q == 0.0) {
    // Only reachable with c3 = 0 and a vertical (or zero) extension.
    rows.vertical.z() = -cfg.c2;
    return rows;
  }
  rows.stiffness = {-delta.x() * cfg.c1 / q, -delta.y() * cfg.c1 / q, 0.0};
  rows.vertical = {delta.x() * delta.z() * cfg.c2 / q, delta.y() * delta.z() * cfg.c2 / q,
                   -cfg.c2};
  return rows;
}

RdoState rdo_init(const Measurement& meas, const RdoConfig& cfg) {
  RdoState st;
  st.last_velocity = meas.velocity;
  st.last_gains = rdo_gains(meas.extension, cfg);
  return st;
}

RdoState rdo_step(const RdoState& st, const Measurement& meas, const VirtualInput& nu,
                  const RdoConfig& cfg, const VehicleParams& params, double dt) {
  const ObserverGainRows& l = st.last_gains;
  const Vec3 dv = meas.velocity - st.last_velocity;
  const Vec3 drive = nu.force + params.mass * params.gravity * e3();

  RdoState next;
  // Riemann-Stieltjes sum of the previous gains against the velocity increment.
  next.gamma_alpha = st.gamma_alpha + params.mass * l.stiffness.dot(dv);
  next.gamma_beta = st.gamma_beta + params.mass * l.vertical.dot(dv);
  // Forward Euler on the internal variables, evaluated at the previous sample.
  next.alpha = st.alpha + dt * (-cfg.c1 * (st.alpha + st.gamma_alpha) - l.stiffness.dot(drive));
  next.beta = st.beta + dt * (-cfg.c2 * (st.beta + st.gamma_beta) - l.vertical.dot(drive));
  next.last_velocity = meas.velocity;
  next.last_gains = rdo_gains(meas.extension, cfg);
  return next;
}

DisturbanceEstimate rdo_estimate(const RdoState& st, const Vec3& delta) {
  const double k_hat = st.alpha + st.gamma_alpha;
  const double d_hat = st.beta + st.gamma_beta;
  return {k_hat, d_hat, -d_hat * e3() - k_hat * delta};
}

// ---------------------------------------------------------------------------

void DobConfig::validate() const {
  if (!(gain.minCoeff() > 0.0) || !gain.allFinite())
    throw ConfigError("dob.gain must be > 0 on every axis");
}

DobState dob_init(const Measurement& meas, const DobConfig& cfg, const VehicleParams& params) {
  return {-params.mass * cfg.gain.cwiseProduct(meas.velocity), meas.velocity};
}

DisturbanceEstimate dob_estimate(const DobState& st, const Vec3& velocity, const DobConfig& cfg,
                                 const VehicleParams& params) {
  return {std::nullopt, std::nullopt, st.z + params.mass * cfg.gain.cwiseProduct(velocity)};
}

std::pair<DobState, DisturbanceEstimate> dob_step(const DobState& st, const Measurement& meas,
                                                  const VirtualInput& nu, const DobConfig& cfg,
                                                  const VehicleParams& params, double dt) {
  const Vec3& l = cfg.gain;
  const double m = params.mass;
  // z' = -l z - l (m l v + m g e3 + nu), so that F_hat' = l (F_d - F_hat).
  const Vec3 rate = -l.cwiseProduct(st.z) -
                    l.cwiseProduct(m * l.cwiseProduct(st.last_velocity) +
                                   m * params.gravity * e3() + nu.force);
  DobState next{st.z + dt * rate, meas.velocity};
  return {next, dob_estimate(next, meas.velocity, cfg, params)};
}

// ---------------------------------------------------------------------------

Eigen::Matrix<double, 12, 12> eso_state_matrix() {
  Eigen::Matrix<double, 12, 12> a = Eigen::Matrix<double, 12, 12>::Zero();
  a.block<9, 9>(0, 3).setIdentity();
  return a;
}

Eigen::Matrix<double, 6, 12> eso_output_matrix() {
  Eigen::Matrix<double, 6, 12> c = Eigen::Matrix<double, 6, 12>::Zero();
  c.block<6, 6>(0, 0).setIdentity();
  return c;
}

EsoGain eso_gains(const EsoPoles& poles) {
  for (double p : poles) {
    if (!(p < 0.0) || !std::isfinite(p))
      throw ConfigError("eso.poles must be finite and strictly negative, got " +
                        std::to_string(p));
  }
  EsoPoles sorted = poles;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());  // slowest first
  const double position_pole = sorted[0];
  const double a = -sorted[1], b = -sorted[2], c = -sorted[3];

  // Position is also observable through velocity, so it takes the slowest pole.
  // Velocity error drives the (v, f, df) chain with error polynomial
  // s^3 + k1 s^2 + k2 s + k3 built from the three fastest poles.
  const double k1 = a + b + c;
  const double k2 = a * b + a * c + b * c;
  const double k3 = a * b * c;

  EsoGain gain = EsoGain::Zero();
  for (int axis = 0; axis < 3; ++axis) {
    gain(axis, axis) = -position_pole;
    gain(3 + axis, 3 + axis) = k1;
    gain(6 + axis, 3 + axis) = k2;
    gain(9 + axis, 3 + axis) = k3;
  }
  return gain;
}

void EsoConfig::validate() const { (void)eso_gains(poles); }

EsoState eso_init(const Measurement& meas, const EsoConfig& cfg) {
  EsoState st;
  st.z.segment<3>(0) = meas.position;
  st.z.segment<3>(3) = meas.velocity;
  st.gain = eso_gains(cfg.poles);
  return st;
}

DisturbanceEstimate eso_estimate(const EsoState& st, const VehicleParams& params) {
  return {std::nullopt, std::nullopt, params.mass * st.z.segment<3>(6)};
}

std::pair<EsoState, DisturbanceEstimate> eso_step(const EsoState& st, const Measurement& meas,
                                                  const VirtualInput& nu,
                                                  const VehicleParams& params, double dt) {
  Eigen::Matrix<double, 6, 1> y;
  y << meas.position, meas.velocity;
  const Eigen::Matrix<double, 6, 1> innovation = y - eso_output_matrix() * st.z;

  EsoVector known = EsoVector::Zero();
  known.segment<3>(3) = nu.force / params.mass + params.gravity * e3();

  EsoState next = st;
  next.z = st.z + dt * (eso_state_matrix() * st.z + known + st.gain * innovation);
  return {next, eso_estimate(next, params)};
}

// ---------------------------------------------------------------------------

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Rdo: return "rdo";
    case EstimatorKind::Dob: return "dob";
    case EstimatorKind::Eso: return "eso";
    case EstimatorKind::Oracle: return "oracle";
  }
  return "unknown";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "rdo") return EstimatorKind::Rdo;
  if (lower == "dob") return EstimatorKind::Dob;
  if (lower == "eso" || lower == "heso") return EstimatorKind::Eso;
  if (lower == "oracle") return EstimatorKind::Oracle;
  throw ConfigError("unknown estimator '" + std::string(name) + "' (expected rdo, dob, eso or oracle)");
}

void EstimatorConfig::validate() const {
  switch (kind) {
    case EstimatorKind::Rdo: rdo.validate(); break;
    case EstimatorKind::Dob: dob.validate(); break;
    case EstimatorKind::Eso: eso.validate(); break;
    case EstimatorKind::Oracle: break;
  }
}

Estimator::Estimator(const EstimatorConfig& cfg, const Measurement& initial,
                     const VehicleParams& params)
    : cfg_(cfg), params_(params) {
  cfg_.validate();
  switch (cfg_.kind) {
    case EstimatorKind::Rdo: state_ = rdo_init(initial, cfg_.rdo); break;
    case EstimatorKind::Dob: state_ = dob_init(initial, cfg_.dob, params_); break;
    case EstimatorKind::Eso: state_ = eso_init(initial, cfg_.eso); break;
    case EstimatorKind::Oracle: state_ = OracleState{}; break;
  }
}

DisturbanceEstimate Estimator::initial_estimate(const Measurement& meas,
                                                const Vec3& true_force) const {
  struct Visitor {
    const Estimator& self;
    const Measurement& meas;
    const Vec3& true_force;
    DisturbanceEstimate operator()(const RdoState& s) const {
      return rdo_estimate(s, meas.extension);
    }
    DisturbanceEstimate operator()(const DobState& s) const {
      return dob_estimate(s, meas.velocity, self.cfg_.dob, self.params_);
    }
    DisturbanceEstimate operator()(const EsoState& s) const {
      return eso_estimate(s, self.params_);
    }
    DisturbanceEstimate operator()(const OracleState&) const {
      return {std::nullopt, std::nullopt, true_force};
    }
  };
  return std::visit(Visitor{*this, meas, true_force}, state_);
}

DisturbanceEstimate Estimator::step(const Measurement& meas, const VirtualInput& nu, double dt,
                                    const Vec3& true_force) {
  struct Visitor {
    Estimator& self;
    const Measurement& meas;
    const VirtualInput& nu;
    double dt;
    const Vec3& true_force;
    DisturbanceEstimate operator()(RdoState& s) const {
      s = rdo_step(s, meas, nu, self.cfg_.rdo, self.params_, dt);
      return rdo_estimate(s, meas.extension);
    }
    DisturbanceEstimate operator()(DobState& s) const {
      auto [next, est] = dob_step(s, meas, nu, self.cfg_.dob, self.params_, dt);
      s = next;
      return est;
    }
    DisturbanceEstimate operator()(EsoState& s) const {
      auto [next, est] = eso_step(s, meas, nu, self.params_, dt);
      s = next;
      return est;
    }
    DisturbanceEstimate operator()(OracleState&) const {
      return {std::nullopt, std::nullopt, true_force};
    }
  };
  return std::visit(Visitor{*this, meas, nu, dt, true_force}, state_);
}

}  // namespace tether_dobc
