#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Dense>

#include "tether_dobc/controller.hpp"
#include "tether_dobc/model.hpp"

namespace tether_dobc {

/// What an estimator sees each control step.
struct Measurement {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 extension = Vec3::Zero();  // cable extension computed from the measured pose
};

/// Reconstructed disturbance. Stiffness and vertical force are only produced
/// by estimators that identify them separately (the redundant observer).
struct DisturbanceEstimate {
  std::optional<double> stiffness;  // K_hat [N/m]
  std::optional<double> vertical;   // d_hat [N]
  Vec3 force = Vec3::Zero();        // F_hat [N]
};

// ---------------------------------------------------------------------------
// Redundant disturbance observer
// ---------------------------------------------------------------------------

struct RdoConfig {
  double c1 = 2.0;    // stiffness estimation rate [1/s]
  double c2 = 0.75;   // vertical force estimation rate [1/s]
  double c3 = 5e-3;   // regulariser for near-vertical extension [m^2]

  void validate() const;
};

/// Rows of the 2x3 observer gain L. `stiffness` feeds K_hat, `vertical` feeds
/// d_hat. The third entry of `stiffness` is always 0 and the third entry of
/// `vertical` is always -c2.
struct ObserverGainRows {
  Vec3 stiffness = Vec3::Zero();
  Vec3 vertical = Vec3::Zero();
};

/// Minimum-norm gains placing L [delta, e3] at diag(-c1, -c2). The horizontal
/// extension norm is regularised by c3.
ObserverGainRows rdo_gains(const Vec3& delta, const RdoConfig& cfg);

/// K_hat = alpha + gamma_alpha and d_hat = beta + gamma_beta. The gamma terms
/// accumulate m * l^T dv so that the observer never needs acceleration.
struct RdoState {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma_alpha = 0.0;
  double gamma_beta = 0.0;
  Vec3 last_velocity = Vec3::Zero();
  ObserverGainRows last_gains;
};

RdoState rdo_init(const Measurement& meas, const RdoConfig& cfg);

/// One control-rate update. `nu` is the virtual input applied over the
/// interval that just ended.
RdoState rdo_step(const RdoState& st, const Measurement& meas, const VirtualInput& nu,
                  const RdoConfig& cfg, const VehicleParams& params, double dt);

DisturbanceEstimate rdo_estimate(const RdoState& st, const Vec3& delta);

// ---------------------------------------------------------------------------
// Reduced-order disturbance observer
// ---------------------------------------------------------------------------

struct DobConfig {
  Vec3 gain = Vec3::Constant(0.75);  // diagonal of l_d [1/s]

  void validate() const;
};

struct DobState {
  Vec3 z = Vec3::Zero();
  Vec3 last_velocity = Vec3::Zero();
};

/// Starts with F_hat = 0.
DobState dob_init(const Measurement& meas, const DobConfig& cfg, const VehicleParams& params);

std::pair<DobState, DisturbanceEstimate> dob_step(const DobState& st, const Measurement& meas,
                                                  const VirtualInput& nu, const DobConfig& cfg,
                                                  const VehicleParams& params, double dt);

DisturbanceEstimate dob_estimate(const DobState& st, const Vec3& velocity, const DobConfig& cfg,
                                 const VehicleParams& params);

// ---------------------------------------------------------------------------
// Extended state observer
// ---------------------------------------------------------------------------

using EsoGain = Eigen::Matrix<double, 12, 6>;
using EsoVector = Eigen::Matrix<double, 12, 1>;

/// Four observer poles per axis, shared by all three axes.
using EsoPoles = std::array<double, 4>;

/// Augmented state ordering: [p(3), v(3), f(3), df(3)], f = F_d / m.
Eigen::Matrix<double, 12, 12> eso_state_matrix();
Eigen::Matrix<double, 6, 12> eso_output_matrix();

/// Per-axis pole placement. The slowest pole is assigned to the position
/// channel; the remaining three set the velocity/disturbance chain.
/// Throws ConfigError for non-negative or non-finite poles.
EsoGain eso_gains(const EsoPoles& poles);

struct EsoConfig {
  EsoPoles poles{-0.05, -0.5, -5.0, -25.0};

  void validate() const;
};

struct EsoState {
  EsoVector z = EsoVector::Zero();
  EsoGain gain = EsoGain::Zero();
};

/// Position and velocity initialised from the measurement; disturbance states zero.
EsoState eso_init(const Measurement& meas, const EsoConfig& cfg);

std::pair<EsoState, DisturbanceEstimate> eso_step(const EsoState& st, const Measurement& meas,
                                                  const VirtualInput& nu,
                                                  const VehicleParams& params, double dt);

DisturbanceEstimate eso_estimate(const EsoState& st, const VehicleParams& params);

// ---------------------------------------------------------------------------
// Common interface
// ---------------------------------------------------------------------------

enum class EstimatorKind { Rdo, Dob, Eso, Oracle };

std::string_view to_string(EstimatorKind kind);
/// Throws ConfigError on unknown names.
EstimatorKind parse_estimator_kind(std::string_view name);

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::Rdo;
  RdoConfig rdo;
  DobConfig dob;
  EsoConfig eso;

  void validate() const;
};

/// Uses the true disturbance force as its estimate. Benchmark only.
struct OracleState {};

/// Value-type wrapper that dispatches to the selected estimator.
class Estimator {
 public:
  Estimator(const EstimatorConfig& cfg, const Measurement& initial, const VehicleParams& params);

  /// Advance one control step. `true_force` is read only by the oracle.
  DisturbanceEstimate step(const Measurement& meas, const VirtualInput& nu, double dt,
                           const Vec3& true_force);

  /// Estimate at the initial measurement, before any step.
  DisturbanceEstimate initial_estimate(const Measurement& meas, const Vec3& true_force) const;

  EstimatorKind kind() const { return cfg_.kind; }

 private:
  EstimatorConfig cfg_;
  VehicleParams params_;
  std::variant<RdoState, DobState, EsoState, OracleState> state_;
};

}  // namespace tether_dobc
