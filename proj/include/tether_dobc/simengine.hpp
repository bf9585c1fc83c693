#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "tether_dobc/controller.hpp"
#include "tether_dobc/model.hpp"
#include "tether_dobc/observers.hpp"

namespace tether_dobc {

enum class ScenarioKind { Helix, Circle, Extraction, Custom };

std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(std::string_view name);

/// Reference trajectory parameters. Which fields matter depends on the
/// scenario kind:
///  - circle: centre, radius, period (altitude is carried by centre.z)
///  - helix: centre, radius, period, altitude_start/altitude_max and the climb
///    window [climb_start, climb_end]
///  - extraction: start, direction, ramp_rate, ramp_duration
///  - custom: constant hold at `start`
struct ReferenceParams {
  Vec3 center = Vec3::Zero();
  double radius = 1.5;
  double period = 30.0;
  double altitude_start = 0.1;
  double altitude_max = 0.4;
  double climb_start = 5.0;
  double climb_end = 20.0;
  Vec3 start = Vec3::Zero();
  Vec3 direction = Vec3(1.0, 0.0, -1.0).normalized();
  double ramp_rate = 0.1;
  double ramp_duration = 20.0;
};

struct ReferenceSample {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
};

ReferenceSample reference(ScenarioKind kind, double t, const ReferenceParams& params);

/// Piecewise-constant vertical disturbance d(t): value of the last step whose
/// time is <= t, zero before the first step.
struct DisturbanceSchedule {
  std::vector<std::pair<double, double>> steps;  // (time [s], d [N]), sorted by time

  double at(double t) const;
};

struct NoiseConfig {
  bool enabled = false;
  double position_std = 0.0;  // [m]
  double velocity_std = 0.0;  // [m/s]
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Custom;
  VehicleParams vehicle;
  TetherConfig tether;
  ControllerGains gains;
  double attitude_tau = 0.05;  // [s]
  double yaw = 0.0;            // commanded yaw [rad]
  EstimatorConfig estimator;
  DisturbanceSchedule disturbance;
  ReferenceParams reference;
  double duration = 30.0;  // [s]
  double dt_plant = 1e-3;  // [s]
  double dt_ctrl = 1e-2;   // [s]
  NoiseConfig noise;
  std::uint64_t seed = 1;
  // Initial state; defaults to the reference sample at t = 0.
  std::optional<Vec3> initial_position;
  std::optional<Vec3> initial_velocity;

  /// Number of plant substeps per control step. Throws ConfigError unless
  /// dt_ctrl is an integer multiple of dt_plant.
  int substeps() const;
  void validate() const;

  static ScenarioConfig preset(ScenarioKind kind);
};

struct LogRecord {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Attitude attitude;
  Vec3 reference = Vec3::Zero();
  Vec3 error = Vec3::Zero();
  Vec3 extension = Vec3::Zero();
  Vec3 nu = Vec3::Zero();
  double thrust = 0.0;
  std::optional<double> stiffness_estimate;
  std::optional<double> vertical_estimate;
  Vec3 force_estimate = Vec3::Zero();
  Vec3 force_true = Vec3::Zero();
  bool released = false;
};

struct RunLog {
  double dt = 0.0;  // sample interval
  std::vector<LogRecord> records;
  std::optional<double> release_time;
  int release_count = 0;
};

/// Classical fourth-order Runge-Kutta step. `f(x)` returns dx/dt; inputs are
/// held constant over the step by the caller.
template <typename State, typename Dynamics>
State rk4_step(const State& x, Dynamics&& f, double dt) {
  const State k1 = f(x);
  const State k2 = f(State(x + 0.5 * dt * k1));
  const State k3 = f(State(x + 0.5 * dt * k2));
  const State k4 = f(State(x + dt * k3));
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Runs one closed-loop simulation. Deterministic for a fixed config and seed.
/// Throws NumericalError if the state blows up and AllocationError if the
/// controller commands an unrealisable force.
RunLog run(const ScenarioConfig& cfg);

/// Writes the log as CSV with a fixed header; values use 9 significant digits.
void write_csv(const RunLog& log, std::ostream& os);

/// Column names of the CSV export, in order.
const std::vector<std::string_view>& csv_columns();

}  // namespace tether_dobc
