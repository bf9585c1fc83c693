#include "tether_dobc/simengine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "tether_dobc/errors.hpp"

namespace tether_dobc {

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Helix: return "helix";
    case ScenarioKind::Circle: return "circle";
    case ScenarioKind::Extraction: return "extraction";
    case ScenarioKind::Custom: return "custom";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
  if (name == "helix") return ScenarioKind::Helix;
  if (name == "circle") return ScenarioKind::Circle;
  if (name == "extraction") return ScenarioKind::Extraction;
  if (name == "custom") return ScenarioKind::Custom;
  throw ConfigError("unknown scenario kind '" + std::string(name) +
                    "' (expected helix, circle, extraction or custom)");
}

namespace {

ReferenceSample circle_sample(double t, const ReferenceParams& p) {
  const double w = 2.0 * std::numbers::pi / p.period;
  const double c = std::cos(w * t), s = std::sin(w * t);
  return {p.center + p.radius * Vec3(c, s, 0.0), p.radius * w * Vec3(-s, c, 0.0)};
}

}  // namespace

ReferenceSample reference(ScenarioKind kind, double t, const ReferenceParams& p) {
  switch (kind) {
    case ScenarioKind::Circle:
      return circle_sample(t, p);
    case ScenarioKind::Helix: {
      ReferenceSample r = circle_sample(t, p);
      double altitude = p.altitude_start;
      double climb_rate = 0.0;
      if (t >= p.climb_end) {
        altitude = p.altitude_max;
      } else if (t >= p.climb_start) {
        climb_rate = (p.altitude_max - p.altitude_start) / (p.climb_end - p.climb_start);
        altitude = p.altitude_start + climb_rate * (t - p.climb_start);
      }
      // Altitude is measured against e3, which points down.
      r.position.z() = p.center.z() - altitude;
      r.velocity.z() = -climb_rate;
      return r;
    }
    case ScenarioKind::Extraction: {
      const double travel = p.ramp_rate * std::min(t, p.ramp_duration);
      const double speed = t < p.ramp_duration ? p.ramp_rate : 0.0;
      return {p.start + travel * p.direction, speed * p.direction};
    }
    case ScenarioKind::Custom:
      return {p.start, Vec3::Zero()};
  }
  return {};
}

double DisturbanceSchedule::at(double t) const {
  double value = 0.0;
  for (const auto& [time, d] : steps) {
    if (time > t) break;
    value = d;
  }
  return value;
}

int ScenarioConfig::substeps() const {
  if (!(dt_plant > 0.0) || !(dt_ctrl > 0.0))
    throw ConfigError("scenario.dt_plant and scenario.dt_ctrl must be > 0");
  const double ratio = dt_ctrl / dt_plant;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-9 * n)
    throw ConfigError("scenario.dt_ctrl must be an integer multiple of scenario.dt_plant");
  return static_cast<int>(n);
}

void ScenarioConfig::validate() const {
  vehicle.validate();
  tether.validate();
  gains.validate();
  estimator.validate();
  (void)substeps();
  if (!(duration > 0.0)) throw ConfigError("scenario.duration must be > 0");
  if (!(attitude_tau >= 0.0)) throw ConfigError("controller.tau_att must be >= 0");
  if (noise.position_std < 0.0 || noise.velocity_std < 0.0)
    throw ConfigError("noise standard deviations must be >= 0");
  if (!std::is_sorted(disturbance.steps.begin(), disturbance.steps.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; }))
    throw ConfigError("disturbance.schedule must be sorted by time");
  if (kind == ScenarioKind::Circle || kind == ScenarioKind::Helix) {
    if (!(reference.period > 0.0)) throw ConfigError("reference.period must be > 0");
    if (!(reference.radius >= 0.0)) throw ConfigError("reference.radius must be >= 0");
  }
  if (kind == ScenarioKind::Helix && !(reference.climb_end > reference.climb_start))
    throw ConfigError("reference.climb_end must be after reference.climb_start");
  if (kind == ScenarioKind::Extraction) {
    if (!(reference.direction.norm() > 0.0))
      throw ConfigError("reference.direction must be non-zero");
    if (!(reference.ramp_duration >= 0.0))
      throw ConfigError("reference.ramp_duration must be >= 0");
  }
}

ScenarioConfig ScenarioConfig::preset(ScenarioKind kind) {
  ScenarioConfig cfg;
  cfg.kind = kind;
  switch (kind) {
    case ScenarioKind::Circle:
      // Hardware-analog vehicle on a bungee, flying a 1.5 m circle at 1.25 m.
      cfg.vehicle.mass = 1.89;
      cfg.tether.stiffness = 16.5;
      cfg.tether.natural_length = 1.4;
      cfg.gains = {2.5, 5.0};
      cfg.estimator.rdo = {2.0, 0.75, 5e-3};
      cfg.estimator.dob.gain = Vec3::Constant(0.75);
      cfg.estimator.eso.poles = {-0.05, -0.5, -5.0, -25.0};
      cfg.disturbance.steps = {{0.0, 0.5}};
      cfg.reference.center = Vec3(0.0, 0.0, -1.25);
      cfg.reference.radius = 1.5;
      cfg.reference.period = 30.0;
      cfg.duration = 60.0;
      break;
    case ScenarioKind::Helix:
      // Small vehicle on a short bungee; vertical load steps in at t = 5 s and
      // the climb tightens the cable near t = 12 s.
      cfg.vehicle.mass = 0.063;
      cfg.tether.stiffness = 14.0;
      cfg.tether.natural_length = 0.65;
      cfg.gains = {2.5, 5.0};
      cfg.estimator.rdo = {5.0, 5.0, 1e-6};
      cfg.estimator.dob.gain = Vec3::Constant(5.0);
      cfg.estimator.eso.poles = {-0.03, -0.3, -3.0, -30.0};
      cfg.disturbance.steps = {{5.0, -0.6}};
      cfg.reference.center = Vec3::Zero();
      cfg.reference.radius = 0.6;
      cfg.reference.period = 20.0;
      cfg.reference.altitude_start = 0.1;
      cfg.reference.altitude_max = 0.4;
      cfg.reference.climb_start = 5.0;
      cfg.reference.climb_end = 20.0;
      cfg.duration = 40.0;
      break;
    case ScenarioKind::Extraction:
      // Mechanism at the origin, inclined 45 deg about e2; the vehicle starts
      // with a slack cable and ramps away along the incline.
      cfg.vehicle.mass = 1.89;
      cfg.tether.stiffness = 16.5;
      cfg.tether.natural_length = 1.4;
      cfg.tether.release_force = 10.0;
      cfg.gains = {2.5, 5.0};
      cfg.estimator.rdo = {2.0, 0.75, 5e-3};
      cfg.estimator.dob.gain = Vec3::Constant(0.75);
      cfg.estimator.eso.poles = {-0.05, -0.5, -5.0, -25.0};
      cfg.disturbance.steps = {{0.0, 0.5}};
      cfg.reference.direction = Vec3(1.0, 0.0, -1.0).normalized();
      cfg.reference.start = 1.2 * cfg.reference.direction;
      cfg.reference.ramp_rate = 0.15;
      cfg.reference.ramp_duration = 10.0;
      cfg.noise.position_std = 0.005;
      cfg.noise.velocity_std = 0.01;
      cfg.duration = 20.0;
      break;
    case ScenarioKind::Custom:
      cfg.vehicle.mass = 1.0;
      cfg.tether.stiffness = 0.0;
      cfg.tether.natural_length = 1.0;
      cfg.reference.start = Vec3(0.0, 0.0, -1.0);
      cfg.duration = 10.0;
      break;
  }
  return cfg;
}

namespace {

using PlantState = Eigen::Matrix<double, 6, 1>;

constexpr double kBlowUpLimit = 1e6;

void check_finite(const PlantState& x, double t) {
  if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kBlowUpLimit) {
    std::ostringstream msg;
    msg << "state diverged at t = " << t << " s (|x|max = " << x.cwiseAbs().maxCoeff() << ")";
    throw NumericalError(msg.str());
  }
}

VehicleState to_vehicle(const PlantState& x, const Attitude& att) {
  return {x.head<3>(), x.tail<3>(), att};
}

}  // namespace

RunLog run(const ScenarioConfig& cfg) {
  cfg.validate();
  const int substeps = cfg.substeps();
  const double dt = cfg.dt_ctrl;
  const double h = dt / substeps;
  const long steps = std::lround(cfg.duration / dt);

  TetherConfig tether = cfg.tether;
  tether.released = false;

  const ReferenceSample ref0 = reference(cfg.kind, 0.0, cfg.reference);
  PlantState x;
  x << cfg.initial_position.value_or(ref0.position), cfg.initial_velocity.value_or(ref0.velocity);
  Attitude att;
  att.yaw = cfg.yaw;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  auto noisy = [&](const Vec3& v, double sigma) -> Vec3 {
    if (!cfg.noise.enabled || sigma <= 0.0) return v;
    Vec3 out = v;
    for (int i = 0; i < 3; ++i) out[i] += sigma * unit_normal(rng);
    return out;
  };

  auto vertical_load = [&](double t) {
    return cfg.disturbance.at(t) + (tether.released ? tether.residual_weight : 0.0);
  };

  auto measure = [&](const PlantState& state) {
    Measurement m;
    m.position = noisy(state.head<3>(), cfg.noise.position_std);
    m.velocity = noisy(state.tail<3>(), cfg.noise.velocity_std);
    m.extension = cable_extension({m.position, m.velocity, att}, cfg.vehicle, tether).delta;
    return m;
  };

  RunLog log;
  log.dt = dt;
  log.records.reserve(static_cast<std::size_t>(steps) + 1);

  Measurement meas = measure(x);
  Vec3 true_force = disturbance_force(cable_extension(to_vehicle(x, att), cfg.vehicle, tether),
                                      tether, vertical_load(0.0));
  Estimator estimator(cfg.estimator, meas, cfg.vehicle);
  VirtualInput last_nu;

  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (k > 0) {
      meas = measure(x);
      true_force = disturbance_force(cable_extension(to_vehicle(x, att), cfg.vehicle, tether),
                                     tether, vertical_load(t));
    }
    const DisturbanceEstimate est = k == 0 ? estimator.initial_estimate(meas, true_force)
                                           : estimator.step(meas, last_nu, dt, true_force);

    const ReferenceSample ref = reference(cfg.kind, t, cfg.reference);
    const VirtualInput nu = pd_control(ref.position - meas.position,
                                       ref.velocity - meas.velocity, est.force, cfg.gains,
                                       cfg.vehicle);
    const ThrustAttitudeCommand cmd = allocate(nu, cfg.yaw);

    LogRecord rec;
    rec.t = t;
    rec.position = x.head<3>();
    rec.velocity = x.tail<3>();
    rec.attitude = att;
    rec.reference = ref.position;
    rec.error = ref.position - rec.position;
    rec.extension = meas.extension;
    rec.nu = nu.force;
    rec.thrust = cmd.thrust;
    rec.stiffness_estimate = est.stiffness;
    rec.vertical_estimate = est.vertical;
    rec.force_estimate = est.force;
    rec.force_true = true_force;
    rec.released = tether.released;
    log.records.push_back(rec);

    if (k == steps) break;

    att = attitude_step(att, cmd.attitude, cfg.attitude_tau, dt);
    for (int s = 0; s < substeps; ++s) {
      const double d = vertical_load(t + s * h);
      x = rk4_step(
          x,
          [&](const PlantState& state) -> PlantState {
            PlantState dx;
            dx << state.tail<3>(),
                translational_accel(to_vehicle(state, att), cmd.thrust, tether, d, cfg.vehicle);
            return dx;
          },
          h);
    }
    check_finite(x, t + dt);

    if (!tether.released) {
      const CableExtension ext = cable_extension(to_vehicle(x, att), cfg.vehicle, tether);
      if (tether.stiffness * ext.delta.norm() >= tether.release_force) {
        tether.released = true;
        log.release_time = t + dt;
        ++log.release_count;
      }
    }
    last_nu = nu;
  }
  return log;
}

const std::vector<std::string_view>& csv_columns() {
  static const std::vector<std::string_view> columns = {
      "t",      "px",     "py",     "pz",     "rx",       "ry",       "rz",
      "ex",     "ey",     "ez",     "dx_cable", "dy_cable", "dz_cable", "nu_x",
      "nu_y",   "nu_z",   "T",      "K_hat",  "d_hat",    "Fhat_x",   "Fhat_y",
      "Fhat_z", "Fd_x",   "Fd_y",   "Fd_z",   "released"};
  return columns;
}

void write_csv(const RunLog& log, std::ostream& os) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';

  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.9g", v);
    os << buf << ',';
  };
  auto put3 = [&](const Vec3& v) {
    put(v.x());
    put(v.y());
    put(v.z());
  };
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const LogRecord& r : log.records) {
    put(r.t);
    put3(r.position);
    put3(r.reference);
    put3(r.error);
    put3(r.extension);
    put3(r.nu);
    put(r.thrust);
    put(r.stiffness_estimate.value_or(nan));
    put(r.vertical_estimate.value_or(nan));
    put3(r.force_estimate);
    put3(r.force_true);
    os << (r.released ? 1 : 0) << '\n';
  }
}

}  // namespace tether_dobc
