#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tether_dobc/simengine.hpp"

namespace tether_dobc {

/// Trapezoidal integral of v(t)^2. Needs at least two samples.
double integrate_squared(std::span<const double> t, std::span<const double> v);

using SignalSelector = std::function<double(const LogRecord&)>;

/// Integral square error of a selected signal over the whole log.
double ise(const RunLog& log, const SignalSelector& signal);

SignalSelector error_axis(int axis);
SignalSelector force_error_norm();

/// Largest tracking error norm over the log.
double max_error(const RunLog& log);
/// Largest tracking error norm over samples with t >= t0 (0 if none).
double max_error_after(const RunLog& log, double t0);

struct RunMetrics {
  std::array<double, 3> ise{};  // per-axis position ISE [m^2 s]
  double force_ise = 0.0;       // integral of |F_d - F_hat|^2 [N^2 s]
  double max_error = 0.0;       // [m]
};

RunMetrics compute_metrics(const RunLog& log);

struct BatchMetrics {
  std::size_t runs = 0;
  std::array<double, 3> mean_ise{};
  std::array<double, 3> std_ise{};
  double mean_force_ise = 0.0;
  double std_force_ise = 0.0;
  double mean_max_error = 0.0;
  double worst_max_error = 0.0;
  double std_max_error = 0.0;
};

/// Sample mean and (N-1) standard deviation over runs; worst case is the max.
BatchMetrics batch_stats(std::span<const RunMetrics> runs);
BatchMetrics batch_stats(std::span<const RunLog> logs);

struct NamedRun {
  std::string name;
  RunMetrics metrics;
};

struct NamedBatch {
  std::string name;
  BatchMetrics metrics;
};

void write_comparison_table(std::span<const NamedRun> rows, std::ostream& os);
void write_comparison_csv(std::span<const NamedRun> rows, std::ostream& os);
void write_batch_table(std::span<const NamedBatch> rows, std::ostream& os);
void write_batch_csv(std::span<const NamedBatch> rows, std::ostream& os);

}  // namespace tether_dobc
