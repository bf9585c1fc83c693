#include "tether_dobc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace tether_dobc {

double integrate_squared(std::span<const double> t, std::span<const double> v) {
  if (t.size() != v.size()) throw std::invalid_argument("ise: time and value lengths differ");
  if (t.size() < 2) throw std::invalid_argument("ise: need at least two samples");
  double sum = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i)
    sum += 0.5 * (t[i] - t[i - 1]) * (v[i] * v[i] + v[i - 1] * v[i - 1]);
  return sum;
}

double ise(const RunLog& log, const SignalSelector& signal) {
  std::vector<double> t, v;
  t.reserve(log.records.size());
  v.reserve(log.records.size());
  for (const LogRecord& r : log.records) {
    t.push_back(r.t);
    v.push_back(signal(r));
  }
  return integrate_squared(t, v);
}

SignalSelector error_axis(int axis) {
  return [axis](const LogRecord& r) { return r.error[axis]; };
}

SignalSelector force_error_norm() {
  return [](const LogRecord& r) { return (r.force_true - r.force_estimate).norm(); };
}

double max_error(const RunLog& log) {
  if (log.records.empty()) throw std::invalid_argument("max_error: empty log");
  return max_error_after(log, log.records.front().t);
}

double max_error_after(const RunLog& log, double t0) {
  if (log.records.empty()) throw std::invalid_argument("max_error: empty log");
  double worst = 0.0;
  for (const LogRecord& r : log.records)
    if (r.t >= t0) worst = std::max(worst, r.error.norm());
  return worst;
}

RunMetrics compute_metrics(const RunLog& log) {
  RunMetrics m;
  for (int axis = 0; axis < 3; ++axis) m.ise[axis] = ise(log, error_axis(axis));
  m.force_ise = ise(log, force_error_norm());
  m.max_error = max_error(log);
  return m;
}

namespace {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

template <typename Get>
MeanStd mean_std(std::span<const RunMetrics> runs, Get get) {
  const double n = static_cast<double>(runs.size());
  double sum = 0.0;
  for (const RunMetrics& r : runs) sum += get(r);
  const double mean = sum / n;
  double ss = 0.0;
  for (const RunMetrics& r : runs) ss += (get(r) - mean) * (get(r) - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

BatchMetrics batch_stats(std::span<const RunMetrics> runs) {
  if (runs.size() < 2) throw std::invalid_argument("batch_stats: need at least two runs");
  BatchMetrics b;
  b.runs = runs.size();
  for (int axis = 0; axis < 3; ++axis) {
    const MeanStd s = mean_std(runs, [axis](const RunMetrics& r) { return r.ise[axis]; });
    b.mean_ise[axis] = s.mean;
    b.std_ise[axis] = s.std;
  }
  const MeanStd f = mean_std(runs, [](const RunMetrics& r) { return r.force_ise; });
  b.mean_force_ise = f.mean;
  b.std_force_ise = f.std;
  const MeanStd e = mean_std(runs, [](const RunMetrics& r) { return r.max_error; });
  b.mean_max_error = e.mean;
  b.std_max_error = e.std;
  b.worst_max_error = 0.0;
  for (const RunMetrics& r : runs) b.worst_max_error = std::max(b.worst_max_error, r.max_error);
  return b;
}

BatchMetrics batch_stats(std::span<const RunLog> logs) {
  std::vector<RunMetrics> runs;
  runs.reserve(logs.size());
  for (const RunLog& log : logs) runs.push_back(compute_metrics(log));
  return batch_stats(std::span<const RunMetrics>(runs));
}

namespace {

std::string fmt(double v, const char* spec = "%10.4g") {
  char buf[32];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

}  // namespace

void write_comparison_table(std::span<const NamedRun> rows, std::ostream& os) {
  os << "Estimator |      Pos. ISE (m^2 s)            | Max. Pos. Err | Force ISE\n"
     << "          |     e1         e2         e3     |      (m)      |  (N^2 s)\n"
     << "----------+----------------------------------+---------------+-----------\n";
  char name[16];
  for (const NamedRun& r : rows) {
    std::snprintf(name, sizeof name, "%-9s", upper(r.name).c_str());
    os << name << " | " << fmt(r.metrics.ise[0]) << ' ' << fmt(r.metrics.ise[1]) << ' '
       << fmt(r.metrics.ise[2]) << "  |  " << fmt(r.metrics.max_error, "%10.4g") << "   | "
       << fmt(r.metrics.force_ise) << '\n';
  }
}

void write_comparison_csv(std::span<const NamedRun> rows, std::ostream& os) {
  os << "estimator,ise_e1,ise_e2,ise_e3,max_error,force_ise\n";
  for (const NamedRun& r : rows) {
    os << r.name;
    for (double v : {r.metrics.ise[0], r.metrics.ise[1], r.metrics.ise[2], r.metrics.max_error,
                     r.metrics.force_ise})
      os << ',' << fmt(v, "%.9g");
    os << '\n';
  }
}

void write_batch_table(std::span<const NamedBatch> rows, std::ostream& os) {
  os << "Estimator |         mean ISE (m^2 s)         |          std. ISE               "
        "| Max. Err (m) | std.\n"
     << "          |     e1         e2         e3     |     e1         e2         e3    "
        "|   |e_p|      | sigma\n"
     << "----------+----------------------------------+---------------------------------"
        "+--------------+-----------\n";
  char name[16];
  for (const NamedBatch& r : rows) {
    const BatchMetrics& b = r.metrics;
    std::snprintf(name, sizeof name, "%-9s", upper(r.name).c_str());
    os << name << " | " << fmt(b.mean_ise[0]) << ' ' << fmt(b.mean_ise[1]) << ' '
       << fmt(b.mean_ise[2]) << "  | " << fmt(b.std_ise[0]) << ' ' << fmt(b.std_ise[1]) << ' '
       << fmt(b.std_ise[2]) << " |  " << fmt(b.worst_max_error) << "  | "
       << fmt(b.std_max_error) << '\n';
  }
  if (!rows.empty())
    os << "(" << rows.front().metrics.runs
       << " runs per estimator; max error is the worst case over runs)\n";
}

void write_batch_csv(std::span<const NamedBatch> rows, std::ostream& os) {
  os << "estimator,runs,mean_ise_e1,mean_ise_e2,mean_ise_e3,std_ise_e1,std_ise_e2,std_ise_e3,"
        "mean_force_ise,std_force_ise,mean_max_error,worst_max_error,std_max_error\n";
  for (const NamedBatch& r : rows) {
    const BatchMetrics& b = r.metrics;
    os << r.name << ',' << b.runs;
    for (double v : {b.mean_ise[0], b.mean_ise[1], b.mean_ise[2], b.std_ise[0], b.std_ise[1],
                     b.std_ise[2], b.mean_force_ise, b.std_force_ise, b.mean_max_error,
                     b.worst_max_error, b.std_max_error})
      os << ',' << fmt(v, "%.9g");
    os << '\n';
  }
}

}  // namespace tether_dobc
