#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsr/baselines.hpp"

namespace hsr {

enum class SchemeKind { UavAssisted, QoSConcurrent, Mqis };
enum class SweepVariable { FlowCount, SlotCount, UavDistance };

std::string to_string(SchemeKind k);
std::string to_string(SweepVariable v);
SchemeKind scheme_from_string(const std::string& name);
SweepVariable sweep_variable_from_string(const std::string& name);

struct SweepSpec {
  SweepVariable variable = SweepVariable::FlowCount;
  std::vector<double> values;  // empty means one point at the configured base value
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  ChannelParams channel;
  FrameConfig frame;
  SchedulerParams scheduler;
  SweepSpec sweep;
  std::vector<SchemeKind> schemes{SchemeKind::UavAssisted, SchemeKind::QoSConcurrent,
                                  SchemeKind::Mqis};
  std::vector<std::uint64_t> seeds{0, 1, 2,  3,  4,  5,  6,  7,  8,  9,
                                   10, 11, 12, 13, 14, 15, 16, 17, 18, 19};
  std::string output_dir = "out";
};

struct RunRecord {
  double sweep_value = 0.0;
  SchemeKind scheme = SchemeKind::UavAssisted;
  std::uint64_t seed = 0;
  Metrics metrics;
};

struct AggregateRecord {
  double sweep_value = 0.0;
  SchemeKind scheme = SchemeKind::UavAssisted;
  int run_count = 0;
  double mean_completed = 0.0, stddev_completed = 0.0;
  double mean_throughput_bps = 0.0, stddev_throughput_bps = 0.0;
  double mean_slots_used = 0.0, stddev_slots_used = 0.0;
};

struct SweepReport {
  SweepVariable variable = SweepVariable::FlowCount;
  std::vector<RunRecord> runs;            // sorted by (value, scheme, seed)
  std::vector<AggregateRecord> aggregates;
};

// A scheduler produced a constraint-violating schedule; always a bug, never
// silently ignored.
class ValidationFailure : public std::runtime_error {
 public:
  explicit ValidationFailure(const std::string& what) : std::runtime_error(what) {}
};

ExperimentConfig default_config();

// JSON config file; omitted fields keep their defaults. An empty file is the
// default configuration.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& source_name);
std::string serialize_config(const ExperimentConfig& config);

// Per-run parameters with one sweep value applied.
SimParams sim_params_for(const ExperimentConfig& config, SweepVariable var, double value);
ScenarioConfig scenario_config_for(const ExperimentConfig& config, SweepVariable var,
                                   double value);

ScheduleResult run_scheme(SchemeKind scheme, const Scenario& scenario, const SimParams& params);

// Every (sweep value, scheme, seed) combination, validated, aggregated.
// Parallelism is capped by HSR_SCHED_THREADS (0 or unset: hardware threads);
// output order does not depend on it.
SweepReport run_sweep(const ExperimentConfig& config);

// runs.csv and aggregate.csv under output_dir, 6 significant digits, dot
// decimal separator.
void write_report(const SweepReport& report, const std::string& output_dir);

}  // namespace hsr
