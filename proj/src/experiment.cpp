#include "hsr/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hsr/errors.hpp"

namespace hsr {

using ordered_json = nlohmann::ordered_json;

std::string to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::UavAssisted:
      return "uav_assisted";
    case SchemeKind::QoSConcurrent:
      return "qos_concurrent";
    case SchemeKind::Mqis:
      return "mqis";
  }
  return "?";
}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::FlowCount:
      return "flow_count";
    case SweepVariable::SlotCount:
      return "slot_count";
    case SweepVariable::UavDistance:
      return "uav_distance";
  }
  return "?";
}

SchemeKind scheme_from_string(const std::string& name) {
  if (name == "uav_assisted") return SchemeKind::UavAssisted;
  if (name == "qos_concurrent") return SchemeKind::QoSConcurrent;
  if (name == "mqis") return SchemeKind::Mqis;
  throw ConfigError("unknown scheme '" + name +
                    "' (expected uav_assisted, qos_concurrent or mqis)");
}

SweepVariable sweep_variable_from_string(const std::string& name) {
  if (name == "flow_count") return SweepVariable::FlowCount;
  if (name == "slot_count") return SweepVariable::SlotCount;
  if (name == "uav_distance") return SweepVariable::UavDistance;
  throw ConfigError("unknown sweep variable '" + name +
                    "' (expected flow_count, slot_count or uav_distance)");
}

ExperimentConfig default_config() { return ExperimentConfig{}; }

namespace {

void check_keys(const ordered_json& j, std::initializer_list<const char*> allowed,
                const std::string& context) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError(context + ": unknown key '" + key + "'");
    }
  }
}

double get_number(const ordered_json& j, const char* key, double fallback,
                  const std::string& context) {
  if (!j.contains(key)) {
    return fallback;
  }
  if (!j.at(key).is_number()) {
    throw ConfigError(context + "." + key + " must be a number");
  }
  return j.at(key).get<double>();
}

long get_integer(const ordered_json& j, const char* key, long fallback,
                 const std::string& context) {
  if (!j.contains(key)) {
    return fallback;
  }
  if (!j.at(key).is_number_integer()) {
    throw ConfigError(context + "." + key + " must be an integer");
  }
  return j.at(key).get<long>();
}

bool get_bool(const ordered_json& j, const char* key, bool fallback,
              const std::string& context) {
  if (!j.contains(key)) {
    return fallback;
  }
  if (!j.at(key).is_boolean()) {
    throw ConfigError(context + "." + key + " must be a boolean");
  }
  return j.at(key).get<bool>();
}

PathLossParams parse_path_loss(const ordered_json& j, const PathLossParams& base,
                               const std::string& context) {
  check_keys(j,
             {"break_distance_m", "alpha_near_db", "beta_near", "alpha_far_db", "beta_far",
              "shadowing_sigma_db", "shadowing_enabled"},
             context);
  PathLossParams p = base;
  p.break_distance_m = get_number(j, "break_distance_m", p.break_distance_m, context);
  p.alpha_near_db = get_number(j, "alpha_near_db", p.alpha_near_db, context);
  p.beta_near = get_number(j, "beta_near", p.beta_near, context);
  p.alpha_far_db = get_number(j, "alpha_far_db", p.alpha_far_db, context);
  p.beta_far = get_number(j, "beta_far", p.beta_far, context);
  p.shadowing_sigma_db = get_number(j, "shadowing_sigma_db", p.shadowing_sigma_db, context);
  p.shadowing_enabled = get_bool(j, "shadowing_enabled", p.shadowing_enabled, context);
  if (p.break_distance_m <= 0) throw ConfigError(context + ".break_distance_m must be positive");
  if (p.shadowing_sigma_db < 0)
    throw ConfigError(context + ".shadowing_sigma_db must be non-negative");
  return p;
}

RadioParams parse_radio(const ordered_json& j, const RadioParams& base,
                        const std::string& context) {
  check_keys(j,
             {"carrier_ghz", "bandwidth_mhz", "transmit_power_dbm", "noise_density_dbm_per_mhz",
              "efficiency"},
             context);
  RadioParams r = base;
  r.carrier_ghz = get_number(j, "carrier_ghz", r.carrier_ghz, context);
  r.bandwidth_mhz = get_number(j, "bandwidth_mhz", r.bandwidth_mhz, context);
  r.transmit_power_dbm = get_number(j, "transmit_power_dbm", r.transmit_power_dbm, context);
  r.noise_density_dbm_per_mhz =
      get_number(j, "noise_density_dbm_per_mhz", r.noise_density_dbm_per_mhz, context);
  r.efficiency = get_number(j, "efficiency", r.efficiency, context);
  if (r.bandwidth_mhz <= 0) throw ConfigError(context + ".bandwidth_mhz must be positive");
  if (r.carrier_ghz <= 0) throw ConfigError(context + ".carrier_ghz must be positive");
  if (r.efficiency <= 0 || r.efficiency >= 1)
    throw ConfigError(context + ".efficiency must lie strictly between 0 and 1");
  return r;
}

AntennaParams parse_antenna(const ordered_json& j, const AntennaParams& base,
                            const std::string& context) {
  check_keys(j,
             {"max_gain_dbi", "half_power_beamwidth_deg", "side_lobe_gain_dbi",
              "max_attenuation_db", "clamp_main_lobe"},
             context);
  AntennaParams a = base;
  a.max_gain_dbi = get_number(j, "max_gain_dbi", a.max_gain_dbi, context);
  const bool beamwidth_given = j.contains("half_power_beamwidth_deg");
  a.half_power_beamwidth_deg =
      get_number(j, "half_power_beamwidth_deg", a.half_power_beamwidth_deg, context);
  if (beamwidth_given && !j.contains("side_lobe_gain_dbi")) {
    a.side_lobe_gain_dbi = default_side_lobe_gain_dbi(a.half_power_beamwidth_deg);
  }
  a.side_lobe_gain_dbi = get_number(j, "side_lobe_gain_dbi", a.side_lobe_gain_dbi, context);
  a.max_attenuation_db = get_number(j, "max_attenuation_db", a.max_attenuation_db, context);
  a.clamp_main_lobe = get_bool(j, "clamp_main_lobe", a.clamp_main_lobe, context);
  if (a.half_power_beamwidth_deg <= 0 || a.half_power_beamwidth_deg >= 180)
    throw ConfigError(context + ".half_power_beamwidth_deg must lie in (0, 180)");
  if (a.side_lobe_gain_dbi >= a.max_gain_dbi)
    throw ConfigError(context + ".side_lobe_gain_dbi must be below max_gain_dbi");
  return a;
}

ScenarioConfig parse_scenario(const ordered_json& j, const ScenarioConfig& base) {
  const std::string context = "scenario";
  check_keys(j,
             {"layout", "mobility", "bs_position", "uav_distance_m", "uav_height_m",
              "flow_count", "qos_min_bps", "qos_max_bps"},
             context);
  ScenarioConfig s = base;
  if (j.contains("layout")) {
    const auto& l = j.at("layout");
    check_keys(l, {"car_count", "car_length_m", "mr_per_car", "mr_height_m"}, "scenario.layout");
    s.layout.car_count =
        static_cast<int>(get_integer(l, "car_count", s.layout.car_count, "scenario.layout"));
    s.layout.car_length_m = get_number(l, "car_length_m", s.layout.car_length_m, "scenario.layout");
    s.layout.mr_per_car =
        static_cast<int>(get_integer(l, "mr_per_car", s.layout.mr_per_car, "scenario.layout"));
    s.layout.mr_height_m = get_number(l, "mr_height_m", s.layout.mr_height_m, "scenario.layout");
  }
  if (j.contains("mobility")) {
    const auto& m = j.at("mobility");
    check_keys(m, {"speed_mps", "update_period_slots", "initial_train_offset_m"},
               "scenario.mobility");
    s.mobility.speed_mps = get_number(m, "speed_mps", s.mobility.speed_mps, "scenario.mobility");
    s.mobility.update_period_slots = get_integer(m, "update_period_slots",
                                                 s.mobility.update_period_slots,
                                                 "scenario.mobility");
    s.mobility.initial_train_offset_m = get_number(
        m, "initial_train_offset_m", s.mobility.initial_train_offset_m, "scenario.mobility");
  }
  if (j.contains("bs_position")) {
    const auto& b = j.at("bs_position");
    check_keys(b, {"x_m", "y_m", "z_m"}, "scenario.bs_position");
    s.bs_position.x = get_number(b, "x_m", s.bs_position.x, "scenario.bs_position");
    s.bs_position.y = get_number(b, "y_m", s.bs_position.y, "scenario.bs_position");
    s.bs_position.z = get_number(b, "z_m", s.bs_position.z, "scenario.bs_position");
  }
  s.uav_distance_m = get_number(j, "uav_distance_m", s.uav_distance_m, context);
  s.uav_height_m = get_number(j, "uav_height_m", s.uav_height_m, context);
  s.flow_count = static_cast<int>(get_integer(j, "flow_count", s.flow_count, context));
  s.qos_min_bps = get_number(j, "qos_min_bps", s.qos_min_bps, context);
  s.qos_max_bps = get_number(j, "qos_max_bps", s.qos_max_bps, context);
  return s;
}

ChannelParams parse_channel(const ordered_json& j, const ChannelParams& base) {
  const std::string context = "channel";
  check_keys(j, {"antenna", "path_loss", "path_loss_overrides", "f1", "f2"}, context);
  ChannelParams c = base;
  if (j.contains("antenna")) {
    c.antenna = parse_antenna(j.at("antenna"), c.antenna, "channel.antenna");
  }
  if (j.contains("path_loss")) {
    c.path_loss = parse_path_loss(j.at("path_loss"), c.path_loss, "channel.path_loss");
  }
  if (j.contains("path_loss_overrides")) {
    const auto& o = j.at("path_loss_overrides");
    check_keys(o, {"bs_mr", "bs_uav", "uav_mr", "bs_eavesdropper"}, "channel.path_loss_overrides");
    if (o.contains("bs_mr"))
      c.path_loss_bs_mr =
          parse_path_loss(o.at("bs_mr"), c.path_loss, "channel.path_loss_overrides.bs_mr");
    if (o.contains("bs_uav"))
      c.path_loss_bs_uav =
          parse_path_loss(o.at("bs_uav"), c.path_loss, "channel.path_loss_overrides.bs_uav");
    if (o.contains("uav_mr"))
      c.path_loss_uav_mr =
          parse_path_loss(o.at("uav_mr"), c.path_loss, "channel.path_loss_overrides.uav_mr");
    if (o.contains("bs_eavesdropper"))
      c.path_loss_bs_eavesdropper = parse_path_loss(
          o.at("bs_eavesdropper"), c.path_loss, "channel.path_loss_overrides.bs_eavesdropper");
  }
  if (j.contains("f1")) {
    c.f1 = parse_radio(j.at("f1"), c.f1, "channel.f1");
    c.f1.band = Band::F1;
  }
  if (j.contains("f2")) {
    c.f2 = parse_radio(j.at("f2"), c.f2, "channel.f2");
    c.f2.band = Band::F2;
  }
  return c;
}

FrameConfig parse_frame(const ordered_json& j, const FrameConfig& base) {
  const std::string context = "frame";
  check_keys(j, {"slot_count", "slot_duration_s", "scheduling_phase_s"}, context);
  FrameConfig f = base;
  f.slot_count = get_integer(j, "slot_count", f.slot_count, context);
  f.slot_duration_s = get_number(j, "slot_duration_s", f.slot_duration_s, context);
  f.scheduling_phase_s = get_number(j, "scheduling_phase_s", f.scheduling_phase_s, context);
  if (f.slot_count < 1) throw ConfigError("frame.slot_count must be at least 1");
  if (f.slot_duration_s <= 0) throw ConfigError("frame.slot_duration_s must be positive");
  if (f.scheduling_phase_s < 0)
    throw ConfigError("frame.scheduling_phase_s must be non-negative");
  return f;
}

SchedulerParams parse_scheduler(const ordered_json& j, const SchedulerParams& base) {
  const std::string context = "scheduler";
  check_keys(j,
             {"bs_antennas", "uav_antennas", "priority_order", "enforce_secrecy",
              "contention_enabled", "interference_enabled", "completed_only_throughput"},
             context);
  SchedulerParams s = base;
  s.bs_antennas = static_cast<int>(get_integer(j, "bs_antennas", s.bs_antennas, context));
  s.uav_antennas = static_cast<int>(get_integer(j, "uav_antennas", s.uav_antennas, context));
  if (j.contains("priority_order")) {
    const std::string order = j.at("priority_order").get<std::string>();
    if (order == "descending") {
      s.priority_order = PriorityOrder::Descending;
    } else if (order == "ascending") {
      s.priority_order = PriorityOrder::Ascending;
    } else {
      throw ConfigError("scheduler.priority_order must be 'descending' or 'ascending'");
    }
  }
  s.enforce_secrecy = get_bool(j, "enforce_secrecy", s.enforce_secrecy, context);
  s.contention_enabled = get_bool(j, "contention_enabled", s.contention_enabled, context);
  s.interference_enabled =
      get_bool(j, "interference_enabled", s.interference_enabled, context);
  s.completed_only_throughput =
      get_bool(j, "completed_only_throughput", s.completed_only_throughput, context);
  if (s.bs_antennas < 1) throw ConfigError("scheduler.bs_antennas must be at least 1");
  if (s.uav_antennas < 1) throw ConfigError("scheduler.uav_antennas must be at least 1");
  return s;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source_name) {
  bool blank = true;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      blank = false;
      break;
    }
  }
  if (blank) {
    return default_config();
  }

  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(source_name + ": " + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError(source_name + ": top level must be a JSON object");
  }
  check_keys(j, {"scenario", "channel", "frame", "scheduler", "sweep", "schemes", "seeds",
                 "output"},
             "config");

  ExperimentConfig config = default_config();
  if (j.contains("scenario")) config.scenario = parse_scenario(j.at("scenario"), config.scenario);
  if (j.contains("channel")) config.channel = parse_channel(j.at("channel"), config.channel);
  if (j.contains("frame")) config.frame = parse_frame(j.at("frame"), config.frame);
  if (j.contains("scheduler"))
    config.scheduler = parse_scheduler(j.at("scheduler"), config.scheduler);
  if (j.contains("sweep")) {
    const auto& sw = j.at("sweep");
    check_keys(sw, {"variable", "values"}, "sweep");
    if (sw.contains("variable")) {
      config.sweep.variable = sweep_variable_from_string(sw.at("variable").get<std::string>());
    }
    if (sw.contains("values")) {
      config.sweep.values.clear();
      for (const auto& v : sw.at("values")) {
        if (!v.is_number()) throw ConfigError("sweep.values must be numeric");
        config.sweep.values.push_back(v.get<double>());
      }
      // an empty list means one point at the configured base value
      for (double v : config.sweep.values) {
        if (v <= 0) throw ConfigError("sweep.values must be positive");
      }
    }
  }
  if (j.contains("schemes")) {
    config.schemes.clear();
    for (const auto& s : j.at("schemes")) {
      config.schemes.push_back(scheme_from_string(s.get<std::string>()));
    }
    if (config.schemes.empty()) throw ConfigError("schemes must not be empty");
  }
  if (j.contains("seeds")) {
    config.seeds.clear();
    for (const auto& s : j.at("seeds")) {
      if (!s.is_number_integer() || s.get<long long>() < 0) {
        throw ConfigError("seeds must be non-negative integers");
      }
      config.seeds.push_back(s.get<std::uint64_t>());
    }
    if (config.seeds.empty()) throw ConfigError("seeds must not be empty");
  }
  if (j.contains("output")) {
    config.output_dir = j.at("output").get<std::string>();
  }

  // Cross-field checks the scenario builder would otherwise hit mid-sweep.
  if (config.scenario.flow_count > config.scenario.layout.mr_count()) {
    throw ConfigError("scenario.flow_count exceeds the number of MRs");
  }
  if (config.sweep.variable == SweepVariable::FlowCount) {
    for (double v : config.sweep.values) {
      if (v > config.scenario.layout.mr_count()) {
        throw ConfigError("sweep.values: flow_count exceeds the number of MRs");
      }
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(path + ": cannot open config file");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

namespace {

ordered_json path_loss_to_json(const PathLossParams& p) {
  return ordered_json{{"break_distance_m", p.break_distance_m},
                      {"alpha_near_db", p.alpha_near_db},
                      {"beta_near", p.beta_near},
                      {"alpha_far_db", p.alpha_far_db},
                      {"beta_far", p.beta_far},
                      {"shadowing_sigma_db", p.shadowing_sigma_db},
                      {"shadowing_enabled", p.shadowing_enabled}};
}

ordered_json radio_to_json(const RadioParams& r) {
  return ordered_json{{"carrier_ghz", r.carrier_ghz},
                      {"bandwidth_mhz", r.bandwidth_mhz},
                      {"transmit_power_dbm", r.transmit_power_dbm},
                      {"noise_density_dbm_per_mhz", r.noise_density_dbm_per_mhz},
                      {"efficiency", r.efficiency}};
}

}  // namespace

std::string serialize_config(const ExperimentConfig& c) {
  ordered_json j;
  j["scenario"] = {
      {"layout",
       {{"car_count", c.scenario.layout.car_count},
        {"car_length_m", c.scenario.layout.car_length_m},
        {"mr_per_car", c.scenario.layout.mr_per_car},
        {"mr_height_m", c.scenario.layout.mr_height_m}}},
      {"mobility",
       {{"speed_mps", c.scenario.mobility.speed_mps},
        {"update_period_slots", c.scenario.mobility.update_period_slots},
        {"initial_train_offset_m", c.scenario.mobility.initial_train_offset_m}}},
      {"bs_position",
       {{"x_m", c.scenario.bs_position.x},
        {"y_m", c.scenario.bs_position.y},
        {"z_m", c.scenario.bs_position.z}}},
      {"uav_distance_m", c.scenario.uav_distance_m},
      {"uav_height_m", c.scenario.uav_height_m},
      {"flow_count", c.scenario.flow_count},
      {"qos_min_bps", c.scenario.qos_min_bps},
      {"qos_max_bps", c.scenario.qos_max_bps}};
  j["channel"] = {{"antenna",
                   {{"max_gain_dbi", c.channel.antenna.max_gain_dbi},
                    {"half_power_beamwidth_deg", c.channel.antenna.half_power_beamwidth_deg},
                    {"side_lobe_gain_dbi", c.channel.antenna.side_lobe_gain_dbi},
                    {"max_attenuation_db", c.channel.antenna.max_attenuation_db},
                    {"clamp_main_lobe", c.channel.antenna.clamp_main_lobe}}},
                  {"path_loss", path_loss_to_json(c.channel.path_loss)},
                  {"f1", radio_to_json(c.channel.f1)},
                  {"f2", radio_to_json(c.channel.f2)}};
  ordered_json overrides = ordered_json::object();
  if (c.channel.path_loss_bs_mr) overrides["bs_mr"] = path_loss_to_json(*c.channel.path_loss_bs_mr);
  if (c.channel.path_loss_bs_uav)
    overrides["bs_uav"] = path_loss_to_json(*c.channel.path_loss_bs_uav);
  if (c.channel.path_loss_uav_mr)
    overrides["uav_mr"] = path_loss_to_json(*c.channel.path_loss_uav_mr);
  if (c.channel.path_loss_bs_eavesdropper)
    overrides["bs_eavesdropper"] = path_loss_to_json(*c.channel.path_loss_bs_eavesdropper);
  if (!overrides.empty()) {
    j["channel"]["path_loss_overrides"] = overrides;
  }
  j["frame"] = {{"slot_count", c.frame.slot_count},
                {"slot_duration_s", c.frame.slot_duration_s},
                {"scheduling_phase_s", c.frame.scheduling_phase_s}};
  j["scheduler"] = {
      {"bs_antennas", c.scheduler.bs_antennas},
      {"uav_antennas", c.scheduler.uav_antennas},
      {"priority_order",
       c.scheduler.priority_order == PriorityOrder::Descending ? "descending" : "ascending"},
      {"enforce_secrecy", c.scheduler.enforce_secrecy},
      {"contention_enabled", c.scheduler.contention_enabled},
      {"interference_enabled", c.scheduler.interference_enabled},
      {"completed_only_throughput", c.scheduler.completed_only_throughput}};
  j["sweep"] = {{"variable", to_string(c.sweep.variable)}, {"values", c.sweep.values}};
  ordered_json schemes = ordered_json::array();
  for (SchemeKind k : c.schemes) {
    schemes.push_back(to_string(k));
  }
  j["schemes"] = schemes;
  j["seeds"] = c.seeds;
  j["output"] = c.output_dir;
  return j.dump(2) + "\n";
}

ScenarioConfig scenario_config_for(const ExperimentConfig& config, SweepVariable var,
                                   double value) {
  ScenarioConfig sc = config.scenario;
  sc.mobility.slot_duration_s = config.frame.slot_duration_s;
  switch (var) {
    case SweepVariable::FlowCount:
      sc.flow_count = static_cast<int>(std::llround(value));
      break;
    case SweepVariable::UavDistance:
      sc.uav_distance_m = value;
      break;
    case SweepVariable::SlotCount:
      break;
  }
  return sc;
}

SimParams sim_params_for(const ExperimentConfig& config, SweepVariable var, double value) {
  SimParams params{config.channel, config.frame, config.scheduler};
  if (var == SweepVariable::SlotCount) {
    params.frame.slot_count = std::llround(value);
  }
  return params;
}

ScheduleResult run_scheme(SchemeKind scheme, const Scenario& scenario, const SimParams& params) {
  switch (scheme) {
    case SchemeKind::UavAssisted:
      return schedule_uav_assisted(scenario, params);
    case SchemeKind::QoSConcurrent:
      return schedule_qos_concurrent(scenario, params);
    case SchemeKind::Mqis:
      return schedule_mqis(scenario, params);
  }
  throw std::logic_error("run_scheme: bad scheme");
}

namespace {

unsigned worker_count() {
  if (const char* env = std::getenv("HSR_SCHED_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && parsed > 0) {
      return static_cast<unsigned>(parsed);
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

double sample_stddev(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) {
    return 0.0;
  }
  double sum = 0.0;
  for (double x : xs) {
    sum += (x - mean) * (x - mean);
  }
  return std::sqrt(sum / static_cast<double>(xs.size() - 1));
}

}  // namespace

SweepReport run_sweep(const ExperimentConfig& config) {
  std::vector<double> values = config.sweep.values;
  if (values.empty()) {
    switch (config.sweep.variable) {
      case SweepVariable::FlowCount:
        values.push_back(static_cast<double>(config.scenario.flow_count));
        break;
      case SweepVariable::SlotCount:
        values.push_back(static_cast<double>(config.frame.slot_count));
        break;
      case SweepVariable::UavDistance:
        values.push_back(config.scenario.uav_distance_m);
        break;
    }
  }

  struct Task {
    double value;
    SchemeKind scheme;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  tasks.reserve(values.size() * config.schemes.size() * config.seeds.size());
  for (double value : values) {
    for (SchemeKind scheme : config.schemes) {
      for (std::uint64_t seed : config.seeds) {
        tasks.push_back({value, scheme, seed});
      }
    }
  }

  SweepReport report;
  report.variable = config.sweep.variable;
  report.runs.resize(tasks.size());

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size() || failed.load()) {
        return;
      }
      const Task& task = tasks[i];
      try {
        const ScenarioConfig sc = scenario_config_for(config, config.sweep.variable, task.value);
        const SimParams params = sim_params_for(config, config.sweep.variable, task.value);
        const Scenario scenario = build_scenario(sc, task.seed);
        const ScheduleResult result = run_scheme(task.scheme, scenario, params);
        const std::vector<Violation> violations = validate_schedule(result, scenario, params);
        if (!violations.empty()) {
          std::ostringstream os;
          os << "scheduler produced an invalid schedule (" << to_string(task.scheme)
             << ", sweep value " << task.value << ", seed " << task.seed << "): ";
          os << violations.front().constraint << " at slot " << violations.front().slot << ": "
             << violations.front().detail;
          os << " [" << violations.size() << " violation(s) total]";
          throw ValidationFailure(os.str());
        }
        report.runs[i] = {task.value, task.scheme, task.seed, result.metrics};
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
        failed.store(true);
        return;
      }
    }
  };

  const unsigned threads = static_cast<unsigned>(
      std::min<std::size_t>(worker_count(), std::max<std::size_t>(tasks.size(), 1)));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) {
      pool.emplace_back(work);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }

  // Aggregate per (value, scheme); runs are already laid out in that order.
  const std::size_t per_cell = config.seeds.size();
  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    for (std::size_t si = 0; si < config.schemes.size(); ++si) {
      const std::size_t base = (vi * config.schemes.size() + si) * per_cell;
      std::vector<double> completed, throughput, slots;
      for (std::size_t k = 0; k < per_cell; ++k) {
        const Metrics& m = report.runs[base + k].metrics;
        completed.push_back(static_cast<double>(m.completed_flows));
        throughput.push_back(m.system_throughput_bps);
        slots.push_back(static_cast<double>(m.total_slots_used));
      }
      AggregateRecord agg;
      agg.sweep_value = values[vi];
      agg.scheme = config.schemes[si];
      agg.run_count = static_cast<int>(per_cell);
      auto mean = [](const std::vector<double>& xs) {
        double sum = 0.0;
        for (double x : xs) sum += x;
        return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
      };
      agg.mean_completed = mean(completed);
      agg.stddev_completed = sample_stddev(completed, agg.mean_completed);
      agg.mean_throughput_bps = mean(throughput);
      agg.stddev_throughput_bps = sample_stddev(throughput, agg.mean_throughput_bps);
      agg.mean_slots_used = mean(slots);
      agg.stddev_slots_used = sample_stddev(slots, agg.mean_slots_used);
      report.aggregates.push_back(agg);
    }
  }
  return report;
}

namespace {

std::string format_g6(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

}  // namespace

void write_report(const SweepReport& report, const std::string& output_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) {
    throw std::runtime_error(output_dir + ": cannot create output directory: " + ec.message());
  }

  const std::string var = to_string(report.variable);
  {
    const fs::path path = fs::path(output_dir) / "runs.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw std::runtime_error(path.string() + ": cannot open for writing");
    }
    out << "sweep_var,sweep_value,scheme,seed,completed_flows,system_throughput_mbps,"
           "total_slots_used\n";
    for (const RunRecord& r : report.runs) {
      out << var << ',' << format_g6(r.sweep_value) << ',' << to_string(r.scheme) << ','
          << r.seed << ',' << r.metrics.completed_flows << ','
          << format_g6(r.metrics.system_throughput_bps / 1e6) << ','
          << r.metrics.total_slots_used << '\n';
    }
    if (!out.good()) {
      throw std::runtime_error(path.string() + ": write failed");
    }
  }
  {
    const fs::path path = fs::path(output_dir) / "aggregate.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw std::runtime_error(path.string() + ": cannot open for writing");
    }
    out << "sweep_var,sweep_value,scheme,runs,mean_completed_flows,stddev_completed_flows,"
           "mean_system_throughput_mbps,stddev_system_throughput_mbps,mean_total_slots_used,"
           "stddev_total_slots_used\n";
    for (const AggregateRecord& a : report.aggregates) {
      out << var << ',' << format_g6(a.sweep_value) << ',' << to_string(a.scheme) << ','
          << a.run_count << ',' << format_g6(a.mean_completed) << ','
          << format_g6(a.stddev_completed) << ',' << format_g6(a.mean_throughput_bps / 1e6)
          << ',' << format_g6(a.stddev_throughput_bps / 1e6) << ','
          << format_g6(a.mean_slots_used) << ',' << format_g6(a.stddev_slots_used) << '\n';
    }
    if (!out.good()) {
      throw std::runtime_error(path.string() + ": write failed");
    }
  }
}

}  // namespace hsr
