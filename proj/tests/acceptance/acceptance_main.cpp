// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hsr/experiment.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

namespace {

struct Criterion {
  int id;
  std::string name;
  std::function<bool(std::string&)> run;
};

unsigned worker_count() {
  if (const char* env = std::getenv("HSR_SCHED_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed > 0) {
      return static_cast<unsigned>(parsed);
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const unsigned threads = std::min<std::size_t>(worker_count(), std::max<std::size_t>(count, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) {
          return;
        }
        body(i);
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
}

bool approx(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// --- criterion 1: formula golden values ------------------------------------

bool formula_golden_values(std::string& detail) {
  using namespace hsr;
  std::ostringstream os;
  bool ok = true;

  const AntennaParams antenna;
  ok &= antenna_gain_dbi(0.0, antenna) == 20.0;
  ok &= approx(antenna_gain_dbi(7.5, antenna), 16.99, 0.01);

  const PathLossParams pl;
  ok &= approx(path_loss_db(200.0, pl), 78.93, 0.01);
  ok &= approx(path_loss_db(100.0, pl), 79.75, 0.01);

  const RadioParams f1;  // 850 MHz, eta 0.5
  const double rate = shannon_rate_bps(noise_floor_dbm(f1), 0.0, f1);  // SINR = 1
  ok &= approx(rate, 425e6, 1e3);

  os << "gain(0)=" << antenna_gain_dbi(0.0, antenna)
     << " gain(7.5)=" << antenna_gain_dbi(7.5, antenna) << " pl(200)=" << path_loss_db(200.0, pl)
     << " pl(100)=" << path_loss_db(100.0, pl) << " rate(sinr=1)=" << rate / 1e6 << "Mbps";
  detail = os.str();
  return ok;
}

// --- criterion 2: constraint validator over randomized scenarios -----------

bool randomized_validator_suite(std::string& detail) {
  using namespace hsr;
  const int scenario_count = 10000;
  std::atomic<long> violation_count{0};
  std::atomic<long> run_count{0};
  std::mutex first_mutex;
  std::string first_violation;

  parallel_for(static_cast<std::size_t>(scenario_count), [&](std::size_t i) {
    std::mt19937_64 rng(0xACCE57ULL + i);
    ScenarioConfig sc;
    sc.flow_count = 2 + static_cast<int>(rng() % 17);  // 2..18
    const Scenario scenario = build_scenario(sc, static_cast<std::uint64_t>(i));
    SimParams params = fixtures::default_params();
    params.frame.slot_count = 100 + static_cast<long>(rng() % 7901);  // 100..8000
    for (SchemeKind scheme :
         {SchemeKind::UavAssisted, SchemeKind::QoSConcurrent, SchemeKind::Mqis}) {
      const ScheduleResult result = run_scheme(scheme, scenario, params);
      const std::vector<Violation> violations = validate_schedule(result, scenario, params);
      run_count.fetch_add(1);
      if (!violations.empty()) {
        violation_count.fetch_add(static_cast<long>(violations.size()));
        std::lock_guard<std::mutex> lock(first_mutex);
        if (first_violation.empty()) {
          std::ostringstream os;
          os << to_string(scheme) << " scenario " << i << " slot " << violations[0].slot << ": "
             << violations[0].constraint << " (" << violations[0].detail << ")";
          first_violation = os.str();
        }
      }
    }
  });

  std::ostringstream os;
  os << run_count.load() << " runs, " << violation_count.load() << " violations";
  if (!first_violation.empty()) {
    os << "; first: " << first_violation;
  }
  detail = os.str();
  return violation_count.load() == 0;
}

// --- criterion 3: exhaustive oracle bound ----------------------------------

bool oracle_bound(std::string& detail) {
  const int instances = 200;
  std::atomic<int> matches{0};
  std::atomic<int> exceeded{0};
  parallel_for(static_cast<std::size_t>(instances), [&](std::size_t i) {
    fixtures::MicroSpec spec;
    spec.seed = 1000 + i;
    spec.flow_count = 1 + static_cast<int>(i % 3);
    spec.slot_count = 8 + static_cast<long>((i * 7) % 13);
    const fixtures::Micro micro = fixtures::make_micro(spec);
    const hsr::ScheduleResult r =
        hsr::run_scheme(hsr::SchemeKind::UavAssisted, micro.scenario, micro.params);
    const int optimal = oracle::optimal_completed_flows(micro.scenario, micro.params);
    if (r.metrics.completed_flows > optimal) {
      exceeded.fetch_add(1);
    } else if (r.metrics.completed_flows == optimal) {
      matches.fetch_add(1);
    }
  });
  const double match_rate = static_cast<double>(matches.load()) / instances;
  std::ostringstream os;
  os << "heuristic exceeded the optimum " << exceeded.load() << " times; matched "
     << matches.load() << "/" << instances << " (" << 100.0 * match_rate << "%)";
  detail = os.str();
  return exceeded.load() == 0 && match_rate >= 0.70;
}

// --- criteria 4-6: trend sweeps at the default configuration ---------------

struct CellMeans {
  double completed = 0.0;
  double throughput = 0.0;
};

std::map<std::pair<double, hsr::SchemeKind>, CellMeans> sweep_means(
    const hsr::ExperimentConfig& config) {
  const hsr::SweepReport report = hsr::run_sweep(config);
  std::map<std::pair<double, hsr::SchemeKind>, CellMeans> means;
  for (const hsr::AggregateRecord& a : report.aggregates) {
    means[{a.sweep_value, a.scheme}] = {a.mean_completed, a.mean_throughput_bps};
  }
  return means;
}

bool trend_gains(std::string& detail) {
  using namespace hsr;
  ExperimentConfig config = default_config();  // 18 flows, distance 150, M 8000, seeds 0..19
  config.sweep.variable = SweepVariable::FlowCount;
  config.sweep.values = {18};
  const auto means = sweep_means(config);
  const CellMeans uav = means.at({18.0, SchemeKind::UavAssisted});
  const CellMeans qos = means.at({18.0, SchemeKind::QoSConcurrent});
  const CellMeans mqis = means.at({18.0, SchemeKind::Mqis});

  bool ok = true;
  for (const CellMeans& base : {qos, mqis}) {
    ok &= uav.completed > base.completed && uav.completed > 1.10 * base.completed;
    ok &= uav.throughput > base.throughput && uav.throughput > 1.10 * base.throughput;
  }
  std::ostringstream os;
  os << "mean completed uav=" << uav.completed << " qos=" << qos.completed
     << " mqis=" << mqis.completed << "; mean throughput (Mbps) uav=" << uav.throughput / 1e6
     << " qos=" << qos.throughput / 1e6 << " mqis=" << mqis.throughput / 1e6;
  detail = os.str();
  return ok;
}

bool slot_count_saturation(std::string& detail) {
  using namespace hsr;
  ExperimentConfig config = default_config();
  config.sweep.variable = SweepVariable::SlotCount;
  config.sweep.values = {2000, 4000, 8000, 12000};
  const auto means = sweep_means(config);

  bool ok = true;
  std::ostringstream os;
  for (SchemeKind scheme : config.schemes) {
    os << to_string(scheme) << ":";
    double prev = -1.0;
    for (double value : config.sweep.values) {
      const double mean = means.at({value, scheme}).completed;
      os << " " << mean;
      if (prev >= 0.0 && mean < prev - 1e-9) {
        ok = false;
        os << "(<prev)";
      }
      prev = mean;
    }
    const double at8k = means.at({8000.0, scheme}).completed;
    const double at12k = means.at({12000.0, scheme}).completed;
    const double change = at8k > 0 ? std::abs(at12k - at8k) / at8k : std::abs(at12k - at8k);
    if (change >= 0.05) {
      ok = false;
      os << " [8k->12k change " << 100 * change << "%]";
    }
    os << "; ";
  }
  detail = os.str();
  return ok;
}

bool uav_distance_unimodality(std::string& detail) {
  using namespace hsr;
  ExperimentConfig config = default_config();
  config.schemes = {SchemeKind::UavAssisted};
  config.sweep.variable = SweepVariable::UavDistance;
  config.sweep.values = {50, 100, 150, 200, 300, 400};
  const auto means = sweep_means(config);

  std::vector<double> curve;
  std::ostringstream os;
  for (double value : config.sweep.values) {
    curve.push_back(means.at({value, SchemeKind::UavAssisted}).completed);
    os << curve.back() << " ";
  }
  double interior_max = 0.0;
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    interior_max = std::max(interior_max, curve[i]);
  }
  detail = os.str();
  return interior_max > curve.front() && interior_max > curve.back();
}

// --- criterion 7: byte-identical reports -----------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool deterministic_reports(std::string& detail) {
  using namespace hsr;
  ExperimentConfig config = default_config();
  config.sweep.variable = SweepVariable::FlowCount;
  config.sweep.values = {6, 18};
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "hsr_sched_acceptance";
  fs::remove_all(dir);
  write_report(run_sweep(config), (dir / "first").string());
  write_report(run_sweep(config), (dir / "second").string());
  const bool runs_equal = slurp(dir / "first" / "runs.csv") == slurp(dir / "second" / "runs.csv");
  const bool agg_equal =
      slurp(dir / "first" / "aggregate.csv") == slurp(dir / "second" / "aggregate.csv");
  fs::remove_all(dir);
  detail = runs_equal && agg_equal ? "both CSVs byte-identical across two runs"
                                   : "CSV bytes differ between runs";
  return runs_equal && agg_equal;
}

// --- criterion 8: relay-decision case table ---------------------------------

bool relay_decision_cases(std::string& detail) {
  using namespace hsr;
  const SimParams params = fixtures::default_params();
  const NodePositions pos =
      positions_at_slot(fixtures::manual_scenario({{4, 1e8}}, 190.0), 0);
  const ChannelContext ctx{pos, params.channel, nullptr};
  const PathEstimates est = estimate_standalone_throughput({0, NodeId::mr(4), 1e8}, ctx,
                                                           params.frame);
  const double q_direct = est.q_l1_bps;
  const double q_relay = std::min(est.q_l2_bps, est.q_l2p_bps);
  const double lo = std::min(q_direct, q_relay), hi = std::max(q_direct, q_relay);

  std::ostringstream os;
  bool ok = true;

  // both feasible: the cheaper estimate wins
  const double both_q = lo * 0.5;
  const Scenario both = fixtures::manual_scenario({{4, both_q}}, 190.0);
  const Verdict both_verdict = decide_all(both, params).decisions[0].verdict;
  const Verdict expected_both =
      estimate_slots(both_q, Verdict::Direct, est, params.frame) <=
              estimate_slots(both_q, Verdict::Relayed, est, params.frame)
          ? Verdict::Direct
          : Verdict::Relayed;
  ok &= both_verdict == expected_both;
  os << "both->" << (both_verdict == Verdict::Direct ? "direct" : "relayed");

  // exactly one path feasible
  const Scenario single = fixtures::manual_scenario({{4, (lo + hi) / 2}}, 190.0);
  const Verdict single_verdict = decide_all(single, params).decisions[0].verdict;
  const Verdict expected_single = q_direct > q_relay ? Verdict::Direct : Verdict::Relayed;
  ok &= single_verdict == expected_single;
  os << ", one-path->" << (single_verdict == Verdict::Direct ? "direct" : "relayed");

  // neither path feasible
  const Scenario neither = fixtures::manual_scenario({{4, hi * 2}}, 190.0);
  ok &= decide_all(neither, params).decisions[0].verdict == Verdict::Abandoned;
  os << ", neither->abandoned";

  // both feasible but the eavesdropper sits on the destination: forced relay
  const double mr_offset = (12 + 0.5) * (200.0 / 24.0);
  const Scenario leaky = fixtures::manual_scenario({{12, lo * 0.5}}, mr_offset);
  ok &= decide_all(leaky, params).decisions[0].verdict == Verdict::Relayed;
  os << ", secrecy-blocked->relayed";

  detail = os.str();
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[i + 1]);
    }
  }

  std::vector<Criterion> criteria{
      {1, "formula golden values", formula_golden_values},
      {2, "constraint validator over 10000 randomized scenarios", randomized_validator_suite},
      {3, "exhaustive-oracle bound on micro instances", oracle_bound},
      {4, "UAV scheme beats both baselines by >10% at defaults", trend_gains},
      {5, "slot-count saturation: non-decreasing and steady", slot_count_saturation},
      {6, "UAV-distance curve peaks at an interior point", uav_distance_unimodality},
      {7, "byte-identical reports for identical configs", deterministic_reports},
      {8, "relay-decision case table", relay_decision_cases},
  };

  bool all_pass = true;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) {
      continue;
    }
    std::string detail;
    bool pass = false;
    try {
      pass = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %d: %s - %s [%s]\n", c.id, pass ? "PASS" : "FAIL", c.name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    all_pass &= pass;
  }
  return all_pass ? 0 : 1;
}
