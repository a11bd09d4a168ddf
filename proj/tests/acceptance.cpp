// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mia/cli/cli.hpp"
#include "mia/discovery/discovery.hpp"
#include "mia/discovery/discovery_json.hpp"
#include "mia/discovery/ncc.hpp"
#include "mia/error.hpp"
#include "mia/flows/flows.hpp"
#include "mia/metrics/metrics.hpp"
#include "mia/mission/mission_spec.hpp"
#include "mia/scenario/runner.hpp"
#include "mia/scenario/scenario.hpp"
#include "mia/scenario/synthetic.hpp"

namespace fs = std::filesystem;
using namespace mia;
using nlohmann::json;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string src(const std::string& rel) { return std::string(MIA_SOURCE_DIR) + "/" + rel; }

scenario::Scenario bundled(const std::string& name) { return scenario::load_scenario(src("scenarios/" + name + ".json")); }

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != 0) std::cerr << err.str();
  return code;
}

double reduction(const metrics::MissionMetrics& attack, const metrics::MissionMetrics& base) {
  if (base.plans_completed == 0) return 0.0;
  return (static_cast<double>(base.plans_completed) - static_cast<double>(attack.plans_completed)) /
         static_cast<double>(base.plans_completed);
}

std::vector<double> column(const std::vector<metrics::MissionMetrics>& runs,
                           double metrics::MissionMetrics::*field) {
  std::vector<double> out;
  for (auto& r : runs) out.push_back(r.*field);
  return out;
}

// 1. A 50% slowdown on a lightly loaded workflow costs no completed plans.
Verdict slack_absorbs_slowdown() {
  Verdict v;
  const auto s = bundled("aoc_slack");
  const auto p = scenario::prepare(s);
  for (auto& [role, u] : mission::compute_utilization(p.mission)) {
    v.require(std::abs(u - 0.45) < 1e-9, "utilization of " + role + " is " + fmt(u));
  }
  int differing = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto seed = s.sim.base_seed + i;
    const auto attack = scenario::run_replication(p, seed, true);
    const auto base = scenario::run_replication(p, seed, false);
    if (attack.timeline.count(threat::EventKind::EffectOnset) != 1) v.require(false, "no effect onset");
    if (attack.metrics.plans_completed != base.metrics.plans_completed) ++differing;
  }
  v.require(differing == 0, std::to_string(differing) + " seeds lost plans");
  v.note("50 seeds, per-seed reduction 0 in " + std::to_string(50 - differing));
  return v;
}

// 2. Outage sweep: reduction grows with duration and crosses 10% once.
Verdict outage_threshold() {
  Verdict v;
  const std::vector<double> days{1, 3, 7, 14, 21, 28, 35, 42};
  auto s = bundled("aoc_outage");
  const std::size_t n = 50;
  const auto base = scenario::run_batch(scenario::prepare(s), n, s.sim.base_seed, false);
  const auto base_summary = metrics::aggregate(base);

  std::vector<std::vector<double>> per_seed(days.size());
  std::vector<double> means;
  for (std::size_t k = 0; k < days.size(); ++k) {
    s.defender->detect_delay = sim::Fixed{days[k] * 86400.0};
    const auto runs = scenario::run_batch(scenario::prepare(s), n, s.sim.base_seed, true);
    for (std::size_t i = 0; i < n; ++i) per_seed[k].push_back(reduction(runs[i], base[i]));
    means.push_back(metrics::compare(metrics::aggregate(runs), base_summary).reduction);
  }
  std::size_t violations = 0;
  for (std::size_t k = 1; k < days.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) violations += per_seed[k][i] < per_seed[k - 1][i];
    v.require(means[k] >= means[k - 1], "mean drops at " + fmt(days[k]) + " days");
  }
  v.require(violations == 0, std::to_string(violations) + " per-seed monotonicity violations");

  int crossings = 0;
  std::size_t first_flag = days.size();
  for (std::size_t k = 0; k < days.size(); ++k) {
    const bool flag = means[k] >= 0.10;
    if (flag && first_flag == days.size()) first_flag = k;
    if (k > 0 && flag != (means[k - 1] >= 0.10)) ++crossings;
  }
  v.require(crossings == 1 && first_flag > 0 && first_flag < days.size(), "flag crossings " + std::to_string(crossings));
  for (std::size_t k = 0; k < first_flag && k < days.size(); ++k) {
    v.require(means[k] < 0.10, "below-threshold point at " + fmt(days[k]) + " days is flagged");
  }
  std::string curve;
  for (std::size_t k = 0; k < days.size(); ++k) {
    curve += (k ? " " : "") + fmt(days[k]) + "d:" + fmt(100 * means[k], 3) + "%";
  }
  v.note(curve);
  if (first_flag < days.size()) v.note("first flagged at " + fmt(days[first_flag]) + " days");
  return v;
}

struct CheckpointRuns {
  Verdict verdict;
  bool before_zero = false;
};

// 3. Integrity attacks only matter after the day's last checkpoint.
CheckpointRuns checkpoint_window() {
  CheckpointRuns out;
  Verdict& v = out.verdict;
  const std::size_t n = 50;
  const auto s0 = bundled("aoc_integrity");
  const double last_check = *std::max_element(s0.mission.checkpoints.begin(), s0.mission.checkpoints.end());

  // (a) start at 02:00; the defender evicts well before the last check.
  auto before = s0;
  before.attacker->start.at = 2 * 3600.0;
  const auto pb = scenario::prepare(before);
  int before_nonzero = 0, late_eviction = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto r = scenario::run_replication(pb, s0.sim.base_seed + i, true);
    const auto* ev = r.timeline.first(threat::EventKind::Eviction);
    if (!r.timeline.first(threat::EventKind::EffectOnset) || !ev || ev->time >= last_check) ++late_eviction;
    if (r.metrics.corrupted_fraction != 0.0) ++before_nonzero;
  }
  v.require(late_eviction == 0, std::to_string(late_eviction) + " runs not remediated before the last check");
  v.require(before_nonzero == 0, std::to_string(before_nonzero) + " early-attack runs show corruption");
  out.before_zero = before_nonzero == 0 && late_eviction == 0;

  // (b) the same attack at 13:00.
  auto after = s0;
  after.attacker->start.at = 13 * 3600.0;
  const auto pa = scenario::prepare(after);
  int after_zero = 0;
  double after_min = 1.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto r = scenario::run_replication(pa, s0.sim.base_seed + i, true);
    if (!(r.metrics.corrupted_fraction > 0.0)) ++after_zero;
    after_min = std::min(after_min, r.metrics.corrupted_fraction);
  }
  v.require(after_zero == 0, std::to_string(after_zero) + " late-attack runs show no corruption");

  // (c) no defender, so the effect lasts the rest of the day. Capability
  // rises with proficiency and falls with agility (a step-time multiplier),
  // so sweep proficiency up at agility 1, then agility down at proficiency 1.
  struct Skill {
    double proficiency;
    double agility;
  };
  const std::vector<std::vector<Skill>> sweeps{
      {{0.0, 1.0}, {0.25, 1.0}, {0.5, 1.0}, {0.75, 1.0}, {1.0, 1.0}},
      {{1.0, 1.0}, {1.0, 0.75}, {1.0, 0.5}, {1.0, 0.25}, {1.0, 0.1}}};
  std::vector<std::vector<double>> fraction;
  std::size_t post_onset = 0, post_onset_corrupted = 0, violations = 0;
  const std::size_t stage = pa.mission.stages() - 1;
  for (const auto& sweep : sweeps) {
    std::vector<std::vector<double>> curve;
    for (const auto& k : sweep) {
      auto s = after;
      s.defender.reset();
      s.attacker->proficiency = k.proficiency;
      s.attacker->agility = k.agility;
      const auto p = scenario::prepare(s);
      curve.emplace_back();
      for (std::uint64_t i = 0; i < n; ++i) {
        const auto r = scenario::run_replication(p, s0.sim.base_seed + i, true);
        curve.back().push_back(r.metrics.corrupted_fraction);
        if (&sweep != &sweeps.front() || k.proficiency != 1.0) continue;
        const auto* onset = r.timeline.first(threat::EventKind::EffectOnset);
        if (!onset) continue;
        for (auto& item : r.mission.items) {
          if (!item.completed() || !(item.stage_finished_at[stage] > onset->time)) continue;
          ++post_onset;
          post_onset_corrupted += item.outcome == mission::Outcome::CompletedCorrupted;
        }
      }
    }
    for (std::size_t k = 1; k < curve.size(); ++k) {
      for (std::size_t i = 0; i < n; ++i) violations += curve[k][i] < curve[k - 1][i];
    }
    fraction.insert(fraction.end(), curve.begin(), curve.end());
  }
  v.require(violations == 0, std::to_string(violations) + " per-seed sweep violations");
  const bool zero_end = std::all_of(fraction[0].begin(), fraction[0].end(), [](double f) { return f == 0.0; });
  v.require(zero_end, "proficiency 0 still corrupts");
  v.require(post_onset > 0 && post_onset == post_onset_corrupted,
            std::to_string(post_onset_corrupted) + "/" + std::to_string(post_onset) + " post-onset items corrupted");
  double lo = 1.0, hi = 0.0;
  for (auto& col : fraction) {
    const double m = metrics::summarize(col).mean;
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  v.note("before-check runs all 0; after-check min " + fmt(after_min) + "; post-onset corrupted " +
         std::to_string(post_onset_corrupted) + "/" + std::to_string(post_onset) + "; sweep means " + fmt(lo) +
         " .. " + fmt(hi));
  return out;
}

// 4. Attacks keyed to the workflow beat randomly timed ones.
Verdict timing_beats_randomness() {
  Verdict v;
  const std::size_t n = 100;
  auto s = bundled("aoc_integrity");
  auto impact = [&](threat::StartPolicy start) {
    auto t = s;
    t.attacker->start = start;
    const auto runs = scenario::run_batch(scenario::prepare(t), n, s.sim.base_seed, true);
    return metrics::summarize(column(runs, &metrics::MissionMetrics::corrupted_fraction));
  };
  threat::StartPolicy triggered;
  triggered.kind = threat::StartKind::ProcessTriggered;
  triggered.task = "flight_planning";
  triggered.after_time_of_day = 12 * 3600.0;
  threat::StartPolicy random;
  random.kind = threat::StartKind::Random;
  random.window_begin = 0.0;
  random.window_end = s.mission.day_length;
  const auto a = impact(triggered);
  const auto b = impact(random);
  const double a_hw = a.ci_half_width.value_or(0.0), b_hw = b.ci_half_width.value_or(0.0);
  v.require(a.mean >= b.mean, "triggered mean below random");
  v.require(a.mean - a_hw > b.mean + b_hw, "95% intervals overlap");
  v.note("triggered " + fmt(a.mean) + " +/- " + fmt(a_hw) + ", random " + fmt(b.mean) + " +/- " + fmt(b_hw));
  return v;
}

// 5. Static propagation flags the task the simulation shows untouched.
Verdict static_over_approximation(bool before_check_zero, const fs::path& tmp) {
  Verdict v;
  const auto s = bundled("aoc_integrity");
  const auto out = (tmp / "propagate.json").string();
  const int code = cli({"propagate", "--graph", src("scenarios/aoc_integrity.json"), "--compromised",
                        s.attacker->target, "--out", out});
  v.require(code == 0, "propagate exit " + std::to_string(code));
  bool flagged = false;
  if (code == 0) {
    const auto doc = json::parse(slurp(out));
    for (auto& t : doc["tasks"]) {
      if (t["task"] == "flight_planning") flagged = t["status"] == "impacted";
    }
  }
  v.require(flagged, "flight_planning not flagged");
  v.require(before_check_zero, "before-checkpoint simulation was not clean");
  v.note("static: flight_planning impacted; simulated before-check impact 0");
  return v;
}

double reference_ncc(const std::vector<double>& x, const std::vector<double>& y, int lag) {
  std::vector<double> a, b;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const long j = static_cast<long>(t) + lag;
    if (j >= 0 && j < static_cast<long>(y.size())) {
      a.push_back(x[t]);
      b.push_back(y[static_cast<std::size_t>(j)]);
    }
  }
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(a.size());
  mb /= static_cast<double>(b.size());
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// 6. NCC against a double-loop reference.
Verdict ncc_oracle() {
  Verdict v;
  std::mt19937_64 gen(20240601);
  std::uniform_int_distribution<int> len(16, 1024), lag_d(0, 32);
  std::normal_distribution<double> noise;
  double worst = 0.0, worst_identity = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = len(gen);
    const int lag = std::min(lag_d(gen), n - 3);
    std::vector<double> x(static_cast<std::size_t>(n)), y(x.size());
    for (auto& e : x) e = noise(gen);
    for (auto& e : y) e = noise(gen);
    worst = std::max(worst, std::abs(discovery::ncc(x, y, lag) - reference_ncc(x, y, lag)));

    std::vector<double> neg(x.size()), affine(x.size()), shifted(x.size(), 0.0);
    const double scale = 0.5 + std::abs(noise(gen)), offset = 10 * noise(gen);
    for (std::size_t i = 0; i < x.size(); ++i) {
      neg[i] = -x[i];
      affine[i] = scale * x[i] + offset;
      if (i + static_cast<std::size_t>(lag) < shifted.size()) shifted[i + static_cast<std::size_t>(lag)] = x[i];
    }
    for (double err : {std::abs(discovery::ncc(x, x, 0) - 1.0), std::abs(discovery::ncc(x, neg, 0) + 1.0),
                       std::abs(discovery::ncc(x, shifted, lag) - 1.0),
                       std::abs(discovery::ncc(affine, y, lag) - discovery::ncc(x, y, lag))}) {
      worst_identity = std::max(worst_identity, err);
    }
  }
  v.require(worst <= 1e-9, "reference gap " + fmt(worst));
  v.require(worst_identity <= 1e-9, "identity gap " + fmt(worst_identity));
  v.note("1000 pairs, max gap " + fmt(worst, 3) + ", identities " + fmt(worst_identity, 3));
  return v;
}

std::set<discovery::Edge> kind_of(const std::set<discovery::Edge>& edges, const std::string& kind) {
  std::set<discovery::Edge> out;
  for (auto& e : edges) {
    if (e.kind == kind) out.insert(e);
  }
  return out;
}

// 7. Planted cascades are recovered; independent traffic raises nothing.
Verdict discovery_quality() {
  Verdict v;
  auto topology = [](const std::string& name) {
    return scenario::topology_from_json(scenario::read_json_file(src("tests/fixtures/" + name)));
  };
  auto score = [](const scenario::GeneratedFlows& g) {
    const auto r = discovery::discover(g.records);
    return discovery::evaluate(discovery::edges_of(r.indirect), kind_of(discovery::edges_from_json(g.truth), "indirect"));
  };

  const auto clean = score(scenario::generate_flows(topology("cascade_topology.json"), 3600, 1));
  v.require(clean.precision == 1.0 && clean.recall == 1.0,
            "noiseless P=" + fmt(clean.precision) + " R=" + fmt(clean.recall));

  const auto noisy = topology("cascade_noisy_topology.json");
  double min_p = 1.0, min_r = 1.0;
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto e = score(scenario::generate_flows(noisy, 3600, seed));
    min_p = std::min(min_p, e.precision);
    min_r = std::min(min_r, e.recall);
    tp += e.true_positives.size();
    fp += e.false_positives.size();
    fn += e.false_negatives.size();
  }
  v.require(min_p >= 0.9 && min_r >= 0.9, "noisy per-seed min P=" + fmt(min_p) + " R=" + fmt(min_r));

  const auto null_topo = topology("null_topology.json");
  int emitted = 0;
  const int trials = 200;
  for (std::uint64_t seed = 1; seed <= static_cast<std::uint64_t>(trials); ++seed) {
    emitted += !discovery::discover(scenario::generate_flows(null_topo, 1000, seed).records).indirect.empty();
  }
  const double fpr = static_cast<double>(emitted) / trials;
  v.require(fpr <= 0.01, "null false-positive rate " + fmt(fpr));
  v.note("noiseless P=R=1; noisy 20 seeds min P=" + fmt(min_p) + " R=" + fmt(min_r) + " (TP " + std::to_string(tp) +
         " FP " + std::to_string(fp) + " FN " + std::to_string(fn) + "); null FPR " + fmt(fpr));
  return v;
}

// 8. The muel-style fixture yields exactly its three retry chains.
Verdict retry_fixture() {
  Verdict v;
  std::ifstream in(src("tests/fixtures/muel_flows.csv"));
  const auto records = flows::parse_flows(in).records;
  const auto r = discovery::discover(records);
  const auto truth = kind_of(discovery::edges_from_json(scenario::read_json_file(src("tests/fixtures/muel_truth.json"))),
                             "retry");
  v.require(r.retry_chains.size() == 3, std::to_string(r.retry_chains.size()) + " chains");
  v.require(discovery::edges_of(r.retry_chains) == truth, "chains differ from planted set");
  for (auto& c : r.retry_chains) {
    v.require(flows::to_string(c.fallback) == "muel2:502/tcp", "fallback " + flows::to_string(c.fallback));
  }
  std::string clients;
  for (auto& c : r.retry_chains) clients += (clients.empty() ? "" : ",") + c.client;
  v.note("3 chains (" + clients + ") falling back to muel2:502/tcp");
  return v;
}

// 9. Same seed, same bytes; interval width shrinks as 1/sqrt(n).
Verdict determinism_and_statistics(const fs::path& tmp) {
  Verdict v;
  const auto scen = src("scenarios/aoc_integrity.json");
  for (const char* name : {"a.csv", "b.csv"}) {
    v.require(cli({"simulate", "--scenario", scen, "--replications", "20", "--seed", "42", "--out",
                   (tmp / name).string(), "--summary", (tmp / (std::string(name) + ".json")).string()}) == 0,
              "simulate failed");
  }
  const auto a = slurp(tmp / "a.csv");
  v.require(!a.empty() && a == slurp(tmp / "b.csv"), "metrics CSV differs between identical runs");

  const auto p = scenario::prepare(bundled("aoc_integrity"));
  auto half_width = [&](std::size_t n) {
    const auto runs = scenario::run_batch(p, n, 42, true);
    return metrics::summarize(column(runs, &metrics::MissionMetrics::corrupted_fraction)).ci_half_width.value_or(0.0);
  };
  const double h50 = half_width(50), h200 = half_width(200);
  const double ratio = h200 > 0 ? h50 / h200 : 0.0;
  v.require(std::abs(ratio - 2.0) <= 0.3, "half-width ratio " + fmt(ratio));
  v.note("CSV identical; half-width n=50 " + fmt(h50) + ", n=200 " + fmt(h200) + ", ratio " + fmt(ratio));
  return v;
}

}  // namespace

int main() {
  const auto tmp = fs::temp_directory_path() / "mia_acceptance";
  fs::create_directories(tmp);
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Verdict()>& run) {
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failures += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << id << " " << name << ": " << v.detail << std::endl;
  };

  bool before_zero = false;
  report(1, "slack absorbs slowdown", slack_absorbs_slowdown);
  report(2, "outage duration threshold", outage_threshold);
  report(3, "consistency-check window", [&] {
    auto r = checkpoint_window();
    before_zero = r.before_zero;
    return r.verdict;
  });
  report(4, "timing beats randomness", timing_beats_randomness);
  report(5, "static over-approximation", [&] { return static_over_approximation(before_zero, tmp); });
  report(6, "ncc oracle", ncc_oracle);
  report(7, "discovery precision/recall", discovery_quality);
  report(8, "retry-chain fixture", retry_fixture);
  report(9, "determinism and statistics", [&] { return determinism_and_statistics(tmp); });
  fs::remove_all(tmp);
  return failures == 0 ? 0 : 1;
}
