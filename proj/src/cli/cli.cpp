#include "mia/cli/cli.hpp"

#include <CLI11.hpp>

#include "mia/error.hpp"

namespace mia::cli {

namespace {

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mission impact assessment toolkit", "mia"};
  app.require_subcommand(1);

  DiscoverOptions disc;
  std::string signal = "counts";
  std::string granularity = "channel";
  auto* discover = app.add_subcommand("discover", "Infer service dependencies from a flow CSV");
  discover->add_option("--flows", disc.flows, "Flow CSV")->required();
  discover->add_option("--bin-width", disc.params.indirect.bin_width, "Seconds per bin")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  discover->add_option("--max-lag", disc.params.indirect.max_lag, "Largest lag in bins")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  discover->add_option("--ncc-threshold", disc.params.indirect.threshold, "Minimum correlation")
      ->check(CLI::Range(-1.0, 1.0))
      ->capture_default_str();
  discover->add_option("--min-activity", disc.params.indirect.min_activity, "Minimum flows per channel")
      ->capture_default_str();
  discover->add_option("--episode-gap", disc.params.retry.episode_gap, "Retry episode window in seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  discover->add_option("--min-support", disc.params.retry.min_support, "Minimum retry episodes")->capture_default_str();
  discover->add_option("--dominance", disc.params.retry.dominance, "Retry dominance ratio")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  discover->add_option("--signal", signal, "counts or bytes")
      ->check(CLI::IsMember({"counts", "bytes"}))
      ->capture_default_str();
  discover->add_option("--granularity", granularity, "channel or service")
      ->check(CLI::IsMember({"channel", "service"}))
      ->capture_default_str();
  discover->add_option("--threads", disc.params.indirect.threads, "Worker threads for pair scoring")
      ->check(CLI::PositiveNumber);
  discover->add_flag("--lenient", disc.lenient, "Skip malformed flow lines instead of failing");
  discover->add_option("--out", disc.out, "Output document (stdout if omitted)");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run replications of a scenario");
  simulate->add_option("--scenario", sim.scenario, "Scenario document")->required();
  simulate->add_option("--replications", sim.replications, "Overrides sim.replications")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Overrides sim.base_seed");
  simulate->add_option("--threads", sim.threads, "Worker threads")->check(CLI::PositiveNumber);
  simulate->add_flag("--baseline", sim.baseline, "Also run the attack-free variant and compare");
  simulate->add_option("--threshold", sim.threshold, "Significant reduction, as a fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  simulate->add_option("--out", sim.out, "Per-replication metrics CSV")->required();
  simulate->add_option("--baseline-out", sim.baseline_out, "Metrics CSV for the attack-free runs");
  simulate->add_option("--summary", sim.summary, "Summary document (stdout if omitted)");

  PropagateOptions prop;
  std::string compromised;
  auto* propagate = app.add_subcommand("propagate", "Static impact of compromised assets on mission tasks");
  propagate->add_option("--graph", prop.graph, "Graph, discovery output or scenario document")->required();
  propagate->add_option("--compromised", compromised, "Comma-separated asset ids");
  propagate->add_option("--mission", prop.mission, "Mission or scenario document (defaults to --graph)");
  propagate->add_option("--out", prop.out, "Output document (stdout if omitted)");

  GenFlowsOptions gen;
  auto* gen_flows = app.add_subcommand("gen-flows", "Generate synthetic flows with ground truth");
  gen_flows->add_option("--topology", gen.topology, "Synthetic topology document")->required();
  gen_flows->add_option("--duration", gen.duration, "Seconds of traffic")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_flows->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  gen_flows->add_option("--out", gen.out, "Flow CSV")->required();
  gen_flows->add_option("--truth", gen.truth, "Ground-truth document")->required();

  ReportOptions rep;
  auto* report = app.add_subcommand("report", "Summarise a metrics CSV");
  report->add_option("--metrics", rep.metrics, "Metrics CSV")->required();
  report->add_option("--baseline", rep.baseline, "Baseline metrics CSV to compare against");
  report->add_option("--threshold", rep.threshold, "Significant reduction, as a fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "mia: " << e.what() << '\n';
    if (!app.get_subcommands().empty()) err << app.get_subcommands().front()->help();
    return kExitUsage;
  }

  try {
    if (*discover) {
      disc.params.signal = signal == "bytes" ? flows::Signal::Bytes : flows::Signal::Counts;
      disc.params.granularity =
          granularity == "service" ? discovery::Granularity::Service : discovery::Granularity::Channel;
      return cmd_discover(disc, out);
    }
    if (*simulate) return cmd_simulate(sim, out);
    if (*propagate) {
      prop.compromised = split_ids(compromised);
      return cmd_propagate(prop, out);
    }
    if (*gen_flows) return cmd_gen_flows(gen, out);
    if (*report) return cmd_report(rep, out);
  } catch (const Error& e) {
    err << "mia: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace mia::cli
