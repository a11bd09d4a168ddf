#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mia/infra/graph.hpp"
#include "mia/infra/graph_json.hpp"
#include "test_util.hpp"

using namespace mia;
using namespace mia::infra;
using mia::testing::code_of;

namespace {

DependencyEdge dep(const std::string& from, const std::string& to) {
  DependencyEdge e;
  e.from = from;
  e.to = to;
  return e;
}

GraphSpec chain_spec(std::vector<std::string> ids) {
  GraphSpec s;
  for (auto& id : ids) s.assets.push_back({id, AssetKind::Device, id, std::nullopt});
  for (std::size_t i = 0; i + 1 < ids.size(); ++i) s.edges.push_back(dep(ids[i], ids[i + 1]));
  return s;
}

std::string node(int i) { return "n" + std::to_string(i); }

GraphSpec random_spec(std::mt19937_64& gen, int n, double p_edge, bool acyclic) {
  GraphSpec s;
  for (int i = 0; i < n; ++i) s.assets.push_back({node(i), AssetKind::Service, "", std::nullopt});
  std::bernoulli_distribution coin(p_edge);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || (acyclic && j <= i)) continue;
      if (coin(gen)) s.edges.push_back(dep(node(i), node(j)));
    }
  }
  return s;
}

// Oracle: grow the set by any node with an edge into it until nothing changes.
std::set<std::string> fixpoint_dependents(const GraphSpec& s, std::set<std::string> set) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& e : s.edges) {
      if (set.count(e.to) && !set.count(e.from)) {
        set.insert(e.from);
        changed = true;
      }
    }
  }
  return set;
}

// Oracle: forward closure along dependency edges from one asset.
std::set<std::string> depends_on(const GraphSpec& s, const std::string& from) {
  std::set<std::string> seen{from};
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& e : s.edges) {
      if (seen.count(e.from) && !seen.count(e.to)) {
        seen.insert(e.to);
        changed = true;
      }
    }
  }
  return seen;
}

// Oracle: Jacobi iteration of own x min(deps) from all-ones, until converged.
std::map<std::string, double> iterate_performance(const GraphSpec& s, const std::map<std::string, double>& own) {
  std::map<std::string, double> p;
  for (auto& a : s.assets) p[a.id] = 1.0;
  for (int round = 0; round < 10000; ++round) {
    std::map<std::string, double> next;
    double delta = 0.0;
    for (auto& a : s.assets) {
      double m = 1.0;
      for (auto& e : s.edges) {
        if (e.from == a.id) m = std::min(m, p[e.to]);
      }
      next[a.id] = own.at(a.id) * m;
      delta = std::max(delta, std::abs(next[a.id] - p[a.id]));
    }
    p = next;
    if (delta < 1e-12) break;
  }
  return p;
}

AssetState random_state(std::mt19937_64& gen) {
  switch (std::uniform_int_distribution<int>(0, 5)(gen)) {
    case 0: return AssetState::unavailable();
    case 1: return AssetState::degraded(std::uniform_real_distribution<double>(0.1, 0.9)(gen));
    case 2: return AssetState::integrity();
    case 3: return AssetState::confidentiality();
    default: return AssetState::operational();
  }
}

}  // namespace

TEST(BuildGraph, EmptySpecIsValid) {
  const auto g = build_graph({});
  EXPECT_EQ(g.size(), 0u);
  EXPECT_TRUE(g.edges().empty());
}

TEST(BuildGraph, ReferenceErrors) {
  auto s = chain_spec({"A", "B"});
  s.edges.push_back(dep("A", "Z"));
  EXPECT_EQ(code_of([&] { build_graph(s); }), Errc::DanglingReference);

  auto dup = chain_spec({"A", "A"});
  dup.edges.clear();
  EXPECT_EQ(code_of([&] { build_graph(dup); }), Errc::DuplicateId);

  auto loop = chain_spec({"A"});
  loop.edges.push_back(dep("A", "A"));
  EXPECT_EQ(code_of([&] { build_graph(loop); }), Errc::SelfLoop);

  auto vuln = chain_spec({"A"});
  vuln.vulnerabilities.push_back({"Q", "CVE"});
  EXPECT_EQ(code_of([&] { build_graph(vuln); }), Errc::DanglingReference);

  auto weight = chain_spec({"A", "B"});
  weight.edges[0].weight = 0.0;
  EXPECT_EQ(code_of([&] { build_graph(weight); }), Errc::ValidationError);
}

TEST(BuildGraph, ChainIsOperational) {
  const auto g = build_graph(chain_spec({"A", "B", "C"}));
  EXPECT_EQ(g.size(), 3u);
  EXPECT_EQ(g.edges().size(), 2u);
  for (auto& a : g.assets()) {
    EXPECT_EQ(g.state(a.id).mode, Mode::Operational);
    EXPECT_EQ(g.effective_performance(a.id), 1.0);
  }
}

TEST(BuildGraph, NeighboursIncludeSubnetAndEdges) {
  GraphSpec s;
  s.assets = {{"a", AssetKind::EndUserNode, "", "lan"},
              {"b", AssetKind::Device, "", "lan"},
              {"c", AssetKind::Service, "", "dmz"},
              {"d", AssetKind::Service, "", std::nullopt}};
  s.edges = {dep("d", "a")};
  const auto g = build_graph(s);
  std::vector<std::string> ids;
  for (auto i : g.neighbours(g.index_of("a"))) ids.push_back(g.assets()[i].id);
  EXPECT_EQ(ids, (std::vector<std::string>{"b", "d"}));
}

TEST(ReachableDependents, SmallExamples) {
  const auto g = build_graph(chain_spec({"A", "B", "C"}));
  EXPECT_TRUE(reachable_dependents(g, {}).empty());
  EXPECT_EQ(reachable_dependents(g, {"C"}), (std::set<std::string>{"A", "B", "C"}));
  EXPECT_EQ(reachable_dependents(g, {"A"}), (std::set<std::string>{"A"}));
  EXPECT_EQ(code_of([&] { reachable_dependents(g, {"Z"}); }), Errc::UnknownAsset);

  GraphSpec iso;
  iso.assets.push_back({"X", AssetKind::Device, "", std::nullopt});
  EXPECT_EQ(reachable_dependents(build_graph(iso), {"X"}), (std::set<std::string>{"X"}));
}

TEST(ReachableDependents, MatchesFixpointOnRandomCyclicGraphs) {
  std::mt19937_64 gen(31337);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 12)(gen);
    const auto spec = random_spec(gen, n, std::uniform_real_distribution<double>(0.0, 0.4)(gen), false);
    const auto g = build_graph(spec);
    std::set<std::string> seeds;
    for (int i = 0; i < n; ++i) {
      if (std::bernoulli_distribution(0.2)(gen)) seeds.insert(node(i));
    }
    ASSERT_EQ(reachable_dependents(g, seeds), fixpoint_dependents(spec, seeds)) << "trial " << trial;
  }
}

TEST(StaticImpact, Examples) {
  const auto g = build_graph(chain_spec({"A", "B", "C"}));
  const MissionBindings bindings{{"t_a", {"A"}}, {"t_c", {"C"}}};

  const auto clear = propagate_static_impact(g, {}, bindings);
  ASSERT_EQ(clear.tasks.size(), 2u);
  for (auto& t : clear.tasks) {
    EXPECT_FALSE(t.impacted);
    EXPECT_TRUE(t.chain.empty());
  }

  const auto direct = propagate_static_impact(g, {"A"}, bindings);
  EXPECT_TRUE(direct.find("t_a")->impacted);
  EXPECT_EQ(direct.find("t_a")->chain, (std::vector<std::string>{"A"}));
  EXPECT_FALSE(direct.find("t_c")->impacted);

  const auto deep = propagate_static_impact(g, {"C"}, bindings);
  EXPECT_EQ(deep.find("t_a")->chain, (std::vector<std::string>{"A", "B", "C"}));

  EXPECT_EQ(code_of([&] { propagate_static_impact(g, {"Z"}, bindings); }), Errc::UnknownAsset);
  EXPECT_EQ(code_of([&] { propagate_static_impact(g, {}, {{"t", {"Z"}}}); }), Errc::UnknownAsset);
  EXPECT_EQ(code_of([&] { propagate_static_impact(g, {}, {{"", {"A"}}}); }), Errc::UnknownTask);
}

TEST(StaticImpact, DiamondWitnessChainIsARealPath) {
  GraphSpec s;
  for (auto id : {"A", "B", "C", "D"}) s.assets.push_back({id, AssetKind::Service, "", std::nullopt});
  s.edges = {dep("D", "B"), dep("D", "C"), dep("B", "A"), dep("C", "A")};
  const auto g = build_graph(s);
  const auto report = propagate_static_impact(g, {"A"}, {{"T", {"D"}}});
  const auto* t = report.find("T");
  ASSERT_NE(t, nullptr);
  EXPECT_TRUE(t->impacted);
  EXPECT_TRUE(fixpoint_dependents(s, {"A"}).count("D"));
  ASSERT_EQ(t->chain.size(), 3u);
  EXPECT_EQ(t->chain.front(), "D");
  EXPECT_EQ(t->chain.back(), "A");
}

TEST(StaticImpact, RandomGraphsMatchOracleWithValidWitnesses) {
  std::mt19937_64 gen(4242);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 12)(gen);
    const auto spec = random_spec(gen, n, 0.25, false);
    const auto g = build_graph(spec);
    std::set<std::string> comp;
    for (int i = 0; i < n; ++i) {
      if (std::bernoulli_distribution(0.15)(gen)) comp.insert(node(i));
    }
    MissionBindings b;
    for (int t = 0; t < 4; ++t) {
      b["task" + std::to_string(t)] = {node(std::uniform_int_distribution<int>(0, n - 1)(gen))};
    }
    const auto closure = fixpoint_dependents(spec, comp);
    const auto report = propagate_static_impact(g, comp, b);
    for (auto& [task, assets] : b) {
      const auto* ti = report.find(task);
      ASSERT_NE(ti, nullptr);
      EXPECT_EQ(ti->impacted, closure.count(assets[0]) == 1);
      if (!ti->impacted) continue;
      EXPECT_EQ(ti->chain.front(), assets[0]);
      EXPECT_TRUE(comp.count(ti->chain.back()));
      for (std::size_t i = 0; i + 1 < ti->chain.size(); ++i) {
        const bool edge = std::any_of(spec.edges.begin(), spec.edges.end(), [&](const DependencyEdge& e) {
          return e.from == ti->chain[i] && e.to == ti->chain[i + 1];
        });
        EXPECT_TRUE(edge) << ti->chain[i] << "->" << ti->chain[i + 1];
      }
    }
  }
}

TEST(StaticImpact, MonotoneInCompromisedSetAndPure) {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 10;
    const auto g = build_graph(random_spec(gen, n, 0.2, false));
    MissionBindings b;
    for (int t = 0; t < 5; ++t) b["t" + std::to_string(t)] = {node(t), node(t + 5)};
    std::set<std::string> small, big;
    for (int i = 0; i < n; ++i) {
      const double u = std::uniform_real_distribution<double>(0, 1)(gen);
      if (u < 0.1) small.insert(node(i));
      if (u < 0.3) big.insert(node(i));
    }
    const auto rs = propagate_static_impact(g, small, b);
    const auto rb = propagate_static_impact(g, big, b);
    for (std::size_t i = 0; i < rs.tasks.size(); ++i) {
      if (rs.tasks[i].impacted) {
        EXPECT_TRUE(rb.tasks[i].impacted);
      }
    }
    const auto again = propagate_static_impact(g, small, b);
    for (std::size_t i = 0; i < rs.tasks.size(); ++i) {
      EXPECT_EQ(rs.tasks[i].impacted, again.tasks[i].impacted);
      EXPECT_EQ(rs.tasks[i].chain, again.tasks[i].chain);
    }
  }
}

TEST(Performance, Examples) {
  auto g = build_graph(chain_spec({"A", "B", "C"}));
  EXPECT_EQ(g.effective_performance("A"), 1.0);
  g.set_state("C", AssetState::degraded(0.5), 0.0);
  EXPECT_DOUBLE_EQ(g.effective_performance("C"), 0.5);
  EXPECT_DOUBLE_EQ(g.effective_performance("A"), 0.5);
  g.set_state("B", AssetState::degraded(0.5), 0.0);
  EXPECT_DOUBLE_EQ(g.effective_performance("A"), 0.25);
  g.set_state("C", AssetState::integrity(), 1.0);
  g.set_state("B", AssetState::confidentiality(), 1.0);
  EXPECT_EQ(g.effective_performance("A"), 1.0);
  g.set_state("C", AssetState::unavailable(), 2.0);
  EXPECT_EQ(g.effective_performance("A"), 0.0);
  EXPECT_EQ(code_of([&] { g.effective_performance("Z"); }), Errc::UnknownAsset);
}

TEST(Performance, SiblingsTakeMinimum) {
  GraphSpec s;
  for (auto id : {"T", "X", "Y"}) s.assets.push_back({id, AssetKind::Service, "", std::nullopt});
  s.edges = {dep("T", "X"), dep("T", "Y")};
  auto g = build_graph(s);
  g.set_state("X", AssetState::degraded(0.7), 0.0);
  g.set_state("Y", AssetState::degraded(0.4), 0.0);
  EXPECT_DOUBLE_EQ(g.effective_performance("T"), 0.4);
}

TEST(Performance, AnyOfGroupTakesBestAlternative) {
  GraphSpec s;
  for (auto id : {"T", "P", "Q", "R"}) s.assets.push_back({id, AssetKind::Service, "", std::nullopt});
  s.edges = {dep("T", "P"), dep("T", "Q"), dep("T", "R")};
  s.edges[0].any_of_group = s.edges[1].any_of_group = "db";
  auto g = build_graph(s);
  g.set_state("P", AssetState::unavailable(), 0.0);
  EXPECT_EQ(g.effective_performance("T"), 1.0);
  g.set_state("Q", AssetState::degraded(0.6), 0.0);
  EXPECT_DOUBLE_EQ(g.effective_performance("T"), 0.6);
  g.set_state("R", AssetState::degraded(0.3), 0.0);
  EXPECT_DOUBLE_EQ(g.effective_performance("T"), 0.3);
  g.set_state("Q", AssetState::unavailable(), 1.0);
  EXPECT_EQ(g.effective_performance("T"), 0.0);
}

TEST(Performance, CycleMembersShareMinimumState) {
  GraphSpec s = chain_spec({"A", "B", "C", "D"});
  s.edges.push_back(dep("C", "A"));  // A -> B -> C -> A, C -> D
  auto g = build_graph(s);
  g.set_state("B", AssetState::degraded(0.5), 0.0);
  g.set_state("C", AssetState::degraded(0.8), 0.0);
  for (auto id : {"A", "B", "C"}) EXPECT_DOUBLE_EQ(g.effective_performance(id), 0.5) << id;
  g.set_state("D", AssetState::degraded(0.5), 1.0);
  for (auto id : {"A", "B", "C"}) EXPECT_DOUBLE_EQ(g.effective_performance(id), 0.25) << id;
  EXPECT_DOUBLE_EQ(g.effective_performance("D"), 0.5);
}

TEST(Performance, MatchesIterationOnRandomDags) {
  std::mt19937_64 gen(2718);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 12)(gen);
    const auto spec = random_spec(gen, n, 0.3, true);
    auto g = build_graph(spec);
    std::map<std::string, double> own;
    for (auto& a : spec.assets) {
      const auto st = random_state(gen);
      g.set_state(a.id, st, 0.0);
      own[a.id] = st.own_factor();
    }
    const auto oracle = iterate_performance(spec, own);
    for (auto& a : spec.assets) ASSERT_NEAR(g.effective_performance(a.id), oracle.at(a.id), 1e-12);
  }
}

TEST(Performance, RangeAndPathCharacterisationOnCyclicGraphs) {
  std::mt19937_64 gen(1618);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 12)(gen);
    const auto spec = random_spec(gen, n, 0.2, false);
    auto g = build_graph(spec);
    for (auto& a : spec.assets) g.set_state(a.id, random_state(gen), 0.0);
    for (auto& a : spec.assets) {
      const double p = g.effective_performance(a.id);
      ASSERT_GE(p, 0.0);
      ASSERT_LE(p, 1.0);
      bool all_full = true, any_down = false;
      for (auto& r : depends_on(spec, a.id)) {
        const auto m = g.state(r).mode;
        all_full &= m != Mode::Degraded && m != Mode::Unavailable;
        any_down |= m == Mode::Unavailable;
      }
      EXPECT_EQ(p == 1.0, all_full);
      EXPECT_EQ(p == 0.0, any_down);
    }
  }
}

TEST(SetState, HistoryAndErrors) {
  auto g = build_graph(chain_spec({"A", "B"}));
  const auto rec = g.set_state("A", AssetState::unavailable(), 10.0);
  EXPECT_EQ(g.history().size(), 1u);
  EXPECT_EQ(rec.before.mode, Mode::Operational);
  EXPECT_EQ(rec.after.mode, Mode::Unavailable);
  EXPECT_EQ(rec.at, 10.0);
  EXPECT_EQ(code_of([&] { g.set_state("A", AssetState::operational(), 5.0); }), Errc::TimeRegression);
  EXPECT_EQ(code_of([&] { g.set_state("Z", AssetState::operational(), 11.0); }), Errc::UnknownAsset);
  EXPECT_EQ(code_of([&] { g.set_state("B", AssetState::degraded(1.0), 11.0); }), Errc::InvalidState);
  EXPECT_EQ(code_of([&] { g.set_state("B", AssetState::degraded(0.0), 11.0); }), Errc::InvalidState);
  EXPECT_EQ(g.history().size(), 1u);
}

TEST(SetState, RandomChangesKeepPerAssetTimesNondecreasing) {
  std::mt19937_64 gen(5);
  auto g = build_graph(chain_spec({"A", "B", "C"}));
  std::map<std::string, double> since;
  int accepted = 0;
  for (int i = 0; i < 100; ++i) {
    const std::string id(1, "ABC"[i % 3]);
    const double at = std::uniform_real_distribution<double>(0, 100)(gen);
    try {
      g.set_state(id, random_state(gen), at);
      ++accepted;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::TimeRegression);
      EXPECT_LT(at, since[id]);
    }
    since[id] = g.state(id).since;
  }
  EXPECT_EQ(static_cast<int>(g.history().size()), accepted);
  std::map<std::string, double> last;
  for (auto& rec : g.history()) {
    EXPECT_GE(rec.at, last[rec.asset]);
    last[rec.asset] = rec.at;
  }
}

TEST(SetState, ListenersSeeEveryChange) {
  auto g = build_graph(chain_spec({"A", "B"}));
  std::vector<std::string> seen;
  g.subscribe([&](const StateChange& c) { seen.push_back(c.asset + "@" + std::to_string(static_cast<int>(c.at))); });
  g.set_state("B", AssetState::unavailable(), 3.0);
  g.set_state("A", AssetState::degraded(0.5), 4.0);
  EXPECT_EQ(seen, (std::vector<std::string>{"B@3", "A@4"}));
}

TEST(GraphJson, RoundTrip) {
  GraphSpec s = chain_spec({"A", "B", "C"});
  s.assets[0].kind = AssetKind::EndUserNode;
  s.assets[0].subnet = "lan";
  s.edges[1].weight = 0.5;
  s.edges[1].kind = EdgeKind::DiscoveredIndirect;
  s.vulnerabilities.push_back({"B", "CVE-1"});
  s.annotations.push_back({"retry_chain", "C", {{"fallback", "X"}}, true});
  const auto back = graph_spec_from_json(to_json(s));
  EXPECT_EQ(to_json(back), to_json(s));
  EXPECT_EQ(back.assets[0].subnet, std::optional<std::string>("lan"));
  EXPECT_EQ(back.edges[1].weight, 0.5);
}

TEST(GraphJson, BadFieldsNameThePath) {
  nlohmann::json doc = to_json(chain_spec({"A", "B"}));
  doc["assets"][1]["kind"] = "toaster";
  try {
    graph_spec_from_json(doc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ValidationError);
    EXPECT_NE(std::string(e.what()).find("assets[1]"), std::string::npos) << e.what();
  }
}
