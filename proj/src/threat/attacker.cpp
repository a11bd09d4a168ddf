#include "mia/threat/attacker.hpp"

#include <algorithm>
#include <cmath>

#include "mia/error.hpp"

namespace mia::threat {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

const char* to_string(EffectKind kind) {
  switch (kind) {
    case EffectKind::Stop: return "stop";
    case EffectKind::Degrade: return "degrade";
    case EffectKind::Integrity: return "integrity";
    case EffectKind::Confidentiality: return "confidentiality";
  }
  return "stop";
}

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::Dormant: return "dormant";
    case Phase::Access: return "access";
    case Phase::LateralMovement: return "lateral_movement";
    case Phase::Exploitation: return "exploitation";
    case Phase::EffectActive: return "effect_active";
    case Phase::Evicted: return "evicted";
  }
  return "dormant";
}

void validate(const AttackerSpec& spec, const infra::InfrastructureGraph& graph) {
  if (!graph.contains(spec.target)) throw Error(Errc::UnknownTarget, "'" + spec.target + "'");
  const bool any_end_user = std::any_of(graph.assets().begin(), graph.assets().end(), [](const infra::Asset& a) {
    return a.kind == infra::AssetKind::EndUserNode;
  });
  if (!any_end_user) throw Error(Errc::NoEndUserNodes, "no end_user_node asset to spearphish");
  if (!is_probability(spec.spearphish_success_prob)) {
    throw Error(Errc::InvalidThreatSpec, "spearphish_success_prob outside [0, 1]");
  }
  if (!is_probability(spec.proficiency)) throw Error(Errc::InvalidThreatSpec, "proficiency outside [0, 1]");
  if (!(spec.agility > 0.0 && spec.agility <= 1.0)) throw Error(Errc::InvalidThreatSpec, "agility outside (0, 1]");
  if (spec.effect.kind == EffectKind::Degrade && !(spec.effect.factor > 0.0 && spec.effect.factor < 1.0)) {
    throw Error(Errc::InvalidThreatSpec, "degrade factor outside (0, 1)");
  }
  sim::validate(spec.spearphish_interval);
  sim::validate(spec.scan_interval);
  const auto& start = spec.start;
  switch (start.kind) {
    case StartKind::Fixed:
      if (!(start.at >= 0.0)) throw Error(Errc::InvalidThreatSpec, "start time negative");
      break;
    case StartKind::Random:
      if (!(start.window_begin >= 0.0 && start.window_begin < start.window_end)) {
        throw Error(Errc::InvalidThreatSpec, "random start window must satisfy 0 <= begin < end");
      }
      break;
    case StartKind::ProcessTriggered:
      if (start.task.empty()) throw Error(Errc::InvalidThreatSpec, "process_triggered start needs a task");
      if (!(start.after_time_of_day >= 0.0) || start.day < 0) {
        throw Error(Errc::InvalidThreatSpec, "process_triggered offset negative");
      }
      break;
  }
}

Attacker::Attacker(AttackerSpec spec, infra::InfrastructureGraph& graph, sim::Kernel& kernel, std::uint64_t seed,
                   AttackTimeline& timeline, double day_length)
    : spec_(std::move(spec)),
      graph_(graph),
      kernel_(kernel),
      rng_(seed, sim::StreamId::Attacker),
      timeline_(timeline),
      day_length_(day_length) {
  validate(spec_, graph_);
  for (const auto& a : graph_.assets()) {
    if (a.kind == infra::AssetKind::EndUserNode) end_user_nodes_.push_back(a.id);
  }
  std::sort(end_user_nodes_.begin(), end_user_nodes_.end());
}

void Attacker::start() {
  if (started_ || armed_) return;
  const auto& policy = spec_.start;
  switch (policy.kind) {
    case StartKind::Fixed:
      kernel_.schedule(std::max(policy.at, kernel_.now()), "attack_start", [this] { begin(kernel_.now()); });
      started_ = true;
      break;
    case StartKind::Random: {
      const double at = policy.window_begin + rng_.uniform() * (policy.window_end - policy.window_begin);
      kernel_.schedule(std::max(at, kernel_.now()), "attack_start", [this] { begin(kernel_.now()); });
      started_ = true;
      break;
    }
    case StartKind::ProcessTriggered:
      armed_ = true;
      break;
  }
}

void Attacker::notify_task_start(const std::string& task, double at) {
  if (!armed_ || task != spec_.start.task) return;
  if (at < spec_.start.day * day_length_ + spec_.start.after_time_of_day) return;
  armed_ = false;
  started_ = true;
  // Deferred so the attacker never acts inside the mission's own event.
  kernel_.schedule(at, "attack_start", [this] { begin(kernel_.now()); });
}

void Attacker::begin(double at) {
  state_.phase = Phase::Access;
  timeline_.record(at, EventKind::AttackStart);
  pending_ = kernel_.schedule_in(sim::sample(spec_.spearphish_interval, rng_) * spec_.agility, "spearphish",
                                 [this] { spearphish(); });
  has_pending_ = true;
}

void Attacker::spearphish() {
  has_pending_ = false;
  const std::string& victim = end_user_nodes_[rng_.below(end_user_nodes_.size())];
  const bool success = rng_.uniform() < spec_.spearphish_success_prob;
  if (!success) {
    pending_ = kernel_.schedule_in(sim::sample(spec_.spearphish_interval, rng_) * spec_.agility, "spearphish",
                                   [this] { spearphish(); });
    has_pending_ = true;
    return;
  }
  timeline_.record(kernel_.now(), EventKind::AccessSuccess, victim);
  occupy(victim);
}

std::vector<std::size_t> Attacker::eligible_hops() const {
  std::set<std::string> seen;
  for (const auto& held : state_.foothold) {
    for (std::size_t n : graph_.neighbours(graph_.index_of(held))) {
      const auto& id = graph_.assets()[n].id;
      if (state_.foothold.count(id)) continue;
      const auto& exploits = graph_.exploits_on(n);
      const bool usable = std::any_of(exploits.begin(), exploits.end(),
                                      [&](const std::string& e) { return spec_.capabilities.count(e) != 0; });
      if (usable) seen.insert(id);
    }
  }
  std::vector<std::size_t> out;
  for (const auto& id : seen) out.push_back(graph_.index_of(id));
  return out;
}

void Attacker::scan() {
  has_pending_ = false;
  const double choice = rng_.uniform();
  const double roll = rng_.uniform();
  const auto hops = eligible_hops();
  if (!hops.empty() && roll < spec_.proficiency) {
    const std::size_t pick = std::min(hops.size() - 1, static_cast<std::size_t>(choice * hops.size()));
    const std::string& id = graph_.assets()[hops[pick]].id;
    timeline_.record(kernel_.now(), EventKind::LateralMove, id);
    occupy(id);
    return;
  }
  pending_ = kernel_.schedule_in(sim::sample(spec_.scan_interval, rng_) * spec_.agility, "scan", [this] { scan(); });
  has_pending_ = true;
}

void Attacker::occupy(const std::string& asset) {
  state_.foothold.insert(asset);
  state_.current_position = asset;
  if (asset == spec_.target) {
    state_.phase = Phase::Exploitation;
    timeline_.record(kernel_.now(), EventKind::ExploitationSuccess, asset);
    apply_effect();
    return;
  }
  state_.phase = Phase::LateralMovement;
  pending_ = kernel_.schedule_in(sim::sample(spec_.scan_interval, rng_) * spec_.agility, "scan", [this] { scan(); });
  has_pending_ = true;
}

void Attacker::apply_effect() {
  const double now = kernel_.now();
  infra::AssetState next;
  switch (spec_.effect.kind) {
    case EffectKind::Stop: next = infra::AssetState::unavailable(now); break;
    case EffectKind::Degrade: next = infra::AssetState::degraded(spec_.effect.factor, now); break;
    case EffectKind::Integrity: next = infra::AssetState::integrity(now); break;
    case EffectKind::Confidentiality: next = infra::AssetState::confidentiality(now); break;
  }
  state_.phase = Phase::EffectActive;
  timeline_.record(now, EventKind::EffectOnset, spec_.target, to_string(spec_.effect.kind));
  graph_.set_state(spec_.target, next, now);
  for (const auto& l : onset_listeners_) l(now);
}

void Attacker::remove_host(const std::string& asset) {
  state_.foothold.erase(asset);
  if (state_.foothold.empty() && state_.phase != Phase::Dormant) {
    state_.phase = Phase::Evicted;
    if (has_pending_) kernel_.cancel(pending_);
    has_pending_ = false;
  }
}

}  // namespace mia::threat
