#include "mia/mission/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "mia/error.hpp"

namespace mia::mission {

namespace {

struct QueueKey {
  double time = 0.0;
  std::uint64_t seq = 0;
  std::uint64_t item = 0;
  auto operator<=>(const QueueKey&) const = default;
};

}  // namespace

struct MissionSimulator::Impl {
  struct Runtime {
    std::optional<double> remaining;
    double pending_extra = 0.0;
    QueueKey key;
    bool queued = false;
  };
  struct Job {
    std::size_t stage = 0;
    double rate = 1.0;
    double last = 0.0;
    double segment_start = 0.0;
    sim::EventId completion = 0;
  };

  Impl(const ValidatedMission& m, infra::InfrastructureGraph& g, sim::Kernel& k, std::uint64_t seed)
      : mission(m), graph(g), kernel(k), arrivals(seed, sim::StreamId::Arrivals) {
    const std::size_t stages = mission.stages();
    for (const auto& [role, count] : mission.spec.personnel) {
      role_index[role] = role_names.size();
      role_names.push_back(role);
      headcount.push_back(count);
    }
    free = headcount;
    queues.resize(role_names.size());
    busy.assign(role_names.size(), 0.0);
    role_stages.resize(role_names.size());
    for (std::size_t s = 0; s < stages; ++s) {
      const std::size_t task = mission.order[s];
      const TaskSpec& t = mission.spec.tasks[task];
      duration_streams.emplace_back(seed, static_cast<std::uint64_t>(sim::StreamId::TaskDurationBase) + task);
      rework_streams.emplace_back(seed, static_cast<std::uint64_t>(sim::StreamId::TaskReworkBase) + task);
      std::vector<std::size_t> assets;
      for (const auto& a : t.required_assets) assets.push_back(graph.index_of(a));
      stage_assets.push_back(std::move(assets));
      stage_role.push_back(role_index.at(t.role));
      role_stages[stage_role.back()].push_back(s);
    }
    stage_perf.assign(stages, 1.0);
    perf_since.assign(stages, 0.0);
    blocked.assign(stages, 0.0);
    degraded.assign(stages, 0.0);
    has_checkpoints = !mission.spec.checkpoints.empty();
    last_checkpoint = mission.last_checkpoint();
  }

  ValidatedMission mission;
  infra::InfrastructureGraph& graph;
  sim::Kernel& kernel;
  sim::RngStream arrivals;
  std::vector<sim::RngStream> duration_streams;
  std::vector<sim::RngStream> rework_streams;
  std::vector<std::vector<std::size_t>> stage_assets;
  std::vector<std::size_t> stage_role;
  std::map<std::string, std::size_t> role_index;
  std::vector<std::string> role_names;
  std::vector<std::vector<std::size_t>> role_stages;
  std::vector<int> headcount;
  std::vector<int> free;
  std::vector<std::set<QueueKey>> queues;
  std::vector<double> busy;
  std::vector<Runtime> runtime;
  std::map<std::uint64_t, Job> jobs;
  std::vector<double> stage_perf;
  std::vector<double> perf_since;
  std::vector<double> blocked;
  std::vector<double> degraded;
  std::vector<WorkItem> items;
  std::vector<TaskStartListener> listeners;
  std::uint64_t queue_seq = 0;
  bool aware = false;
  bool started = false;
  bool has_checkpoints = false;
  double last_checkpoint = 0.0;
  std::shared_ptr<bool> alive = std::make_shared<bool>(true);

  double now() const { return kernel.now(); }

  double time_of_day(double t) const {
    const double day = mission.spec.day_length;
    return t - std::floor(t / day) * day;
  }

  double stage_performance(std::size_t s) const {
    double p = 1.0;
    for (std::size_t a : stage_assets[s]) p = std::min(p, graph.effective_performance(a));
    return p;
  }

  void refresh_performance() {
    const double t = now();
    for (std::size_t s = 0; s < stage_perf.size(); ++s) {
      const double dt = t - perf_since[s];
      if (stage_perf[s] <= 0.0) {
        blocked[s] += dt;
      } else if (stage_perf[s] < 1.0) {
        degraded[s] += dt;
      }
      perf_since[s] = t;
      stage_perf[s] = stage_performance(s);
    }
  }

  void check_taint(WorkItem& item, std::size_t s) {
    for (std::size_t a : stage_assets[s]) {
      if (graph.state(a).mode == infra::Mode::IntegrityCompromised) {
        item.tainted = true;
        item.taint_sources.insert(graph.assets()[a].id);
      }
    }
  }

  void enqueue(std::uint64_t id, bool fresh_key) {
    Runtime& rt = runtime[id];
    if (fresh_key) rt.key = QueueKey{now(), queue_seq++, id};
    queues[stage_role[items[id].stage]].insert(rt.key);
    rt.queued = true;
  }

  void dequeue(std::uint64_t id) {
    Runtime& rt = runtime[id];
    if (!rt.queued) return;
    queues[stage_role[items[id].stage]].erase(rt.key);
    rt.queued = false;
  }

  bool role_can_run(std::size_t role) const {
    for (std::size_t s : role_stages[role]) {
      if (stage_perf[s] > 0.0) return true;
    }
    return false;
  }

  void dispatch(std::size_t role) {
    while (free[role] > 0 && role_can_run(role)) {
      auto& q = queues[role];
      auto it = std::find_if(q.begin(), q.end(), [&](const QueueKey& k) {
        return stage_perf[items[k.item].stage] > 0.0;
      });
      if (it == q.end()) return;
      const std::uint64_t id = it->item;
      q.erase(it);
      runtime[id].queued = false;
      start_job(id);
    }
  }

  void dispatch_all() {
    for (std::size_t r = 0; r < role_names.size(); ++r) dispatch(r);
  }

  void schedule_completion(std::uint64_t id, Job& job) {
    const double remaining = *runtime[id].remaining;
    job.completion = kernel.schedule(now() + remaining / job.rate, "task_complete",
                                     [this, id] { complete(id); }, static_cast<std::int64_t>(id));
  }

  void start_job(std::uint64_t id) {
    WorkItem& item = items[id];
    Runtime& rt = runtime[id];
    const std::size_t s = item.stage;
    const std::size_t role = stage_role[s];
    --free[role];
    const bool fresh = !rt.remaining.has_value();
    if (fresh) {
      const double work = std::max(0.0, sim::sample(mission.task_at_stage(s).duration, duration_streams[s]));
      item.work_content[s] += work;
      rt.remaining = work + rt.pending_extra;
      rt.pending_extra = 0.0;
    }
    check_taint(item, s);
    Job job{s, stage_perf[s], now(), now(), 0};
    schedule_completion(id, job);
    jobs[id] = job;
    if (fresh) {
      for (const auto& l : listeners) l(mission.task_at_stage(s).id, now());
    }
  }

  // Credits work done since the job's last update.
  void advance(std::uint64_t id, Job& job) {
    Runtime& rt = runtime[id];
    const double delta = std::min(*rt.remaining, job.rate * (now() - job.last));
    items[id].work_done[job.stage] += delta;
    *rt.remaining -= delta;
    job.last = now();
  }

  void release(std::uint64_t id, Job& job) {
    const std::size_t role = stage_role[job.stage];
    busy[role] += now() - job.segment_start;
    ++free[role];
    (void)id;
  }

  void complete(std::uint64_t id) {
    auto jit = jobs.find(id);
    Job job = jit->second;
    jobs.erase(jit);
    WorkItem& item = items[id];
    Runtime& rt = runtime[id];
    const std::size_t s = job.stage;
    item.work_done[s] += *rt.remaining;
    rt.remaining = 0.0;
    release(id, job);
    item.stage_finished_at[s] = now();
    const std::size_t role = stage_role[s];

    if (aware && item.tainted) {
      item.tainted = false;
      item.taint_sources.clear();
      ++item.rework_count;
      const double extra = std::max(0.0, sim::sample(mission.task_at_stage(s).rework_duration, rework_streams[s]));
      item.work_content[s] += extra;
      rt.remaining = extra;
      enqueue(id, true);
      dispatch(role);
      return;
    }

    rt.remaining.reset();
    ++item.stage;
    if (item.stage == mission.stages()) {
      finish_item(item);
    } else {
      enqueue(id, true);
      dispatch(stage_role[item.stage]);
    }
    dispatch(role);
  }

  void finish_item(WorkItem& item) {
    item.completed_at = now();
    item.outcome = item.tainted ? Outcome::CompletedCorrupted : Outcome::CompletedClean;
    item.sealed = !has_checkpoints || time_of_day(now()) >= last_checkpoint;
  }

  void on_infrastructure_change() {
    refresh_performance();
    std::vector<std::uint64_t> active;
    for (const auto& [id, job] : jobs) active.push_back(id);
    for (std::uint64_t id : active) {
      Job& job = jobs[id];
      advance(id, job);
      check_taint(items[id], job.stage);
      const double rate = stage_perf[job.stage];
      if (rate == job.rate) continue;
      kernel.cancel(job.completion);
      if (rate <= 0.0) {
        release(id, job);
        jobs.erase(id);
        enqueue(id, false);
      } else {
        job.rate = rate;
        schedule_completion(id, job);
      }
    }
    dispatch_all();
  }

  void add_rework(const CheckpointOutcome& outcome) {
    const std::set<std::uint64_t> reopened(outcome.reopened.begin(), outcome.reopened.end());
    std::set<std::size_t> touched_roles;
    for (std::uint64_t id : outcome.rework) {
      WorkItem& item = items[id];
      Runtime& rt = runtime[id];
      if (reopened.count(id)) {
        const std::size_t s = mission.stages() - 1;
        item.stage = s;
        const double extra = std::max(0.0, sim::sample(mission.task_at_stage(s).rework_duration, rework_streams[s]));
        item.work_content[s] += extra;
        rt.remaining = extra;
        enqueue(id, true);
        touched_roles.insert(stage_role[s]);
        continue;
      }
      const std::size_t s = item.stage;
      const double extra = std::max(0.0, sim::sample(mission.task_at_stage(s).rework_duration, rework_streams[s]));
      item.work_content[s] += extra;
      auto jit = jobs.find(id);
      if (jit != jobs.end()) {
        advance(id, jit->second);
        *rt.remaining += extra;
        kernel.cancel(jit->second.completion);
        schedule_completion(id, jit->second);
      } else if (rt.remaining) {
        *rt.remaining += extra;
      } else {
        rt.pending_extra += extra;
      }
    }
    for (std::size_t r : touched_roles) dispatch(r);
  }

  void checkpoint() { add_rework(apply_checkpoint(items, now(), false)); }

  void arrival() {
    const std::size_t stages = mission.stages();
    WorkItem item;
    item.id = items.size();
    item.created_at = now();
    item.work_content.assign(stages, 0.0);
    item.work_done.assign(stages, 0.0);
    item.stage_finished_at.assign(stages, std::numeric_limits<double>::quiet_NaN());
    items.push_back(std::move(item));
    runtime.emplace_back();
    const std::uint64_t id = items.back().id;
    if (stages == 0) {
      finish_item(items.back());
    } else {
      enqueue(id, true);
      dispatch(stage_role[0]);
    }
    if (mission.spec.deadline_per_item) {
      kernel.schedule_in(*mission.spec.deadline_per_item, "deadline", [this, id] { expire(id); },
                         static_cast<std::int64_t>(id));
    }
    schedule_next_arrival();
  }

  void schedule_next_arrival() {
    const double gap = std::max(0.0, sim::sample(mission.spec.arrivals, arrivals));
    const double at = now() + gap;
    const double end = std::min(mission.spec.arrival_end.value_or(mission.spec.horizon), mission.spec.horizon);
    if (at <= end) kernel.schedule(at, "arrival", [this] { arrival(); });
  }

  void expire(std::uint64_t id) {
    WorkItem& item = items[id];
    if (item.outcome != Outcome::InProgress) return;
    const std::size_t role = stage_role[item.stage];
    if (runtime[id].queued) {
      dequeue(id);
    } else if (auto jit = jobs.find(id); jit != jobs.end()) {
      advance(id, jit->second);
      kernel.cancel(jit->second.completion);
      release(id, jit->second);
      jobs.erase(jit);
    }
    item.outcome = Outcome::Abandoned;
    dispatch(role);
  }
};

MissionSimulator::MissionSimulator(const ValidatedMission& mission, infra::InfrastructureGraph& graph,
                                   sim::Kernel& kernel, std::uint64_t seed)
    : impl_(std::make_unique<Impl>(mission, graph, kernel, seed)) {}

MissionSimulator::~MissionSimulator() { *impl_->alive = false; }

void MissionSimulator::start() {
  Impl& s = *impl_;
  if (s.started) return;
  s.started = true;
  std::weak_ptr<bool> alive = s.alive;
  Impl* self = impl_.get();
  s.graph.subscribe([alive, self](const infra::StateChange&) {
    auto flag = alive.lock();
    if (flag && *flag) self->on_infrastructure_change();
  });
  for (std::size_t k = 0; k < s.stage_perf.size(); ++k) {
    s.perf_since[k] = s.now();
    s.stage_perf[k] = s.stage_performance(k);
  }
  const auto& spec = s.mission.spec;
  const double day0 = std::floor(s.now() / spec.day_length);
  for (double day = day0;; day += 1.0) {
    bool any = false;
    for (double c : spec.checkpoints) {
      const double at = day * spec.day_length + c;
      if (at > spec.horizon) continue;
      any = true;
      if (at >= s.now()) s.kernel.schedule(at, "checkpoint", [self] { self->checkpoint(); });
    }
    if (!any || day * spec.day_length > spec.horizon) break;
  }
  s.schedule_next_arrival();
}

void MissionSimulator::set_awareness(bool aware) {
  Impl& s = *impl_;
  if (aware && !s.aware) {
    s.aware = true;
    s.add_rework(apply_checkpoint(s.items, s.now(), true));
  } else if (!aware && s.aware) {
    // Closing sweep: anything tainted during the compromise is caught before
    // the defender stands down.
    s.add_rework(apply_checkpoint(s.items, s.now(), true));
    s.aware = false;
  }
}

bool MissionSimulator::aware() const noexcept { return impl_->aware; }

void MissionSimulator::on_task_start(TaskStartListener listener) { impl_->listeners.push_back(std::move(listener)); }

const std::vector<WorkItem>& MissionSimulator::items() const noexcept { return impl_->items; }

MissionResult MissionSimulator::finish() {
  Impl& s = *impl_;
  s.refresh_performance();
  for (auto& [id, job] : s.jobs) {
    s.advance(id, job);
    s.busy[s.stage_role[job.stage]] += s.now() - job.segment_start;
    job.segment_start = s.now();
  }
  MissionResult result;
  result.items = s.items;
  result.horizon = s.now();
  for (std::size_t r = 0; r < s.role_names.size(); ++r) {
    const double capacity = s.headcount[r] * result.horizon;
    result.task_utilization[s.role_names[r]] = capacity > 0.0 ? std::clamp(s.busy[r] / capacity, 0.0, 1.0) : 0.0;
  }
  for (std::size_t k = 0; k < s.stage_perf.size(); ++k) {
    const auto& id = s.mission.task_at_stage(k).id;
    result.blocked_time[id] = s.blocked[k];
    result.degraded_time[id] = s.degraded[k];
  }
  return result;
}

MissionResult simulate_mission(const ValidatedMission& mission, infra::InfrastructureGraph& graph,
                               sim::Kernel& kernel, std::uint64_t seed) {
  MissionSimulator sim(mission, graph, kernel, seed);
  sim.start();
  kernel.run_until(std::max(kernel.now(), mission.spec.horizon));
  return sim.finish();
}

}  // namespace mia::mission
