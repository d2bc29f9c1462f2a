#include "greenmec/simulator.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>

#include "greenmec/random.hpp"

namespace greenmec {

std::string_view to_string(TaskFate f) {
  switch (f) {
    case TaskFate::OnTime: return "on_time";
    case TaskFate::DeadlineMissed: return "deadline_missed";
    case TaskFate::DroppedByPolicy: return "dropped_by_policy";
    case TaskFate::DroppedByDepletion: return "dropped_by_depletion";
  }
  return "unknown";
}

namespace {

// Mutable state carried from slot to slot, plus the named random streams.
class Engine {
 public:
  explicit Engine(const Scenario& s)
      : sc_(s),
        arrivals_rng_(named_stream(s.seed, "arrivals")),
        channel_rng_(named_stream(s.seed, "channel")),
        policy_rng_(named_stream(s.seed, "policy")) {
    for (const auto& d : sc_.devices) batteries_.push_back(d.battery);
    for (std::size_t i = 0; i < sc_.devices.size(); ++i) device_index_[sc_.devices[i].id] = i;
  }

  SlotState prepare(std::size_t t) {
    SlotState state;
    for (const auto& srv : sc_.servers) {
      ServerSpec spec = srv.spec;
      switch (srv.gain.kind) {
        case GainModel::Kind::Constant: spec.channel.gain = srv.gain.value; break;
        case GainModel::Kind::Uniform:
          spec.channel.gain = uniform(channel_rng_, srv.gain.lo, srv.gain.hi);
          break;
        case GainModel::Kind::Trace: spec.channel.gain = srv.gain.samples[t]; break;
      }
      if (!srv.beta_trace.empty()) spec.green_rate_beta = srv.beta_trace[t];
      state.servers.push_back(spec);
    }

    auto add_task = [&](std::size_t dev_idx, double bits, double instructions, double deadline) {
      const DeviceSpec& dev = sc_.devices[dev_idx];
      SlotTask st;
      st.task = {next_task_id_++, dev.id, bits, instructions * sc_.cycles_per_instruction, deadline};
      st.device = dev;
      st.device.battery = batteries_[dev_idx];
      if (batteries_[dev_idx]) st.energy_budget_j = battery_budget(*batteries_[dev_idx]);
      state.tasks.push_back(st);
    };

    const ArrivalModel& a = sc_.arrivals;
    if (a.kind == ArrivalModel::Kind::Stochastic) {
      for (std::size_t d = 0; d < sc_.devices.size(); ++d) {
        // Fixed draw count per device and slot keeps later slots independent
        // of earlier outcomes.
        const double u = uniform01(arrivals_rng_);
        const double bits = uniform(arrivals_rng_, a.data_bits[0], a.data_bits[1]);
        const double instr =
            uniform(arrivals_rng_, a.compute_instructions[0], a.compute_instructions[1]);
        const double deadline = uniform(arrivals_rng_, a.deadline_s[0], a.deadline_s[1]);
        if (u < a.probability) add_task(d, bits, instr, deadline);
      }
    } else {
      for (const auto& e : a.entries) {
        if (e.slot == t) {
          add_task(device_index_.at(e.device), e.data_bits, e.compute_instructions, e.deadline_s);
        }
      }
    }
    return state;
  }

  SlotMetrics execute(std::size_t t, SlotState state) {
    const SlotGame game(std::move(state), sc_.policy.game);
    const SlotState& st = game.state();
    const PolicyOutcome outcome = run_policy(game, sc_.policy, policy_rng_);
    const ValidationReport report =
        validate_assignment(outcome.assignment, st.servers, st.task_list());
    if (!report.ok()) {
      throw std::logic_error("policy produced an invalid assignment at slot " +
                             std::to_string(t) + ": " + report.violations.front().message);
    }

    SlotMetrics m;
    m.slot = t;
    m.iterations = outcome.iterations;
    m.converged = outcome.converged;
    m.evaluations = outcome.evaluations;

    std::vector<double> consumed(sc_.devices.size(), 0.0);
    std::vector<std::optional<std::size_t>> task_of_device(sc_.devices.size());
    for (std::size_t i = 0; i < st.tasks.size(); ++i) {
      const SlotTask& task = st.tasks[i];
      const TaskDecision& d = outcome.assignment.tasks[i];
      const CostBreakdown c =
          split_cost(task.task, d.split, task.device,
                     d.server ? &st.servers[*d.server] : nullptr, task.device.f_max_local,
                     d.alloc_rate, sc_.policy.game.combine);
      TaskMetrics tm;
      tm.id = task.task.id;
      tm.device = task.task.device_id;
      tm.decision = d;
      tm.total_delay = c.total_delay;
      tm.device_energy_j = c.device_energy;
      tm.reward = outcome.device_rewards[i];
      if (d.split.drop) {
        tm.fate = TaskFate::DroppedByPolicy;
      } else {
        tm.fate = c.total_delay <= task.task.deadline_s ? TaskFate::OnTime : TaskFate::DeadlineMissed;
      }
      const std::size_t dev_idx = device_index_.at(tm.device);
      consumed[dev_idx] = c.device_energy;
      task_of_device[dev_idx] = i;
      m.tasks.push_back(tm);
    }

    for (std::size_t d = 0; d < sc_.devices.size(); ++d) {
      DeviceMetrics dm;
      dm.id = sc_.devices[d].id;
      if (batteries_[d]) {
        auto next = step_battery(*batteries_[d], consumed[d]);
        if (!next) {
          dm.depleted = true;
          next = step_battery(*batteries_[d], 0.0);
          TaskMetrics& tm = m.tasks[*task_of_device[d]];
          tm.fate = TaskFate::DroppedByDepletion;
          tm.total_delay = 0.0;
          tm.device_energy_j = 0.0;
          tm.reward = 0.0;
          consumed[d] = 0.0;
        }
        batteries_[d] = next;
        dm.battery_level_j = next->level_j;
      }
      dm.energy_j = consumed[d];
      m.devices.push_back(dm);
    }

    for (std::size_t k = 0; k < st.servers.size(); ++k) {
      const ServerSpec& spec = st.servers[k];
      ServerMetrics sm;
      sm.id = spec.id;
      sm.strategy = outcome.assignment.servers[k];
      for (const auto& tm : m.tasks) {
        if (tm.decision.server == k && tm.fate != TaskFate::DroppedByDepletion) {
          sm.alloc += tm.decision.alloc_rate;
          ++sm.tasks;
        }
      }
      sm.utilization = sm.alloc / spec.f_max;
      const double demand = server_energy_demand(sm.alloc, spec.f_max, sc_.slot_len_s, spec.power);
      sm.energy = make_ledger_entry(demand, green_available(sc_.servers[k].green, t));
      sm.reward = server_reward(spec, sm.alloc, sm.strategy);
      m.servers.push_back(sm);
    }
    return m;
  }

 private:
  const Scenario& sc_;
  Rng arrivals_rng_;
  Rng channel_rng_;
  Rng policy_rng_;
  std::vector<std::optional<DeviceBattery>> batteries_;
  std::map<DeviceId, std::size_t> device_index_;
  TaskId next_task_id_ = 0;
};

Scenario checked(const Scenario& scenario) {
  Scenario s = scenario;
  resolve_defaults(s);
  auto problems = validate_scenario(s);
  if (!problems.empty()) throw ScenarioError(std::move(problems));
  return s;
}

}  // namespace

RunSummary summarize(std::span<const SlotMetrics> slots) {
  RunSummary r;
  r.slots = slots.size();
  std::size_t server_slots = 0;
  double iterations = 0.0;
  for (const auto& m : slots) {
    for (const auto& t : m.tasks) {
      ++r.tasks;
      r.total_device_reward += t.reward;
      r.device_energy_j += t.device_energy_j;
      switch (t.fate) {
        case TaskFate::OnTime: ++r.on_time; break;
        case TaskFate::DeadlineMissed: ++r.deadline_missed; break;
        case TaskFate::DroppedByPolicy: ++r.dropped_by_policy; break;
        case TaskFate::DroppedByDepletion: ++r.dropped_by_depletion; break;
      }
      if (t.fate == TaskFate::OnTime || t.fate == TaskFate::DeadlineMissed) {
        r.total_delay_s += t.total_delay;
        if (t.decision.server) ++r.offloaded;
      }
    }
    for (const auto& s : m.servers) {
      ++server_slots;
      r.total_server_reward += s.reward;
      r.green_available_j += s.energy.available_j;
      r.server_demand_j += s.energy.demand_j;
      r.green_used_j += s.energy.green_used_j;
      r.brown_used_j += s.energy.brown_used_j;
      r.green_wasted_j += s.energy.green_wasted_j;
    }
    for (const auto& d : m.devices) r.depleted_device_slots += d.depleted ? 1 : 0;
    r.converged_slots += m.converged ? 1 : 0;
    iterations += static_cast<double>(m.iterations);
    r.evaluations += m.evaluations;
  }
  const std::size_t executed = r.on_time + r.deadline_missed;
  const auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
  r.drop_rate = ratio(static_cast<double>(r.dropped_by_policy + r.dropped_by_depletion),
                      static_cast<double>(r.tasks));
  r.deadline_miss_rate = ratio(static_cast<double>(r.deadline_missed), static_cast<double>(executed));
  r.mean_delay_s = ratio(r.total_delay_s, static_cast<double>(executed));
  r.mean_device_reward = ratio(r.total_device_reward, static_cast<double>(r.tasks));
  r.mean_server_reward = ratio(r.total_server_reward, static_cast<double>(server_slots));
  r.green_utilization = ratio(r.green_used_j, r.green_available_j);
  r.converged_fraction = ratio(static_cast<double>(r.converged_slots), static_cast<double>(r.slots));
  r.mean_iterations = ratio(iterations, static_cast<double>(r.slots));
  return r;
}

RunResult run(const Scenario& scenario) {
  const Scenario s = checked(scenario);
  const auto start = std::chrono::steady_clock::now();
  Engine engine(s);
  RunResult result;
  result.slots.reserve(s.horizon);
  for (std::size_t t = 0; t < s.horizon; ++t) {
    result.slots.push_back(engine.execute(t, engine.prepare(t)));
  }
  result.summary = summarize(result.slots);
  result.summary.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SlotState slot_state_at(const Scenario& scenario, std::size_t slot) {
  const Scenario s = checked(scenario);
  if (slot >= s.horizon) {
    throw std::out_of_range("slot " + std::to_string(slot) + " outside horizon " +
                            std::to_string(s.horizon));
  }
  Engine engine(s);
  for (std::size_t t = 0; t < slot; ++t) engine.execute(t, engine.prepare(t));
  return engine.prepare(slot);
}

std::vector<SweepItem> sweep(std::span<const Scenario> scenarios, const SweepOptions& opts) {
  std::vector<SweepItem> items(scenarios.size());
  auto run_one = [&](std::size_t i) {
    try {
      items[i].summary = run(scenarios[i]).summary;
    } catch (const std::exception& e) {
      items[i].error = e.what();
    }
  };
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1 || scenarios.size() <= 1) {
    for (std::size_t i = 0; i < scenarios.size(); ++i) run_one(i);
    return items;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < scenarios.size(); i = next++) run_one(i);
    });
  }
  for (auto& th : pool) th.join();
  return items;
}

}  // namespace greenmec
