#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "greenmec/green.hpp"
#include "greenmec/scenario.hpp"

namespace greenmec {

enum class TaskFate { OnTime, DeadlineMissed, DroppedByPolicy, DroppedByDepletion };

std::string_view to_string(TaskFate f);

struct TaskMetrics {
  TaskId id = 0;
  DeviceId device = 0;
  TaskDecision decision;
  double total_delay = 0.0;
  double device_energy_j = 0.0;
  double reward = 0.0;
  TaskFate fate = TaskFate::OnTime;

  bool deadline_met() const { return fate == TaskFate::OnTime; }
};

struct ServerMetrics {
  ServerId id = 0;
  ServerStrategy strategy;
  std::size_t tasks = 0;
  double alloc = 0.0;
  double utilization = 0.0;  // alloc / f_max; above 1 when backup is drawn
  LedgerEntry energy;
  double reward = 0.0;
};

struct DeviceMetrics {
  DeviceId id = 0;
  double energy_j = 0.0;
  std::optional<double> battery_level_j;
  bool depleted = false;
};

struct SlotMetrics {
  std::size_t slot = 0;
  std::vector<TaskMetrics> tasks;
  std::vector<ServerMetrics> servers;
  std::vector<DeviceMetrics> devices;
  std::size_t iterations = 0;
  bool converged = true;
  std::uint64_t evaluations = 0;
};

struct RunSummary {
  std::size_t slots = 0;
  std::size_t tasks = 0;
  std::size_t offloaded = 0;
  std::size_t on_time = 0;
  std::size_t deadline_missed = 0;
  std::size_t dropped_by_policy = 0;
  std::size_t dropped_by_depletion = 0;
  std::size_t depleted_device_slots = 0;
  double drop_rate = 0.0;           // dropped / tasks
  double deadline_miss_rate = 0.0;  // missed / executed
  double total_delay_s = 0.0;       // over executed tasks
  double mean_delay_s = 0.0;
  double device_energy_j = 0.0;
  double total_device_reward = 0.0;
  double mean_device_reward = 0.0;  // per task
  double total_server_reward = 0.0;
  double mean_server_reward = 0.0;  // per server-slot
  double green_available_j = 0.0;
  double server_demand_j = 0.0;
  double green_used_j = 0.0;
  double brown_used_j = 0.0;
  double green_wasted_j = 0.0;
  double green_utilization = 0.0;  // green used / green available
  std::size_t converged_slots = 0;
  double converged_fraction = 0.0;
  double mean_iterations = 0.0;
  std::uint64_t evaluations = 0;
  double wall_clock_s = 0.0;  // excluded from determinism guarantees
};

struct RunResult {
  RunSummary summary;
  std::vector<SlotMetrics> slots;
};

/// Runs the scenario slot by slot. Throws ScenarioError before the first slot
/// when the scenario is invalid. Deterministic in (scenario, seed).
RunResult run(const Scenario& scenario);

/// The policy input of `slot` (arrivals, resolved channel and β, battery
/// budgets) after running every earlier slot.
SlotState slot_state_at(const Scenario& scenario, std::size_t slot);

struct SweepItem {
  std::optional<RunSummary> summary;
  std::string error;
};

struct SweepOptions {
  unsigned threads = 1;  // 0: hardware concurrency
};

/// Independent runs, results in input order; a failing scenario reports its
/// error and the others still run.
std::vector<SweepItem> sweep(std::span<const Scenario> scenarios, const SweepOptions& opts = {});

RunSummary summarize(std::span<const SlotMetrics> slots);

}  // namespace greenmec
