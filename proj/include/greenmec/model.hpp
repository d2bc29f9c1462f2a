#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace greenmec {

using TaskId = std::uint64_t;
using DeviceId = std::uint32_t;
using ServerId = std::uint32_t;

// Absolute slack on the local + edge + drop = 1 simplex constraint.
inline constexpr double kSplitTolerance = 1e-9;
// Relative slack on per-server capacity sums (Σ f_{i,k} ≤ f_max + f_b).
inline constexpr double kCapacityRelTolerance = 1e-12;

struct Task {
  TaskId id = 0;
  DeviceId device_id = 0;
  double data_bits = 0.0;   // s_i
  double cycles = 0.0;      // c_i
  double deadline_s = 0.0;  // d_i
};

/// Fractions of one task kept on the device, shipped to the edge, or dropped.
struct SplitDecision {
  double local = 1.0;
  double edge = 0.0;
  bool drop = false;

  static constexpr SplitDecision all_local() { return {1.0, 0.0, false}; }
  static constexpr SplitDecision all_edge() { return {0.0, 1.0, false}; }
  static constexpr SplitDecision dropped() { return {0.0, 0.0, true}; }

  friend bool operator==(const SplitDecision&, const SplitDecision&) = default;
};

struct DeviceBattery {
  double capacity_j = 0.0;
  double level_j = 0.0;
  double harvest_j_per_slot = 0.0;

  friend bool operator==(const DeviceBattery&, const DeviceBattery&) = default;
};

struct DeviceSpec {
  DeviceId id = 0;
  double f_max_local = 0.0;  // cycles/s
  double kappa = 1e-27;      // J·s/cycle² energy factor
  double tx_power_w = 0.0;   // radio power inside the SNR term
  double p_sched_w = 0.0;    // scheduled transmission power charged while offloading
  std::optional<DeviceBattery> battery;  // absent: mains powered, never depletes
};

struct Channel {
  double bandwidth_hz = 0.0;
  double noise_w = 0.0;
  double gain = 0.0;  // p(t), resolved per slot by the simulator
};

struct PowerModel {
  double idle_w = 0.0;
  double peak_w = 0.0;
};

struct ServerSpec {
  ServerId id = 0;
  double f_max = 0.0;  // cycles/s
  double connection_time_s = 0.0;
  Channel channel;
  double backup_capacity = 0.0;  // cycles/s purchasable from the cloud tier
  double backup_price = 0.0;     // y
  double green_rate_beta = 0.0;  // β_k
  std::optional<std::size_t> max_tasks;  // admission cap, unlimited when empty
  PowerModel power;
};

struct ServerStrategy {
  double price = 0.0;        // x_k
  double backup_draw = 0.0;  // f_k^b

  friend bool operator==(const ServerStrategy&, const ServerStrategy&) = default;
};

/// One task's slot decision. `server` is the index of the chosen server in the
/// slot's server list; at most one server per task.
struct TaskDecision {
  SplitDecision split;
  std::optional<std::size_t> server;
  double alloc_rate = 0.0;  // f_{i,k}, cycles/s
  bool forced_local = false;  // no feasible option existed and dropping was disabled

  friend bool operator==(const TaskDecision&, const TaskDecision&) = default;
};

struct Assignment {
  std::vector<TaskDecision> tasks;
  std::vector<ServerStrategy> servers;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

enum class ViolationKind {
  SplitSum,            // local + edge + drop != 1
  SplitDomain,         // a fraction outside [0,1]
  DropNotExclusive,    // drop with non-zero fractions
  EdgeWithoutServer,   // edge fraction > 0 but no server chosen
  NegativeAlloc,       // f_{i,k} < 0
  Capacity,            // Σ f_{i,k} > f_max + f_b
  BackupBound,         // f_b > backup_capacity
  NegativeStrategy,    // x_k < 0 or f_b < 0
  AdmissionCap,        // too many tasks at one server
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::size_t subject = 0;  // task index or server index, depending on kind
  double residual = 0.0;    // amount by which the constraint is exceeded
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
};

/// Thrown when an assignment cannot even be interpreted against the instance
/// (unknown server index, task count mismatch).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ValidationReport validate_split(const SplitDecision& d);

ValidationReport validate_assignment(const Assignment& a,
                                     std::span<const ServerSpec> servers,
                                     std::span<const Task> tasks);

// Domain invariants on the static inputs; each returns human-readable problems.
std::vector<std::string> check_task(const Task& t);
std::vector<std::string> check_device(const DeviceSpec& d);
std::vector<std::string> check_server(const ServerSpec& s, double min_connection_s = 0.005,
                                      double max_connection_s = 0.050);

}  // namespace greenmec
