#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "greenmec/scenario.hpp"
#include "greenmec/simulator.hpp"

namespace greenmec {

struct OutputOptions {
  bool tasks_csv = false;  // also write per-task rows
};

struct ScenarioFile {
  Scenario scenario;
  OutputOptions output;
};

/// Scenario file problem anchored at a 1-based line (0 when unknown).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses the YAML scenario format. Unknown keys are errors. Relative trace
/// paths resolve against `base_dir`.
ScenarioFile parse_scenario(std::string_view text, const std::filesystem::path& base_dir = ".",
                            const std::string& source = "<scenario>");
ScenarioFile load_scenario(const std::filesystem::path& path);

/// Scenario with every default written out; parsing it back reproduces the
/// same run.
std::string emit_scenario(const ScenarioFile& file);

inline constexpr std::string_view kSlotsCsvHeader =
    "slot,tasks,offloaded,on_time,deadline_missed,dropped_by_policy,dropped_by_depletion,"
    "mean_delay_s,device_energy_j,device_reward,server_reward,green_available_j,"
    "server_demand_j,green_used_j,brown_used_j,green_wasted_j,mean_utilization,"
    "depleted_devices,eq_iterations,eq_converged";

inline constexpr std::string_view kTasksCsvHeader =
    "slot,task_id,device,fate,server,x_local,x_edge,x_drop,alloc_cycles_per_s,total_delay_s,"
    "device_energy_j,reward";

std::string slots_csv(std::span<const SlotMetrics> slots);
std::string tasks_csv(std::span<const SlotMetrics> slots);
std::string summary_text(const RunSummary& s);

/// `%.9g`-style formatting used in every CSV.
std::string format_sig9(double v);
/// Shortest text that reads back to exactly `v`.
std::string format_exact(double v);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace greenmec
