#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace greenmec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;  // parse failures and bad arguments
inline constexpr int kExitInvalid = 3;
inline constexpr int kExitOversize = 4;

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

struct RunArgs {
  std::filesystem::path scenario;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
};

int cmd_run(const RunArgs& args, Streams io);

/// compare.csv: one row per policy, same scenario and seed for all.
inline constexpr const char* kCompareCsvHeader =
    "policy,mean_delay_s,total_brown_j,green_utilization,drop_rate,mean_device_reward,"
    "mean_server_reward,wall_clock_s";

int cmd_compare(const RunArgs& args, const std::vector<std::string>& policies, Streams io);

int cmd_oracle_check(const RunArgs& args, std::size_t slot, Streams io);

inline constexpr const char* kSweepCsvHeader =
    "scenario,status,tasks,mean_delay_s,total_brown_j,green_utilization,drop_rate,"
    "mean_device_reward,mean_server_reward,converged_fraction,evaluations,wall_clock_s";

int cmd_sweep(const std::vector<std::filesystem::path>& scenarios,
              const std::filesystem::path& out_dir, std::optional<std::uint64_t> seed,
              unsigned threads, Streams io);

/// Full command line entry point (`greenmec <verb> ...`).
int main_cli(int argc, char** argv, Streams io);

}  // namespace greenmec::cli
