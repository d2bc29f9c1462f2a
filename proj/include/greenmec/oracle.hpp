#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "greenmec/game.hpp"

namespace greenmec {

struct OracleOptions {
  std::size_t max_tasks = 4;
  std::size_t max_servers = 2;
  std::uint64_t max_profiles = 10'000'000;
  double epsilon = 1e-6;
  bool record_table = false;  // keep every profile's rewards (memory heavy)
  unsigned threads = 0;       // 0: hardware concurrency
};

/// Refusal to enumerate an instance above the size caps.
class OracleTooLarge : public std::runtime_error {
 public:
  OracleTooLarge(std::uint64_t cardinality, const std::string& what)
      : std::runtime_error(what), cardinality_(cardinality) {}
  std::uint64_t cardinality() const { return cardinality_; }

 private:
  std::uint64_t cardinality_;
};

struct OracleRow {
  std::uint64_t index = 0;
  bool feasible = false;
  std::vector<double> device_rewards;
  std::vector<double> server_rewards;
  double social = 0.0;
};

struct OracleResult {
  std::uint64_t cardinality = 0;
  std::uint64_t feasible_profiles = 0;
  std::uint64_t social_optimum_index = 0;
  double social_optimum = 0.0;
  Assignment social_optimum_profile;
  std::vector<std::uint64_t> nash_indices;  // ascending
  std::vector<OracleRow> table;             // filled when record_table is set

  bool in_nash_set(std::uint64_t index) const;
};

/// Number of joint grid profiles (device options × server grid points);
/// saturates at UINT64_MAX.
std::uint64_t oracle_cardinality(const SlotGame& game);

/// Mixed-radix index of a grid profile: device options first (task 0 is the
/// least significant digit), then each server's (price, backup) pair.
std::optional<std::uint64_t> oracle_index(const SlotGame& game, const Assignment& profile);
Assignment oracle_decode(const SlotGame& game, std::uint64_t index);

/// Exhaustive enumeration of every joint grid profile. Returns the social
/// optimum over feasible profiles and the set of pure ε-Nash profiles, where
/// devices deviate unilaterally and servers are judged against their best
/// grid point with devices re-responding in index order.
OracleResult brute_force_oracle(const SlotGame& game, const OracleOptions& opts = {});

}  // namespace greenmec
