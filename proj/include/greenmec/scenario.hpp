#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "greenmec/green.hpp"
#include "greenmec/model.hpp"
#include "greenmec/policy.hpp"

namespace greenmec {

/// Per-slot channel gain p(t) of one server.
struct GainModel {
  enum class Kind { Constant, Uniform, Trace };
  Kind kind = Kind::Constant;
  double value = 0.0;           // Constant
  double lo = 0.0, hi = 0.0;    // Uniform, one seeded draw per slot
  std::vector<double> samples;  // Trace
};

struct ServerSetup {
  ServerSpec spec;  // spec.channel.gain is replaced every slot by `gain`
  GainModel gain;
  GreenProfile green;
  std::vector<double> beta_trace;  // optional per-slot β_k(t); empty keeps spec.green_rate_beta
};

struct ArrivalEntry {
  std::size_t slot = 0;
  DeviceId device = 0;
  double data_bits = 0.0;
  double compute_instructions = 0.0;
  double deadline_s = 0.0;
};

struct ArrivalModel {
  enum class Kind { Explicit, Stochastic };
  Kind kind = Kind::Stochastic;
  std::vector<ArrivalEntry> entries;  // Explicit
  // Stochastic: each device independently gets one task per slot with this
  // probability; attributes are uniform over the ranges.
  double probability = 1.0;
  std::array<double, 2> data_bits{1e6, 5e6};
  std::array<double, 2> compute_instructions{5e8, 2e9};
  std::array<double, 2> deadline_s{1.0, 3.0};
};

struct Scenario {
  std::size_t horizon = 1;
  double slot_len_s = 1.0;
  std::uint64_t seed = 0;
  double cycles_per_instruction = 1.0;
  std::array<double, 2> connection_range_s{0.005, 0.050};
  std::vector<DeviceSpec> devices;
  std::vector<ServerSetup> servers;
  ArrivalModel arrivals;
  PolicyConfig policy;
};

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Draws every server connection time left unset (NaN) uniformly from the
/// connection range, using the "topology" stream of the scenario seed.
void resolve_defaults(Scenario& s);

std::vector<std::string> validate_scenario(const Scenario& s);

}  // namespace greenmec
