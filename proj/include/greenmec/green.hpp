#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "greenmec/model.hpp"

namespace greenmec {

struct DiurnalParams {
  double peak_j = 0.0;      // joules available in a slot starting at solar noon
  double sunrise_h = 6.0;
  double sunset_h = 18.0;
  double start_hour = 0.0;  // local time at slot 0
  double slot_len_s = 1.0;
};

/// Per-slot renewable supply R_k(t) of one server location.
struct GreenProfile {
  enum class Kind { Trace, DiurnalSine, Constant };

  Kind kind = Kind::Constant;
  std::vector<double> samples;  // Trace
  DiurnalParams diurnal;        // DiurnalSine
  double level_j = 0.0;         // Constant

  static GreenProfile trace(std::vector<double> samples);
  static GreenProfile diurnal_sine(DiurnalParams p);
  static GreenProfile constant(double level_j);

  /// Same profile with every slot's supply multiplied by `factor`.
  GreenProfile scaled(double factor) const;
};

/// Joules of green energy available at `slot`. Throws std::out_of_range for a
/// trace shorter than `slot + 1`.
double green_available(const GreenProfile& profile, std::size_t slot);

struct EnergySplit {
  double green_used = 0.0;
  double brown_used = 0.0;
};

/// Green-first accounting: green covers demand until exhausted, brown tops up.
EnergySplit account_server_energy(double demand_j, double available_green_j);

struct LedgerEntry {
  double demand_j = 0.0;
  double available_j = 0.0;
  double green_used_j = 0.0;
  double brown_used_j = 0.0;
  double green_wasted_j = 0.0;
};

LedgerEntry make_ledger_entry(double demand_j, double available_green_j);

/// Harvest, clamp at capacity, then draw `consumed_j`. Empty when the draw
/// would take the level below zero.
std::optional<DeviceBattery> step_battery(const DeviceBattery& b, double consumed_j);

/// Energy the battery can spend this slot (level after harvest).
double battery_budget(const DeviceBattery& b);

/// Linear utilisation power model integrated over one slot.
double server_energy_demand(double alloc_total, double f_max, double slot_len_s,
                            const PowerModel& power);

class TraceFormatError : public std::runtime_error {
 public:
  TraceFormatError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads `slot_index,joules` rows after a mandatory header line. Slot indices
/// must start at 0 and be contiguous; joules must be finite and >= 0.
std::vector<double> parse_green_trace(std::istream& in, const std::string& source = "<stream>");
std::vector<double> load_green_trace(const std::filesystem::path& path);

}  // namespace greenmec
