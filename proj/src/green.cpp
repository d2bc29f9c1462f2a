#include "greenmec/green.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <string_view>

namespace greenmec {

GreenProfile GreenProfile::trace(std::vector<double> samples) {
  GreenProfile p;
  p.kind = Kind::Trace;
  p.samples = std::move(samples);
  return p;
}

GreenProfile GreenProfile::diurnal_sine(DiurnalParams params) {
  GreenProfile p;
  p.kind = Kind::DiurnalSine;
  p.diurnal = params;
  return p;
}

GreenProfile GreenProfile::constant(double level_j) {
  GreenProfile p;
  p.kind = Kind::Constant;
  p.level_j = level_j;
  return p;
}

GreenProfile GreenProfile::scaled(double factor) const {
  GreenProfile p = *this;
  for (double& s : p.samples) s *= factor;
  p.diurnal.peak_j *= factor;
  p.level_j *= factor;
  return p;
}

double green_available(const GreenProfile& profile, std::size_t slot) {
  switch (profile.kind) {
    case GreenProfile::Kind::Trace:
      if (slot >= profile.samples.size()) {
        throw std::out_of_range("green trace has " + std::to_string(profile.samples.size()) +
                                " slots, slot " + std::to_string(slot) + " requested");
      }
      return profile.samples[slot];
    case GreenProfile::Kind::Constant:
      return profile.level_j;
    case GreenProfile::Kind::DiurnalSine: {
      const DiurnalParams& d = profile.diurnal;
      const double elapsed_h = static_cast<double>(slot) * d.slot_len_s / 3600.0;
      const double hour = std::fmod(d.start_hour + elapsed_h, 24.0);
      if (hour <= d.sunrise_h || hour >= d.sunset_h) return 0.0;
      const double phase = std::numbers::pi * (hour - d.sunrise_h) / (d.sunset_h - d.sunrise_h);
      return d.peak_j * std::max(0.0, std::sin(phase));
    }
  }
  return 0.0;
}

EnergySplit account_server_energy(double demand_j, double available_green_j) {
  EnergySplit s;
  s.green_used = std::min(demand_j, available_green_j);
  s.brown_used = demand_j - s.green_used;
  return s;
}

LedgerEntry make_ledger_entry(double demand_j, double available_green_j) {
  const EnergySplit s = account_server_energy(demand_j, available_green_j);
  return {demand_j, available_green_j, s.green_used, s.brown_used,
          available_green_j - s.green_used};
}

double battery_budget(const DeviceBattery& b) {
  return std::min(b.capacity_j, b.level_j + b.harvest_j_per_slot);
}

std::optional<DeviceBattery> step_battery(const DeviceBattery& b, double consumed_j) {
  const double level = battery_budget(b) - consumed_j;
  if (level < 0.0) return std::nullopt;
  DeviceBattery next = b;
  next.level_j = level;
  return next;
}

double server_energy_demand(double alloc_total, double f_max, double slot_len_s,
                            const PowerModel& power) {
  const double utilisation = std::min(1.0, alloc_total / f_max);
  return slot_len_s * (power.idle_w + (power.peak_w - power.idle_w) * utilisation);
}

TraceFormatError::TraceFormatError(const std::string& source, std::size_t line,
                                   const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<double> parse_green_trace(std::istream& in, const std::string& source) {
  std::vector<double> samples;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto comma = row.find(',');
    if (comma == std::string_view::npos) {
      throw TraceFormatError(source, line_no, "expected 'slot_index,joules'");
    }
    const std::string_view idx_text = trim(row.substr(0, comma));
    const std::string_view val_text = trim(row.substr(comma + 1));
    std::size_t idx = 0;
    auto [p1, e1] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), idx);
    if (e1 != std::errc{} || p1 != idx_text.data() + idx_text.size()) {
      throw TraceFormatError(source, line_no, "bad slot index '" + std::string(idx_text) + "'");
    }
    if (idx != samples.size()) {
      throw TraceFormatError(source, line_no,
                             "slot indices must be contiguous from 0, expected " +
                                 std::to_string(samples.size()));
    }
    double joules = 0.0;
    auto [p2, e2] = std::from_chars(val_text.data(), val_text.data() + val_text.size(), joules);
    if (e2 != std::errc{} || p2 != val_text.data() + val_text.size() || !std::isfinite(joules) ||
        joules < 0.0) {
      throw TraceFormatError(source, line_no,
                             "joules must be a finite value >= 0, got '" +
                                 std::string(val_text) + "'");
    }
    samples.push_back(joules);
  }
  if (!header_seen) throw TraceFormatError(source, std::max<std::size_t>(line_no, 1), "missing header line");
  return samples;
}

std::vector<double> load_green_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TraceFormatError(path.string(), 0, "cannot open trace file");
  return parse_green_trace(in, path.string());
}

}  // namespace greenmec
