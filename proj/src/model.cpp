#include "greenmec/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace greenmec {

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::SplitSum: return "split-sum";
    case ViolationKind::SplitDomain: return "split-domain";
    case ViolationKind::DropNotExclusive: return "drop-not-exclusive";
    case ViolationKind::EdgeWithoutServer: return "edge-without-server";
    case ViolationKind::NegativeAlloc: return "negative-alloc";
    case ViolationKind::Capacity: return "capacity";
    case ViolationKind::BackupBound: return "backup-bound";
    case ViolationKind::NegativeStrategy: return "negative-strategy";
    case ViolationKind::AdmissionCap: return "admission-cap";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

namespace {

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }  // false for NaN

std::string describe(std::string_view what, std::size_t subject, double residual) {
  std::ostringstream os;
  os << what << " #" << subject << " residual " << residual;
  return os.str();
}

void append_split_violations(const SplitDecision& d, std::size_t subject,
                             std::vector<Violation>& out) {
  if (!in_unit_interval(d.local)) {
    const double r = d.local < 0.0 ? -d.local : d.local - 1.0;
    out.push_back({ViolationKind::SplitDomain, subject, r,
                   describe("local fraction outside [0,1] for task", subject, r)});
  }
  if (!in_unit_interval(d.edge)) {
    const double r = d.edge < 0.0 ? -d.edge : d.edge - 1.0;
    out.push_back({ViolationKind::SplitDomain, subject, r,
                   describe("edge fraction outside [0,1] for task", subject, r)});
  }
  const double sum = d.local + d.edge + (d.drop ? 1.0 : 0.0);
  const double residual = sum - 1.0;
  if (!(std::abs(residual) <= kSplitTolerance)) {
    out.push_back({ViolationKind::SplitSum, subject, residual,
                   describe("local + edge + drop != 1 for task", subject, residual)});
  }
  if (d.drop && (d.local != 0.0 || d.edge != 0.0)) {
    const double r = d.local + d.edge;
    out.push_back({ViolationKind::DropNotExclusive, subject, r,
                   describe("dropped task keeps non-zero fractions, task", subject, r)});
  }
}

}  // namespace

ValidationReport validate_split(const SplitDecision& d) {
  ValidationReport report;
  append_split_violations(d, 0, report.violations);
  return report;
}

ValidationReport validate_assignment(const Assignment& a, std::span<const ServerSpec> servers,
                                     std::span<const Task> tasks) {
  if (a.tasks.size() != tasks.size()) {
    throw StructuralError("assignment has " + std::to_string(a.tasks.size()) +
                          " task decisions for " + std::to_string(tasks.size()) + " tasks");
  }
  if (a.servers.size() != servers.size()) {
    throw StructuralError("assignment has " + std::to_string(a.servers.size()) +
                          " server strategies for " + std::to_string(servers.size()) +
                          " servers");
  }
  for (std::size_t i = 0; i < a.tasks.size(); ++i) {
    if (a.tasks[i].server && *a.tasks[i].server >= servers.size()) {
      throw StructuralError("task #" + std::to_string(i) + " references unknown server index " +
                            std::to_string(*a.tasks[i].server));
    }
  }

  ValidationReport report;
  auto& out = report.violations;
  std::vector<double> load(servers.size(), 0.0);
  std::vector<std::size_t> admitted(servers.size(), 0);

  for (std::size_t i = 0; i < a.tasks.size(); ++i) {
    const TaskDecision& td = a.tasks[i];
    append_split_violations(td.split, i, out);
    if (td.split.edge > 0.0 && !td.server) {
      out.push_back({ViolationKind::EdgeWithoutServer, i, td.split.edge,
                     describe("edge fraction without a server, task", i, td.split.edge)});
    }
    if (!(td.alloc_rate >= 0.0)) {
      out.push_back({ViolationKind::NegativeAlloc, i, -td.alloc_rate,
                     describe("negative allocated rate, task", i, -td.alloc_rate)});
    }
    if (td.server) {
      load[*td.server] += td.alloc_rate;
      ++admitted[*td.server];
    }
  }

  for (std::size_t k = 0; k < servers.size(); ++k) {
    const ServerStrategy& st = a.servers[k];
    const ServerSpec& spec = servers[k];
    if (!(st.price >= 0.0) || !(st.backup_draw >= 0.0)) {
      const double r = std::max(-st.price, -st.backup_draw);
      out.push_back({ViolationKind::NegativeStrategy, k, r,
                     describe("negative price or backup draw, server", k, r)});
    }
    if (st.backup_draw > spec.backup_capacity) {
      const double r = st.backup_draw - spec.backup_capacity;
      out.push_back({ViolationKind::BackupBound, k, r,
                     describe("backup draw above backup capacity, server", k, r)});
    }
    const double cap = spec.f_max + std::max(0.0, st.backup_draw);
    if (load[k] > cap * (1.0 + kCapacityRelTolerance)) {
      const double r = load[k] - cap;
      out.push_back({ViolationKind::Capacity, k, r,
                     describe("allocated rate above f_max + backup, server", k, r)});
    }
    if (spec.max_tasks && admitted[k] > *spec.max_tasks) {
      const double r = static_cast<double>(admitted[k] - *spec.max_tasks);
      out.push_back({ViolationKind::AdmissionCap, k, r,
                     describe("admitted tasks above cap, server", k, r)});
    }
  }
  return report;
}

std::vector<std::string> check_task(const Task& t) {
  std::vector<std::string> problems;
  if (!(t.data_bits > 0.0)) problems.push_back("data_bits must be > 0");
  if (!(t.cycles > 0.0)) problems.push_back("cycles must be > 0");
  if (!(t.deadline_s > 0.0)) problems.push_back("deadline_s must be > 0");
  return problems;
}

std::vector<std::string> check_device(const DeviceSpec& d) {
  std::vector<std::string> problems;
  if (!(d.f_max_local > 0.0)) problems.push_back("f_max_local must be > 0");
  if (!(d.kappa > 0.0)) problems.push_back("kappa must be > 0");
  if (!(d.tx_power_w > 0.0)) problems.push_back("tx_power_w must be > 0");
  if (!(d.p_sched_w > 0.0)) problems.push_back("p_sched_w must be > 0");
  if (d.battery) {
    const auto& b = *d.battery;
    if (!(b.capacity_j >= 0.0)) problems.push_back("battery capacity must be >= 0");
    if (!(b.level_j >= 0.0 && b.level_j <= b.capacity_j))
      problems.push_back("battery level must lie in [0, capacity]");
    if (!(b.harvest_j_per_slot >= 0.0)) problems.push_back("battery harvest must be >= 0");
  }
  return problems;
}

std::vector<std::string> check_server(const ServerSpec& s, double min_connection_s,
                                      double max_connection_s) {
  std::vector<std::string> problems;
  if (!(s.f_max > 0.0)) problems.push_back("f_max must be > 0");
  if (!(s.connection_time_s >= min_connection_s && s.connection_time_s <= max_connection_s)) {
    std::ostringstream os;
    os << "connection time " << s.connection_time_s << " s outside [" << min_connection_s << ", "
       << max_connection_s << "]";
    problems.push_back(os.str());
  }
  if (!(s.channel.bandwidth_hz > 0.0)) problems.push_back("bandwidth must be > 0");
  if (!(s.channel.noise_w > 0.0)) problems.push_back("noise power must be > 0");
  if (!(s.channel.gain >= 0.0)) problems.push_back("channel gain must be >= 0");
  if (!(s.backup_capacity >= 0.0)) problems.push_back("backup capacity must be >= 0");
  if (!(s.backup_price >= 0.0)) problems.push_back("backup price must be >= 0");
  if (!(s.green_rate_beta >= 0.0)) problems.push_back("green rate beta must be >= 0");
  if (!(s.power.idle_w >= 0.0 && s.power.peak_w >= s.power.idle_w))
    problems.push_back("power model needs 0 <= idle_w <= peak_w");
  return problems;
}

}  // namespace greenmec
