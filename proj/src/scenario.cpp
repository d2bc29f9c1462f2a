#include "greenmec/scenario.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "greenmec/random.hpp"

namespace greenmec {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::ostringstream os;
  os << "invalid scenario:";
  for (const auto& p : problems) os << "\n  " << p;
  return os.str();
}

bool valid_range(const std::array<double, 2>& r, bool strictly_positive) {
  return std::isfinite(r[0]) && std::isfinite(r[1]) && r[0] <= r[1] &&
         (strictly_positive ? r[0] > 0.0 : r[0] >= 0.0);
}

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

void resolve_defaults(Scenario& s) {
  Rng rng = named_stream(s.seed, "topology");
  for (auto& srv : s.servers) {
    if (std::isnan(srv.spec.connection_time_s)) {
      srv.spec.connection_time_s = uniform(rng, s.connection_range_s[0], s.connection_range_s[1]);
    }
  }
}

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> problems;
  auto add = [&](const std::string& where, const std::vector<std::string>& ps) {
    for (const auto& p : ps) problems.push_back(where + ": " + p);
  };
  if (s.horizon < 1) problems.push_back("horizon_slots must be >= 1");
  if (!(s.slot_len_s > 0.0)) problems.push_back("slot_len_s must be > 0");
  if (!(s.cycles_per_instruction > 0.0)) problems.push_back("cycles_per_instruction must be > 0");
  if (!valid_range(s.connection_range_s, false)) problems.push_back("connection_range_s is not a valid range");
  if (s.devices.empty()) problems.push_back("at least one device is required");

  std::set<DeviceId> device_ids;
  for (std::size_t i = 0; i < s.devices.size(); ++i) {
    const auto& d = s.devices[i];
    if (!device_ids.insert(d.id).second) {
      problems.push_back("devices[" + std::to_string(i) + "]: duplicate id " + std::to_string(d.id));
    }
    add("devices[" + std::to_string(i) + "]", check_device(d));
  }
  std::set<ServerId> server_ids;
  for (std::size_t k = 0; k < s.servers.size(); ++k) {
    const auto& srv = s.servers[k];
    const std::string where = "servers[" + std::to_string(k) + "]";
    if (!server_ids.insert(srv.spec.id).second) {
      problems.push_back(where + ": duplicate id " + std::to_string(srv.spec.id));
    }
    ServerSpec probe = srv.spec;
    probe.channel.gain = 0.0;
    if (std::isnan(probe.connection_time_s)) probe.connection_time_s = s.connection_range_s[0];
    add(where, check_server(probe, s.connection_range_s[0], s.connection_range_s[1]));
    switch (srv.gain.kind) {
      case GainModel::Kind::Constant:
        if (!(srv.gain.value >= 0.0)) problems.push_back(where + ": channel gain must be >= 0");
        break;
      case GainModel::Kind::Uniform:
        if (!valid_range({srv.gain.lo, srv.gain.hi}, false))
          problems.push_back(where + ": channel gain range is not valid");
        break;
      case GainModel::Kind::Trace:
        if (srv.gain.samples.size() < s.horizon)
          problems.push_back(where + ": channel gain trace shorter than the horizon");
        for (double g : srv.gain.samples) {
          if (!(g >= 0.0)) {
            problems.push_back(where + ": channel gain trace has a negative sample");
            break;
          }
        }
        break;
    }
    switch (srv.green.kind) {
      case GreenProfile::Kind::Trace:
        if (srv.green.samples.size() < s.horizon)
          problems.push_back(where + ": green trace shorter than the horizon");
        for (double g : srv.green.samples) {
          if (!(g >= 0.0)) {
            problems.push_back(where + ": green trace has a negative sample");
            break;
          }
        }
        break;
      case GreenProfile::Kind::Constant:
        if (!(srv.green.level_j >= 0.0)) problems.push_back(where + ": green level must be >= 0");
        break;
      case GreenProfile::Kind::DiurnalSine: {
        const auto& d = srv.green.diurnal;
        if (!(d.peak_j >= 0.0)) problems.push_back(where + ": green peak must be >= 0");
        if (!(d.sunrise_h >= 0.0 && d.sunrise_h < d.sunset_h && d.sunset_h <= 24.0))
          problems.push_back(where + ": need 0 <= sunrise_h < sunset_h <= 24");
        if (!(d.slot_len_s > 0.0)) problems.push_back(where + ": green slot length must be > 0");
        break;
      }
    }
    if (!srv.beta_trace.empty() && srv.beta_trace.size() < s.horizon)
      problems.push_back(where + ": beta trace shorter than the horizon");
  }

  const auto& a = s.arrivals;
  if (a.kind == ArrivalModel::Kind::Stochastic) {
    if (!(a.probability >= 0.0 && a.probability <= 1.0))
      problems.push_back("arrivals: probability must lie in [0, 1]");
    if (!valid_range(a.data_bits, true)) problems.push_back("arrivals: data_bits range invalid");
    if (!valid_range(a.compute_instructions, true))
      problems.push_back("arrivals: compute_instructions range invalid");
    if (!valid_range(a.deadline_s, true)) problems.push_back("arrivals: deadline_s range invalid");
  } else {
    std::set<std::pair<std::size_t, DeviceId>> seen;
    for (std::size_t e = 0; e < a.entries.size(); ++e) {
      const auto& en = a.entries[e];
      const std::string where = "arrivals.tasks[" + std::to_string(e) + "]";
      if (!device_ids.count(en.device))
        problems.push_back(where + ": unknown device " + std::to_string(en.device));
      if (en.slot >= s.horizon) problems.push_back(where + ": slot beyond the horizon");
      if (!seen.insert({en.slot, en.device}).second)
        problems.push_back(where + ": device already has a task in this slot");
      Task t{0, en.device, en.data_bits, en.compute_instructions, en.deadline_s};
      add(where, check_task(t));
    }
  }

  const auto& g = s.policy.game;
  if (g.grids.prices.empty()) problems.push_back("policy: price grid is empty");
  for (std::size_t i = 0; i < g.grids.prices.size(); ++i) {
    if (!(g.grids.prices[i] >= 0.0) || (i > 0 && g.grids.prices[i] <= g.grids.prices[i - 1])) {
      problems.push_back("policy: price grid must be non-negative and strictly ascending");
      break;
    }
  }
  if (g.grids.alloc_levels < 1) problems.push_back("policy: alloc_levels must be >= 1");
  if (g.grids.backup_fractions.empty()) problems.push_back("policy: backup grid is empty");
  for (double b : g.grids.backup_fractions) {
    if (!(b >= 0.0)) problems.push_back("policy: backup fractions must be >= 0");
  }
  for (double e : g.grids.edge_fractions) {
    if (!(e > 0.0 && e <= 1.0)) problems.push_back("policy: edge fractions must lie in (0, 1]");
  }
  if (!(g.weights.lambda >= 0.0 && g.weights.epsilon >= 0.0 && g.weights.mu >= 0.0))
    problems.push_back("policy: lambda, epsilon and mu must be >= 0");
  if (g.max_iters < 1) problems.push_back("policy: max_iters must be >= 1");
  if (!(g.tol > 0.0)) problems.push_back("policy: tol must be > 0");
  return problems;
}

}  // namespace greenmec
