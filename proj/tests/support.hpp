#pragma once

#include <cstdint>
#include <string>

#include "greenmec/game.hpp"
#include "greenmec/random.hpp"
#include "greenmec/scenario.hpp"

namespace greenmec::fixture {

struct SlotShape {
  std::size_t tasks = 2;
  std::size_t servers = 1;
  double mu = 1.0;
  double backup_fraction_cap = 0.5;  // backup capacity as a fraction of f_max
};

inline ServerSpec make_server(std::size_t k, Rng& rng, double backup_fraction_cap) {
  ServerSpec s;
  s.id = static_cast<ServerId>(k);
  s.f_max = uniform(rng, 5e9, 1e10);
  s.connection_time_s = uniform(rng, 0.005, 0.05);
  s.channel = {1e7, 1e-9, uniform(rng, 2e-7, 2e-6)};
  s.backup_capacity = backup_fraction_cap * s.f_max;
  s.backup_price = uniform(rng, 1e-9, 2e-9);
  s.green_rate_beta = uniform(rng, 3e-10, 1e-9);
  s.power = {100.0, 200.0};
  return s;
}

inline SlotTask make_task(std::size_t i, Rng& rng) {
  SlotTask st;
  st.task = {static_cast<TaskId>(i), static_cast<DeviceId>(i), uniform(rng, 1e6, 5e6),
             uniform(rng, 5e8, 2e9), uniform(rng, 1.0, 3.0)};
  st.device.id = static_cast<DeviceId>(i);
  st.device.f_max_local = uniform(rng, 5e8, 1e9);
  st.device.tx_power_w = 0.2;
  st.device.p_sched_w = 0.2;
  return st;
}

/// Random slot with the default scales used throughout the tests.
inline SlotState random_slot(std::uint64_t seed, const SlotShape& shape) {
  Rng rng = named_stream(seed, "fixture");
  SlotState s;
  for (std::size_t k = 0; k < shape.servers; ++k) {
    s.servers.push_back(make_server(k, rng, shape.backup_fraction_cap));
  }
  for (std::size_t i = 0; i < shape.tasks; ++i) s.tasks.push_back(make_task(i, rng));
  return s;
}

inline GameConfig config_with_mu(double mu) {
  GameConfig cfg;
  cfg.weights.mu = mu;
  return cfg;
}

/// Scenario with `devices` devices and `servers` servers where offloading
/// beats local execution for every task.
inline Scenario offload_scenario(std::uint64_t seed, std::size_t devices, std::size_t servers,
                                 std::size_t horizon, PolicyKind policy,
                                 double mu = 0.0) {
  Scenario sc;
  sc.horizon = horizon;
  sc.seed = seed;
  Rng rng = named_stream(seed, "fixture");
  for (std::size_t i = 0; i < devices; ++i) {
    DeviceSpec d;
    d.id = static_cast<DeviceId>(i);
    d.f_max_local = uniform(rng, 5e8, 1e9);
    d.tx_power_w = 0.2;
    d.p_sched_w = 0.2;
    sc.devices.push_back(d);
  }
  for (std::size_t k = 0; k < servers; ++k) {
    ServerSetup s;
    s.spec = make_server(k, rng, 0.5);
    s.gain.kind = GainModel::Kind::Uniform;
    s.gain.lo = 5e-7;
    s.gain.hi = 2e-6;
    s.green = GreenProfile::diurnal_sine({400.0, 6.0, 18.0, 8.0, 1.0});
    sc.servers.push_back(s);
  }
  sc.arrivals.kind = ArrivalModel::Kind::Stochastic;
  sc.arrivals.probability = 0.9;
  sc.policy.kind = policy;
  sc.policy.game.weights.mu = mu;
  return sc;
}

}  // namespace greenmec::fixture
