#include "greenmec/costs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace greenmec {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw DomainError(what);
}

}  // namespace

double local_delay(double cycles, double f_local, double f_max_local) {
  require(cycles > 0.0, "local_delay: cycles must be > 0");
  require(f_local > 0.0, "local_delay: f_local must be > 0");
  require(f_local <= f_max_local, "local_delay: f_local exceeds the device maximum");
  return cycles / f_local;
}

double local_energy(double kappa, double f_local, double delay) {
  require(kappa > 0.0 && f_local > 0.0 && delay > 0.0,
          "local_energy: kappa, f_local and delay must be > 0");
  return kappa * f_local * f_local * delay;
}

double shannon_rate(double bandwidth_hz, double tx_power_w, double gain, double noise_w) {
  require(bandwidth_hz > 0.0, "shannon_rate: bandwidth must be > 0");
  require(noise_w > 0.0, "shannon_rate: noise power must be > 0");
  require(tx_power_w >= 0.0 && gain >= 0.0, "shannon_rate: power and gain must be >= 0");
  const double snr = tx_power_w * gain / noise_w;
  if (snr == 0.0) return 0.0;
  return bandwidth_hz * std::log2(1.0 + snr);
}

CostBreakdown edge_delay(double data_bits, double rate, double cycles, double f_alloc,
                         double connection_s) {
  require(rate > 0.0, "edge_delay: server unreachable (rate <= 0)");
  require(f_alloc > 0.0, "edge_delay: server unprovisioned (f_alloc <= 0)");
  require(connection_s >= 0.0, "edge_delay: connection time must be >= 0");
  require(data_bits >= 0.0 && cycles >= 0.0, "edge_delay: data and cycles must be >= 0");
  CostBreakdown c;
  c.transmit_delay = data_bits / rate;
  c.compute_delay = cycles / f_alloc;
  c.connect_delay = connection_s;
  c.edge_delay = c.transmit_delay + c.compute_delay + c.connect_delay;
  c.total_delay = c.edge_delay;
  return c;
}

double edge_energy(double p_sched_w, double edge_delay_total) {
  require(p_sched_w >= 0.0 && edge_delay_total >= 0.0,
          "edge_energy: power and delay must be >= 0");
  return p_sched_w * edge_delay_total;
}

double uplink_rate(const DeviceSpec& device, const ServerSpec& server) {
  return shannon_rate(server.channel.bandwidth_hz, device.tx_power_w, server.channel.gain,
                      server.channel.noise_w);
}

CostBreakdown split_cost(const Task& task, const SplitDecision& split, const DeviceSpec& device,
                         const ServerSpec* server, double f_local, double f_alloc,
                         CombineRule rule) {
  if (!validate_split(split).ok()) throw DomainError("split_cost: invalid split decision");
  CostBreakdown c;
  if (split.drop) {
    c.dropped = true;
    return c;
  }
  if (split.local > 0.0) {
    c.local_delay = local_delay(split.local * task.cycles, f_local, device.f_max_local);
    c.local_energy_component = local_energy(device.kappa, f_local, c.local_delay);
  }
  if (split.edge > 0.0) {
    require(server != nullptr, "split_cost: edge fraction without a server");
    const CostBreakdown e =
        edge_delay(split.edge * task.data_bits, uplink_rate(device, *server),
                   split.edge * task.cycles, f_alloc, server->connection_time_s);
    c.transmit_delay = e.transmit_delay;
    c.compute_delay = e.compute_delay;
    c.connect_delay = e.connect_delay;
    c.edge_delay = e.edge_delay;
    c.edge_energy_component = edge_energy(device.p_sched_w, c.edge_delay);
  }
  c.total_delay = rule == CombineRule::Parallel ? std::max(c.local_delay, c.edge_delay)
                                                : c.local_delay + c.edge_delay;
  c.device_energy = c.local_energy_component + c.edge_energy_component;
  return c;
}

}  // namespace greenmec
