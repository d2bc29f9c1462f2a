#pragma once

#include <limits>
#include <stdexcept>

#include "greenmec/model.hpp"

namespace greenmec {

/// Raised when a cost formula is evaluated outside its domain (non-positive
/// rate, unreachable server, zero noise power, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// How the delays of the local and edge branches of a split task combine.
enum class CombineRule {
  Parallel,    // branches run concurrently: total = max(local, edge)
  Sequential,  // total = local + edge
};

struct CostBreakdown {
  // Edge branch components.
  double transmit_delay = 0.0;
  double compute_delay = 0.0;
  double connect_delay = 0.0;
  // Per-branch totals.
  double local_delay = 0.0;
  double edge_delay = 0.0;
  double total_delay = 0.0;
  double device_energy = 0.0;
  double local_energy_component = 0.0;
  double edge_energy_component = 0.0;
  bool dropped = false;
};

double local_delay(double cycles, double f_local,
                   double f_max_local = std::numeric_limits<double>::infinity());

double local_energy(double kappa, double f_local, double delay);

/// Shannon-Hartley capacity w·log2(1 + s·p/σ) in bits/s.
double shannon_rate(double bandwidth_hz, double tx_power_w, double gain, double noise_w);

/// Sequential transmit + compute + connect delay of the edge path.
CostBreakdown edge_delay(double data_bits, double rate, double cycles, double f_alloc,
                         double connection_s);

double edge_energy(double p_sched_w, double edge_delay_total);

/// Cost of a split decision. The local branch runs x_local·c_i cycles at
/// `f_local`; the edge branch ships x_edge·s_i bits and runs x_edge·c_i cycles
/// at `f_alloc` on `server`. Server parameters are only read when x_edge > 0.
CostBreakdown split_cost(const Task& task, const SplitDecision& split, const DeviceSpec& device,
                         const ServerSpec* server, double f_local, double f_alloc,
                         CombineRule rule = CombineRule::Parallel);

inline CostBreakdown split_cost(const Task& task, const SplitDecision& split,
                                const DeviceSpec& device, const ServerSpec& server,
                                double f_local, double f_alloc,
                                CombineRule rule = CombineRule::Parallel) {
  return split_cost(task, split, device, &server, f_local, f_alloc, rule);
}

/// Uplink rate from `device` to `server` under the server's current channel.
double uplink_rate(const DeviceSpec& device, const ServerSpec& server);

}  // namespace greenmec
