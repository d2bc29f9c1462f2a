#include <gtest/gtest.h>

#include <cmath>

#include "greenmec/costs.hpp"
#include "greenmec/random.hpp"

using namespace greenmec;

namespace {

DeviceSpec device() {
  DeviceSpec d;
  d.f_max_local = 1e9;
  d.kappa = 1e-27;
  d.tx_power_w = 0.1;
  d.p_sched_w = 0.5;
  return d;
}

ServerSpec server() {
  ServerSpec s;
  s.f_max = 1e10;
  s.connection_time_s = 0.05;
  s.channel = {1e7, 1e-7, 1e-6};  // SNR 1: rate equals bandwidth
  return s;
}

}  // namespace

TEST(LocalDelay, Examples) {
  EXPECT_DOUBLE_EQ(local_delay(2e9, 1e9), 2.0);
  EXPECT_DOUBLE_EQ(local_delay(7.5e8, 7.5e8), 1.0);
  EXPECT_THROW(local_delay(0.0, 1e9), DomainError);
  EXPECT_THROW(local_delay(1e9, 0.0), DomainError);
  EXPECT_THROW(local_delay(1e9, 2e9, 1e9), DomainError);
}

TEST(LocalDelay, DecreasingInRateAndScaleCovariant) {
  Rng rng = named_stream(3, "test");
  for (int n = 0; n < 500; ++n) {
    const double c = uniform(rng, 1e8, 1e10), f = uniform(rng, 1e8, 1e9);
    EXPECT_GT(local_delay(c, f), local_delay(c, f * 1.01));
    const double a = uniform(rng, 0.5, 4.0);
    EXPECT_NEAR(local_delay(c * a, f * a), local_delay(c, f), 1e-15 * local_delay(c, f));
  }
}

TEST(LocalEnergy, ExamplesAndIdentity) {
  EXPECT_DOUBLE_EQ(local_energy(2.0, 3.0, 4.0), 72.0);
  EXPECT_THROW(local_energy(1e-27, 1e9, 0.0), DomainError);
  Rng rng = named_stream(4, "test");
  for (int n = 0; n < 500; ++n) {
    const double k = uniform(rng, 1e-28, 1e-26), f = uniform(rng, 1e8, 2e9),
                 c = uniform(rng, 1e8, 1e10);
    const double e = local_energy(k, f, local_delay(c, f));
    EXPECT_NEAR(e, k * f * c, 1e-14 * k * f * c);
  }
}

TEST(ShannonRate, Examples) {
  EXPECT_EQ(shannon_rate(1e6, 0.1, 1e-6, 1e-7), 1e6);
  EXPECT_DOUBLE_EQ(shannon_rate(5e6, 3.0, 1.0, 1.0), 1e7);
  EXPECT_EQ(shannon_rate(1e6, 0.0, 1e-6, 1e-7), 0.0);
  EXPECT_THROW(shannon_rate(1e6, 0.1, 1e-6, 0.0), DomainError);
  EXPECT_THROW(shannon_rate(0.0, 0.1, 1e-6, 1e-7), DomainError);
}

TEST(ShannonRate, Monotonicity) {
  Rng rng = named_stream(5, "test");
  for (int n = 0; n < 500; ++n) {
    const double w = uniform(rng, 1e5, 1e7), s = uniform(rng, 0.01, 1), p = uniform(rng, 1e-8, 1e-5),
                 sig = uniform(rng, 1e-10, 1e-7);
    const double r = shannon_rate(w, s, p, sig);
    EXPECT_GT(shannon_rate(w, s * 1.01, p, sig), r);
    EXPECT_GT(shannon_rate(w * 1.01, s, p, sig), r);
    EXPECT_LT(shannon_rate(w, s, p, sig * 1.01), r);
    EXPECT_TRUE(std::isfinite(r));
  }
}

TEST(EdgeDelay, Examples) {
  const CostBreakdown b = edge_delay(1e7, 1e7, 2e9, 4e9, 0.05);
  EXPECT_DOUBLE_EQ(b.transmit_delay, 1.0);
  EXPECT_DOUBLE_EQ(b.compute_delay, 0.5);
  EXPECT_DOUBLE_EQ(b.connect_delay, 0.05);
  EXPECT_NEAR(b.total_delay, 1.55, 1e-15);
  EXPECT_NEAR(edge_delay(1e-12, 1e7, 2e9, 4e9, 0.01).total_delay, 0.51, 1e-12);
  EXPECT_THROW(edge_delay(1e7, 0.0, 2e9, 4e9, 0.05), DomainError);
  EXPECT_THROW(edge_delay(1e7, 1e7, 2e9, 0.0, 0.05), DomainError);
}

TEST(EdgeEnergy, Examples) {
  EXPECT_NEAR(edge_energy(0.5, 1.55), 0.775, 1e-15);
  EXPECT_EQ(edge_energy(0.0, 3.0), 0.0);
  EXPECT_EQ(edge_energy(0.4, 0.0), 0.0);
}

TEST(SplitCost, PureLocalMatchesLocalFormulas) {
  const Task t{0, 0, 1e6, 2e9, 5.0};
  const CostBreakdown b = split_cost(t, SplitDecision::all_local(), device(), nullptr, 1e9, 0.0);
  EXPECT_DOUBLE_EQ(b.total_delay, local_delay(2e9, 1e9));
  EXPECT_DOUBLE_EQ(b.device_energy, local_energy(1e-27, 1e9, 2.0));
  EXPECT_FALSE(b.dropped);
}

TEST(SplitCost, PureEdgeMatchesEdgeFormulas) {
  const Task t{0, 0, 1e7, 2e9, 5.0};
  const ServerSpec s = server();
  const CostBreakdown b = split_cost(t, SplitDecision::all_edge(), device(), s, 1e9, 4e9);
  EXPECT_NEAR(b.total_delay, 1.55, 1e-15);
  EXPECT_NEAR(b.device_energy, 0.775, 1e-15);
}

TEST(SplitCost, ParallelTakesMaxSequentialSums) {
  // Local half: 1e9 cycles at 1e9 = 1 s. Edge half: 5e6 bits at 1e7 b/s
  // (0.5 s) + 1e9 cycles at 2e9 (0.5 s) + 0 connect = 1 s.
  const Task t{0, 0, 1e7, 2e9, 5.0};
  ServerSpec s = server();
  s.connection_time_s = 0.0;
  const SplitDecision half{0.5, 0.5, false};
  const auto par = split_cost(t, half, device(), s, 1e9, 2e9);
  EXPECT_DOUBLE_EQ(par.local_delay, 1.0);
  EXPECT_DOUBLE_EQ(par.edge_delay, 1.0);
  EXPECT_DOUBLE_EQ(par.total_delay, 1.0);
  EXPECT_DOUBLE_EQ(par.device_energy, par.local_energy_component + par.edge_energy_component);
  const auto seq = split_cost(t, half, device(), s, 1e9, 2e9, CombineRule::Sequential);
  EXPECT_DOUBLE_EQ(seq.total_delay, 2.0);
}

TEST(SplitCost, DroppedIsAllZero) {
  const Task t{0, 0, 1e7, 2e9, 5.0};
  const auto b = split_cost(t, SplitDecision::dropped(), device(), nullptr, 0.0, 0.0);
  EXPECT_TRUE(b.dropped);
  EXPECT_EQ(b.total_delay, 0.0);
  EXPECT_EQ(b.device_energy, 0.0);
}

TEST(SplitCost, LocalOnlyNeverReadsServer) {
  const Task t{0, 0, 1e7, 2e9, 5.0};
  ServerSpec broken;  // zero bandwidth and noise would throw if read
  const auto a = split_cost(t, SplitDecision::all_local(), device(), broken, 1e9, 0.0);
  const auto b = split_cost(t, SplitDecision::all_local(), device(), nullptr, 1e9, 0.0);
  EXPECT_EQ(a.total_delay, b.total_delay);
  EXPECT_EQ(a.device_energy, b.device_energy);
}

TEST(SplitCost, InvalidInputsRejected) {
  const Task t{0, 0, 1e7, 2e9, 5.0};
  EXPECT_ANY_THROW(split_cost(t, {0.5, 0.6, false}, device(), server(), 1e9, 1e9));
  EXPECT_THROW(split_cost(t, SplitDecision::all_edge(), device(), server(), 1e9, 0.0), DomainError);
  ServerSpec deaf = server();
  deaf.channel.gain = 0.0;
  EXPECT_THROW(split_cost(t, SplitDecision::all_edge(), device(), deaf, 1e9, 1e9), DomainError);
}

TEST(SplitCost, OutputsFiniteAndNonNegative) {
  Rng rng = named_stream(6, "test");
  for (int n = 0; n < 1000; ++n) {
    const Task t{0, 0, uniform(rng, 1e5, 1e8), uniform(rng, 1e7, 1e10), 5.0};
    const double x = uniform01(rng);
    const auto b = split_cost(t, {x, 1.0 - x, false}, device(), server(), uniform(rng, 1e8, 1e9),
                              uniform(rng, 1e8, 1e10));
    for (double v : {b.transmit_delay, b.compute_delay, b.connect_delay, b.total_delay,
                     b.device_energy, b.local_energy_component, b.edge_energy_component}) {
      EXPECT_TRUE(std::isfinite(v));
      EXPECT_GE(v, 0.0);
    }
  }
}
