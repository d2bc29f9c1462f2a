#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "greenmec/oracle.hpp"
#include "support.hpp"

using namespace greenmec;

namespace {

SlotState one_device_one_server() {
  SlotState s;
  SlotTask st;
  st.task = {0, 0, 1e6, 2e9, 5.0};
  st.device.f_max_local = 5e8;
  st.device.tx_power_w = st.device.p_sched_w = 0.2;
  s.tasks.push_back(st);
  ServerSpec srv;
  srv.f_max = 1e10;
  srv.connection_time_s = 0.01;
  srv.channel = {1e7, 1e-9, 1e-6};
  s.servers.push_back(srv);
  return s;
}

double social(const PolicyOutcome& o) {
  return std::accumulate(o.device_rewards.begin(), o.device_rewards.end(), 0.0) +
         std::accumulate(o.server_rewards.begin(), o.server_rewards.end(), 0.0);
}

}  // namespace

TEST(Oracle, TrivialTwoEntryTable) {
  GameConfig cfg;
  cfg.allow_drop = false;
  cfg.grids.alloc_levels = 1;
  cfg.grids.prices = {1e-10};
  cfg.grids.backup_fractions = {0.0};
  const SlotGame game(one_device_one_server(), cfg);
  OracleOptions opts;
  opts.record_table = true;
  const OracleResult r = brute_force_oracle(game, opts);
  ASSERT_EQ(r.cardinality, 2u);
  ASSERT_EQ(r.table.size(), 2u);
  const double best = std::max(r.table[0].social, r.table[1].social);
  EXPECT_EQ(r.social_optimum, best);
}

TEST(Oracle, IndexRoundTrip) {
  fixture::SlotShape shape;
  shape.tasks = 2;
  shape.servers = 2;
  const SlotGame game(fixture::random_slot(5, shape), fixture::config_with_mu(1.0));
  const std::uint64_t n = oracle_cardinality(game);
  for (std::uint64_t idx = 0; idx < n; idx += 997) {
    const Assignment a = oracle_decode(game, idx);
    const auto back = oracle_index(game, a);
    ASSERT_TRUE(back);
    EXPECT_EQ(*back, idx);
  }
}

TEST(Oracle, SymmetricDevicesGiveSymmetricOptimum) {
  SlotState s = one_device_one_server();
  s.tasks.push_back(s.tasks[0]);
  s.tasks[1].task.id = 1;
  s.tasks[1].device.id = 1;
  const SlotGame game(s, fixture::config_with_mu(1.0));
  OracleOptions opts;
  opts.record_table = true;
  const OracleResult r = brute_force_oracle(game, opts);
  const Assignment best = oracle_decode(game, r.social_optimum_index);
  Assignment swapped = best;
  std::swap(swapped.tasks[0], swapped.tasks[1]);
  const auto idx = oracle_index(game, swapped);
  ASSERT_TRUE(idx);
  const auto row = std::find_if(r.table.begin(), r.table.end(),
                                [&](const OracleRow& x) { return x.index == *idx; });
  ASSERT_NE(row, r.table.end());
  EXPECT_DOUBLE_EQ(row->social, r.social_optimum);
}

TEST(Oracle, DeclaredNashProfilesPassTheCheck) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    fixture::SlotShape shape;
    shape.tasks = 2;
    shape.servers = 1 + seed % 2;
    const SlotGame game(fixture::random_slot(seed, shape), fixture::config_with_mu(1.0));
    const OracleResult r = brute_force_oracle(game);
    for (std::uint64_t idx : r.nash_indices) {
      EXPECT_TRUE(check_epsilon_nash(game, oracle_decode(game, idx), 1e-6).holds) << idx;
    }
  }
}

TEST(Oracle, EquilibriumInSetAndBelowOptimum) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    fixture::SlotShape shape;
    shape.tasks = 1 + seed % 3;
    shape.servers = 1 + seed % 2;
    if (shape.tasks * shape.servers == 6) shape.backup_fraction_cap = 0.25;
    const SlotGame game(fixture::random_slot(seed, shape), fixture::config_with_mu(1.0));
    const PolicyOutcome eq = best_response_equilibrium(game);
    const OracleResult r = brute_force_oracle(game);
    ASSERT_TRUE(eq.converged);
    const auto idx = oracle_index(game, eq.assignment);
    ASSERT_TRUE(idx);
    EXPECT_TRUE(r.in_nash_set(*idx));
    EXPECT_LE(social(eq), r.social_optimum + 1e-9);
  }
}

TEST(Oracle, ThreadCountDoesNotChangeResult) {
  fixture::SlotShape shape;
  shape.tasks = 3;
  shape.servers = 1;
  const SlotGame game(fixture::random_slot(9, shape), fixture::config_with_mu(1.0));
  OracleOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const OracleResult a = brute_force_oracle(game, one);
  const OracleResult b = brute_force_oracle(game, four);
  EXPECT_EQ(a.social_optimum_index, b.social_optimum_index);
  EXPECT_EQ(a.social_optimum, b.social_optimum);
  EXPECT_EQ(a.nash_indices, b.nash_indices);
  EXPECT_EQ(a.feasible_profiles, b.feasible_profiles);
}

TEST(Oracle, RefusesOversizeWithCardinality) {
  fixture::SlotShape shape;
  shape.tasks = 5;
  shape.servers = 1;
  const SlotGame big(fixture::random_slot(1, shape), fixture::config_with_mu(1.0));
  try {
    brute_force_oracle(big);
    FAIL() << "expected refusal";
  } catch (const OracleTooLarge& e) {
    EXPECT_EQ(e.cardinality(), oracle_cardinality(big));
  }
  shape.tasks = 3;
  shape.servers = 2;
  shape.backup_fraction_cap = 0.5;
  const SlotGame wide(fixture::random_slot(1, shape), fixture::config_with_mu(1.0));
  EXPECT_GT(oracle_cardinality(wide), 10'000'000u);
  EXPECT_THROW(brute_force_oracle(wide), OracleTooLarge);
}
