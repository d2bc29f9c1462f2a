#include "greenmec/baselines.hpp"

#include <algorithm>

namespace greenmec {

PolicyOutcome all_local(const SlotGame& game) {
  Assignment a;
  a.tasks.assign(game.num_tasks(), TaskDecision{});
  a.servers = game.initial_strategies();
  return score(game, a);
}

PolicyOutcome all_edge_greedy(const SlotGame& game, GreedySelector selector) {
  const SlotState& st = game.state();
  const GameConfig& cfg = game.config();
  const std::size_t n = game.num_tasks();
  const std::size_t m = game.num_servers();

  std::vector<std::optional<std::size_t>> target(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double rate = uplink_rate(st.tasks[i].device, st.servers[k]);
      if (rate <= 0.0) continue;
      const double key = selector == GreedySelector::BestLink ? rate : st.servers[k].f_max;
      if (!target[i] || key > best) {
        target[i] = k;
        best = key;
      }
    }
  }

  // Admission cap: first tasks by index win.
  std::vector<bool> rejected(n, false);
  std::vector<std::size_t> admitted(m, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!target[i]) continue;
    const auto& cap = st.servers[*target[i]].max_tasks;
    if (cap && admitted[*target[i]] >= *cap) {
      rejected[i] = true;
      continue;
    }
    ++admitted[*target[i]];
  }

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::size_t> count(m, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (target[i] && !rejected[i]) ++count[*target[i]];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!target[i] || rejected[i]) continue;
      const std::size_t k = *target[i];
      const double share = st.servers[k].f_max / static_cast<double>(count[k]);
      const CostBreakdown c =
          split_cost(st.tasks[i].task, SplitDecision::all_edge(), st.tasks[i].device,
                     st.servers[k], st.tasks[i].device.f_max_local, share, cfg.combine);
      if (c.total_delay > st.tasks[i].task.deadline_s ||
          c.device_energy > st.tasks[i].energy_budget_j) {
        rejected[i] = true;
        changed = true;
      }
    }
  }

  std::vector<std::size_t> count(m, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (target[i] && !rejected[i]) ++count[*target[i]];
  }
  Assignment a;
  a.servers = game.initial_strategies();
  for (std::size_t i = 0; i < n; ++i) {
    TaskDecision d;
    if (target[i] && !rejected[i]) {
      d.split = SplitDecision::all_edge();
      d.server = target[i];
      d.alloc_rate = st.servers[*target[i]].f_max / static_cast<double>(count[*target[i]]);
    } else if (target[i] && cfg.allow_drop) {
      d.split = SplitDecision::dropped();
    } else if (target[i]) {
      d.forced_local = true;
    }
    a.tasks.push_back(d);
  }
  return score(game, a);
}

PolicyOutcome random_feasible(const SlotGame& game, Rng& rng) {
  const auto strategies = game.initial_strategies();
  FollowerProfile f;
  f.loads.assign(game.num_servers(), {});
  for (std::size_t i = 0; i < game.num_tasks(); ++i) {
    const auto& opts = game.menu(i).options;
    std::vector<std::size_t> candidates;
    for (std::size_t o = 0; o < opts.size(); ++o) {
      if (!opts[o].standalone_feasible) continue;
      const auto& d = opts[o].decision;
      if (d.server &&
          !fits(game.servers()[*d.server], strategies[*d.server], f.loads[*d.server],
                d.alloc_rate)) {
        continue;
      }
      candidates.push_back(o);
    }
    const bool forced = candidates.empty();
    const std::size_t pick =
        forced ? DeviceMenu::kLocal : candidates[uniform_index(rng, candidates.size())];
    f.choice.push_back(pick);
    f.forced.push_back(forced);
    const auto& d = opts[pick].decision;
    if (d.server) {
      f.loads[*d.server].alloc += d.alloc_rate;
      ++f.loads[*d.server].tasks;
    }
  }
  return score(game, game.to_assignment(f, strategies));
}

}  // namespace greenmec
