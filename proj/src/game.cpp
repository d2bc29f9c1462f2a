#include "greenmec/game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace greenmec {

std::vector<double> geometric_grid(double lo, double hi, std::size_t points) {
  if (points == 0) throw std::invalid_argument("geometric_grid: needs at least one point");
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("geometric_grid: need 0 < lo <= hi");
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  const double ratio = hi / lo;
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = lo * std::pow(ratio, static_cast<double>(i) / static_cast<double>(points - 1));
  }
  grid.back() = hi;
  return grid;
}

std::vector<Task> SlotState::task_list() const {
  std::vector<Task> out;
  out.reserve(tasks.size());
  for (const auto& st : tasks) out.push_back(st.task);
  return out;
}

double offload_reward(double base_delay, double base_energy, double delay, double energy,
                      double price, double alloc_rate, const RewardWeights& w) {
  return w.lambda * (base_delay - delay) + w.epsilon * (base_energy - energy) -
         w.mu * price * alloc_rate;
}

double device_reward(const Task& task, const DeviceSpec& device,
                     std::span<const ServerSpec> servers,
                     std::span<const ServerStrategy> strategies, const TaskDecision& decision,
                     const RewardWeights& w, CombineRule rule) {
  if (!decision.server || decision.split.drop) return 0.0;
  const std::size_t k = *decision.server;
  const double base_delay = local_delay(task.cycles, device.f_max_local, device.f_max_local);
  const double base_energy = local_energy(device.kappa, device.f_max_local, base_delay);
  const CostBreakdown c = split_cost(task, decision.split, device, servers[k],
                                     device.f_max_local, decision.alloc_rate, rule);
  return offload_reward(base_delay, base_energy, c.total_delay, c.device_energy,
                        strategies[k].price, decision.alloc_rate, w);
}

double server_reward(const ServerSpec& server, double demand, const ServerStrategy& s) {
  return s.price * demand - server.green_rate_beta * std::min(demand, server.f_max) -
         server.backup_price * s.backup_draw;
}

double server_reward(const ServerSpec& server, std::span<const double> allocs,
                     const ServerStrategy& s) {
  double demand = 0.0;
  for (double f : allocs) demand += f;
  return server_reward(server, demand, s);
}

DeviceMenu build_menu(const SlotTask& st, std::span<const ServerSpec> servers,
                      const GameConfig& cfg) {
  const Task& task = st.task;
  const DeviceSpec& dev = st.device;
  DeviceMenu menu;
  menu.base_delay = local_delay(task.cycles, dev.f_max_local, dev.f_max_local);
  menu.base_energy = local_energy(dev.kappa, dev.f_max_local, menu.base_delay);

  auto within_budget = [&](double delay, double energy) {
    return delay <= task.deadline_s && energy <= st.energy_budget_j;
  };

  ActionOption local;
  local.decision.split = SplitDecision::all_local();
  local.delay = menu.base_delay;
  local.energy = menu.base_energy;
  local.standalone_feasible = within_budget(local.delay, local.energy);
  menu.options.push_back(local);

  std::vector<double> fractions{1.0};
  if (cfg.grids.fractional_splits) {
    fractions.clear();
    for (double e : cfg.grids.edge_fractions) {
      if (e > 0.0 && e <= 1.0) fractions.push_back(e);
    }
    std::sort(fractions.begin(), fractions.end());
    fractions.erase(std::unique(fractions.begin(), fractions.end()), fractions.end());
  }
  const std::size_t levels = cfg.grids.alloc_levels;

  for (std::size_t k = 0; k < servers.size(); ++k) {
    const ServerSpec& server = servers[k];
    if (uplink_rate(dev, server) <= 0.0) continue;  // unreachable this slot
    for (double edge : fractions) {
      const SplitDecision split{1.0 - edge, edge, false};
      for (std::size_t j = 1; j <= levels; ++j) {
        const double f = server.f_max * (static_cast<double>(j) / static_cast<double>(levels));
        const CostBreakdown c =
            split_cost(task, split, dev, server, dev.f_max_local, f, cfg.combine);
        ActionOption opt;
        opt.decision.split = split;
        opt.decision.server = k;
        opt.decision.alloc_rate = f;
        opt.delay = c.total_delay;
        opt.energy = c.device_energy;
        opt.standalone_feasible = within_budget(opt.delay, opt.energy);
        menu.options.push_back(opt);
      }
    }
  }

  if (cfg.allow_drop) {
    ActionOption drop;
    drop.decision.split = SplitDecision::dropped();
    drop.standalone_feasible = true;
    menu.options.push_back(drop);
  }
  return menu;
}

bool fits(const ServerSpec& server, const ServerStrategy& strategy, const ServerLoad& others,
          double alloc) {
  const double cap = server.f_max + strategy.backup_draw;
  if (others.alloc + alloc > cap * (1.0 + kCapacityRelTolerance)) return false;
  if (server.max_tasks && others.tasks + 1 > *server.max_tasks) return false;
  return true;
}

std::vector<double> backup_grid(const ServerSpec& server, const StrategyGrids& grids) {
  std::vector<double> out;
  for (double frac : grids.backup_fractions) {
    if (!(frac >= 0.0)) continue;
    out.push_back(std::min(server.f_max * frac, server.backup_capacity));
  }
  if (out.empty()) out.push_back(0.0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

double menu_option_reward(const DeviceMenu& menu, const ActionOption& opt,
                          std::span<const ServerStrategy> strategies, const RewardWeights& w) {
  if (!opt.decision.server) return 0.0;
  return offload_reward(menu.base_delay, menu.base_energy, opt.delay, opt.energy,
                        strategies[*opt.decision.server].price, opt.decision.alloc_rate, w);
}

bool option_fits(const ActionOption& opt, std::span<const ServerSpec> servers,
                 std::span<const ServerStrategy> strategies, std::span<const ServerLoad> others) {
  if (!opt.standalone_feasible) return false;
  if (!opt.decision.server) return true;
  const std::size_t k = *opt.decision.server;
  return fits(servers[k], strategies[k], others[k], opt.decision.alloc_rate);
}

}  // namespace

DeviceResponse device_best_response(const DeviceMenu& menu, std::span<const ServerSpec> servers,
                                    std::span<const ServerStrategy> strategies,
                                    std::span<const ServerLoad> others, const GameConfig& cfg) {
  DeviceResponse best;
  bool found = false;
  for (std::size_t o = 0; o < menu.options.size(); ++o) {
    const ActionOption& opt = menu.options[o];
    if (!option_fits(opt, servers, strategies, others)) continue;
    const double r = menu_option_reward(menu, opt, strategies, cfg.weights);
    if (!found || r > best.reward) {
      best.option = o;
      best.reward = r;
      found = true;
    }
  }
  if (!found) {
    best.option = DeviceMenu::kLocal;
    best.forced_local = true;
    best.reward = 0.0;
  }
  return best;
}

ServerResponse server_best_response(const ServerSpec& server, const DemandFn& demand_at,
                                    std::span<const double> prices,
                                    std::span<const double> backups) {
  if (prices.empty() || backups.empty()) {
    throw std::invalid_argument("server_best_response: empty price or backup grid");
  }
  ServerResponse best;
  bool found = false;
  for (double x : prices) {
    for (double b : backups) {
      const ServerStrategy s{x, b};
      const double r = server_reward(server, demand_at(s), s);
      if (!found || r > best.reward) {
        best = {s, r};
        found = true;
      }
    }
  }
  return best;
}

SlotGame::SlotGame(SlotState state, GameConfig cfg) : state_(std::move(state)), cfg_(std::move(cfg)) {
  if (cfg_.grids.prices.empty()) throw std::invalid_argument("price grid is empty");
  if (cfg_.grids.alloc_levels == 0) throw std::invalid_argument("alloc_levels must be >= 1");
  menus_.reserve(state_.tasks.size());
  for (const auto& st : state_.tasks) menus_.push_back(build_menu(st, state_.servers, cfg_));
  for (const auto& s : state_.servers) backups_.push_back(backup_grid(s, cfg_.grids));
}

FollowerProfile SlotGame::respond(std::span<const ServerStrategy> strategies) const {
  FollowerProfile f;
  f.choice.resize(menus_.size());
  f.forced.resize(menus_.size());
  f.loads.assign(state_.servers.size(), {});
  for (std::size_t i = 0; i < menus_.size(); ++i) {
    const DeviceResponse r =
        device_best_response(menus_[i], state_.servers, strategies, f.loads, cfg_);
    evaluations_ += menus_[i].options.size();
    f.choice[i] = r.option;
    f.forced[i] = r.forced_local;
    const TaskDecision& d = menus_[i].options[r.option].decision;
    if (d.server) {
      f.loads[*d.server].alloc += d.alloc_rate;
      ++f.loads[*d.server].tasks;
    }
  }
  return f;
}

double SlotGame::option_reward(std::size_t task, std::size_t option,
                               std::span<const ServerStrategy> strategies) const {
  return menu_option_reward(menus_[task], menus_[task].options[option], strategies, cfg_.weights);
}

std::vector<ServerLoad> SlotGame::loads_of(std::span<const std::size_t> choice) const {
  std::vector<ServerLoad> loads(state_.servers.size());
  for (std::size_t i = 0; i < choice.size(); ++i) {
    const TaskDecision& d = menus_[i].options[choice[i]].decision;
    if (d.server) {
      loads[*d.server].alloc += d.alloc_rate;
      ++loads[*d.server].tasks;
    }
  }
  return loads;
}

Assignment SlotGame::to_assignment(const FollowerProfile& f,
                                   std::span<const ServerStrategy> strategies) const {
  Assignment a;
  a.tasks.reserve(f.choice.size());
  for (std::size_t i = 0; i < f.choice.size(); ++i) {
    TaskDecision d = menus_[i].options[f.choice[i]].decision;
    d.forced_local = f.forced[i];
    a.tasks.push_back(d);
  }
  a.servers.assign(strategies.begin(), strategies.end());
  return a;
}

std::optional<FollowerProfile> SlotGame::to_follower(const Assignment& a) const {
  if (a.tasks.size() != menus_.size()) return std::nullopt;
  FollowerProfile f;
  for (std::size_t i = 0; i < menus_.size(); ++i) {
    TaskDecision wanted = a.tasks[i];
    wanted.forced_local = false;
    const auto& opts = menus_[i].options;
    const auto it = std::find_if(opts.begin(), opts.end(), [&](const ActionOption& o) {
      return o.decision == wanted;
    });
    if (it == opts.end()) return std::nullopt;
    f.choice.push_back(static_cast<std::size_t>(it - opts.begin()));
    f.forced.push_back(a.tasks[i].forced_local);
  }
  f.loads = loads_of(f.choice);
  return f;
}

std::vector<ServerStrategy> SlotGame::initial_strategies() const {
  return std::vector<ServerStrategy>(state_.servers.size(),
                                     ServerStrategy{cfg_.grids.prices.front(), 0.0});
}

PolicyOutcome score(const SlotGame& game, const Assignment& a) {
  const SlotState& st = game.state();
  PolicyOutcome out;
  out.assignment = a;
  out.device_rewards.reserve(a.tasks.size());
  std::vector<double> demand(st.servers.size(), 0.0);
  for (std::size_t i = 0; i < a.tasks.size(); ++i) {
    const TaskDecision& d = a.tasks[i];
    out.device_rewards.push_back(device_reward(st.tasks[i].task, st.tasks[i].device, st.servers,
                                               a.servers, d, game.config().weights,
                                               game.config().combine));
    if (d.server) demand[*d.server] += d.alloc_rate;
  }
  for (std::size_t k = 0; k < st.servers.size(); ++k) {
    out.server_rewards.push_back(server_reward(st.servers[k], demand[k], a.servers[k]));
  }
  return out;
}

namespace {

double max_change(const SlotGame& game, const Assignment& before, const Assignment& after) {
  double change = 0.0;
  for (std::size_t i = 0; i < before.tasks.size(); ++i) {
    const TaskDecision& a = before.tasks[i];
    const TaskDecision& b = after.tasks[i];
    if (a.server != b.server || a.forced_local != b.forced_local) return 1.0;
    change = std::max({change, std::abs(a.split.local - b.split.local),
                       std::abs(a.split.edge - b.split.edge),
                       a.split.drop != b.split.drop ? 1.0 : 0.0});
    if (a.server) {
      change = std::max(change, std::abs(a.alloc_rate - b.alloc_rate) /
                                    game.servers()[*a.server].f_max);
    }
  }
  const double price_scale = game.prices().back();
  for (std::size_t k = 0; k < before.servers.size(); ++k) {
    change = std::max({change,
                       std::abs(before.servers[k].price - after.servers[k].price) / price_scale,
                       std::abs(before.servers[k].backup_draw - after.servers[k].backup_draw) /
                           game.servers()[k].f_max});
  }
  return change;
}

}  // namespace

PolicyOutcome best_response_equilibrium(const SlotGame& game) {
  const GameConfig& cfg = game.config();
  if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("tol must be > 0");

  const std::uint64_t evals_before = game.evaluations();
  std::vector<ServerStrategy> strategies = game.initial_strategies();
  FollowerProfile all_local;
  all_local.choice.assign(game.num_tasks(), DeviceMenu::kLocal);
  all_local.forced.assign(game.num_tasks(), false);
  all_local.loads.assign(game.num_servers(), {});
  Assignment current = game.to_assignment(all_local, strategies);

  bool converged = false;
  std::size_t iterations = 0;
  while (iterations < cfg.max_iters) {
    ++iterations;
    const FollowerProfile followers = game.respond(strategies);
    std::vector<ServerStrategy> next = strategies;
    for (std::size_t k = 0; k < game.num_servers(); ++k) {
      const DemandFn demand_at = [&](const ServerStrategy& s) {
        std::vector<ServerStrategy> trial = next;
        trial[k] = s;
        return game.respond(trial).loads[k].alloc;
      };
      next[k] = server_best_response(game.servers()[k], demand_at, game.prices(),
                                     game.backups(k))
                    .strategy;
    }
    Assignment updated = game.to_assignment(followers, next);
    const double change = max_change(game, current, updated);
    current = std::move(updated);
    strategies = std::move(next);
    if (change < cfg.tol) {
      converged = true;
      break;
    }
  }
  // Followers always answer the final posted strategies, so the returned
  // profile respects every server's capacity.
  if (!converged) current = game.to_assignment(game.respond(strategies), strategies);

  PolicyOutcome out = score(game, current);
  out.iterations = iterations;
  out.converged = converged;
  out.evaluations = game.evaluations() - evals_before;
  return out;
}

PolicyOutcome best_response_equilibrium(const SlotState& state, const GameConfig& cfg) {
  const SlotGame game(state, cfg);
  return best_response_equilibrium(game);
}

NashCheck check_epsilon_nash(const SlotGame& game, const Assignment& profile, double epsilon) {
  const auto follower = game.to_follower(profile);
  if (!follower) throw std::invalid_argument("check_epsilon_nash: profile is not on the grid");
  const std::span<const ServerStrategy> strategies = profile.servers;

  NashCheck result;
  double best_gain = -std::numeric_limits<double>::infinity();
  auto consider = [&](NashWitness w) {
    if (w.gain > best_gain) {
      best_gain = w.gain;
      result.witness = w;
    }
  };

  for (std::size_t i = 0; i < game.num_tasks(); ++i) {
    std::vector<ServerLoad> others = follower->loads;
    const std::size_t cur = follower->choice[i];
    const TaskDecision& cur_d = game.menu(i).options[cur].decision;
    if (cur_d.server) {
      others[*cur_d.server].alloc -= cur_d.alloc_rate;
      --others[*cur_d.server].tasks;
    }
    const double cur_r = game.option_reward(i, cur, strategies);
    const auto& opts = game.menu(i).options;
    for (std::size_t o = 0; o < opts.size(); ++o) {
      if (o == cur || !option_fits(opts[o], game.servers(), strategies, others)) continue;
      NashWitness w;
      w.player = NashWitness::Player::Device;
      w.index = i;
      w.device_deviation = opts[o].decision;
      w.gain = game.option_reward(i, o, strategies) - cur_r;
      consider(w);
    }
  }

  for (std::size_t k = 0; k < game.num_servers(); ++k) {
    const ServerSpec& server = game.servers()[k];
    const double cur_r = server_reward(server, follower->loads[k].alloc, strategies[k]);
    std::vector<ServerStrategy> trial(strategies.begin(), strategies.end());
    for (double x : game.prices()) {
      for (double b : game.backups(k)) {
        trial[k] = {x, b};
        const double r = server_reward(server, game.respond(trial).loads[k].alloc, trial[k]);
        NashWitness w;
        w.player = NashWitness::Player::Server;
        w.index = k;
        w.server_deviation = trial[k];
        w.gain = r - cur_r;
        consider(w);
      }
    }
  }

  result.holds = !(best_gain > epsilon);
  if (result.holds) result.witness.reset();
  return result;
}

double reward_scale(const PolicyOutcome& outcome) {
  double scale = 1.0;
  for (double r : outcome.device_rewards) scale = std::max(scale, std::abs(r));
  for (double r : outcome.server_rewards) scale = std::max(scale, std::abs(r));
  return scale;
}

}  // namespace greenmec
