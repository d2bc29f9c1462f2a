#include "greenmec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace greenmec {

bool OracleResult::in_nash_set(std::uint64_t index) const {
  return std::binary_search(nash_indices.begin(), nash_indices.end(), index);
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

// Flattened view of the slot game used by the enumeration. Feasibility and
// rewards are recomputed here from the cached per-option delay and energy
// rather than through the best-response helpers.
struct Flat {
  std::size_t n = 0;  // tasks
  std::size_t m = 0;  // servers
  std::vector<std::size_t> menu_size;
  std::vector<std::vector<int>> server_of;  // -1 for local/drop
  std::vector<std::vector<double>> alloc;
  std::vector<std::vector<bool>> standalone;
  std::vector<std::vector<std::vector<double>>> reward;  // [task][option][price idx]
  std::vector<double> prices;
  std::vector<std::vector<double>> backups;
  std::vector<std::size_t> strat_count;  // per server: |prices|·|backups|
  std::vector<double> f_max, beta, y;
  std::vector<std::optional<std::size_t>> max_tasks;
  std::uint64_t device_profiles = 1;
  std::uint64_t server_profiles = 1;
};

Flat flatten(const SlotGame& game) {
  Flat f;
  f.n = game.num_tasks();
  f.m = game.num_servers();
  const RewardWeights& w = game.config().weights;
  f.prices.assign(game.prices().begin(), game.prices().end());
  for (std::size_t i = 0; i < f.n; ++i) {
    const DeviceMenu& menu = game.menu(i);
    const std::size_t size = menu.options.size();
    f.menu_size.push_back(size);
    f.device_profiles = sat_mul(f.device_profiles, size);
    std::vector<int> srv(size, -1);
    std::vector<double> al(size, 0.0);
    std::vector<bool> sa(size, false);
    std::vector<std::vector<double>> rw(size, std::vector<double>(f.prices.size(), 0.0));
    for (std::size_t o = 0; o < size; ++o) {
      const ActionOption& opt = menu.options[o];
      sa[o] = opt.standalone_feasible;
      if (opt.decision.server && !opt.decision.split.drop) {
        srv[o] = static_cast<int>(*opt.decision.server);
        al[o] = opt.decision.alloc_rate;
        for (std::size_t p = 0; p < f.prices.size(); ++p) {
          rw[o][p] = w.lambda * (menu.base_delay - opt.delay) +
                     w.epsilon * (menu.base_energy - opt.energy) - w.mu * f.prices[p] * al[o];
        }
      }
    }
    f.server_of.push_back(std::move(srv));
    f.alloc.push_back(std::move(al));
    f.standalone.push_back(std::move(sa));
    f.reward.push_back(std::move(rw));
  }
  for (std::size_t k = 0; k < f.m; ++k) {
    const ServerSpec& s = game.servers()[k];
    const auto b = game.backups(k);
    f.backups.emplace_back(b.begin(), b.end());
    f.strat_count.push_back(f.prices.size() * b.size());
    f.server_profiles = sat_mul(f.server_profiles, f.strat_count.back());
    f.f_max.push_back(s.f_max);
    f.beta.push_back(s.green_rate_beta);
    f.y.push_back(s.backup_price);
    f.max_tasks.push_back(s.max_tasks);
  }
  return f;
}

struct ServerPoint {
  std::size_t price_idx;
  double price;
  double backup;
  double cap;
};

std::vector<ServerPoint> decode_servers(const Flat& f, std::uint64_t s) {
  std::vector<ServerPoint> out(f.m);
  for (std::size_t k = 0; k < f.m; ++k) {
    const std::size_t local = s % f.strat_count[k];
    s /= f.strat_count[k];
    const std::size_t nb = f.backups[k].size();
    out[k].price_idx = local / nb;
    out[k].price = f.prices[out[k].price_idx];
    out[k].backup = f.backups[k][local % nb];
    out[k].cap = (f.f_max[k] + out[k].backup) * (1.0 + kCapacityRelTolerance);
  }
  return out;
}

double server_value(const Flat& f, std::size_t k, const ServerPoint& sp, double demand) {
  return sp.price * demand - f.beta[k] * std::min(demand, f.f_max[k]) - f.y[k] * sp.backup;
}

bool admits(const Flat& f, std::size_t k, const ServerPoint& sp, double others_alloc,
            std::size_t others_tasks, double alloc) {
  if (others_alloc + alloc > sp.cap) return false;
  if (f.max_tasks[k] && others_tasks + 1 > *f.max_tasks[k]) return false;
  return true;
}

// Index-order follower response for the server point `sp`; returns each
// server's demand.
std::vector<double> follower_demand(const Flat& f, const std::vector<ServerPoint>& sp) {
  std::vector<double> alloc(f.m, 0.0);
  std::vector<std::size_t> count(f.m, 0);
  for (std::size_t i = 0; i < f.n; ++i) {
    bool found = false;
    double best = 0.0;
    std::size_t pick = 0;
    for (std::size_t o = 0; o < f.menu_size[i]; ++o) {
      if (!f.standalone[i][o]) continue;
      const int k = f.server_of[i][o];
      double r = 0.0;
      if (k >= 0) {
        if (!admits(f, k, sp[k], alloc[k], count[k], f.alloc[i][o])) continue;
        r = f.reward[i][o][sp[k].price_idx];
      }
      if (!found || r > best) {
        best = r;
        pick = o;
        found = true;
      }
    }
    if (found && f.server_of[i][pick] >= 0) {
      const int k = f.server_of[i][pick];
      alloc[k] += f.alloc[i][pick];
      ++count[k];
    }
  }
  return alloc;
}

struct ChunkResult {
  std::uint64_t feasible = 0;
  bool has_best = false;
  double best_social = 0.0;
  std::uint64_t best_index = 0;
  std::vector<std::uint64_t> nash;
  std::vector<OracleRow> table;
};

void enumerate_chunk(const Flat& f, const std::vector<std::vector<double>>& server_best,
                     std::uint64_t s_begin, std::uint64_t s_end, double eps, bool record,
                     ChunkResult& out) {
  std::vector<std::size_t> digit(f.n);
  std::vector<double> alloc(f.m);
  std::vector<std::size_t> count(f.m);
  std::vector<double> dev_r(f.n), srv_r(f.m);

  for (std::uint64_t s = s_begin; s < s_end; ++s) {
    const std::vector<ServerPoint> sp = decode_servers(f, s);
    std::fill(digit.begin(), digit.end(), 0);
    for (std::uint64_t d = 0; d < f.device_profiles; ++d) {
      if (d > 0) {
        for (std::size_t i = 0; i < f.n; ++i) {
          if (++digit[i] < f.menu_size[i]) break;
          digit[i] = 0;
        }
      }
      const std::uint64_t index = d + f.device_profiles * s;

      std::fill(alloc.begin(), alloc.end(), 0.0);
      std::fill(count.begin(), count.end(), 0);
      for (std::size_t i = 0; i < f.n; ++i) {
        const int k = f.server_of[i][digit[i]];
        if (k >= 0) {
          alloc[k] += f.alloc[i][digit[i]];
          ++count[k];
        }
      }

      bool feasible = true;
      for (std::size_t k = 0; k < f.m && feasible; ++k) {
        if (alloc[k] > sp[k].cap) feasible = false;
        if (f.max_tasks[k] && count[k] > *f.max_tasks[k]) feasible = false;
      }
      // Device legality; option fit is judged against everybody else's load.
      auto fits_next_to_others = [&](std::size_t i, std::size_t o) {
        if (!f.standalone[i][o]) return false;
        const int k = f.server_of[i][o];
        if (k < 0) return true;
        double others = alloc[k];
        std::size_t others_n = count[k];
        const int own = f.server_of[i][digit[i]];
        if (own == k) {
          others -= f.alloc[i][digit[i]];
          --others_n;
        }
        return admits(f, k, sp[k], others, others_n, f.alloc[i][o]);
      };
      for (std::size_t i = 0; i < f.n && feasible; ++i) {
        if (f.standalone[i][digit[i]]) continue;
        // Only a forced local fallback may be standalone-infeasible.
        if (digit[i] != DeviceMenu::kLocal) {
          feasible = false;
          break;
        }
        for (std::size_t o = 0; o < f.menu_size[i]; ++o) {
          if (fits_next_to_others(i, o)) {
            feasible = false;
            break;
          }
        }
      }

      if (!feasible) {
        if (record) out.table.push_back({index, false, {}, {}, 0.0});
        continue;
      }
      ++out.feasible;

      double social = 0.0;
      for (std::size_t i = 0; i < f.n; ++i) {
        const int k = f.server_of[i][digit[i]];
        dev_r[i] = k >= 0 ? f.reward[i][digit[i]][sp[k].price_idx] : 0.0;
        social += dev_r[i];
      }
      for (std::size_t k = 0; k < f.m; ++k) {
        srv_r[k] = server_value(f, k, sp[k], alloc[k]);
        social += srv_r[k];
      }
      if (!out.has_best || social > out.best_social) {
        out.has_best = true;
        out.best_social = social;
        out.best_index = index;
      }
      if (record) out.table.push_back({index, true, dev_r, srv_r, social});

      bool nash = true;
      for (std::size_t k = 0; k < f.m && nash; ++k) {
        if (server_best[s][k] - srv_r[k] > eps) nash = false;
      }
      for (std::size_t i = 0; i < f.n && nash; ++i) {
        for (std::size_t o = 0; o < f.menu_size[i]; ++o) {
          if (o == digit[i] || !fits_next_to_others(i, o)) continue;
          const int k = f.server_of[i][o];
          const double r = k >= 0 ? f.reward[i][o][sp[k].price_idx] : 0.0;
          if (r - dev_r[i] > eps) {
            nash = false;
            break;
          }
        }
      }
      if (nash) out.nash.push_back(index);
    }
  }
}

}  // namespace

std::uint64_t oracle_cardinality(const SlotGame& game) {
  const Flat f = flatten(game);
  return sat_mul(f.device_profiles, f.server_profiles);
}

std::optional<std::uint64_t> oracle_index(const SlotGame& game, const Assignment& profile) {
  const auto follower = game.to_follower(profile);
  if (!follower || profile.servers.size() != game.num_servers()) return std::nullopt;
  std::uint64_t index = 0;
  std::uint64_t stride = 1;
  for (std::size_t i = 0; i < game.num_tasks(); ++i) {
    index += follower->choice[i] * stride;
    stride *= game.menu(i).options.size();
  }
  const auto prices = game.prices();
  for (std::size_t k = 0; k < game.num_servers(); ++k) {
    const auto backups = game.backups(k);
    const auto p = std::find(prices.begin(), prices.end(), profile.servers[k].price);
    const auto b = std::find(backups.begin(), backups.end(), profile.servers[k].backup_draw);
    if (p == prices.end() || b == backups.end()) return std::nullopt;
    const std::uint64_t local = static_cast<std::uint64_t>(p - prices.begin()) * backups.size() +
                                static_cast<std::uint64_t>(b - backups.begin());
    index += local * stride;
    stride *= prices.size() * backups.size();
  }
  return index;
}

Assignment oracle_decode(const SlotGame& game, std::uint64_t index) {
  FollowerProfile f;
  for (std::size_t i = 0; i < game.num_tasks(); ++i) {
    const std::size_t size = game.menu(i).options.size();
    f.choice.push_back(index % size);
    index /= size;
  }
  std::vector<ServerStrategy> strategies;
  const auto prices = game.prices();
  for (std::size_t k = 0; k < game.num_servers(); ++k) {
    const auto backups = game.backups(k);
    const std::uint64_t count = prices.size() * backups.size();
    const std::uint64_t local = index % count;
    index /= count;
    strategies.push_back({prices[local / backups.size()], backups[local % backups.size()]});
  }
  // A standalone-infeasible local choice can only be a forced fallback.
  for (std::size_t i = 0; i < f.choice.size(); ++i) {
    f.forced.push_back(f.choice[i] == DeviceMenu::kLocal &&
                       !game.menu(i).options[DeviceMenu::kLocal].standalone_feasible);
  }
  f.loads = game.loads_of(f.choice);
  return game.to_assignment(f, strategies);
}

OracleResult brute_force_oracle(const SlotGame& game, const OracleOptions& opts) {
  const Flat f = flatten(game);
  const std::uint64_t cardinality = sat_mul(f.device_profiles, f.server_profiles);
  if (f.n > opts.max_tasks || f.m > opts.max_servers) {
    throw OracleTooLarge(cardinality, "oracle refuses " + std::to_string(f.n) + " tasks x " +
                                          std::to_string(f.m) + " servers (cap " +
                                          std::to_string(opts.max_tasks) + " x " +
                                          std::to_string(opts.max_servers) +
                                          "), joint grid cardinality " +
                                          std::to_string(cardinality));
  }
  if (cardinality > opts.max_profiles) {
    throw OracleTooLarge(cardinality, "oracle refuses joint grid cardinality " +
                                          std::to_string(cardinality) + " above cap " +
                                          std::to_string(opts.max_profiles));
  }

  // Anticipated value of every server point, then each server's best value
  // against the other servers' current points.
  std::vector<std::vector<double>> anticipated(f.server_profiles, std::vector<double>(f.m));
  for (std::uint64_t s = 0; s < f.server_profiles; ++s) {
    const auto sp = decode_servers(f, s);
    const auto demand = follower_demand(f, sp);
    for (std::size_t k = 0; k < f.m; ++k) anticipated[s][k] = server_value(f, k, sp[k], demand[k]);
  }
  std::vector<std::vector<double>> server_best(f.server_profiles, std::vector<double>(f.m));
  for (std::uint64_t s = 0; s < f.server_profiles; ++s) {
    std::uint64_t stride = 1;
    for (std::size_t k = 0; k < f.m; ++k) {
      const std::uint64_t own = (s / stride) % f.strat_count[k];
      const std::uint64_t base = s - own * stride;
      double best = -std::numeric_limits<double>::infinity();
      for (std::uint64_t alt = 0; alt < f.strat_count[k]; ++alt) {
        best = std::max(best, anticipated[base + alt * stride][k]);
      }
      server_best[s][k] = best;
      stride *= f.strat_count[k];
    }
  }

  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, f.server_profiles));
  std::vector<ChunkResult> chunks(threads);
  std::vector<std::thread> pool;
  const std::uint64_t per = (f.server_profiles + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t b = std::min<std::uint64_t>(f.server_profiles, per * t);
    const std::uint64_t e = std::min<std::uint64_t>(f.server_profiles, per * (t + 1));
    if (threads == 1) {
      enumerate_chunk(f, server_best, b, e, opts.epsilon, opts.record_table, chunks[t]);
    } else {
      pool.emplace_back(enumerate_chunk, std::cref(f), std::cref(server_best), b, e,
                        opts.epsilon, opts.record_table, std::ref(chunks[t]));
    }
  }
  for (auto& th : pool) th.join();

  OracleResult result;
  result.cardinality = cardinality;
  bool has_best = false;
  for (auto& c : chunks) {  // chunk order = index order
    result.feasible_profiles += c.feasible;
    if (c.has_best && (!has_best || c.best_social > result.social_optimum)) {
      has_best = true;
      result.social_optimum = c.best_social;
      result.social_optimum_index = c.best_index;
    }
    result.nash_indices.insert(result.nash_indices.end(), c.nash.begin(), c.nash.end());
    if (opts.record_table) {
      for (auto& row : c.table) result.table.push_back(std::move(row));
    }
  }
  // Device digits vary fastest inside a chunk, chunks ascend by server point.
  std::sort(result.nash_indices.begin(), result.nash_indices.end());
  std::sort(result.table.begin(), result.table.end(),
            [](const OracleRow& a, const OracleRow& b) { return a.index < b.index; });
  if (has_best) result.social_optimum_profile = oracle_decode(game, result.social_optimum_index);
  return result;
}

}  // namespace greenmec
