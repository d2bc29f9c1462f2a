#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "greenmec/costs.hpp"
#include "greenmec/model.hpp"

namespace greenmec {

struct RewardWeights {
  double lambda = 1.0;   // delay weight
  double epsilon = 1.0;  // energy weight
  double mu = 0.0;       // payment weight; 0 gives the unpriced device reward
};

/// `points` values spaced geometrically over [lo, hi], ascending.
std::vector<double> geometric_grid(double lo, double hi, std::size_t points);

/// Discretised strategy spaces of devices and servers.
struct StrategyGrids {
  std::size_t alloc_levels = 8;  // f_{i,k} ∈ {f_max/L · j : j = 1..L}
  bool fractional_splits = false;
  std::vector<double> edge_fractions{0.25, 0.5, 0.75, 1.0};  // used when fractional_splits
  std::vector<double> prices = geometric_grid(1e-10, 1e-8, 16);  // ascending, per cycle/s
  std::vector<double> backup_fractions{0.0, 0.25, 0.5};  // × f_max, capped by capacity
};

struct GameConfig {
  RewardWeights weights;
  StrategyGrids grids;
  bool allow_drop = true;
  CombineRule combine = CombineRule::Parallel;
  std::size_t max_iters = 1000;
  double tol = 1e-6;
};

/// One active task together with its owner and the energy it may spend.
struct SlotTask {
  Task task;
  DeviceSpec device;
  double energy_budget_j = std::numeric_limits<double>::infinity();
};

/// Everything a policy sees in one slot.
struct SlotState {
  std::vector<SlotTask> tasks;
  std::vector<ServerSpec> servers;

  std::vector<Task> task_list() const;
};

// ---------------------------------------------------------------------------
// Rewards

/// λ·(D0 − D) + ε·(P0 − P) − μ·x·f for an offloaded task.
double offload_reward(double base_delay, double base_energy, double delay, double energy,
                      double price, double alloc_rate, const RewardWeights& w);

/// Device reward of `decision`; zero unless a server is chosen and the task is
/// not dropped. The local baseline runs the whole task at f_max_local.
double device_reward(const Task& task, const DeviceSpec& device,
                     std::span<const ServerSpec> servers,
                     std::span<const ServerStrategy> strategies, const TaskDecision& decision,
                     const RewardWeights& w, CombineRule rule = CombineRule::Parallel);

/// x_k·Σf − β_k·min(Σf, f_max) − y·f_b.
double server_reward(const ServerSpec& server, double demand, const ServerStrategy& s);
double server_reward(const ServerSpec& server, std::span<const double> allocs,
                     const ServerStrategy& s);

// ---------------------------------------------------------------------------
// Strategy menus and loads

struct ActionOption {
  TaskDecision decision;
  double delay = 0.0;
  double energy = 0.0;
  bool standalone_feasible = false;  // deadline, energy budget, drop permission
};

/// Every grid action of one device, in tie-break order: local first, then
/// servers by index with larger local share and smaller rate first, drop last.
struct DeviceMenu {
  double base_delay = 0.0;
  double base_energy = 0.0;
  std::vector<ActionOption> options;

  static constexpr std::size_t kLocal = 0;
};

DeviceMenu build_menu(const SlotTask& st, std::span<const ServerSpec> servers,
                      const GameConfig& cfg);

struct ServerLoad {
  double alloc = 0.0;
  std::size_t tasks = 0;

  friend bool operator==(const ServerLoad&, const ServerLoad&) = default;
};

/// True when a task asking for `alloc` still fits next to `others` at `server`.
bool fits(const ServerSpec& server, const ServerStrategy& strategy, const ServerLoad& others,
          double alloc);

/// Backup draws considered by a server: fractions of f_max capped at the
/// backup capacity, deduplicated, ascending.
std::vector<double> backup_grid(const ServerSpec& server, const StrategyGrids& grids);

// ---------------------------------------------------------------------------
// Best responses

struct DeviceResponse {
  std::size_t option = DeviceMenu::kLocal;
  bool forced_local = false;
  double reward = 0.0;
};

/// Reward-maximising feasible option given posted strategies and the load the
/// other devices already place on each server.
DeviceResponse device_best_response(const DeviceMenu& menu, std::span<const ServerSpec> servers,
                                    std::span<const ServerStrategy> strategies,
                                    std::span<const ServerLoad> others, const GameConfig& cfg);

struct ServerResponse {
  ServerStrategy strategy;
  double reward = 0.0;
};

using DemandFn = std::function<double(const ServerStrategy&)>;

/// Grid argmax of the server reward with demand re-evaluated at each grid
/// point. Ties go to the lower price, then the lower backup draw. Throws
/// std::invalid_argument on an empty grid.
ServerResponse server_best_response(const ServerSpec& server, const DemandFn& demand_at,
                                    std::span<const double> prices,
                                    std::span<const double> backups);

// ---------------------------------------------------------------------------
// The slot game

/// Device choices (menu indices) together with the loads they induce.
struct FollowerProfile {
  std::vector<std::size_t> choice;
  std::vector<bool> forced;
  std::vector<ServerLoad> loads;

  friend bool operator==(const FollowerProfile&, const FollowerProfile&) = default;
};

/// Precomputed menus and grids of one slot. Not thread-safe: the evaluation
/// counter is mutable.
class SlotGame {
 public:
  SlotGame(SlotState state, GameConfig cfg);

  const SlotState& state() const { return state_; }
  const GameConfig& config() const { return cfg_; }
  std::span<const ServerSpec> servers() const { return state_.servers; }
  std::size_t num_tasks() const { return menus_.size(); }
  std::size_t num_servers() const { return state_.servers.size(); }
  const DeviceMenu& menu(std::size_t task) const { return menus_[task]; }
  std::span<const double> prices() const { return cfg_.grids.prices; }
  std::span<const double> backups(std::size_t server) const { return backups_[server]; }

  /// Devices best-respond one after another in index order, each seeing the
  /// load placed by the devices before it. The result is a pure equilibrium
  /// among devices for the posted strategies.
  FollowerProfile respond(std::span<const ServerStrategy> strategies) const;

  double option_reward(std::size_t task, std::size_t option,
                       std::span<const ServerStrategy> strategies) const;

  std::vector<ServerLoad> loads_of(std::span<const std::size_t> choice) const;

  Assignment to_assignment(const FollowerProfile& f,
                           std::span<const ServerStrategy> strategies) const;

  /// Maps an assignment back onto menu indices; empty if a decision is off-grid.
  std::optional<FollowerProfile> to_follower(const Assignment& a) const;

  std::vector<ServerStrategy> initial_strategies() const;

  std::uint64_t evaluations() const { return evaluations_; }

 private:
  SlotState state_;
  GameConfig cfg_;
  std::vector<DeviceMenu> menus_;
  std::vector<std::vector<double>> backups_;
  mutable std::uint64_t evaluations_ = 0;
};

struct PolicyOutcome {
  Assignment assignment;
  std::vector<double> device_rewards;
  std::vector<double> server_rewards;
  std::size_t iterations = 0;
  bool converged = true;
  std::uint64_t evaluations = 0;  // device-option evaluations spent
};

/// Fills rewards for an assignment on the game's grid.
PolicyOutcome score(const SlotGame& game, const Assignment& a);

/// Round-robin best responses: devices respond to the posted strategies, then
/// each server in turn picks its grid best response anticipating the devices.
/// Stops once the largest normalised strategy change drops below `tol`.
PolicyOutcome best_response_equilibrium(const SlotGame& game);
PolicyOutcome best_response_equilibrium(const SlotState& state, const GameConfig& cfg);

struct NashWitness {
  enum class Player { Device, Server };
  Player player = Player::Device;
  std::size_t index = 0;
  TaskDecision device_deviation;
  ServerStrategy server_deviation;
  double gain = 0.0;
};

struct NashCheck {
  bool holds = true;
  std::optional<NashWitness> witness;  // the largest-gain deviation if it fails
};

/// No device may gain more than `epsilon` by switching to another option that
/// fits next to the others; no server may gain more than `epsilon` by moving
/// to another grid point once the devices re-respond.
NashCheck check_epsilon_nash(const SlotGame& game, const Assignment& profile, double epsilon);

/// Tolerance scale used for equilibrium certificates: max(1, |largest reward|).
double reward_scale(const PolicyOutcome& outcome);

}  // namespace greenmec
