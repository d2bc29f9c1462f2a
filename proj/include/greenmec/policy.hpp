#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "greenmec/baselines.hpp"
#include "greenmec/game.hpp"

namespace greenmec {

enum class PolicyKind { AllLocal, AllEdgeGreedy, RandomFeasible, Equilibrium };

std::string_view to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy(std::string_view id);
std::vector<std::string> known_policy_ids();

std::string_view to_string(GreedySelector s);
std::optional<GreedySelector> parse_selector(std::string_view id);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::Equilibrium;
  GameConfig game;
  GreedySelector selector = GreedySelector::BestLink;
};

/// Runs the configured decision-maker on one slot. `rng` is only drawn from by
/// random_feasible.
PolicyOutcome run_policy(const SlotGame& game, const PolicyConfig& cfg, Rng& rng);

}  // namespace greenmec
