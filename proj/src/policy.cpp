#include "greenmec/policy.hpp"

namespace greenmec {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::AllLocal: return "all_local";
    case PolicyKind::AllEdgeGreedy: return "all_edge_greedy";
    case PolicyKind::RandomFeasible: return "random_feasible";
    case PolicyKind::Equilibrium: return "equilibrium";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy(std::string_view id) {
  for (PolicyKind k : {PolicyKind::AllLocal, PolicyKind::AllEdgeGreedy,
                       PolicyKind::RandomFeasible, PolicyKind::Equilibrium}) {
    if (to_string(k) == id) return k;
  }
  return std::nullopt;
}

std::vector<std::string> known_policy_ids() {
  return {"all_local", "all_edge_greedy", "random_feasible", "equilibrium"};
}

std::string_view to_string(GreedySelector s) {
  return s == GreedySelector::BestLink ? "best_link" : "fastest_cpu";
}

std::optional<GreedySelector> parse_selector(std::string_view id) {
  if (id == "best_link") return GreedySelector::BestLink;
  if (id == "fastest_cpu") return GreedySelector::FastestCpu;
  return std::nullopt;
}

PolicyOutcome run_policy(const SlotGame& game, const PolicyConfig& cfg, Rng& rng) {
  switch (cfg.kind) {
    case PolicyKind::AllLocal: return all_local(game);
    case PolicyKind::AllEdgeGreedy: return all_edge_greedy(game, cfg.selector);
    case PolicyKind::RandomFeasible: return random_feasible(game, rng);
    case PolicyKind::Equilibrium: return best_response_equilibrium(game);
  }
  return all_local(game);
}

}  // namespace greenmec
