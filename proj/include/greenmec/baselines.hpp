#pragma once

#include "greenmec/game.hpp"
#include "greenmec/random.hpp"

namespace greenmec {

/// How all_edge_greedy picks a task's server.
enum class GreedySelector {
  BestLink,     // highest uplink rate ("nearest")
  FastestCpu,   // largest f_max
};

/// Every task runs fully on its device.
PolicyOutcome all_local(const SlotGame& game);

/// Every task goes to its selected server with an equal share f_max/n of the
/// server. Tasks that then miss their deadline (or exceed their energy budget,
/// or the admission cap) are dropped when dropping is enabled, otherwise kept
/// local; shares are recomputed until stable.
PolicyOutcome all_edge_greedy(const SlotGame& game, GreedySelector selector);

/// Devices in index order pick uniformly among the grid options that fit next
/// to the load already placed.
PolicyOutcome random_feasible(const SlotGame& game, Rng& rng);

}  // namespace greenmec
