#include "greenmec/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <numeric>
#include <ostream>
#include <sstream>

#include "greenmec/oracle.hpp"
#include "greenmec/scenario_io.hpp"
#include "greenmec/simulator.hpp"

namespace greenmec::cli {

namespace {

namespace fs = std::filesystem;

// Loads and validates; on failure prints the diagnostic and sets `code`.
std::optional<ScenarioFile> load(const RunArgs& args, Streams io, int& code) {
  try {
    ScenarioFile f = load_scenario(args.scenario);
    if (args.seed) f.scenario.seed = *args.seed;
    resolve_defaults(f.scenario);
    const auto problems = validate_scenario(f.scenario);
    if (!problems.empty()) {
      io.err << args.scenario.string() << ": invalid scenario\n";
      for (const auto& p : problems) io.err << "  " << p << "\n";
      code = kExitInvalid;
      return std::nullopt;
    }
    return f;
  } catch (const ParseError& e) {
    io.err << e.what() << "\n";
    code = kExitUsage;
  }
  return std::nullopt;
}

bool ensure_dir(const fs::path& dir, Streams io) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    io.err << "cannot create " << dir.string() << ": " << ec.message() << "\n";
    return false;
  }
  return true;
}

std::string summary_row(const RunSummary& s) {
  std::ostringstream os;
  os << format_sig9(s.mean_delay_s) << ',' << format_sig9(s.brown_used_j) << ','
     << format_sig9(s.green_utilization) << ',' << format_sig9(s.drop_rate) << ','
     << format_sig9(s.mean_device_reward) << ',' << format_sig9(s.mean_server_reward);
  return os.str();
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

}  // namespace

int cmd_run(const RunArgs& args, Streams io) {
  int code = kExitOk;
  auto file = load(args, io, code);
  if (!file) return code;
  try {
    const RunResult r = run(file->scenario);
    if (!ensure_dir(args.out_dir, io)) return kExitRuntime;
    write_file_atomic(args.out_dir / "slots.csv", slots_csv(r.slots));
    if (file->output.tasks_csv) write_file_atomic(args.out_dir / "tasks.csv", tasks_csv(r.slots));
    write_file_atomic(args.out_dir / "resolved_scenario", emit_scenario(*file));
    write_file_atomic(args.out_dir / "summary", summary_text(r.summary));
    io.out << summary_text(r.summary);
  } catch (const std::exception& e) {
    io.err << "run failed: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_compare(const RunArgs& args, const std::vector<std::string>& policies, Streams io) {
  const auto known = known_policy_ids();
  if (policies.size() < 2) {
    io.err << "compare needs at least two --policy values (known: " << join(known) << ")\n";
    return kExitUsage;
  }
  std::vector<PolicyKind> kinds;
  for (const auto& id : policies) {
    const auto k = parse_policy(id);
    if (!k) {
      io.err << "unknown policy '" << id << "' (known: " << join(known) << ")\n";
      return kExitUsage;
    }
    kinds.push_back(*k);
  }
  int code = kExitOk;
  auto file = load(args, io, code);
  if (!file) return code;
  try {
    std::ostringstream csv;
    csv << kCompareCsvHeader << "\n";
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      Scenario s = file->scenario;
      s.policy.kind = kinds[i];
      const RunResult r = run(s);
      csv << policies[i] << ',' << summary_row(r.summary) << ','
          << format_sig9(r.summary.wall_clock_s) << "\n";
    }
    if (!ensure_dir(args.out_dir, io)) return kExitRuntime;
    write_file_atomic(args.out_dir / "compare.csv", csv.str());
    io.out << csv.str();
  } catch (const std::exception& e) {
    io.err << "compare failed: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_oracle_check(const RunArgs& args, std::size_t slot, Streams io) {
  int code = kExitOk;
  auto file = load(args, io, code);
  if (!file) return code;
  if (slot >= file->scenario.horizon) {
    io.err << "slot " << slot << " is outside the horizon of " << file->scenario.horizon
           << " slots\n";
    return kExitUsage;
  }
  try {
    const SlotGame game(slot_state_at(file->scenario, slot), file->scenario.policy.game);
    const std::uint64_t cardinality = oracle_cardinality(game);
    OracleResult oracle;
    try {
      oracle = brute_force_oracle(game);
    } catch (const OracleTooLarge& e) {
      io.err << e.what() << "\n";
      io.out << "cardinality: " << e.cardinality() << "\n";
      return kExitOversize;
    }
    const PolicyOutcome eq = best_response_equilibrium(game);
    const double eps = 1e-6 * reward_scale(eq);
    const NashCheck check = check_epsilon_nash(game, eq.assignment, eps);
    const auto index = oracle_index(game, eq.assignment);
    const bool in_set = index && oracle.in_nash_set(*index);
    const double social =
        std::accumulate(eq.device_rewards.begin(), eq.device_rewards.end(), 0.0) +
        std::accumulate(eq.server_rewards.begin(), eq.server_rewards.end(), 0.0);

    io.out << "slot: " << slot << "\n"
           << "tasks: " << game.num_tasks() << "\n"
           << "servers: " << game.num_servers() << "\n"
           << "cardinality: " << cardinality << "\n"
           << "feasible_profiles: " << oracle.feasible_profiles << "\n"
           << "nash_profiles: " << oracle.nash_indices.size() << "\n"
           << "converged: " << (eq.converged ? "true" : "false") << "\n"
           << "iterations: " << eq.iterations << "\n"
           << "epsilon: " << format_exact(eps) << "\n"
           << "equilibrium_social: " << format_exact(social) << "\n"
           << "social_optimum: " << format_exact(oracle.social_optimum) << "\n"
           << "social_gap: " << format_exact(oracle.social_optimum - social) << "\n";
    if (check.holds && in_set) {
      io.out << "verdict: certified ε-Nash\n";
    } else {
      io.out << "verdict: not certified";
      if (!in_set) io.out << " (outside the oracle equilibrium set)";
      if (check.witness) {
        io.out << " (profitable deviation by "
               << (check.witness->player == NashWitness::Player::Device ? "task " : "server ")
               << check.witness->index << ", gain " << format_exact(check.witness->gain) << ")";
      }
      io.out << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    io.err << "oracle-check failed: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_sweep(const std::vector<fs::path>& paths, const fs::path& out_dir,
              std::optional<std::uint64_t> seed, unsigned threads, Streams io) {
  if (paths.empty()) {
    io.err << "sweep needs at least one --scenario\n";
    return kExitUsage;
  }
  std::vector<Scenario> scenarios;
  for (const auto& p : paths) {
    int code = kExitOk;
    auto file = load({p, out_dir, seed}, io, code);
    if (!file) return code;
    scenarios.push_back(std::move(file->scenario));
  }
  try {
    const auto items = sweep(scenarios, SweepOptions{threads});
    std::ostringstream csv;
    csv << kSweepCsvHeader << "\n";
    bool all_ok = true;
    for (std::size_t i = 0; i < items.size(); ++i) {
      csv << paths[i].string() << ',';
      if (!items[i].summary) {
        all_ok = false;
        io.err << paths[i].string() << ": " << items[i].error << "\n";
        csv << "error,,,,,,,,,,\n";
        continue;
      }
      const RunSummary& s = *items[i].summary;
      csv << "ok," << s.tasks << ',' << summary_row(s) << ',' << format_sig9(s.converged_fraction)
          << ',' << s.evaluations << ',' << format_sig9(s.wall_clock_s) << "\n";
    }
    if (!ensure_dir(out_dir, io)) return kExitRuntime;
    write_file_atomic(out_dir / "sweep.csv", csv.str());
    io.out << csv.str();
    return all_ok ? kExitOk : kExitRuntime;
  } catch (const std::exception& e) {
    io.err << "sweep failed: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int main_cli(int argc, char** argv, Streams io) {
  CLI::App app{"Green-energy aware edge offloading simulator"};
  app.require_subcommand(1);

  RunArgs args;
  std::uint64_t seed = 0;
  std::vector<std::string> policies;
  std::size_t slot = 0;
  std::vector<std::string> sweep_paths;
  unsigned threads = 1;

  const auto common = [&](CLI::App* sub, bool scenario_required) {
    if (scenario_required) {
      sub->add_option("--scenario", args.scenario, "scenario file")->required();
    }
    sub->add_option("--out", args.out_dir, "output directory");
    sub->add_option("--seed", seed, "override the scenario seed");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "simulate one scenario");
  common(run_cmd, true);
  CLI::App* compare_cmd = app.add_subcommand("compare", "run one scenario under several policies");
  common(compare_cmd, true);
  compare_cmd->add_option("--policy", policies, "policy id, repeatable");
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle-check", "certify one slot's equilibrium by enumeration");
  common(oracle_cmd, true);
  oracle_cmd->add_option("--slot", slot, "slot index")->default_val(0);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run many scenarios");
  sweep_cmd->add_option("--scenario", sweep_paths, "scenario file, repeatable")->required();
  sweep_cmd->add_option("--out", args.out_dir, "output directory");
  sweep_cmd->add_option("--seed", seed, "override every scenario seed");
  sweep_cmd->add_option("--threads", threads, "worker threads, 0 for all cores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    const int rc = app.exit(e, out, err);
    io.out << out.str();
    io.err << err.str();
    return rc == 0 ? kExitOk : kExitUsage;
  }

  const auto seed_flag = [&](CLI::App* sub) -> std::optional<std::uint64_t> {
    if (sub->count("--seed")) return seed;
    return std::nullopt;
  };

  if (run_cmd->parsed()) {
    args.seed = seed_flag(run_cmd);
    return cmd_run(args, io);
  }
  if (compare_cmd->parsed()) {
    args.seed = seed_flag(compare_cmd);
    return cmd_compare(args, policies, io);
  }
  if (oracle_cmd->parsed()) {
    args.seed = seed_flag(oracle_cmd);
    return cmd_oracle_check(args, slot, io);
  }
  std::vector<fs::path> paths(sweep_paths.begin(), sweep_paths.end());
  return cmd_sweep(paths, args.out_dir, seed_flag(sweep_cmd), threads, io);
}

}  // namespace greenmec::cli
