#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "greenmec/cli.hpp"
#include "greenmec/scenario_io.hpp"

using namespace greenmec;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = GREENMEC_SCENARIO_DIR;

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("greenmec_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

struct Captured {
  std::ostringstream out, err;
  cli::Streams streams() { return {out, err}; }
};

int invoke(std::vector<std::string> args, Captured& cap) {
  args.insert(args.begin(), "greenmec");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::main_cli(static_cast<int>(argv.size()), argv.data(), cap.streams());
}

const char* kMinimal = R"(horizon_slots: 3
seed: 5
devices:
  - {id: 0, f_max_cycles_per_s: 5.0e8, tx_power_w: 0.2}
servers:
  - id: 0
    f_max_cycles_per_s: 1.0e10
    bandwidth_hz: 1.0e7
    noise_w: 1.0e-9
    channel_gain: {kind: constant, value: 1.0e-6}
    green: {kind: constant, level_j_per_slot: 50}
arrivals: {kind: stochastic}
policy: {id: all_edge_greedy}
)";

}  // namespace

TEST(ScenarioParse, MinimalFileGetsDefaults) {
  const ScenarioFile f = parse_scenario(kMinimal);
  EXPECT_EQ(f.scenario.horizon, 3u);
  EXPECT_EQ(f.scenario.seed, 5u);
  ASSERT_EQ(f.scenario.servers.size(), 1u);
  EXPECT_EQ(f.scenario.policy.kind, PolicyKind::AllEdgeGreedy);
  EXPECT_FALSE(f.output.tasks_csv);
}

TEST(ScenarioParse, UnknownKeyNamesKeyAndLine) {
  std::string text = kMinimal;
  text.insert(text.find("    bandwidth_hz"), "    bandwith_hz: 3\n");
  try {
    parse_scenario(text, ".", "typo.yaml");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 8u);
    EXPECT_NE(std::string(e.what()).find("bandwith_hz"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("typo.yaml"), std::string::npos);
  }
}

TEST(ScenarioParse, WrongTypesAreReported) {
  std::string text = kMinimal;
  text.replace(text.find("horizon_slots: 3"), 16, "horizon_slots: many");
  EXPECT_THROW(parse_scenario(text), ParseError);
  EXPECT_THROW(parse_scenario("- just\n- a list\n"), ParseError);
  EXPECT_THROW(parse_scenario("horizon_slots: [1\n"), ParseError);
}

TEST(ScenarioParse, EmitRoundTripsExactly) {
  const ScenarioFile f = load_scenario(kScenarios / "tiny.yaml");
  const std::string once = emit_scenario(f);
  const std::string twice = emit_scenario(parse_scenario(once));
  EXPECT_EQ(once, twice);
  const RunResult a = run(f.scenario);
  const RunResult b = run(parse_scenario(once).scenario);
  EXPECT_EQ(slots_csv(a.slots), slots_csv(b.slots));
}

TEST(ScenarioParse, GreenTracePathResolvesAgainstBaseDir) {
  TempDir dir;
  write(dir.path() / "green.csv", "slot,green_j\n0,10\n1,20.5\n2,0\n");
  std::string text = kMinimal;
  text.replace(text.find("{kind: constant, level_j_per_slot: 50}"), 38, "{kind: trace, path: green.csv}");
  write(dir.path() / "s.yaml", text);
  const ScenarioFile f = load_scenario(dir.path() / "s.yaml");
  const GreenProfile& g = f.scenario.servers[0].green;
  ASSERT_EQ(g.kind, GreenProfile::Kind::Trace);
  EXPECT_EQ(g.samples, (std::vector<double>{10.0, 20.5, 0.0}));
}

TEST(Formatting, Sig9AndExact) {
  EXPECT_EQ(format_sig9(0.1), "0.1");
  EXPECT_EQ(format_sig9(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_sig9(0.0), "0");
  const double v = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_exact(v)), v);
}

TEST(Cli, RunWritesOneRowPerSlot) {
  TempDir dir;
  Captured cap;
  const int code =
      invoke({"run", "--scenario", (kScenarios / "tiny.yaml").string(), "--out", dir.path().string()},
             cap);
  ASSERT_EQ(code, cli::kExitOk) << cap.err.str();
  const std::string csv = slurp(dir.path() / "slots.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kSlotsCsvHeader);
  EXPECT_EQ(count_lines(csv), 1u + 4u);
  EXPECT_TRUE(fs::exists(dir.path() / "resolved_scenario"));
  EXPECT_TRUE(fs::exists(dir.path() / "summary"));
}

TEST(Cli, RepeatRunsAreByteIdentical) {
  TempDir a, b, c;
  Captured cap;
  const std::string sc = (kScenarios / "tiny.yaml").string();
  ASSERT_EQ(invoke({"run", "--scenario", sc, "--out", a.path().string()}, cap), 0);
  ASSERT_EQ(invoke({"run", "--scenario", sc, "--out", b.path().string()}, cap), 0);
  EXPECT_EQ(slurp(a.path() / "slots.csv"), slurp(b.path() / "slots.csv"));
  ASSERT_EQ(invoke({"run", "--scenario", (a.path() / "resolved_scenario").string(), "--out",
                    c.path().string()},
                   cap),
            0);
  EXPECT_EQ(slurp(a.path() / "slots.csv"), slurp(c.path() / "slots.csv"));
}

TEST(Cli, SeedOverrideChangesArrivals) {
  TempDir a, b;
  Captured cap;
  const std::string sc = (kScenarios / "tiny.yaml").string();
  ASSERT_EQ(invoke({"run", "--scenario", sc, "--out", a.path().string(), "--seed", "8"}, cap), 0);
  ASSERT_EQ(invoke({"run", "--scenario", sc, "--out", b.path().string()}, cap), 0);
  EXPECT_NE(slurp(a.path() / "slots.csv"), slurp(b.path() / "slots.csv"));
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  Captured cap;
  EXPECT_EQ(invoke({"run", "--scenario", (dir.path() / "missing.yaml").string()}, cap),
            cli::kExitUsage);

  write(dir.path() / "typo.yaml", std::string(kMinimal) + "sed: 3\n");
  Captured typo;
  EXPECT_EQ(invoke({"run", "--scenario", (dir.path() / "typo.yaml").string()}, typo),
            cli::kExitUsage);
  EXPECT_NE(typo.err.str().find("sed"), std::string::npos);
  EXPECT_NE(typo.err.str().find(":14:"), std::string::npos);

  std::string invalid = kMinimal;
  invalid.replace(invalid.find("f_max_cycles_per_s: 5.0e8"), 25, "f_max_cycles_per_s: -1");
  write(dir.path() / "invalid.yaml", invalid);
  EXPECT_EQ(invoke({"run", "--scenario", (dir.path() / "invalid.yaml").string(), "--out",
                    dir.path().string()},
                   cap),
            cli::kExitInvalid);

  EXPECT_EQ(invoke({"frobnicate"}, cap), cli::kExitUsage);
}

TEST(Cli, CompareNeedsTwoKnownPolicies) {
  TempDir dir;
  const std::string sc = (kScenarios / "tiny.yaml").string();
  Captured one;
  EXPECT_EQ(invoke({"compare", "--scenario", sc, "--out", dir.path().string(), "--policy",
                    "all_local"},
                   one),
            cli::kExitUsage);
  Captured unknown;
  EXPECT_EQ(invoke({"compare", "--scenario", sc, "--out", dir.path().string(), "--policy",
                    "all_local", "--policy", "clairvoyant"},
                   unknown),
            cli::kExitUsage);
  EXPECT_NE(unknown.err.str().find("equilibrium"), std::string::npos);
}

TEST(Cli, CompareWritesOneRowPerPolicy) {
  TempDir dir;
  Captured cap;
  const std::string sc = (kScenarios / "tiny.yaml").string();
  ASSERT_EQ(invoke({"compare", "--scenario", sc, "--out", dir.path().string(), "--policy",
                    "all_local", "--policy", "all_edge_greedy", "--policy", "equilibrium"},
                   cap),
            0)
      << cap.err.str();
  std::istringstream csv(slurp(dir.path() / "compare.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, cli::kCompareCsvHeader);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(csv, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][0], "all_local");
  EXPECT_EQ(rows[1][0], "all_edge_greedy");
  EXPECT_LT(std::stod(rows[1][1]), std::stod(rows[0][1]));
}

TEST(Cli, OracleCheckCertifiesTinyScenario) {
  Captured cap;
  const std::string sc = (kScenarios / "tiny.yaml").string();
  ASSERT_EQ(invoke({"oracle-check", "--scenario", sc, "--slot", "1"}, cap), 0) << cap.err.str();
  EXPECT_NE(cap.out.str().find("certified"), std::string::npos);
  Captured late;
  EXPECT_EQ(invoke({"oracle-check", "--scenario", sc, "--slot", "4"}, late), cli::kExitUsage);
}

TEST(Cli, OracleCheckRefusesLargeSlots) {
  TempDir dir;
  std::string text = "horizon_slots: 1\nseed: 1\ndevices:\n";
  for (int i = 0; i < 50; ++i) {
    text += "  - {id: " + std::to_string(i) + ", f_max_cycles_per_s: 5.0e8, tx_power_w: 0.2}\n";
  }
  const std::string tail = std::string(kMinimal).substr(std::string(kMinimal).find("servers:"));
  text += tail;
  write(dir.path() / "big.yaml", text);
  Captured cap;
  EXPECT_EQ(invoke({"oracle-check", "--scenario", (dir.path() / "big.yaml").string(), "--slot", "0"},
                   cap),
            cli::kExitOversize);
  EXPECT_NE(cap.err.str().find("cardinality"), std::string::npos);
}

TEST(Cli, SweepWritesOneRowPerScenario) {
  TempDir dir;
  Captured cap;
  const std::string tiny = (kScenarios / "tiny.yaml").string();
  ASSERT_EQ(invoke({"sweep", "--scenario", tiny, "--scenario", tiny, "--out", dir.path().string(),
                    "--threads", "2"},
                   cap),
            cli::kExitOk)
      << cap.err.str();
  const std::string csv = slurp(dir.path() / "sweep.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), cli::kSweepCsvHeader);
  EXPECT_EQ(count_lines(csv), 3u);
}

TEST(Cli, SweepChecksEveryFileBeforeRunning) {
  TempDir dir;
  write(dir.path() / "broken.yaml", "horizon_slots: 0\n");
  Captured cap;
  EXPECT_EQ(invoke({"sweep", "--scenario", (kScenarios / "tiny.yaml").string(), "--scenario",
                    (dir.path() / "broken.yaml").string(), "--out", dir.path().string()},
                   cap),
            cli::kExitUsage);
  EXPECT_NE(cap.err.str().find("broken.yaml"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir.path() / "sweep.csv"));
}

TEST(BundledScenarios, AllLoadAndRun) {
  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(kScenarios)) {
    if (entry.path().extension() != ".yaml") continue;
    SCOPED_TRACE(entry.path().string());
    const ScenarioFile f = load_scenario(entry.path());
    EXPECT_TRUE(validate_scenario(f.scenario).empty());
    const RunResult r = run(f.scenario);
    EXPECT_EQ(r.slots.size(), f.scenario.horizon);
    ++seen;
  }
  EXPECT_GE(seen, 4u);
}
