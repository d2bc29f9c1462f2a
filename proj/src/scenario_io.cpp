#include "greenmec/scenario_io.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace greenmec {

ParseError::ParseError(std::string source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::size_t line_of(const YAML::Node& n) {
  const YAML::Mark m = n.Mark();
  return m.is_null() ? 0 : static_cast<std::size_t>(m.line) + 1;
}

struct Ctx {
  std::string source;
  std::filesystem::path base_dir;

  [[noreturn]] void fail(const YAML::Node& at, const std::string& what) const {
    throw ParseError(source, line_of(at), what);
  }
};

// Strict view over one YAML mapping: every key must be consumed.
class MapReader {
 public:
  MapReader(const YAML::Node& node, std::string path, const Ctx& ctx)
      : node_(node), path_(std::move(path)), ctx_(ctx) {
    if (!node_.IsMap()) ctx_.fail(node_, "'" + path_ + "' must be a mapping");
  }

  bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

  YAML::Node get(const std::string& key) {
    used_.insert(key);
    const YAML::Node n = node_[key];
    if (!n) ctx_.fail(node_, "missing key '" + qualified(key) + "'");
    return n;
  }

  template <typename T>
  T value(const std::string& key) {
    const YAML::Node n = get(key);
    return convert<T>(n, key);
  }

  template <typename T>
  T value_or(const std::string& key, T fallback) {
    if (!has(key)) {
      used_.insert(key);
      return fallback;
    }
    return value<T>(key);
  }

  std::vector<double> numbers(const std::string& key) {
    const YAML::Node n = get(key);
    if (!n.IsSequence()) ctx_.fail(n, "'" + qualified(key) + "' must be a list of numbers");
    std::vector<double> out;
    for (const auto& item : n) out.push_back(convert<double>(item, key));
    return out;
  }

  std::array<double, 2> range(const std::string& key, std::array<double, 2> fallback) {
    if (!has(key)) {
      used_.insert(key);
      return fallback;
    }
    const auto v = numbers(key);
    if (v.size() != 2) ctx_.fail(node_[key], "'" + qualified(key) + "' must be [min, max]");
    return {v[0], v[1]};
  }

  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      const std::string key = it->first.as<std::string>();
      if (!used_.count(key)) ctx_.fail(it->first, "unknown key '" + qualified(key) + "'");
    }
  }

 private:
  template <typename T>
  T convert(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) ctx_.fail(n, "'" + qualified(key) + "' must be a scalar");
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      ctx_.fail(n, "bad value '" + n.Scalar() + "' for '" + qualified(key) + "'");
    }
  }

  YAML::Node node_;
  std::string path_;
  const Ctx& ctx_;
  std::set<std::string> used_;
};

DeviceSpec parse_device(const YAML::Node& n, const std::string& path, const Ctx& ctx) {
  MapReader r(n, path, ctx);
  DeviceSpec d;
  d.id = r.value<DeviceId>("id");
  d.f_max_local = r.value<double>("f_max_cycles_per_s");
  d.kappa = r.value_or<double>("kappa_j_s_per_cycle2", 1e-27);
  d.tx_power_w = r.value<double>("tx_power_w");
  d.p_sched_w = r.value_or<double>("p_sched_w", d.tx_power_w);
  if (r.has("battery")) {
    MapReader b(r.get("battery"), path + ".battery", ctx);
    DeviceBattery bat;
    bat.capacity_j = b.value<double>("capacity_j");
    bat.level_j = b.value_or<double>("level_j", bat.capacity_j);
    bat.harvest_j_per_slot = b.value_or<double>("harvest_j_per_slot", 0.0);
    b.finish();
    d.battery = bat;
  }
  r.finish();
  return d;
}

GainModel parse_gain(const YAML::Node& n, const std::string& path, const Ctx& ctx) {
  MapReader r(n, path, ctx);
  GainModel g;
  const auto kind_node = r.get("kind");
  const std::string kind = kind_node.as<std::string>();
  if (kind == "constant") {
    g.kind = GainModel::Kind::Constant;
    g.value = r.value<double>("value");
  } else if (kind == "uniform") {
    g.kind = GainModel::Kind::Uniform;
    g.lo = r.value<double>("min");
    g.hi = r.value<double>("max");
  } else if (kind == "trace") {
    g.kind = GainModel::Kind::Trace;
    g.samples = r.numbers("values");
  } else {
    ctx.fail(kind_node, "unknown channel gain kind '" + kind + "' (constant, uniform, trace)");
  }
  r.finish();
  return g;
}

GreenProfile parse_green(const YAML::Node& n, const std::string& path, const Ctx& ctx,
                         double slot_len_s) {
  MapReader r(n, path, ctx);
  GreenProfile p;
  const auto kind_node = r.get("kind");
  const std::string kind = kind_node.as<std::string>();
  if (kind == "constant") {
    p = GreenProfile::constant(r.value<double>("level_j_per_slot"));
  } else if (kind == "diurnal_sine") {
    DiurnalParams d;
    d.peak_j = r.value<double>("peak_j_per_slot");
    d.sunrise_h = r.value_or<double>("sunrise_h", 6.0);
    d.sunset_h = r.value_or<double>("sunset_h", 18.0);
    d.start_hour = r.value_or<double>("start_hour", 0.0);
    d.slot_len_s = slot_len_s;
    p = GreenProfile::diurnal_sine(d);
  } else if (kind == "trace") {
    if (r.has("values") == r.has("path")) {
      ctx.fail(n, "'" + path + "' needs exactly one of 'values' or 'path'");
    }
    if (r.has("values")) {
      p = GreenProfile::trace(r.numbers("values"));
    } else {
      const auto path_node = r.get("path");
      std::filesystem::path file = path_node.as<std::string>();
      if (file.is_relative()) file = ctx.base_dir / file;
      try {
        p = GreenProfile::trace(load_green_trace(file));
      } catch (const TraceFormatError& e) {
        ctx.fail(path_node, std::string("green trace: ") + e.what());
      }
    }
  } else {
    ctx.fail(kind_node, "unknown green kind '" + kind + "' (constant, diurnal_sine, trace)");
  }
  r.finish();
  return p;
}

ServerSetup parse_server(const YAML::Node& n, const std::string& path, const Ctx& ctx,
                         double slot_len_s) {
  MapReader r(n, path, ctx);
  ServerSetup s;
  s.spec.id = r.value<ServerId>("id");
  s.spec.f_max = r.value<double>("f_max_cycles_per_s");
  s.spec.connection_time_s =
      r.value_or<double>("connection_time_s", std::numeric_limits<double>::quiet_NaN());
  s.spec.channel.bandwidth_hz = r.value<double>("bandwidth_hz");
  s.spec.channel.noise_w = r.value<double>("noise_w");
  s.gain = parse_gain(r.get("channel_gain"), path + ".channel_gain", ctx);
  s.spec.backup_capacity = r.value_or<double>("backup_capacity_cycles_per_s", 0.0);
  s.spec.backup_price = r.value_or<double>("backup_price_per_cycle_per_s", 0.0);
  s.spec.green_rate_beta = r.value_or<double>("green_rate_beta_per_cycle_per_s", 0.0);
  if (r.has("beta_trace")) s.beta_trace = r.numbers("beta_trace");
  if (r.has("max_tasks")) s.spec.max_tasks = r.value<std::size_t>("max_tasks");
  s.spec.power.idle_w = r.value_or<double>("idle_power_w", 0.0);
  s.spec.power.peak_w = r.value_or<double>("peak_power_w", s.spec.power.idle_w);
  s.green = parse_green(r.get("green"), path + ".green", ctx, slot_len_s);
  r.finish();
  return s;
}

ArrivalModel parse_arrivals(const YAML::Node& n, const Ctx& ctx) {
  MapReader r(n, "arrivals", ctx);
  ArrivalModel a;
  const auto kind_node = r.get("kind");
  const std::string kind = kind_node.as<std::string>();
  if (kind == "stochastic") {
    a.kind = ArrivalModel::Kind::Stochastic;
    a.probability = r.value_or<double>("probability_per_slot", 1.0);
    a.data_bits = r.range("data_bits", a.data_bits);
    a.compute_instructions = r.range("compute_instructions", a.compute_instructions);
    a.deadline_s = r.range("deadline_s", a.deadline_s);
  } else if (kind == "explicit") {
    a.kind = ArrivalModel::Kind::Explicit;
    const YAML::Node tasks = r.has("tasks") ? r.get("tasks") : YAML::Node(YAML::NodeType::Sequence);
    if (!tasks.IsSequence()) ctx.fail(tasks, "'arrivals.tasks' must be a list");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      MapReader t(tasks[i], "arrivals.tasks[" + std::to_string(i) + "]", ctx);
      ArrivalEntry e;
      e.slot = t.value<std::size_t>("slot");
      e.device = t.value<DeviceId>("device");
      e.data_bits = t.value<double>("data_bits");
      e.compute_instructions = t.value<double>("compute_instructions");
      e.deadline_s = t.value<double>("deadline_s");
      t.finish();
      a.entries.push_back(e);
    }
  } else {
    ctx.fail(kind_node, "unknown arrivals kind '" + kind + "' (stochastic, explicit)");
  }
  r.finish();
  return a;
}

PolicyConfig parse_policy_section(const YAML::Node& n, const Ctx& ctx) {
  MapReader r(n, "policy", ctx);
  PolicyConfig p;
  const auto id_node = r.get("id");
  const std::string id = id_node.as<std::string>();
  const auto kind = parse_policy(id);
  if (!kind) ctx.fail(id_node, "unknown policy id '" + id + "'");
  p.kind = *kind;
  GameConfig& g = p.game;
  g.weights.lambda = r.value_or<double>("lambda", g.weights.lambda);
  g.weights.epsilon = r.value_or<double>("epsilon", g.weights.epsilon);
  g.weights.mu = r.value_or<double>("mu", g.weights.mu);
  g.allow_drop = r.value_or<bool>("allow_drop", g.allow_drop);
  const std::string combine = r.value_or<std::string>("combine_rule", "parallel");
  if (combine == "parallel") {
    g.combine = CombineRule::Parallel;
  } else if (combine == "sequential") {
    g.combine = CombineRule::Sequential;
  } else {
    ctx.fail(n["combine_rule"], "combine_rule must be 'parallel' or 'sequential'");
  }
  g.grids.fractional_splits = r.value_or<bool>("fractional_splits", g.grids.fractional_splits);
  g.grids.alloc_levels = r.value_or<std::size_t>("alloc_levels", g.grids.alloc_levels);
  if (r.has("edge_fractions")) g.grids.edge_fractions = r.numbers("edge_fractions");
  if (r.has("prices_per_cycle_per_s") && r.has("price_range")) {
    ctx.fail(n, "give either 'policy.prices_per_cycle_per_s' or 'policy.price_range', not both");
  }
  if (r.has("prices_per_cycle_per_s")) g.grids.prices = r.numbers("prices_per_cycle_per_s");
  if (r.has("price_range")) {
    const YAML::Node pr = r.get("price_range");
    MapReader rr(pr, "policy.price_range", ctx);
    const double lo = rr.value<double>("min");
    const double hi = rr.value<double>("max");
    const std::size_t points = rr.value_or<std::size_t>("points", 16);
    rr.finish();
    try {
      g.grids.prices = geometric_grid(lo, hi, points);
    } catch (const std::invalid_argument& e) {
      ctx.fail(pr, std::string("policy.price_range: ") + e.what());
    }
  }
  if (r.has("backup_fractions")) g.grids.backup_fractions = r.numbers("backup_fractions");
  g.max_iters = r.value_or<std::size_t>("max_iters", g.max_iters);
  g.tol = r.value_or<double>("tol", g.tol);
  const std::string sel = r.value_or<std::string>("greedy_selector", "best_link");
  const auto selector = parse_selector(sel);
  if (!selector) ctx.fail(n["greedy_selector"], "greedy_selector must be best_link or fastest_cpu");
  p.selector = *selector;
  r.finish();
  return p;
}

}  // namespace

ScenarioFile parse_scenario(std::string_view text, const std::filesystem::path& base_dir,
                            const std::string& source) {
  const Ctx ctx{source, base_dir};
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(source, static_cast<std::size_t>(e.mark.line) + 1, e.msg);
  }
  if (!root.IsMap()) throw ParseError(source, 1, "scenario must be a YAML mapping");

  try {
    MapReader r(root, "", ctx);
    ScenarioFile file;
    Scenario& s = file.scenario;
    s.horizon = r.value<std::size_t>("horizon_slots");
    s.slot_len_s = r.value_or<double>("slot_len_s", 1.0);
    s.seed = r.value_or<std::uint64_t>("seed", 0);
    s.cycles_per_instruction = r.value_or<double>("cycles_per_instruction", 1.0);
    s.connection_range_s = r.range("connection_range_s", s.connection_range_s);

    const YAML::Node devices = r.get("devices");
    if (!devices.IsSequence()) ctx.fail(devices, "'devices' must be a list");
    for (std::size_t i = 0; i < devices.size(); ++i) {
      s.devices.push_back(parse_device(devices[i], "devices[" + std::to_string(i) + "]", ctx));
    }
    const YAML::Node servers = r.get("servers");
    if (!servers.IsSequence()) ctx.fail(servers, "'servers' must be a list");
    for (std::size_t k = 0; k < servers.size(); ++k) {
      s.servers.push_back(
          parse_server(servers[k], "servers[" + std::to_string(k) + "]", ctx, s.slot_len_s));
    }
    s.arrivals = parse_arrivals(r.get("arrivals"), ctx);
    s.policy = parse_policy_section(r.get("policy"), ctx);
    if (r.has("output")) {
      MapReader o(r.get("output"), "output", ctx);
      file.output.tasks_csv = o.value_or<bool>("tasks_csv", false);
      o.finish();
    }
    r.finish();
    return file;
  } catch (const YAML::Exception& e) {
    throw ParseError(source, e.mark.is_null() ? 0 : static_cast<std::size_t>(e.mark.line) + 1,
                     e.msg);
  }
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.parent_path().empty() ? "." : path.parent_path(),
                        path.string());
}

std::string format_exact(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_sig9(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

namespace {

std::string list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_exact(v[i]);
  }
  return out + "]";
}

std::string pair(const std::array<double, 2>& r) { return list({r[0], r[1]}); }

}  // namespace

std::string emit_scenario(const ScenarioFile& file) {
  const Scenario& s = file.scenario;
  std::ostringstream os;
  const auto num = [](double v) { return format_exact(v); };
  os << "horizon_slots: " << s.horizon << "\n";
  os << "slot_len_s: " << num(s.slot_len_s) << "\n";
  os << "seed: " << s.seed << "\n";
  os << "cycles_per_instruction: " << num(s.cycles_per_instruction) << "\n";
  os << "connection_range_s: " << pair(s.connection_range_s) << "\n";

  os << "devices:\n";
  for (const auto& d : s.devices) {
    os << "  - id: " << d.id << "\n";
    os << "    f_max_cycles_per_s: " << num(d.f_max_local) << "\n";
    os << "    kappa_j_s_per_cycle2: " << num(d.kappa) << "\n";
    os << "    tx_power_w: " << num(d.tx_power_w) << "\n";
    os << "    p_sched_w: " << num(d.p_sched_w) << "\n";
    if (d.battery) {
      os << "    battery:\n";
      os << "      capacity_j: " << num(d.battery->capacity_j) << "\n";
      os << "      level_j: " << num(d.battery->level_j) << "\n";
      os << "      harvest_j_per_slot: " << num(d.battery->harvest_j_per_slot) << "\n";
    }
  }

  os << "servers:\n";
  for (const auto& srv : s.servers) {
    const ServerSpec& sp = srv.spec;
    os << "  - id: " << sp.id << "\n";
    os << "    f_max_cycles_per_s: " << num(sp.f_max) << "\n";
    if (!std::isnan(sp.connection_time_s)) {
      os << "    connection_time_s: " << num(sp.connection_time_s) << "\n";
    }
    os << "    bandwidth_hz: " << num(sp.channel.bandwidth_hz) << "\n";
    os << "    noise_w: " << num(sp.channel.noise_w) << "\n";
    switch (srv.gain.kind) {
      case GainModel::Kind::Constant:
        os << "    channel_gain: {kind: constant, value: " << num(srv.gain.value) << "}\n";
        break;
      case GainModel::Kind::Uniform:
        os << "    channel_gain: {kind: uniform, min: " << num(srv.gain.lo)
           << ", max: " << num(srv.gain.hi) << "}\n";
        break;
      case GainModel::Kind::Trace:
        os << "    channel_gain: {kind: trace, values: " << list(srv.gain.samples) << "}\n";
        break;
    }
    os << "    backup_capacity_cycles_per_s: " << num(sp.backup_capacity) << "\n";
    os << "    backup_price_per_cycle_per_s: " << num(sp.backup_price) << "\n";
    os << "    green_rate_beta_per_cycle_per_s: " << num(sp.green_rate_beta) << "\n";
    if (!srv.beta_trace.empty()) os << "    beta_trace: " << list(srv.beta_trace) << "\n";
    if (sp.max_tasks) os << "    max_tasks: " << *sp.max_tasks << "\n";
    os << "    idle_power_w: " << num(sp.power.idle_w) << "\n";
    os << "    peak_power_w: " << num(sp.power.peak_w) << "\n";
    os << "    green:\n";
    switch (srv.green.kind) {
      case GreenProfile::Kind::Constant:
        os << "      kind: constant\n";
        os << "      level_j_per_slot: " << num(srv.green.level_j) << "\n";
        break;
      case GreenProfile::Kind::DiurnalSine:
        os << "      kind: diurnal_sine\n";
        os << "      peak_j_per_slot: " << num(srv.green.diurnal.peak_j) << "\n";
        os << "      sunrise_h: " << num(srv.green.diurnal.sunrise_h) << "\n";
        os << "      sunset_h: " << num(srv.green.diurnal.sunset_h) << "\n";
        os << "      start_hour: " << num(srv.green.diurnal.start_hour) << "\n";
        break;
      case GreenProfile::Kind::Trace:
        os << "      kind: trace\n";
        os << "      values: " << list(srv.green.samples) << "\n";
        break;
    }
  }

  const ArrivalModel& a = s.arrivals;
  os << "arrivals:\n";
  if (a.kind == ArrivalModel::Kind::Stochastic) {
    os << "  kind: stochastic\n";
    os << "  probability_per_slot: " << num(a.probability) << "\n";
    os << "  data_bits: " << pair(a.data_bits) << "\n";
    os << "  compute_instructions: " << pair(a.compute_instructions) << "\n";
    os << "  deadline_s: " << pair(a.deadline_s) << "\n";
  } else {
    os << "  kind: explicit\n";
    os << "  tasks:\n";
    for (const auto& e : a.entries) {
      os << "    - {slot: " << e.slot << ", device: " << e.device
         << ", data_bits: " << num(e.data_bits)
         << ", compute_instructions: " << num(e.compute_instructions)
         << ", deadline_s: " << num(e.deadline_s) << "}\n";
    }
  }

  const PolicyConfig& p = s.policy;
  const GameConfig& g = p.game;
  os << "policy:\n";
  os << "  id: " << to_string(p.kind) << "\n";
  os << "  lambda: " << num(g.weights.lambda) << "\n";
  os << "  epsilon: " << num(g.weights.epsilon) << "\n";
  os << "  mu: " << num(g.weights.mu) << "\n";
  os << "  allow_drop: " << (g.allow_drop ? "true" : "false") << "\n";
  os << "  combine_rule: " << (g.combine == CombineRule::Parallel ? "parallel" : "sequential")
     << "\n";
  os << "  fractional_splits: " << (g.grids.fractional_splits ? "true" : "false") << "\n";
  os << "  alloc_levels: " << g.grids.alloc_levels << "\n";
  os << "  edge_fractions: " << list(g.grids.edge_fractions) << "\n";
  os << "  prices_per_cycle_per_s: " << list(g.grids.prices) << "\n";
  os << "  backup_fractions: " << list(g.grids.backup_fractions) << "\n";
  os << "  max_iters: " << g.max_iters << "\n";
  os << "  tol: " << num(g.tol) << "\n";
  os << "  greedy_selector: " << to_string(p.selector) << "\n";
  os << "output:\n";
  os << "  tasks_csv: " << (file.output.tasks_csv ? "true" : "false") << "\n";
  return os.str();
}

std::string slots_csv(std::span<const SlotMetrics> slots) {
  std::ostringstream os;
  os << kSlotsCsvHeader << "\n";
  for (const auto& m : slots) {
    const RunSummary s = summarize(std::span<const SlotMetrics>(&m, 1));
    double utilisation = 0.0;
    for (const auto& sv : m.servers) utilisation += sv.utilization;
    if (!m.servers.empty()) utilisation /= static_cast<double>(m.servers.size());
    os << m.slot << ',' << s.tasks << ',' << s.offloaded << ',' << s.on_time << ','
       << s.deadline_missed << ',' << s.dropped_by_policy << ',' << s.dropped_by_depletion << ','
       << format_sig9(s.mean_delay_s) << ',' << format_sig9(s.device_energy_j) << ','
       << format_sig9(s.total_device_reward) << ',' << format_sig9(s.total_server_reward) << ','
       << format_sig9(s.green_available_j) << ',' << format_sig9(s.server_demand_j) << ','
       << format_sig9(s.green_used_j) << ',' << format_sig9(s.brown_used_j) << ','
       << format_sig9(s.green_wasted_j) << ',' << format_sig9(utilisation) << ','
       << s.depleted_device_slots << ',' << m.iterations << ',' << (m.converged ? 1 : 0) << "\n";
  }
  return os.str();
}

std::string tasks_csv(std::span<const SlotMetrics> slots) {
  std::ostringstream os;
  os << kTasksCsvHeader << "\n";
  for (const auto& m : slots) {
    for (const auto& t : m.tasks) {
      os << m.slot << ',' << t.id << ',' << t.device << ',' << to_string(t.fate) << ',';
      if (t.decision.server) os << *t.decision.server;
      os << ',' << format_sig9(t.decision.split.local) << ','
         << format_sig9(t.decision.split.edge) << ',' << (t.decision.split.drop ? 1 : 0) << ','
         << format_sig9(t.decision.alloc_rate) << ',' << format_sig9(t.total_delay) << ','
         << format_sig9(t.device_energy_j) << ',' << format_sig9(t.reward) << "\n";
    }
  }
  return os.str();
}

std::string summary_text(const RunSummary& s) {
  std::ostringstream os;
  const auto num = [](double v) { return format_exact(v); };
  os << "slots: " << s.slots << "\n"
     << "tasks: " << s.tasks << "\n"
     << "offloaded: " << s.offloaded << "\n"
     << "on_time: " << s.on_time << "\n"
     << "deadline_missed: " << s.deadline_missed << "\n"
     << "dropped_by_policy: " << s.dropped_by_policy << "\n"
     << "dropped_by_depletion: " << s.dropped_by_depletion << "\n"
     << "depleted_device_slots: " << s.depleted_device_slots << "\n"
     << "drop_rate: " << num(s.drop_rate) << "\n"
     << "deadline_miss_rate: " << num(s.deadline_miss_rate) << "\n"
     << "total_delay_s: " << num(s.total_delay_s) << "\n"
     << "mean_delay_s: " << num(s.mean_delay_s) << "\n"
     << "device_energy_j: " << num(s.device_energy_j) << "\n"
     << "total_device_reward: " << num(s.total_device_reward) << "\n"
     << "mean_device_reward: " << num(s.mean_device_reward) << "\n"
     << "total_server_reward: " << num(s.total_server_reward) << "\n"
     << "mean_server_reward: " << num(s.mean_server_reward) << "\n"
     << "green_available_j: " << num(s.green_available_j) << "\n"
     << "server_demand_j: " << num(s.server_demand_j) << "\n"
     << "green_used_j: " << num(s.green_used_j) << "\n"
     << "brown_used_j: " << num(s.brown_used_j) << "\n"
     << "green_wasted_j: " << num(s.green_wasted_j) << "\n"
     << "green_utilization: " << num(s.green_utilization) << "\n"
     << "converged_slots: " << s.converged_slots << "\n"
     << "converged_fraction: " << num(s.converged_fraction) << "\n"
     << "mean_iterations: " << num(s.mean_iterations) << "\n"
     << "evaluations: " << s.evaluations << "\n"
     << "wall_clock_s: " << num(s.wall_clock_s) << "\n";
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace greenmec
