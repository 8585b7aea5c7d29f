// Copyright 2026 The vtcamo Authors
#include "cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "vtcamo/attack.hpp"
#include "vtcamo/camouflage.hpp"
#include "vtcamo/error.hpp"
#include "vtcamo/netlist.hpp"
#include "vtcamo/sidechannel.hpp"
#include "vtcamo/simulator.hpp"

namespace vtcamo::cli {

using Json = nlohmann::ordered_json;

nlohmann::ordered_json Context::header(const std::string& command) const {
  Json j;
  j["command"] = command;
  j["version"] = kVersion;
  if (timestamp) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ss;
    ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    j["generated_at"] = ss.str();
  }
  return j;
}

void Context::emit_report(nlohmann::ordered_json report) {
  report["config"] = config.to_json();
  emit_text(report.dump(2) + "\n");
}

void Context::emit_text(std::string text) {
  if (config.report.empty()) {
    stdout_text += text;
  } else {
    files.add(config.report, std::move(text));
  }
}

namespace {

[[noreturn]] void invalid(const std::string& msg) {
  throw Error(ErrorKind::kInvalidParameter, msg);
}

Netlist load_bench(const std::string& path) { return parse_bench(read_text(path)); }

std::optional<CamoKey> load_key(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return parse_key(read_text(path));
}

CellFlavor flavor_arg(const std::string& name) {
  const auto f = parse_flavor(name);
  if (!f) invalid("unknown flavor '" + name + "'");
  return *f;
}

std::string bits(const std::vector<bool>& v) {
  std::string s;
  for (bool b : v) s += b ? '1' : '0';
  return s;
}

std::vector<bool> parse_bits(const std::string& s, std::size_t width) {
  if (s.size() != width) {
    throw Error(ErrorKind::kInvalidInput, "vector '" + s + "' has " + std::to_string(s.size()) +
                                              " bits, expected " + std::to_string(width));
  }
  std::vector<bool> v;
  for (char c : s) {
    if (c != '0' && c != '1') throw Error(ErrorKind::kInvalidInput, "vector '" + s + "' is not binary");
    v.push_back(c == '1');
  }
  return v;
}

std::string names_of(const Netlist& n, std::span<const NetId> nets) {
  std::string s;
  for (auto id : nets) s += (s.empty() ? "" : ",") + n.net_name(id);
  return s;
}

Json function_list(FunctionSet set) {
  Json a = Json::array();
  for (auto f : set.members()) a.push_back(std::string(to_string(f)));
  return a;
}

Json key_json(const CamoKey& key) {
  Json j = Json::object();
  for (const auto& [gate, e] : key.entries) j[gate] = std::string(to_string(e.function));
  return j;
}

Json overhead_json(const OverheadReport& r) {
  Json j;
  j["area_pct"] = r.area_pct;
  j["power_pct"] = r.power_pct;
  j["delay_pct"] = r.delay_pct;
  j["gate_equivalents"] = r.gate_equivalents;
  j["delay_plain"] = r.delay_plain;
  j["delay_camo"] = r.delay_camo;
  j["camo_gates"] = r.per_gate.size();
  return j;
}

DelayModel delay_model(const std::string& name, const RunConfig& config) {
  if (name == "unit") return unit_delay();
  if (name == "device") return device_delay_model(unit_delay(), config.device);
  invalid("unknown delay model '" + name + "' (unit|device)");
}

std::string scientific(const BigFloat& v) {
  std::ostringstream ss;
  ss << std::scientific << std::setprecision(6) << v;
  return ss.str();
}

}  // namespace

// ---------------------------------------------------------------------------

void run_parse(const ParseOptions& o, Context& ctx) {
  const auto n = load_bench(o.bench);
  Json r = ctx.header("parse");
  r["bench"] = o.bench;
  r["inputs"] = n.primary_inputs().size();
  r["outputs"] = n.primary_outputs().size();
  r["dffs"] = n.dffs().size();
  r["gates"] = n.gates().size();
  r["camo_gates"] = n.camo_gates().size();
  r["nets"] = n.net_count();
  std::map<std::string, std::size_t> functions;
  for (const auto& g : n.gates()) {
    ++functions[g.camo ? std::string(to_string(g.flavor)) : std::string(to_string(g.function))];
  }
  r["cells"] = functions;
  const auto key = load_key(o.key);
  if (key) validate_key(n, *key);
  if (n.camo_gates().empty() || key) {
    const auto path = critical_path(n, key ? &*key : nullptr, unit_delay());
    r["depth"] = path.delay;
  }
  if (key) r["key_valid"] = true;
  if (!o.out.empty()) {
    ctx.files.add(o.out, serialize_bench(n));
    r["out"] = o.out;
  }
  ctx.emit_report(std::move(r));
}

void run_lock(const LockOptions& o, Context& ctx) {
  const auto n = load_bench(o.bench);
  const auto flavor = flavor_arg(o.flavor);
  std::vector<std::size_t> picked;
  Json r = ctx.header("lock");
  r["bench"] = o.bench;
  r["flavor"] = std::string(to_string(flavor));
  if (!o.gates.empty()) {
    for (const auto& name : o.gates) {
      const auto g = n.find_gate(name);
      if (!g) invalid("no gate named '" + name + "'");
      picked.push_back(*g);
    }
    r["strategy"] = "explicit";
  } else {
    const auto strategy = parse_strategy(o.strategy);
    if (!strategy) invalid("unknown strategy '" + o.strategy + "'");
    SelectionPolicy policy;
    policy.strategy = *strategy;
    policy.seed = ctx.config.seed;
    policy.budget = o.budget;
    policy.delay_budget = o.delay_budget;
    policy.flavor = flavor;
    policy.lambda = o.lambda;
    picked = select_gates(n, policy, ctx.config.costs, unit_delay());
    r["strategy"] = std::string(to_string(*strategy));
    r["budget"] = o.budget;
    r["delay_budget"] = o.delay_budget;
    r["lambda"] = o.lambda;
  }
  r["seed"] = ctx.config.seed;
  CamouflageOptions copt;
  copt.decoy_seed = o.decoy_seed;
  if (o.decoy_seed) r["decoy_seed"] = *o.decoy_seed;
  const auto result = apply_camouflage(n, picked, flavor, copt);
  Json selected = Json::array();
  for (auto g : picked) selected.push_back(n.gate(g).name);
  r["selected"] = selected;
  r["overhead"] =
      overhead_json(overhead_report(result.netlist, result.key, ctx.config.costs, unit_delay()));
  ctx.files.add(o.out, serialize_bench(result.netlist));
  ctx.files.add(o.key, serialize_key(result.key, &result.netlist));
  r["out"] = o.out;
  r["key"] = o.key;
  ctx.emit_report(std::move(r));
}

void run_sim(const SimOptions& o, Context& ctx) {
  const auto n = load_bench(o.bench);
  const auto key = load_key(o.key);
  if (key) validate_key(n, *key);
  const std::size_t width = n.comb_inputs().size();

  std::vector<std::vector<bool>> vectors;
  for (const auto& s : o.vectors) vectors.push_back(parse_bits(s, width));
  if (o.all) {
    if (width > 20) invalid("--all is limited to 20 combinational inputs");
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << width); ++v) {
      std::vector<bool> x(width);
      for (std::size_t i = 0; i < width; ++i) x[i] = ((v >> i) & 1u) != 0;
      vectors.push_back(std::move(x));
    }
  }
  if (o.random) {
    std::mt19937_64 rng(ctx.config.seed);
    for (std::uint64_t k = 0; k < *o.random; ++k) {
      std::vector<bool> x(width);
      for (std::size_t i = 0; i < width; ++i) x[i] = (rng() & 1u) != 0;
      vectors.push_back(std::move(x));
    }
  }
  if (vectors.empty()) invalid("no vectors given (use --vector, --all or --random)");

  // Without a key, camouflaged gates take every function of their flavor and
  // outputs they can change read as X.
  const Simulator sim(n);
  std::vector<FunctionMasks> masks;
  for (auto g : n.camo_gates()) {
    const Gate& gate = n.gate(g);
    masks.push_back(key ? masks_for(key->find(gate.name)->function)
                        : masks_for(function_set(gate.flavor)));
  }
  std::vector<std::string> outputs;
  std::vector<Ternary> in(width);
  std::vector<Ternary> nets(n.net_count());
  for (const auto& x : vectors) {
    for (std::size_t i = 0; i < width; ++i) in[i] = Ternary::known(x[i] ? 1u : 0u);
    sim.eval_ternary(in, masks, nets);
    std::string s;
    for (auto id : n.comb_outputs()) {
      const auto t = nets[id];
      s += (t.one & 1u) ? '1' : (t.zero & 1u) ? '0' : 'X';
    }
    outputs.push_back(std::move(s));
  }

  if (ctx.format_or("json") == "csv") {
    std::string csv = "input,output\n";
    for (std::size_t i = 0; i < vectors.size(); ++i) csv += bits(vectors[i]) + "," + outputs[i] + "\n";
    ctx.emit_text(std::move(csv));
    return;
  }
  Json r = ctx.header("sim");
  r["bench"] = o.bench;
  r["input_order"] = names_of(n, n.comb_inputs());
  r["output_order"] = names_of(n, n.comb_outputs());
  if (o.random) r["seed"] = ctx.config.seed;
  Json rows = Json::array();
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    rows.push_back({{"input", bits(vectors[i])}, {"output", outputs[i]}});
  }
  r["rows"] = rows;
  ctx.emit_report(std::move(r));
}

void run_equiv(const EquivOptions& o, Context& ctx) {
  const auto a = load_bench(o.a);
  const auto b = load_bench(o.b);
  const auto ka = load_key(o.key_a);
  const auto kb = load_key(o.key_b);
  const auto mode = o.random ? EquivalenceMode::random(*o.random, ctx.config.seed)
                             : EquivalenceMode::exhaustive();
  const auto v = check_equivalence(a, b, ka ? &*ka : nullptr, kb ? &*kb : nullptr, mode,
                                   ctx.config.jobs);
  Json r = ctx.header("equiv");
  r["a"] = o.a;
  r["b"] = o.b;
  r["mode"] = o.random ? "random" : "exhaustive";
  if (o.random) r["seed"] = ctx.config.seed;
  r["verdict"] = v.equivalent ? "equivalent" : "not_equivalent";
  r["vectors_checked"] = v.vectors_checked;
  if (v.counterexample) r["counterexample"] = bits(*v.counterexample);
  ctx.emit_report(std::move(r));
}

void run_attack(const AttackOptionsCli& o, Context& ctx) {
  const auto camo = load_bench(o.bench);
  const auto truth_net = load_bench(o.oracle);
  const auto oracle_key = load_key(o.oracle_key);
  const auto oracle = make_oracle(truth_net, oracle_key ? &*oracle_key : nullptr);
  if (truth_net.comb_inputs().size() != camo.comb_inputs().size() ||
      truth_net.comb_outputs().size() != camo.comb_outputs().size()) {
    throw Error(ErrorKind::kIncompatibleNetlists, "oracle and camouflaged netlist differ in I/O");
  }
  AttackOptions opt;
  opt.query_budget = o.budget;
  opt.flavor_known = o.flavor_known;
  opt.jobs = ctx.config.jobs;

  AttackReport rep;
  Json r = ctx.header("attack");
  if (o.mode == "brute") {
    PatternSource source;
    if (o.patterns == "exhaustive") {
      source = PatternSource::exhaustive();
    } else if (o.patterns == "random") {
      source = PatternSource::random(ctx.config.seed);
      r["seed"] = ctx.config.seed;
    } else {
      invalid("unknown pattern source '" + o.patterns + "' (exhaustive|random)");
    }
    rep = brute_force_attack(camo, oracle, source, opt);
    r["patterns"] = o.patterns;
  } else if (o.mode == "sense") {
    rep = sensitization_attack(camo, oracle, opt);
  } else {
    invalid("unknown attack mode '" + o.mode + "' (brute|sense)");
  }
  r["bench"] = o.bench;
  r["oracle"] = o.oracle;
  r["mode"] = rep.mode;
  r["status"] = std::string(to_string(rep.status));
  r["query_count"] = rep.query_count;
  if (o.budget) r["query_budget"] = *o.budget;
  r["flavor_known"] = o.flavor_known;
  r["candidate_space_log2_initial"] = rep.candidate_space_log2_initial;
  r["candidate_space_log2_final"] = rep.candidate_space_log2_final;
  r["surviving_assignments"] = rep.surviving_assignments;
  Json resolved = Json::object();
  for (const auto& [gate, set] : rep.resolved) resolved[gate] = function_list(set);
  r["resolved"] = resolved;
  const auto recovered = rep.recovered_key(camo);
  r["recovered_key"] = key_json(recovered);
  r["space_log2_trace"] = rep.space_log2_trace;
  if (!o.truth_key.empty()) {
    const auto truth = parse_key(read_text(o.truth_key));
    bool match = truth.entries.size() == recovered.entries.size();
    for (const auto& [gate, e] : truth.entries) {
      const auto* got = recovered.find(gate);
      match = match && got != nullptr && got->function == e.function;
    }
    r["key_match"] = match;
  }
  if (!o.transcript.empty()) {
    std::string csv = "vector,output\n";
    for (const auto& q : rep.transcript) csv += bits(q.input) + "," + bits(q.output) + "\n";
    ctx.files.add(o.transcript, std::move(csv));
    r["transcript"] = o.transcript;
  }
  if (!o.recovered_key.empty()) {
    ctx.files.add(o.recovered_key, serialize_key(recovered, &camo));
    r["recovered_key_file"] = o.recovered_key;
  }
  ctx.emit_report(std::move(r));
}

void run_sidechannel(const SidechannelOptions& o, Context& ctx) {
  auto netlist = load_bench(o.bench);
  auto key = parse_key(read_text(o.key));
  validate_key(netlist, key);
  if (netlist.camo_gates().empty()) invalid("the netlist has no camouflaged gates");
  Observability observability;
  if (o.observability == "per-gate") {
    observability = Observability::kPerGate;
  } else if (o.observability == "aggregate") {
    observability = Observability::kAggregate;
  } else {
    invalid("unknown observability '" + o.observability + "' (per-gate|aggregate)");
  }
  BiasPolicy bias;
  if (o.bias == "fixed") {
    bias = BiasPolicy::kFixed;
  } else if (o.bias == "compensated") {
    bias = BiasPolicy::kThermalCompensated;
  } else {
    invalid("unknown bias policy '" + o.bias + "' (fixed|compensated)");
  }
  if (!(o.t_low < o.t_high)) invalid("--tlow must be below --thigh");
  if (o.noise_sigma < 0.0) invalid("--noise-sigma must be >= 0");
  if (o.trials == 0) invalid("--trials must be >= 1");

  Json r = ctx.header("sidechannel");
  r["bench"] = o.bench;
  r["observability"] = o.observability;
  r["bias"] = o.bias;
  r["t_low"] = o.t_low;
  r["t_high"] = o.t_high;
  r["noise_sigma"] = o.noise_sigma;
  r["trials"] = o.trials;
  r["seed"] = ctx.config.seed;

  if (o.balance) {
    Json bal = Json::array();
    std::vector<CellFlavor> flavors;
    for (auto g : netlist.camo_gates()) {
      const auto f = netlist.gate(g).flavor;
      if (std::find(flavors.begin(), flavors.end(), f) == flavors.end()) flavors.push_back(f);
    }
    for (auto f : flavors) {
      auto b = balance_flavors(netlist, key, f, ctx.config.costs);
      bal.push_back({{"flavor", std::string(to_string(f))},
                     {"inserted", b.report.insertions.size()},
                     {"area_added", b.report.area_added}});
      netlist = std::move(b.netlist);
      key = std::move(b.key);
    }
    r["balance"] = bal;
  }

  MeasurementSetup setup;
  setup.temperatures = {o.t_low, o.t_high};
  setup.bias = bias;
  setup.observability = observability;
  setup.params = ctx.config.device;
  setup.jobs = ctx.config.jobs;
  const std::size_t width = netlist.comb_inputs().size();
  if (width <= 20 && (std::uint64_t{1} << width) <= o.max_vectors) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << width); ++v) {
      std::vector<bool> x(width);
      for (std::size_t i = 0; i < width; ++i) x[i] = ((v >> i) & 1u) != 0;
      setup.vectors.push_back(std::move(x));
    }
    r["vectors"] = "exhaustive";
  } else {
    std::mt19937_64 rng(ctx.config.seed);
    for (std::uint64_t k = 0; k < o.max_vectors; ++k) {
      std::vector<bool> x(width);
      for (std::size_t i = 0; i < width; ++i) x[i] = (rng() & 1u) != 0;
      setup.vectors.push_back(std::move(x));
    }
    r["vectors"] = "random";
  }
  r["vector_count"] = setup.vectors.size();

  const std::vector<std::size_t> gates(netlist.camo_gates().begin(), netlist.camo_gates().end());
  std::string csv = "gate,vector,t,leakage,delay\n";
  auto dump = [&](const Signature& s) {
    for (const auto& ob : s.observations) {
      std::ostringstream line;
      line << std::setprecision(9) << s.gate << "," << bits(setup.vectors[ob.vector]) << ","
           << ob.t << "," << ob.leakage << "," << ob.delay << "\n";
      csv += line.str();
    }
  };

  if (observability == Observability::kPerGate) {
    const auto signatures = measure_signature(netlist, key, gates, setup);
    std::vector<TemplateSet> templates;
    for (auto g : gates) {
      templates.push_back(build_templates(netlist, key, {g}, setup, netlist.gate(g).flavor));
    }
    Json guesses = Json::array();
    for (std::size_t i = 0; i < gates.size(); ++i) {
      const auto c = classify_function(signatures[i], templates[i],
                                       {o.noise_sigma, ctx.config.seed});
      const auto truth = key.find(netlist.gate(gates[i]).name)->function;
      guesses.push_back({{"gate", signatures[i].gate},
                         {"truth", std::string(to_string(truth))},
                         {"guess", std::string(to_string(c.guess))},
                         {"confidence", c.confidence}});
      dump(signatures[i]);
    }
    r["guesses"] = guesses;
    // Trial i attacks gate i mod |gates| with noise seed + i.
    std::map<std::string, std::map<std::string, std::uint64_t>> confusion;
    std::uint64_t correct = 0;
    for (std::uint64_t i = 0; i < o.trials; ++i) {
      const std::size_t k = i % gates.size();
      const auto c = classify_function(signatures[k], templates[k],
                                       {o.noise_sigma, ctx.config.seed + i});
      const auto truth = key.find(netlist.gate(gates[k]).name)->function;
      ++confusion[std::string(to_string(truth))][std::string(to_string(c.guess))];
      if (c.guess == truth) ++correct;
    }
    r["confusion"] = confusion;
    r["accuracy"] = static_cast<double>(correct) / static_cast<double>(o.trials);
    std::set<CellFlavor> flavors;
    for (auto g : gates) flavors.insert(netlist.gate(g).flavor);
    if (flavors.size() == 1) {
      r["chance"] = 1.0 / static_cast<double>(function_set(*flavors.begin()).size());
    }
  } else {
    const auto flavor = netlist.gate(gates.front()).flavor;
    const auto signature = measure_signature(netlist, key, gates, setup).front();
    const auto templates = build_templates(netlist, key, gates, setup, flavor);
    const auto c = classify_function(signature, templates, {o.noise_sigma, ctx.config.seed});
    dump(signature);
    r["guess"] = std::string(to_string(c.guess));
    r["confidence"] = c.confidence;
    std::map<std::string, std::uint64_t> counts;
    for (auto g : gates) ++counts[std::string(to_string(key.find(netlist.gate(g).name)->function))];
    r["function_counts"] = counts;
    r["accuracy"] = aggregate_accuracy(netlist, key, gates, setup, flavor, o.noise_sigma, o.trials,
                                       ctx.config.seed);
    r["chance"] = 1.0 / static_cast<double>(function_set(flavor).size());
  }
  if (!o.signatures.empty()) {
    ctx.files.add(o.signatures, std::move(csv));
    r["signatures"] = o.signatures;
  }
  ctx.emit_report(std::move(r));
}

void run_sweep(const SweepOptions& o, Context& ctx) {
  const auto rows = sweep_vt_window({o.hvt_lo, o.hvt_hi}, {o.lvt_lo, o.lvt_hi}, o.step,
                                    default_bias(ctx.config.device), o.t, ctx.config.device,
                                    ctx.config.jobs);
  std::string text;
  if (ctx.format_or("csv") == "csv") {
    text = sweep_csv(rows);
  } else {
    Json r = ctx.header("sweep");
    r["t"] = o.t;
    r["step"] = o.step;
    Json a = Json::array();
    for (const auto& row : rows) {
      a.push_back({{"delta_hvt", row.delta_hvt},
                   {"delta_lvt", row.delta_lvt},
                   {"ratio", row.ratio},
                   {"delay_s", row.delay_s}});
    }
    r["rows"] = a;
    r["config"] = ctx.config.to_json();
    text = r.dump(2) + "\n";
  }
  if (o.out.empty()) {
    ctx.emit_text(std::move(text));
  } else {
    ctx.files.add(o.out, std::move(text));
  }
}

void run_bias_opt(const BiasOptOptions& o, Context& ctx) {
  const auto opt = optimize_bias(ctx.config.device, o.window, o.step, ctx.config.jobs);
  Json r = ctx.header("bias-opt");
  r["window"] = o.window;
  r["step"] = o.step;
  r["vg_n"] = opt.bias.vg_n;
  r["vg_p"] = opt.bias.vg_p;
  r["delta_hvt"] = opt.delta_hvt;
  r["delta_lvt"] = opt.delta_lvt;
  r["delay_default_s"] = opt.delay_default;
  r["delay_opt_s"] = opt.delay_opt;
  r["delay_gain"] = opt.delay_gain;
  r["points_evaluated"] = opt.points_evaluated;
  r["points_rejected"] = opt.points_rejected;
  ctx.emit_report(std::move(r));
}

void run_estimate(const EstimateOptions& o, Context& ctx) {
  const auto e = effort_estimate(o.n, o.k, o.f, o.freq);
  Json r = ctx.header("estimate");
  r["n_inputs"] = o.n;
  r["k_camo"] = o.k;
  r["functions_per_gate"] = o.f;
  r["test_frequency_hz"] = o.freq;
  r["pattern_count"] = e.pattern_count.str();
  r["candidate_count"] = e.candidate_count.str();
  r["seconds"] = scientific(e.seconds);
  r["seconds_retest"] = scientific(e.seconds_retest);
  r["human_readable"] = e.human_readable;
  r["note"] = e.note;
  ctx.emit_report(std::move(r));
}

void run_report(const ReportOptions& o, Context& ctx) {
  const auto n = load_bench(o.bench);
  const CamoKey key = load_key(o.key).value_or(CamoKey{});
  const auto model = delay_model(o.delay_model, ctx.config);
  const auto rep = overhead_report(n, key, ctx.config.costs, model);
  const auto path = critical_path(n, &key, camo_delay_model(model, ctx.config.costs));
  Json r = ctx.header("report");
  r["bench"] = o.bench;
  r["delay_model"] = o.delay_model;
  r["gates"] = n.gates().size();
  r["overhead"] = overhead_json(rep);
  Json per_gate = Json::array();
  for (const auto& g : rep.per_gate) {
    per_gate.push_back({{"gate", g.gate},
                        {"flavor", std::string(to_string(g.flavor))},
                        {"area_multiple", g.cost.area_multiple},
                        {"power_multiple", g.cost.power_multiple},
                        {"delay_multiple", g.cost.delay_multiple}});
  }
  r["per_gate"] = per_gate;
  Json names = Json::array();
  for (auto g : path.gates) names.push_back(n.gate(g).name);
  r["critical_path"] = names;
  r["critical_delay"] = path.delay;
  ctx.emit_report(std::move(r));
}

}  // namespace vtcamo::cli
