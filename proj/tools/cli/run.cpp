// Copyright 2026 The vtcamo Authors
#include "cli/run.hpp"

#include <CLI11.hpp>

#include <functional>

#include <nlohmann/json.hpp>

#include "cli/commands.hpp"
#include "vtcamo/error.hpp"

namespace vtcamo::cli {
namespace {

struct GlobalOptions {
  std::string config_path;
  std::vector<std::string> assignments;
  std::optional<unsigned> jobs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  std::optional<std::string> report;
  bool no_timestamp = false;
};

void error_json(std::ostream& err, const std::string& kind, const std::string& message,
                const SyntaxError* syntax = nullptr) {
  nlohmann::ordered_json j;
  j["error"]["kind"] = kind;
  j["error"]["message"] = message;
  if (syntax != nullptr) {
    j["error"]["line"] = syntax->line();
    j["error"]["column"] = syntax->column();
  }
  err << j.dump() << "\n";
}

void add_globals(CLI::App& app, GlobalOptions& g) {
  app.add_option("--config", g.config_path, "Flat key=value config file")
      ->check(CLI::ExistingFile);
  app.add_option("--set", g.assignments, "Config override KEY=VALUE (repeatable)");
  app.add_option("--jobs", g.jobs, "Worker threads (default: hardware threads)")
      ->check(CLI::Range(1u, 4096u));
  app.add_option("--seed", g.seed, "Seed for every random choice");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--report", g.report, "Write the report to this file instead of stdout");
  app.add_flag("--no-timestamp", g.no_timestamp, "Omit generated_at so reruns are byte-identical");
}

RunConfig resolve(const GlobalOptions& g) {
  RunConfig c = RunConfig::defaults();
  if (!g.config_path.empty()) apply_config_text(c, read_text(g.config_path));
  for (const auto& a : g.assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kInvalidConfig, "--set expects KEY=VALUE, got '" + a + "'");
    }
    c.set(a.substr(0, eq), a.substr(eq + 1));
  }
  if (g.jobs) c.jobs = *g.jobs;
  if (g.seed) c.seed = *g.seed;
  if (g.format) c.format = *g.format;
  if (g.report) c.report = *g.report;
  c.validate();
  return c;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Threshold-voltage camouflaging toolkit: lock, simulate, attack and measure "
               "camouflaged netlists."};
  app.name("vtcamo");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);
  GlobalOptions globals;
  add_globals(app, globals);

  std::function<void(Context&)> action;
  auto sub = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    s->footer(
        "Global options (--config, --set, --jobs, --seed, --format, --report, --no-timestamp) "
        "may appear before or after the subcommand.");
    return s;
  };

  ParseOptions parse;
  auto* c_parse = sub("parse", "Parse a bench file and summarize it");
  c_parse->add_option("bench", parse.bench, "Bench file")->required()->check(CLI::ExistingFile);
  c_parse->add_option("--key", parse.key, "Key file to validate against the netlist");
  c_parse->add_option("--out", parse.out, "Write the normalized bench here");
  c_parse->callback([&] { action = [&](Context& c) { run_parse(parse, c); }; });

  LockOptions lock;
  auto* c_lock = sub("lock", "Camouflage selected gates and write the locked bench and key");
  c_lock->add_option("bench", lock.bench, "Bench file")->required()->check(CLI::ExistingFile);
  c_lock->add_option("--flavor", lock.flavor, "camo8|cmos3a|cmos3b")->capture_default_str();
  c_lock->add_option("--strategy", lock.strategy, "random|xor-seq|off-critical|greedy")
      ->capture_default_str();
  c_lock->add_option("--budget", lock.budget, "Max fraction of gates")->capture_default_str();
  c_lock->add_option("--delay-budget", lock.delay_budget, "Max critical-path increase")
      ->capture_default_str();
  c_lock->add_option("--lambda", lock.lambda, "Overhead weight of the greedy strategy")
      ->capture_default_str();
  c_lock->add_option("--gates", lock.gates, "Explicit gate names (skips selection)")
      ->delimiter(',');
  c_lock->add_option("--decoy-seed", lock.decoy_seed, "Draw INV/BUF decoys at random");
  c_lock->add_option("--out", lock.out, "Locked bench output")->required();
  c_lock->add_option("--key", lock.key, "Key file output")->required();
  c_lock->callback([&] { action = [&](Context& c) { run_lock(lock, c); }; });

  SimOptions sim;
  auto* c_sim = sub("sim", "Simulate input vectors (X marks outputs a missing key leaves open)");
  c_sim->add_option("bench", sim.bench, "Bench file")->required()->check(CLI::ExistingFile);
  c_sim->add_option("--key", sim.key, "Key file");
  c_sim->add_option("--vector", sim.vectors, "Input bits in combinational input order");
  c_sim->add_flag("--all", sim.all, "Every input vector (up to 20 inputs)");
  c_sim->add_option("--random", sim.random, "Number of seeded random vectors");
  c_sim->callback([&] { action = [&](Context& c) { run_sim(sim, c); }; });

  EquivOptions equiv;
  auto* c_equiv = sub("equiv", "Check two netlists for functional equivalence");
  c_equiv->add_option("a", equiv.a, "First bench")->required()->check(CLI::ExistingFile);
  c_equiv->add_option("b", equiv.b, "Second bench")->required()->check(CLI::ExistingFile);
  c_equiv->add_option("--key-a", equiv.key_a, "Key for the first bench");
  c_equiv->add_option("--key-b", equiv.key_b, "Key for the second bench");
  c_equiv->add_option("--random", equiv.random, "Check N seeded random vectors instead");
  c_equiv->callback([&] { action = [&](Context& c) { run_equiv(equiv, c); }; });

  AttackOptionsCli attack;
  auto* c_attack = sub("attack", "Recover a key with oracle queries");
  c_attack->add_option("bench", attack.bench, "Camouflaged bench")
      ->required()
      ->check(CLI::ExistingFile);
  c_attack->add_option("--oracle", attack.oracle, "Working netlist used as the oracle")
      ->required()
      ->check(CLI::ExistingFile);
  c_attack->add_option("--oracle-key", attack.oracle_key, "Key when the oracle bench is camouflaged");
  c_attack->add_option("--mode", attack.mode, "brute|sense")->capture_default_str();
  c_attack->add_option("--patterns", attack.patterns, "Brute-force patterns: exhaustive|random")
      ->capture_default_str();
  c_attack->add_option("--budget", attack.budget, "Max oracle queries");
  c_attack->add_flag("--flavor-known", attack.flavor_known, "Restrict candidates to the flavor");
  c_attack->add_option("--transcript", attack.transcript, "Write queries as CSV");
  c_attack->add_option("--recovered-key", attack.recovered_key, "Write the recovered key");
  c_attack->add_option("--truth-key", attack.truth_key, "Compare against this key");
  c_attack->callback([&] { action = [&](Context& c) { run_attack(attack, c); }; });

  SidechannelOptions sc;
  auto* c_sc = sub("sidechannel", "Temperature-driven template attack on leakage and delay");
  c_sc->add_option("bench", sc.bench, "Camouflaged bench")->required()->check(CLI::ExistingFile);
  c_sc->add_option("--key", sc.key, "True key (the chip under test)")
      ->required()
      ->check(CLI::ExistingFile);
  c_sc->add_option("--tlow", sc.t_low, "Cold temperature in K")->capture_default_str();
  c_sc->add_option("--thigh", sc.t_high, "Hot temperature in K")->capture_default_str();
  c_sc->add_option("--observability", sc.observability, "per-gate|aggregate")
      ->capture_default_str();
  c_sc->add_option("--bias", sc.bias, "fixed|compensated")->capture_default_str();
  c_sc->add_option("--noise-sigma", sc.noise_sigma, "Gaussian sigma on log observables")
      ->capture_default_str();
  c_sc->add_option("--trials", sc.trials, "Monte Carlo trials")->capture_default_str();
  c_sc->add_option("--max-vectors", sc.max_vectors, "Vector cap before random sampling")
      ->capture_default_str();
  c_sc->add_flag("--balance", sc.balance, "Insert flavor-balancing cells first");
  c_sc->add_option("--signatures", sc.signatures, "Write signatures as CSV");
  c_sc->callback([&] { action = [&](Context& c) { run_sidechannel(sc, c); }; });

  SweepOptions sweep;
  std::vector<double> hvt{sweep.hvt_lo, sweep.hvt_hi};
  std::vector<double> lvt{sweep.lvt_lo, sweep.lvt_hi};
  auto* c_sweep = sub("sweep", "ION/IOFF and delay over a VT offset window (CSV by default)");
  c_sweep->add_option("--hvt", hvt, "HVT offset range LO:HI in V")
      ->expected(2)
      ->delimiter(':')
      ->capture_default_str();
  c_sweep->add_option("--lvt", lvt, "LVT offset range LO:HI in V")
      ->expected(2)
      ->delimiter(':')
      ->capture_default_str();
  c_sweep->add_option("--step", sweep.step, "Grid step in V")->capture_default_str();
  c_sweep->add_option("--t", sweep.t, "Temperature in K")->capture_default_str();
  c_sweep->add_option("--out", sweep.out, "Write the table here");
  c_sweep->callback([&] {
    sweep.hvt_lo = hvt[0];
    sweep.hvt_hi = hvt[1];
    sweep.lvt_lo = lvt[0];
    sweep.lvt_hi = lvt[1];
    action = [&](Context& c) { run_sweep(sweep, c); };
  });

  BiasOptOptions bias;
  auto* c_bias = sub("bias-opt", "Grid search over switch biases and VT offsets");
  c_bias->add_option("--window", bias.window, "Search half-width in V (max 0.2)")
      ->capture_default_str();
  c_bias->add_option("--step", bias.step, "Grid step in V")->capture_default_str();
  c_bias->callback([&] { action = [&](Context& c) { run_bias_opt(bias, c); }; });

  EstimateOptions est;
  auto* c_est = sub("estimate", "Reverse-engineering effort for n inputs and k camouflaged gates");
  c_est->add_option("-n,--inputs", est.n, "Primary inputs")->required();
  c_est->add_option("-k,--camo", est.k, "Camouflaged gates")->required();
  c_est->add_option("-f,--functions", est.f, "Functions per gate")->capture_default_str();
  c_est->add_option("--freq", est.freq, "Test frequency in Hz")->capture_default_str();
  c_est->callback([&] { action = [&](Context& c) { run_estimate(est, c); }; });

  ReportOptions rep;
  auto* c_rep = sub("report", "Area, power and delay overhead of a camouflaged netlist");
  c_rep->add_option("bench", rep.bench, "Camouflaged bench")->required()->check(CLI::ExistingFile);
  c_rep->add_option("--key", rep.key, "Key file (needed when the bench has camouflaged gates)");
  c_rep->add_option("--delay-model", rep.delay_model, "unit|device")->capture_default_str();
  c_rep->callback([&] { action = [&](Context& c) { run_report(rep, c); }; });

  std::vector<const char*> argv{"vtcamo"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (const auto* s : app.get_subcommands()) target = s;
    out << target->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    error_json(err, "usage", e.what());
    return kExitUsage;
  }

  Context ctx;
  try {
    ctx.config = resolve(globals);
    ctx.timestamp = !globals.no_timestamp;
    action(ctx);
    ctx.files.commit();
  } catch (const SyntaxError& e) {
    error_json(err, std::string(to_string(e.kind())), e.what(), &e);
    return kExitDomainError;
  } catch (const Error& e) {
    error_json(err, std::string(to_string(e.kind())), e.what());
    return kExitDomainError;
  } catch (const std::exception& e) {
    error_json(err, "internal", e.what());
    return kExitDomainError;
  }
  out << ctx.stdout_text;
  return kExitOk;
}

}  // namespace vtcamo::cli
