// Copyright 2026 The vtcamo Authors
#ifndef VTCAMO_CLI_COMMANDS_HPP_
#define VTCAMO_CLI_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli/config.hpp"
#include "cli/output.hpp"

namespace vtcamo::cli {

inline constexpr const char* kVersion = "0.1.0";

// Per-invocation state: resolved config and the outputs waiting for commit.
struct Context {
  RunConfig config;
  bool timestamp = true;
  PendingFiles files;
  std::string stdout_text;

  // JSON report skeleton with the command name and optional timestamp.
  [[nodiscard]] nlohmann::ordered_json header(const std::string& command) const;
  // Appends the resolved config and routes the report to `report` or stdout.
  void emit_report(nlohmann::ordered_json report);
  void emit_text(std::string text);
  [[nodiscard]] std::string format_or(const std::string& fallback) const {
    return config.format.value_or(fallback);
  }
};

struct ParseOptions {
  std::string bench;
  std::string key;
  std::string out;
};

struct LockOptions {
  std::string bench;
  std::string flavor = "camo8";
  std::string strategy = "random";
  double budget = 0.01;
  double delay_budget = 0.03;
  double lambda = 1.0;
  std::vector<std::string> gates;
  std::optional<std::uint64_t> decoy_seed;
  std::string out;
  std::string key;
};

struct SimOptions {
  std::string bench;
  std::string key;
  std::vector<std::string> vectors;
  bool all = false;
  std::optional<std::uint64_t> random;
};

struct EquivOptions {
  std::string a;
  std::string b;
  std::string key_a;
  std::string key_b;
  std::optional<std::uint64_t> random;
};

struct AttackOptionsCli {
  std::string bench;
  std::string oracle;
  std::string oracle_key;
  std::string mode = "sense";
  std::string patterns = "exhaustive";
  std::optional<std::uint64_t> budget;
  bool flavor_known = false;
  std::string transcript;
  std::string recovered_key;
  std::string truth_key;
};

struct SidechannelOptions {
  std::string bench;
  std::string key;
  double t_low = 300.0;
  double t_high = 375.0;
  std::string observability = "per-gate";
  std::string bias = "fixed";
  double noise_sigma = 0.0;
  std::uint64_t trials = 1000;
  std::uint64_t max_vectors = 256;
  bool balance = false;
  std::string signatures;
};

struct SweepOptions {
  double hvt_lo = 0.15;
  double hvt_hi = 0.55;
  double lvt_lo = 0.15;
  double lvt_hi = 0.55;
  double step = 0.05;
  double t = 300.0;
  std::string out;
};

struct BiasOptOptions {
  double window = 0.1;
  double step = 0.05;
};

struct EstimateOptions {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  std::uint64_t f = 8;
  double freq = 1e9;
};

struct ReportOptions {
  std::string bench;
  std::string key;
  std::string delay_model = "unit";
};

void run_parse(const ParseOptions& o, Context& ctx);
void run_lock(const LockOptions& o, Context& ctx);
void run_sim(const SimOptions& o, Context& ctx);
void run_equiv(const EquivOptions& o, Context& ctx);
void run_attack(const AttackOptionsCli& o, Context& ctx);
void run_sidechannel(const SidechannelOptions& o, Context& ctx);
void run_sweep(const SweepOptions& o, Context& ctx);
void run_bias_opt(const BiasOptOptions& o, Context& ctx);
void run_estimate(const EstimateOptions& o, Context& ctx);
void run_report(const ReportOptions& o, Context& ctx);

}  // namespace vtcamo::cli

#endif  // VTCAMO_CLI_COMMANDS_HPP_
