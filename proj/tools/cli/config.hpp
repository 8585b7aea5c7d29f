// Copyright 2026 The vtcamo Authors
#ifndef VTCAMO_CLI_CONFIG_HPP_
#define VTCAMO_CLI_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "vtcamo/camouflage.hpp"
#include "vtcamo/device_model.hpp"

namespace vtcamo::cli {

// Settings shared by every subcommand. Grammar of the config file:
//
//   line    := blank | comment | key '=' value [comment]
//   comment := '#' anything
//
// Keys:
//   device.<field>           any DeviceParams field, e.g. device.kvt=1.2e-3
//   cost.<flavor>.<metric>   flavor camo8|cmos3a|cmos3b, metric area|power|delay
//   seed                     unsigned 64-bit
//   jobs                     worker threads, >= 1
//   format                   json|csv
//   report                   report path; empty writes to standard output
//
// Unknown keys, repeated keys and unparsable values are kInvalidConfig.
struct RunConfig {
  DeviceParams device;
  CostTable costs = CostTable::defaults();
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::optional<std::string> format;
  std::string report;

  static RunConfig defaults();

  void set(std::string_view key, std::string_view value);
  // Checks device and cost invariants.
  void validate() const;
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

// Applies every assignment in `text` on top of `config`.
void apply_config_text(RunConfig& config, std::string_view text);

}  // namespace vtcamo::cli

#endif  // VTCAMO_CLI_CONFIG_HPP_
