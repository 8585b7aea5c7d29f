// Copyright 2026 The vtcamo Authors
#include "cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <thread>
#include <utility>

#include "vtcamo/error.hpp"

namespace vtcamo::cli {
namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::kInvalidConfig, msg); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view key, std::string_view value) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v)) {
    bad("'" + std::string(key) + "' expects a number, got '" + std::string(value) + "'");
  }
  return v;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    bad("'" + std::string(key) + "' expects an unsigned integer, got '" + std::string(value) + "'");
  }
  return v;
}

using DeviceField = double DeviceParams::*;

const std::vector<std::pair<std::string, DeviceField>>& device_fields() {
  static const std::vector<std::pair<std::string, DeviceField>> fields = {
      {"vdd", &DeviceParams::vdd},
      {"vtn0", &DeviceParams::vtn0},
      {"vtp0_mag", &DeviceParams::vtp0_mag},
      {"delta_hvt", &DeviceParams::delta_hvt},
      {"delta_lvt", &DeviceParams::delta_lvt},
      {"subthreshold_slope_n", &DeviceParams::subthreshold_slope_n},
      {"kprime_n", &DeviceParams::kprime_n},
      {"kprime_p", &DeviceParams::kprime_p},
      {"w_over_l", &DeviceParams::w_over_l},
      {"kvt", &DeviceParams::kvt},
      {"t_ref", &DeviceParams::t_ref},
      {"c_load", &DeviceParams::c_load},
  };
  return fields;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.jobs = std::max(1u, std::thread::hardware_concurrency());
  return c;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key.starts_with("device.")) {
    const auto field = key.substr(7);
    for (const auto& [name, member] : device_fields()) {
      if (field == name) {
        device.*member = to_double(key, value);
        return;
      }
    }
  } else if (key.starts_with("cost.")) {
    const auto rest = key.substr(5);
    const auto dot = rest.find('.');
    if (dot != std::string_view::npos) {
      const auto flavor = parse_flavor(rest.substr(0, dot));
      const auto metric = rest.substr(dot + 1);
      if (flavor && lower(rest.substr(0, dot)) == rest.substr(0, dot)) {
        CostEntry& e = costs.entries[*flavor];
        if (metric == "area") {
          e.area_multiple = to_double(key, value);
          return;
        }
        if (metric == "power") {
          e.power_multiple = to_double(key, value);
          return;
        }
        if (metric == "delay") {
          e.delay_multiple = to_double(key, value);
          return;
        }
      }
    }
  } else if (key == "seed") {
    seed = to_unsigned(key, value);
    return;
  } else if (key == "jobs") {
    const auto j = to_unsigned(key, value);
    if (j == 0 || j > 4096) bad("'jobs' must lie in [1, 4096]");
    jobs = static_cast<unsigned>(j);
    return;
  } else if (key == "format") {
    if (value != "json" && value != "csv") bad("'format' must be json or csv");
    format = std::string(value);
    return;
  } else if (key == "report") {
    report = std::string(value);
    return;
  }
  bad("unknown config key '" + std::string(key) + "'");
}

void RunConfig::validate() const {
  try {
    device.validate();
  } catch (const Error& e) {
    bad(std::string("device parameters: ") + e.what());
  }
  costs.validate();
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  for (const auto& [name, member] : device_fields()) j["device." + name] = device.*member;
  for (const auto& [flavor, e] : costs.entries) {
    const auto f = lower(to_string(flavor));
    j["cost." + f + ".area"] = e.area_multiple;
    j["cost." + f + ".power"] = e.power_multiple;
    j["cost." + f + ".delay"] = e.delay_multiple;
  }
  j["seed"] = seed;
  j["jobs"] = jobs;
  j["format"] = format.value_or("json");
  j["report"] = report;
  return j;
}

void apply_config_text(RunConfig& config, std::string_view text) {
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    auto line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      bad("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) bad("config line " + std::to_string(line_no) + ": empty key");
    if (!seen.emplace(key).second) {
      bad("config line " + std::to_string(line_no) + ": repeated key '" + std::string(key) + "'");
    }
    try {
      config.set(key, line.substr(eq + 1));
    } catch (const Error& e) {
      bad("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace vtcamo::cli
