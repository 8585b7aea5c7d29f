// Copyright 2026 The vtcamo Authors
#ifndef VTCAMO_CAMOUFLAGE_HPP_
#define VTCAMO_CAMOUFLAGE_HPP_

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vtcamo/camo_cell.hpp"
#include "vtcamo/device_model.hpp"
#include "vtcamo/netlist.hpp"

namespace vtcamo {

// Cost of one camouflaged cell relative to a reference 2-input NAND.
struct CostEntry {
  double area_multiple = 1.0;
  double power_multiple = 1.0;
  double delay_multiple = 1.0;
};

struct CostTable {
  std::map<CellFlavor, CostEntry> entries;

  // CAMO8 = (4, 4, 2), CMOS3A/B = (2, 2, 1.5).
  static CostTable defaults();
  // Throws kInvalidConfig when the flavor has no entry.
  [[nodiscard]] const CostEntry& at(CellFlavor flavor) const;
  // Throws kInvalidConfig when any multiple is below 1 or non-finite.
  void validate() const;
};

struct CamouflageResult {
  Netlist netlist;
  CamoKey key;
};

struct CamouflageOptions {
  // When set, INV/BUF decoys are drawn uniformly from the legal candidates
  // instead of the nearest-level rule.
  std::optional<std::uint64_t> decoy_seed;
};

// Replaces the selected gates (by index) with placeholders of `flavor` and
// returns the secret key. INV/BUF gates gain a decoy net on pin 1.
CamouflageResult apply_camouflage(const Netlist& netlist, std::span<const std::size_t> gates,
                                  CellFlavor flavor, const CamouflageOptions& options = {});

// Whether a plain gate can be turned into a `flavor` placeholder.
bool camouflageable(const Netlist& netlist, std::size_t gate, CellFlavor flavor);

enum class Strategy { kRandom, kXorSequence, kOffCritical, kGreedyEffort };

std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

struct SelectionPolicy {
  Strategy strategy = Strategy::kRandom;
  std::uint64_t seed = 0;
  double budget = 0.01;        // max fraction of gates
  double delay_budget = 0.03;  // max fractional critical-path increase
  CellFlavor flavor = CellFlavor::kCamo8;
  double lambda = 1.0;         // overhead weight for kGreedyEffort

  void validate() const;
};

// Candidates are visited in the strategy's preference order; one is kept
// only while the projected critical-path increase stays within
// delay_budget. Result is sorted by gate index.
std::vector<std::size_t> select_gates(const Netlist& netlist, const SelectionPolicy& policy,
                                      const CostTable& costs, const DelayModel& base_delay);

// Camouflaged gates take base delay times the flavor's delay multiple.
DelayModel camo_delay_model(DelayModel base, const CostTable& costs);
// Camouflaged gates take base delay times the modeled worst-case cell delay
// over a reference NVT NAND2 at the same load.
DelayModel device_delay_model(DelayModel base, const DeviceParams& params);

struct GateOverhead {
  std::string gate;
  CellFlavor flavor = CellFlavor::kCamo8;
  GateFunction function = GateFunction::kNand;
  CostEntry cost;
};

struct OverheadReport {
  double area_pct = 0.0;
  double power_pct = 0.0;
  double delay_pct = 0.0;
  double gate_equivalents = 0.0;
  double delay_plain = 0.0;
  double delay_camo = 0.0;
  std::vector<GateOverhead> per_gate;
  CostTable table;
};

// area/power: sum over camouflaged gates of (multiple - 1), over the gate
// count. delay: critical path with and without the delay multiples.
OverheadReport overhead_report(const Netlist& netlist, const CamoKey& key, const CostTable& costs,
                               const DelayModel& base_delay);

using BigInt = boost::multiprecision::cpp_int;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

struct EffortEstimate {
  BigInt pattern_count;       // 2^n_inputs
  BigInt candidate_count;     // functions_per_gate^k_camo
  BigFloat seconds;           // pattern_count / f
  BigFloat seconds_retest;    // pattern_count * candidate_count / f
  std::string human_readable;
  std::string note;
};

EffortEstimate effort_estimate(std::uint64_t n_inputs, std::uint64_t k_camo,
                               std::uint64_t functions_per_gate, double test_frequency_hz);

// "1.1259e+06 s (13.0 days)"
std::string format_duration(const BigFloat& seconds);

}  // namespace vtcamo

#endif  // VTCAMO_CAMOUFLAGE_HPP_
