// Copyright 2026 The vtcamo Authors
#ifndef VTCAMO_SIDECHANNEL_HPP_
#define VTCAMO_SIDECHANNEL_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vtcamo/camo_cell.hpp"
#include "vtcamo/camouflage.hpp"
#include "vtcamo/device_model.hpp"
#include "vtcamo/netlist.hpp"

namespace vtcamo {

inline constexpr double kMinTemperature = 200.0;  // K
inline constexpr double kMaxTemperature = 400.0;  // K

struct CompensatedBias {
  BiasPoint bias;
  bool clamped = false;  // a gate voltage hit 0 or vdd
};

// Shifts both switch gate voltages by kvt (t - t_ref) so every OFF switch
// keeps the overdrive it has at t_ref.
CompensatedBias thermal_compensated_bias(double t, const DeviceParams& params);

enum class BiasPolicy { kFixed, kThermalCompensated };
enum class Observability { kPerGate, kAggregate };

std::string_view to_string(BiasPolicy p);
std::string_view to_string(Observability o);

BiasPoint bias_for(BiasPolicy policy, double t, const DeviceParams& params);

struct Observation {
  std::size_t vector = 0;  // index into the measured vector list
  double t = 0.0;
  double leakage = 0.0;    // A
  double delay = 0.0;      // s
};

struct Signature {
  std::string gate;  // "*" for aggregate signatures
  Observability observability = Observability::kPerGate;
  std::vector<Observation> observations;  // vector-major, then temperature
};

struct MeasurementSetup {
  std::vector<std::vector<bool>> vectors;  // combinational input vectors
  std::vector<double> temperatures;
  BiasPolicy bias = BiasPolicy::kFixed;
  Observability observability = Observability::kPerGate;
  DeviceParams params;
  unsigned jobs = 1;
};

// Per-gate: one signature per gate. Aggregate: a single signature whose
// leakage is summed and whose delay is the maximum over the gates.
std::vector<Signature> measure_signature(const Netlist& netlist, const CamoKey& key,
                                         const std::vector<std::size_t>& gates,
                                         const MeasurementSetup& setup);

// Local pin pattern of each gate for each vector under `key`.
std::vector<std::vector<unsigned>> local_patterns(const Netlist& netlist, const CamoKey& key,
                                                  const std::vector<std::size_t>& gates,
                                                  const std::vector<std::vector<bool>>& vectors);

// Reference signatures, one per function of the flavor, measured on the
// same vectors, temperatures and local patterns as the target.
struct TemplateSet {
  CellFlavor flavor = CellFlavor::kCamo8;
  std::map<GateFunction, Signature> by_function;
};

// Templates for one gate (per-gate) or for the whole gate list with every
// cell set to the same function (aggregate). The attacker is assumed to
// know the local input patterns.
TemplateSet build_templates(const Netlist& netlist, const CamoKey& key,
                            const std::vector<std::size_t>& gates, const MeasurementSetup& setup,
                            CellFlavor flavor);

struct NoiseModel {
  double sigma = 0.0;  // on natural-log leakage and natural-log delay
  std::uint64_t seed = 0;
};

struct Classification {
  GateFunction guess = GateFunction::kNand;
  double confidence = 0.0;  // softmax margin between the two best templates
  std::map<GateFunction, double> distance;
};

// Nearest template in (ln leakage, ln delay, ln thermal ratio) space, each
// feature scaled by its spread across the templates.
Classification classify_function(const Signature& signature, const TemplateSet& templates,
                                 const NoiseModel& noise = {});

// Fraction of correct guesses over `trials` noisy measurements of the gates
// (trial i targets gate i mod |gates| and uses seed + i).
double per_gate_accuracy(const Netlist& netlist, const CamoKey& key,
                         const std::vector<std::size_t>& gates, const MeasurementSetup& setup,
                         CellFlavor flavor, double sigma, std::uint64_t trials, std::uint64_t seed);

// The aggregate attacker only learns the dominant function of the chip and
// assigns it to every gate; a trial scores the share of gates it gets right.
double aggregate_accuracy(const Netlist& netlist, const CamoKey& key,
                          const std::vector<std::size_t>& gates, const MeasurementSetup& setup,
                          CellFlavor flavor, double sigma, std::uint64_t trials,
                          std::uint64_t seed);

struct BalanceInsertion {
  std::string gate;
  GateFunction function = GateFunction::kNand;
  std::vector<std::string> fanins;
};

struct BalanceReport {
  std::vector<BalanceInsertion> insertions;
  std::map<GateFunction, std::size_t> counts_before;
  std::map<GateFunction, std::size_t> counts_after;
  double area_added = 0.0;  // reference-NAND equivalents
};

struct BalanceResult {
  Netlist netlist;
  CamoKey key;
  BalanceReport report;
};

// Adds sink-terminated cells of `flavor` (named __bal_<i>) tapping existing
// nets until every function of the flavor appears equally often.
BalanceResult balance_flavors(const Netlist& netlist, const CamoKey& key, CellFlavor flavor,
                              const CostTable& costs = CostTable::defaults());

struct ThermalSensitivity {
  double fixed = 0.0;        // geometric mean of I(t_hi) / I(t_lo)
  double compensated = 0.0;
  double reduction = 0.0;    // fixed / compensated
  double fixed_total = 0.0;  // same, on total cell leakage
  double compensated_total = 0.0;
};

// Switch-leakage temperature sensitivity over every CAMO8 program and local
// pattern.
ThermalSensitivity thermal_sensitivity(double t_lo, double t_hi, const DeviceParams& params);

}  // namespace vtcamo

#endif  // VTCAMO_SIDECHANNEL_HPP_
