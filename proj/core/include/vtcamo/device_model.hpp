// Copyright 2026 The vtcamo Authors
#ifndef VTCAMO_DEVICE_MODEL_HPP_
#define VTCAMO_DEVICE_MODEL_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vtcamo/camo_cell.hpp"

namespace vtcamo {

// Constants of the analytical transistor/switch model. The defaults are a
// calibration at a 1 V supply, not a foundry characterization.
struct DeviceParams {
  double vdd = 1.0;                   // V
  double vtn0 = 0.3;                  // V, nominal NMOS threshold
  double vtp0_mag = 0.3;              // V, |nominal PMOS threshold|
  double delta_hvt = 0.35;            // V above nominal
  double delta_lvt = 0.35;            // V below nominal
  double subthreshold_slope_n = 1.3;
  double kprime_n = 300e-6;           // A/V^2
  double kprime_p = 300e-6;           // A/V^2; switches are sized for matched drive
  double w_over_l = 2.0;
  double kvt = 1.2e-3;                // V/K
  double t_ref = 300.0;               // K
  double c_load = 1e-15;              // F

  // Throws kInvalidParameter when any invariant is violated.
  void validate() const;
};

struct BiasPoint {
  double vg_n = 0.0;
  double vg_p = 0.0;
};

// Switch gates sit at the midpoint of the nominal threshold magnitudes:
// vg_n = (vtn0 + |vtp0|) / 2 and vg_p = vdd - (vtn0 + |vtp0|) / 2.
BiasPoint default_bias(const DeviceParams& params);

enum class Carrier { kN, kP };

// kT/q in volts.
double thermal_voltage(double t);

// Single-piece inversion-charge model:
//   I = Is * [F((vgs - vt) / (2 n phi)) - F((vgs - vt - n vds) / (2 n phi))]
//   F(x) = ln^2(1 + e^x),  Is = 2 n beta phi^2,
//   beta = k' W/L (t / t_ref)^-1.5.
// P devices take source-referred magnitudes (vsg, vsd, |vt|).
double drain_current(double vgs, double vds, double vt, double t, const DeviceParams& params,
                     Carrier carrier = Carrier::kN);

// vt(t) = vt_nominal - kvt (t - t_ref)
double vt_at_temperature(double vt_nominal, double t, const DeviceParams& params);

struct SwitchRatio {
  double ratio = 1.0;
  double i_on = 0.0;
  double i_off = 0.0;
  bool off_underflow = false;  // ratio is +inf
};

// ION/IOFF of the N switch: LVT device on, HVT device off, both at bias.vg_n.
SwitchRatio switch_ratio(double delta_hvt, double delta_lvt, const BiasPoint& bias, double t,
                         const DeviceParams& params);

// ---------------------------------------------------------------------------
// Cell-level estimates
// ---------------------------------------------------------------------------

enum class Contention { kModeled, kIgnored };

inline constexpr double kContentionFloor = 1e-12;  // A

struct DelayEstimate {
  double seconds = 0.0;
  double i_on = 0.0;          // driving stage in series with the open output gate
  double i_contention = 0.0;  // leakage of OFF switches driving the opposite level
  double i_eff = 0.0;
  bool clamped = false;       // i_eff was raised to kContentionFloor
};

// delay = c_load * vdd_actual / (2 * (I_on - sum I_off)). Switch gate biases
// stay at their absolute values when the supply moves. Throws
// kContentionCollapse when OFF leakage overwhelms the ON path.
DelayEstimate gate_delay_estimate(const CamoConfig& config, unsigned pattern,
                                  const BiasPoint& bias, double vdd_actual, double t,
                                  const DeviceParams& params,
                                  Contention contention = Contention::kModeled);

// Slowest delay over every CAMO8 function and local input pattern.
double worst_case_delay(const BiasPoint& bias, double vdd_actual, double t,
                        const DeviceParams& params);

struct Leakage {
  double functional = 0.0;  // OFF NVT transistors of the powered core and output inverter
  double switches = 0.0;    // OFF HVT switches, including power-gated cores
  [[nodiscard]] double total() const { return functional + switches; }
};

// Static leakage of a programmed cell at the given pins, supply params.vdd.
Leakage gate_leakage(const CamoConfig& config, unsigned pattern, double t, const BiasPoint& bias,
                     const DeviceParams& params);

// Leakage through the HVT entries of an arbitrary switch vector, including
// illegal programs. An all-LVT vector has no OFF switch and returns 0.
double off_switch_leakage(std::span<const Vt, kSwitchCount> switch_vt, unsigned pattern, double t,
                          const BiasPoint& bias, const DeviceParams& params);

// ---------------------------------------------------------------------------
// Sweeps and optimization
// ---------------------------------------------------------------------------

struct VoltageRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct VtWindowRow {
  double delta_hvt = 0.0;
  double delta_lvt = 0.0;
  double ratio = 0.0;
  double delay_s = 0.0;
};

// Rows are ordered delta_hvt-major. `jobs` only affects wall time.
std::vector<VtWindowRow> sweep_vt_window(VoltageRange hvt, VoltageRange lvt, double step,
                                         const BiasPoint& bias, double t,
                                         const DeviceParams& params, unsigned jobs = 1);

// Header `delta_hvt,delta_lvt,ratio,delay_s`, 6 significant digits.
std::string sweep_csv(std::span<const VtWindowRow> rows);

struct BiasOptimum {
  BiasPoint bias;
  double delta_hvt = 0.0;
  double delta_lvt = 0.0;
  double delay_default = 0.0;
  double delay_opt = 0.0;
  double delay_gain = 0.0;  // 1 - delay_opt / delay_default
  std::size_t points_evaluated = 0;
  std::size_t points_rejected = 0;
};

inline constexpr double kMaxBiasWindow = 0.2;

// Exhaustive grid over (vg_n, vg_p, delta_hvt, delta_lvt), each within
// +-search_window of its default, minimizing worst_case_delay at vdd.
BiasOptimum optimize_bias(const DeviceParams& params, double search_window, double grid_step,
                          unsigned jobs = 1);

}  // namespace vtcamo

#endif  // VTCAMO_DEVICE_MODEL_HPP_
