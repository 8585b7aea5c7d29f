// Copyright 2026 The vtcamo Authors
#include "vtcamo/device_model.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <utility>

#include "parallel.hpp"
#include "vtcamo/error.hpp"

namespace vtcamo {

namespace {

constexpr double kBoltzmannOverCharge = 8.617333262e-5;  // V/K

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorKind::kInvalidParameter, what);
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) invalid(std::string(name) + " must be finite");
}

// ln^2(1 + e^x) without overflow for large x.
double inversion_charge(double x) {
  const double softplus = x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
  return softplus * softplus;
}

bool in1(unsigned pattern) { return (pattern >> 1) & 1u; }
bool in2(unsigned pattern) { return pattern & 1u; }

bool core_output(Core core, bool a, bool b) {
  switch (core) {
    case Core::kNand: return !(a && b);
    case Core::kNor: return !(a || b);
    case Core::kXor: return a != b;
  }
  return false;
}

// Threshold voltages of every device class at temperature t.
struct Thresholds {
  double nvt_n, nvt_p;
  double lvt_n, lvt_p;
  double hvt_n, hvt_p;
};

Thresholds thresholds(double t, const DeviceParams& p) {
  return {vt_at_temperature(p.vtn0, t, p),
          vt_at_temperature(p.vtp0_mag, t, p),
          vt_at_temperature(p.vtn0 - p.delta_lvt, t, p),
          vt_at_temperature(p.vtp0_mag - p.delta_lvt, t, p),
          vt_at_temperature(p.vtn0 + p.delta_hvt, t, p),
          vt_at_temperature(p.vtp0_mag + p.delta_hvt, t, p)};
}

double series(double a, double b) {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  return 1.0 / (1.0 / a + 1.0 / b);
}

double series(double a, double b, double c) { return series(series(a, b), c); }

// Two OFF devices stacked: solve for the intermediate node where the
// bottom and top currents match.
double stacked_off_current(double v, double vt, double t, const DeviceParams& p, Carrier carrier) {
  double lo = 0.0;
  double hi = v;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double bottom = drain_current(0.0, mid, vt, t, p, carrier);
    const double top = drain_current(-mid, v - mid, vt, t, p, carrier);
    if (bottom < top) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return drain_current(0.0, 0.5 * (lo + hi), vt, t, p, carrier);
}

// Functional (NVT) leakage of a powered CMOS core at pins (a, b).
double core_leakage(Core core, bool a, bool b, double t, const Thresholds& vt,
                    const DeviceParams& p) {
  const double v = p.vdd;
  const double n_off = drain_current(0.0, v, vt.nvt_n, t, p, Carrier::kN);
  const double p_off = drain_current(0.0, v, vt.nvt_p, t, p, Carrier::kP);
  switch (core) {
    case Core::kNand:
      if (a && b) return 2.0 * p_off;  // parallel pull-up both off
      if (!a && !b) return stacked_off_current(v, vt.nvt_n, t, p, Carrier::kN);
      return n_off;
    case Core::kNor:
      if (!a && !b) return 2.0 * n_off;  // parallel pull-down both off
      if (a && b) return stacked_off_current(v, vt.nvt_p, t, p, Carrier::kP);
      return p_off;
    case Core::kXor: {
      // AOI22 on (a, b) and their complements, plus the two input inverters.
      const double inverters = (a ? p_off : n_off) + (b ? p_off : n_off);
      return 2.0 * (a != b ? n_off : p_off) + inverters;
    }
  }
  return 0.0;
}

struct PinState {
  bool a = false;     // external pin 1
  bool a_int = false; // pin 1 after the pass/tie gates
  bool b = false;
};

// Per-switch-pair leakage when the pair is HVT. Pair index = switch / 2.
double off_pair_leakage(int pair, const PinState& pins, double t, const BiasPoint& bias,
                        const Thresholds& vt, const DeviceParams& p) {
  const double v = p.vdd;
  // An OFF transmission gate with a full-rail difference across it.
  const double gate_off = drain_current(bias.vg_n, v, vt.hvt_n, t, p, Carrier::kN) +
                          drain_current(v - bias.vg_p, v, vt.hvt_p, t, p, Carrier::kP);
  switch (pair) {
    case 0:
    case 1:
    case 2: {
      // Power-gated core: header, core network and footer in series.
      const double header = drain_current(v - bias.vg_p, v, vt.hvt_p, t, p, Carrier::kP);
      const double footer = drain_current(bias.vg_n, v, vt.hvt_n, t, p, Carrier::kN);
      return series(header, core_leakage(static_cast<Core>(pair), pins.a_int, pins.b, t, vt, p),
                    footer);
    }
    case 3:
    case 4:
      // The two output gates always see X and its complement.
      return gate_off;
    case 5:
      return pins.a != pins.a_int ? gate_off : 0.0;
    case 6:
      return pins.a_int ? gate_off : 0.0;
    default:
      return 0.0;
  }
}

}  // namespace

void DeviceParams::validate() const {
  for (auto [v, name] : {std::pair{vdd, "vdd"}, {vtn0, "vtn0"}, {vtp0_mag, "vtp0_mag"},
                         {delta_hvt, "delta_hvt"}, {delta_lvt, "delta_lvt"},
                         {subthreshold_slope_n, "subthreshold_slope_n"}, {kprime_n, "kprime_n"},
                         {kprime_p, "kprime_p"}, {w_over_l, "w_over_l"}, {kvt, "kvt"},
                         {t_ref, "t_ref"}, {c_load, "c_load"}}) {
    require_finite(v, name);
  }
  if (vdd <= 0.0) invalid("vdd must be positive");
  if (!(delta_hvt > 0.0 && delta_hvt < vdd)) invalid("delta_hvt must lie in (0, vdd)");
  if (!(delta_lvt > 0.0 && delta_lvt < vdd)) invalid("delta_lvt must lie in (0, vdd)");
  if (subthreshold_slope_n < 1.0) invalid("subthreshold_slope_n must be >= 1");
  if (kvt < 0.0) invalid("kvt must be >= 0");
  if (kprime_n <= 0.0 || kprime_p <= 0.0) invalid("kprime must be positive");
  if (w_over_l <= 0.0) invalid("w_over_l must be positive");
  if (t_ref <= 0.0) invalid("t_ref must be positive");
  if (c_load <= 0.0) invalid("c_load must be positive");
}

BiasPoint default_bias(const DeviceParams& params) {
  const double mid = 0.5 * (params.vtn0 + params.vtp0_mag);
  return {mid, params.vdd - mid};
}

double thermal_voltage(double t) { return kBoltzmannOverCharge * t; }

double drain_current(double vgs, double vds, double vt, double t, const DeviceParams& params,
                     Carrier carrier) {
  require_finite(vgs, "vgs");
  require_finite(vds, "vds");
  require_finite(vt, "vt");
  require_finite(t, "temperature");
  if (t <= 0.0) invalid("temperature must be positive");
  if (vds < 0.0) invalid("vds must be >= 0");
  if (vds == 0.0) return 0.0;

  const double n = params.subthreshold_slope_n;
  const double phi = thermal_voltage(t);
  const double kprime = carrier == Carrier::kN ? params.kprime_n : params.kprime_p;
  const double beta = kprime * params.w_over_l * std::pow(t / params.t_ref, -1.5);
  const double is = 2.0 * n * beta * phi * phi;
  const double forward = inversion_charge((vgs - vt) / (2.0 * n * phi));
  const double reverse = inversion_charge((vgs - vt - n * vds) / (2.0 * n * phi));
  return std::max(0.0, is * (forward - reverse));
}

double vt_at_temperature(double vt_nominal, double t, const DeviceParams& params) {
  require_finite(vt_nominal, "vt_nominal");
  require_finite(t, "temperature");
  if (t <= 0.0) invalid("temperature must be positive");
  return vt_nominal - params.kvt * (t - params.t_ref);
}

SwitchRatio switch_ratio(double delta_hvt, double delta_lvt, const BiasPoint& bias, double t,
                         const DeviceParams& params) {
  require_finite(delta_hvt, "delta_hvt");
  require_finite(delta_lvt, "delta_lvt");
  if (delta_hvt < 0.0 || delta_hvt >= params.vdd || delta_lvt < 0.0 || delta_lvt >= params.vdd) {
    invalid("VT offsets must lie in [0, vdd)");
  }
  SwitchRatio r;
  r.i_on = drain_current(bias.vg_n, params.vdd,
                         vt_at_temperature(params.vtn0 - delta_lvt, t, params), t, params);
  r.i_off = drain_current(bias.vg_n, params.vdd,
                          vt_at_temperature(params.vtn0 + delta_hvt, t, params), t, params);
  if (r.i_off <= 0.0) {
    r.off_underflow = true;
    r.ratio = std::numeric_limits<double>::infinity();
  } else {
    r.ratio = r.i_on / r.i_off;
  }
  return r;
}

DelayEstimate gate_delay_estimate(const CamoConfig& config, unsigned pattern,
                                  const BiasPoint& bias, double vdd_actual, double t,
                                  const DeviceParams& params, Contention contention) {
  require_finite(vdd_actual, "vdd_actual");
  if (vdd_actual <= 0.0) invalid("vdd_actual must be positive");
  if (pattern >= kPatterns) invalid("pattern must be in [0, 4)");
  const auto s = cell_state(config);
  const auto vt = thresholds(t, params);
  const double v = vdd_actual;
  const double half = 0.5 * v;

  const bool a = s.tie ? false : in1(pattern);
  const bool b = in2(pattern);
  const bool x = core_output(s.core, a, b);
  const bool out = s.inverted ? !x : x;

  // Selected path at the 50% crossing: the stage driving the open output
  // gate, then the gate itself. The true-polarity gate is driven by the core
  // through its power switch, the inverting gate by the always-on NVT output
  // inverter.
  double driver = 0.0;
  if (s.inverted) {
    driver = out ? drain_current(v, half, vt.nvt_p, t, params, Carrier::kP)
                 : drain_current(v, half, vt.nvt_n, t, params, Carrier::kN);
  } else {
    driver = x ? drain_current(v - bias.vg_p, half, vt.lvt_p, t, params, Carrier::kP)
               : drain_current(bias.vg_n, half, vt.lvt_n, t, params, Carrier::kN);
  }
  auto gate_current = [&](bool rising, double vt_n, double vt_p) {
    if (rising) {
      return drain_current(bias.vg_n - half, half, vt_n, t, params, Carrier::kN) +
             drain_current(v - bias.vg_p, half, vt_p, t, params, Carrier::kP);
    }
    return drain_current(bias.vg_n, half, vt_n, t, params, Carrier::kN) +
           drain_current(half - bias.vg_p, half, vt_p, t, params, Carrier::kP);
  };

  DelayEstimate est;
  est.i_on = series(driver, gate_current(out, vt.lvt_n, vt.lvt_p));

  if (contention == Contention::kModeled) {
    double fight = 0.0;
    for (int k = 0; k < 3; ++k) {
      const auto other = static_cast<Core>(k);
      if (other == s.core) continue;
      const bool y = core_output(other, a, b);
      if (y == x) continue;
      // Gated cores pull X toward their own level through OFF power switches.
      fight += x ? drain_current(bias.vg_n, half, vt.hvt_n, t, params, Carrier::kN)
                 : drain_current(v - bias.vg_p, half, vt.hvt_p, t, params, Carrier::kP);
    }
    // The unselected output gate always drives the opposite level.
    fight += gate_current(!out, vt.hvt_n, vt.hvt_p);
    est.i_contention = fight;
  }

  est.i_eff = est.i_on - est.i_contention;
  if (est.i_eff <= 0.0) {
    throw Error(ErrorKind::kContentionCollapse,
                "contention collapse for " + to_string(config) + " at pattern " +
                    pattern_string(pattern) + ": OFF leakage exceeds the ON path");
  }
  if (est.i_eff < kContentionFloor) {
    est.i_eff = kContentionFloor;
    est.clamped = true;
  }
  est.seconds = params.c_load * v / (2.0 * est.i_eff);
  return est;
}

double worst_case_delay(const BiasPoint& bias, double vdd_actual, double t,
                        const DeviceParams& params) {
  double worst = 0.0;
  for (auto f : kAllFunctions) {
    const auto config = config_for(f, CellFlavor::kCamo8);
    for (unsigned p = 0; p < kPatterns; ++p) {
      worst = std::max(worst,
                       gate_delay_estimate(config, p, bias, vdd_actual, t, params).seconds);
    }
  }
  return worst;
}

Leakage gate_leakage(const CamoConfig& config, unsigned pattern, double t, const BiasPoint& bias,
                     const DeviceParams& params) {
  if (pattern >= kPatterns) invalid("pattern must be in [0, 4)");
  const auto s = cell_state(config);
  const auto vt = thresholds(t, params);
  const double v = params.vdd;

  PinState pins{in1(pattern), s.tie ? false : in1(pattern), in2(pattern)};
  const bool x = core_output(s.core, pins.a_int, pins.b);
  const double output_inverter = x ? drain_current(0.0, v, vt.nvt_p, t, params, Carrier::kP)
                                   : drain_current(0.0, v, vt.nvt_n, t, params, Carrier::kN);
  Leakage leak;
  leak.functional = core_leakage(s.core, pins.a_int, pins.b, t, vt, params) + output_inverter;
  leak.switches = off_switch_leakage(config.switch_vt, pattern, t, bias, params);
  return leak;
}

double off_switch_leakage(std::span<const Vt, kSwitchCount> switch_vt, unsigned pattern, double t,
                          const BiasPoint& bias, const DeviceParams& params) {
  if (pattern >= kPatterns) invalid("pattern must be in [0, 4)");
  const auto vt = thresholds(t, params);
  const bool tied = switch_vt[12] == Vt::kLow && switch_vt[10] == Vt::kHigh;
  PinState pins{in1(pattern), tied ? false : in1(pattern), in2(pattern)};
  double total = 0.0;
  for (int pair = 0; pair < kSwitchCount / 2; ++pair) {
    // A pair contributes once, and only when both its devices are HVT.
    if (switch_vt[2 * pair] == Vt::kHigh && switch_vt[2 * pair + 1] == Vt::kHigh) {
      total += off_pair_leakage(pair, pins, t, bias, vt, params);
    }
  }
  return total;
}

std::vector<VtWindowRow> sweep_vt_window(VoltageRange hvt, VoltageRange lvt, double step,
                                         const BiasPoint& bias, double t,
                                         const DeviceParams& params, unsigned jobs) {
  require_finite(step, "step");
  if (step <= 0.0) invalid("sweep step must be positive");
  auto count = [&](VoltageRange r, const char* name) -> std::size_t {
    require_finite(r.lo, name);
    require_finite(r.hi, name);
    if (r.hi < r.lo) invalid(std::string(name) + " range is empty");
    return static_cast<std::size_t>(std::floor((r.hi - r.lo) / step + 1e-9)) + 1;
  };
  const std::size_t nh = count(hvt, "delta_hvt");
  const std::size_t nl = count(lvt, "delta_lvt");

  std::vector<VtWindowRow> rows(nh * nl);
  detail::parallel_for(rows.size(), jobs, [&](std::size_t i) {
    auto& row = rows[i];
    row.delta_hvt = hvt.lo + static_cast<double>(i / nl) * step;
    row.delta_lvt = lvt.lo + static_cast<double>(i % nl) * step;
    row.ratio = switch_ratio(row.delta_hvt, row.delta_lvt, bias, t, params).ratio;
    DeviceParams p = params;
    p.delta_hvt = row.delta_hvt;
    p.delta_lvt = row.delta_lvt;
    try {
      row.delay_s = worst_case_delay(bias, p.vdd, t, p);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kContentionCollapse) throw;
      row.delay_s = std::numeric_limits<double>::infinity();
    }
  });
  return rows;
}

std::string sweep_csv(std::span<const VtWindowRow> rows) {
  std::ostringstream out;
  out << "delta_hvt,delta_lvt,ratio,delay_s\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g\n", r.delta_hvt, r.delta_lvt, r.ratio,
                  r.delay_s);
    out << buf;
  }
  return out.str();
}

BiasOptimum optimize_bias(const DeviceParams& params, double search_window, double grid_step,
                          unsigned jobs) {
  params.validate();
  require_finite(search_window, "search_window");
  require_finite(grid_step, "grid_step");
  if (grid_step <= 0.0) invalid("grid_step must be positive");
  if (search_window < 0.0 || search_window > kMaxBiasWindow) {
    invalid("search_window must lie in [0, 0.2] V");
  }
  const int half_span = static_cast<int>(std::floor(search_window / grid_step + 1e-9));
  const int n = 2 * half_span + 1;
  const BiasPoint base = default_bias(params);

  BiasOptimum result;
  result.delay_default = worst_case_delay(base, params.vdd, params.t_ref, params);

  struct Best {
    double delay = std::numeric_limits<double>::infinity();
    BiasPoint bias;
    double dh = 0.0, dl = 0.0;
    std::size_t evaluated = 0, rejected = 0;
  };
  std::vector<Best> per_row(static_cast<std::size_t>(n));
  detail::parallel_for(per_row.size(), jobs, [&](std::size_t i) {
    Best& best = per_row[i];
    const double vg_n = base.vg_n + (static_cast<int>(i) - half_span) * grid_step;
    for (int j = 0; j < n; ++j) {
      const double vg_p = base.vg_p + (j - half_span) * grid_step;
      for (int k = 0; k < n; ++k) {
        const double dh = params.delta_hvt + (k - half_span) * grid_step;
        for (int l = 0; l < n; ++l) {
          const double dl = params.delta_lvt + (l - half_span) * grid_step;
          ++best.evaluated;
          if (vg_n < 0.0 || vg_n > params.vdd || vg_p < 0.0 || vg_p > params.vdd ||
              dh <= 0.0 || dh >= params.vdd || dl <= 0.0 || dl >= params.vdd) {
            ++best.rejected;
            continue;
          }
          DeviceParams p = params;
          p.delta_hvt = dh;
          p.delta_lvt = dl;
          double d = 0.0;
          try {
            d = worst_case_delay({vg_n, vg_p}, p.vdd, p.t_ref, p);
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::kContentionCollapse) throw;
            ++best.rejected;
            continue;
          }
          if (d < best.delay) best = {d, {vg_n, vg_p}, dh, dl, best.evaluated, best.rejected};
        }
      }
    }
  });

  Best overall;
  for (const auto& b : per_row) {
    result.points_evaluated += b.evaluated;
    result.points_rejected += b.rejected;
    if (b.delay < overall.delay) overall = b;
  }
  if (!std::isfinite(overall.delay)) invalid("bias search grid has no feasible point");
  result.bias = overall.bias;
  result.delta_hvt = overall.dh;
  result.delta_lvt = overall.dl;
  result.delay_opt = overall.delay;
  result.delay_gain = 1.0 - result.delay_opt / result.delay_default;
  return result;
}

}  // namespace vtcamo
