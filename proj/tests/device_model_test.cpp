// Copyright 2026 The vtcamo Authors
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vtcamo/device_model.hpp"
#include "vtcamo/error.hpp"

namespace vtcamo {
namespace {

const DeviceParams kDefaults{};

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Reference values of the closed form evaluated with 40-digit arithmetic
// (mpmath), default parameters.
TEST(DrainCurrent, MatchesHighPrecisionEvaluation) {
  struct Case {
    double vgs, vds, vt, t, expected;
  };
  const Case cases[] = {
      {0.3, 1.0, 0.3, 300.0, 5.0091473568296041e-7},
      {0.3, 1.0, 0.65, 300.0, 3.1107256238178114e-11},
      {0.7, 0.5, 0.3, 375.0, 2.6511787453648711e-5},
      {0.0, 1.0, 0.3, 250.0, 2.110442099239641e-11},
      {1.0, 0.05, 0.3, 300.0, 2.0024097153568232e-5},
  };
  for (const auto& c : cases) {
    EXPECT_LT(rel_err(drain_current(c.vgs, c.vds, c.vt, c.t, kDefaults), c.expected), 1e-11)
        << c.vgs << " " << c.vds << " " << c.vt << " " << c.t;
  }
}

TEST(DrainCurrent, ZeroDrainBiasGivesZero) {
  EXPECT_EQ(drain_current(0.8, 0.0, 0.3, 300.0, kDefaults), 0.0);
  EXPECT_EQ(drain_current(0.8, 0.0, 0.3, 300.0, kDefaults, Carrier::kP), 0.0);
}

TEST(DrainCurrent, OverdriveOfPlusMinus350mVSpansThreeDecades) {
  const double on = drain_current(0.65, 1.0, 0.3, 300.0, kDefaults);
  const double off = drain_current(-0.05, 1.0, 0.3, 300.0, kDefaults);
  EXPECT_GE(on / off, 1e3);
}

TEST(DrainCurrent, MonotoneOnDenseGrid) {
  for (auto carrier : {Carrier::kN, Carrier::kP}) {
    for (double t : {250.0, 300.0, 375.0}) {
      for (int i = 0; i < 50; ++i) {
        const double vgs = -0.2 + 1.4 * i / 49.0;
        double prev = -1.0;
        for (int j = 0; j < 50; ++j) {
          const double vds = 1.2 * j / 49.0;
          const double cur = drain_current(vgs, vds, 0.3, t, kDefaults, carrier);
          ASSERT_GE(cur, 0.0);
          ASSERT_TRUE(std::isfinite(cur));
          ASSERT_GE(cur, prev) << "vds step at vgs=" << vgs << " vds=" << vds;
          prev = cur;
          if (i > 0) {
            const double below = drain_current(vgs - 1.4 / 49.0, vds, 0.3, t, kDefaults, carrier);
            ASSERT_GE(cur, below) << "vgs step at vgs=" << vgs << " vds=" << vds;
          }
        }
      }
    }
  }
}

TEST(DrainCurrent, SubthresholdSlopeAndSquareLawLimits) {
  const double phi = thermal_voltage(300.0);
  const double n = kDefaults.subthreshold_slope_n;
  // Deep subthreshold: one n*phi*ln(10) step in vgs is one decade.
  const double i1 = drain_current(-0.3, 1.0, 0.3, 300.0, kDefaults);
  const double i2 = drain_current(-0.3 + n * phi * std::log(10.0), 1.0, 0.3, 300.0, kDefaults);
  EXPECT_NEAR(i2 / i1, 10.0, 0.05);
  // Strong inversion, saturation: current quadruples when overdrive doubles.
  const double s1 = drain_current(0.3 + 0.6, 2.0, 0.3, 300.0, kDefaults);
  const double s2 = drain_current(0.3 + 1.2, 3.0, 0.3, 300.0, kDefaults);
  EXPECT_NEAR(s2 / s1, 4.0, 0.25);
}

TEST(DrainCurrent, RejectsBadInputs) {
  EXPECT_THROW(drain_current(0.5, 1.0, 0.3, -1.0, kDefaults), Error);
  EXPECT_THROW(drain_current(NAN, 1.0, 0.3, 300.0, kDefaults), Error);
  EXPECT_THROW(drain_current(0.5, -0.1, 0.3, 300.0, kDefaults), Error);
  try {
    drain_current(0.5, 1.0, 0.3, 0.0, kDefaults);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidParameter);
  }
}

TEST(Params, Validation) {
  EXPECT_NO_THROW(kDefaults.validate());
  auto bad = kDefaults;
  bad.vdd = 0.0;
  EXPECT_THROW(bad.validate(), Error);
  bad = kDefaults;
  bad.delta_hvt = 1.0;
  EXPECT_THROW(bad.validate(), Error);
  bad = kDefaults;
  bad.subthreshold_slope_n = 0.9;
  EXPECT_THROW(bad.validate(), Error);
  bad = kDefaults;
  bad.kvt = -1e-3;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(DefaultBias, MidpointOfThresholdMagnitudes) {
  const auto b = default_bias(kDefaults);
  EXPECT_DOUBLE_EQ(b.vg_n, 0.3);
  EXPECT_DOUBLE_EQ(b.vg_p, 0.7);
}

TEST(VtTemperature, LinearShift) {
  EXPECT_EQ(vt_at_temperature(0.65, 300.0, kDefaults), 0.65);
  EXPECT_NEAR(vt_at_temperature(0.65, 350.0, kDefaults), 0.65 - 0.06, 1e-15);
  EXPECT_NEAR(vt_at_temperature(0.65, 250.0, kDefaults), 0.65 + 0.06, 1e-15);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> t(200.0, 400.0);
  for (int i = 0; i < 200; ++i) {
    const double t1 = t(rng), t2 = t(rng);
    EXPECT_NEAR(vt_at_temperature(0.3, t1, kDefaults) - vt_at_temperature(0.3, t2, kDefaults),
                -kDefaults.kvt * (t1 - t2), 1e-14);
  }
}

TEST(SwitchRatio, DegenerateAndCalibratedPoints) {
  const auto b = default_bias(kDefaults);
  EXPECT_DOUBLE_EQ(switch_ratio(0.0, 0.0, b, 300.0, kDefaults).ratio, 1.0);
  EXPECT_GE(switch_ratio(0.35, 0.35, b, 300.0, kDefaults).ratio, 1e3);
  EXPECT_GE(switch_ratio(0.40, 0.40, b, 300.0, kDefaults).ratio,
            switch_ratio(0.20, 0.20, b, 300.0, kDefaults).ratio);
  EXPECT_THROW(switch_ratio(1.0, 0.35, b, 300.0, kDefaults), Error);
  EXPECT_THROW(switch_ratio(0.35, -0.1, b, 300.0, kDefaults), Error);
}

TEST(SwitchRatio, MonotoneInEachOffset) {
  const auto b = default_bias(kDefaults);
  for (int i = 0; i < 19; ++i) {
    for (int j = 0; j < 19; ++j) {
      const double h = 0.05 * i, l = 0.05 * j;
      const double r = switch_ratio(h, l, b, 300.0, kDefaults).ratio;
      EXPECT_GE(switch_ratio(h + 0.05, l, b, 300.0, kDefaults).ratio, r);
      EXPECT_GE(switch_ratio(h, l + 0.05, b, 300.0, kDefaults).ratio, r);
    }
  }
}

TEST(SwitchRatio, UnderflowIsFlagged) {
  auto p = kDefaults;
  p.vdd = 40.0;  // a 39 V offset pushes the OFF current below the double range
  const auto r = switch_ratio(39.0, 0.35, {0.3, 39.7}, 300.0, p);
  EXPECT_TRUE(r.off_underflow);
  EXPECT_TRUE(std::isinf(r.ratio));
}

TEST(Sweep, GridShapeOrderAndMonotonicity) {
  const auto b = default_bias(kDefaults);
  const auto rows = sweep_vt_window({0.1, 0.5}, {0.1, 0.5}, 0.05, b, 300.0, kDefaults, 2);
  ASSERT_EQ(rows.size(), 81u);
  EXPECT_NEAR(rows[0].delta_hvt, 0.1, 1e-12);
  EXPECT_NEAR(rows[1].delta_lvt, 0.15, 1e-12);
  EXPECT_NEAR(rows[9].delta_hvt, 0.15, 1e-12);
  for (int l = 0; l < 9; ++l) {
    for (int h = 1; h < 9; ++h) {
      EXPECT_GE(rows[h * 9 + l].ratio, rows[(h - 1) * 9 + l].ratio);
    }
  }
  const auto serial = sweep_vt_window({0.1, 0.5}, {0.1, 0.5}, 0.05, b, 300.0, kDefaults, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].ratio, serial[i].ratio);
    EXPECT_EQ(rows[i].delay_s, serial[i].delay_s);
  }
  const auto csv = sweep_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "delta_hvt,delta_lvt,ratio,delay_s");
}

TEST(Sweep, SinglePointMatchesDirectEvaluation) {
  const auto b = default_bias(kDefaults);
  const auto rows = sweep_vt_window({0.35, 0.35}, {0.35, 0.35}, 0.05, b, 300.0, kDefaults);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_DOUBLE_EQ(rows[0].ratio, switch_ratio(0.35, 0.35, b, 300.0, kDefaults).ratio);
  EXPECT_DOUBLE_EQ(rows[0].delay_s, worst_case_delay(b, 1.0, 300.0, kDefaults));
}

TEST(Sweep, EmptyRangeRejected) {
  const auto b = default_bias(kDefaults);
  EXPECT_THROW(sweep_vt_window({0.4, 0.3}, {0.1, 0.2}, 0.05, b, 300.0, kDefaults), Error);
  EXPECT_THROW(sweep_vt_window({0.1, 0.3}, {0.1, 0.2}, 0.0, b, 300.0, kDefaults), Error);
}

// Hand evaluation of the ON path for a NAND program at pattern 11: the
// selected N footer in series with the true-polarity gate pulling low.
TEST(Delay, MatchesClosedFormWithoutContention) {
  const auto b = default_bias(kDefaults);
  const double v = 1.0, half = 0.5, t = 300.0;
  const double lvt_n = kDefaults.vtn0 - kDefaults.delta_lvt;
  const double lvt_p = kDefaults.vtp0_mag - kDefaults.delta_lvt;
  const double footer = drain_current(b.vg_n, half, lvt_n, t, kDefaults);
  const double tg = drain_current(b.vg_n, half, lvt_n, t, kDefaults) +
                    drain_current(half - b.vg_p, half, lvt_p, t, kDefaults, Carrier::kP);
  const double i_on = 1.0 / (1.0 / footer + 1.0 / tg);
  const auto est = gate_delay_estimate(config_for(GateFunction::kNand, CellFlavor::kCamo8), 3, b,
                                       v, t, kDefaults, Contention::kIgnored);
  EXPECT_NEAR(est.seconds, kDefaults.c_load * v / (2.0 * i_on), 1e-24);
  EXPECT_EQ(est.i_contention, 0.0);

  // With contention the delay can only grow.
  for (auto f : kAllFunctions) {
    for (unsigned p = 0; p < 4; ++p) {
      const auto c = config_for(f, CellFlavor::kCamo8);
      const auto with = gate_delay_estimate(c, p, b, v, t, kDefaults);
      const auto without = gate_delay_estimate(c, p, b, v, t, kDefaults, Contention::kIgnored);
      EXPECT_NEAR(without.seconds, kDefaults.c_load * v / (2.0 * without.i_on), 1e-24);
      EXPECT_GE(with.seconds, without.seconds);
      EXPECT_GT(with.i_contention, 0.0);
    }
  }
}

// AND at pattern 11: the NVT output inverter pulls high through the
// inverting gate, with no core power switch in the path.
TEST(Delay, InvertingPathIsDrivenByTheOutputInverter) {
  const auto b = default_bias(kDefaults);
  const double v = 1.0, half = 0.5, t = 300.0;
  const double lvt_n = kDefaults.vtn0 - kDefaults.delta_lvt;
  const double lvt_p = kDefaults.vtp0_mag - kDefaults.delta_lvt;
  const double inverter = drain_current(v, half, kDefaults.vtp0_mag, t, kDefaults, Carrier::kP);
  const double tg = drain_current(b.vg_n - half, half, lvt_n, t, kDefaults) +
                    drain_current(v - b.vg_p, half, lvt_p, t, kDefaults, Carrier::kP);
  const double i_on = 1.0 / (1.0 / inverter + 1.0 / tg);
  const auto est = gate_delay_estimate(config_for(GateFunction::kAnd, CellFlavor::kCamo8), 3, b,
                                       v, t, kDefaults, Contention::kIgnored);
  EXPECT_NEAR(est.seconds, kDefaults.c_load * v / (2.0 * i_on), 1e-24);
}

TEST(Delay, PolarityPairsHaveDistinctDelays) {
  const auto b = default_bias(kDefaults);
  const std::pair<GateFunction, GateFunction> pairs[] = {
      {GateFunction::kNand, GateFunction::kAnd},
      {GateFunction::kNor, GateFunction::kOr},
      {GateFunction::kXor, GateFunction::kXnor},
      {GateFunction::kInv, GateFunction::kBuf}};
  for (const auto& [f, g] : pairs) {
    for (unsigned p = 0; p < 4; ++p) {
      EXPECT_NE(gate_delay_estimate(config_for(f, CellFlavor::kCamo8), p, b, 1.0, 300.0, kDefaults)
                    .seconds,
                gate_delay_estimate(config_for(g, CellFlavor::kCamo8), p, b, 1.0, 300.0, kDefaults)
                    .seconds);
    }
  }
}

TEST(Delay, SupplyVariationIsUShaped) {
  const auto b = default_bias(kDefaults);
  const double nominal = worst_case_delay(b, 1.0, 300.0, kDefaults);
  EXPECT_GT(worst_case_delay(b, 0.9, 300.0, kDefaults), nominal);
  EXPECT_GT(worst_case_delay(b, 1.1, 300.0, kDefaults), nominal);
}

TEST(Delay, StrongerLvtIsFaster) {
  const auto b = default_bias(kDefaults);
  auto p = kDefaults;
  p.delta_lvt += 0.1;
  for (auto f : kAllFunctions) {
    const auto c = config_for(f, CellFlavor::kCamo8);
    for (unsigned pat = 0; pat < 4; ++pat) {
      EXPECT_LT(gate_delay_estimate(c, pat, b, 1.0, 300.0, p).seconds,
                gate_delay_estimate(c, pat, b, 1.0, 300.0, kDefaults).seconds);
    }
  }
}

TEST(Delay, CollapseIsReported) {
  // Pulling the HVT offset to almost nothing makes OFF switches as strong as
  // ON ones.
  auto p = kDefaults;
  p.delta_hvt = 1e-3;
  p.delta_lvt = 1e-3;
  const auto b = default_bias(p);
  try {
    gate_delay_estimate(config_for(GateFunction::kNand, CellFlavor::kCamo8), 3, b, 1.0, 300.0, p);
    FAIL() << "expected collapse";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kContentionCollapse);
    EXPECT_NE(std::string(e.what()).find("CAMO8:"), std::string::npos);
  }
}

TEST(Leakage, StrictlyIncreasingInTemperatureUnderFixedBias) {
  const auto b = default_bias(kDefaults);
  for (auto f : kAllFunctions) {
    const auto c = config_for(f, CellFlavor::kCamo8);
    for (unsigned p = 0; p < 4; ++p) {
      double prev = 0.0;
      for (double t = 200.0; t <= 400.0; t += 25.0) {
        const double leak = gate_leakage(c, p, t, b, kDefaults).total();
        EXPECT_GT(leak, prev) << to_string(f) << " " << p << " " << t;
        prev = leak;
      }
      EXPECT_GT(gate_leakage(c, p, 350.0, b, kDefaults).total(),
                gate_leakage(c, p, 300.0, b, kDefaults).total());
    }
  }
}

TEST(Leakage, NandAndNorDifferAtPattern11) {
  const auto b = default_bias(kDefaults);
  const double nand =
      gate_leakage(config_for(GateFunction::kNand, CellFlavor::kCamo8), 3, 300.0, b, kDefaults)
          .total();
  const double nor =
      gate_leakage(config_for(GateFunction::kNor, CellFlavor::kCamo8), 3, 300.0, b, kDefaults)
          .total();
  EXPECT_GE(std::abs(nand - nor) / std::min(nand, nor), 0.10);
  // Frozen from the default calibration.
  EXPECT_NEAR(std::max(nand, nor) / std::min(nand, nor), 1.54, 0.01);
}

TEST(Leakage, AllLowVtVectorHasNoSwitchLeakage) {
  std::array<Vt, kSwitchCount> all_low{};
  all_low.fill(Vt::kLow);
  const auto b = default_bias(kDefaults);
  for (unsigned p = 0; p < 4; ++p) {
    EXPECT_EQ(off_switch_leakage(all_low, p, 300.0, b, kDefaults), 0.0);
  }
  std::array<Vt, kSwitchCount> all_high{};
  all_high.fill(Vt::kHigh);
  EXPECT_GT(off_switch_leakage(all_high, 0, 300.0, b, kDefaults), 0.0);
}

TEST(BiasOptimizer, ZeroWindowKeepsDefaults) {
  const auto o = optimize_bias(kDefaults, 0.0, 0.05);
  EXPECT_DOUBLE_EQ(o.bias.vg_n, default_bias(kDefaults).vg_n);
  EXPECT_DOUBLE_EQ(o.bias.vg_p, default_bias(kDefaults).vg_p);
  EXPECT_DOUBLE_EQ(o.delay_gain, 0.0);
}

TEST(BiasOptimizer, HundredMillivoltWindowGainsAtLeastTenPercent) {
  const auto o = optimize_bias(kDefaults, 0.1, 0.05, 2);
  EXPECT_GE(o.delay_gain, 0.10);
  EXPECT_NEAR(o.delay_default, worst_case_delay(default_bias(kDefaults), 1.0, 300.0, kDefaults),
              1e-24);
  EXPECT_LE(std::abs(o.bias.vg_n - 0.3), 0.1 + 1e-12);
  EXPECT_LE(std::abs(o.bias.vg_p - 0.7), 0.1 + 1e-12);
  const auto serial = optimize_bias(kDefaults, 0.1, 0.05, 1);
  EXPECT_EQ(serial.bias.vg_n, o.bias.vg_n);
  EXPECT_EQ(serial.bias.vg_p, o.bias.vg_p);
  EXPECT_EQ(serial.delta_hvt, o.delta_hvt);
  EXPECT_EQ(serial.delta_lvt, o.delta_lvt);
}

TEST(BiasOptimizer, RejectsDegenerateGrid) {
  EXPECT_THROW(optimize_bias(kDefaults, 0.1, 0.0), Error);
  EXPECT_THROW(optimize_bias(kDefaults, 0.3, 0.05), Error);
  EXPECT_THROW(optimize_bias(kDefaults, -0.1, 0.05), Error);
}

}  // namespace
}  // namespace vtcamo
