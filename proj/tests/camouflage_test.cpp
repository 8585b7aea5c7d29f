// Copyright 2026 The vtcamo Authors
#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support/testing.hpp"
#include "vtcamo/camouflage.hpp"
#include "vtcamo/error.hpp"

namespace vtcamo {
namespace {

using testing::load;
using testing::reference_equivalent;

std::vector<std::size_t> eligible(const Netlist& n, CellFlavor flavor) {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < n.gates().size(); ++g) {
    if (camouflageable(n, g, flavor)) out.push_back(g);
  }
  return out;
}

TEST(Apply, ZeroGatesIsIdentity) {
  const auto n = load("c17.bench");
  const auto r = apply_camouflage(n, {}, CellFlavor::kCamo8);
  EXPECT_EQ(r.netlist, n);
  EXPECT_TRUE(r.key.entries.empty());
}

TEST(Apply, InverterGetsDecoyAndStaysEquivalent) {
  const auto n = parse_bench(
      "INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(y)\nOUTPUT(z)\nx = NAND(a, b)\ny = NOT(x)\n"
      "z = OR(b, c)\n");
  const std::size_t inv = *n.find_gate("y");
  const auto r = apply_camouflage(n, std::vector<std::size_t>{inv}, CellFlavor::kCamo8);
  const Gate& g = r.netlist.gate(inv);
  EXPECT_TRUE(g.camo);
  ASSERT_EQ(g.fanins.size(), 2u);
  ASSERT_TRUE(r.key.find("y"));
  EXPECT_EQ(r.key.find("y")->function, GateFunction::kInv);
  ASSERT_TRUE(r.key.find("y")->decoy.has_value());
  EXPECT_EQ(*r.key.find("y")->decoy, r.netlist.net_name(g.fanins[0]));
  EXPECT_EQ(r.netlist.net_name(g.fanins[1]), "x");
  // Nearest level to x (level 1) outside y's cone is z.
  EXPECT_EQ(*r.key.find("y")->decoy, "z");
  EXPECT_NO_THROW(validate_key(r.netlist, r.key));
  EXPECT_TRUE(reference_equivalent(r.netlist, &r.key, n, nullptr));
  EXPECT_TRUE(check_equivalence(r.netlist, n, &r.key, nullptr, EquivalenceMode::exhaustive())
                  .equivalent);
}

TEST(Apply, TwoNandsInC17WithCmos3A) {
  const auto n = load("c17.bench");
  const std::vector<std::size_t> pick = {1, 4};
  const auto r = apply_camouflage(n, pick, CellFlavor::kCmos3A);
  EXPECT_EQ(r.netlist.camo_gates().size(), 2u);
  EXPECT_TRUE(reference_equivalent(r.netlist, &r.key, n, nullptr));
  const auto text = serialize_bench(r.netlist);
  EXPECT_NE(text.find("CMOS3A("), std::string::npos);
  EXPECT_EQ(parse_bench(text), r.netlist);
}

TEST(Apply, Errors) {
  const auto n = parse_bench(
      "INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(y)\nOUTPUT(w)\ny = AND(a, b)\nw = NAND(a, b, c)\n");
  try {
    apply_camouflage(n, std::vector<std::size_t>{0}, CellFlavor::kCmos3A);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupportedFunction);
  }
  EXPECT_THROW(apply_camouflage(n, std::vector<std::size_t>{1}, CellFlavor::kCamo8), Error);
  const auto inv = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n");
  try {
    apply_camouflage(inv, std::vector<std::size_t>{0}, CellFlavor::kCamo8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDecoyUnavailable);
  }
  EXPECT_THROW(apply_camouflage(inv, std::vector<std::size_t>{0}, CellFlavor::kCmos3A), Error);
}

TEST(Apply, SeededDecoysAreReproducible) {
  const auto n = load("synth_a.bench");
  std::vector<std::size_t> invs;
  for (std::size_t g = 0; g < n.gates().size() && invs.size() < 4; ++g) {
    if (n.gate(g).function == GateFunction::kInv) invs.push_back(g);
  }
  ASSERT_FALSE(invs.empty());
  const auto a = apply_camouflage(n, invs, CellFlavor::kCamo8, {42});
  const auto b = apply_camouflage(n, invs, CellFlavor::kCamo8, {42});
  EXPECT_EQ(a.key, b.key);
  EXPECT_TRUE(check_equivalence(a.netlist, n, &a.key, nullptr, EquivalenceMode::exhaustive())
                  .equivalent);
}

TEST(Apply, RandomSelectionsPreserveFunction) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 60; ++i) {
    const auto n = testing::random_netlist(rng, {8, 30, 4, 0.2, 0.1});
    const auto flavor = kAllFlavors[static_cast<std::size_t>(i % 3)];
    auto pool = eligible(n, flavor);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(std::min<std::size_t>(pool.size(), 1 + i % 6));
    CamouflageResult r;
    try {
      r = apply_camouflage(n, pool, flavor);
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::kDecoyUnavailable);
      continue;
    }
    EXPECT_NO_THROW(validate_key(r.netlist, r.key));
    EXPECT_TRUE(reference_equivalent(r.netlist, &r.key, n, nullptr));
  }
}

TEST(Select, FullBudgetRandomTakesEverything) {
  const auto n = load("c17.bench");
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SelectionPolicy p;
    p.budget = 1.0;
    p.delay_budget = 100.0;
    p.seed = seed;
    EXPECT_EQ(select_gates(n, p, CostTable::defaults(), unit_delay()).size(), 6u);
  }
}

TEST(Select, XorSequencePicksTheGateFeedingXor) {
  const auto n = parse_bench(
      "INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(d)\nOUTPUT(y)\nn1 = NAND(a, b)\nx = XOR(n1, c)\n"
      "o1 = OR(c, d)\ny = AND(x, o1)\n");
  SelectionPolicy p;
  p.strategy = Strategy::kXorSequence;
  p.budget = 0.25;
  p.delay_budget = 10.0;
  EXPECT_EQ(select_gates(n, p, CostTable::defaults(), unit_delay()),
            std::vector<std::size_t>{0});
}

TEST(Select, OffCriticalOnAChainIsEmpty) {
  const auto n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(z)\nx = NAND(a, b)\ny = NOR(x, b)\nz = XOR(y, a)\n");
  SelectionPolicy p;
  p.strategy = Strategy::kOffCritical;
  p.budget = 1.0;
  p.delay_budget = 10.0;
  EXPECT_TRUE(select_gates(n, p, CostTable::defaults(), unit_delay()).empty());
}

TEST(Select, BudgetsAndDeterminism) {
  const auto n = load("synth_b.bench");
  const auto costs = CostTable::defaults();
  for (auto s : {Strategy::kRandom, Strategy::kXorSequence, Strategy::kOffCritical,
                 Strategy::kGreedyEffort}) {
    for (double budget : {0.01, 0.05}) {
      SelectionPolicy p;
      p.strategy = s;
      p.budget = budget;
      p.seed = 77;
      const auto a = select_gates(n, p, costs, unit_delay());
      const auto b = select_gates(n, p, costs, unit_delay());
      EXPECT_EQ(a, b);
      EXPECT_LE(a.size(), static_cast<std::size_t>(budget * n.gates().size() + 1e-9));
      EXPECT_FALSE(a.empty()) << to_string(s);
      const auto r = apply_camouflage(n, a, p.flavor);
      const double before = critical_path(n, nullptr, unit_delay()).delay;
      const double after =
          critical_path(r.netlist, &r.key, camo_delay_model(unit_delay(), costs)).delay;
      EXPECT_LE(after, before * (1.0 + p.delay_budget) + 1e-9) << to_string(s);
    }
  }
  SelectionPolicy tiny;
  tiny.budget = 0.001;
  EXPECT_TRUE(select_gates(load("c17.bench"), tiny, costs, unit_delay()).empty());
}

TEST(Select, PolicyValidation) {
  SelectionPolicy p;
  p.budget = 0.0;
  EXPECT_THROW(p.validate(), Error);
  p.budget = 1.5;
  EXPECT_THROW(p.validate(), Error);
  p.budget = 0.5;
  p.delay_budget = -0.1;
  EXPECT_THROW(p.validate(), Error);
  EXPECT_EQ(parse_strategy("xor-seq"), Strategy::kXorSequence);
  EXPECT_EQ(parse_strategy("off-critical"), Strategy::kOffCritical);
  EXPECT_FALSE(parse_strategy("best").has_value());
}

TEST(Overhead, NoCamoGatesIsZero) {
  const auto n = load("c17.bench");
  const auto r = overhead_report(n, {}, CostTable::defaults(), unit_delay());
  EXPECT_EQ(r.area_pct, 0.0);
  EXPECT_EQ(r.power_pct, 0.0);
  EXPECT_EQ(r.delay_pct, 0.0);
}

TEST(Overhead, ArithmeticAndMissingEntry) {
  const auto n = load("c17.bench");
  // Gate 1 (net 11) lies on the depth-3 path 11 -> 16 -> 22.
  const auto r = apply_camouflage(n, std::vector<std::size_t>{1}, CellFlavor::kCamo8);
  const auto rep = overhead_report(r.netlist, r.key, CostTable::defaults(), unit_delay());
  EXPECT_DOUBLE_EQ(rep.area_pct, 100.0 * 3.0 / 6.0);
  EXPECT_DOUBLE_EQ(rep.power_pct, 100.0 * 3.0 / 6.0);
  EXPECT_EQ(rep.per_gate.size(), 1u);
  EXPECT_DOUBLE_EQ(rep.delay_plain, 3.0);
  EXPECT_DOUBLE_EQ(rep.delay_camo, 4.0);
  CostTable partial;
  partial.entries[CellFlavor::kCmos3A] = {2, 2, 1.5};
  try {
    overhead_report(r.netlist, r.key, partial, unit_delay());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidConfig);
  }
  CostTable bad = CostTable::defaults();
  bad.entries[CellFlavor::kCamo8].area_multiple = 0.5;
  EXPECT_THROW(bad.validate(), Error);
}

// Area/power overhead is linear in the excess (multiple - 1), so doubling
// the excess doubles the percentages.
TEST(Overhead, DoublingTheExcessDoublesAreaAndPower) {
  const auto n = load("synth_a.bench");
  SelectionPolicy p;
  p.budget = 0.05;
  p.delay_budget = 1.0;
  const auto costs = CostTable::defaults();
  const auto r = apply_camouflage(n, select_gates(n, p, costs, unit_delay()), p.flavor);
  CostTable doubled;
  for (const auto& [f, e] : costs.entries) {
    doubled.entries[f] = {2 * e.area_multiple - 1, 2 * e.power_multiple - 1, e.delay_multiple};
  }
  const auto a = overhead_report(r.netlist, r.key, costs, unit_delay());
  const auto b = overhead_report(r.netlist, r.key, doubled, unit_delay());
  EXPECT_GT(a.area_pct, 0.0);
  EXPECT_DOUBLE_EQ(b.area_pct, 2 * a.area_pct);
  EXPECT_DOUBLE_EQ(b.power_pct, 2 * a.power_pct);
}

TEST(Overhead, AdditiveOverDisjointSets) {
  const auto n = load("synth_a.bench");
  const auto pool = eligible(n, CellFlavor::kCmos3A);
  ASSERT_GE(pool.size(), 6u);
  const std::vector<std::size_t> s1(pool.begin(), pool.begin() + 3);
  const std::vector<std::size_t> s2(pool.begin() + 3, pool.begin() + 6);
  const std::vector<std::size_t> both(pool.begin(), pool.begin() + 6);
  auto pct = [&](const std::vector<std::size_t>& s) {
    const auto r = apply_camouflage(n, s, CellFlavor::kCmos3A);
    return overhead_report(r.netlist, r.key, CostTable::defaults(), unit_delay());
  };
  EXPECT_NEAR(pct(s1).area_pct + pct(s2).area_pct, pct(both).area_pct, 1e-12);
  EXPECT_NEAR(pct(s1).power_pct + pct(s2).power_pct, pct(both).power_pct, 1e-12);
}

TEST(DeviceDelay, CamoGatesAreSlowerThanReference) {
  const auto model = device_delay_model(unit_delay(), DeviceParams{});
  Gate plain;
  Gate camo;
  camo.camo = true;
  EXPECT_EQ(model(plain, nullptr), 1.0);
  EXPECT_GT(model(camo, nullptr), 1.0);
}

TEST(Effort, SmallCase) {
  const auto e = effort_estimate(1, 1, 8, 1.0);
  EXPECT_EQ(e.pattern_count, 2);
  EXPECT_EQ(e.candidate_count, 8);
  EXPECT_EQ(e.seconds, 2);
  EXPECT_EQ(e.seconds_retest, 16);
}

TEST(Effort, FiftyInputsExact) {
  const auto e = effort_estimate(50, 100, 8, 1e9);
  EXPECT_EQ(e.pattern_count.str(), "1125899906842624");
  EXPECT_EQ(e.candidate_count, BigInt(1) << 300);
  EXPECT_NEAR(e.seconds.convert_to<double>(), 1.125899906842624e6, 1e-3);
  EXPECT_NE(e.note.find("1e5 years"), std::string::npos);
  EXPECT_NE(e.human_readable.find("days"), std::string::npos);
  EXPECT_NE(e.human_readable.find("retest"), std::string::npos);
  const auto wide = effort_estimate(4000, 1, 1, 1.0);
  EXPECT_EQ(wide.pattern_count, BigInt(1) << 4000);
  EXPECT_NE(format_duration(wide.seconds).find("years"), std::string::npos);
}

TEST(Effort, RejectsZeroArguments) {
  EXPECT_THROW(effort_estimate(0, 1, 8, 1.0), Error);
  EXPECT_THROW(effort_estimate(1, 0, 8, 1.0), Error);
  EXPECT_THROW(effort_estimate(1, 1, 0, 1.0), Error);
  EXPECT_THROW(effort_estimate(1, 1, 8, 0.5), Error);
}

}  // namespace
}  // namespace vtcamo
