// Copyright 2026 The vtcamo Authors
#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "support/testing.hpp"
#include "vtcamo/error.hpp"
#include "vtcamo/netlist.hpp"
#include "vtcamo/simulator.hpp"

namespace vtcamo {
namespace {

using testing::bits_of;
using testing::load;
using testing::reference_eval;

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kIo;
}

TEST(Parse, SingleNand) {
  const auto n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NAND(a, b)\n");
  EXPECT_EQ(n.gates().size(), 1u);
  EXPECT_EQ(simulate(n, {true, true}), std::vector<bool>{false});
  EXPECT_EQ(simulate(n, {false, true}), std::vector<bool>{true});
}

TEST(Parse, CamoPlaceholderNeedsKey) {
  const auto n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = CAMO8(a, b)\n");
  ASSERT_EQ(n.camo_gates().size(), 1u);
  EXPECT_TRUE(n.gate(0).camo);
  EXPECT_EQ(n.gate(0).flavor, CellFlavor::kCamo8);
  EXPECT_EQ(kind_of([&] { simulate(n, {true, false}); }), ErrorKind::kUnresolvedGate);
  CamoKey key;
  key.entries["y"] = {GateFunction::kXor, std::nullopt};
  EXPECT_EQ(simulate(n, {true, false}, &key), std::vector<bool>{true});
}

TEST(Parse, C17MatchesHandEvaluation) {
  const auto n = load("c17.bench");
  EXPECT_EQ(n.gates().size(), 6u);
  EXPECT_EQ(n.primary_inputs().size(), 5u);
  EXPECT_EQ(n.primary_outputs().size(), 2u);
  // Inputs (1,2,3,6,7) = (1,0,1,1,0): 10=0, 11=0, 16=1, 19=1, 22=1, 23=0.
  EXPECT_EQ(simulate(n, {true, false, true, true, false}), (std::vector<bool>{true, false}));
}

TEST(Parse, DialectDetails) {
  const auto n = parse_bench(
      "# comment\r\ninput(a)\r\nINPUT(b)\r\nINPUT(c)\r\nOUTPUT(y)\r\nOUTPUT(z)\r\n"
      "t = and(a, b, c)   # trailing\r\nu = NOT(t)\r\ny = BUFF(u)\r\nz = XOR(a, b, c)\r\n");
  EXPECT_EQ(n.gates().size(), 4u);
  EXPECT_EQ(n.gate(0).fanins.size(), 3u);
  EXPECT_EQ(n.gate(1).function, GateFunction::kInv);
  EXPECT_EQ(n.gate(2).function, GateFunction::kBuf);
  EXPECT_EQ(simulate(n, {true, true, true}), (std::vector<bool>{false, true}));
}

TEST(Parse, ErrorKindsAreDistinct) {
  EXPECT_EQ(kind_of([] { parse_bench("INPUT(a)\nOUTPUT(y)\ny = MUX(a, a)\n"); }),
            ErrorKind::kSyntax);
  EXPECT_EQ(kind_of([] { parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a, q)\n"); }),
            ErrorKind::kUndefinedNet);
  EXPECT_EQ(kind_of([] { parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a, z)\nz = OR(a, y)\n"); }),
            ErrorKind::kCycle);
  EXPECT_EQ(kind_of([] { parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NOT(a, b)\n"); }),
            ErrorKind::kArityMismatch);
  EXPECT_EQ(kind_of([] { parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a)\n"); }),
            ErrorKind::kArityMismatch);
  EXPECT_EQ(
      kind_of([] { parse_bench("INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(y)\ny = CAMO8(a, b, c)\n"); }),
      ErrorKind::kArityMismatch);
  EXPECT_EQ(kind_of([] { parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\ny = BUFF(a)\n"); }),
            ErrorKind::kDuplicateDefinition);
  EXPECT_EQ(kind_of([] { parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a\n"); }), ErrorKind::kSyntax);
}

TEST(Parse, SyntaxErrorCarriesPosition) {
  try {
    parse_bench("INPUT(a)\nOUTPUT(y)\ny = MUX(a, a)\n");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 5);
  }
}

TEST(Parse, FlipFlopsAreCutPoints) {
  const auto n = parse_bench(
      "INPUT(a)\nOUTPUT(y)\nq = DFF(d)\nd = XOR(a, q)\ny = NOT(q)\n");
  EXPECT_EQ(n.dffs().size(), 1u);
  EXPECT_EQ(n.comb_inputs().size(), 2u);   // a, q
  EXPECT_EQ(n.comb_outputs().size(), 2u);  // y, d
  EXPECT_EQ(simulate(n, {true, false}), (std::vector<bool>{true, true}));
}

TEST(Serialize, RoundTripOnCorpusAndRandomNetlists) {
  for (const char* name : {"c17.bench", "synth_a.bench", "synth_b.bench"}) {
    const auto n = load(name);
    const auto again = parse_bench(serialize_bench(n));
    EXPECT_EQ(n, again) << name;
    EXPECT_EQ(serialize_bench(again), serialize_bench(n));
  }
  std::mt19937_64 rng(99);
  for (int i = 0; i < 50; ++i) {
    const auto n = testing::random_netlist(rng, {5, 25, 3});
    EXPECT_EQ(parse_bench(serialize_bench(n)), n);
  }
}

TEST(Key, ParseSerializeValidate) {
  const auto n = parse_bench(
      "INPUT(a)\nINPUT(b)\nOUTPUT(y)\nOUTPUT(z)\ny = CAMO8(a, b)\nz = CMOS3A(b, y)\n");
  const auto key = parse_key("# secret\ny=INV,decoy=a\nz = XOR\n");
  EXPECT_EQ(key.entries.size(), 2u);
  EXPECT_EQ(key.find("y")->decoy, std::optional<std::string>("a"));
  EXPECT_NO_THROW(validate_key(n, key));
  EXPECT_EQ(parse_key(serialize_key(key, &n)), key);
  EXPECT_NE(serialize_key(key, &n).find("CAMO8:"), std::string::npos);

  auto missing = key;
  missing.entries.erase("z");
  EXPECT_EQ(kind_of([&] { validate_key(n, missing); }), ErrorKind::kUnresolvedGate);
  auto wrong_flavor = key;
  wrong_flavor.entries["z"] = {GateFunction::kAnd, std::nullopt};
  EXPECT_EQ(kind_of([&] { validate_key(n, wrong_flavor); }), ErrorKind::kInvalidConfig);
  auto wrong_decoy = key;
  wrong_decoy.entries["y"].decoy = "b";
  EXPECT_EQ(kind_of([&] { validate_key(n, wrong_decoy); }), ErrorKind::kInvalidConfig);
  auto extra = key;
  extra.entries["w"] = {GateFunction::kNand, std::nullopt};
  EXPECT_EQ(kind_of([&] { validate_key(n, extra); }), ErrorKind::kInvalidConfig);
  EXPECT_EQ(kind_of([] { parse_key("y=FROB\n"); }), ErrorKind::kSyntax);
  EXPECT_EQ(kind_of([] { parse_key("y=INV,decoy\n"); }), ErrorKind::kSyntax);
}

TEST(Simulate, WidthMismatchAndXor) {
  const auto n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = XOR(a, b)\n");
  EXPECT_EQ(simulate(n, {true, false}), std::vector<bool>{true});
  EXPECT_EQ(kind_of([&] { simulate(n, {true}); }), ErrorKind::kInvalidInput);
}

TEST(Simulate, PassthroughNetlist) {
  const auto n = parse_bench("INPUT(a)\nOUTPUT(a)\n");
  EXPECT_EQ(simulate(n, {true}), std::vector<bool>{true});
  EXPECT_EQ(simulate(n, {false}), std::vector<bool>{false});
}

TEST(Simulate, AgreesWithReferenceOracle) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    const auto n = testing::random_netlist(rng, {7, 40, 4, 0.2, 0.2});
    for (std::uint64_t v = 0; v < 128; ++v) {
      const auto x = bits_of(v, 7);
      ASSERT_EQ(simulate(n, x), reference_eval(n, x));
    }
  }
}

TEST(Simulator, TernaryAgreesWithBinaryOnKnownInputs) {
  std::mt19937_64 rng(17);
  const auto n = testing::random_netlist(rng, {6, 30, 3});
  const Simulator sim(n);
  std::vector<std::uint64_t> in(6), nets(n.net_count());
  std::vector<Ternary> tin(6), tnets(n.net_count());
  for (std::size_t i = 0; i < 6; ++i) {
    in[i] = exhaustive_word(i, 0);
    tin[i] = Ternary::known(in[i]);
  }
  sim.eval(in, {}, nets);
  sim.eval_ternary(tin, {}, tnets);
  for (NetId k = 0; k < n.net_count(); ++k) {
    EXPECT_EQ(tnets[k].one, nets[k]);
    EXPECT_EQ(tnets[k].zero, ~nets[k]);
  }
}

TEST(Equivalence, SelfAndNandVersusAnd) {
  for (const char* name : {"c17.bench", "synth_a.bench"}) {
    const auto n = load(name);
    EXPECT_TRUE(check_equivalence(n, n, nullptr, nullptr, EquivalenceMode::exhaustive()).equivalent);
  }
  const auto a = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NAND(a, b)\n");
  const auto b = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n");
  const auto v = check_equivalence(a, b, nullptr, nullptr, EquivalenceMode::exhaustive());
  EXPECT_FALSE(v.equivalent);
  ASSERT_TRUE(v.counterexample.has_value());
  EXPECT_EQ(*v.counterexample, (std::vector<bool>{false, false}));
}

TEST(Equivalence, SignatureMismatch) {
  const auto a = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NAND(a, b)\n");
  const auto b = parse_bench("INPUT(a)\nINPUT(c)\nOUTPUT(y)\ny = NAND(a, c)\n");
  EXPECT_EQ(kind_of([&] { check_equivalence(a, b, nullptr, nullptr, EquivalenceMode::exhaustive()); }),
            ErrorKind::kIncompatibleNetlists);
}

TEST(Equivalence, AgreesWithReferenceOracleOnMutants) {
  std::mt19937_64 rng(23);
  int differing = 0;
  for (int i = 0; i < 60; ++i) {
    const auto n = testing::random_netlist(rng, {6, 20, 3});
    auto builder = n.to_builder();
    auto& g = builder.gates()[std::uniform_int_distribution<std::size_t>(0, 19)(rng)];
    if (g.fanins.size() >= 2) {
      g.function = g.function == GateFunction::kNand ? GateFunction::kNor : GateFunction::kNand;
    } else {
      g.function = g.function == GateFunction::kInv ? GateFunction::kBuf : GateFunction::kInv;
    }
    const auto m = builder.build();
    const bool expected = testing::reference_equivalent(n, nullptr, m, nullptr);
    for (unsigned jobs : {1u, 3u}) {
      const auto v = check_equivalence(n, m, nullptr, nullptr, EquivalenceMode::exhaustive(), jobs);
      EXPECT_EQ(v.equivalent, expected);
      if (!v.equivalent) {
        EXPECT_NE(reference_eval(n, *v.counterexample), reference_eval(m, *v.counterexample));
      }
    }
    differing += expected ? 0 : 1;
  }
  EXPECT_GT(differing, 10);
}

TEST(Equivalence, RandomModeIsReproducible) {
  const auto n = load("synth_b.bench");
  auto builder = n.to_builder();
  builder.gates()[10].function = GateFunction::kXnor;
  const auto m = builder.build();
  const auto a = check_equivalence(n, m, nullptr, nullptr, EquivalenceMode::random(4096, 3));
  const auto b = check_equivalence(n, m, nullptr, nullptr, EquivalenceMode::random(4096, 3), 2);
  EXPECT_EQ(a.equivalent, b.equivalent);
  EXPECT_EQ(a.counterexample, b.counterexample);
  EXPECT_EQ(a.vectors_checked, b.vectors_checked);
}

TEST(Equivalence, ExhaustiveGuard) {
  std::string text;
  for (int i = 0; i < 25; ++i) text += "INPUT(i" + std::to_string(i) + ")\n";
  text += "OUTPUT(i0)\n";
  const auto n = parse_bench(text);
  EXPECT_THROW(check_equivalence(n, n, nullptr, nullptr, EquivalenceMode::exhaustive()), Error);
  EXPECT_TRUE(check_equivalence(n, n, nullptr, nullptr, EquivalenceMode::random(100, 1)).equivalent);
}

TEST(CriticalPath, SmallCases) {
  const auto one = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NAND(a, b)\n");
  const auto p1 = critical_path(one, nullptr, unit_delay());
  EXPECT_EQ(p1.gates.size(), 1u);
  EXPECT_EQ(p1.delay, 1.0);
  const auto chain = parse_bench("INPUT(a)\nOUTPUT(z)\nx = NOT(a)\ny = NOT(x)\nz = NOT(y)\n");
  const auto p3 = critical_path(chain, nullptr, unit_delay());
  EXPECT_EQ(p3.gates, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(p3.delay, 3.0);
}

TEST(CriticalPath, CamoGateAddsExactlyItsExcessDelay) {
  const auto plain = parse_bench(
      "INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(z)\nx = NAND(a, b)\ny = NAND(x, c)\nz = NOT(y)\n"
      "w = NOT(a)\n");
  const auto camo = parse_bench(
      "INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(z)\nx = NAND(a, b)\ny = CAMO8(x, c)\nz = NOT(y)\n"
      "w = NOT(a)\n");
  CamoKey key;
  key.entries["y"] = {GateFunction::kNand, std::nullopt};
  const double dc = 2.5;
  const DelayModel model = [&](const Gate& g, const KeyEntry*) { return g.camo ? dc : 1.0; };
  EXPECT_DOUBLE_EQ(critical_path(camo, &key, model).delay - critical_path(plain, nullptr, model).delay,
                   dc - 1.0);
}

// Longest path by explicit enumeration of every source-to-sink path.
double brute_longest(const Netlist& n, const DelayModel& model) {
  double best = 0.0;
  std::function<void(std::size_t, double)> walk = [&](std::size_t g, double acc) {
    acc += model(n.gate(g), nullptr);
    const NetId out = n.gate(g).output;
    const auto outs = n.comb_outputs();
    if (std::find(outs.begin(), outs.end(), out) != outs.end()) best = std::max(best, acc);
    for (auto r : n.fanout(out)) walk(r, acc);
  };
  for (std::size_t g = 0; g < n.gates().size(); ++g) {
    bool source = true;
    for (auto in : n.gate(g).fanins) source = source && !n.driver(in).has_value();
    if (source) walk(g, 0.0);
  }
  return best;
}

TEST(CriticalPath, MatchesPathEnumerationOnSmallNetlists) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const auto n = testing::random_netlist(rng, {4, 12, 2});
    std::vector<double> delay(n.gates().size());
    for (auto& d : delay) d = std::uniform_real_distribution<double>(0.5, 3.0)(rng);
    const DelayModel model = [&](const Gate& g, const KeyEntry*) {
      return delay[*n.find_gate(g.name)];
    };
    const auto cp = critical_path(n, nullptr, model);
    EXPECT_NEAR(cp.delay, brute_longest(n, model), 1e-12);
    double sum = 0.0;
    for (auto g : cp.gates) sum += delay[g];
    EXPECT_NEAR(sum, cp.delay, 1e-12);
    for (std::size_t k = 1; k < cp.gates.size(); ++k) {
      const auto& fanins = n.gate(cp.gates[k]).fanins;
      EXPECT_NE(std::find(fanins.begin(), fanins.end(), n.gate(cp.gates[k - 1]).output),
                fanins.end());
    }
  }
}

TEST(Timing, SlackIsZeroOnCriticalPath) {
  const auto n = load("synth_a.bench");
  const auto t = analyze_timing(n, nullptr, unit_delay());
  const auto cp = critical_path(n, nullptr, unit_delay());
  EXPECT_DOUBLE_EQ(t.critical_delay, cp.delay);
  for (auto g : cp.gates) EXPECT_NEAR(t.slack[g], 0.0, 1e-12);
  for (double s : t.slack) EXPECT_GE(s, -1e-12);
}

}  // namespace
}  // namespace vtcamo
