// Copyright 2026 The vtcamo Authors
#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vtcamo/attack.hpp"
#include "vtcamo/camouflage.hpp"
#include "vtcamo/device_model.hpp"
#include "vtcamo/netlist.hpp"
#include "vtcamo/simulator.hpp"

namespace vtcamo {
namespace {

Netlist load(const std::string& name) {
  std::ifstream in(std::string(VTCAMO_BENCH_DATA) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_bench(ss.str());
}

void BM_DrainCurrent(benchmark::State& state) {
  const DeviceParams params;
  double vgs = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(drain_current(vgs, 1.0, 0.3, 300.0, params));
    vgs = vgs > 1.0 ? 0.0 : vgs + 1e-3;
  }
}
BENCHMARK(BM_DrainCurrent);

void BM_SimulateWord(benchmark::State& state) {
  const Netlist netlist = load("synth_b.bench");
  const Simulator sim(netlist);
  std::vector<std::uint64_t> inputs(sim.input_count());
  for (std::size_t i = 0; i < inputs.size(); ++i) inputs[i] = exhaustive_word(i % 6, i);
  std::vector<std::uint64_t> nets(netlist.net_count());
  for (auto _ : state) {
    sim.eval(inputs, {}, nets);
    benchmark::DoNotOptimize(nets.data());
  }
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_SimulateWord);

void BM_CheckEquivalence(benchmark::State& state) {
  const Netlist netlist = load("c17.bench");
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        check_equivalence(netlist, netlist, nullptr, nullptr, EquivalenceMode::exhaustive()));
  }
}
BENCHMARK(BM_CheckEquivalence);

void BM_Attack(benchmark::State& state) {
  const Netlist plain = load("c17.bench");
  const std::vector<std::size_t> gates = {0, 1, 2};
  const auto locked = apply_camouflage(plain, gates, CellFlavor::kCamo8);
  const Oracle oracle = make_oracle(plain);
  const bool sensitize = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sensitize
                                 ? sensitization_attack(locked.netlist, oracle)
                                 : brute_force_attack(locked.netlist, oracle,
                                                      PatternSource::exhaustive()));
  }
  state.SetLabel(sensitize ? "sensitization" : "brute_force");
}
BENCHMARK(BM_Attack)->Arg(0)->Arg(1);

}  // namespace
}  // namespace vtcamo

BENCHMARK_MAIN();
