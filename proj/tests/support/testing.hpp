// Copyright 2026 The vtcamo Authors
// Seeded generators and independent reference oracles shared by the tests.
#ifndef VTCAMO_TESTS_SUPPORT_TESTING_HPP_
#define VTCAMO_TESTS_SUPPORT_TESTING_HPP_

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vtcamo/camo_cell.hpp"
#include "vtcamo/netlist.hpp"

namespace vtcamo::testing {

inline std::string data_path(const std::string& name) {
  return std::string(VTCAMO_TEST_DATA) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Netlist load(const std::string& name) { return parse_bench(read_file(data_path(name))); }

struct NetlistShape {
  int inputs = 6;
  int gates = 20;
  int outputs = 3;
  double inverter_share = 0.15;
  double wide_share = 0.1;  // share of 3-input gates
};

// Random combinational DAG. Every gate output that nothing reads becomes a
// primary output, so no logic is dead.
inline Netlist random_netlist(std::mt19937_64& rng, const NetlistShape& shape) {
  NetlistBuilder b;
  std::vector<std::string> nets;
  for (int i = 0; i < shape.inputs; ++i) {
    nets.push_back("i" + std::to_string(i));
    b.add_input(nets.back());
  }
  static constexpr GateFunction kTwo[] = {GateFunction::kNand, GateFunction::kAnd,
                                          GateFunction::kNor,  GateFunction::kOr,
                                          GateFunction::kXor,  GateFunction::kXnor};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int> readers;
  readers.assign(static_cast<std::size_t>(shape.inputs), 0);
  for (int g = 0; g < shape.gates; ++g) {
    const std::string out = "g" + std::to_string(g);
    auto pick = [&] {
      const std::size_t window = std::min<std::size_t>(nets.size(), 12);
      const std::size_t lo = u(rng) < 0.7 ? nets.size() - window : 0;
      return std::uniform_int_distribution<std::size_t>(lo, nets.size() - 1)(rng);
    };
    std::vector<std::string> fanins;
    GateFunction f;
    if (u(rng) < shape.inverter_share) {
      f = u(rng) < 0.7 ? GateFunction::kInv : GateFunction::kBuf;
      const auto k = pick();
      ++readers[k];
      fanins.push_back(nets[k]);
    } else {
      f = kTwo[std::uniform_int_distribution<int>(0, 5)(rng)];
      const int arity = (nets.size() >= 3 && u(rng) < shape.wide_share) ? 3 : 2;
      std::vector<std::size_t> chosen;
      while (static_cast<int>(chosen.size()) < arity) {
        const auto k = pick();
        if (std::find(chosen.begin(), chosen.end(), k) == chosen.end()) chosen.push_back(k);
      }
      for (auto k : chosen) {
        ++readers[k];
        fanins.push_back(nets[k]);
      }
    }
    b.add_gate(out, f, fanins);
    nets.push_back(out);
    readers.push_back(0);
  }
  int outs = 0;
  for (std::size_t k = static_cast<std::size_t>(shape.inputs); k < nets.size(); ++k) {
    if (readers[k] == 0) {
      b.add_output(nets[k]);
      ++outs;
    }
  }
  for (std::size_t k = nets.size(); outs < shape.outputs && k-- > static_cast<std::size_t>(shape.inputs);) {
    if (readers[k] != 0) {
      b.add_output(nets[k]);
      readers[k] = 0;
      ++outs;
    }
  }
  return b.build();
}

inline std::vector<bool> bits_of(std::uint64_t index, std::size_t n) {
  std::vector<bool> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = ((index >> i) & 1u) != 0;
  return v;
}

// Straightforward recursive evaluation straight from the Boolean
// definitions, sharing no code with the bit-parallel simulator.
inline std::vector<bool> reference_eval(const Netlist& n, const std::vector<bool>& inputs,
                                        const CamoKey* key = nullptr) {
  std::map<NetId, bool> value;
  const auto ins = n.comb_inputs();
  for (std::size_t i = 0; i < ins.size(); ++i) value[ins[i]] = inputs[i];
  std::function<bool(NetId)> net = [&](NetId id) -> bool {
    if (auto it = value.find(id); it != value.end()) return it->second;
    const Gate& g = n.gate(*n.driver(id));
    bool out = false;
    if (g.camo) {
      const GateFunction f = key->find(g.name)->function;
      const bool a = net(g.fanins[0]);
      const bool b = net(g.fanins[1]);
      switch (f) {
        case GateFunction::kNand: out = !(a && b); break;
        case GateFunction::kAnd: out = a && b; break;
        case GateFunction::kNor: out = !(a || b); break;
        case GateFunction::kOr: out = a || b; break;
        case GateFunction::kXor: out = a != b; break;
        case GateFunction::kXnor: out = a == b; break;
        case GateFunction::kInv: out = !b; break;
        case GateFunction::kBuf: out = b; break;
      }
    } else {
      std::vector<bool> x;
      for (auto in : g.fanins) x.push_back(net(in));
      bool all = true, any = false, parity = false;
      for (bool v : x) {
        all = all && v;
        any = any || v;
        parity = parity != v;
      }
      switch (g.function) {
        case GateFunction::kNand: out = !all; break;
        case GateFunction::kAnd: out = all; break;
        case GateFunction::kNor: out = !any; break;
        case GateFunction::kOr: out = any; break;
        case GateFunction::kXor: out = parity; break;
        case GateFunction::kXnor: out = !parity; break;
        case GateFunction::kInv: out = !x.back(); break;
        case GateFunction::kBuf: out = x.back(); break;
      }
    }
    value[id] = out;
    return out;
  };
  std::vector<bool> outs;
  for (auto o : n.comb_outputs()) outs.push_back(net(o));
  return outs;
}

// Every input vector, evaluated by the reference oracle.
inline bool reference_equivalent(const Netlist& a, const CamoKey* ka, const Netlist& b,
                                 const CamoKey* kb) {
  const std::size_t n = a.comb_inputs().size();
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
    const auto x = bits_of(v, n);
    if (reference_eval(a, x, ka) != reference_eval(b, x, kb)) return false;
  }
  return true;
}

}  // namespace vtcamo::testing

#endif  // VTCAMO_TESTS_SUPPORT_TESTING_HPP_
