// Copyright 2026 The vtcamo Authors
#ifndef VTCAMO_NETLIST_HPP_
#define VTCAMO_NETLIST_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vtcamo/camo_cell.hpp"

namespace vtcamo {

using NetId = std::uint32_t;

// A gate is named after the net it drives. Camouflaged gates are
// placeholders: the netlist records the cell flavor (visible in layout) but
// not the function, which lives in a CamoKey.
struct Gate {
  std::string name;
  NetId output = 0;
  std::vector<NetId> fanins;
  bool camo = false;
  GateFunction function = GateFunction::kBuf;  // plain gates only
  CellFlavor flavor = CellFlavor::kCamo8;      // camo gates only
};

// Flip-flops are cut: q is a pseudo primary input, d a pseudo primary output.
struct Dff {
  NetId q = 0;
  NetId d = 0;
};

class NetlistBuilder;

// Validated combinational netlist. Immutable; transforms go through
// to_builder().
class Netlist {
 public:
  Netlist() = default;

  [[nodiscard]] std::size_t net_count() const { return net_names_.size(); }
  [[nodiscard]] const std::string& net_name(NetId id) const { return net_names_.at(id); }
  [[nodiscard]] std::optional<NetId> find_net(std::string_view name) const;

  [[nodiscard]] std::span<const Gate> gates() const { return gates_; }
  [[nodiscard]] const Gate& gate(std::size_t index) const { return gates_.at(index); }
  [[nodiscard]] std::optional<std::size_t> find_gate(std::string_view name) const;
  // Index of the gate driving `net`, if any.
  [[nodiscard]] std::optional<std::size_t> driver(NetId net) const;

  [[nodiscard]] std::span<const NetId> primary_inputs() const { return inputs_; }
  [[nodiscard]] std::span<const NetId> primary_outputs() const { return outputs_; }
  [[nodiscard]] std::span<const Dff> dffs() const { return dffs_; }

  // Primary inputs followed by flip-flop outputs.
  [[nodiscard]] std::span<const NetId> comb_inputs() const { return comb_inputs_; }
  // Primary outputs followed by flip-flop inputs.
  [[nodiscard]] std::span<const NetId> comb_outputs() const { return comb_outputs_; }

  // Gate indices in a topological order (deterministic).
  [[nodiscard]] std::span<const std::size_t> topo_order() const { return topo_; }
  // Gate indices of camouflaged placeholders, in file order.
  [[nodiscard]] std::span<const std::size_t> camo_gates() const { return camo_; }
  // Longest gate distance from any combinational input (inputs are level 0).
  [[nodiscard]] int net_level(NetId net) const { return level_.at(net); }
  // Gates reading each net.
  [[nodiscard]] std::span<const std::size_t> fanout(NetId net) const { return fanout_.at(net); }

  [[nodiscard]] NetlistBuilder to_builder() const;

  // Structural equality by names (net ids may differ).
  friend bool operator==(const Netlist& a, const Netlist& b);

 private:
  friend class NetlistBuilder;

  std::vector<std::string> net_names_;
  std::unordered_map<std::string, NetId> net_index_;
  std::vector<Gate> gates_;
  std::unordered_map<std::string, std::size_t> gate_index_;
  std::vector<NetId> inputs_;
  std::vector<NetId> outputs_;
  std::vector<Dff> dffs_;
  std::vector<NetId> comb_inputs_;
  std::vector<NetId> comb_outputs_;
  std::vector<std::optional<std::size_t>> driver_;
  std::vector<std::vector<std::size_t>> fanout_;
  std::vector<std::size_t> topo_;
  std::vector<std::size_t> camo_;
  std::vector<int> level_;
};

class NetlistBuilder {
 public:
  NetId net(std::string_view name);
  void add_input(std::string_view name) { inputs_.push_back(net(name)); }
  void add_output(std::string_view name) { outputs_.push_back(net(name)); }
  void add_dff(std::string_view q, std::string_view d) { dffs_.push_back({net(q), net(d)}); }
  std::size_t add_gate(std::string_view output, GateFunction f,
                       const std::vector<std::string>& fanins);
  std::size_t add_camo_gate(std::string_view output, CellFlavor flavor,
                            const std::vector<std::string>& fanins);

  [[nodiscard]] std::vector<Gate>& gates() { return gates_; }

  // Validates (undefined nets, duplicate drivers, arity, cycles) and freezes.
  [[nodiscard]] Netlist build() const;

 private:
  friend class Netlist;
  std::vector<std::string> net_names_;
  std::unordered_map<std::string, NetId> net_index_;
  std::vector<Gate> gates_;
  std::vector<NetId> inputs_;
  std::vector<NetId> outputs_;
  std::vector<Dff> dffs_;
};

// ---------------------------------------------------------------------------
// Bench format
// ---------------------------------------------------------------------------

// ISCAS bench dialect plus CAMO8/CMOS3A/CMOS3B placeholders.
Netlist parse_bench(std::string_view text);
std::string serialize_bench(const Netlist& netlist);

// ---------------------------------------------------------------------------
// Secret key
// ---------------------------------------------------------------------------

struct KeyEntry {
  GateFunction function = GateFunction::kNand;
  std::optional<std::string> decoy;  // INV/BUF only

  friend bool operator==(const KeyEntry&, const KeyEntry&) = default;
};

struct CamoKey {
  std::map<std::string, KeyEntry> entries;

  [[nodiscard]] const KeyEntry* find(const std::string& gate) const {
    auto it = entries.find(gate);
    return it == entries.end() ? nullptr : &it->second;
  }
  friend bool operator==(const CamoKey&, const CamoKey&) = default;
};

// One line per gate: `<gate_id>=<FUNCTION>[,decoy=<net>]`; `#` comments.
CamoKey parse_key(std::string_view text);
std::string serialize_key(const CamoKey& key, const Netlist* netlist = nullptr);

// Checks that `key` covers exactly the camouflaged gates with functions their
// flavor can realize, and that decoys match the wiring.
void validate_key(const Netlist& netlist, const CamoKey& key);

// ---------------------------------------------------------------------------
// Simulation, equivalence, timing
// ---------------------------------------------------------------------------

// Evaluates the combinational outputs for one combinational input vector.
std::vector<bool> simulate(const Netlist& netlist, const std::vector<bool>& inputs,
                           const CamoKey* key = nullptr);

inline constexpr int kMaxExhaustiveInputs = 24;

struct EquivalenceMode {
  enum class Kind { kExhaustive, kRandom } kind = Kind::kExhaustive;
  std::uint64_t vectors = 0;  // random mode
  std::uint64_t seed = 0;     // random mode

  static EquivalenceMode exhaustive() { return {}; }
  static EquivalenceMode random(std::uint64_t n, std::uint64_t seed) {
    return {Kind::kRandom, n, seed};
  }
};

struct EquivalenceVerdict {
  bool equivalent = true;
  std::optional<std::vector<bool>> counterexample;
  std::uint64_t vectors_checked = 0;
};

EquivalenceVerdict check_equivalence(const Netlist& a, const Netlist& b, const CamoKey* key_a,
                                     const CamoKey* key_b, EquivalenceMode mode,
                                     unsigned jobs = 1);

// Delay of one gate; `entry` is the key entry for camouflaged gates (may be
// null when the function is unknown).
using DelayModel = std::function<double(const Gate& gate, const KeyEntry* entry)>;

DelayModel unit_delay();

struct CriticalPath {
  std::vector<std::size_t> gates;  // source to sink
  double delay = 0.0;
};

// Longest path to any combinational output; ties go to the smallest gate
// index.
CriticalPath critical_path(const Netlist& netlist, const CamoKey* key, const DelayModel& delay);

// Per-gate arrival (at output) and slack against the critical delay.
struct TimingAnalysis {
  std::vector<double> arrival;
  std::vector<double> slack;
  double critical_delay = 0.0;
};
TimingAnalysis analyze_timing(const Netlist& netlist, const CamoKey* key, const DelayModel& delay);

}  // namespace vtcamo

#endif  // VTCAMO_NETLIST_HPP_
