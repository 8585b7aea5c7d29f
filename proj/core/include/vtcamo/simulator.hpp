// Copyright 2026 The vtcamo Authors
#ifndef VTCAMO_SIMULATOR_HPP_
#define VTCAMO_SIMULATOR_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vtcamo/camo_cell.hpp"
#include "vtcamo/netlist.hpp"

namespace vtcamo {

// For each camouflaged gate and each function, the lanes in which that
// function is (one of) the gate's candidates.
using FunctionMasks = std::array<std::uint64_t, 8>;

FunctionMasks masks_for(GateFunction f, std::uint64_t lanes = ~std::uint64_t{0});
FunctionMasks masks_for(FunctionSet set, std::uint64_t lanes = ~std::uint64_t{0});

// Three-valued word: lanes known to be 1, lanes known to be 0. A lane in
// neither is unknown.
struct Ternary {
  std::uint64_t one = 0;
  std::uint64_t zero = 0;

  static Ternary known(std::uint64_t v) { return {v, ~v}; }
  static Ternary unknown() { return {0, 0}; }
};

struct ForcedGate {
  std::size_t gate = 0;
  std::uint64_t value = 0;
};

// 64-lane bit-parallel levelized simulator over a fixed netlist. Camouflaged
// gates are driven by per-lane candidate masks, so the same kernel simulates
// many input vectors under one key or one vector under many keys.
class Simulator {
 public:
  explicit Simulator(const Netlist& netlist);

  [[nodiscard]] const Netlist& netlist() const { return *netlist_; }
  [[nodiscard]] std::size_t input_count() const { return netlist_->comb_inputs().size(); }
  [[nodiscard]] std::size_t output_count() const { return netlist_->comb_outputs().size(); }
  [[nodiscard]] std::size_t camo_count() const { return netlist_->camo_gates().size(); }
  // Ordinal of a camouflaged gate within camo_gates(), by gate index.
  [[nodiscard]] std::optional<std::size_t> camo_ordinal(std::size_t gate) const;

  // Two-valued evaluation; each lane must select exactly one function per
  // camouflaged gate. `nets` has net_count() entries.
  void eval(std::span<const std::uint64_t> inputs, std::span<const FunctionMasks> camo,
            std::span<std::uint64_t> nets) const;

  // Three-valued evaluation. A camouflaged gate's output is known in a lane
  // only if every candidate agrees over every completion of unknown inputs.
  void eval_ternary(std::span<const Ternary> inputs, std::span<const FunctionMasks> camo,
                    std::span<Ternary> nets, const ForcedGate* force = nullptr) const;

  // Convenience: outputs only.
  void eval_outputs(std::span<const std::uint64_t> inputs, std::span<const FunctionMasks> camo,
                    std::span<std::uint64_t> outputs, std::vector<std::uint64_t>& scratch) const;

 private:
  struct Op {
    std::uint32_t output;
    std::uint32_t fanin_begin;
    std::uint32_t fanin_count;
    std::int32_t camo;  // ordinal or -1
    GateFunction function;
    std::size_t gate;
  };

  const Netlist* netlist_;
  std::vector<Op> ops_;
  std::vector<NetId> fanins_;
  std::vector<std::optional<std::size_t>> ordinal_;
};

// Input words for exhaustive enumeration: word `w`, input `i` holds bit i of
// the vector index w * 64 + lane.
std::uint64_t exhaustive_word(std::size_t input, std::uint64_t word);
// Lanes that carry real vectors in word `w` of an n-input enumeration.
std::uint64_t exhaustive_lane_mask(std::size_t inputs, std::uint64_t word);
std::uint64_t exhaustive_word_count(std::size_t inputs);

}  // namespace vtcamo

#endif  // VTCAMO_SIMULATOR_HPP_
