// Copyright 2026 The vtcamo Authors
#include "vtcamo/simulator.hpp"

#include "vtcamo/error.hpp"

namespace vtcamo {

namespace {

constexpr std::uint64_t kAll = ~std::uint64_t{0};

constexpr std::uint64_t kLanePatterns[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};

std::uint64_t eval_plain(GateFunction f, const std::uint64_t* nets, const NetId* fanins,
                         std::uint32_t count) {
  std::uint64_t acc = nets[fanins[0]];
  switch (f) {
    case GateFunction::kAnd:
    case GateFunction::kNand:
      for (std::uint32_t i = 1; i < count; ++i) acc &= nets[fanins[i]];
      return f == GateFunction::kNand ? ~acc : acc;
    case GateFunction::kOr:
    case GateFunction::kNor:
      for (std::uint32_t i = 1; i < count; ++i) acc |= nets[fanins[i]];
      return f == GateFunction::kNor ? ~acc : acc;
    case GateFunction::kXor:
    case GateFunction::kXnor:
      for (std::uint32_t i = 1; i < count; ++i) acc ^= nets[fanins[i]];
      return f == GateFunction::kXnor ? ~acc : acc;
    case GateFunction::kInv: return ~nets[fanins[count - 1]];
    case GateFunction::kBuf: return nets[fanins[count - 1]];
  }
  return 0;
}

Ternary eval_plain_ternary(GateFunction f, const Ternary* nets, const NetId* fanins,
                           std::uint32_t count) {
  Ternary acc = nets[fanins[0]];
  switch (f) {
    case GateFunction::kAnd:
    case GateFunction::kNand:
      for (std::uint32_t i = 1; i < count; ++i) {
        acc.one &= nets[fanins[i]].one;
        acc.zero |= nets[fanins[i]].zero;
      }
      return f == GateFunction::kNand ? Ternary{acc.zero, acc.one} : acc;
    case GateFunction::kOr:
    case GateFunction::kNor:
      for (std::uint32_t i = 1; i < count; ++i) {
        acc.one |= nets[fanins[i]].one;
        acc.zero &= nets[fanins[i]].zero;
      }
      return f == GateFunction::kNor ? Ternary{acc.zero, acc.one} : acc;
    case GateFunction::kXor:
    case GateFunction::kXnor:
      for (std::uint32_t i = 1; i < count; ++i) {
        const Ternary& x = nets[fanins[i]];
        acc = {(acc.one & x.zero) | (acc.zero & x.one), (acc.one & x.one) | (acc.zero & x.zero)};
      }
      return f == GateFunction::kXnor ? Ternary{acc.zero, acc.one} : acc;
    case GateFunction::kInv: {
      const Ternary& x = nets[fanins[count - 1]];
      return {x.zero, x.one};
    }
    case GateFunction::kBuf: return nets[fanins[count - 1]];
  }
  return {};
}

}  // namespace

FunctionMasks masks_for(GateFunction f, std::uint64_t lanes) {
  FunctionMasks m{};
  m[static_cast<std::size_t>(f)] = lanes;
  return m;
}

FunctionMasks masks_for(FunctionSet set, std::uint64_t lanes) {
  FunctionMasks m{};
  for (auto f : set.members()) m[static_cast<std::size_t>(f)] = lanes;
  return m;
}

Simulator::Simulator(const Netlist& netlist) : netlist_(&netlist) {
  ordinal_.assign(netlist.gates().size(), std::nullopt);
  const auto camo = netlist.camo_gates();
  for (std::size_t k = 0; k < camo.size(); ++k) ordinal_[camo[k]] = k;
  for (auto g : netlist.topo_order()) {
    const Gate& gate = netlist.gate(g);
    Op op{gate.output, static_cast<std::uint32_t>(fanins_.size()),
          static_cast<std::uint32_t>(gate.fanins.size()),
          ordinal_[g] ? static_cast<std::int32_t>(*ordinal_[g]) : -1, gate.function, g};
    fanins_.insert(fanins_.end(), gate.fanins.begin(), gate.fanins.end());
    ops_.push_back(op);
  }
}

std::optional<std::size_t> Simulator::camo_ordinal(std::size_t gate) const {
  return gate < ordinal_.size() ? ordinal_[gate] : std::nullopt;
}

void Simulator::eval(std::span<const std::uint64_t> inputs, std::span<const FunctionMasks> camo,
                     std::span<std::uint64_t> nets) const {
  const auto ins = netlist_->comb_inputs();
  if (inputs.size() != ins.size() || nets.size() != netlist_->net_count() ||
      camo.size() < camo_count()) {
    throw Error(ErrorKind::kInvalidInput, "simulator buffer sizes do not match the netlist");
  }
  for (std::size_t i = 0; i < ins.size(); ++i) nets[ins[i]] = inputs[i];
  std::uint64_t* v = nets.data();
  for (const Op& op : ops_) {
    const NetId* f = fanins_.data() + op.fanin_begin;
    if (op.camo < 0) {
      v[op.output] = eval_plain(op.function, v, f, op.fanin_count);
      continue;
    }
    const FunctionMasks& masks = camo[static_cast<std::size_t>(op.camo)];
    const std::uint64_t a = v[f[0]];
    const std::uint64_t b = v[f[1]];
    const std::uint64_t y[8] = {~(a & b), a & b, ~(a | b), a | b, a ^ b, ~(a ^ b), ~b, b};
    std::uint64_t out = 0;
    for (int k = 0; k < 8; ++k) out |= masks[k] & y[k];
    v[op.output] = out;
  }
}

void Simulator::eval_ternary(std::span<const Ternary> inputs, std::span<const FunctionMasks> camo,
                             std::span<Ternary> nets, const ForcedGate* force) const {
  const auto ins = netlist_->comb_inputs();
  if (inputs.size() != ins.size() || nets.size() != netlist_->net_count() ||
      camo.size() < camo_count()) {
    throw Error(ErrorKind::kInvalidInput, "simulator buffer sizes do not match the netlist");
  }
  for (std::size_t i = 0; i < ins.size(); ++i) nets[ins[i]] = inputs[i];
  Ternary* v = nets.data();
  for (const Op& op : ops_) {
    if (force != nullptr && op.gate == force->gate) {
      v[op.output] = Ternary::known(force->value);
      continue;
    }
    const NetId* f = fanins_.data() + op.fanin_begin;
    if (op.camo < 0) {
      v[op.output] = eval_plain_ternary(op.function, v, f, op.fanin_count);
      continue;
    }
    const FunctionMasks& masks = camo[static_cast<std::size_t>(op.camo)];
    const Ternary a = v[f[0]];
    const Ternary b = v[f[1]];
    // Lanes where the pins could take each local pattern.
    const std::uint64_t a0 = ~a.one, a1 = ~a.zero, b0 = ~b.one, b1 = ~b.zero;
    const std::uint64_t compat[4] = {a0 & b0, a0 & b1, a1 & b0, a1 & b1};
    std::uint64_t can1 = 0, can0 = 0, any = 0;
    for (int k = 0; k < 8; ++k) {
      if (masks[k] == 0) continue;
      any |= masks[k];
      const auto table = cell_table(static_cast<GateFunction>(k));
      for (int p = 0; p < 4; ++p) {
        if ((table >> p) & 1u) {
          can1 |= masks[k] & compat[p];
        } else {
          can0 |= masks[k] & compat[p];
        }
      }
    }
    v[op.output] = {any & ~can0, any & ~can1};
  }
}

void Simulator::eval_outputs(std::span<const std::uint64_t> inputs,
                             std::span<const FunctionMasks> camo,
                             std::span<std::uint64_t> outputs,
                             std::vector<std::uint64_t>& scratch) const {
  scratch.resize(netlist_->net_count());
  eval(inputs, camo, scratch);
  const auto outs = netlist_->comb_outputs();
  for (std::size_t i = 0; i < outs.size(); ++i) outputs[i] = scratch[outs[i]];
}

std::uint64_t exhaustive_word(std::size_t input, std::uint64_t word) {
  if (input < 6) return kLanePatterns[input];
  return ((word >> (input - 6)) & 1u) ? kAll : 0;
}

std::uint64_t exhaustive_lane_mask(std::size_t inputs, std::uint64_t /*word*/) {
  if (inputs >= 6) return kAll;
  return (std::uint64_t{1} << (std::uint64_t{1} << inputs)) - 1;
}

std::uint64_t exhaustive_word_count(std::size_t inputs) {
  return inputs <= 6 ? 1 : (std::uint64_t{1} << (inputs - 6));
}

}  // namespace vtcamo
