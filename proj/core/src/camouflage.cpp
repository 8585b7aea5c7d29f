// Copyright 2026 The vtcamo Authors
#include "vtcamo/camouflage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_set>

#include "vtcamo/error.hpp"

namespace vtcamo {

CostTable CostTable::defaults() {
  CostTable t;
  t.entries[CellFlavor::kCamo8] = {4.0, 4.0, 2.0};
  t.entries[CellFlavor::kCmos3A] = {2.0, 2.0, 1.5};
  t.entries[CellFlavor::kCmos3B] = {2.0, 2.0, 1.5};
  return t;
}

const CostEntry& CostTable::at(CellFlavor flavor) const {
  auto it = entries.find(flavor);
  if (it == entries.end()) {
    throw Error(ErrorKind::kInvalidConfig,
                "cost table has no entry for " + std::string(to_string(flavor)));
  }
  return it->second;
}

void CostTable::validate() const {
  for (const auto& [flavor, e] : entries) {
    for (double m : {e.area_multiple, e.power_multiple, e.delay_multiple}) {
      if (!std::isfinite(m) || m < 1.0) {
        throw Error(ErrorKind::kInvalidConfig,
                    "cost multiples must be >= 1 (" + std::string(to_string(flavor)) + ")");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Transform
// ---------------------------------------------------------------------------

namespace {

bool single_input(GateFunction f) { return f == GateFunction::kInv || f == GateFunction::kBuf; }

// Nets reachable forward from `net`, including itself.
std::vector<bool> fanout_cone(const Netlist& netlist, NetId net) {
  std::vector<bool> in_cone(netlist.net_count(), false);
  std::vector<NetId> stack{net};
  in_cone[net] = true;
  while (!stack.empty()) {
    const NetId n = stack.back();
    stack.pop_back();
    for (auto reader : netlist.fanout(n)) {
      const NetId out = netlist.gate(reader).output;
      if (!in_cone[out]) {
        in_cone[out] = true;
        stack.push_back(out);
      }
    }
  }
  return in_cone;
}

// Nets that may feed pin 1 of a camouflaged INV/BUF without creating a
// cycle: defined, outside the gate's fanout cone, not the signal itself.
std::vector<NetId> decoy_candidates(const Netlist& netlist, std::size_t gate) {
  const Gate& g = netlist.gate(gate);
  const auto cone = fanout_cone(netlist, g.output);
  std::vector<NetId> out;
  for (NetId n = 0; n < netlist.net_count(); ++n) {
    if (cone[n] || n == g.fanins.back()) continue;
    const bool defined = netlist.driver(n).has_value() ||
                         std::find(netlist.comb_inputs().begin(), netlist.comb_inputs().end(),
                                   n) != netlist.comb_inputs().end();
    if (defined) out.push_back(n);
  }
  return out;
}

}  // namespace

bool camouflageable(const Netlist& netlist, std::size_t gate, CellFlavor flavor) {
  const Gate& g = netlist.gate(gate);
  if (g.camo || !function_set(flavor).contains(g.function)) return false;
  return g.fanins.size() == (single_input(g.function) ? 1u : 2u);
}

CamouflageResult apply_camouflage(const Netlist& netlist, std::span<const std::size_t> gates,
                                  CellFlavor flavor, const CamouflageOptions& options) {
  std::vector<std::size_t> order(gates.begin(), gates.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  for (auto gi : order) {
    if (gi >= netlist.gates().size()) {
      throw Error(ErrorKind::kInvalidParameter, "gate index out of range");
    }
    const Gate& g = netlist.gate(gi);
    if (g.camo) {
      throw Error(ErrorKind::kUnsupportedFunction, "gate '" + g.name + "' is already camouflaged");
    }
    if (!function_set(flavor).contains(g.function)) {
      throw Error(ErrorKind::kUnsupportedFunction,
                  "gate '" + g.name + "' (" + std::string(to_string(g.function)) +
                      ") cannot be hidden in a " + std::string(to_string(flavor)) + " cell");
    }
    if (!camouflageable(netlist, gi, flavor)) {
      throw Error(ErrorKind::kUnsupportedFunction,
                  "gate '" + g.name + "' has " + std::to_string(g.fanins.size()) +
                      " inputs; camouflaged cells are 2-input");
    }
  }

  std::optional<std::mt19937_64> rng;
  if (options.decoy_seed) rng.emplace(*options.decoy_seed);

  CamouflageResult result{netlist, {}};
  for (auto gi : order) {
    const Gate g = result.netlist.gate(gi);
    KeyEntry entry{g.function, std::nullopt};
    std::vector<std::string> fanins;
    for (auto f : g.fanins) fanins.push_back(result.netlist.net_name(f));

    if (single_input(g.function)) {
      // Decoys are chosen on the current working netlist so earlier decoy
      // edges are part of the cycle check.
      const auto candidates = decoy_candidates(result.netlist, gi);
      if (candidates.empty()) {
        throw Error(ErrorKind::kDecoyUnavailable,
                    "no net can serve as decoy for '" + g.name + "' without a cycle");
      }
      NetId decoy = candidates.front();
      if (rng) {
        decoy = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(*rng)];
      } else {
        const int target = result.netlist.net_level(g.fanins.back());
        int best = std::numeric_limits<int>::max();
        for (auto c : candidates) {
          const int d = std::abs(result.netlist.net_level(c) - target);
          if (d < best) {
            best = d;
            decoy = c;
          }
        }
      }
      entry.decoy = result.netlist.net_name(decoy);
      fanins.insert(fanins.begin(), *entry.decoy);
    }

    auto builder = result.netlist.to_builder();
    Gate& slot = builder.gates()[gi];
    slot.camo = true;
    slot.flavor = flavor;
    slot.function = GateFunction::kBuf;
    slot.fanins.clear();
    for (const auto& f : fanins) slot.fanins.push_back(builder.net(f));
    result.netlist = builder.build();
    result.key.entries[g.name] = entry;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Selection
// ---------------------------------------------------------------------------

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kRandom: return "random";
    case Strategy::kXorSequence: return "xor-seq";
    case Strategy::kOffCritical: return "off-critical";
    case Strategy::kGreedyEffort: return "greedy";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  if (name == "random") return Strategy::kRandom;
  if (name == "xor-seq" || name == "xor_sequence") return Strategy::kXorSequence;
  if (name == "off-critical" || name == "off_critical") return Strategy::kOffCritical;
  if (name == "greedy" || name == "greedy-effort" || name == "greedy_effort") {
    return Strategy::kGreedyEffort;
  }
  return std::nullopt;
}

void SelectionPolicy::validate() const {
  if (!(budget > 0.0 && budget <= 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "budget must lie in (0, 1]");
  }
  if (!(delay_budget >= 0.0) || !std::isfinite(delay_budget)) {
    throw Error(ErrorKind::kInvalidParameter, "delay_budget must be >= 0");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::kInvalidParameter, "lambda must be >= 0");
  }
}

DelayModel camo_delay_model(DelayModel base, const CostTable& costs) {
  return [base = std::move(base), costs](const Gate& g, const KeyEntry* e) {
    const double d = base(g, e);
    return g.camo ? d * costs.at(g.flavor).delay_multiple : d;
  };
}

DelayModel device_delay_model(DelayModel base, const DeviceParams& params) {
  params.validate();
  const double cell = worst_case_delay(default_bias(params), params.vdd, params.t_ref, params);
  // Reference NVT NAND2 pull-down at the same load and 50% crossing.
  const double i_ref = drain_current(params.vdd, 0.5 * params.vdd, params.vtn0, params.t_ref,
                                     params, Carrier::kN);
  const double reference = params.c_load * params.vdd / (2.0 * i_ref);
  const double multiple = std::max(1.0, cell / reference);
  return [base = std::move(base), multiple](const Gate& g, const KeyEntry* e) {
    const double d = base(g, e);
    return g.camo ? d * multiple : d;
  };
}

namespace {

// Critical delay when `selected` gates are treated as camouflaged.
// Projects the critical delay of the camouflaged netlist. Single-input gates
// gain a decoy fanin, so those candidates are projected on the applied netlist.
class DelayProjector {
 public:
  DelayProjector(const Netlist& netlist, const DelayModel& base, const CostTable& costs,
                 CellFlavor flavor)
      : original_(netlist),
        applied_(netlist),
        flavor_(flavor),
        selected_(netlist.gates().size(), false) {
    base_.reserve(netlist.gates().size());
    for (const auto& g : netlist.gates()) base_.push_back(base(g, nullptr));
    multiple_ = costs.at(flavor).delay_multiple;
  }

  // Returns nullopt when the extra gate cannot be applied.
  std::optional<double> critical(std::optional<std::size_t> extra = std::nullopt) const {
    if (extra && single_input(original_.gate(*extra).function)) {
      auto trial = apply_with(*extra);
      if (!trial) return std::nullopt;
      return arrival(*trial, extra);
    }
    return arrival(applied_, extra);
  }

  bool select(std::size_t g) {
    if (single_input(original_.gate(g).function)) {
      auto trial = apply_with(g);
      if (!trial) return false;
      applied_ = std::move(*trial);
    }
    selected_[g] = true;
    chosen_.push_back(g);
    return true;
  }

  [[nodiscard]] bool selected(std::size_t g) const { return selected_[g]; }

 private:
  std::optional<Netlist> apply_with(std::size_t g) const {
    auto gates = chosen_;
    gates.push_back(g);
    try {
      return apply_camouflage(original_, gates, flavor_).netlist;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kDecoyUnavailable) return std::nullopt;
      throw;
    }
  }

  double arrival(const Netlist& n, std::optional<std::size_t> extra) const {
    std::vector<double> at(base_.size(), 0.0);
    for (auto g : n.topo_order()) {
      double start = 0.0;
      for (auto in : n.gate(g).fanins) {
        if (auto d = n.driver(in)) start = std::max(start, at[*d]);
      }
      const bool camo = selected_[g] || (extra && *extra == g);
      at[g] = start + base_[g] * (camo ? multiple_ : 1.0);
    }
    double worst = 0.0;
    for (auto out : n.comb_outputs()) {
      if (auto d = n.driver(out)) worst = std::max(worst, at[*d]);
    }
    return worst;
  }

  const Netlist& original_;
  Netlist applied_;
  CellFlavor flavor_;
  std::vector<double> base_;
  std::vector<bool> selected_;
  std::vector<std::size_t> chosen_;
  double multiple_ = 1.0;
};

bool is_xor_like(const Gate& g) {
  return !g.camo && (g.function == GateFunction::kXor || g.function == GateFunction::kXnor);
}

}  // namespace

std::vector<std::size_t> select_gates(const Netlist& netlist, const SelectionPolicy& policy,
                                      const CostTable& costs, const DelayModel& base_delay) {
  policy.validate();
  const auto gate_count = netlist.gates().size();
  const auto max_count =
      static_cast<std::size_t>(std::floor(policy.budget * static_cast<double>(gate_count) + 1e-9));

  std::vector<std::size_t> eligible;
  for (std::size_t g = 0; g < gate_count; ++g) {
    if (!camouflageable(netlist, g, policy.flavor)) continue;
    if (single_input(netlist.gate(g).function) && decoy_candidates(netlist, g).empty()) continue;
    eligible.push_back(g);
  }
  if (max_count == 0 || eligible.empty()) return {};

  DelayProjector projector(netlist, base_delay, costs, policy.flavor);
  const double d0 = *projector.critical();
  const double limit = d0 * (1.0 + policy.delay_budget) + 1e-12 * std::max(1.0, d0);
  std::vector<std::size_t> chosen;

  auto take_in_order = [&](const std::vector<std::size_t>& order) {
    for (auto g : order) {
      if (chosen.size() >= max_count) break;
      const auto projected = projector.critical(g);
      if (!projected || *projected > limit) continue;
      if (projector.select(g)) chosen.push_back(g);
    }
  };

  switch (policy.strategy) {
    case Strategy::kRandom: {
      auto order = eligible;
      std::mt19937_64 rng(policy.seed);
      std::shuffle(order.begin(), order.end(), rng);
      take_in_order(order);
      break;
    }
    case Strategy::kXorSequence: {
      std::vector<int> score(gate_count, 0);
      for (auto g : eligible) {
        for (auto reader : netlist.fanout(netlist.gate(g).output)) {
          if (is_xor_like(netlist.gate(reader))) ++score[g];
        }
      }
      auto order = eligible;
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
      take_in_order(order);
      break;
    }
    case Strategy::kOffCritical: {
      const auto path = critical_path(netlist, nullptr, base_delay);
      const std::unordered_set<std::size_t> on_path(path.gates.begin(), path.gates.end());
      const auto timing = analyze_timing(netlist, nullptr, base_delay);
      std::vector<std::size_t> order;
      for (auto g : eligible) {
        if (!on_path.contains(g)) order.push_back(g);
      }
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return timing.slack[a] > timing.slack[b];
      });
      take_in_order(order);
      break;
    }
    case Strategy::kGreedyEffort: {
      const double bits = std::log2(static_cast<double>(function_set(policy.flavor).size()));
      std::vector<bool> used(gate_count, false);
      while (chosen.size() < max_count) {
        std::optional<std::size_t> best;
        double best_score = -std::numeric_limits<double>::infinity();
        const double current = *projector.critical();
        for (auto g : eligible) {
          if (used[g]) continue;
          const auto projection = projector.critical(g);
          if (!projection || *projection > limit) continue;
          const double projected = *projection;
          // Neighbouring camouflaged gates cannot be resolved independently.
          int adjacent = 0;
          const Gate& gate = netlist.gate(g);
          for (auto in : gate.fanins) {
            if (auto d = netlist.driver(in); d && projector.selected(*d)) ++adjacent;
          }
          for (auto reader : netlist.fanout(gate.output)) {
            if (projector.selected(reader)) ++adjacent;
          }
          const double growth = d0 > 0.0 ? (projected - current) / d0 : 0.0;
          const double overhead =
              policy.delay_budget > 0.0 ? growth / policy.delay_budget : (growth > 0.0 ? 1.0 : 0.0);
          const double score = bits * (1.0 + adjacent) - policy.lambda * overhead;
          if (score > best_score) {
            best_score = score;
            best = g;
          }
        }
        if (!best) break;
        used[*best] = true;
        if (projector.select(*best)) chosen.push_back(*best);
      }
      break;
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// ---------------------------------------------------------------------------
// Overheads
// ---------------------------------------------------------------------------

OverheadReport overhead_report(const Netlist& netlist, const CamoKey& key, const CostTable& costs,
                               const DelayModel& base_delay) {
  validate_key(netlist, key);
  costs.validate();
  OverheadReport r;
  r.table = costs;
  r.gate_equivalents = static_cast<double>(netlist.gates().size());
  double area = 0.0;
  double power = 0.0;
  for (auto g : netlist.camo_gates()) {
    const Gate& gate = netlist.gate(g);
    const CostEntry& c = costs.at(gate.flavor);
    area += c.area_multiple - 1.0;
    power += c.power_multiple - 1.0;
    r.per_gate.push_back({gate.name, gate.flavor, key.find(gate.name)->function, c});
  }
  if (r.gate_equivalents > 0.0) {
    r.area_pct = 100.0 * area / r.gate_equivalents;
    r.power_pct = 100.0 * power / r.gate_equivalents;
  }
  r.delay_plain = critical_path(netlist, &key, base_delay).delay;
  r.delay_camo = critical_path(netlist, &key, camo_delay_model(base_delay, costs)).delay;
  if (r.delay_plain > 0.0) r.delay_pct = 100.0 * (r.delay_camo / r.delay_plain - 1.0);
  return r;
}

// ---------------------------------------------------------------------------
// Effort
// ---------------------------------------------------------------------------

std::string format_duration(const BigFloat& seconds) {
  const double s = seconds.convert_to<double>();
  char buf[96];
  std::string head = seconds.str(5, std::ios_base::scientific) + " s";
  constexpr double kMinute = 60.0, kHour = 3600.0, kDay = 86400.0, kYear = 365.25 * kDay;
  if (!std::isfinite(s)) {
    const BigFloat years = seconds / BigFloat(kYear);
    return head + " (" + years.str(5, std::ios_base::scientific) + " years)";
  }
  if (s < kMinute) {
    std::snprintf(buf, sizeof buf, " (%.3g seconds)", s);
  } else if (s < kHour) {
    std::snprintf(buf, sizeof buf, " (%.3g minutes)", s / kMinute);
  } else if (s < kDay) {
    std::snprintf(buf, sizeof buf, " (%.3g hours)", s / kHour);
  } else if (s < kYear) {
    std::snprintf(buf, sizeof buf, " (%.3g days)", s / kDay);
  } else {
    std::snprintf(buf, sizeof buf, " (%.4g years)", s / kYear);
  }
  return head + buf;
}

EffortEstimate effort_estimate(std::uint64_t n_inputs, std::uint64_t k_camo,
                               std::uint64_t functions_per_gate, double test_frequency_hz) {
  if (n_inputs < 1 || k_camo < 1 || functions_per_gate < 1 || !std::isfinite(test_frequency_hz) ||
      test_frequency_hz < 1.0) {
    throw Error(ErrorKind::kInvalidParameter, "effort estimate arguments must all be >= 1");
  }
  EffortEstimate e;
  e.pattern_count = BigInt(1) << n_inputs;
  e.candidate_count = boost::multiprecision::pow(BigInt(functions_per_gate),
                                                 static_cast<unsigned>(k_camo));
  const BigFloat freq(test_frequency_hz);
  e.seconds = BigFloat(e.pattern_count) / freq;
  e.seconds_retest = BigFloat(e.pattern_count * e.candidate_count) / freq;
  e.human_readable = "exhaustive patterns: " + format_duration(e.seconds) +
                     "; per-candidate retest: " + format_duration(e.seconds_retest);
  e.note =
      "The figure of 1e5 years for 2^50 trials at 1 GHz is not reproduced by "
      "pattern_count / frequency (about 13 days). Both the raw division and the per-candidate "
      "retest time (pattern_count * candidate_count / frequency) are reported; neither is "
      "assumed to be the model behind that estimate.";
  return e;
}

}  // namespace vtcamo
