// Copyright 2026 The vtcamo Authors
#include "vtcamo/attack.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>

#include "parallel.hpp"
#include "vtcamo/error.hpp"
#include "vtcamo/simulator.hpp"

namespace vtcamo {

Oracle make_oracle(const Netlist& netlist, const CamoKey* key) {
  auto design = std::make_shared<const Netlist>(netlist);
  auto secret = key ? std::make_shared<const CamoKey>(*key) : nullptr;
  return [design, secret](const std::vector<bool>& input) {
    return simulate(*design, input, secret.get());
  };
}

std::optional<std::vector<bool>> CountingOracle::query(const std::vector<bool>& input) {
  if (exhausted()) return std::nullopt;
  ++count_;
  return inner_(input);
}

std::string_view to_string(AttackStatus s) {
  switch (s) {
    case AttackStatus::kUnique: return "unique";
    case AttackStatus::kEquivalentClass: return "equivalent_class";
    case AttackStatus::kBudgetExhausted: return "budget_exhausted";
  }
  return "?";
}

CamoKey AttackReport::recovered_key(const Netlist& netlist) const {
  CamoKey key;
  for (auto g : netlist.camo_gates()) {
    const Gate& gate = netlist.gate(g);
    auto it = resolved.find(gate.name);
    if (it == resolved.end() || it->second.empty()) continue;
    const auto w = witness.find(gate.name);
    KeyEntry e{w != witness.end() ? w->second : it->second.first(), std::nullopt};
    if (e.function == GateFunction::kInv || e.function == GateFunction::kBuf) {
      e.decoy = netlist.net_name(gate.fanins.front());
    }
    key.entries[gate.name] = e;
  }
  return key;
}

FunctionSet initial_candidates(const Gate& gate, bool flavor_known) {
  return flavor_known ? function_set(gate.flavor) : FunctionSet::all();
}

namespace {

constexpr std::uint64_t kAll = ~std::uint64_t{0};
// Survivor count up to which random-mode brute force checks for mutual
// equivalence after each elimination.
constexpr std::size_t kEquivalenceCheckLimit = 256;

std::vector<bool> vector_from_index(std::uint64_t index, std::size_t n) {
  std::vector<bool> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = ((index >> i) & 1u) != 0;
  return v;
}

double log2_of(std::uint64_t n) { return n == 0 ? 0.0 : std::log2(static_cast<double>(n)); }

void record(AttackReport& r, const std::vector<bool>& in, const std::vector<bool>& out) {
  r.transcript.push_back({in, out});
  r.query_count = r.transcript.size();
}

// Joint assignments over a subset of camouflaged gates, encoded mixed-radix
// with the first gate least significant. Gates outside the subset are pinned
// to `fixed`.
class JointSpace {
 public:
  JointSpace(const Simulator& sim, std::vector<FunctionMasks> fixed, std::vector<std::size_t> ords,
             std::vector<std::vector<GateFunction>> choices, unsigned jobs)
      : sim_(sim), fixed_(std::move(fixed)), ords_(std::move(ords)),
        choices_(std::move(choices)), jobs_(std::max(1u, jobs)) {}

  [[nodiscard]] std::uint64_t size() const {
    std::uint64_t s = 1;
    for (const auto& c : choices_) s *= c.size();
    return s;
  }

  [[nodiscard]] GateFunction digit(std::uint32_t id, std::size_t j) const {
    for (std::size_t i = 0; i < j; ++i) id /= static_cast<std::uint32_t>(choices_[i].size());
    return choices_[j][id % choices_[j].size()];
  }

  [[nodiscard]] std::size_t gate_count() const { return ords_.size(); }
  [[nodiscard]] std::size_t ordinal(std::size_t j) const { return ords_[j]; }

  void lane_masks(const std::uint32_t* ids, std::size_t count,
                  std::vector<FunctionMasks>& masks) const {
    masks = fixed_;
    for (std::size_t j = 0; j < ords_.size(); ++j) masks[ords_[j]] = {};
    for (std::size_t lane = 0; lane < 64; ++lane) {
      std::uint32_t id = ids[lane < count ? lane : 0];
      for (std::size_t j = 0; j < ords_.size(); ++j) {
        const auto radix = static_cast<std::uint32_t>(choices_[j].size());
        masks[ords_[j]][static_cast<std::size_t>(choices_[j][id % radix])] |=
            std::uint64_t{1} << lane;
        id /= radix;
      }
    }
  }

  // Drops assignments whose response to `input` differs from `output`.
  // `keep` receives one flag per surviving entry before compaction.
  void filter(std::vector<std::uint32_t>& survivors, const std::vector<bool>& input,
              const std::vector<bool>& output, std::vector<std::uint8_t>* kept = nullptr) const {
    const std::size_t chunks = (survivors.size() + 63) / 64;
    std::vector<std::uint64_t> keep(chunks, 0);
    std::vector<std::uint64_t> in(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) in[i] = input[i] ? kAll : 0;
    const unsigned blocks = static_cast<unsigned>(std::min<std::size_t>(jobs_, chunks));
    detail::parallel_for(blocks, jobs_, [&](std::size_t b) {
      std::vector<FunctionMasks> masks;
      std::vector<std::uint64_t> scratch;
      std::vector<std::uint64_t> out(output.size());
      for (std::size_t c = b * chunks / blocks; c < (b + 1) * chunks / blocks; ++c) {
        const std::size_t count = std::min<std::size_t>(64, survivors.size() - c * 64);
        lane_masks(survivors.data() + c * 64, count, masks);
        sim_.eval_outputs(in, masks, out, scratch);
        std::uint64_t bad = 0;
        for (std::size_t o = 0; o < out.size(); ++o) bad |= out[o] ^ (output[o] ? kAll : 0);
        const std::uint64_t lanes = count == 64 ? kAll : ((std::uint64_t{1} << count) - 1);
        keep[c] = ~bad & lanes;
      }
    });
    std::size_t w = 0;
    if (kept) kept->assign(survivors.size(), 0);
    for (std::size_t i = 0; i < survivors.size(); ++i) {
      if ((keep[i / 64] >> (i % 64)) & 1u) {
        survivors[w++] = survivors[i];
        if (kept) (*kept)[i] = 1;
      }
    }
    survivors.resize(w);
  }

  // Smallest input vector on which two assignments disagree.
  [[nodiscard]] std::optional<std::vector<bool>> first_difference(std::uint32_t a,
                                                                  std::uint32_t b) const {
    const std::size_t n = sim_.input_count();
    std::vector<FunctionMasks> ma, mb;
    const std::uint32_t ia[1] = {a}, ib[1] = {b};
    lane_masks(ia, 1, ma);
    lane_masks(ib, 1, mb);
    std::vector<std::uint64_t> in(n), oa(sim_.output_count()), ob(sim_.output_count()), scratch;
    const std::uint64_t words = exhaustive_word_count(n);
    for (std::uint64_t w = 0; w < words; ++w) {
      for (std::size_t i = 0; i < n; ++i) in[i] = exhaustive_word(i, w);
      sim_.eval_outputs(in, ma, oa, scratch);
      sim_.eval_outputs(in, mb, ob, scratch);
      std::uint64_t diff = 0;
      for (std::size_t o = 0; o < oa.size(); ++o) diff |= oa[o] ^ ob[o];
      diff &= exhaustive_lane_mask(n, w);
      if (diff) return vector_from_index(w * 64 + std::countr_zero(diff), n);
    }
    return std::nullopt;
  }

  [[nodiscard]] std::vector<GateFunction> assignment(std::uint32_t id) const {
    std::vector<GateFunction> out;
    for (const auto& c : choices_) {
      const auto radix = static_cast<std::uint32_t>(c.size());
      out.push_back(c[id % radix]);
      id /= radix;
    }
    return out;
  }

  [[nodiscard]] std::vector<FunctionSet> project(const std::vector<std::uint32_t>& survivors) const {
    std::vector<FunctionSet> sets(ords_.size());
    for (auto id : survivors) {
      for (std::size_t j = 0; j < ords_.size(); ++j) {
        const auto radix = static_cast<std::uint32_t>(choices_[j].size());
        sets[j].insert(choices_[j][id % radix]);
        id /= radix;
      }
    }
    return sets;
  }

 private:
  const Simulator& sim_;
  std::vector<FunctionMasks> fixed_;
  std::vector<std::size_t> ords_;
  std::vector<std::vector<GateFunction>> choices_;
  unsigned jobs_;
};

bool all_singletons(const std::map<std::string, FunctionSet>& resolved) {
  return std::all_of(resolved.begin(), resolved.end(),
                     [](const auto& kv) { return kv.second.size() == 1; });
}

// Tries to make every survivor mutually equivalent to survivors[0], querying
// a distinguishing input whenever two disagree. Returns false when the
// oracle budget ran out first.
bool settle_by_difference(const JointSpace& space, std::vector<std::uint32_t>& survivors,
                          CountingOracle& oracle, AttackReport& report) {
  std::vector<std::uint8_t> equivalent(survivors.size(), 0);
  for (;;) {
    bool queried = false;
    for (std::size_t i = 1; i < survivors.size(); ++i) {
      if (equivalent[i]) continue;
      const auto dip = space.first_difference(survivors[0], survivors[i]);
      if (!dip) {
        equivalent[i] = 1;
        continue;
      }
      const auto answer = oracle.query(*dip);
      if (!answer) return false;
      record(report, *dip, *answer);
      const std::uint32_t ref = survivors[0];
      std::vector<std::uint8_t> kept;
      space.filter(survivors, *dip, *answer, &kept);
      report.space_log2_trace.push_back(log2_of(survivors.size()));
      std::vector<std::uint8_t> next;
      next.reserve(survivors.size());
      for (std::size_t j = 0; j < kept.size(); ++j) {
        if (kept[j]) next.push_back(equivalent[j]);
      }
      equivalent = std::move(next);
      if (survivors.empty() || survivors[0] != ref) std::fill(equivalent.begin(), equivalent.end(), 0);
      queried = true;
      break;
    }
    if (!queried) return true;
  }
}

std::vector<FunctionMasks> pinned_masks(const Simulator& sim, const std::vector<FunctionSet>& sets) {
  std::vector<FunctionMasks> m(sim.camo_count());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = masks_for(sets[i]);
  return m;
}

struct Sensitized {
  std::vector<bool> input;
  std::size_t output = 0;
  bool value_if_one = false;  // output value when the target drives 1
};

std::optional<Sensitized> sensitize(const Simulator& sim, const std::vector<FunctionMasks>& masks,
                                    std::size_t target, unsigned pattern) {
  const Netlist& nl = sim.netlist();
  const Gate& g = nl.gate(target);
  const std::size_t n = sim.input_count();
  const auto outs = nl.comb_outputs();
  std::vector<Ternary> in(n), base(nl.net_count()), f0(nl.net_count()), f1(nl.net_count());
  const bool want_a = ((pattern >> 1) & 1u) != 0;
  const bool want_b = (pattern & 1u) != 0;
  const std::uint64_t words = exhaustive_word_count(n);
  for (std::uint64_t w = 0; w < words; ++w) {
    for (std::size_t i = 0; i < n; ++i) in[i] = Ternary::known(exhaustive_word(i, w));
    sim.eval_ternary(in, masks, base);
    const Ternary a = base[g.fanins[0]];
    const Ternary b = base[g.fanins[1]];
    std::uint64_t lanes = (want_a ? a.one : a.zero) & (want_b ? b.one : b.zero) &
                          exhaustive_lane_mask(n, w);
    if (!lanes) continue;
    const ForcedGate zero{target, 0};
    const ForcedGate one{target, kAll};
    sim.eval_ternary(in, masks, f0, &zero);
    sim.eval_ternary(in, masks, f1, &one);
    std::uint64_t seen = 0;
    for (auto o : outs) {
      seen |= (f0[o].one & f1[o].zero) | (f0[o].zero & f1[o].one);
    }
    lanes &= seen;
    if (!lanes) continue;
    const int lane = std::countr_zero(lanes);
    const std::uint64_t bit = std::uint64_t{1} << lane;
    Sensitized s{vector_from_index(w * 64 + static_cast<std::uint64_t>(lane), n), 0, false};
    for (std::size_t o = 0; o < outs.size(); ++o) {
      const Ternary x0 = f0[outs[o]];
      const Ternary x1 = f1[outs[o]];
      if (((x0.one & x1.zero) | (x0.zero & x1.one)) & bit) {
        s.output = o;
        s.value_if_one = (x1.one & bit) != 0;
        break;
      }
    }
    return s;
  }
  return std::nullopt;
}

void check_resolved_cone(const Netlist& nl, const std::vector<FunctionSet>& sets,
                         const Simulator& sim, std::size_t target) {
  std::vector<bool> seen(nl.gates().size(), false);
  std::vector<std::size_t> stack;
  for (auto in : nl.gate(target).fanins) {
    if (auto d = nl.driver(in)) stack.push_back(*d);
  }
  while (!stack.empty()) {
    const auto g = stack.back();
    stack.pop_back();
    if (seen[g]) continue;
    seen[g] = true;
    if (auto ord = sim.camo_ordinal(g); ord && sets[*ord].size() != 1) {
      throw Error(ErrorKind::kDependency, "fanin cone of '" + nl.gate(target).name +
                                              "' contains unresolved gate '" + nl.gate(g).name +
                                              "'");
    }
    for (auto in : nl.gate(g).fanins) {
      if (auto d = nl.driver(in)) stack.push_back(*d);
    }
  }
}

std::vector<FunctionSet> sets_from_partial(const Netlist& nl, const PartialKey& partial) {
  std::vector<FunctionSet> sets;
  for (auto g : nl.camo_gates()) {
    const Gate& gate = nl.gate(g);
    auto it = partial.find(gate.name);
    sets.push_back(it == partial.end() ? function_set(gate.flavor) : it->second);
    if (sets.back().empty()) {
      throw Error(ErrorKind::kInvalidParameter, "empty candidate set for '" + gate.name + "'");
    }
  }
  return sets;
}

void require_enumerable(const Netlist& nl) {
  if (nl.comb_inputs().size() > static_cast<std::size_t>(kMaxExhaustiveInputs)) {
    throw Error(ErrorKind::kAttackTooLarge,
                std::to_string(nl.comb_inputs().size()) + " inputs exceed the exhaustive limit of " +
                    std::to_string(kMaxExhaustiveInputs));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Brute force
// ---------------------------------------------------------------------------

AttackReport brute_force_attack(const Netlist& camo, const Oracle& oracle_fn, PatternSource source,
                                const AttackOptions& options) {
  AttackReport report;
  report.mode = "brute";
  const Simulator sim(camo);
  const std::size_t n = sim.input_count();
  const auto gates = camo.camo_gates();

  std::vector<std::size_t> ords(gates.size());
  std::iota(ords.begin(), ords.end(), 0);
  std::vector<std::vector<GateFunction>> choices;
  for (auto g : gates) {
    choices.push_back(initial_candidates(camo.gate(g), options.flavor_known).members());
    report.candidate_space_log2_initial += std::log2(static_cast<double>(choices.back().size()));
  }
  if (report.candidate_space_log2_initial > kMaxBruteForceLog2 + 1e-9) {
    throw Error(ErrorKind::kAttackTooLarge,
                "brute force over 2^" + std::to_string(report.candidate_space_log2_initial) +
                    " assignments is too large; use sensitization mode");
  }
  if (source.kind == PatternSource::Kind::kExhaustive) require_enumerable(camo);

  if (gates.empty()) {
    report.status = AttackStatus::kUnique;
    return report;
  }

  const JointSpace space(sim, std::vector<FunctionMasks>(gates.size()), ords, choices,
                         options.jobs);
  std::vector<std::uint32_t> survivors(space.size());
  std::iota(survivors.begin(), survivors.end(), 0u);

  std::optional<std::uint64_t> budget = options.query_budget;
  if (!budget && source.kind == PatternSource::Kind::kRandom) {
    budget = std::uint64_t{1} << std::min<std::size_t>(n, 20);
  }
  CountingOracle oracle(oracle_fn, budget);
  bool complete = false;

  auto apply = [&](const std::vector<bool>& v) {
    const auto answer = oracle.query(v);
    if (!answer) return false;
    record(report, v, *answer);
    space.filter(survivors, v, *answer);
    report.space_log2_trace.push_back(log2_of(survivors.size()));
    return true;
  };

  if (source.kind == PatternSource::Kind::kExhaustive) {
    const std::uint64_t total = std::uint64_t{1} << n;
    std::uint64_t i = 0;
    for (; i < total; ++i) {
      if (!apply(vector_from_index(i, n))) break;
    }
    complete = i == total;
  } else {
    std::mt19937_64 rng(source.seed);
    std::size_t checked = 0;
    while (!complete) {
      std::vector<bool> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = (rng() & 1u) != 0;
      if (!apply(v)) break;
      if (survivors.size() == 1) {
        complete = true;
      } else if (survivors.size() != checked && survivors.size() <= kEquivalenceCheckLimit &&
                 n <= static_cast<std::size_t>(kMaxExhaustiveInputs)) {
        checked = survivors.size();
        complete = std::all_of(survivors.begin() + 1, survivors.end(), [&](std::uint32_t s) {
          return !space.first_difference(survivors[0], s).has_value();
        });
      }
    }
  }

  const auto sets = space.project(survivors);
  for (std::size_t j = 0; j < gates.size(); ++j) report.resolved[camo.gate(gates[j]).name] = sets[j];
  if (!survivors.empty()) {
    const auto w = space.assignment(survivors.front());
    for (std::size_t j = 0; j < gates.size(); ++j) report.witness[camo.gate(gates[j]).name] = w[j];
  }
  report.surviving_assignments = survivors.size();
  report.candidate_space_log2_final = log2_of(survivors.size());
  if (all_singletons(report.resolved)) {
    report.status = AttackStatus::kUnique;
  } else {
    report.status = complete ? AttackStatus::kEquivalentClass : AttackStatus::kBudgetExhausted;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Sensitization
// ---------------------------------------------------------------------------

std::optional<std::vector<bool>> find_sensitizing_vector(const Netlist& camo,
                                                         const PartialKey& partial,
                                                         std::size_t target_gate,
                                                         unsigned pattern) {
  if (target_gate >= camo.gates().size() || camo.gate(target_gate).fanins.size() != 2) {
    throw Error(ErrorKind::kInvalidParameter, "target must be a 2-input gate");
  }
  if (pattern > 3) throw Error(ErrorKind::kInvalidParameter, "local pattern must be 0..3");
  require_enumerable(camo);
  const Simulator sim(camo);
  const auto sets = sets_from_partial(camo, partial);
  check_resolved_cone(camo, sets, sim, target_gate);
  const auto found = sensitize(sim, pinned_masks(sim, sets), target_gate, pattern);
  if (!found) return std::nullopt;
  return found->input;
}

AttackReport sensitization_attack(const Netlist& camo, const Oracle& oracle_fn,
                                  const AttackOptions& options) {
  AttackReport report;
  report.mode = "sense";
  require_enumerable(camo);
  const Simulator sim(camo);
  const auto gates = camo.camo_gates();
  std::vector<FunctionSet> sets;
  for (auto g : gates) {
    sets.push_back(initial_candidates(camo.gate(g), options.flavor_known));
    report.candidate_space_log2_initial += std::log2(static_cast<double>(sets.back().size()));
  }
  auto space_log2 = [&] {
    double s = 0.0;
    for (const auto& f : sets) s += std::log2(static_cast<double>(f.size()));
    return s;
  };

  CountingOracle oracle(oracle_fn, options.query_budget);
  bool exhausted = false;

  for (auto g : camo.topo_order()) {
    const auto ord = sim.camo_ordinal(g);
    if (!ord || exhausted) continue;
    FunctionSet& cand = sets[*ord];
    if (cand.size() <= 1) continue;
    try {
      check_resolved_cone(camo, sets, sim, g);
    } catch (const Error&) {
      continue;  // left to joint enumeration
    }
    unsigned tried = 0;
    while (cand.size() > 1) {
      // Patterns that still split the candidates, minimal distinguishing
      // set first.
      std::vector<unsigned> order = distinguishing_set(cand);
      for (unsigned p = 0; p < kPatterns; ++p) {
        if (std::find(order.begin(), order.end(), p) == order.end()) order.push_back(p);
      }
      std::optional<unsigned> pick;
      for (auto p : order) {
        if ((tried >> p) & 1u) continue;
        bool zero = false, one = false;
        for (auto f : cand.members()) ((cell_table(f) >> p) & 1u ? one : zero) = true;
        if (zero && one) {
          pick = p;
          break;
        }
      }
      if (!pick) break;
      tried |= 1u << *pick;
      const auto found = sensitize(sim, pinned_masks(sim, sets), g, *pick);
      if (!found) continue;
      const auto answer = oracle.query(found->input);
      if (!answer) {
        exhausted = true;
        break;
      }
      record(report, found->input, *answer);
      const bool y = (*answer)[found->output] == found->value_if_one;
      for (auto f : cand.members()) {
        if (((cell_table(f) >> *pick) & 1u) != static_cast<unsigned>(y)) cand.erase(f);
      }
      report.space_log2_trace.push_back(space_log2());
    }
  }

  // Joint enumeration over whatever is still ambiguous.
  std::vector<std::size_t> residue;
  std::vector<std::vector<GateFunction>> choices;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].size() > 1) {
      residue.push_back(i);
      choices.push_back(sets[i].members());
    }
  }
  bool complete = residue.empty();
  double final_log2 = 0.0;
  if (residue.empty()) {
    report.surviving_assignments = 1;
  } else if (!exhausted && space_log2() <= kMaxResidueLog2 + 1e-9) {
    const JointSpace space(sim, pinned_masks(sim, sets), residue, choices, options.jobs);
    std::vector<std::uint32_t> survivors(space.size());
    std::iota(survivors.begin(), survivors.end(), 0u);
    for (const auto& q : report.transcript) space.filter(survivors, q.input, q.output);
    complete = settle_by_difference(space, survivors, oracle, report);
    const auto projected = space.project(survivors);
    for (std::size_t j = 0; j < residue.size(); ++j) sets[residue[j]] = projected[j];
    if (!survivors.empty()) {
      const auto w = space.assignment(survivors.front());
      for (std::size_t j = 0; j < residue.size(); ++j) {
        report.witness[camo.gate(gates[residue[j]]).name] = w[j];
      }
    }
    report.surviving_assignments = survivors.size();
    final_log2 = log2_of(survivors.size());
  } else {
    // Not enumerated; the per-gate product bounds the joint survivors.
    report.surviving_assignments = 0;
    final_log2 = space_log2();
  }
  for (std::size_t j = 0; j < gates.size(); ++j) report.resolved[camo.gate(gates[j]).name] = sets[j];
  report.candidate_space_log2_final = final_log2;
  if (all_singletons(report.resolved)) {
    report.status = AttackStatus::kUnique;
  } else {
    report.status = complete ? AttackStatus::kEquivalentClass : AttackStatus::kBudgetExhausted;
  }
  return report;
}

}  // namespace vtcamo
