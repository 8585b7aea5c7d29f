// Copyright 2026 The vtcamo Authors
#ifndef VTCAMO_ATTACK_HPP_
#define VTCAMO_ATTACK_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vtcamo/camo_cell.hpp"
#include "vtcamo/netlist.hpp"

namespace vtcamo {

// Black-box access to the working chip: combinational inputs in, outputs out.
using Oracle = std::function<std::vector<bool>(const std::vector<bool>&)>;

// Oracle backed by simulate(netlist, v, key). The netlist and key are copied.
Oracle make_oracle(const Netlist& netlist, const CamoKey* key = nullptr);

// Counts queries and refuses them once the budget is spent.
class CountingOracle {
 public:
  explicit CountingOracle(Oracle inner, std::optional<std::uint64_t> budget = std::nullopt)
      : inner_(std::move(inner)), budget_(budget) {}

  std::optional<std::vector<bool>> query(const std::vector<bool>& input);
  [[nodiscard]] std::uint64_t count() const { return count_; }
  [[nodiscard]] bool exhausted() const { return budget_ && count_ >= *budget_; }

 private:
  Oracle inner_;
  std::optional<std::uint64_t> budget_;
  std::uint64_t count_ = 0;
};

enum class AttackStatus { kUnique, kEquivalentClass, kBudgetExhausted };
std::string_view to_string(AttackStatus s);

struct OracleQuery {
  std::vector<bool> input;
  std::vector<bool> output;
};

struct AttackReport {
  std::string mode;
  // Surviving functions per camouflaged gate (projection of the joint
  // survivors).
  std::map<std::string, FunctionSet> resolved;
  // One surviving joint assignment. Gates missing here fall back to the
  // first member of their resolved set.
  std::map<std::string, GateFunction> witness;
  std::uint64_t query_count = 0;
  double candidate_space_log2_initial = 0.0;
  double candidate_space_log2_final = 0.0;
  // log2 of the surviving joint assignments after each query.
  std::vector<double> space_log2_trace;
  // 0 when the residue was too large to enumerate.
  std::uint64_t surviving_assignments = 1;
  AttackStatus status = AttackStatus::kUnique;
  std::vector<OracleQuery> transcript;

  // Witness assignment; decoys are read from the netlist.
  [[nodiscard]] CamoKey recovered_key(const Netlist& netlist) const;
};

struct PatternSource {
  enum class Kind { kExhaustive, kRandom } kind = Kind::kExhaustive;
  std::uint64_t seed = 0;

  static PatternSource exhaustive() { return {}; }
  static PatternSource random(std::uint64_t seed) { return {Kind::kRandom, seed}; }
};

struct AttackOptions {
  std::optional<std::uint64_t> query_budget;
  // The attacker sees which flavor was placed, so candidates are limited to
  // its function set. Otherwise every gate starts with all 8 functions.
  bool flavor_known = false;
  unsigned jobs = 1;
};

// Brute force enumerates at most 2^24 joint assignments (8 CAMO8 gates).
inline constexpr double kMaxBruteForceLog2 = 24.0;
// Joint-enumeration fallback of the sensitization attack.
inline constexpr double kMaxResidueLog2 = 20.0;

FunctionSet initial_candidates(const Gate& gate, bool flavor_known);

// Exhaustive mode applies every input vector in index order; random mode
// draws seeded vectors and stops once the survivors are mutually equivalent.
AttackReport brute_force_attack(const Netlist& camo, const Oracle& oracle, PatternSource source,
                                const AttackOptions& options = {});

// Remaining candidates per camouflaged gate (by name). Absent gates keep
// their flavor's full set.
using PartialKey = std::map<std::string, FunctionSet>;

// Smallest-index input vector that puts `pattern` ((in1 << 1) | in2) on the
// target's pins and makes some output depend on the target's value under
// every completion of `partial`.
std::optional<std::vector<bool>> find_sensitizing_vector(const Netlist& camo,
                                                         const PartialKey& partial,
                                                         std::size_t target_gate,
                                                         unsigned pattern);

// Resolves gates one at a time in topological order with sensitizing
// vectors, then jointly enumerates whatever is left.
AttackReport sensitization_attack(const Netlist& camo, const Oracle& oracle,
                                  const AttackOptions& options = {});

}  // namespace vtcamo

#endif  // VTCAMO_ATTACK_HPP_
