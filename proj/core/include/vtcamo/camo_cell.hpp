// Copyright 2026 The vtcamo Authors
#ifndef VTCAMO_CAMO_CELL_HPP_
#define VTCAMO_CAMO_CELL_HPP_

#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vtcamo {

// The eight camouflageable functions. As netlist primitives, the first six
// also accept more than two inputs and kInv/kBuf take exactly one.
enum class GateFunction : std::uint8_t {
  kNand = 0,
  kAnd,
  kNor,
  kOr,
  kXor,
  kXnor,
  kInv,
  kBuf,
};

inline constexpr std::array<GateFunction, 8> kAllFunctions = {
    GateFunction::kNand, GateFunction::kAnd, GateFunction::kNor,
    GateFunction::kOr,   GateFunction::kXor, GateFunction::kXnor,
    GateFunction::kInv,  GateFunction::kBuf};

std::string_view to_string(GateFunction f);
// Accepts the canonical names plus the bench spellings NOT and BUFF.
std::optional<GateFunction> parse_function(std::string_view name);

// Small value set of functions, used for flavor sets and attack candidates.
class FunctionSet {
 public:
  constexpr FunctionSet() = default;
  constexpr explicit FunctionSet(std::uint8_t mask) : mask_(mask) {}
  constexpr FunctionSet(std::initializer_list<GateFunction> fs) {
    for (auto f : fs) insert(f);
  }

  static constexpr FunctionSet all() { return FunctionSet(0xFF); }

  constexpr void insert(GateFunction f) { mask_ |= bit(f); }
  constexpr void erase(GateFunction f) { mask_ &= static_cast<std::uint8_t>(~bit(f)); }
  [[nodiscard]] constexpr bool contains(GateFunction f) const { return (mask_ & bit(f)) != 0; }
  [[nodiscard]] constexpr int size() const { return std::popcount(mask_); }
  [[nodiscard]] constexpr bool empty() const { return mask_ == 0; }
  [[nodiscard]] constexpr std::uint8_t mask() const { return mask_; }
  // Lowest-valued member; only meaningful when !empty().
  [[nodiscard]] constexpr GateFunction first() const {
    return static_cast<GateFunction>(std::countr_zero(mask_));
  }
  [[nodiscard]] std::vector<GateFunction> members() const;

  friend constexpr bool operator==(FunctionSet, FunctionSet) = default;

 private:
  static constexpr std::uint8_t bit(GateFunction f) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(f));
  }
  std::uint8_t mask_ = 0;
};

enum class CellFlavor : std::uint8_t { kCamo8, kCmos3A, kCmos3B };

inline constexpr std::array<CellFlavor, 3> kAllFlavors = {
    CellFlavor::kCamo8, CellFlavor::kCmos3A, CellFlavor::kCmos3B};

std::string_view to_string(CellFlavor flavor);
// Case-insensitive: "CAMO8", "camo8", "cmos3a", ...
std::optional<CellFlavor> parse_flavor(std::string_view name);
FunctionSet function_set(CellFlavor flavor);

// Local input patterns of a 2-input cell are indexed as (in1 << 1) | in2, so
// pattern 1 is "01": in1 = 0, in2 = 1.
inline constexpr int kPatterns = 4;
std::string pattern_string(unsigned pattern);

// Boolean definition of a function: `bits` holds the output for every input
// combination, indexed like the local patterns above (arity 1 uses in2 only).
struct TruthTable {
  int arity = 2;
  std::uint8_t bits = 0;
  [[nodiscard]] bool operator()(unsigned index) const { return ((bits >> index) & 1u) != 0; }
};

TruthTable truth_table(GateFunction f);

// Output of `f` as seen on the two pins of a camouflaged cell. INV and BUF
// ignore pin 1 (it carries the decoy net).
std::uint8_t cell_table(GateFunction f);

// N-ary evaluation for plain netlist primitives.
bool eval_function(GateFunction f, std::span<const bool> inputs);

// ---------------------------------------------------------------------------
// Switch configuration.
//
// Canonical 14-switch topology (switch numbers are 1-based):
//
//   switch  role
//   1, 2    NAND core power switches (P header, N footer)
//   3, 4    NOR core power switches
//   5, 6    XOR core power switches
//   7, 8    true-polarity output transmission gate (N, P)
//   9, 10   inverting output transmission gate (N, P)
//   11, 12  pin-1 pass transmission gate (N, P)
//   13, 14  pin-1 tie-to-ground transmission gate (N, P)
//
// A legal program powers exactly one core, opens exactly one output gate and
// either passes pin 1 or ties it to ground. Every legal program therefore
// has the same number (6) of LVT switches.
// ---------------------------------------------------------------------------

enum class Vt : std::uint8_t { kHigh, kLow };

inline constexpr int kSwitchCount = 14;

enum class Core : std::uint8_t { kNand, kNor, kXor };

struct CamoConfig {
  std::array<Vt, kSwitchCount> switch_vt{};
  CellFlavor flavor = CellFlavor::kCamo8;
  bool tie_first_input = false;

  friend bool operator==(const CamoConfig&, const CamoConfig&) = default;
};

// Structural reading of a legal config.
struct CellState {
  Core core = Core::kNand;
  bool inverted = false;
  bool tie = false;
  GateFunction function = GateFunction::kNand;
};

// Throws kUnsupportedFunction if `f` is not realizable by `flavor`.
CamoConfig config_for(GateFunction f, CellFlavor flavor);
// Throws kMalformedConfig on any switch pattern that is not a legal program.
CellState cell_state(const CamoConfig& config);
GateFunction decode(const CamoConfig& config);
// Cell output for pins (in1, in2). In tie mode pin 1 is disconnected and the
// internal node is held at 0.
bool evaluate(const CamoConfig& config, std::span<const bool> inputs);

// "CAMO8:LLHHHHLLHHLLHH:TIE=0"
std::string to_string(const CamoConfig& config);
CamoConfig parse_config(std::string_view text);

// Smallest set of local patterns whose responses separate every pair of
// candidates, lexicographically smallest among sets of that size.
std::vector<unsigned> distinguishing_set(FunctionSet candidates);
// Same search over raw 2-input tables; `names` label the error message.
std::vector<unsigned> distinguishing_set(std::span<const std::uint8_t> tables,
                                         std::span<const std::string> names);

}  // namespace vtcamo

#endif  // VTCAMO_CAMO_CELL_HPP_
