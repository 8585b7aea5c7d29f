// Copyright 2026 The vtcamo Authors
#include "vtcamo/camo_cell.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "vtcamo/error.hpp"

namespace vtcamo {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

constexpr bool in1(unsigned pattern) { return (pattern >> 1) & 1u; }
constexpr bool in2(unsigned pattern) { return pattern & 1u; }

// Switch indices (0-based) of each pair.
constexpr int kCoreHeader[3] = {0, 2, 4};
constexpr int kTrueGate = 6;
constexpr int kInvertGate = 8;
constexpr int kPassGate = 10;
constexpr int kTieGate = 12;

bool pair_is(const CamoConfig& c, int first, Vt vt) {
  return c.switch_vt[first] == vt && c.switch_vt[first + 1] == vt;
}

bool pair_mixed(const CamoConfig& c, int first) {
  return c.switch_vt[first] != c.switch_vt[first + 1];
}

[[noreturn]] void malformed(const CamoConfig& c, const std::string& why) {
  throw Error(ErrorKind::kMalformedConfig,
              "malformed camouflage config " + to_string(c) + ": " + why);
}

GateFunction function_of(Core core, bool inverted, bool tie) {
  switch (core) {
    case Core::kNand: return inverted ? GateFunction::kAnd : GateFunction::kNand;
    case Core::kNor: return inverted ? GateFunction::kOr : GateFunction::kNor;
    case Core::kXor:
      if (tie) return inverted ? GateFunction::kInv : GateFunction::kBuf;
      return inverted ? GateFunction::kXnor : GateFunction::kXor;
  }
  return GateFunction::kNand;
}

}  // namespace

std::string_view to_string(GateFunction f) {
  switch (f) {
    case GateFunction::kNand: return "NAND";
    case GateFunction::kAnd: return "AND";
    case GateFunction::kNor: return "NOR";
    case GateFunction::kOr: return "OR";
    case GateFunction::kXor: return "XOR";
    case GateFunction::kXnor: return "XNOR";
    case GateFunction::kInv: return "INV";
    case GateFunction::kBuf: return "BUF";
  }
  return "?";
}

std::optional<GateFunction> parse_function(std::string_view name) {
  const auto u = upper(name);
  if (u == "NOT") return GateFunction::kInv;
  if (u == "BUFF") return GateFunction::kBuf;
  for (auto f : kAllFunctions) {
    if (u == to_string(f)) return f;
  }
  return std::nullopt;
}

std::vector<GateFunction> FunctionSet::members() const {
  std::vector<GateFunction> out;
  for (auto f : kAllFunctions) {
    if (contains(f)) out.push_back(f);
  }
  return out;
}

std::string_view to_string(CellFlavor flavor) {
  switch (flavor) {
    case CellFlavor::kCamo8: return "CAMO8";
    case CellFlavor::kCmos3A: return "CMOS3A";
    case CellFlavor::kCmos3B: return "CMOS3B";
  }
  return "?";
}

std::optional<CellFlavor> parse_flavor(std::string_view name) {
  const auto u = upper(name);
  for (auto fl : kAllFlavors) {
    if (u == to_string(fl)) return fl;
  }
  return std::nullopt;
}

FunctionSet function_set(CellFlavor flavor) {
  using enum GateFunction;
  switch (flavor) {
    case CellFlavor::kCamo8: return FunctionSet::all();
    case CellFlavor::kCmos3A: return FunctionSet{kNand, kNor, kXor};
    case CellFlavor::kCmos3B: return FunctionSet{kAnd, kOr, kXnor};
  }
  return {};
}

std::string pattern_string(unsigned pattern) {
  return {in1(pattern) ? '1' : '0', in2(pattern) ? '1' : '0'};
}

TruthTable truth_table(GateFunction f) {
  if (f == GateFunction::kInv) return {1, 0b01};
  if (f == GateFunction::kBuf) return {1, 0b10};
  return {2, cell_table(f)};
}

std::uint8_t cell_table(GateFunction f) {
  std::uint8_t bits = 0;
  for (unsigned p = 0; p < kPatterns; ++p) {
    const bool a = in1(p);
    const bool b = in2(p);
    bool y = false;
    switch (f) {
      case GateFunction::kNand: y = !(a && b); break;
      case GateFunction::kAnd: y = a && b; break;
      case GateFunction::kNor: y = !(a || b); break;
      case GateFunction::kOr: y = a || b; break;
      case GateFunction::kXor: y = a != b; break;
      case GateFunction::kXnor: y = a == b; break;
      case GateFunction::kInv: y = !b; break;
      case GateFunction::kBuf: y = b; break;
    }
    if (y) bits |= static_cast<std::uint8_t>(1u << p);
  }
  return bits;
}

bool eval_function(GateFunction f, std::span<const bool> inputs) {
  if (inputs.empty()) throw Error(ErrorKind::kInvalidInput, "gate evaluated with no inputs");
  const auto ones = std::count(inputs.begin(), inputs.end(), true);
  const auto n = static_cast<long>(inputs.size());
  switch (f) {
    case GateFunction::kNand: return ones != n;
    case GateFunction::kAnd: return ones == n;
    case GateFunction::kNor: return ones == 0;
    case GateFunction::kOr: return ones != 0;
    case GateFunction::kXor: return (ones & 1) != 0;
    case GateFunction::kXnor: return (ones & 1) == 0;
    case GateFunction::kInv: return !inputs.back();
    case GateFunction::kBuf: return inputs.back();
  }
  return false;
}

CamoConfig config_for(GateFunction f, CellFlavor flavor) {
  if (!function_set(flavor).contains(f)) {
    throw Error(ErrorKind::kUnsupportedFunction,
                std::string(to_string(f)) + " is not realizable by a " +
                    std::string(to_string(flavor)) + " cell");
  }
  CamoConfig c;
  c.flavor = flavor;
  c.switch_vt.fill(Vt::kHigh);
  auto set_pair = [&](int first) {
    c.switch_vt[first] = Vt::kLow;
    c.switch_vt[first + 1] = Vt::kLow;
  };

  Core core = Core::kXor;
  bool inverted = false;
  switch (f) {
    case GateFunction::kNand: core = Core::kNand; break;
    case GateFunction::kAnd: core = Core::kNand; inverted = true; break;
    case GateFunction::kNor: core = Core::kNor; break;
    case GateFunction::kOr: core = Core::kNor; inverted = true; break;
    case GateFunction::kXor: break;
    case GateFunction::kXnor: inverted = true; break;
    case GateFunction::kInv: inverted = true; c.tie_first_input = true; break;
    case GateFunction::kBuf: c.tie_first_input = true; break;
  }
  set_pair(kCoreHeader[static_cast<int>(core)]);
  set_pair(inverted ? kInvertGate : kTrueGate);
  set_pair(c.tie_first_input ? kTieGate : kPassGate);
  return c;
}

CellState cell_state(const CamoConfig& config) {
  for (int first = 0; first < kSwitchCount; first += 2) {
    if (pair_mixed(config, first)) {
      malformed(config, "switches " + std::to_string(first + 1) + " and " +
                            std::to_string(first + 2) + " disagree");
    }
  }
  int powered = 0;
  Core core = Core::kNand;
  for (int k = 0; k < 3; ++k) {
    if (pair_is(config, kCoreHeader[k], Vt::kLow)) {
      ++powered;
      core = static_cast<Core>(k);
    }
  }
  if (powered != 1) malformed(config, "exactly one core must be powered");

  const bool true_on = pair_is(config, kTrueGate, Vt::kLow);
  const bool inv_on = pair_is(config, kInvertGate, Vt::kLow);
  if (true_on == inv_on) malformed(config, "exactly one output gate must conduct");

  const bool pass_on = pair_is(config, kPassGate, Vt::kLow);
  const bool tie_on = pair_is(config, kTieGate, Vt::kLow);
  if (pass_on == tie_on) malformed(config, "pin 1 must be either passed or tied");
  if (tie_on != config.tie_first_input) malformed(config, "TIE flag disagrees with switches 11-14");
  if (tie_on && core != Core::kXor) malformed(config, "tie mode requires the XOR core");

  CellState s{core, inv_on, tie_on, function_of(core, inv_on, tie_on)};
  if (!function_set(config.flavor).contains(s.function)) {
    malformed(config, std::string(to_string(s.function)) + " is outside the " +
                          std::string(to_string(config.flavor)) + " function set");
  }
  return s;
}

GateFunction decode(const CamoConfig& config) { return cell_state(config).function; }

bool evaluate(const CamoConfig& config, std::span<const bool> inputs) {
  if (inputs.size() != 2) {
    throw Error(ErrorKind::kInvalidInput, "camouflaged cell takes exactly 2 inputs");
  }
  const auto s = cell_state(config);
  const bool a = s.tie ? false : inputs[0];
  const bool b = inputs[1];
  bool x = false;
  switch (s.core) {
    case Core::kNand: x = !(a && b); break;
    case Core::kNor: x = !(a || b); break;
    case Core::kXor: x = a != b; break;
  }
  return s.inverted ? !x : x;
}

std::string to_string(const CamoConfig& config) {
  std::string out(to_string(config.flavor));
  out += ':';
  for (auto vt : config.switch_vt) out += (vt == Vt::kLow ? 'L' : 'H');
  out += config.tie_first_input ? ":TIE=1" : ":TIE=0";
  return out;
}

CamoConfig parse_config(std::string_view text) {
  auto fail = [&](const std::string& why) -> CamoConfig {
    throw Error(ErrorKind::kMalformedConfig,
                "cannot parse config '" + std::string(text) + "': " + why);
  };
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string_view::npos ? c1 : c1 + 1);
  if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
    return fail("expected FLAVOR:SWITCHES:TIE=b");
  }
  CamoConfig c;
  const auto flavor = parse_flavor(text.substr(0, c1));
  if (!flavor) return fail("unknown flavor");
  c.flavor = *flavor;
  const auto sw = text.substr(c1 + 1, c2 - c1 - 1);
  if (sw.size() != kSwitchCount) return fail("expected 14 switch characters");
  for (int i = 0; i < kSwitchCount; ++i) {
    if (sw[i] == 'L') {
      c.switch_vt[i] = Vt::kLow;
    } else if (sw[i] == 'H') {
      c.switch_vt[i] = Vt::kHigh;
    } else {
      return fail("switch characters must be H or L");
    }
  }
  const auto tie = text.substr(c2 + 1);
  if (tie == "TIE=1") {
    c.tie_first_input = true;
  } else if (tie != "TIE=0") {
    return fail("expected TIE=0 or TIE=1");
  }
  return c;
}

std::vector<unsigned> distinguishing_set(FunctionSet candidates) {
  std::vector<std::uint8_t> tables;
  std::vector<std::string> names;
  for (auto f : candidates.members()) {
    tables.push_back(cell_table(f));
    names.emplace_back(to_string(f));
  }
  return distinguishing_set(tables, names);
}

std::vector<unsigned> distinguishing_set(std::span<const std::uint8_t> tables,
                                         std::span<const std::string> names) {
  if (tables.size() < 2) {
    throw Error(ErrorKind::kInvalidParameter, "distinguishing set needs at least 2 candidates");
  }
  for (std::size_t i = 0; i < tables.size(); ++i) {
    for (std::size_t j = i + 1; j < tables.size(); ++j) {
      if ((tables[i] & 0xF) == (tables[j] & 0xF)) {
        auto name = [&](std::size_t k) {
          return k < names.size() ? names[k] : "#" + std::to_string(k);
        };
        throw Error(ErrorKind::kIndistinguishable,
                    name(i) + " and " + name(j) + " have identical truth tables");
      }
    }
  }

  std::optional<std::vector<unsigned>> best;
  for (unsigned subset = 1; subset < (1u << kPatterns); ++subset) {
    std::vector<unsigned> patterns;
    for (unsigned p = 0; p < kPatterns; ++p) {
      if ((subset >> p) & 1u) patterns.push_back(p);
    }
    std::vector<unsigned> responses;
    for (auto t : tables) {
      unsigned r = 0;
      for (auto p : patterns) r = (r << 1) | ((t >> p) & 1u);
      responses.push_back(r);
    }
    std::sort(responses.begin(), responses.end());
    if (std::adjacent_find(responses.begin(), responses.end()) != responses.end()) continue;
    if (!best || patterns.size() < best->size() ||
        (patterns.size() == best->size() && patterns < *best)) {
      best = std::move(patterns);
    }
  }
  // Distinct 4-bit tables are always separated by the full pattern set.
  return *best;
}

}  // namespace vtcamo
