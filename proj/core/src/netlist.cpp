// Copyright 2026 The vtcamo Authors
#include "vtcamo/netlist.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <deque>
#include <limits>
#include <random>
#include <sstream>

#include "parallel.hpp"
#include "vtcamo/error.hpp"
#include "vtcamo/simulator.hpp"

namespace vtcamo {

// ---------------------------------------------------------------------------
// Netlist / builder
// ---------------------------------------------------------------------------

std::optional<NetId> Netlist::find_net(std::string_view name) const {
  auto it = net_index_.find(std::string(name));
  if (it == net_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Netlist::find_gate(std::string_view name) const {
  auto it = gate_index_.find(std::string(name));
  if (it == gate_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Netlist::driver(NetId net) const { return driver_.at(net); }

NetlistBuilder Netlist::to_builder() const {
  NetlistBuilder b;
  b.net_names_ = net_names_;
  b.net_index_ = net_index_;
  b.gates_ = gates_;
  b.inputs_ = inputs_;
  b.outputs_ = outputs_;
  b.dffs_ = dffs_;
  return b;
}

bool operator==(const Netlist& a, const Netlist& b) {
  auto names = [](const Netlist& n, std::span<const NetId> ids) {
    std::vector<std::string> out;
    for (auto id : ids) out.push_back(n.net_name(id));
    return out;
  };
  if (names(a, a.primary_inputs()) != names(b, b.primary_inputs())) return false;
  if (names(a, a.primary_outputs()) != names(b, b.primary_outputs())) return false;
  if (a.dffs().size() != b.dffs().size()) return false;
  for (std::size_t i = 0; i < a.dffs().size(); ++i) {
    if (a.net_name(a.dffs()[i].q) != b.net_name(b.dffs()[i].q) ||
        a.net_name(a.dffs()[i].d) != b.net_name(b.dffs()[i].d)) {
      return false;
    }
  }
  if (a.gates().size() != b.gates().size()) return false;
  for (std::size_t i = 0; i < a.gates().size(); ++i) {
    const Gate& x = a.gate(i);
    const Gate& y = b.gate(i);
    if (x.name != y.name || x.camo != y.camo) return false;
    if (x.camo ? x.flavor != y.flavor : x.function != y.function) return false;
    if (names(a, x.fanins) != names(b, y.fanins)) return false;
  }
  return true;
}

NetId NetlistBuilder::net(std::string_view name) {
  auto [it, inserted] = net_index_.try_emplace(std::string(name), net_names_.size());
  if (inserted) net_names_.emplace_back(name);
  return it->second;
}

std::size_t NetlistBuilder::add_gate(std::string_view output, GateFunction f,
                                     const std::vector<std::string>& fanins) {
  Gate g;
  g.name = std::string(output);
  g.output = net(output);
  for (const auto& in : fanins) g.fanins.push_back(net(in));
  g.function = f;
  gates_.push_back(std::move(g));
  return gates_.size() - 1;
}

std::size_t NetlistBuilder::add_camo_gate(std::string_view output, CellFlavor flavor,
                                          const std::vector<std::string>& fanins) {
  const auto i = add_gate(output, GateFunction::kBuf, fanins);
  gates_[i].camo = true;
  gates_[i].flavor = flavor;
  return i;
}

Netlist NetlistBuilder::build() const {
  Netlist n;
  n.net_names_ = net_names_;
  n.net_index_ = net_index_;
  n.gates_ = gates_;
  n.inputs_ = inputs_;
  n.outputs_ = outputs_;
  n.dffs_ = dffs_;

  const std::size_t nets = n.net_names_.size();
  enum class Source : std::uint8_t { kNone, kInput, kGate };
  std::vector<Source> source(nets, Source::kNone);
  n.driver_.assign(nets, std::nullopt);
  n.fanout_.assign(nets, {});

  auto define = [&](NetId id, Source how) {
    if (source[id] != Source::kNone) {
      throw Error(ErrorKind::kDuplicateDefinition,
                  "net '" + n.net_names_[id] + "' is defined more than once");
    }
    source[id] = how;
  };
  for (auto id : n.inputs_) define(id, Source::kInput);
  for (const auto& d : n.dffs_) define(d.q, Source::kInput);

  for (std::size_t i = 0; i < n.gates_.size(); ++i) {
    const Gate& g = n.gates_[i];
    if (n.gate_index_.contains(g.name)) {
      throw Error(ErrorKind::kDuplicateDefinition, "gate '" + g.name + "' is defined twice");
    }
    n.gate_index_.emplace(g.name, i);
    define(g.output, Source::kGate);
    n.driver_[g.output] = i;

    const auto arity = g.fanins.size();
    bool ok = true;
    if (g.camo) {
      ok = arity == 2;
    } else if (g.function == GateFunction::kInv || g.function == GateFunction::kBuf) {
      ok = arity == 1;
    } else {
      ok = arity >= 2;
    }
    if (!ok) {
      throw Error(ErrorKind::kArityMismatch,
                  "gate '" + g.name + "' (" +
                      std::string(g.camo ? to_string(g.flavor) : to_string(g.function)) +
                      ") has " + std::to_string(arity) + " inputs");
    }
    for (auto in : g.fanins) n.fanout_[in].push_back(i);
    if (g.camo) n.camo_.push_back(i);
  }

  auto require_defined = [&](NetId id, const std::string& user) {
    if (source[id] == Source::kNone) {
      throw Error(ErrorKind::kUndefinedNet,
                  "net '" + n.net_names_[id] + "' used by " + user + " is never defined");
    }
  };
  for (const auto& g : n.gates_) {
    for (auto in : g.fanins) require_defined(in, "gate '" + g.name + "'");
  }
  for (auto id : n.outputs_) require_defined(id, "OUTPUT");
  for (const auto& d : n.dffs_) require_defined(d.d, "DFF '" + n.net_names_[d.q] + "'");

  // Kahn's algorithm over gate-to-gate edges, seeded in file order.
  std::vector<std::size_t> pending(n.gates_.size(), 0);
  for (std::size_t i = 0; i < n.gates_.size(); ++i) {
    for (auto in : n.gates_[i].fanins) {
      if (n.driver_[in]) ++pending[i];
    }
  }
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < n.gates_.size(); ++i) {
    if (pending[i] == 0) ready.push_back(i);
  }
  n.level_.assign(nets, 0);
  while (!ready.empty()) {
    const auto g = ready.front();
    ready.pop_front();
    n.topo_.push_back(g);
    int level = 0;
    for (auto in : n.gates_[g].fanins) level = std::max(level, n.level_[in]);
    n.level_[n.gates_[g].output] = level + 1;
    for (auto reader : n.fanout_[n.gates_[g].output]) {
      // A gate reading the same net twice holds one pending count per edge.
      if (--pending[reader] == 0) ready.push_back(reader);
    }
  }
  if (n.topo_.size() != n.gates_.size()) {
    std::string where;
    for (std::size_t i = 0; i < n.gates_.size(); ++i) {
      if (pending[i] != 0) {
        where = n.gates_[i].name;
        break;
      }
    }
    throw Error(ErrorKind::kCycle, "combinational cycle through gate '" + where + "'");
  }

  n.comb_inputs_ = n.inputs_;
  for (const auto& d : n.dffs_) n.comb_inputs_.push_back(d.q);
  n.comb_outputs_ = n.outputs_;
  for (const auto& d : n.dffs_) n.comb_outputs_.push_back(d.d);
  return n;
}

// ---------------------------------------------------------------------------
// Bench parser
// ---------------------------------------------------------------------------

namespace {

bool is_name_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ',' &&
         c != '=' && c != '#';
}

class LineScanner {
 public:
  LineScanner(std::string_view line, int line_no) : line_(line), line_no_(line_no) {}

  void skip_space() {
    while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
  }
  [[nodiscard]] bool at_end() {
    skip_space();
    return pos_ >= line_.size();
  }
  [[nodiscard]] int column() const { return static_cast<int>(pos_) + 1; }

  std::string name(const char* what) {
    skip_space();
    const auto start = pos_;
    while (pos_ < line_.size() && is_name_char(line_[pos_])) ++pos_;
    if (pos_ == start) fail(std::string("expected ") + what);
    return std::string(line_.substr(start, pos_ - start));
  }

  bool try_consume(char c) {
    skip_space();
    if (pos_ < line_.size() && line_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!try_consume(c)) fail(std::string("expected '") + c + "'");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError("line " + std::to_string(line_no_) + ", column " +
                          std::to_string(column()) + ": " + what,
                      line_no_, column());
  }

 private:
  std::string_view line_;
  int line_no_;
  std::size_t pos_ = 0;
};

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

Netlist parse_bench(std::string_view text) {
  NetlistBuilder b;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    LineScanner s(line, line_no);
    if (s.at_end()) continue;
    const std::string head = s.name("a declaration");
    const std::string keyword = upper(head);
    if ((keyword == "INPUT" || keyword == "OUTPUT") && s.try_consume('(')) {
      const auto net = s.name("a net name");
      s.expect(')');
      if (!s.at_end()) s.fail("unexpected trailing text");
      if (keyword == "INPUT") {
        b.add_input(net);
      } else {
        b.add_output(net);
      }
      continue;
    }

    s.expect('=');
    s.skip_space();
    const int func_col = s.column();
    const std::string func = upper(s.name("a gate type"));
    s.expect('(');
    std::vector<std::string> fanins;
    if (!s.try_consume(')')) {
      do {
        fanins.push_back(s.name("a net name"));
      } while (s.try_consume(','));
      s.expect(')');
    }
    if (!s.at_end()) s.fail("unexpected trailing text");

    if (func == "DFF") {
      if (fanins.size() != 1) {
        throw Error(ErrorKind::kArityMismatch,
                    "line " + std::to_string(line_no) + ": DFF takes exactly 1 input");
      }
      b.add_dff(head, fanins[0]);
    } else if (auto flavor = parse_flavor(func)) {
      b.add_camo_gate(head, *flavor, fanins);
    } else if (auto f = parse_function(func)) {
      b.add_gate(head, *f, fanins);
    } else {
      throw SyntaxError("line " + std::to_string(line_no) + ", column " +
                            std::to_string(func_col) + ": unknown gate type '" + func + "'",
                        line_no, func_col);
    }
  }
  return b.build();
}

std::string serialize_bench(const Netlist& netlist) {
  std::ostringstream out;
  out << "# " << netlist.primary_inputs().size() << " inputs, "
      << netlist.primary_outputs().size() << " outputs, " << netlist.dffs().size()
      << " flip-flops, " << netlist.gates().size() << " gates ("
      << netlist.camo_gates().size() << " camouflaged)\n";
  for (auto id : netlist.primary_inputs()) out << "INPUT(" << netlist.net_name(id) << ")\n";
  for (auto id : netlist.primary_outputs()) out << "OUTPUT(" << netlist.net_name(id) << ")\n";
  for (const auto& d : netlist.dffs()) {
    out << netlist.net_name(d.q) << " = DFF(" << netlist.net_name(d.d) << ")\n";
  }
  for (const auto& g : netlist.gates()) {
    out << g.name << " = ";
    if (g.camo) {
      out << to_string(g.flavor);
    } else if (g.function == GateFunction::kInv) {
      out << "NOT";
    } else if (g.function == GateFunction::kBuf) {
      out << "BUFF";
    } else {
      out << to_string(g.function);
    }
    out << '(';
    for (std::size_t i = 0; i < g.fanins.size(); ++i) {
      if (i) out << ", ";
      out << netlist.net_name(g.fanins[i]);
    }
    out << ")\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Key file
// ---------------------------------------------------------------------------

CamoKey parse_key(std::string_view text) {
  CamoKey key;
  int line_no = 0;
  std::size_t start = 0;
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    auto fail = [&](const std::string& why) {
      throw SyntaxError("key line " + std::to_string(line_no) + ": " + why, line_no, 1);
    };
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected <gate>=<FUNCTION>");
    const std::string gate(trim(line.substr(0, eq)));
    std::string_view rest = line.substr(eq + 1);
    std::string_view func_text = rest;
    KeyEntry entry;
    if (const auto comma = rest.find(','); comma != std::string_view::npos) {
      func_text = rest.substr(0, comma);
      auto attr = trim(rest.substr(comma + 1));
      constexpr std::string_view kDecoy = "decoy=";
      if (attr.substr(0, kDecoy.size()) != kDecoy || attr.size() == kDecoy.size()) {
        fail("expected decoy=<net>");
      }
      entry.decoy = std::string(trim(attr.substr(kDecoy.size())));
    }
    const auto f = parse_function(trim(func_text));
    if (gate.empty() || !f) fail("unknown function '" + std::string(trim(func_text)) + "'");
    entry.function = *f;
    if (!key.entries.emplace(gate, entry).second) fail("duplicate entry for '" + gate + "'");
  }
  return key;
}

std::string serialize_key(const CamoKey& key, const Netlist* netlist) {
  std::ostringstream out;
  for (const auto& [gate, entry] : key.entries) {
    if (netlist != nullptr) {
      if (auto g = netlist->find_gate(gate); g && netlist->gate(*g).camo) {
        out << "# " << to_string(config_for(entry.function, netlist->gate(*g).flavor)) << '\n';
      }
    }
    out << gate << '=' << to_string(entry.function);
    if (entry.decoy) out << ",decoy=" << *entry.decoy;
    out << '\n';
  }
  return out.str();
}

void validate_key(const Netlist& netlist, const CamoKey& key) {
  for (auto g : netlist.camo_gates()) {
    const Gate& gate = netlist.gate(g);
    const KeyEntry* entry = key.find(gate.name);
    if (entry == nullptr) {
      throw Error(ErrorKind::kUnresolvedGate,
                  "camouflaged gate '" + gate.name + "' has no key entry");
    }
    if (!function_set(gate.flavor).contains(entry->function)) {
      throw Error(ErrorKind::kInvalidConfig,
                  "key assigns " + std::string(to_string(entry->function)) + " to " +
                      std::string(to_string(gate.flavor)) + " gate '" + gate.name + "'");
    }
    const bool needs_decoy =
        entry->function == GateFunction::kInv || entry->function == GateFunction::kBuf;
    if (needs_decoy != entry->decoy.has_value()) {
      throw Error(ErrorKind::kInvalidConfig,
                  "key entry for '" + gate.name + "' must " + (needs_decoy ? "" : "not ") +
                      "name a decoy net");
    }
    if (needs_decoy && *entry->decoy != netlist.net_name(gate.fanins[0])) {
      throw Error(ErrorKind::kInvalidConfig, "decoy of '" + gate.name + "' is '" +
                                                 *entry->decoy + "' but pin 1 is wired to '" +
                                                 netlist.net_name(gate.fanins[0]) + "'");
    }
  }
  for (const auto& [name, entry] : key.entries) {
    auto g = netlist.find_gate(name);
    if (!g || !netlist.gate(*g).camo) {
      throw Error(ErrorKind::kInvalidConfig,
                  "key entry '" + name + "' does not name a camouflaged gate");
    }
  }
}

// ---------------------------------------------------------------------------
// Simulation and equivalence
// ---------------------------------------------------------------------------

namespace {

std::vector<FunctionMasks> key_masks(const Netlist& netlist, const CamoKey* key) {
  std::vector<FunctionMasks> masks;
  for (auto g : netlist.camo_gates()) {
    const Gate& gate = netlist.gate(g);
    const KeyEntry* entry = key ? key->find(gate.name) : nullptr;
    if (entry == nullptr) {
      throw Error(ErrorKind::kUnresolvedGate,
                  "camouflaged gate '" + gate.name + "' is unresolved (no key entry)");
    }
    masks.push_back(masks_for(entry->function));
  }
  return masks;
}

}  // namespace

std::vector<bool> simulate(const Netlist& netlist, const std::vector<bool>& inputs,
                           const CamoKey* key) {
  if (inputs.size() != netlist.comb_inputs().size()) {
    throw Error(ErrorKind::kInvalidInput,
                "input vector has " + std::to_string(inputs.size()) + " bits, netlist expects " +
                    std::to_string(netlist.comb_inputs().size()));
  }
  const auto masks = key_masks(netlist, key);
  Simulator sim(netlist);
  std::vector<std::uint64_t> words(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) words[i] = inputs[i] ? 1u : 0u;
  std::vector<std::uint64_t> nets(netlist.net_count());
  sim.eval(words, masks, nets);
  std::vector<bool> out;
  for (auto id : netlist.comb_outputs()) out.push_back((nets[id] & 1u) != 0);
  return out;
}

EquivalenceVerdict check_equivalence(const Netlist& a, const Netlist& b, const CamoKey* key_a,
                                     const CamoKey* key_b, EquivalenceMode mode, unsigned jobs) {
  auto names = [](const Netlist& n, std::span<const NetId> ids) {
    std::vector<std::string> out;
    for (auto id : ids) out.push_back(n.net_name(id));
    return out;
  };
  if (names(a, a.comb_inputs()) != names(b, b.comb_inputs()) ||
      names(a, a.comb_outputs()) != names(b, b.comb_outputs())) {
    throw Error(ErrorKind::kIncompatibleNetlists,
                "netlists differ in their input/output signature");
  }
  const auto n = a.comb_inputs().size();
  const bool exhaustive = mode.kind == EquivalenceMode::Kind::kExhaustive;
  if (exhaustive && n > kMaxExhaustiveInputs) {
    throw Error(ErrorKind::kInvalidParameter,
                "exhaustive equivalence limited to " + std::to_string(kMaxExhaustiveInputs) +
                    " inputs; netlist has " + std::to_string(n));
  }
  const auto masks_a = key_masks(a, key_a);
  const auto masks_b = key_masks(b, key_b);
  const Simulator sim_a(a);
  const Simulator sim_b(b);

  const std::uint64_t words = exhaustive ? exhaustive_word_count(n) : (mode.vectors + 63) / 64;
  // Split the word range into chunks; the earliest mismatching chunk wins.
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::uint64_t>(words, 4ull * jobs));
  struct Found {
    bool hit = false;
    std::uint64_t word = 0;
    std::vector<std::uint64_t> inputs;
    std::uint64_t diff = 0;
  };
  std::vector<Found> found(chunks);
  detail::parallel_for(chunks, jobs, [&](std::size_t c) {
    const std::uint64_t begin = words * c / chunks;
    const std::uint64_t end = words * (c + 1) / chunks;
    std::vector<std::uint64_t> in(n), out_a(a.comb_outputs().size()), out_b(out_a.size());
    std::vector<std::uint64_t> scratch_a, scratch_b;
    for (std::uint64_t w = begin; w < end; ++w) {
      std::uint64_t lanes = ~std::uint64_t{0};
      if (exhaustive) {
        for (std::size_t i = 0; i < n; ++i) in[i] = exhaustive_word(i, w);
        lanes = exhaustive_lane_mask(n, w);
      } else {
        // One generator per word keeps random mode independent of chunking.
        std::mt19937_64 rng(mode.seed ^ (0x9E3779B97F4A7C15ull * (w + 1)));
        for (std::size_t i = 0; i < n; ++i) in[i] = rng();
        const auto remaining = mode.vectors - w * 64;
        if (remaining < 64) lanes = (std::uint64_t{1} << remaining) - 1;
      }
      sim_a.eval_outputs(in, masks_a, out_a, scratch_a);
      sim_b.eval_outputs(in, masks_b, out_b, scratch_b);
      std::uint64_t diff = 0;
      for (std::size_t o = 0; o < out_a.size(); ++o) diff |= out_a[o] ^ out_b[o];
      diff &= lanes;
      if (diff != 0) {
        found[c] = {true, w, in, diff};
        return;
      }
    }
  });

  EquivalenceVerdict verdict;
  verdict.vectors_checked = exhaustive ? (n >= 6 ? words * 64 : (std::uint64_t{1} << n))
                                       : mode.vectors;
  for (const auto& f : found) {
    if (!f.hit) continue;
    const int lane = std::countr_zero(f.diff);
    std::vector<bool> cex(n);
    for (std::size_t i = 0; i < n; ++i) cex[i] = ((f.inputs[i] >> lane) & 1u) != 0;
    verdict.equivalent = false;
    verdict.counterexample = std::move(cex);
    verdict.vectors_checked = f.word * 64 + static_cast<std::uint64_t>(lane) + 1;
    break;
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Timing
// ---------------------------------------------------------------------------

DelayModel unit_delay() {
  return [](const Gate&, const KeyEntry*) { return 1.0; };
}

namespace {

struct Arrivals {
  std::vector<double> arrival;                      // per gate, at its output
  std::vector<std::optional<std::size_t>> parent;   // critical fanin gate
};

Arrivals arrivals(const Netlist& netlist, const CamoKey* key, const DelayModel& delay) {
  Arrivals r;
  const auto gates = netlist.gates();
  r.arrival.assign(gates.size(), 0.0);
  r.parent.assign(gates.size(), std::nullopt);
  for (auto g : netlist.topo_order()) {
    const Gate& gate = gates[g];
    double best = 0.0;
    std::optional<std::size_t> parent;
    for (auto in : gate.fanins) {
      const auto d = netlist.driver(in);
      if (!d) continue;
      if (!parent || r.arrival[*d] > best || (r.arrival[*d] == best && *d < *parent)) {
        best = r.arrival[*d];
        parent = d;
      }
    }
    const KeyEntry* entry = (gate.camo && key) ? key->find(gate.name) : nullptr;
    r.arrival[g] = best + delay(gate, entry);
    r.parent[g] = parent;
  }
  return r;
}

}  // namespace

CriticalPath critical_path(const Netlist& netlist, const CamoKey* key, const DelayModel& delay) {
  const auto r = arrivals(netlist, key, delay);
  std::optional<std::size_t> sink;
  for (auto out : netlist.comb_outputs()) {
    const auto d = netlist.driver(out);
    if (!d) continue;
    if (!sink || r.arrival[*d] > r.arrival[*sink] ||
        (r.arrival[*d] == r.arrival[*sink] && *d < *sink)) {
      sink = d;
    }
  }
  CriticalPath path;
  if (!sink) return path;
  path.delay = r.arrival[*sink];
  for (auto g = sink; g; g = r.parent[*g]) path.gates.push_back(*g);
  std::reverse(path.gates.begin(), path.gates.end());
  return path;
}

TimingAnalysis analyze_timing(const Netlist& netlist, const CamoKey* key, const DelayModel& delay) {
  const auto r = arrivals(netlist, key, delay);
  const auto gates = netlist.gates();
  TimingAnalysis t;
  t.arrival = r.arrival;
  for (auto out : netlist.comb_outputs()) {
    if (auto d = netlist.driver(out)) t.critical_delay = std::max(t.critical_delay, r.arrival[*d]);
  }
  // Required time at each gate output, propagated backwards.
  constexpr double kUnconstrained = std::numeric_limits<double>::infinity();
  std::vector<double> required(gates.size(), kUnconstrained);
  for (auto out : netlist.comb_outputs()) {
    if (auto d = netlist.driver(out)) required[*d] = t.critical_delay;
  }
  const auto order = netlist.topo_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto g = *it;
    const Gate& gate = gates[g];
    const KeyEntry* entry = (gate.camo && key) ? key->find(gate.name) : nullptr;
    const double start = required[g] - delay(gate, entry);
    for (auto in : gate.fanins) {
      if (auto d = netlist.driver(in)) required[*d] = std::min(required[*d], start);
    }
  }
  t.slack.resize(gates.size());
  for (std::size_t g = 0; g < gates.size(); ++g) {
    t.slack[g] = required[g] == kUnconstrained ? kUnconstrained : required[g] - r.arrival[g];
  }
  return t;
}

}  // namespace vtcamo
