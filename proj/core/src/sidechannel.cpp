// Copyright 2026 The vtcamo Authors
#include "vtcamo/sidechannel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "parallel.hpp"
#include "vtcamo/error.hpp"
#include "vtcamo/simulator.hpp"

namespace vtcamo {

namespace {

[[noreturn]] void invalid(const std::string& msg) {
  throw Error(ErrorKind::kInvalidParameter, msg);
}

void check_temperature(double t) {
  if (!std::isfinite(t) || t < kMinTemperature || t > kMaxTemperature) {
    invalid("temperature " + std::to_string(t) + " K outside [200, 400] K");
  }
}

bool single_input(GateFunction f) { return f == GateFunction::kInv || f == GateFunction::kBuf; }

}  // namespace

CompensatedBias thermal_compensated_bias(double t, const DeviceParams& params) {
  params.validate();
  check_temperature(t);
  const BiasPoint base = default_bias(params);
  const double shift = params.kvt * (t - params.t_ref);
  CompensatedBias c{{base.vg_n - shift, base.vg_p + shift}, false};
  auto clamp = [&](double& v) {
    if (v < 0.0 || v > params.vdd) {
      v = std::clamp(v, 0.0, params.vdd);
      c.clamped = true;
    }
  };
  clamp(c.bias.vg_n);
  clamp(c.bias.vg_p);
  return c;
}

std::string_view to_string(BiasPolicy p) {
  return p == BiasPolicy::kFixed ? "fixed" : "thermal_compensated";
}

std::string_view to_string(Observability o) {
  return o == Observability::kPerGate ? "per_gate" : "aggregate";
}

BiasPoint bias_for(BiasPolicy policy, double t, const DeviceParams& params) {
  return policy == BiasPolicy::kFixed ? default_bias(params)
                                      : thermal_compensated_bias(t, params).bias;
}

std::vector<std::vector<unsigned>> local_patterns(const Netlist& netlist, const CamoKey& key,
                                                  const std::vector<std::size_t>& gates,
                                                  const std::vector<std::vector<bool>>& vectors) {
  const Simulator sim(netlist);
  std::vector<FunctionMasks> masks(sim.camo_count());
  for (auto g : netlist.camo_gates()) {
    const Gate& gate = netlist.gate(g);
    const KeyEntry* e = key.find(gate.name);
    if (e == nullptr) {
      throw Error(ErrorKind::kUnresolvedGate, "key has no entry for '" + gate.name + "'");
    }
    masks[*sim.camo_ordinal(g)] = masks_for(e->function);
  }
  for (auto g : gates) {
    if (g >= netlist.gates().size() || netlist.gate(g).fanins.size() != 2) {
      invalid("measured gates must be 2-input cells");
    }
  }
  const std::size_t n = sim.input_count();
  std::vector<std::vector<unsigned>> out(gates.size(), std::vector<unsigned>(vectors.size()));
  std::vector<std::uint64_t> in(n), nets(netlist.net_count());
  for (std::size_t base = 0; base < vectors.size(); base += 64) {
    const std::size_t lanes = std::min<std::size_t>(64, vectors.size() - base);
    std::fill(in.begin(), in.end(), 0);
    for (std::size_t l = 0; l < lanes; ++l) {
      const auto& v = vectors[base + l];
      if (v.size() != n) {
        throw Error(ErrorKind::kInvalidInput, "vector width " + std::to_string(v.size()) +
                                                  " does not match " + std::to_string(n) +
                                                  " inputs");
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (v[i]) in[i] |= std::uint64_t{1} << l;
      }
    }
    sim.eval(in, masks, nets);
    for (std::size_t k = 0; k < gates.size(); ++k) {
      const Gate& gate = netlist.gate(gates[k]);
      for (std::size_t l = 0; l < lanes; ++l) {
        const unsigned a = (nets[gate.fanins[0]] >> l) & 1u;
        const unsigned b = (nets[gate.fanins[1]] >> l) & 1u;
        out[k][base + l] = (a << 1) | b;
      }
    }
  }
  return out;
}

namespace {

void check_setup(const MeasurementSetup& setup) {
  setup.params.validate();
  if (setup.temperatures.empty()) invalid("at least one temperature is required");
  for (double t : setup.temperatures) check_temperature(t);
  if (setup.vectors.empty()) invalid("at least one vector is required");
}

// Observations of one cell programmed to `f` over the given local patterns.
std::vector<Observation> cell_observations(GateFunction f, CellFlavor flavor,
                                           const std::vector<unsigned>& patterns,
                                           const MeasurementSetup& setup) {
  const CamoConfig config = config_for(f, flavor);
  std::vector<Observation> obs;
  obs.reserve(patterns.size() * setup.temperatures.size());
  for (std::size_t v = 0; v < patterns.size(); ++v) {
    for (double t : setup.temperatures) {
      const BiasPoint bias = bias_for(setup.bias, t, setup.params);
      const double leak = gate_leakage(config, patterns[v], t, bias, setup.params).total();
      const double delay =
          gate_delay_estimate(config, patterns[v], bias, setup.params.vdd, t, setup.params).seconds;
      obs.push_back({v, t, leak, delay});
    }
  }
  return obs;
}

Signature aggregate(const std::vector<std::vector<Observation>>& cells) {
  Signature s{"*", Observability::kAggregate, cells.front()};
  for (std::size_t c = 1; c < cells.size(); ++c) {
    for (std::size_t i = 0; i < s.observations.size(); ++i) {
      s.observations[i].leakage += cells[c][i].leakage;
      s.observations[i].delay = std::max(s.observations[i].delay, cells[c][i].delay);
    }
  }
  return s;
}

CellFlavor common_flavor(const Netlist& netlist, const std::vector<std::size_t>& gates) {
  if (gates.empty()) invalid("no gates to measure");
  const CellFlavor flavor = netlist.gate(gates.front()).flavor;
  for (auto g : gates) {
    if (!netlist.gate(g).camo) invalid("gate '" + netlist.gate(g).name + "' is not camouflaged");
  }
  return flavor;
}

}  // namespace

std::vector<Signature> measure_signature(const Netlist& netlist, const CamoKey& key,
                                         const std::vector<std::size_t>& gates,
                                         const MeasurementSetup& setup) {
  check_setup(setup);
  common_flavor(netlist, gates);
  const auto patterns = local_patterns(netlist, key, gates, setup.vectors);
  std::vector<std::vector<Observation>> cells(gates.size());
  detail::parallel_for(gates.size(), setup.jobs, [&](std::size_t k) {
    const Gate& gate = netlist.gate(gates[k]);
    cells[k] = cell_observations(key.find(gate.name)->function, gate.flavor, patterns[k], setup);
  });
  if (setup.observability == Observability::kAggregate) return {aggregate(cells)};
  std::vector<Signature> out;
  for (std::size_t k = 0; k < gates.size(); ++k) {
    out.push_back({netlist.gate(gates[k]).name, Observability::kPerGate, std::move(cells[k])});
  }
  return out;
}

TemplateSet build_templates(const Netlist& netlist, const CamoKey& key,
                            const std::vector<std::size_t>& gates, const MeasurementSetup& setup,
                            CellFlavor flavor) {
  check_setup(setup);
  common_flavor(netlist, gates);
  if (setup.observability == Observability::kPerGate && gates.size() != 1) {
    invalid("per-gate templates are built for one gate at a time");
  }
  const auto patterns = local_patterns(netlist, key, gates, setup.vectors);
  TemplateSet set;
  set.flavor = flavor;
  for (auto f : function_set(flavor).members()) {
    std::vector<std::vector<Observation>> cells;
    for (std::size_t k = 0; k < gates.size(); ++k) {
      cells.push_back(cell_observations(f, flavor, patterns[k], setup));
    }
    Signature s = aggregate(cells);
    s.observability = setup.observability;
    if (setup.observability == Observability::kPerGate) s.gate = netlist.gate(gates[0]).name;
    set.by_function.emplace(f, std::move(s));
  }
  return set;
}

namespace {

std::vector<double> features(const Signature& s, const NoiseModel* noise) {
  std::vector<double> ll, ld;
  for (const auto& o : s.observations) {
    if (!(o.leakage > 0.0) || !(o.delay > 0.0)) {
      throw Error(ErrorKind::kInvalidTemplate, "signature holds non-positive leakage or delay");
    }
    ll.push_back(std::log(o.leakage));
    ld.push_back(std::log(o.delay));
  }
  if (noise != nullptr && noise->sigma > 0.0) {
    std::mt19937_64 rng(noise->seed);
    std::normal_distribution<double> z(0.0, 1.0);
    for (std::size_t i = 0; i < ll.size(); ++i) {
      ll[i] += noise->sigma * z(rng);
      ld[i] += noise->sigma * z(rng);
    }
  }
  std::vector<double> f = ll;
  f.insert(f.end(), ld.begin(), ld.end());
  // Thermal sensitivity: coldest to hottest observation of each vector.
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> span;
  for (std::size_t i = 0; i < s.observations.size(); ++i) {
    const auto& o = s.observations[i];
    auto [it, fresh] = span.try_emplace(o.vector, i, i);
    if (fresh) continue;
    if (o.t < s.observations[it->second.first].t) it->second.first = i;
    if (o.t > s.observations[it->second.second].t) it->second.second = i;
  }
  for (const auto& [v, lohi] : span) {
    if (s.observations[lohi.first].t < s.observations[lohi.second].t) {
      f.push_back(ll[lohi.second] - ll[lohi.first]);
    }
  }
  return f;
}

bool same_grid(const Signature& a, const Signature& b) {
  if (a.observations.size() != b.observations.size()) return false;
  for (std::size_t i = 0; i < a.observations.size(); ++i) {
    if (a.observations[i].vector != b.observations[i].vector ||
        a.observations[i].t != b.observations[i].t) {
      return false;
    }
  }
  return true;
}

}  // namespace

Classification classify_function(const Signature& signature, const TemplateSet& templates,
                                 const NoiseModel& noise) {
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) invalid("noise sigma must be >= 0");
  for (auto f : function_set(templates.flavor).members()) {
    auto it = templates.by_function.find(f);
    if (it == templates.by_function.end()) {
      throw Error(ErrorKind::kInvalidTemplate,
                  "template set lacks " + std::string(to_string(f)) + " for " +
                      std::string(to_string(templates.flavor)));
    }
    if (!same_grid(it->second, signature)) {
      throw Error(ErrorKind::kInvalidTemplate,
                  "template for " + std::string(to_string(f)) +
                      " was measured on different vectors or temperatures");
    }
  }

  const auto x = features(signature, &noise);
  std::vector<std::pair<GateFunction, std::vector<double>>> refs;
  for (auto f : function_set(templates.flavor).members()) {
    refs.emplace_back(f, features(templates.by_function.at(f), nullptr));
  }
  std::vector<double> scale(x.size(), 1.0);
  for (std::size_t d = 0; d < x.size(); ++d) {
    double mean = 0.0;
    for (const auto& r : refs) mean += r.second[d];
    mean /= static_cast<double>(refs.size());
    double var = 0.0;
    for (const auto& r : refs) var += (r.second[d] - mean) * (r.second[d] - mean);
    const double sd = std::sqrt(var / static_cast<double>(refs.size()));
    if (sd > 1e-12) scale[d] = sd;
  }

  Classification c;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> d2;
  for (const auto& [f, ref] : refs) {
    double acc = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
      const double u = (x[d] - ref[d]) / scale[d];
      acc += u * u;
    }
    c.distance[f] = std::sqrt(acc);
    d2.push_back(acc);
    if (acc < best) {
      best = acc;
      c.guess = f;
    }
  }
  // Softmax over -d^2 / 2, shifted by the best for stability.
  std::vector<double> p;
  double z = 0.0;
  for (double v : d2) {
    p.push_back(std::exp(-(v - best) / 2.0));
    z += p.back();
  }
  for (double& v : p) v /= z;
  std::sort(p.rbegin(), p.rend());
  c.confidence = p.size() > 1 ? std::clamp(p[0] - p[1], 0.0, 1.0) : 1.0;
  return c;
}

double per_gate_accuracy(const Netlist& netlist, const CamoKey& key,
                         const std::vector<std::size_t>& gates, const MeasurementSetup& setup,
                         CellFlavor flavor, double sigma, std::uint64_t trials,
                         std::uint64_t seed) {
  if (trials == 0) invalid("trials must be >= 1");
  MeasurementSetup per_gate = setup;
  per_gate.observability = Observability::kPerGate;
  const auto signatures = measure_signature(netlist, key, gates, per_gate);
  std::vector<TemplateSet> templates(gates.size());
  detail::parallel_for(gates.size(), setup.jobs, [&](std::size_t k) {
    templates[k] = build_templates(netlist, key, {gates[k]}, per_gate, flavor);
  });
  std::vector<std::uint8_t> correct(trials, 0);
  detail::parallel_for(trials, setup.jobs, [&](std::size_t i) {
    const std::size_t k = i % gates.size();
    const auto c = classify_function(signatures[k], templates[k], {sigma, seed + i});
    correct[i] = c.guess == key.find(netlist.gate(gates[k]).name)->function;
  });
  double hits = 0.0;
  for (auto v : correct) hits += v;
  return hits / static_cast<double>(trials);
}

double aggregate_accuracy(const Netlist& netlist, const CamoKey& key,
                          const std::vector<std::size_t>& gates, const MeasurementSetup& setup,
                          CellFlavor flavor, double sigma, std::uint64_t trials,
                          std::uint64_t seed) {
  if (trials == 0) invalid("trials must be >= 1");
  MeasurementSetup agg = setup;
  agg.observability = Observability::kAggregate;
  const auto signature = measure_signature(netlist, key, gates, agg).front();
  const auto templates = build_templates(netlist, key, gates, agg, flavor);
  std::map<GateFunction, double> share;
  for (auto g : gates) share[key.find(netlist.gate(g).name)->function] += 1.0;
  for (auto& [f, v] : share) v /= static_cast<double>(gates.size());
  std::vector<double> score(trials, 0.0);
  detail::parallel_for(trials, setup.jobs, [&](std::size_t i) {
    const auto c = classify_function(signature, templates, {sigma, seed + i});
    auto it = share.find(c.guess);
    score[i] = it == share.end() ? 0.0 : it->second;
  });
  double total = 0.0;
  for (double v : score) total += v;
  return total / static_cast<double>(trials);
}

BalanceResult balance_flavors(const Netlist& netlist, const CamoKey& key, CellFlavor flavor,
                              const CostTable& costs) {
  validate_key(netlist, key);
  BalanceReport report;
  const FunctionSet set = function_set(flavor);
  for (auto f : set.members()) report.counts_before[f] = 0;
  for (auto g : netlist.camo_gates()) {
    const Gate& gate = netlist.gate(g);
    if (gate.flavor == flavor) ++report.counts_before[key.find(gate.name)->function];
  }
  std::size_t target = 0;
  for (const auto& [f, n] : report.counts_before) target = std::max(target, n);
  report.counts_after = report.counts_before;

  BalanceResult result{netlist, key, {}};
  std::size_t deficit = 0;
  for (const auto& [f, n] : report.counts_before) deficit += target - n;
  if (deficit == 0) {
    result.report = std::move(report);
    return result;
  }

  std::vector<NetId> taps(netlist.comb_inputs().begin(), netlist.comb_inputs().end());
  for (auto g : netlist.topo_order()) taps.push_back(netlist.gate(g).output);
  if (taps.size() < 2) {
    throw Error(ErrorKind::kInsertion, "balancing needs at least two nets to tap");
  }

  auto builder = netlist.to_builder();
  std::size_t serial = 0;
  std::size_t inserted = 0;
  for (auto f : set.members()) {
    for (std::size_t n = report.counts_before[f]; n < target; ++n) {
      std::string name;
      do {
        name = "__bal_" + std::to_string(serial++);
      } while (netlist.find_net(name).has_value());
      std::vector<std::string> fanins = {netlist.net_name(taps[(2 * inserted) % taps.size()]),
                                         netlist.net_name(taps[(2 * inserted + 1) % taps.size()])};
      ++inserted;
      builder.add_camo_gate(name, flavor, fanins);
      KeyEntry entry{f, std::nullopt};
      if (single_input(f)) entry.decoy = fanins.front();
      result.key.entries[name] = entry;
      report.insertions.push_back({name, f, fanins});
      ++report.counts_after[f];
    }
  }
  result.netlist = builder.build();
  report.area_added = static_cast<double>(report.insertions.size()) * costs.at(flavor).area_multiple;
  result.report = std::move(report);
  return result;
}

ThermalSensitivity thermal_sensitivity(double t_lo, double t_hi, const DeviceParams& params) {
  params.validate();
  check_temperature(t_lo);
  check_temperature(t_hi);
  if (!(t_hi > t_lo)) invalid("t_hi must exceed t_lo");
  double lf = 0.0, lc = 0.0, lft = 0.0, lct = 0.0;
  int count = 0;
  for (auto f : kAllFunctions) {
    const CamoConfig config = config_for(f, CellFlavor::kCamo8);
    for (unsigned p = 0; p < kPatterns; ++p) {
      const auto fixed_lo = gate_leakage(config, p, t_lo, default_bias(params), params);
      const auto fixed_hi = gate_leakage(config, p, t_hi, default_bias(params), params);
      const auto comp_lo =
          gate_leakage(config, p, t_lo, thermal_compensated_bias(t_lo, params).bias, params);
      const auto comp_hi =
          gate_leakage(config, p, t_hi, thermal_compensated_bias(t_hi, params).bias, params);
      lf += std::log(fixed_hi.switches / fixed_lo.switches);
      lc += std::log(comp_hi.switches / comp_lo.switches);
      lft += std::log(fixed_hi.total() / fixed_lo.total());
      lct += std::log(comp_hi.total() / comp_lo.total());
      ++count;
    }
  }
  ThermalSensitivity s;
  s.fixed = std::exp(lf / count);
  s.compensated = std::exp(lc / count);
  s.reduction = s.fixed / s.compensated;
  s.fixed_total = std::exp(lft / count);
  s.compensated_total = std::exp(lct / count);
  return s;
}

}  // namespace vtcamo
