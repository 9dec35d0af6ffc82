#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperreg/complex.hpp"
#include "hyperreg/density_graph.hpp"
#include "hyperreg/ensemble.hpp"
#include "hyperreg/errors.hpp"
#include "hyperreg/gpe.hpp"
#include "hyperreg/inheritance.hpp"
#include "hyperreg/numeric.hpp"
#include "hyperreg/regularity.hpp"
#include "hyperreg/thc.hpp"
#include "hyperreg/weighted_graph.hpp"

namespace hyperreg {

using json = nlohmann::json;

json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
// A string names a file relative to `base`; anything else is returned as is.
json resolve_json(const json& node, const std::filesystem::path& base);

// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

PartiteComplex complex_from_json(const json& j);
json complex_to_json(const PartiteComplex& h);

// Exact scalars are written as strings ("3/8"), float scalars as numbers;
// either form is accepted on input.
template <class T>
T scalar_from_json(const json& j) {
  if (j.is_string()) return parse_scalar<T>(j.get<std::string>());
  if (j.is_number_integer()) return from_int<T>(j.get<long long>());
  if (j.is_number()) {
    if constexpr (ScalarTraits<T>::exact) return parse_rational(j.dump());
    else return j.get<double>();
  }
  throw ParseError("expected a number, got " + j.dump());
}

template <class T>
json scalar_to_json(const T& x) {
  if constexpr (ScalarTraits<T>::exact) {
    return to_string(x);
  } else {
    if (!std::isfinite(x)) return to_string(x);
    return x;
  }
}

inline json scaled_to_json(const Scaled& s) { return s.str(); }

template <class T>
WeightedGraph<T> graph_from_json(const json& j) {
  try {
    std::vector<std::pair<PartIndex, int>> parts;
    for (const auto& [key, size] : j.at("parts").items()) parts.emplace_back(std::stoi(key), size.template get<int>());
    int cap = j.at("arity_cap").get<int>();
    T empty = j.contains("empty_weight") ? scalar_from_json<T>(j["empty_weight"]) : T(1);
    WeightedGraph<T> g(parts, cap, empty);
    if (j.contains("layers"))
      for (const auto& layer : j["layers"]) {
        auto idx = layer.at("indices").template get<std::vector<PartIndex>>();
        if (!std::is_sorted(idx.begin(), idx.end()))
          throw ParseError("layer indices must be listed in ascending order");
        std::vector<T> data;
        for (const auto& w : layer.at("weights")) data.push_back(scalar_from_json<T>(w));
        g.set_layer(idx, std::move(data));
      }
    return g;
  } catch (const json::exception& e) {
    throw ParseError(std::string("hypergraph JSON: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ParseError("hypergraph JSON: part keys must be integers");
  }
}

template <class T>
json graph_to_json(const WeightedGraph<T>& g) {
  json parts = json::object();
  for (int i = 0; i < g.num_parts(); ++i) parts[std::to_string(g.part_id(i))] = g.part_size(i);
  json layers = json::array();
  for (const auto& [m, data] : g.layers()) {
    json w = json::array();
    for (const T& x : data) w.push_back(scalar_to_json(x));
    layers.push_back({{"indices", g.indices_of(m)}, {"weights", w}});
  }
  return {{"parts", parts}, {"arity_cap", g.arity_cap()}, {"empty_weight", scalar_to_json(g.empty_weight())},
          {"layers", layers}};
}

// {"indices": [...], "values": [{"slot": [...], "value": v}]}; absent slots are 1.
template <class T>
DensityGraph<T> density_from_json(const json& j) {
  try {
    DensityGraph<T> d(j.at("indices").template get<std::vector<PartIndex>>());
    if (j.contains("values"))
      for (const auto& v : j["values"]) d.set(v.at("slot").template get<std::vector<PartIndex>>(), scalar_from_json<T>(v.at("value")));
    return d;
  } catch (const json::exception& e) {
    throw ParseError(std::string("density JSON: ") + e.what());
  }
}

template <class T>
json density_to_json(const DensityGraph<T>& d) {
  json vals = json::array();
  for (const auto& [m, v] : d.values()) vals.push_back({{"slot", d.indices_of(m)}, {"value", scalar_to_json(v)}});
  return {{"indices", d.indices()}, {"values", vals}};
}

// Either a full parameter listing or {"generate": {...}} for make_valid_ensemble.
Ensemble ensemble_from_json(const json& j);
json ensemble_to_json(const Ensemble& e);
json ensemble_report_to_json(const EnsembleReport& r);

// {"complex", "g", "gamma", "p", "d", "phi": [[x, v], ...]}; the first five
// are inline objects or paths relative to `base`.
template <class T>
CandidateStack<T> stack_from_json(const json& j, const std::filesystem::path& base) {
  try {
    auto h = complex_from_json(resolve_json(j.at("complex"), base));
    auto g = graph_from_json<T>(resolve_json(j.at("g"), base));
    auto gamma = graph_from_json<T>(resolve_json(j.at("gamma"), base));
    auto p = density_from_json<T>(resolve_json(j.at("p"), base));
    DensityGraph<T> d = j.contains("d") ? density_from_json<T>(resolve_json(j["d"], base))
                                        : measured_relative_densities(g, gamma);
    auto s = make_gpe_stack(h, g, gamma, p, d);
    if (j.contains("phi"))
      for (const auto& pair : j["phi"]) s = update(s, pair.at(0).template get<VertexId>(), pair.at(1).template get<int>());
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("stack JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------- reports

template <class T>
json to_json(const RegularityVerdict<T>& v) {
  return {{"k", v.k},
          {"eps", scalar_to_json(v.eps)},
          {"d", scalar_to_json(v.d)},
          {"d_measured", v.d_measured},
          {"density", scalar_to_json(v.density)},
          {"oct_ratio", scalar_to_json(v.oct_ratio)},
          {"density_ok", v.density_ok},
          {"oct_ok", v.oct_ok},
          {"passes", v.passes},
          {"density_slack", scalar_to_json(v.density_slack)},
          {"oct_slack", scalar_to_json(v.oct_slack)},
          {"slack", scalar_to_json(v.slack)},
          {"lower_margin", scalar_to_json(v.lower_margin)},
          {"degenerate", v.degenerate}};
}

template <class T>
json to_json(const MinimalityReport<T>& r) {
  return {{"defect", r.infinite ? json("inf") : scalar_to_json(r.defect)},
          {"infinite", r.infinite},
          {"witness", {{"i", r.witness.i}, {"a", r.witness.a}, {"b", r.witness.b}, {"c", r.witness.c}}},
          {"count_a", scalar_to_json(r.count_a)},
          {"count_b", scalar_to_json(r.count_b)},
          {"count_c", scalar_to_json(r.count_c)},
          {"triples", r.triples}};
}

template <class T>
json to_json(const InhHypothesisReport<T>& r) {
  json j = {{"inh1", r.inh1}, {"inh2", r.inh2}, {"inh3", r.inh3}, {"inh4", r.inh4},
            {"inh1_checked", r.inh1_checked}, {"inh1_worst", scalar_to_json(r.inh1_worst)},
            {"inh1_witness", r.inh1_witness}, {"inh2_detail", r.inh2_detail},
            {"inh3_detail", r.inh3_detail}, {"inh4_detail", r.inh4_detail}};
  return j;
}

template <class T>
json to_json(const InheritanceScan<T>& s) {
  json rows = json::array();
  for (const auto& v : s.per_vertex)
    rows.push_back({{"vertex", v.vertex},
                    {"good", v.good},
                    {"precondition_ok", v.precondition_ok},
                    {"density", scalar_to_json(v.measured.density)},
                    {"oct_ratio", scalar_to_json(v.measured.oct_ratio)},
                    {"anchored_slack", scalar_to_json(v.anchored.slack)}});
  json j = {{"part", s.part},
            {"eps_prime", scalar_to_json(s.eps_prime)},
            {"target", scalar_to_json(s.target)},
            {"good_set", s.good_set},
            {"good_vnorm", scalar_to_json(s.good_vnorm)},
            {"part_vnorm", scalar_to_json(s.part_vnorm)},
            {"required_vnorm", scalar_to_json(s.required_vnorm)},
            {"bad_fraction", scalar_to_json(s.bad_fraction)},
            {"threshold_ok", s.threshold_ok},
            {"asserted", s.asserted},
            {"guarantee_holds", s.guarantee_holds},
            {"rows", rows}};
  if (s.hypothesis_report) j["hypotheses"] = to_json(*s.hypothesis_report);
  return j;
}

const char* thc_mode_name(ThcMode m);
ThcMode thc_mode_from_string(const std::string& s);

template <class T>
json to_json(const Gpe2Entry<T>& e) {
  return {{"level", e.level},
          {"e", e.e},
          {"hits", e.hits},
          {"hits_exceeded", e.hits_exceeded},
          {"eps", scaled_to_json(e.eps)},
          {"d", scalar_to_json(e.d)},
          {"density_gap", scalar_to_json(e.density_gap)},
          {"oct_excess", scalar_to_json(e.oct_excess)},
          {"degenerate", e.degenerate},
          {"ok", e.ok},
          {"error", e.error}};
}

template <class T>
json to_json(const GpeReport<T>& r) {
  json j = {{"level", r.level},
            {"thc_mode", thc_mode_name(r.mode)},
            {"gpe1", r.gpe1},
            {"gpe1_checked", r.gpe1_checked},
            {"gpe1_detail", r.gpe1_detail},
            {"gpe2", r.gpe2},
            {"gpe3", r.gpe3},
            {"passes", r.passes()},
            {"first_failing_level", r.first_failing_level}};
  if (r.gpe2_witness) j["gpe2_witness"] = to_json(*r.gpe2_witness);
  if (r.gpe3_witness)
    j["gpe3_witness"] = {{"e", *r.gpe3_witness}, {"level", r.gpe3_level}, {"product", scalar_to_json(r.gpe3_product)}};
  if (!r.gpe2_entries.empty()) {
    json rows = json::array();
    for (const auto& e : r.gpe2_entries) rows.push_back(to_json(e));
    j["rows"] = rows;
  }
  return j;
}

template <class T>
json to_json(const CountComparison<T>& c) {
  return {{"level", c.level},
          {"r", c.r},
          {"measured", scalar_to_json(c.measured)},
          {"predicted", scalar_to_json(c.predicted)},
          {"rel_error", scalar_to_json(c.rel_error)},
          {"degenerate", c.degenerate},
          {"tolerance", scaled_to_json(c.tolerance)},
          {"within_tolerance", c.within_tolerance},
          {"preconditions", {{"c_star", c.pre_cstar}, {"h_star", c.pre_hstar}, {"eta", c.pre_eta}}},
          {"applies", c.applies()}};
}

template <class T>
json to_json(const EmbedResult<T>& r) {
  json j = {{"phi", r.phi},
            {"stuck", r.stuck},
            {"weight", scalar_to_json(r.weight)},
            {"predicted", scalar_to_json(r.predicted)},
            {"lower_bound", scalar_to_json(r.lower_bound)},
            {"achieved", r.achieved},
            {"bad_counts", r.bad_counts},
            {"preconditions", {{"c_star", r.pre_cstar}, {"h_star", r.pre_hstar}}}};
  if (r.stuck_at) j["stuck_at"] = *r.stuck_at;
  if (r.exhaustive_total) {
    j["exhaustive_total"] = scalar_to_json(*r.exhaustive_total);
    j["exhaustive_holds"] = *r.exhaustive_holds;
  }
  return j;
}

template <class T>
json to_json(const ThcVerdict<T>& v) {
  json path = json::array();
  for (const auto& s : v.failing_path) path.push_back({{"vertex", s.vertex}, {"image", s.image}, {"clause", s.clause}});
  return {{"passes", v.passes},
          {"depth_reached", v.depth_reached},
          {"failing_path", path},
          {"counts_checked", v.counts_checked},
          {"worst_deviation", v.worst_infinite ? json("inf") : scalar_to_json(v.worst_deviation)},
          {"failing_complex", v.failing_complex}};
}

json to_json(const RandomThcReport& r);

// The "rows" array of a report as CSV, or its scalar fields as key,value lines.
std::string json_to_csv(const json& j);

}  // namespace hyperreg
