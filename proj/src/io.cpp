#include "hyperreg/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace hyperreg {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::filesystem::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

json resolve_json(const json& node, const std::filesystem::path& base) {
  if (!node.is_string()) return node;
  std::filesystem::path p(node.get<std::string>());
  return read_json_file(p.is_absolute() ? p : base / p);
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

PartiteComplex complex_from_json(const json& j) {
  try {
    std::map<PartIndex, std::vector<VertexId>> parts;
    for (const auto& [key, vs] : j.at("parts").items()) parts[std::stoi(key)] = vs.get<std::vector<VertexId>>();
    std::vector<std::vector<VertexId>> edges;
    if (j.contains("edges")) edges = j["edges"].get<std::vector<std::vector<VertexId>>>();
    std::optional<std::vector<VertexId>> order;
    if (j.contains("order")) order = j["order"].get<std::vector<VertexId>>();
    return PartiteComplex::from_generators(parts, edges, order);
  } catch (const json::exception& e) {
    throw ParseError(std::string("complex JSON: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ParseError("complex JSON: part keys must be integers");
  }
}

json complex_to_json(const PartiteComplex& h) {
  json parts = json::object();
  for (const auto& [p, vs] : h.parts()) parts[std::to_string(p)] = vs;
  json edges = json::array();
  for (VertexMask e : h.edges())
    if (e != 0) edges.push_back(h.edge_ids(e));
  json order = json::array();
  for (int x : h.order()) order.push_back(h.id(x));
  return {{"parts", parts}, {"edges", edges}, {"order", order}};
}

namespace {

Scaled scaled_from_json(const json& j) {
  if (j.is_string()) return Scaled::parse(j.get<std::string>());
  if (j.is_number()) return Scaled(parse_rational(j.dump()));
  throw ParseError("expected a number, got " + j.dump());
}

}  // namespace

Ensemble ensemble_from_json(const json& j) {
  try {
    int k = j.at("k").get<int>();
    int delta_cap = j.at("Delta").get<int>();
    int c_star = j.at("c_star").get<int>();
    int h_star = j.at("h_star").get<int>();
    if (j.contains("generate")) {
      const auto& g = j["generate"];
      std::vector<Rational> delta;
      for (const auto& d : g.at("delta")) delta.push_back(scalar_from_json<Rational>(d));
      return make_valid_ensemble(k, delta_cap, c_star, h_star, delta, scalar_from_json<Rational>(g.at("eta_k")));
    }
    Ensemble e(k, c_star, h_star, delta_cap);
    const auto& delta = j.at("delta");
    const auto& eta = j.at("eta");
    const auto& eps = j.at("eps");
    if (delta.size() != static_cast<std::size_t>(k)) throw ParseError("ensemble JSON: need k values of delta");
    if (eta.size() != static_cast<std::size_t>(k + 1)) throw ParseError("ensemble JSON: need k+1 values of eta");
    for (int l = 1; l <= k; ++l) e.delta[static_cast<std::size_t>(l)] = scaled_from_json(delta[static_cast<std::size_t>(l - 1)]);
    for (int l = 0; l <= k; ++l) e.eta[static_cast<std::size_t>(l)] = scaled_from_json(eta[static_cast<std::size_t>(l)]);
    for (int l = 1; l <= k; ++l)
      for (int r = 1; r <= k; ++r)
        for (int h = 0; h <= h_star; ++h)
          e.eps(l, r, h) = scaled_from_json(eps.at(static_cast<std::size_t>(l - 1)).at(static_cast<std::size_t>(r - 1)).at(static_cast<std::size_t>(h)));
    return e;
  } catch (const json::exception& e) {
    throw ParseError(std::string("ensemble JSON: ") + e.what());
  }
}

json ensemble_to_json(const Ensemble& e) {
  json delta = json::array();
  for (int l = 1; l <= e.k; ++l) delta.push_back(scaled_to_json(e.delta[static_cast<std::size_t>(l)]));
  json eta = json::array();
  for (const auto& x : e.eta) eta.push_back(scaled_to_json(x));
  json eps = json::array();
  for (int l = 1; l <= e.k; ++l) {
    json by_r = json::array();
    for (int r = 1; r <= e.k; ++r) {
      json by_h = json::array();
      for (int h = 0; h <= e.h_star; ++h) by_h.push_back(scaled_to_json(e.eps(l, r, h)));
      by_r.push_back(by_h);
    }
    eps.push_back(by_r);
  }
  return {{"k", e.k}, {"Delta", e.Delta}, {"c_star", e.c_star}, {"h_star", e.h_star},
          {"delta", delta}, {"eta", eta}, {"eps", eps}};
}

json ensemble_report_to_json(const EnsembleReport& r) {
  json j = {{"valid", r.valid()}};
  for (int i = 0; i < 4; ++i) {
    auto c = static_cast<VeClause>(i);
    j[clause_name(c)] = {{"ok", r.ok(c)}, {"failures", r.failures[i]}};
  }
  return j;
}

const char* thc_mode_name(ThcMode m) {
  switch (m) {
    case ThcMode::Full: return "full";
    case ThcMode::Hypothesis: return "hypothesis";
    case ThcMode::Assumed: return "assumed";
  }
  return "?";
}

ThcMode thc_mode_from_string(const std::string& s) {
  if (s == "full") return ThcMode::Full;
  if (s == "hypothesis") return ThcMode::Hypothesis;
  if (s == "assumed") return ThcMode::Assumed;
  throw ParseError("unknown THC mode '" + s + "'");
}

json to_json(const RandomThcReport& r) {
  json rows = json::array();
  for (const auto& t : r.trials)
    rows.push_back({{"trial", t.trial},
                    {"seed", t.seed},
                    {"passed", t.passed},
                    {"stuck", t.stuck},
                    {"steps_checked", t.steps_checked},
                    {"counts_checked", t.counts_checked},
                    {"worst_deviation", t.worst_deviation},
                    {"failing_step", t.failing_step},
                    {"failing_complex", t.failing_complex},
                    {"nconc_checked", t.nconc_checked},
                    {"nconc_within", t.nconc_within},
                    {"nconc_worst", t.nconc_worst},
                    {"nconc_worst_injective", t.nconc_worst_injective},
                    {"nconc_worst_gap", t.nconc_worst_gap},
                    {"nconc_degenerate", t.nconc_degenerate}});
  return {{"k", r.k},
          {"n", r.n},
          {"p", r.p},
          {"eta", r.eta},
          {"c_star", r.c_star},
          {"d", r.d},
          {"d_mismatch", r.d_mismatch},
          {"Delta", r.Delta},
          {"n0", r.n0},
          {"parts_ok", r.parts_ok},
          {"log2_p_condition_lhs", r.log2_p_condition_lhs},
          {"log2_p_condition_rhs", r.log2_p_condition_rhs},
          {"p_condition", r.p_condition},
          {"n1", r.n1},
          {"degenerate", r.degenerate},
          {"edges", r.edges},
          {"pass_frequency", r.pass_frequency},
          {"nconc_frequency", r.nconc_frequency},
          {"rows", rows}};
}

namespace {

std::string csv_cell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string json_to_csv(const json& j) {
  std::ostringstream out;
  if (j.is_object() && j.contains("rows") && j["rows"].is_array() && !j["rows"].empty()) {
    std::vector<std::string> cols;
    std::set<std::string> seen;
    for (const auto& row : j["rows"])
      for (const auto& [key, _] : row.items())
        if (seen.insert(key).second) cols.push_back(key);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
    for (const auto& row : j["rows"]) {
      for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out << ",";
        if (row.contains(cols[i])) out << csv_cell(row[cols[i]]);
      }
      out << "\n";
    }
    return out.str();
  }
  out << "key,value\n";
  if (j.is_object())
    for (const auto& [key, v] : j.items())
      if (!v.is_structured()) out << csv_cell(key) << "," << csv_cell(v) << "\n";
  return out.str();
}

}  // namespace hyperreg
