#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hyperreg/homcount.hpp"
#include "hyperreg/io.hpp"
#include "hyperreg/parallel.hpp"

using namespace hyperreg;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.3.0";

struct Common {
  bool use_float = false;
  std::string format = "json";
  int threads = 0;
};

struct Args {
  std::string graph, complex, g, gamma, density, stack, ensemble, order, pattern, config, out_dir;
  std::string eps, d, eps_out, dprime, eta, eps_in, thc_mode = "hypothesis", family = "octahedra", eta_k;
  std::vector<std::string> delta;
  std::vector<int> parts;
  bool exact = false, check_hyp = false, exhaustive = false, entries = false;
  std::uint64_t samples = 0, seed = 0;
  int level = 0, cstar = 0, hstar = 0, k = 2, n = 0, trials = 1, delta_cap = 2, part = 0;
  double p = 0.5, eta_f = 0.2;
};

template <class T>
T scalar_arg(const std::string& s, const char* name) {
  if (s.empty()) throw ParseError(std::string("missing --") + name);
  return parse_scalar<T>(s);
}

template <class T>
json cmd_count(const Args& a) {
  auto g = graph_from_json<T>(read_json_file(a.graph));
  auto h = complex_from_json(read_json_file(a.complex));
  if (a.samples > 0 && !a.exact) {
    auto est = hom_estimate(h, g, a.samples, a.seed);
    return {{"value", est.value}, {"mode", "sampled"}, {"samples", est.samples}, {"seed", est.seed}, {"stderr", est.std_error}};
  }
  return {{"value", scalar_to_json(hom_weight(h, g))}, {"mode", "exact"}};
}

template <class T>
json cmd_regcheck(const Args& a) {
  auto g = graph_from_json<T>(read_json_file(a.g));
  auto gamma = graph_from_json<T>(read_json_file(a.gamma));
  if (auto why = regularity_precondition_failure(g, gamma)) return {{"precondition_ok", false}, {"detail", *why}};
  std::optional<T> d;
  if (!a.d.empty()) d = parse_scalar<T>(a.d);
  json j = to_json(is_regular(g, gamma, scalar_arg<T>(a.eps, "eps"), d));
  j["precondition_ok"] = true;
  return j;
}

template <class T>
json cmd_minimality(const Args& a) {
  auto g = graph_from_json<T>(read_json_file(a.g));
  json j = to_json(minimality_report(g));
  if (!a.eta.empty()) j["eta_minimal"] = is_eta_minimal(g, parse_scalar<T>(a.eta));
  return j;
}

template <class T>
DensityGraph<T> all_ones_density(const WeightedGraph<T>& g) {
  return DensityGraph<T>(g.part_ids());
}

template <class T>
json cmd_inherit(const Args& a) {
  auto g = graph_from_json<T>(read_json_file(a.g));
  auto gamma = graph_from_json<T>(read_json_file(a.gamma));
  std::optional<InheritHypotheses<T>> hyp;
  if (a.check_hyp) {
    InheritHypotheses<T> h{scalar_arg<T>(a.eps_in, "eps-in"), scalar_arg<T>(a.eta, "eta"),
                           a.density.empty() ? all_ones_density(gamma) : density_from_json<T>(read_json_file(a.density))};
    hyp = h;
  }
  return to_json(inherit_scan(g, gamma, scalar_arg<T>(a.eps_out, "eps-out"), scalar_arg<T>(a.d, "d"),
                              scalar_arg<T>(a.dprime, "dprime"), hyp));
}

template <class T>
CandidateStack<T> load_stack(const Args& a) {
  fs::path path(a.stack);
  json j = read_json_file(path);
  if (!a.order.empty()) {
    json c = resolve_json(j.at("complex"), path.parent_path());
    json o = read_json_file(a.order);
    c["order"] = o.is_object() ? o.at("order") : o;
    j["complex"] = c;
  }
  return stack_from_json<T>(j, path.parent_path());
}

template <class T>
json cmd_gpecount(const Args& a) {
  auto s = load_stack<T>(a);
  auto e = ensemble_from_json(read_json_file(a.ensemble));
  return to_json(gpe_count(s, e, a.level));
}

template <class T>
json cmd_gpecheck(const Args& a) {
  auto s = load_stack<T>(a);
  auto e = ensemble_from_json(read_json_file(a.ensemble));
  GpeOptions opts;
  opts.mode = thc_mode_from_string(a.thc_mode);
  opts.keep_entries = a.entries;
  return to_json(is_gpe(s, e, a.level == 0 ? s.k() : a.level, opts));
}

template <class T>
json cmd_embed(const Args& a) {
  auto s = load_stack<T>(a);
  auto e = ensemble_from_json(read_json_file(a.ensemble));
  EmbedOptions opts;
  opts.exhaustive = a.exhaustive;
  opts.bad.gpe.mode = thc_mode_from_string(a.thc_mode);
  std::mt19937_64 rng(a.seed);
  json j = to_json(greedy_embed(s, e, rng, opts));
  j["seed"] = a.seed;
  return j;
}

template <class T>
json cmd_thc_full(const Args& a) {
  auto gamma = graph_from_json<T>(read_json_file(a.gamma));
  auto p = density_from_json<T>(read_json_file(a.density));
  Scaled eta = Scaled::parse(a.eta.empty() ? "0" : a.eta);
  std::vector<PartIndex> order;
  if (!a.order.empty()) {
    json o = read_json_file(a.order);
    order = (o.is_object() ? o.at("order") : o).get<std::vector<PartIndex>>();
  }
  return to_json(is_thc_full(gamma, p, eta, a.cstar, order));
}

json cmd_thc_random(const Args& a) {
  auto pattern = complex_from_json(read_json_file(a.pattern));
  RandomThcOptions opts;
  opts.trials = a.trials;
  opts.seed = a.seed;
  if (a.family == "exhaustive") opts.mode = FamilyMode::Exhaustive;
  else if (a.family != "octahedra") throw ParseError("unknown family '" + a.family + "'");
  auto rep = random_thc_experiment({a.k, a.n, a.p, a.seed}, pattern, balanced_partition(a.n, pattern.part_indices()),
                                   a.eta_f, a.cstar, opts);
  return to_json(rep);
}

json cmd_random(const Args& a) {
  auto g = random_hypergraph({a.k, a.n, a.p, a.seed});
  json j = {{"k", a.k}, {"n", a.n}, {"p", a.p}, {"seed", a.seed}, {"edges", g.edge_count()},
            {"possible_edges", g.possible_edges()}};
  if (!a.parts.empty()) j["graph"] = graph_to_json(to_partite<Rational>(g, balanced_partition(a.n, a.parts)));
  return j;
}

json cmd_ensemble(const Args& a) {
  Ensemble e = [&] {
    if (!a.ensemble.empty()) return ensemble_from_json(read_json_file(a.ensemble));
    std::vector<Rational> delta;
    for (const auto& s : a.delta) delta.push_back(parse_rational(s));
    return make_valid_ensemble(a.k, a.delta_cap, a.cstar, a.hstar, delta, scalar_arg<Rational>(a.eta_k, "eta-k"));
  }();
  return {{"ensemble", ensemble_to_json(e)}, {"report", ensemble_report_to_json(check_valid_ensemble(e))}};
}

// ---------------------------------------------------------------- run

struct Config {
  std::string command;
  std::vector<std::pair<std::string, std::string>> options;
};

Config parse_config(const fs::path& path) {
  std::istringstream in(read_text_file(path));
  Config c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key == "command") c.command = value;
    else c.options.emplace_back(key, value);
  }
  if (c.command.empty()) throw ParseError(path.string() + ": missing 'command'");
  return c;
}

int dispatch(std::vector<std::string> argv, json& result, Common& common);

std::string write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << text;
  return fnv1a_hex(text);
}

json cmd_run(const Args& a, Common& common) {
  fs::path cfg_path(a.config);
  Config cfg = parse_config(cfg_path);
  fs::path base = cfg_path.parent_path();
  std::vector<std::string> argv;
  std::istringstream words(cfg.command);
  for (std::string w; words >> w;) argv.push_back(w);
  json inputs = json::array();
  json seed;
  for (const auto& [key, value] : cfg.options) {
    if (value == "false") continue;
    argv.push_back("--" + key);
    if (value == "true") continue;
    fs::path maybe = base / value;
    if (!value.empty() && fs::is_regular_file(maybe)) {
      argv.push_back(maybe.string());
      inputs.push_back({{"path", value}, {"fnv1a", fnv1a_hex(read_text_file(maybe))}});
    } else {
      argv.push_back(value);
    }
    if (key == "seed") seed = value;
  }
  if (common.use_float) argv.push_back("--float");
  fs::path out_dir = a.out_dir.empty() ? base / "out" : fs::path(a.out_dir);
  fs::create_directories(out_dir);
  json result;
  Common inner;
  auto start = std::chrono::steady_clock::now();
  int code = dispatch(argv, result, inner);
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (code != 0) throw ParseError("run: subcommand exited with code " + std::to_string(code));
  json outputs = json::array();
  std::string text = result.dump(2) + "\n";
  outputs.push_back({{"path", "result.json"}, {"fnv1a", write_file(out_dir / "result.json", text)}});
  if (result.contains("rows"))
    outputs.push_back({{"path", "result.csv"}, {"fnv1a", write_file(out_dir / "result.csv", json_to_csv(result))}});
  json manifest = {{"command", cfg.command}, {"args", argv},   {"config", a.config},
                   {"inputs", inputs},       {"seed", seed},   {"tool_version", kVersion},
                   {"timing_ms", ms},        {"outputs", outputs}};
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

// ---------------------------------------------------------------- parser

int dispatch(std::vector<std::string> argv, json& result, Common& common) {
  CLI::App app{"Weighted partite hypergraphs: counting, regularity, inheritance, GPE embedding and THC checks"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.add_flag("--float", common.use_float, "Use floating point instead of exact rationals");
  app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", common.threads, "Worker threads (default: HYPERREG_THREADS or all cores)");
  Args a;

  auto* count = app.add_subcommand("count", "Homomorphism weight of a complex in a graph");
  count->add_option("--graph", a.graph)->required();
  count->add_option("--complex", a.complex)->required();
  count->add_flag("--exact", a.exact);
  count->add_option("--samples", a.samples);
  count->add_option("--seed", a.seed);

  auto* reg = app.add_subcommand("regcheck", "Octahedral (eps, d)-regularity of G relative to Gamma");
  reg->add_option("--g", a.g)->required();
  reg->add_option("--gamma", a.gamma)->required();
  reg->add_option("--eps", a.eps)->required();
  reg->add_option("--d", a.d);

  auto* mini = app.add_subcommand("minimality", "Minimality defect of a graph");
  mini->add_option("--g", a.g)->required();
  mini->add_option("--eta", a.eta);

  auto* inh = app.add_subcommand("inherit", "Regularity inheritance scan over part 0");
  inh->add_option("--g", a.g)->required();
  inh->add_option("--gamma", a.gamma)->required();
  inh->add_option("--eps-out", a.eps_out)->required();
  inh->add_option("--d", a.d)->required();
  inh->add_option("--dprime", a.dprime)->required();
  inh->add_flag("--check-hypotheses", a.check_hyp);
  inh->add_option("--eta", a.eta);
  inh->add_option("--eps-in", a.eps_in);
  inh->add_option("--density", a.density, "Density graph P for the hypotheses (default: all ones)");

  auto* gc = app.add_subcommand("gpecount", "Compare the GPE count with its density prediction");
  gc->add_option("--stack", a.stack)->required();
  gc->add_option("--ensemble", a.ensemble)->required();
  gc->add_option("--level", a.level)->required();

  auto* gk = app.add_subcommand("gpecheck", "Check GPE1-GPE3 for a stack");
  gk->add_option("--stack", a.stack)->required();
  gk->add_option("--ensemble", a.ensemble)->required();
  gk->add_option("--level", a.level);
  gk->add_option("--thc-mode", a.thc_mode)->check(CLI::IsMember({"full", "hypothesis", "assumed"}));
  gk->add_flag("--entries", a.entries, "List every GPE2 check");

  auto* em = app.add_subcommand("embed", "Greedy vertex-by-vertex embedding avoiding bad sets");
  em->add_option("--stack", a.stack)->required();
  em->add_option("--ensemble", a.ensemble)->required();
  em->add_option("--order", a.order);
  em->add_option("--seed", a.seed);
  em->add_flag("--exhaustive", a.exhaustive);
  em->add_option("--thc-mode", a.thc_mode)->check(CLI::IsMember({"full", "hypothesis", "assumed"}));

  auto* thc = app.add_subcommand("thc", "Typical homomorphism count checks");
  thc->require_subcommand(1);
  auto* full = thc->add_subcommand("full", "Full recursive THC check of a small graph");
  full->add_option("--gamma", a.gamma)->required();
  full->add_option("--density", a.density)->required();
  full->add_option("--eta", a.eta)->required();
  full->add_option("--cstar", a.cstar)->required();
  full->add_option("--order", a.order);
  auto* rnd = thc->add_subcommand("random", "THC experiment on G^(k)(n, p)");
  rnd->add_option("--k", a.k);
  rnd->add_option("--n", a.n)->required();
  rnd->add_option("--p", a.p)->required();
  rnd->add_option("--pattern", a.pattern)->required();
  rnd->add_option("--trials", a.trials);
  rnd->add_option("--seed", a.seed);
  rnd->add_option("--eta", a.eta_f);
  rnd->add_option("--cstar", a.cstar)->required();
  rnd->add_option("--family", a.family)->check(CLI::IsMember({"octahedra", "exhaustive"}));

  auto* rg = app.add_subcommand("random", "Sample G^(k)(n, p)");
  rg->add_option("--k", a.k);
  rg->add_option("--n", a.n)->required();
  rg->add_option("--p", a.p)->required();
  rg->add_option("--seed", a.seed);
  rg->add_option("--parts", a.parts, "Emit the partite graph on these part indices");

  auto* ens = app.add_subcommand("ensemble", "Build or check a valid ensemble");
  ens->add_option("--check", a.ensemble, "Ensemble JSON to check");
  ens->add_option("--k", a.k);
  ens->add_option("--Delta", a.delta_cap);
  ens->add_option("--cstar", a.cstar);
  ens->add_option("--hstar", a.hstar);
  ens->add_option("--delta", a.delta);
  ens->add_option("--eta-k", a.eta_k);

  auto* run = app.add_subcommand("run", "Run an experiment config and write result + manifest");
  run->add_option("config", a.config)->required();
  run->add_option("--out", a.out_dir);

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();
  thc->fallthrough();
  full->fallthrough();
  rnd->fallthrough();

  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, std::cerr, std::cerr);
    return code == 0 ? 0 : 2;
  }
  if (common.threads > 0) set_thread_count(common.threads);

  bool fl = common.use_float;
  auto pick = [&](auto exact_fn, auto float_fn) { result = fl ? float_fn(a) : exact_fn(a); };
  if (*count) pick(cmd_count<Rational>, cmd_count<double>);
  else if (*reg) pick(cmd_regcheck<Rational>, cmd_regcheck<double>);
  else if (*mini) pick(cmd_minimality<Rational>, cmd_minimality<double>);
  else if (*inh) pick(cmd_inherit<Rational>, cmd_inherit<double>);
  else if (*gc) pick(cmd_gpecount<Rational>, cmd_gpecount<double>);
  else if (*gk) pick(cmd_gpecheck<Rational>, cmd_gpecheck<double>);
  else if (*em) pick(cmd_embed<Rational>, cmd_embed<double>);
  else if (*full) pick(cmd_thc_full<Rational>, cmd_thc_full<double>);
  else if (*rnd) result = cmd_thc_random(a);
  else if (*rg) result = cmd_random(a);
  else if (*ens) result = cmd_ensemble(a);
  else if (*run) result = cmd_run(a, common);
  if (!result.is_object()) return 0;
  result["numeric"] = fl ? "float" : "exact";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  json result;
  Common common;
  try {
    int code = dispatch(args, result, common);
    if (code != 0 || result.is_null()) return code;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (common.format == "csv") std::cout << json_to_csv(result);
  else std::cout << result.dump(2) << "\n";
  return 0;
}
