// urm: command-line front end for the uniquely restricted matching library.
//
// Exit codes: 0 success, 1 precondition error, 2 I/O / parse / usage error,
// 3 internal soundness failure or a benchmark record below its bound.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "urm/approx_c4free.hpp"
#include "urm/approx_subcubic.hpp"
#include "urm/bench.hpp"
#include "urm/coloring.hpp"
#include "urm/generators.hpp"
#include "urm/io.hpp"
#include "urm/matching.hpp"
#include "urm/oracle.hpp"

namespace {

using json = nlohmann::json;
using namespace urm;

constexpr int exit_ok = 0, exit_precondition = 1, exit_io = 2, exit_internal = 3;

struct Common {
  std::string graph_path;
  std::string matching_path;
  std::string out_path;
  bool as_json = false;
};

class Output {
public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw io_error("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
  std::ofstream file_;
};

std::string name_of(const GraphFile& f, Vertex v) { return f.names.empty() ? std::to_string(v) : f.names[v]; }

std::string edge_text(const GraphFile& f, const Edge& e) { return name_of(f, e.u) + " " + name_of(f, e.v); }

json edges_json(const GraphFile& f, const std::vector<Edge>& es) {
  json a = json::array();
  for (const auto& e : es) a.push_back({name_of(f, e.u), name_of(f, e.v)});
  return a;
}

Matching load_matching(const GraphFile& f, const std::string& path) {
  if (path.empty()) throw precondition_error("a matching file (-m) is required");
  Matching m(parse_edge_list(read_text_file(path), f));
  require_matching(f.graph, m);
  return m;
}

TraceSink stderr_trace(bool on) {
  if (!on) return {};
  return [](const std::string& s) { std::cerr << s << '\n'; };
}

// ---- verify ---------------------------------------------------------------

int cmd_verify(const Common& c) {
  auto f = read_graph_file(c.graph_path);
  Matching m = load_matching(f, c.matching_path);
  UrCheck r = is_ur(f.graph, m);
  Output out(c.out_path);
  if (c.as_json) {
    json j{{"matching_size", m.size()}, {"uniquely_restricted", r.uniquely_restricted}};
    if (!r) {
      json w = json::array();
      for (Vertex v : r.witness) w.push_back(name_of(f, v));
      j["witness"] = w;
    }
    out.os() << j.dump() << '\n';
    return exit_ok;
  }
  if (r) {
    out.os() << "uniquely restricted\n";
  } else {
    out.os() << "not uniquely restricted\nwitness:";
    for (Vertex v : r.witness) out.os() << ' ' << name_of(f, v);
    out.os() << '\n';
  }
  return exit_ok;
}

// ---- exact ----------------------------------------------------------------

int cmd_exact(const Common& c, const std::string& kind) {
  auto f = read_graph_file(c.graph_path);
  const Graph& g = f.graph;
  OracleBudget budget = OracleBudget::from_env();
  Output out(c.out_path);
  json j{{"quantity", kind}};
  std::ostringstream text;
  if (kind == "nu") {
    std::size_t v = nu_exact(g, budget);
    j["value"] = v;
    text << "value: " << v << '\n';
  } else if (kind == "nu-ur" || kind == "nu-s") {
    OracleMatching r = kind == "nu-ur" ? nu_ur_exact(g, budget) : nu_s_exact(g, budget);
    j["value"] = r.value;
    j["witness"] = edges_json(f, r.witness.edges());
    text << "value: " << r.value << '\n';
    for (const auto& e : r.witness.edges()) text << edge_text(f, e) << '\n';
  } else if (kind == "chi-ur") {
    OracleColoring r = chi_ur_exact(g, budget);
    j["value"] = r.value;
    json cls = json::array();
    text << "value: " << r.value << '\n';
    for (std::size_t i = 0; i < r.edges.size(); ++i) {
      cls.push_back({name_of(f, r.edges[i].u), name_of(f, r.edges[i].v), r.color[i] + 1});
      text << edge_text(f, r.edges[i]) << ' ' << r.color[i] + 1 << '\n';
    }
    j["coloring"] = cls;
  } else {  // min-partition
    Matching m = load_matching(f, c.matching_path);
    OraclePartition r = min_ur_partition_of_matching(g, m, budget);
    j["value"] = r.value;
    json parts = json::array();
    text << "value: " << r.value << '\n';
    for (std::size_t i = 0; i < r.parts.size(); ++i) {
      parts.push_back(edges_json(f, r.parts[i].edges()));
      for (const auto& e : r.parts[i].edges()) text << edge_text(f, e) << ' ' << i + 1 << '\n';
    }
    j["parts"] = parts;
  }
  out.os() << (c.as_json ? j.dump() + "\n" : text.str());
  return exit_ok;
}

// ---- approx ---------------------------------------------------------------

struct ApproxFlags {
  bool trace = false;
  bool assert_invariants = false;
  bool oracle = true;
  std::optional<std::size_t> delta;
};

int cmd_approx(const Common& c, const std::string& kind, const ApproxFlags& fl) {
  auto f = read_graph_file(c.graph_path);
  const Graph& g = f.graph;
  ApproxResult r;
  if (kind == "c4free") {
    C4FreeOptions opt;
    opt.delta = fl.delta;
    opt.assert_invariants = fl.assert_invariants;
    opt.trace = stderr_trace(fl.trace);
    r = approximate_c4free(g, opt);
  } else {
    SubcubicOptions opt;
    opt.assert_invariants = fl.assert_invariants;
    opt.trace = stderr_trace(fl.trace);
    r = approximate_subcubic(g, opt);
  }
  std::optional<std::size_t> exact;
  if (fl.oracle) {
    try {
      exact = nu_ur_exact(g, OracleBudget::from_env()).value;
    } catch (const budget_exceeded&) {
    }
  }
  Output out(c.out_path);
  const std::string guarantee = std::to_string(r.guarantee.num) + "/" + std::to_string(r.guarantee.den);
  if (c.as_json) {
    json j{{"algorithm", kind},
           {"size", r.matching.size()},
           {"matching", edges_json(f, r.matching.edges())},
           {"guarantee", guarantee},
           {"delta", r.delta},
           {"regular_fallback", r.regular_fallback},
           {"steps", r.steps},
           {"invariant_checks", r.invariant_checks},
           {"stats", r.case_counts}};
    if (exact) {
      j["oracle"] = *exact;
      j["ratio"] = *exact == 0 ? 1.0 : static_cast<double>(r.matching.size()) / static_cast<double>(*exact);
    }
    out.os() << j.dump() << '\n';
    return exit_ok;
  }
  for (const auto& e : r.matching.edges()) out.os() << edge_text(f, e) << '\n';
  out.os() << "size: " << r.matching.size() << '\n';
  out.os() << "guarantee: " << guarantee << '\n';
  if (exact) {
    out.os() << "oracle: " << *exact << '\n';
    std::ostringstream ratio;
    ratio.precision(4);
    ratio << (*exact == 0 ? 1.0 : static_cast<double>(r.matching.size()) / static_cast<double>(*exact));
    out.os() << "ratio: " << ratio.str() << '\n';
  }
  if (r.regular_fallback) out.os() << "regular fallback: yes\n";
  if (fl.assert_invariants) out.os() << "invariant checks: " << r.invariant_checks << '\n';
  return exit_ok;
}

// ---- color ----------------------------------------------------------------

struct ColorFlags {
  std::string order = "id";
  std::uint64_t seed = 0;
  std::string from;
  bool strict = false;
  bool trace = false;
};

int cmd_color(const Common& c, const std::string& kind, const ColorFlags& fl) {
  auto f = read_graph_file(c.graph_path);
  const Graph& g = f.graph;
  Output out(c.out_path);
  if (kind == "partition") {
    Matching m = load_matching(f, c.matching_path);
    MatchingPartition p = partition_matching_ur(g, m, stderr_trace(fl.trace));
    EdgeColoring col;
    for (std::size_t i = 0; i < p.parts.size(); ++i) {
      for (const auto& e : p.parts[i].edges()) {
        col.edges.push_back(e);
        col.color.push_back(i + 1);
      }
    }
    if (c.as_json) {
      json parts = json::array();
      for (const auto& part : p.parts) parts.push_back(edges_json(f, part.edges()));
      out.os() << json{{"parts", parts}, {"count", p.parts.size()}, {"cases", p.case_counts}}.dump() << '\n';
    } else {
      out.os() << write_coloring(col, f.names);
    }
    return exit_ok;
  }
  auto order = fl.order == "random" ? random_order(g.vertex_count(), fl.seed) : identity_order(g.vertex_count());
  EdgeColoring col;
  if (kind == "greedy") {
    col = greedy_coloring(g, order);
  } else if (kind == "improve") {
    EdgeColoring start = fl.from.empty() ? greedy_coloring(g, order) : parse_coloring(read_text_file(fl.from), f);
    ImproveOptions opt;
    opt.opportunistic = !fl.strict;
    opt.trace = stderr_trace(fl.trace);
    col = improve_coloring(g, start, opt);
  } else {
    col = color_delta2_minus_delta(g);
  }
  auto check = check_ur_coloring(g, col);
  if (!check) throw soundness_error("color " + kind + ": " + check.reason);
  if (c.as_json) {
    json cls = json::array();
    for (std::size_t i = 0; i < col.edges.size(); ++i) {
      cls.push_back({name_of(f, col.edges[i].u), name_of(f, col.edges[i].v), col.color[i]});
    }
    out.os() << json{{"algorithm", kind}, {"colors", col.color_count()}, {"delta", g.max_degree()}, {"coloring", cls}}.dump()
             << '\n';
  } else {
    out.os() << write_coloring(col, f.names);
  }
  return exit_ok;
}

// ---- gen ------------------------------------------------------------------

struct GenFlags {
  std::size_t n = 10;
  std::size_t delta = 3;
  std::uint64_t seed = 1;
  double density = 1.0;
  bool connected = false;
};

int cmd_gen(const Common& c, const std::string& kind, const GenFlags& fl) {
  auto make = [&](std::uint64_t s) -> Graph {
    if (kind == "subcubic") return random_subcubic_bipartite(fl.n, s);
    if (kind == "c4free") return random_c4free_bipartite(fl.n, fl.delta, s);
    if (kind == "bipartite") return random_bipartite((fl.n + 1) / 2, fl.n / 2, fl.delta, s, fl.density);
    return random_bounded_degree(fl.n, fl.delta, s, fl.density);
  };
  Graph g;
  if (kind == "fig1") {
    g = fig1_graph();
  } else if (kind == "fano") {
    g = fano_incidence();
  } else if (kind == "complete-bipartite") {
    g = complete_bipartite(fl.delta, fl.delta);
  } else if (kind == "cycle") {
    g = cycle_graph(fl.n);
  } else if (kind == "path") {
    g = path_graph(fl.n);
  } else if (kind == "twin-cliques") {
    g = twin_cliques(fl.delta);
  } else {
    g = fl.connected ? first_connected(make, fl.seed) : make(fl.seed);
  }
  if (c.out_path.empty()) {
    std::cout << write_graph(g);
  } else {
    write_text_file(c.out_path, write_graph(g));
  }
  return exit_ok;
}

// ---- bench ----------------------------------------------------------------

int cmd_bench(const Common& c, const bench::FamilySpec& fam, const std::vector<std::string>& algos, bool oracle) {
  bench::RunOptions opt;
  opt.algorithms = algos;
  opt.use_oracle = oracle;
  opt.budget = OracleBudget::from_env();
  Output out(c.out_path);
  auto sum = bench::run(fam, opt, [&](const json& j) { out.os() << j.dump() << '\n' << std::flush; });
  return sum.passed() ? exit_ok : exit_internal;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniquely restricted matchings: verification, exact oracles, approximation and colorings"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub, bool needs_graph) {
    auto* opt = sub->add_option("-g,--graph", common.graph_path, "graph edge-list file");
    if (needs_graph) opt->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", common.out_path, "write output to this file instead of stdout");
    sub->add_flag("--json", common.as_json, "machine-readable output");
  };

  auto* verify = app.add_subcommand("verify", "test whether a matching is uniquely restricted");
  add_common(verify, true);
  verify->add_option("-m,--matching", common.matching_path, "matching edge-list file")->required();

  std::string exact_kind;
  auto* exact = app.add_subcommand("exact", "exponential-time exact values for small graphs");
  exact->add_option("quantity", exact_kind, "nu | nu-ur | nu-s | chi-ur | min-partition")
      ->required()
      ->check(CLI::IsMember({"nu", "nu-ur", "nu-s", "chi-ur", "min-partition"}));
  add_common(exact, true);
  exact->add_option("-m,--matching", common.matching_path, "matching file (min-partition)");

  std::string approx_kind;
  ApproxFlags approx_flags;
  auto* approx = app.add_subcommand("approx", "approximate a maximum uniquely restricted matching");
  approx->add_option("algorithm", approx_kind, "c4free | subcubic")->required()->check(CLI::IsMember({"c4free", "subcubic"}));
  add_common(approx, true);
  approx->add_flag("--trace", approx_flags.trace, "print one line per step to stderr");
  approx->add_flag("--assert-invariants", approx_flags.assert_invariants, "check the loop invariants after every step");
  approx->add_flag("!--no-oracle", approx_flags.oracle, "skip the exact comparison");
  approx->add_option("--delta", approx_flags.delta, "degree parameter for c4free");

  std::string color_kind;
  ColorFlags color_flags;
  auto* color = app.add_subcommand("color", "uniquely restricted edge colorings");
  color->add_option("algorithm", color_kind, "greedy | improve | partition | delta2md")
      ->required()
      ->check(CLI::IsMember({"greedy", "improve", "partition", "delta2md"}));
  add_common(color, true);
  color->add_option("-m,--matching", common.matching_path, "matching file (partition)");
  color->add_option("--order", color_flags.order, "greedy vertex order: id | random")->check(CLI::IsMember({"id", "random"}));
  color->add_option("--seed", color_flags.seed, "seed for --order random");
  color->add_option("--from", color_flags.from, "start improve from this coloring file")->check(CLI::ExistingFile);
  color->add_flag("--strict", color_flags.strict, "improve: stop once below Δ² colors");
  color->add_flag("--trace", color_flags.trace, "print manipulations / partition cases to stderr");

  std::string gen_kind;
  GenFlags gen_flags;
  auto* gen = app.add_subcommand("gen", "write a generated graph as an edge list");
  gen->add_option("model", gen_kind, "subcubic | c4free | bipartite | general | fig1 | fano | complete-bipartite | cycle | path | twin-cliques")
      ->required()
      ->check(CLI::IsMember({"subcubic", "c4free", "bipartite", "general", "fig1", "fano", "complete-bipartite", "cycle",
                             "path", "twin-cliques"}));
  gen->add_option("-n", gen_flags.n, "vertex count");
  gen->add_option("--delta", gen_flags.delta, "maximum degree (also K_{d,d} / clique size)");
  gen->add_option("--seed", gen_flags.seed, "random seed");
  gen->add_option("--density", gen_flags.density, "edge keep probability for bipartite / general");
  gen->add_flag("--connected", gen_flags.connected, "resample until connected");
  gen->add_option("-o,--out", common.out_path, "output file");

  bench::FamilySpec fam;
  std::vector<std::string> algos{"approx-subcubic"};
  bool bench_oracle = true;
  auto* bn = app.add_subcommand("bench", "run an algorithm set over a generated family, JSON lines out");
  bn->add_option("--family", fam.model, "subcubic | c4free | bipartite | general")
      ->check(CLI::IsMember(bench::known_models()));
  bn->add_option("--count", fam.count, "number of instances");
  bn->add_option("--n-min", fam.n_min, "smallest n");
  bn->add_option("--n-max", fam.n_max, "largest n");
  bn->add_option("--delta", fam.delta, "maximum degree for c4free / bipartite / general");
  bn->add_option("--density", fam.density, "edge keep probability for bipartite / general");
  bn->add_option("--seed", fam.seed, "master seed");
  bn->add_option("--algo", algos, "algorithms (comma separated)")->delimiter(',')->check(CLI::IsMember(bench::known_algorithms()));
  bn->add_flag("!--no-oracle", bench_oracle, "never call the exact oracles");
  bn->add_option("-o,--out", common.out_path, "append-free output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return exit_io;
  }

  try {
    if (*verify) return cmd_verify(common);
    if (*exact) return cmd_exact(common, exact_kind);
    if (*approx) return cmd_approx(common, approx_kind, approx_flags);
    if (*color) return cmd_color(common, color_kind, color_flags);
    if (*gen) return cmd_gen(common, gen_kind, gen_flags);
    if (*bn) return cmd_bench(common, fam, algos, bench_oracle);
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return exit_io;
  } catch (const io_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return exit_io;
  } catch (const improvement_blocked& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_precondition;
  } catch (const precondition_error& e) {
    std::cerr << "precondition error: " << e.what() << '\n';
    return exit_precondition;
  } catch (const budget_exceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return exit_precondition;
  } catch (const soundness_error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return exit_internal;
  } catch (const urm::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_internal;
  }
  std::cerr << app.help();
  return exit_io;
}
