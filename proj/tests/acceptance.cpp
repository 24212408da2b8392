// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "urm/urm.hpp"

using namespace urm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Verdict()>& run) {
  auto t0 = Clock::now();
  Verdict v;
  try {
    v = run();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("uncaught: ") + e.what();
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, " [%.1f s]", seconds_since(t0));
  std::cout << (v.pass ? "PASS" : "FAIL") << "  " << id << ". " << title << ": " << v.detail << buf << std::endl;
  if (!v.pass) ++failures;
}

std::string pct(std::size_t a, std::size_t b) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", b ? 100.0 * static_cast<double>(a) / static_cast<double>(b) : 0.0);
  return buf;
}

// Definitional UR test: G[V(M)] has exactly one perfect matching.
std::size_t count_perfect(const Graph& g, std::vector<char>& alive, std::size_t left, std::size_t cap) {
  if (left == 0) return 1;
  Vertex x = 0;
  while (!alive[x]) ++x;
  alive[x] = 0;
  std::size_t total = 0;
  for (Vertex y : g.neighbors(x)) {
    if (!alive[y]) continue;
    alive[y] = 0;
    total += count_perfect(g, alive, left - 2, cap - total);
    alive[y] = 1;
    if (total >= cap) break;
  }
  alive[x] = 1;
  return total;
}

bool ur_by_definition(const Graph& g, const Matching& m) {
  std::vector<char> alive(g.vertex_count(), 0);
  for (Vertex v : m.covered()) alive[v] = 1;
  return count_perfect(g, alive, 2 * m.size(), 2) == 1;
}

void all_matchings(const Graph& g, std::size_t i, std::vector<char>& used, std::vector<Edge>& cur,
                   const std::function<void(const std::vector<Edge>&)>& visit) {
  if (i == g.edge_count()) {
    visit(cur);
    return;
  }
  all_matchings(g, i + 1, used, cur, visit);
  const Edge e = g.edges()[i];
  if (used[e.u] || used[e.v]) return;
  used[e.u] = used[e.v] = 1;
  cur.push_back(e);
  all_matchings(g, i + 1, used, cur, visit);
  cur.pop_back();
  used[e.u] = used[e.v] = 0;
}

// Size floor; the regular fallback is relaxed by one only when ν_ur = ν.
std::size_t floor_for(const Graph& g, const ApproxResult& r, std::size_t exact, bool& relaxed) {
  relaxed = false;
  std::size_t base = exact;
  if (r.regular_fallback && exact > 0 && maximum_matching_bipartite(g, require_bipartition(g)).size() == exact) {
    base = exact - 1;
    relaxed = true;
  }
  return static_cast<std::size_t>(r.guarantee.ceil_times(static_cast<std::int64_t>(base)));
}

struct RatioTally {
  std::size_t instances = 0, below = 0, not_ur = 0, flagged = 0, relaxed = 0, soundness = 0, errors = 0;
  std::size_t invariant_checks = 0;
  double min_ratio = 1e9;
  std::string first_problem;

  void note(const std::string& s) {
    if (first_problem.empty()) first_problem = s;
  }
};

template <class Approx>
void ratio_check(const Graph& g, Approx&& approx, RatioTally& t) {
  ++t.instances;
  try {
    ApproxResult r = approx(g);
    t.invariant_checks += r.invariant_checks;
    auto parts = require_bipartition(g);
    if (!is_matching(g, r.matching) || !is_ur_bipartite(g, parts, r.matching)) {
      ++t.not_ur;
      t.note("not UR on " + write_graph(g));
      return;
    }
    std::size_t exact = nu_ur_exact(g).value;
    bool relaxed = false;
    std::size_t need = floor_for(g, r, exact, relaxed);
    if (r.regular_fallback) ++t.flagged;
    if (relaxed) ++t.relaxed;
    if (exact > 0) t.min_ratio = std::min(t.min_ratio, static_cast<double>(r.matching.size()) / static_cast<double>(exact));
    if (r.matching.size() < need) {
      ++t.below;
      t.note("size " + std::to_string(r.matching.size()) + " < " + std::to_string(need) + " on " + write_graph(g));
    }
  } catch (const soundness_error& e) {
    ++t.soundness;
    t.note(e.what());
  } catch (const std::exception& e) {
    ++t.errors;
    t.note(e.what());
  }
}

Graph connected_or_empty(const std::function<Graph(std::uint64_t)>& make, std::uint64_t seed) {
  auto safe = [&](std::uint64_t s) {
    try {
      return make(s);
    } catch (const precondition_error&) {
      return Graph(2, {});
    }
  };
  return first_connected(safe, seed);
}

RatioTally subcubic_tally, c4free_tally[6];

Verdict criterion1() {
  std::size_t graphs = 0, bad = 0;
  auto t0 = Clock::now();
  std::string first;
  for (std::size_t n = 1; n <= 8; ++n) {
    for (const auto& g : enumerate_connected_graphs(n)) {
      ++graphs;
      std::size_t s = nu_s_exact(g).value, u = nu_ur_exact(g).value, m = nu_exact(g);
      if (!(s <= u && u <= m)) {
        ++bad;
        if (first.empty()) first = write_graph(g);
      }
    }
  }
  double secs = seconds_since(t0);
  Verdict v;
  v.pass = bad == 0 && graphs > 0 && secs < 300;
  v.detail = std::to_string(graphs) + " connected graphs n<=8, " + std::to_string(bad) + " violations of nu_s <= nu_ur <= nu";
  if (!first.empty()) v.detail += "; first: " + first;
  return v;
}

Verdict criterion2() {
  std::size_t graphs = 0, matchings = 0, disagree = 0;
  for (std::size_t n = 1; n <= 8; ++n) {
    EnumerationOptions opt;
    opt.bipartite_only = true;
    for (const auto& g : enumerate_graphs(n, opt)) {
      ++graphs;
      auto parts = require_bipartition(g);
      std::vector<char> used(n, 0);
      std::vector<Edge> cur;
      all_matchings(g, 0, used, cur, [&](const std::vector<Edge>& es) {
        ++matchings;
        Matching m(es);
        bool a = static_cast<bool>(is_ur_bipartite(g, parts, m));
        bool b = static_cast<bool>(is_ur_general(g, m));
        bool c = ur_by_definition(g, m);
        if (a != b || b != c) ++disagree;
      });
    }
  }
  Verdict v;
  v.pass = disagree == 0 && matchings > 0;
  v.detail = std::to_string(graphs) + " bipartite graphs, " + std::to_string(matchings) + " matchings, " +
             std::to_string(disagree) + " disagreements";
  return v;
}

std::string tally_text(const RatioTally& t) {
  std::ostringstream s;
  s.precision(4);
  s << t.instances << " instances, " << t.below << " below bound, " << t.not_ur << " not UR, " << t.soundness
    << " soundness errors, " << t.errors << " other errors; min ratio " << (t.min_ratio > 1e8 ? 1.0 : t.min_ratio)
    << "; fallback flagged " << t.flagged << " (" << pct(t.flagged, t.instances) << "), relaxed bound used " << t.relaxed;
  if (!t.first_problem.empty()) s << "; first problem: " << t.first_problem;
  return s.str();
}

Verdict criterion3() {
  auto t0 = Clock::now();
  SubcubicOptions opt;
  opt.assert_invariants = true;
  auto run = [&](const Graph& g) { return approximate_subcubic(g, opt); };
  std::size_t exhaustive = 0;
  for (std::size_t n = 6; n <= 10; ++n) {
    EnumerationOptions e;
    e.max_degree = 3;
    e.bipartite_only = true;
    for (const auto& g : enumerate_connected_graphs(n, e)) {
      ratio_check(g, run, subcubic_tally);
      ++exhaustive;
    }
  }
  for (std::uint64_t i = 0; subcubic_tally.instances < 800; ++i) {
    std::size_t n = 11 + i % 4;
    Graph g = connected_or_empty([&](std::uint64_t s) { return random_subcubic_bipartite(n, s); }, instance_seed(31, i));
    ratio_check(g, run, subcubic_tally);
  }
  const auto& t = subcubic_tally;
  Verdict v;
  v.pass = t.instances >= 500 && t.below == 0 && t.not_ur == 0 && t.soundness == 0 && t.errors == 0 &&
           seconds_since(t0) < 600;
  v.detail = tally_text(t) + " (" + std::to_string(exhaustive) + " exhaustive n=6..10)";
  return v;
}

Verdict criterion4() {
  auto t0 = Clock::now();
  std::string detail;
  bool pass = true;
  for (std::size_t delta : {3u, 4u, 5u}) {
    auto& t = c4free_tally[delta];
    C4FreeOptions opt;
    opt.assert_invariants = true;
    auto run = [&](const Graph& g) { return approximate_c4free(g, opt); };
    for (std::size_t n = 6; n <= 10; ++n) {
      EnumerationOptions e;
      e.max_degree = delta;
      e.bipartite_only = true;
      e.c4_free_only = true;
      for (const auto& g : enumerate_connected_graphs(n, e)) {
        if (g.max_degree() == delta) ratio_check(g, run, t);
      }
    }
    for (std::uint64_t i = 0; t.instances < 500; ++i) {
      std::size_t n = 11 + i % 4;
      Graph g = connected_or_empty([&](std::uint64_t s) { return random_c4free_bipartite(n, delta, s, n - 1 + s % (delta + 1)); },
                                   instance_seed(400 + delta, i));
      ratio_check(g, run, t);
    }
    pass = pass && t.below == 0 && t.not_ur == 0 && t.soundness == 0 && t.errors == 0;
    auto a = c4free_ratio(delta);
    detail += "Δ=" + std::to_string(delta) + " (α=" + std::to_string(a.num) + "/" + std::to_string(a.den) + "): " +
              tally_text(t) + ". ";
  }
  pass = pass && seconds_since(t0) < 600;
  return {pass, detail};
}

Verdict criterion5() {
  std::size_t checks = subcubic_tally.invariant_checks, violations = subcubic_tally.soundness, runs = subcubic_tally.instances;
  for (std::size_t d : {3u, 4u, 5u}) {
    checks += c4free_tally[d].invariant_checks;
    violations += c4free_tally[d].soundness;
    runs += c4free_tally[d].instances;
  }
  Verdict v;
  v.pass = violations == 0 && checks > 0 && runs > 0;
  v.detail = std::to_string(checks) + " invariant checks over " + std::to_string(runs) + " runs with assertions on, " +
             std::to_string(violations) + " violations";
  return v;
}

std::vector<Graph> coloring_corpus() {
  std::vector<Graph> out;
  for (std::size_t n = 2; n <= 7; ++n) {
    EnumerationOptions e;
    e.max_degree = 5;
    for (auto& g : enumerate_connected_graphs(n, e)) out.push_back(std::move(g));
  }
  for (std::uint64_t i = 0; i < 300; ++i) {
    std::size_t n = 8 + i % 23, d = 2 + i % 4;
    out.push_back(random_bounded_degree(n, d, instance_seed(61, i), 0.3 + 0.1 * static_cast<double>(i % 8)));
    out.push_back(random_bipartite(n / 2 + 1, n - n / 2, d, instance_seed(62, i), 0.3 + 0.1 * static_cast<double>(i % 8)));
  }
  return out;
}

Verdict criterion6(const std::vector<Graph>& corpus) {
  std::size_t bad = 0, runs = 0;
  for (const auto& g : corpus) {
    for (int pass = 0; pass < 2; ++pass) {
      auto c = pass == 0 ? greedy_coloring(g) : greedy_coloring(g, random_order(g.vertex_count(), runs));
      ++runs;
      const std::size_t d = g.max_degree();
      if (c.color_count() > d * d || !check_ur_coloring(g, c)) ++bad;
    }
  }
  std::string eq;
  bool eq_ok = true;
  for (std::size_t d : {2u, 3u}) {
    Graph k = complete_bipartite(d, d);
    std::size_t greedy = greedy_coloring(k).color_count(), exact = chi_ur_exact(k).value;
    eq_ok = eq_ok && greedy == d * d && exact == d * d;
    eq += " K" + std::to_string(d) + std::to_string(d) + ": greedy " + std::to_string(greedy) + ", chi_ur " +
          std::to_string(exact) + ";";
  }
  Verdict v;
  v.pass = bad == 0 && eq_ok;
  v.detail = std::to_string(runs) + " greedy runs on " + std::to_string(corpus.size()) + " graphs (Δ<=5), " +
             std::to_string(bad) + " over Δ² or not UR;" + eq;
  return v;
}

Verdict criterion7(const std::vector<Graph>& corpus) {
  std::size_t runs = 0, bad = 0, errors = 0;
  std::string first;
  for (const auto& g : corpus) {
    if (!is_connected(g) || g.edge_count() == 0 || detail::is_complete_bipartite_regular(g)) continue;
    ++runs;
    try {
      const std::size_t d = g.max_degree();
      auto c = improve_coloring(g, greedy_coloring(g));
      if (c.color_count() + 1 > d * d || !check_ur_coloring(g, c)) ++bad;
    } catch (const std::exception& e) {
      ++errors;
      if (first.empty()) first = std::string(e.what()) + " on " + write_graph(g);
    }
  }
  bool named = false;
  try {
    improve_coloring(complete_bipartite(2, 2), greedy_coloring(complete_bipartite(2, 2)));
  } catch (const improvement_blocked& e) {
    named = std::string(e.what()).find("no manipulation applies") != std::string::npos;
  }
  Verdict v;
  v.pass = runs > 0 && bad == 0 && errors == 0 && named;
  v.detail = std::to_string(runs) + " connected non-K_{Δ,Δ} graphs, " + std::to_string(bad) + " above Δ²-1, " +
             std::to_string(errors) + " errors; K22 raises named error: " + (named ? "yes" : "no");
  if (!first.empty()) v.detail += "; first: " + first;
  return v;
}

Verdict criterion8() {
  const std::string dir = URM_FIXTURES;
  auto f = read_graph_file(dir + "/fig1.txt");
  auto c = parse_coloring(read_text_file(dir + "/fig1_coloring.txt"), f);
  std::size_t good = 0;
  auto classes = c.classes();
  for (const auto& cls : classes) {
    if (is_matching(f.graph, cls) && is_ur(f.graph, Matching(cls))) ++good;
  }
  bool coloring_ok = classes.size() == 6 && good == 6 && static_cast<bool>(check_ur_coloring(f.graph, c));
  Matching failing(parse_edge_list(read_text_file(dir + "/fig1_identity.txt"), f));
  Matching other(parse_edge_list(read_text_file(dir + "/fig1_diagonal.txt"), f));
  std::size_t p_fail = min_ur_partition_of_matching(f.graph, failing).value;
  std::size_t p_other = min_ur_partition_of_matching(f.graph, other).value;
  std::vector<Edge> joining;
  Graph twins = twin_cliques(3, &joining);
  std::size_t p_twins = min_ur_partition_of_matching(twins, Matching(joining)).value;
  Verdict v;
  v.pass = coloring_ok && p_fail == 3 && p_twins == 3;
  v.detail = "shipped coloring: " + std::to_string(good) + "/6 classes UR; min partition of {a_i b_i} = " +
             std::to_string(p_fail) + " (> Δ-1 = 2); of {a1b3,a2b1,a3b5,a4b2,a5b4} = " + std::to_string(p_other) +
             "; two K3 plus perfect matching = " + std::to_string(p_twins);
  return v;
}

Verdict criterion9() {
  std::size_t runs = 0, bad = 0;
  std::map<std::string, std::size_t> cases;
  std::size_t max_colors = 0;
  auto check = [&](const Graph& g) {
    auto r = color_delta2_minus_delta_layered(g);
    ++runs;
    for (const auto& [k, n] : r.case_counts) cases[k] += n;
    max_colors = std::max(max_colors, r.coloring.color_count());
    bool ok = r.coloring.color_count() <= 12 && static_cast<bool>(check_ur_coloring(g, r.coloring));
    ok = ok && r.skeleton.color_count() == 4;
    for (const auto& cls : r.skeleton.classes()) ok = ok && is_matching(g, cls);
    std::vector<std::size_t> home(r.coloring.max_color() + 1, 0);
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
      auto& h = home[r.coloring.color[i]];
      if (h == 0) h = r.skeleton.color[i];
      ok = ok && h == r.skeleton.color[i];
    }
    if (!ok) ++bad;
  };
  for (std::uint64_t i = 0; runs < 150; ++i) {
    std::size_t n = 8 + i % 30;
    Graph g = random_bipartite(n / 2, n - n / 2, 4, instance_seed(91, i), 0.4 + 0.1 * static_cast<double>(i % 7));
    if (!is_connected(g) || g.max_degree() != 4 || detail::is_complete_bipartite_regular(g)) continue;
    check(g);
  }
  // 4-regular circulants exercise the regular cases
  for (std::size_t k = 5; k <= 20; ++k) {
    std::vector<Edge> es;
    for (Vertex i = 0; i < k; ++i) {
      for (Vertex off = 0; off < 4; ++off) es.push_back({i, static_cast<Vertex>(k + (i + off) % k)});
    }
    check(Graph(2 * k, es));
  }
  Verdict v;
  v.pass = runs >= 100 && bad == 0 && max_colors <= 12;
  v.detail = std::to_string(runs) + " connected bipartite Δ=4 graphs, max " + std::to_string(max_colors) + " classes, " +
             std::to_string(bad) + " failures; partition cases:";
  for (const auto& [k, n] : cases) v.detail += " " + k + "=" + std::to_string(n);
  return v;
}

Verdict criterion10() {
  Graph g = random_connected_subcubic_bipartite(10000, 2024);
  auto t0 = Clock::now();
  ApproxResult r = approximate_subcubic(g);
  double secs = seconds_since(t0);
  bool ur = is_matching(g, r.matching) && static_cast<bool>(is_ur_bipartite(g, require_bipartition(g), r.matching));
  char buf[160];
  std::snprintf(buf, sizeof buf, "n=%zu m=%zu connected=%s, |M|=%zu, UR=%s, %.2f s (limit 60 s)", g.vertex_count(),
                g.edge_count(), is_connected(g) ? "yes" : "no", r.matching.size(), ur ? "yes" : "no", secs);
  return {ur && is_connected(g) && secs < 60.0, buf};
}

} // namespace

int main() {
  report(1, "definitional chain nu_s <= nu_ur <= nu", criterion1);
  report(2, "verifier equivalence", criterion2);
  report(3, "subcubic 5/9 ratio", criterion3);
  report(4, "C4-free alpha(Δ) ratio", criterion4);
  report(5, "internal invariants", criterion5);
  auto corpus = coloring_corpus();
  report(6, "greedy Δ² coloring", [&] { return criterion6(corpus); });
  report(7, "improvement to Δ²-1", [&] { return criterion7(corpus); });
  report(8, "fig1 fixtures and Δ=3 counterexamples", criterion8);
  report(9, "Δ²-Δ coloring at Δ=4", criterion9);
  report(10, "performance n=10000", criterion10);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
