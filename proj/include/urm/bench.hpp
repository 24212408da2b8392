#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "urm/approx_c4free.hpp"
#include "urm/approx_subcubic.hpp"
#include "urm/coloring.hpp"
#include "urm/generators.hpp"
#include "urm/oracle.hpp"

namespace urm::bench {

using json = nlohmann::json;

/// Generator model plus sizes. Instance i uses seed instance_seed(seed, i).
struct FamilySpec {
  std::string model = "subcubic";  // subcubic | c4free | bipartite | general
  std::size_t count = 0;
  std::size_t n_min = 6;
  std::size_t n_max = 14;
  std::size_t delta = 3;
  double density = 1.0;
  std::uint64_t seed = 1;
};

inline const std::vector<std::string>& known_models() {
  static const std::vector<std::string> m{"subcubic", "c4free", "bipartite", "general"};
  return m;
}

inline const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> a{"approx-subcubic", "approx-c4free", "greedy", "improve", "delta2md"};
  return a;
}

struct BenchRecord {
  std::string instance_id;
  std::size_t n = 0, m = 0, delta = 0;
  std::string algorithm;
  std::size_t output = 0;  // matching size or color count
  std::optional<std::size_t> oracle;
  std::optional<double> ratio;
  /// The proven bound the output is held to (a size floor or a color cap).
  std::optional<std::size_t> bound;
  bool bound_ok = true;
  bool regular_fallback = false;
  double elapsed_ms = 0;
  std::uint64_t seed = 0;
  std::optional<std::string> error;

  json to_json() const {
    json j{{"instance", instance_id}, {"n", n},   {"m", m},
           {"delta", delta},          {"algorithm", algorithm}};
    if (error) {
      j["error"] = *error;
    } else {
      j["output"] = output;
      if (oracle) j["oracle"] = *oracle;
      if (ratio) j["ratio"] = *ratio;
      if (bound) j["bound"] = *bound;
      j["bound_ok"] = bound_ok;
      if (regular_fallback) j["regular_fallback"] = true;
    }
    j["elapsed_ms"] = elapsed_ms;
    j["seed"] = seed;
    return j;
  }
};

inline Graph make_instance(const FamilySpec& f, std::uint64_t seed) {
  if (f.n_min > f.n_max) throw precondition_error("bench: n-min exceeds n-max");
  const std::size_t n = f.n_min + static_cast<std::size_t>(seed % (f.n_max - f.n_min + 1));
  auto connected = [&](auto make) { return first_connected(make, seed, 200); };
  if (f.model == "subcubic") {
    return connected([&](std::uint64_t s) { return random_subcubic_bipartite(n, s); });
  }
  if (f.model == "c4free") {
    return connected([&](std::uint64_t s) { return random_c4free_bipartite(n, f.delta, s); });
  }
  if (f.model == "bipartite") {
    return connected([&](std::uint64_t s) { return random_bipartite((n + 1) / 2, n / 2, f.delta, s, f.density); });
  }
  if (f.model == "general") {
    return connected([&](std::uint64_t s) { return random_bounded_degree(n, f.delta, s, f.density); });
  }
  throw precondition_error("bench: unknown family model '" + f.model + "'");
}

struct RunOptions {
  std::vector<std::string> algorithms;
  bool use_oracle = true;
  OracleBudget budget;
};

namespace detail {

inline std::optional<std::size_t> try_oracle(const std::function<std::size_t()>& f) {
  try {
    return f();
  } catch (const budget_exceeded&) {
    return std::nullopt;
  }
}

// Size floor for a matching algorithm with guarantee r. The regular-sweep
// fallback is only relaxed when ν_ur = ν.
inline std::size_t matching_floor(const Graph& g, const ApproxResult& res, std::size_t exact) {
  std::size_t base = exact;
  if (res.regular_fallback && exact > 0) {
    auto parts = bipartition(g);
    if (parts && maximum_matching_bipartite(g, *parts.parts).size() == exact) base = exact - 1;
  }
  return static_cast<std::size_t>(res.guarantee.ceil_times(static_cast<std::int64_t>(base)));
}

} // namespace detail

/// Runs one algorithm on one graph and fills a record. Errors from the
/// algorithm are captured in the record.
inline BenchRecord run_one(const Graph& g, const std::string& algorithm, const RunOptions& opt) {
  BenchRecord r;
  r.algorithm = algorithm;
  r.n = g.vertex_count();
  r.m = g.edge_count();
  r.delta = g.max_degree();
  const auto t0 = std::chrono::steady_clock::now();
  auto stop = [&] {
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  };
  try {
    if (algorithm == "approx-subcubic" || algorithm == "approx-c4free") {
      ApproxResult res = algorithm == "approx-subcubic" ? approximate_subcubic(g) : approximate_c4free(g);
      stop();
      r.output = res.matching.size();
      r.regular_fallback = res.regular_fallback;
      if (opt.use_oracle) {
        r.oracle = detail::try_oracle([&] { return nu_ur_exact(g, opt.budget).value; });
      }
      if (r.oracle) {
        r.ratio = *r.oracle == 0 ? 1.0 : static_cast<double>(r.output) / static_cast<double>(*r.oracle);
        r.bound = detail::matching_floor(g, res, *r.oracle);
        r.bound_ok = r.output >= *r.bound;
      }
    } else if (algorithm == "greedy" || algorithm == "improve" || algorithm == "delta2md") {
      EdgeColoring c;
      const std::size_t d = g.max_degree();
      if (algorithm == "greedy") {
        c = greedy_coloring(g);
        r.bound = d * d;
      } else if (algorithm == "improve") {
        c = improve_coloring(g, greedy_coloring(g));
        r.bound = d * d - 1;
      } else {
        c = color_delta2_minus_delta(g);
        r.bound = d * d - d;
      }
      stop();
      r.output = c.color_count();
      r.bound_ok = r.output <= *r.bound && static_cast<bool>(check_ur_coloring(g, c));
      if (opt.use_oracle) {
        r.oracle = detail::try_oracle([&] { return chi_ur_exact(g, opt.budget).value; });
      }
      if (r.oracle) r.ratio = *r.oracle == 0 ? 1.0 : static_cast<double>(r.output) / static_cast<double>(*r.oracle);
    } else {
      throw precondition_error("bench: unknown algorithm '" + algorithm + "'");
    }
  } catch (const error& e) {
    stop();
    r.error = e.what();
    // a soundness failure is a broken bound, not a skipped instance
    if (dynamic_cast<const soundness_error*>(&e)) r.bound_ok = false;
  }
  return r;
}

struct AlgorithmSummary {
  std::size_t records = 0, with_oracle = 0, bound_failures = 0, errors = 0, flagged = 0;
  double min_ratio = 0, max_ratio = 0, sum_ratio = 0;
  std::size_t max_output = 0;

  void add(const BenchRecord& r) {
    ++records;
    if (r.error) ++errors;
    if (!r.bound_ok) ++bound_failures;
    if (r.regular_fallback) ++flagged;
    if (!r.error) max_output = std::max(max_output, r.output);
    if (r.ratio) {
      if (with_oracle == 0) min_ratio = max_ratio = *r.ratio;
      min_ratio = std::min(min_ratio, *r.ratio);
      max_ratio = std::max(max_ratio, *r.ratio);
      sum_ratio += *r.ratio;
      ++with_oracle;
    }
  }
};

struct Summary {
  std::size_t instances = 0;
  std::size_t generator_errors = 0;
  std::map<std::string, AlgorithmSummary> per_algorithm;

  bool passed() const {
    for (const auto& [name, s] : per_algorithm) {
      if (s.bound_failures) return false;
    }
    return true;
  }

  json to_json() const {
    json algs = json::object();
    for (const auto& [name, s] : per_algorithm) {
      json a{{"records", s.records},       {"with_oracle", s.with_oracle}, {"bound_failures", s.bound_failures},
             {"errors", s.errors},         {"regular_fallback", s.flagged}, {"max_output", s.max_output}};
      if (s.with_oracle) {
        a["min_ratio"] = s.min_ratio;
        a["mean_ratio"] = s.sum_ratio / static_cast<double>(s.with_oracle);
        a["max_ratio"] = s.max_ratio;
      }
      algs[name] = a;
    }
    return json{{"summary", true},
                {"instances", instances},
                {"generator_errors", generator_errors},
                {"passed", passed()},
                {"algorithms", algs}};
  }
};

/// One record per (instance, algorithm) to `emit`, then the summary line.
/// Generator failures become records with an error and the run continues.
inline Summary run(const FamilySpec& family, const RunOptions& opt, const std::function<void(const json&)>& emit) {
  for (const auto& a : opt.algorithms) {
    if (std::find(known_algorithms().begin(), known_algorithms().end(), a) == known_algorithms().end()) {
      throw precondition_error("bench: unknown algorithm '" + a + "'");
    }
  }
  if (std::find(known_models().begin(), known_models().end(), family.model) == known_models().end()) {
    throw precondition_error("bench: unknown family model '" + family.model + "'");
  }
  Summary sum;
  for (std::size_t i = 0; i < family.count; ++i) {
    const std::uint64_t seed = instance_seed(family.seed, i);
    const std::string id = family.model + "-" + std::to_string(i);
    ++sum.instances;
    std::optional<Graph> g;
    try {
      g = make_instance(family, seed);
    } catch (const error& e) {
      ++sum.generator_errors;
      emit(json{{"instance", id}, {"seed", seed}, {"error", e.what()}});
      continue;
    }
    for (const auto& a : opt.algorithms) {
      BenchRecord r = run_one(*g, a, opt);
      r.instance_id = id;
      r.seed = seed;
      sum.per_algorithm[a].add(r);
      emit(r.to_json());
    }
  }
  emit(sum.to_json());
  return sum;
}

} // namespace urm::bench
