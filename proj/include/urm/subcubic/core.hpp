#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "urm/approx_common.hpp"
#include "urm/error.hpp"
#include "urm/graph.hpp"
#include "urm/matching.hpp"
#include "urm/oracle.hpp"
#include "urm/subcubic/catalogue.hpp"
#include "urm/subcubic/pattern.hpp"
#include "urm/subcubic/reductions.hpp"

namespace urm::subcubic {

enum class Label : std::uint8_t { none, top, dash, bot };

inline const char* label_name(Label l) {
  switch (l) {
    case Label::top: return "T";
    case Label::dash: return "D";
    case Label::bot: return "B";
    default: return "-";
  }
}

/// Contribution of one A vertex to 4(s - (d + f)) - f.
inline constexpr std::int64_t label_weight(Label l) noexcept {
  return l == Label::top ? 4 : l == Label::dash ? -4 : l == Label::bot ? -5 : 0;
}

struct SubcubicOptions {
  /// Check properties (a)-(h) and the potential bound after every step.
  bool assert_invariants = false;
  TraceSink trace;
  /// Components with at most this many vertices are solved exactly.
  /// Defaults to the largest catalogue template.
  std::optional<std::size_t> brute_force_threshold;
};

/// One extension: vertices entering U, edges (a, b) with a on side A, and
/// the new labels.
struct Step {
  std::vector<Vertex> region;
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::vector<std::pair<Vertex, Label>> labels;
  std::int64_t gain = 0;
  std::string pattern;
};

/// The triple (U, M, γ) with counters s, d, f.
class LabeledState {
public:
  LabeledState(const Graph& g, const Bipartition& parts)
      : g_(g), parts_(parts), in_u_(g.vertex_count(), 0), mate_(g.vertex_count(), no_vertex),
        label_(g.vertex_count(), Label::none), free_deg_(g.vertex_count(), 0),
        c4_of_(g.vertex_count()), mark_(g.vertex_count(), 0), dfs_seen_(g.vertex_count(), 0),
        dfs_state_(g.vertex_count(), 0) {
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      free_deg_[v] = static_cast<std::uint8_t>(g.degree(v));
      if (parts.in_b(v)) frontier_insert(v);
    }
    c4s_ = classify_c4s(g, parts);
    for (std::uint32_t i = 0; i < c4s_.size(); ++i) {
      const auto& c = c4s_[i];
      if (c.kind == C4Kind::twin) throw precondition_error("core: a 4-cycle with two degree-2 A vertices (twins)");
      for (Vertex x : {c.a[0], c.a[1], c.b[0], c.b[1]}) c4_of_[x].push_back(i);
      alive_set(c).insert({anchor(c), i});
    }
  }

  const Graph& graph() const noexcept { return g_; }
  const Bipartition& parts() const noexcept { return parts_; }
  bool in_u(Vertex v) const noexcept { return in_u_[v] != 0; }
  Vertex mate(Vertex v) const noexcept { return mate_[v]; }
  Label label(Vertex v) const noexcept { return label_[v]; }
  std::size_t free_degree(Vertex v) const noexcept { return free_deg_[v]; }
  bool done() const noexcept { return u_size_ == g_.vertex_count(); }
  std::int64_t s() const noexcept { return s_; }
  std::int64_t d() const noexcept { return d_; }
  std::int64_t f() const noexcept { return f_; }
  /// potential bound slack 4(s - (d + f)) - f.
  std::int64_t slack() const noexcept { return 4 * (s_ - (d_ + f_)) - f_; }
  const std::vector<C4Instance>& c4s() const noexcept { return c4s_; }

  std::optional<Vertex> frontier(std::size_t k) const {
    const auto& set = k == 1 ? frontier1_ : frontier2_;
    if (set.empty()) return std::nullopt;
    return *set.begin();
  }

  /// Alive 4-cycles of the given kind, ordered by lowest vertex id.
  std::vector<std::uint32_t> alive_c4s(C4Kind kind) const {
    std::vector<std::uint32_t> out;
    for (const auto& [a, i] : kind == C4Kind::c4_1 ? alive1_ : alive2_) out.push_back(i);
    return out;
  }
  bool any_alive(C4Kind kind) const { return !(kind == C4Kind::c4_1 ? alive1_ : alive2_).empty(); }

  bool c4_alive(std::uint32_t i) const {
    const auto& c = c4s_[i];
    return !in_u(c.a[0]) && !in_u(c.a[1]) && !in_u(c.b[0]) && !in_u(c.b[1]);
  }

  Matching matching() const { return matching_from_mates(mate_); }

  void apply(const Step& st) {
    for (Vertex v : st.region) enter(v);
    for (auto [a, b] : st.edges) {
      if (mate_[a] != no_vertex || mate_[b] != no_vertex) throw soundness_error("core: step reuses a matched vertex");
      mate_[a] = b;
      mate_[b] = a;
    }
    for (auto [a, l] : st.labels) set_label(a, l);
  }

  // ---- Case 1 and Case 4, as fixed rules ----

  Step case1(Vertex u) const {
    Vertex v = no_vertex;
    for (Vertex x : g_.neighbors(u)) {
      if (!in_u(x)) v = x;
    }
    std::vector<Vertex> us{u};
    for (Vertex x : g_.neighbors(v)) {
      if (x != u && !in_u(x) && free_deg_[x] == 1) us.push_back(x);
    }
    std::sort(us.begin() + 1, us.end());
    std::vector<std::vector<Vertex>> w(us.size());
    std::vector<Vertex> dashes;
    for (std::size_t i = 0; i < us.size(); ++i) {
      for (Vertex x : g_.neighbors(us[i])) {
        if (!in_u(x)) continue;
        w[i].push_back(x);
        if (label_[x] == Label::dash && std::find(dashes.begin(), dashes.end(), x) == dashes.end()) {
          dashes.push_back(x);
        }
      }
    }
    Step st;
    st.region = us;
    st.region.push_back(v);
    st.pattern = "case1";
    auto all_dash = [&](const std::vector<Vertex>& ws) {
      return ws.size() == 2 && label_[ws[0]] == Label::dash && label_[ws[1]] == Label::dash;
    };
    if (dashes.size() <= 4) {
      st.edges.push_back({v, us[0]});
      st.labels.push_back({v, Label::top});
      for (Vertex x : dashes) st.labels.push_back({x, Label::bot});
      st.gain = 4 - static_cast<std::int64_t>(dashes.size());
      return st;
    }
    for (std::size_t i = 0; i < us.size(); ++i) {
      for (std::size_t j = i + 1; j < us.size(); ++j) {
        if (!all_dash(w[i]) || !all_dash(w[j])) continue;
        auto pick = [](const std::vector<Vertex>& mine, const std::vector<Vertex>& other) {
          for (Vertex x : mine) {
            if (std::find(other.begin(), other.end(), x) == other.end()) return x;
          }
          return no_vertex;
        };
        Vertex w1 = pick(w[i], w[j]), w2 = pick(w[j], w[i]);
        if (w1 == no_vertex || w2 == no_vertex) {
          throw soundness_error("core case 1: W_i = W_j certifies twins");
        }
        st.edges.push_back({w1, us[i]});
        st.edges.push_back({w2, us[j]});
        st.labels.push_back({v, Label::bot});
        for (Vertex x : dashes) st.labels.push_back({x, x == w1 || x == w2 ? Label::top : Label::bot});
        st.gain = 13 - static_cast<std::int64_t>(dashes.size());
        return st;
      }
    }
    throw soundness_error("core case 1: n_d >= 5 without two all-⊢ sets W_i of size 2");
  }

  Step case4(Vertex u) const {
    std::vector<Vertex> vs;
    Vertex w = no_vertex;
    for (Vertex x : g_.neighbors(u)) {
      if (in_u(x)) {
        w = x;
      } else {
        vs.push_back(x);
      }
    }
    std::sort(vs.begin(), vs.end());
    if (vs.size() != 2) throw soundness_error("core case 4: d_out(u) != 2");
    Step st;
    st.region = {u, vs[0], vs[1]};
    st.pattern = "case4";
    if (w == no_vertex || label_[w] != Label::dash) {
      st.edges.push_back({vs[0], u});
      st.labels = {{vs[0], Label::top}, {vs[1], Label::dash}};
    } else {
      st.edges.push_back({w, u});
      st.labels = {{w, Label::top}, {vs[0], Label::dash}, {vs[1], Label::dash}};
    }
    st.gain = 0;
    return st;
  }

  // ---- region engine for Cases 2 and 3 ----

  /// Closes `seed` (vertices outside U) under (e) and (f): B vertices pull
  /// in their outside A-neighbors, and B vertices left without an outside
  /// A-neighbor are absorbed. Leaves the result marked. Returns false when
  /// the region grows past `cap`.
  bool close_region(std::vector<Vertex>& region, std::size_t cap = 40) const {
    ++mark_epoch_;
    std::vector<Vertex> work;
    for (Vertex v : region) {
      if (in_u(v) || marked(v)) continue;
      mark_[v] = mark_epoch_;
      work.push_back(v);
    }
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (work.size() > cap) return false;
      Vertex x = work[i];
      if (parts_.in_b(x)) {
        for (Vertex a : g_.neighbors(x)) {
          if (!in_u(a) && !marked(a)) {
            mark_[a] = mark_epoch_;
            work.push_back(a);
          }
        }
      } else {
        for (Vertex b : g_.neighbors(x)) {
          if (in_u(b) || marked(b)) continue;
          bool stranded = true;
          for (Vertex a : g_.neighbors(b)) stranded = stranded && (in_u(a) || marked(a));
          if (stranded) {
            mark_[b] = mark_epoch_;
            work.push_back(b);
          }
        }
      }
    }
    std::sort(work.begin(), work.end());
    region = std::move(work);
    return true;
  }

  /// Best extension on the closure of `seed`. `fixed` pins the partner of
  /// listed B vertices (no_vertex = stays unmatched); other region B
  /// vertices are enumerated. Candidates are ranked by slack gain and the
  /// first one keeping M uniquely restricted is returned, provided its gain
  /// is at least `min_gain`.
  std::optional<Step> best_extension(std::vector<Vertex> seed,
                                     const std::vector<std::pair<Vertex, Vertex>>& fixed,
                                     std::int64_t min_gain, const std::string& name) const {
    if (!close_region(seed)) return std::nullopt;
    const std::vector<Vertex>& region = seed;

    // A vertices whose label may change.
    std::vector<Vertex> touched;
    std::vector<Vertex> bs;
    for (Vertex x : region) {
      if (parts_.in_a(x)) {
        touched.push_back(x);
        continue;
      }
      bs.push_back(x);
      for (Vertex a : g_.neighbors(x)) {
        if (in_u(a) && std::find(touched.begin(), touched.end(), a) == touched.end()) touched.push_back(a);
      }
    }
    if (bs.size() > 12) return std::nullopt;
    auto slot = [&](Vertex a) {
      return static_cast<std::size_t>(std::find(touched.begin(), touched.end(), a) - touched.begin());
    };

    std::vector<Label> unmatched_label(touched.size());
    std::vector<std::int64_t> if_matched(touched.size()), if_unmatched(touched.size());
    std::int64_t base = 0;
    for (std::size_t i = 0; i < touched.size(); ++i) {
      Vertex a = touched[i];
      std::size_t left = 0;
      for (Vertex b : g_.neighbors(a)) left += (!in_u(b) && !marked(b)) ? 1 : 0;
      Label l;
      if (!in_u(a)) {
        l = left > 0 && dash_allowed(a) ? Label::dash : Label::bot;
      } else {
        l = label_[a] == Label::dash && left == 0 ? Label::bot : label_[a];
      }
      unmatched_label[i] = l;
      std::int64_t w0 = label_weight(label_[a]);
      if_unmatched[i] = label_weight(l) - w0;
      if_matched[i] = label_weight(Label::top) - w0;
      base += if_unmatched[i];
    }

    // Options per B vertex.
    std::vector<std::vector<Vertex>> options(bs.size());
    for (std::size_t k = 0; k < bs.size(); ++k) {
      Vertex b = bs[k];
      auto pin = std::find_if(fixed.begin(), fixed.end(), [&](const auto& p) { return p.first == b; });
      if (pin != fixed.end()) {
        Vertex a = pin->second;
        if (a != no_vertex && (!g_.has_edge(a, b) || mate_[a] != no_vertex || slot(a) == touched.size())) {
          return std::nullopt;
        }
        options[k] = {a};
        continue;
      }
      options[k].push_back(no_vertex);
      for (Vertex a : g_.neighbors(b)) {
        if (marked(a) || (in_u(a) && mate_[a] == no_vertex)) options[k].push_back(a);
      }
    }

    struct Cand {
      std::int64_t gain;
      std::vector<Vertex> pick;
    };
    std::vector<Cand> cands;
    std::vector<Vertex> pick(bs.size(), no_vertex);
    std::vector<char> used(touched.size(), 0);
    constexpr std::size_t leaf_cap = 200000;
    auto rec = [&](auto&& self, std::size_t k, std::int64_t gain) -> void {
      if (cands.size() >= leaf_cap) return;
      if (k == bs.size()) {
        cands.push_back({gain, pick});
        return;
      }
      for (Vertex a : options[k]) {
        if (a == no_vertex) {
          pick[k] = no_vertex;
          self(self, k + 1, gain);
          continue;
        }
        std::size_t i = slot(a);
        if (used[i]) continue;
        used[i] = 1;
        pick[k] = a;
        self(self, k + 1, gain + if_matched[i] - if_unmatched[i]);
        used[i] = 0;
      }
      pick[k] = no_vertex;
    };
    rec(rec, 0, base);
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
      if (x.gain != y.gain) return x.gain > y.gain;
      auto cnt = [](const Cand& c) { return std::count_if(c.pick.begin(), c.pick.end(), [](Vertex a) { return a != no_vertex; }); };
      return cnt(x) > cnt(y);
    });

    for (const auto& c : cands) {
      if (c.gain < min_gain) break;
      std::vector<std::pair<Vertex, Vertex>> edges;
      for (std::size_t k = 0; k < bs.size(); ++k) {
        if (c.pick[k] != no_vertex) edges.push_back({c.pick[k], bs[k]});
      }
      if (creates_alternating_cycle(edges)) continue;
      Step st;
      st.region = region;
      st.edges = edges;
      st.gain = c.gain;
      st.pattern = name;
      for (std::size_t i = 0; i < touched.size(); ++i) {
        bool matched = std::find(c.pick.begin(), c.pick.end(), touched[i]) != c.pick.end();
        Label l = matched ? Label::top : unmatched_label[i];
        if (l != label_[touched[i]]) st.labels.push_back({touched[i], l});
      }
      return st;
    }
    return std::nullopt;
  }

  /// Whether adding `edges` (a, b) to M closes an M-alternating cycle. M
  /// itself is assumed UR, so only cycles through new edges are searched.
  bool creates_alternating_cycle(const std::vector<std::pair<Vertex, Vertex>>& edges) const {
    if (edges.empty()) return false;
    auto& mate = const_cast<std::vector<Vertex>&>(mate_);
    for (auto [a, b] : edges) {
      mate[a] = b;
      mate[b] = a;
    }
    ++dfs_epoch_;
    bool cycle = false;
    std::vector<std::pair<Vertex, std::size_t>> stack;
    for (auto [start, unused] : edges) {
      (void)unused;
      if (cycle || dfs_seen_[start] == dfs_epoch_) continue;
      dfs_seen_[start] = dfs_epoch_;
      dfs_state_[start] = 1;
      stack.push_back({start, 0});
      while (!stack.empty() && !cycle) {
        auto& [x, idx] = stack.back();
        auto nb = g_.neighbors(mate[x]);
        if (idx == nb.size()) {
          dfs_state_[x] = 2;
          stack.pop_back();
          continue;
        }
        Vertex y = nb[idx++];
        if (y == x || mate[y] == no_vertex) continue;
        if (dfs_seen_[y] != dfs_epoch_) {
          dfs_seen_[y] = dfs_epoch_;
          dfs_state_[y] = 1;
          stack.push_back({y, 0});
        } else if (dfs_state_[y] == 1) {
          cycle = true;
        }
      }
      stack.clear();
    }
    for (auto [a, b] : edges) {
      mate[a] = no_vertex;
      mate[b] = no_vertex;
    }
    return cycle;
  }

  /// Full scan of properties (a)-(h), the counters, and the potential bound.
  void check() const {
    const std::size_t n = g_.vertex_count();
    std::int64_t s = 0, d = 0, f = 0;
    std::size_t usz = 0;
    for (Vertex v = 0; v < n; ++v) {
      usz += in_u(v) ? 1 : 0;
      std::size_t outside = 0;
      for (Vertex x : g_.neighbors(v)) outside += in_u(x) ? 0 : 1;
      if (outside != free_deg_[v]) fail("outside-degree bookkeeping");
      if (mate_[v] != no_vertex && !in_u(v)) fail("(b) matched vertex outside U");
      if (parts_.in_b(v)) {
        if (label_[v] != Label::none) fail("(c) label on a B vertex");
        if (in_u(v)) {
          if (outside > 0) fail("(e) edge between U ∩ B and A ∖ U");
        } else if (outside == 0) {
          fail("(f) B ∖ U vertex without a neighbor in A ∖ U");
        }
        bool listed = frontier1_.count(v) || frontier2_.count(v);
        if (listed != (!in_u(v) && (outside == 1 || outside == 2))) fail("frontier bookkeeping");
        continue;
      }
      if (!in_u(v)) {
        if (label_[v] != Label::none) fail("(c) label outside U");
        continue;
      }
      switch (label_[v]) {
        case Label::none: fail("(c) unlabeled A ∩ U vertex");
        case Label::top: ++s; break;
        case Label::dash:
          ++d;
          if (outside == 0) fail("(d) ⊢ vertex without a neighbor in B ∖ U");
          break;
        case Label::bot: ++f; break;
      }
      if ((label_[v] == Label::top) != (mate_[v] != no_vertex)) fail("(d) ⊤ differs from matched");
    }
    if (usz != u_size_) fail("|U| bookkeeping");
    if (s != s_ || d != d_ || f != f_) fail("counters s, d, f out of sync");
    if (slack() < 0) fail("(g) potential bound");
    if (!is_ur_bipartite(g_, parts_, matching())) fail("(b) M is not uniquely restricted");
    for (std::uint32_t i = 0; i < c4s_.size(); ++i) {
      const auto& c = c4s_[i];
      bool alive = c4_alive(i);
      bool listed = alive_set(c).count({anchor(c), i}) > 0;
      if (alive != listed) fail("alive 4-cycle bookkeeping");
      if (!alive || c.kind != C4Kind::c4_1) continue;
      for (Vertex b : c.b) {
        for (Vertex a : g_.neighbors(b)) {
          if (in_u(a) && label_[a] == Label::dash) fail("(h) ⊢ vertex next to a C4¹ outside U");
        }
      }
    }
  }

private:
  [[noreturn]] static void fail(const std::string& what) {
    throw soundness_error("core invariant violated: " + what);
  }

  static Vertex anchor(const C4Instance& c) {
    return std::min({c.a[0], c.a[1], c.b[0], c.b[1]});
  }
  std::set<std::pair<Vertex, std::uint32_t>>& alive_set(const C4Instance& c) {
    return c.kind == C4Kind::c4_1 ? alive1_ : alive2_;
  }
  const std::set<std::pair<Vertex, std::uint32_t>>& alive_set(const C4Instance& c) const {
    return c.kind == C4Kind::c4_1 ? alive1_ : alive2_;
  }

  bool marked(Vertex v) const noexcept { return mark_[v] == mark_epoch_; }

  // (h) after the marked region joins U: a new ⊢ vertex must not touch a
  // C4¹ that stays outside.
  bool dash_allowed(Vertex a) const {
    for (Vertex b : g_.neighbors(a)) {
      if (in_u(b) || marked(b)) continue;
      for (std::uint32_t i : c4_of_[b]) {
        const auto& c = c4s_[i];
        if (c.kind != C4Kind::c4_1) continue;
        bool stays = true;
        for (Vertex x : {c.a[0], c.a[1], c.b[0], c.b[1]}) stays = stays && !in_u(x) && !marked(x);
        if (stays) return false;
      }
    }
    return true;
  }

  void frontier_insert(Vertex v) {
    if (free_deg_[v] == 1) frontier1_.insert(v);
    if (free_deg_[v] == 2) frontier2_.insert(v);
  }
  void frontier_erase(Vertex v) {
    frontier1_.erase(v);
    frontier2_.erase(v);
  }

  void enter(Vertex v) {
    if (in_u(v)) throw soundness_error("core: vertex enters U twice");
    in_u_[v] = 1;
    ++u_size_;
    if (parts_.in_b(v)) frontier_erase(v);
    for (std::uint32_t i : c4_of_[v]) alive_set(c4s_[i]).erase({anchor(c4s_[i]), i});
    for (Vertex w : g_.neighbors(v)) {
      bool track = parts_.in_b(w) && !in_u(w);
      if (track) frontier_erase(w);
      --free_deg_[w];
      if (track) frontier_insert(w);
    }
  }

  void set_label(Vertex a, Label l) {
    auto bump = [&](Label x, std::int64_t by) {
      if (x == Label::top) s_ += by;
      if (x == Label::dash) d_ += by;
      if (x == Label::bot) f_ += by;
    };
    bump(label_[a], -1);
    bump(l, +1);
    label_[a] = l;
  }

  const Graph& g_;
  const Bipartition& parts_;
  std::vector<char> in_u_;
  std::vector<Vertex> mate_;
  std::vector<Label> label_;
  std::vector<std::uint8_t> free_deg_;
  std::set<Vertex> frontier1_, frontier2_;
  std::vector<C4Instance> c4s_;
  std::vector<std::vector<std::uint32_t>> c4_of_;
  std::set<std::pair<Vertex, std::uint32_t>> alive1_, alive2_;
  std::size_t u_size_ = 0;
  std::int64_t s_ = 0, d_ = 0, f_ = 0;
  mutable std::vector<std::uint32_t> mark_;
  mutable std::uint32_t mark_epoch_ = 0;
  mutable std::vector<std::uint32_t> dfs_seen_;
  mutable std::vector<std::uint8_t> dfs_state_;
  mutable std::uint32_t dfs_epoch_ = 0;
};

namespace detail {

struct StateHost {
  const LabeledState& st;
  bool free(Vertex v) const { return !st.in_u(v); }
  bool label_ok(Vertex v, LabelReq r) const {
    if (!st.in_u(v) || st.parts().in_b(v)) return false;
    return r == LabelReq::top ? st.label(v) == Label::top : st.label(v) != Label::top;
  }
  std::size_t free_degree(Vertex v) const { return st.free_degree(v); }
  std::size_t u_degree(Vertex v) const { return st.graph().degree(v) - st.free_degree(v); }
  bool adjacent(Vertex x, Vertex y) const { return st.graph().has_edge(x, y); }
  template <class F>
  void for_neighbors(Vertex v, F&& f) const {
    for (Vertex w : st.graph().neighbors(v)) f(w);
  }
};

// Catalogue pass over the alive 4-cycles of one kind. `only` / `skip`
// restrict the pattern ids considered.
inline std::optional<Step> catalogue_step(const LabeledState& st, C4Kind kind, const std::string& skip,
                                          const std::string& only, ApproxResult& stats) {
  const auto& table = kind == C4Kind::c4_1 ? case2_patterns() : case3_patterns();
  StateHost host{st};
  for (std::uint32_t idx : st.alive_c4s(kind)) {
    const auto& c = st.c4s()[idx];
    std::vector<std::array<Vertex, 4>> roots;  // a1, a2, c, b1
    for (int ao = 0; ao < (kind == C4Kind::c4_1 ? 1 : 2); ++ao) {
      for (int bo = 0; bo < 2; ++bo) {
        roots.push_back({c.a[ao], c.a[1 - ao], c.b[bo], c.b[1 - bo]});
      }
    }
    for (const auto& p : table) {
      if (!skip.empty() && p.id == skip) continue;
      if (!only.empty() && p.id != only) continue;
      const std::size_t ta1 = p.index("a1"), ta2 = p.index("a2"), tc = p.index("c"), tb1 = p.index("b1");
      for (const auto& r : roots) {
        std::vector<Vertex> image(p.size(), no_vertex);
        image[ta1] = r[0];
        image[ta2] = r[1];
        image[tc] = r[2];
        image[tb1] = r[3];
        if (!embed(p, host, image)) continue;
        if (p.impossible) {
          ++stats.case_counts["impossible:" + p.id];
          continue;
        }
        std::vector<Vertex> seed;
        std::vector<std::pair<Vertex, Vertex>> fixed;
        for (std::size_t t = 0; t < p.size(); ++t) {
          if (!p.vertices[t].in_u) seed.push_back(image[t]);
          if (p.vertices[t].side == Side::B) fixed.push_back({image[t], no_vertex});
        }
        for (const auto& e : p.edges) {
          if (!e.select) continue;
          std::size_t tb = p.vertices[e.x].side == Side::B ? e.x : e.y;
          std::size_t ta = tb == e.x ? e.y : e.x;
          for (auto& fx : fixed) {
            if (fx.first == image[tb]) fx.second = image[ta];
          }
        }
        if (auto step = st.best_extension(seed, fixed, 0, p.id)) return step;
        ++stats.case_counts["rejected:" + p.id];
      }
    }
  }
  return std::nullopt;
}

// Search over regions grown from each alive 4-cycle of one kind, alone and
// merged with nearby alive 4-cycles.
inline std::optional<Step> search_step(const LabeledState& st, C4Kind kind, std::int64_t min_gain) {
  const auto& g = st.graph();
  std::optional<Step> best;
  for (std::uint32_t idx : st.alive_c4s(kind)) {
    const auto& c = st.c4s()[idx];
    std::vector<Vertex> base{c.a[0], c.a[1], c.b[0], c.b[1]};
    std::vector<Vertex> closed = base;
    if (!st.close_region(closed)) continue;
    std::vector<std::uint32_t> near;
    // Alive 4-cycles (either kind) touching the closure or one step out.
    std::vector<Vertex> close;
    for (Vertex x : closed) {
      close.push_back(x);
      for (Vertex y : g.neighbors(x)) close.push_back(y);
    }
    std::sort(close.begin(), close.end());
    auto near_to = [&](Vertex z) { return std::binary_search(close.begin(), close.end(), z); };
    for (C4Kind k : {C4Kind::c4_1, C4Kind::c4_2}) {
      for (std::uint32_t j : st.alive_c4s(k)) {
        const auto& q = st.c4s()[j];
        if (j == idx || near.size() >= 6) continue;
        if (near_to(q.a[0]) || near_to(q.a[1]) || near_to(q.b[0]) || near_to(q.b[1])) near.push_back(j);
      }
    }
    std::vector<std::vector<Vertex>> seeds{base};
    std::vector<Vertex> all = base;
    for (std::uint32_t j : near) {
      const auto& q = st.c4s()[j];
      std::vector<Vertex> s = base;
      for (Vertex z : {q.a[0], q.a[1], q.b[0], q.b[1]}) {
        s.push_back(z);
        all.push_back(z);
      }
      seeds.push_back(s);
    }
    if (near.size() > 1) seeds.push_back(all);
    for (const auto& s : seeds) {
      auto step = st.best_extension(s, {}, min_gain, "search");
      if (!step) continue;
      if (step->gain >= 0) return step;
      if (!best || step->gain > best->gain) best = step;
    }
  }
  return best;
}

} // namespace detail

/// Whether g meets the entry conditions of the core loop for side roles
/// `parts`; returns the first failed condition, empty when all hold.
inline std::string core_precondition_failure(const Graph& g, const Bipartition& parts) {
  if (g.vertex_count() == 0) return "graph is empty";
  if (!is_connected(g)) return "graph is not connected";
  for (const auto& e : g.edges()) {
    if (parts.side(e.u) == parts.side(e.v)) return "edge inside a side";
  }
  if (g.max_degree() > 3) return "maximum degree exceeds 3";
  if (g.min_degree() < 2) return "condition (3): a vertex of degree < 2";
  bool low_b = false;
  for (Vertex v = 0; v < g.vertex_count(); ++v) low_b = low_b || (parts.in_b(v) && g.degree(v) <= 2);
  if (!low_b) return "condition (4): every B vertex has degree 3";
  if (!find_twins(g).empty()) return "condition (2): twins";
  if (auto hit = find_reduction_pattern(g)) return "condition (1): contains pattern " + hit->pattern->id;
  return {};
}

/// The labeled extension loop on a graph meeting conditions (1)-(4).
/// Returns a UR matching of size >= (5/9)|A|, or an optimum when the graph
/// is at most the brute-force threshold.
inline ApproxResult core_loop(const Graph& g, const Bipartition& parts, const SubcubicOptions& opt = {}) {
  if (auto why = core_precondition_failure(g, parts); !why.empty()) throw precondition_error("core_loop: " + why);
  ApproxResult res;
  res.delta = 3;
  res.guarantee = {5, 9};
  std::size_t a_count = parts.side_a().size();
  res.bound_reference = a_count;

  const std::size_t threshold = opt.brute_force_threshold.value_or(largest_pattern_size());
  if (g.vertex_count() <= threshold) {
    res.matching = nu_ur_exact(g).witness;
    ++res.case_counts["brute_force"];
    if (opt.trace) opt.trace("brute force on " + std::to_string(g.vertex_count()) + " vertices");
    return res;
  }

  LabeledState st(g, parts);
  if (opt.assert_invariants) {
    st.check();
    ++res.invariant_checks;
  }
  while (!st.done()) {
    Step step;
    const char* which = nullptr;
    if (auto u = st.frontier(1)) {
      which = "case1";
      step = st.case1(*u);
    } else if (st.any_alive(C4Kind::c4_1) || st.any_alive(C4Kind::c4_2)) {
      C4Kind kind = st.any_alive(C4Kind::c4_1) ? C4Kind::c4_1 : C4Kind::c4_2;
      which = kind == C4Kind::c4_1 ? "case2" : "case3";
      std::optional<Step> found;
      if (kind == C4Kind::c4_1) {
        found = detail::catalogue_step(st, kind, "case2_5.xvii", "", res);
        if (!found) found = detail::catalogue_step(st, kind, "", "case2_5.xvii", res);
      } else {
        found = detail::catalogue_step(st, kind, "", "", res);
      }
      if (!found) {
        found = detail::search_step(st, kind, -st.slack());
        if (found) ++res.case_counts[found->gain >= 0 ? "search" : "search_negative_gain"];
      }
      if (!found) throw soundness_error("core_loop: unmatched configuration");
      step = std::move(*found);
    } else if (auto u4 = st.frontier(2)) {
      which = "case4";
      step = st.case4(*u4);
    } else {
      throw soundness_error("core_loop: no case applies while U != V");
    }
    st.apply(step);
    ++res.steps;
    ++res.case_counts[which];
    if (step.pattern != which) ++res.case_counts["pattern:" + step.pattern];
    if (opt.assert_invariants) {
      st.check();
      ++res.invariant_checks;
    }
    if (opt.trace) {
      std::ostringstream line;
      line << "iter " << res.steps << " " << which << " pattern=" << step.pattern << " s=" << st.s()
           << " d=" << st.d() << " f=" << st.f() << " slack=" << st.slack();
      opt.trace(line.str());
    }
  }
  res.matching = st.matching();
  if (!opt.assert_invariants && !is_ur_bipartite(g, parts, res.matching)) {
    throw soundness_error("core_loop: final matching is not uniquely restricted");
  }
  if (static_cast<std::int64_t>(res.matching.size()) * 9 < 5 * static_cast<std::int64_t>(a_count)) {
    throw soundness_error("core_loop: final size below (5/9)|A|");
  }
  return res;
}

} // namespace urm::subcubic
