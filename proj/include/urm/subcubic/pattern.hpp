#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "urm/error.hpp"
#include "urm/graph.hpp"
#include "urm/matching.hpp"

namespace urm::subcubic {

/// Label requirement on a template vertex that sits in U already.
enum class LabelReq : std::uint8_t { none, top, unmatched };

struct PatternVertex {
  std::string name;
  Side side = Side::A;
  /// May have neighbors outside the pattern (a half-edge in the drawing).
  bool open = false;
  /// Vertex of U drawn above the dotted line; constrained by label only.
  bool in_u = false;
  LabelReq label = LabelReq::none;
};

struct PatternEdge {
  std::uint8_t x = 0;
  std::uint8_t y = 0;
  bool select = false;
};

/// A local template: vertices with side and boundary flags, internal edges,
/// and the edges to add to the matching.
struct Pattern {
  std::string id;
  std::string figure;
  std::vector<PatternVertex> vertices;
  std::vector<PatternEdge> edges;
  /// Cannot occur once the reductions have run; a hit is only counted.
  bool impossible = false;
  /// Drawn without outside neighbors.
  bool closed_small = false;

  std::size_t size() const noexcept { return vertices.size(); }

  std::size_t index(std::string_view name) const {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (vertices[i].name == name) return i;
    }
    throw precondition_error("pattern " + id + ": no vertex named " + std::string(name));
  }

  bool adjacent(std::size_t x, std::size_t y) const noexcept { return adj_[x * size() + y] != 0; }

  /// Template neighbors that are not U vertices.
  std::size_t free_degree(std::size_t t) const noexcept { return free_deg_[t]; }
  std::size_t u_degree(std::size_t t) const noexcept { return u_deg_[t]; }

  std::vector<PatternEdge> selected() const {
    std::vector<PatternEdge> out;
    for (const auto& e : edges) {
      if (e.select) out.push_back(e);
    }
    return out;
  }

  /// Per A vertex: 'T' when it ends a selected edge, 'R' when its label
  /// follows the outside-neighbor rule, '-' for B vertices.
  std::string label_plan() const {
    std::string plan(size(), '-');
    for (std::size_t t = 0; t < size(); ++t) {
      if (vertices[t].side == Side::A) plan[t] = 'R';
    }
    for (const auto& e : edges) {
      if (!e.select) continue;
      plan[e.x] = plan[e.x] == '-' ? '-' : 'T';
      plan[e.y] = plan[e.y] == '-' ? '-' : 'T';
    }
    return plan;
  }

  void finalize() {
    const std::size_t n = size();
    adj_.assign(n * n, 0);
    free_deg_.assign(n, 0);
    u_deg_.assign(n, 0);
    for (const auto& e : edges) {
      adj_[e.x * n + e.y] = adj_[e.y * n + e.x] = 1;
      (vertices[e.y].in_u ? u_deg_[e.x] : free_deg_[e.x])++;
      (vertices[e.x].in_u ? u_deg_[e.y] : free_deg_[e.y])++;
    }
  }

private:
  std::vector<char> adj_;
  std::vector<std::size_t> free_deg_;
  std::vector<std::size_t> u_deg_;
};

/// Builds a pattern from two strings.
///   vertices: "c:B b1:B a1:A+ s:A=T"  ('+' open, '=T' / '=D' a U vertex
///             labeled ⊤ / not ⊤)
///   edges:    "c-a1 c-a2* b1-a1"      ('*' marks a selected edge)
inline Pattern make_pattern(std::string id, std::string figure, std::string_view vertex_spec,
                            std::string_view edge_spec, bool impossible = false) {
  Pattern p;
  p.id = std::move(id);
  p.figure = std::move(figure);
  p.impossible = impossible;
  auto bad = [&](const std::string& why) { return precondition_error("pattern " + p.id + ": " + why); };

  std::istringstream vs{std::string(vertex_spec)};
  std::string tok;
  while (vs >> tok) {
    auto colon = tok.find(':');
    if (colon == std::string::npos || colon + 1 >= tok.size()) throw bad("bad vertex token " + tok);
    PatternVertex v;
    v.name = tok.substr(0, colon);
    char side = tok[colon + 1];
    if (side != 'A' && side != 'B') throw bad("bad side in " + tok);
    v.side = side == 'A' ? Side::A : Side::B;
    std::string rest = tok.substr(colon + 2);
    if (rest == "+") {
      v.open = true;
    } else if (rest == "=T" || rest == "=D") {
      if (v.side != Side::A) throw bad("U vertex on side B: " + tok);
      v.in_u = true;
      v.label = rest == "=T" ? LabelReq::top : LabelReq::unmatched;
    } else if (!rest.empty()) {
      throw bad("bad vertex flags in " + tok);
    }
    for (const auto& w : p.vertices) {
      if (w.name == v.name) throw bad("duplicate vertex " + v.name);
    }
    p.vertices.push_back(v);
  }
  if (p.vertices.empty() || p.vertices.size() > 32) throw bad("vertex count out of range");

  std::istringstream es{std::string(edge_spec)};
  while (es >> tok) {
    PatternEdge e;
    if (tok.back() == '*') {
      e.select = true;
      tok.pop_back();
    }
    auto dash = tok.find('-');
    if (dash == std::string::npos) throw bad("bad edge token " + tok);
    e.x = static_cast<std::uint8_t>(p.index(tok.substr(0, dash)));
    e.y = static_cast<std::uint8_t>(p.index(tok.substr(dash + 1)));
    if (p.vertices[e.x].side == p.vertices[e.y].side) throw bad("edge inside a side: " + tok);
    for (const auto& f : p.edges) {
      if ((f.x == e.x && f.y == e.y) || (f.x == e.y && f.y == e.x)) throw bad("duplicate edge " + tok);
    }
    p.edges.push_back(e);
  }

  std::vector<int> hit(p.size(), 0);
  for (const auto& e : p.edges) {
    if (!e.select) continue;
    if (hit[e.x]++ || hit[e.y]++) throw bad("selected edges share a vertex");
  }
  p.finalize();

  // Connected, so that an embedding can grow from any root.
  std::vector<char> seen(p.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    auto t = stack.back();
    stack.pop_back();
    for (std::size_t w = 0; w < p.size(); ++w) {
      if (p.adjacent(t, w) && !seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  if (std::count(seen.begin(), seen.end(), 1) != static_cast<long>(p.size())) throw bad("not connected");

  bool any_open = false;
  for (const auto& v : p.vertices) any_open = any_open || v.open;
  p.closed_small = !any_open;
  return p;
}

/// Grows an injective map from template vertices to graph vertices.
/// `image` comes in with the roots set and everything else no_vertex; on
/// success it holds the full embedding.
///
/// Host provides: free(v), label_ok(v, LabelReq), free_degree(v),
/// u_degree(v), adjacent(x, y), and for_neighbors(v, f).
///
/// Rules: closed template vertices match their free degree exactly, open
/// ones at least; a B vertex with template U-neighbors has exactly that
/// many U-neighbors; adjacency among mapped vertices is induced.
template <class Host>
bool embed(const Pattern& p, const Host& host, std::vector<Vertex>& image) {
  const std::size_t n = p.size();
  if (image.size() != n) throw precondition_error("embed: image size mismatch");

  auto vertex_ok = [&](std::size_t t, Vertex v) {
    const auto& pv = p.vertices[t];
    if (pv.in_u) {
      if (!host.label_ok(v, pv.label)) return false;
    } else {
      if (!host.free(v)) return false;
      std::size_t fd = host.free_degree(v);
      if (pv.open ? fd < p.free_degree(t) : fd != p.free_degree(t)) return false;
      if (p.u_degree(t) > 0 && host.u_degree(v) != p.u_degree(t)) return false;
    }
    return true;
  };
  auto consistent = [&](std::size_t t, Vertex v) {
    for (std::size_t w = 0; w < n; ++w) {
      if (w == t || image[w] == no_vertex) continue;
      if (image[w] == v) return false;
      if (p.adjacent(t, w) != host.adjacent(v, image[w])) return false;
    }
    return true;
  };

  // BFS order from the roots; each later vertex records a mapped parent.
  std::vector<std::size_t> order;
  std::vector<std::size_t> parent(n, n);
  std::vector<char> placed(n, 0);
  std::vector<std::size_t> queue;
  for (std::size_t t = 0; t < n; ++t) {
    if (image[t] == no_vertex) continue;
    placed[t] = 1;
    queue.push_back(t);
    if (!vertex_ok(t, image[t]) || !consistent(t, image[t])) return false;
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::size_t t = queue[head];
    for (std::size_t w = 0; w < n; ++w) {
      if (placed[w] || !p.adjacent(t, w)) continue;
      placed[w] = 1;
      parent[w] = t;
      order.push_back(w);
      queue.push_back(w);
    }
  }
  if (std::find(placed.begin(), placed.end(), 0) != placed.end()) {
    throw precondition_error("embed: roots do not reach every template vertex");
  }

  auto rec = [&](auto&& self, std::size_t k) -> bool {
    if (k == order.size()) return true;
    std::size_t t = order[k];
    std::vector<Vertex> options;
    host.for_neighbors(image[parent[t]], [&](Vertex v) { options.push_back(v); });
    for (Vertex v : options) {
      if (!vertex_ok(t, v) || !consistent(t, v)) continue;
      image[t] = v;
      if (self(self, k + 1)) return true;
      image[t] = no_vertex;
    }
    return false;
  };
  return rec(rec, 0);
}

} // namespace urm::subcubic
