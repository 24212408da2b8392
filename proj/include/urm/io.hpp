#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "urm/error.hpp"
#include "urm/graph.hpp"

namespace urm {

/// A parsed graph plus the token each vertex id was read from.
///
/// In numeric mode (every edge token is an unsigned integer) names[i] is
/// simply the decimal id. Otherwise tokens are labels mapped to ids in order
/// of first appearance.
struct GraphFile {
  Graph graph;
  std::vector<std::string> names;
  bool labeled = false;

  /// Id of a vertex token, or throws parse_error on unknown labels.
  Vertex lookup(std::string_view token, std::size_t line) const;
};

namespace detail {

struct RawLine {
  std::size_t number;
  std::vector<std::string> tokens;
};

inline std::vector<RawLine> split_lines(std::string_view text) {
  std::vector<RawLine> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++number;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::istringstream in{std::string(line)};
    RawLine raw{number, {}};
    for (std::string tok; in >> tok;) raw.tokens.push_back(std::move(tok));
    if (!raw.tokens.empty()) out.push_back(std::move(raw));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

inline bool parse_unsigned(std::string_view tok, std::uint64_t& value) {
  if (tok.empty()) return false;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

} // namespace detail

inline Vertex GraphFile::lookup(std::string_view token, std::size_t line) const {
  if (!labeled) {
    std::uint64_t v = 0;
    if (!detail::parse_unsigned(token, v)) {
      throw parse_error(line, "expected a vertex id, got '" + std::string(token) + "'");
    }
    if (v >= graph.vertex_count()) {
      throw parse_error(line, "vertex " + std::string(token) + " is not in the graph");
    }
    return static_cast<Vertex>(v);
  }
  for (Vertex v = 0; v < names.size(); ++v) {
    if (names[v] == token) return v;
  }
  throw parse_error(line, "unknown vertex label '" + std::string(token) + "'");
}

/// Parses the edge-list format: optional `p <n> <m>` header, `#` comments,
/// one `<u> <v>` pair per line.
inline GraphFile parse_graph(std::string_view text) {
  auto lines = detail::split_lines(text);
  std::optional<std::uint64_t> header_n, header_m;
  std::size_t first = 0;
  if (!lines.empty() && lines[0].tokens[0] == "p") {
    const auto& h = lines[0];
    std::uint64_t n = 0, m = 0;
    if (h.tokens.size() != 3 || !detail::parse_unsigned(h.tokens[1], n) ||
        !detail::parse_unsigned(h.tokens[2], m)) {
      throw parse_error(h.number, "malformed header, expected 'p <n> <m>'");
    }
    header_n = n;
    header_m = m;
    first = 1;
  }

  bool numeric = true;
  for (std::size_t i = first; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.tokens.size() != 2) {
      throw parse_error(l.number, "expected '<u> <v>', got " + std::to_string(l.tokens.size()) +
                                      " tokens");
    }
    if (l.tokens[0] == "p") throw parse_error(l.number, "header must be the first line");
    std::uint64_t tmp = 0;
    for (const auto& tok : l.tokens) numeric = numeric && detail::parse_unsigned(tok, tmp);
  }

  GraphFile out;
  out.labeled = !numeric;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_line;
  std::uint64_t max_id = 0;
  bool any = false;
  std::unordered_map<std::string, Vertex> ids;
  for (std::size_t i = first; i < lines.size(); ++i) {
    const auto& l = lines[i];
    Vertex ends[2];
    for (int k = 0; k < 2; ++k) {
      if (numeric) {
        std::uint64_t v = 0;
        detail::parse_unsigned(l.tokens[k], v);
        if (header_n && v >= *header_n) {
          throw parse_error(l.number, "vertex " + l.tokens[k] + " >= n = " +
                                          std::to_string(*header_n));
        }
        if (v > 0xFFFFFFFEull) throw parse_error(l.number, "vertex id too large");
        ends[k] = static_cast<Vertex>(v);
        max_id = std::max(max_id, v);
        any = true;
      } else {
        auto [it, fresh] = ids.try_emplace(l.tokens[k], static_cast<Vertex>(out.names.size()));
        if (fresh) out.names.push_back(l.tokens[k]);
        ends[k] = it->second;
      }
    }
    if (ends[0] == ends[1]) throw parse_error(l.number, "loop at vertex " + l.tokens[0]);
    edges.push_back(make_edge(ends[0], ends[1]));
    edge_line.push_back(l.number);
  }

  std::size_t n = 0;
  if (numeric) {
    n = header_n ? static_cast<std::size_t>(*header_n) : (any ? max_id + 1 : 0);
    out.names.resize(n);
    for (std::size_t v = 0; v < n; ++v) out.names[v] = std::to_string(v);
  } else {
    n = out.names.size();
    if (header_n) {
      if (*header_n < n) {
        throw parse_error(lines[0].number, "header declares " + std::to_string(*header_n) +
                                               " vertices but " + std::to_string(n) +
                                               " labels appear");
      }
      n = static_cast<std::size_t>(*header_n);
    }
  }

  // Duplicate detection with the line of the second occurrence.
  {
    std::vector<std::size_t> idx(edges.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](auto x, auto y) { return edges[x] < edges[y]; });
    for (std::size_t i = 1; i < idx.size(); ++i) {
      if (edges[idx[i]] == edges[idx[i - 1]]) {
        const auto& e = edges[idx[i]];
        std::string label_u = numeric ? std::to_string(e.u) : out.names[e.u];
        std::string label_v = numeric ? std::to_string(e.v) : out.names[e.v];
        throw parse_error(edge_line[idx[i]], "duplicate edge " + label_u + " " + label_v);
      }
    }
  }
  if (header_m && *header_m != edges.size()) {
    throw parse_error(lines[0].number, "header declares " + std::to_string(*header_m) +
                                           " edges but " + std::to_string(edges.size()) +
                                           " are listed");
  }
  out.graph = Graph(n, std::move(edges));
  return out;
}

/// Header plus lexicographically sorted edges, numeric ids.
inline std::string write_graph(const Graph& g) {
  std::string out = "p " + std::to_string(g.vertex_count()) + " " +
                    std::to_string(g.edge_count()) + "\n";
  for (const auto& e : g.edges()) {
    out += std::to_string(e.u);
    out += ' ';
    out += std::to_string(e.v);
    out += '\n';
  }
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw io_error("failed reading '" + path + "'");
  return buf.str();
}

inline void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw io_error("failed writing '" + path + "'");
}

inline GraphFile read_graph_file(const std::string& path) { return parse_graph(read_text_file(path)); }

/// Parses `<u> <v>` lines against the vertex naming of `file`. Every pair
/// must be an edge of the graph.
inline std::vector<Edge> parse_edge_list(std::string_view text, const GraphFile& file) {
  std::vector<Edge> out;
  for (const auto& l : detail::split_lines(text)) {
    if (l.tokens.size() != 2) throw parse_error(l.number, "expected '<u> <v>'");
    Vertex u = file.lookup(l.tokens[0], l.number);
    Vertex v = file.lookup(l.tokens[1], l.number);
    if (!file.graph.has_edge(u, v)) {
      throw parse_error(l.number, l.tokens[0] + " " + l.tokens[1] + " is not an edge of the graph");
    }
    out.push_back(make_edge(u, v));
  }
  return out;
}

} // namespace urm
