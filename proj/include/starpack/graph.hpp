#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <ranges>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "starpack/error.hpp"

namespace starpack {

/// Vertices are dense 1-based ids; 0 is never a vertex and is used as "none".
using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

/// Membership bitset over 1..n. Iteration is always in ascending id order.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(int n) : n_(n), words_(static_cast<std::size_t>(n) / 64 + 1, 0) {}

  static VertexSet full(int n) {
    VertexSet s(n);
    for (Vertex v = 1; v <= n; ++v) s.insert(v);
    return s;
  }

  template <std::ranges::input_range R>
  static VertexSet of(int n, R&& vertices) {
    VertexSet s(n);
    for (Vertex v : vertices) s.insert(v);
    return s;
  }

  int universe() const { return n_; }

  bool contains(Vertex v) const {
    if (v < 1 || v > n_) return false;
    return (words_[static_cast<std::size_t>(v) >> 6] >> (v & 63)) & 1U;
  }
  void insert(Vertex v) {
    check(v);
    words_[static_cast<std::size_t>(v) >> 6] |= std::uint64_t{1} << (v & 63);
  }
  void erase(Vertex v) {
    check(v);
    words_[static_cast<std::size_t>(v) >> 6] &= ~(std::uint64_t{1} << (v & 63));
  }

  int size() const {
    int total = 0;
    for (auto w : words_) total += std::popcount(w);
    return total;
  }
  bool empty() const {
    return std::ranges::all_of(words_, [](std::uint64_t w) { return w == 0; });
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        const int bit = std::countr_zero(w);
        f(static_cast<Vertex>(i * 64 + static_cast<std::size_t>(bit)));
        w &= w - 1;
      }
    }
  }

  std::vector<Vertex> to_vector() const {
    std::vector<Vertex> out;
    out.reserve(static_cast<std::size_t>(size()));
    for_each([&](Vertex v) { out.push_back(v); });
    return out;
  }

  VertexSet& operator|=(const VertexSet& o) {
    check_same(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  VertexSet& operator-=(const VertexSet& o) {
    check_same(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  bool is_subset_of(const VertexSet& o) const {
    check_same(o);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if ((words_[i] & ~o.words_[i]) != 0) return false;
    }
    return true;
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  void check(Vertex v) const {
    if (v < 1 || v > n_) throw PreconditionError("vertex " + std::to_string(v) + " outside 1.." + std::to_string(n_));
  }
  void check_same(const VertexSet& o) const {
    if (o.n_ != n_) throw PreconditionError("vertex sets over different universes");
  }

  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Immutable simple undirected graph on vertices 1..n with sorted adjacency lists.
class Graph {
 public:
  Graph() = default;

  /// Rejects self-loops, duplicate edges (in either orientation) and out-of-range ids.
  Graph(int n, std::vector<Edge> edges) : n_(n), adj_(static_cast<std::size_t>(n) + 1) {
    if (n < 0) throw PreconditionError("negative vertex count");
    for (auto& [u, v] : edges) {
      if (u < 1 || u > n || v < 1 || v > n) {
        throw PreconditionError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") outside 1.." +
                                std::to_string(n));
      }
      if (u == v) throw PreconditionError("self-loop at vertex " + std::to_string(u));
      if (u > v) std::swap(u, v);
    }
    std::ranges::sort(edges);
    if (auto dup = std::ranges::adjacent_find(edges); dup != edges.end()) {
      throw PreconditionError("duplicate edge (" + std::to_string(dup->first) + "," + std::to_string(dup->second) +
                              ")");
    }
    for (auto [u, v] : edges) {
      adj_[static_cast<std::size_t>(u)].push_back(v);
      adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& list : adj_) std::ranges::sort(list);
    edges_ = std::move(edges);
  }

  int order() const { return n_; }
  int size() const { return static_cast<int>(edges_.size()); }

  std::span<const Vertex> neighbors(Vertex v) const { return adj_[static_cast<std::size_t>(v)]; }
  int degree(Vertex v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }
  bool adjacent(Vertex u, Vertex v) const {
    if (u < 1 || u > n_ || v < 1 || v > n_) return false;
    return std::ranges::binary_search(adj_[static_cast<std::size_t>(u)], v);
  }

  /// Edges normalized to u < v, sorted lexicographically.
  const std::vector<Edge>& edges() const { return edges_; }

  auto vertices() const { return std::views::iota(Vertex{1}, n_ + 1); }

  Graph with_edge(Vertex u, Vertex v) const {
    auto e = edges_;
    e.emplace_back(u, v);
    return Graph(n_, std::move(e));
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  int n_ = 0;
  std::vector<std::vector<Vertex>> adj_{1};
  std::vector<Edge> edges_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline bool parse_int(const std::string& tok, long long& out) {
  if (tok.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == tok.size();
}

}  // namespace detail

/// Parses the edge-list format:
///   # comment
///   p <n> <m>
///   e <u> <v>     (exactly m lines)
inline Graph parse_graph(std::istream& in) {
  std::string line;
  int line_no = 0;
  long long n = -1;
  long long m = -1;
  std::vector<Edge> edges;
  auto fail = [&](const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::istringstream ls{std::string(body)};
    std::string tag;
    std::string a;
    std::string b;
    std::string extra;
    ls >> tag >> a >> b;
    if (ls >> extra) fail("trailing tokens");
    long long x = 0;
    long long y = 0;
    if (!detail::parse_int(a, x) || !detail::parse_int(b, y)) fail("expected two integers");
    if (tag == "p") {
      if (n >= 0) fail("duplicate header");
      if (x <= 0) fail("vertex count must be positive");
      if (y < 0) fail("negative edge count");
      n = x;
      m = y;
      edges.reserve(static_cast<std::size_t>(std::min<long long>(m, 1 << 20)));
    } else if (tag == "e") {
      if (n < 0) fail("edge before header");
      if (x < 1 || x > n || y < 1 || y > n) fail("vertex id out of range 1.." + std::to_string(n));
      if (x == y) fail("self-loop at vertex " + std::to_string(x));
      if (static_cast<long long>(edges.size()) >= m) fail("more edge lines than declared");
      edges.emplace_back(static_cast<Vertex>(x), static_cast<Vertex>(y));
    } else {
      fail("unknown line tag '" + tag + "'");
    }
  }
  if (n < 0) throw ParseError("missing 'p <n> <m>' header");
  if (static_cast<long long>(edges.size()) != m) {
    throw ParseError("declared " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
  }
  try {
    return Graph(static_cast<int>(n), std::move(edges));
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

inline Graph parse_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_graph(in);
}

inline std::string to_text(const Graph& g) {
  std::ostringstream out;
  out << "p " << g.order() << ' ' << g.size() << '\n';
  for (auto [u, v] : g.edges()) out << "e " << u << ' ' << v << '\n';
  return out.str();
}

/// Per-vertex degree inside G[s]; index 0 unused, vertices outside s report 0.
inline std::vector<int> degrees_within(const Graph& g, const VertexSet& s) {
  std::vector<int> deg(static_cast<std::size_t>(g.order()) + 1, 0);
  s.for_each([&](Vertex v) {
    for (Vertex u : g.neighbors(v)) {
      if (s.contains(u)) ++deg[static_cast<std::size_t>(v)];
    }
  });
  return deg;
}

struct InducedSubgraph {
  Graph graph;
  std::vector<Vertex> original;  // original[new id] = old id; original[0] unused
};

inline InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& s) {
  std::vector<Vertex> original{0};
  std::vector<Vertex> renamed(static_cast<std::size_t>(g.order()) + 1, 0);
  s.for_each([&](Vertex v) {
    renamed[static_cast<std::size_t>(v)] = static_cast<Vertex>(original.size());
    original.push_back(v);
  });
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges()) {
    if (s.contains(u) && s.contains(v)) edges.emplace_back(renamed[static_cast<std::size_t>(u)], renamed[static_cast<std::size_t>(v)]);
  }
  const int n = static_cast<int>(original.size()) - 1;
  return {Graph(n, std::move(edges)), std::move(original)};
}

}  // namespace starpack
