#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "starpack/error.hpp"
#include "starpack/graph.hpp"
#include "starpack/packing.hpp"

namespace starpack {

/// SplitMix64: state advances by 0x9E3779B97F4A7C15, output is the usual two-multiply finalizer.
/// Doubles take the top 53 bits; bounded integers use rejection to stay unbiased.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw PreconditionError("empty range");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform in [lo, hi].
  int between(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

 private:
  std::uint64_t state_;
};

enum class Family { Gnp, RandomRegular, Bipartite, SmallExhaustive, PullGadget, ReviseGadget };

/// Parameters by family:
///   Gnp             n, p
///   RandomRegular   n, d
///   Bipartite       n (left), n2 (right), p
///   SmallExhaustive n (1..8), index into the connected labeled graphs in edge-mask order
///   PullGadget      k, which (1, 2 or 8; 8 needs k = 2)
///   ReviseGadget    k, t, which (7, 8 or 9; 7 needs t >= 3)
struct InstanceSpec {
  Family family = Family::Gnp;
  int n = 0;
  int n2 = 0;
  int d = 0;
  double p = 0.0;
  int k = 0;
  int t = 0;
  int which = 0;
  long long index = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Gnp: return "gnp";
    case Family::RandomRegular: return "regular";
    case Family::Bipartite: return "bipartite";
    case Family::SmallExhaustive: return "small";
    case Family::PullGadget: return "pull-gadget";
    case Family::ReviseGadget: return "revise-gadget";
  }
  return "?";
}

inline Family family_from_name(const std::string& s) {
  for (Family f : {Family::Gnp, Family::RandomRegular, Family::Bipartite, Family::SmallExhaustive,
                   Family::PullGadget, Family::ReviseGadget}) {
    if (s == family_name(f)) return f;
  }
  throw ParseError("unknown family '" + s + "'");
}

inline void validate_spec(const InstanceSpec& s) {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw PreconditionError(what);
  };
  switch (s.family) {
    case Family::Gnp:
      need(s.n >= 1, "gnp: n must be positive");
      need(s.p >= 0.0 && s.p <= 1.0, "gnp: p must lie in [0,1]");
      break;
    case Family::RandomRegular:
      need(s.n >= 1, "regular: n must be positive");
      need(s.d >= 0 && s.d < s.n, "regular: need 0 <= d < n");
      need((static_cast<long long>(s.n) * s.d) % 2 == 0, "regular: d*n must be even");
      break;
    case Family::Bipartite:
      need(s.n >= 1 && s.n2 >= 1, "bipartite: both sides must be non-empty");
      need(s.p >= 0.0 && s.p <= 1.0, "bipartite: p must lie in [0,1]");
      break;
    case Family::SmallExhaustive:
      need(s.n >= 1 && s.n <= 8, "small: need 1 <= n <= 8");
      need(s.index >= 0, "small: negative index");
      break;
    case Family::PullGadget:
      need(s.k >= 2, "pull-gadget: need k >= 2");
      need(s.which == 1 || s.which == 2 || s.which == 8, "pull-gadget: which must be 1, 2 or 8");
      need(s.which != 8 || s.k == 2, "pull-gadget 8 exists only for k = 2");
      break;
    case Family::ReviseGadget:
      need(s.t >= 2, "revise-gadget: need t >= 2");
      need(s.k > s.t, "revise-gadget: need k > t");
      need(s.which == 7 || s.which == 8 || s.which == 9, "revise-gadget: which must be 7, 8 or 9");
      need(s.which != 7 || s.t >= 3, "revise-gadget 7 needs t >= 3");
      break;
  }
}

inline Json to_json(const InstanceSpec& s) {
  Json j;
  j["family"] = family_name(s.family);
  switch (s.family) {
    case Family::Gnp:
      j["n"] = s.n;
      j["p"] = s.p;
      break;
    case Family::RandomRegular:
      j["n"] = s.n;
      j["d"] = s.d;
      break;
    case Family::Bipartite:
      j["n"] = s.n;
      j["n2"] = s.n2;
      j["p"] = s.p;
      break;
    case Family::SmallExhaustive:
      j["n"] = s.n;
      j["index"] = s.index;
      break;
    case Family::PullGadget:
      j["k"] = s.k;
      j["which"] = s.which;
      break;
    case Family::ReviseGadget:
      j["k"] = s.k;
      j["t"] = s.t;
      j["which"] = s.which;
      break;
  }
  j["seed"] = s.seed;
  return j;
}

inline InstanceSpec spec_from_json(const Json& j) {
  try {
    InstanceSpec s;
    s.family = family_from_name(j.at("family").get<std::string>());
    s.n = j.value("n", 0);
    s.n2 = j.value("n2", 0);
    s.d = j.value("d", 0);
    s.p = j.value("p", 0.0);
    s.k = j.value("k", 0);
    s.t = j.value("t", 0);
    s.which = j.value("which", 0);
    s.index = j.value("index", 0LL);
    s.seed = j.value("seed", std::uint64_t{0});
    validate_spec(s);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("instance spec JSON: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("instance spec JSON: ") + e.what());
  }
}

/// Upper-triangle pairs (u, v), u < v, in the order used for edge masks: (1,2), (1,3), (2,3), (1,4), ...
inline std::vector<Edge> triangle_pairs(int n) {
  std::vector<Edge> pairs;
  for (Vertex v = 2; v <= n; ++v) {
    for (Vertex u = 1; u < v; ++u) pairs.emplace_back(u, v);
  }
  return pairs;
}

namespace detail {

inline bool mask_connected(int n, const std::vector<std::uint32_t>& adj) {
  std::uint32_t seen = 1;
  std::uint32_t frontier = 1;
  while (frontier != 0) {
    std::uint32_t next = 0;
    for (std::uint32_t f = frontier; f != 0; f &= f - 1) next |= adj[static_cast<std::size_t>(std::countr_zero(f))];
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == (std::uint32_t{1} << n) - 1;
}

}  // namespace detail

/// Calls f(graph) for every connected labeled graph on n vertices, in increasing edge-mask
/// order over triangle_pairs(n). f may return false to stop early (void is also fine).
template <class F>
void for_each_connected_graph(int n, F&& f) {
  if (n < 1 || n > 8) throw PreconditionError("exhaustive enumeration needs 1 <= n <= 8");
  const auto pairs = triangle_pairs(n);
  const std::uint64_t limit = std::uint64_t{1} << pairs.size();
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(n));
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    if (std::popcount(mask) < n - 1) continue;
    std::ranges::fill(adj, 0U);
    for (std::uint64_t m = mask; m != 0; m &= m - 1) {
      const auto [u, v] = pairs[static_cast<std::size_t>(std::countr_zero(m))];
      adj[static_cast<std::size_t>(u - 1)] |= 1U << (v - 1);
      adj[static_cast<std::size_t>(v - 1)] |= 1U << (u - 1);
    }
    if (!detail::mask_connected(n, adj)) continue;
    std::vector<Edge> edges;
    for (std::uint64_t m = mask; m != 0; m &= m - 1) edges.push_back(pairs[static_cast<std::size_t>(std::countr_zero(m))]);
    if constexpr (std::is_same_v<std::invoke_result_t<F&, Graph>, bool>) {
      if (!f(Graph(n, std::move(edges)))) return;
    } else {
      f(Graph(n, std::move(edges)));
    }
  }
}

/// Number of connected labeled graphs on n vertices:
/// c(n) = 2^C(n,2) - sum_{j=1}^{n-1} C(n-1, j-1) c(j) 2^C(n-j,2).
inline long long count_labeled_connected(int n) {
  if (n < 1 || n > 10) throw PreconditionError("count_labeled_connected needs 1 <= n <= 10");
  auto binom = [](int a, int b) {
    long long r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  auto all = [](int m) { return 1LL << (m * (m - 1) / 2); };
  std::vector<long long> c(static_cast<std::size_t>(n) + 1, 0);
  for (int m = 1; m <= n; ++m) {
    long long v = all(m);
    for (int j = 1; j < m; ++j) v -= binom(m - 1, j - 1) * c[static_cast<std::size_t>(j)] * all(m - j);
    c[static_cast<std::size_t>(m)] = v;
  }
  return c[static_cast<std::size_t>(n)];
}

namespace detail {

// Incremental edge list builder handing out consecutive vertex ids.
struct Builder {
  int n = 0;
  std::vector<Edge> edges;

  Vertex add() { return ++n; }
  std::vector<Vertex> add(int count) {
    std::vector<Vertex> out;
    for (int i = 0; i < count; ++i) out.push_back(add());
    return out;
  }
  void join(Vertex u, Vertex v) { edges.emplace_back(u, v); }
  void join_all(Vertex c, const std::vector<Vertex>& leaves) {
    for (Vertex x : leaves) join(c, x);
  }
  Graph build() { return Graph(n, std::move(edges)); }
};

// The first Collect scan produces a k-star at w = 1 holding v and a, and a star at y = 2
// holding x. Outside the packing u and x each have k-1 private leaves; v-u and a-x are the
// cross edges. Variant 1 gives y's star k+1 satellites, variant 2 gives it k.
inline Graph pull_gadget_12(int k, bool big) {
  Builder b;
  const Vertex w = b.add();
  const Vertex y = b.add();
  const Vertex v = b.add();
  const Vertex a = b.add();
  const auto others = b.add(k - 2);
  const Vertex x = b.add();
  const auto ys = b.add(big ? k : k - 1);
  const Vertex u = b.add();
  const auto u_leaves = b.add(k - 1);
  const auto x_leaves = b.add(k - 1);
  b.join(w, v);
  b.join(w, a);
  b.join_all(w, others);
  b.join(y, x);
  b.join_all(y, ys);
  b.join_all(u, u_leaves);
  b.join_all(x, x_leaves);
  b.join(v, u);
  b.join(a, x);
  return b.build();
}

// Three 2-stars {1; v, r}, {2; y, z}, {3; w, s}. Freeing all three lets u take v, x take y,
// and w take z, r and 3.
inline Graph pull_gadget_8() {
  Builder b;
  const Vertex c1 = b.add();
  const Vertex c2 = b.add();
  const Vertex c3 = b.add();
  const Vertex v = b.add();
  const Vertex r = b.add();
  const Vertex y = b.add();
  const Vertex z = b.add();
  const Vertex w = b.add();
  const Vertex s = b.add();
  const Vertex u = b.add();
  const Vertex u1 = b.add();
  const Vertex x = b.add();
  const Vertex x1 = b.add();
  b.join_all(c1, {v, r});
  b.join_all(c2, {y, z});
  b.join_all(c3, {w, s});
  b.join(v, u);
  b.join(u, u1);
  b.join(y, x);
  b.join(x, x1);
  b.join(w, z);
  b.join(w, r);
  return b.build();
}

inline Graph revise_gadget(int k, int t, int which) {
  Builder b;
  if (which == 7) {
    const Vertex c = b.add();
    const auto leaves = b.add(t);
    b.join_all(c, leaves);
    b.join(leaves[0], leaves[1]);
  } else if (which == 8) {
    const Vertex c1 = b.add();
    const auto xs = b.add(t);
    const Vertex c2 = b.add();
    b.join_all(c1, xs);
    if (t >= 3) {
      const Vertex y1 = b.add();
      b.join(c2, y1);
      b.join(xs[0], c2);
    } else {
      const auto ys = b.add(3);
      b.join_all(c2, ys);
      b.join(xs[0], ys[0]);
    }
  } else {
    const Vertex c = b.add();
    const Vertex d = b.add();
    const Vertex a = b.add();
    const auto as = b.add(t);
    const Vertex bb = b.add();
    const auto bs = b.add(t);
    b.join(c, d);
    b.join_all(a, as);
    b.join_all(bb, bs);
    b.join(a, c);
    b.join(bb, d);
  }
  (void)k;
  return b.build();
}

}  // namespace detail

inline Graph generate(const InstanceSpec& s) {
  validate_spec(s);
  switch (s.family) {
    case Family::Gnp: {
      SplitMix64 rng(s.seed);
      std::vector<Edge> edges;
      for (Vertex u = 1; u <= s.n; ++u) {
        for (Vertex v = u + 1; v <= s.n; ++v) {
          if (rng.uniform() < s.p) edges.emplace_back(u, v);
        }
      }
      return Graph(s.n, std::move(edges));
    }
    case Family::Bipartite: {
      SplitMix64 rng(s.seed);
      std::vector<Edge> edges;
      for (Vertex u = 1; u <= s.n; ++u) {
        for (Vertex v = s.n + 1; v <= s.n + s.n2; ++v) {
          if (rng.uniform() < s.p) edges.emplace_back(u, v);
        }
      }
      return Graph(s.n + s.n2, std::move(edges));
    }
    case Family::RandomRegular: {
      SplitMix64 rng(s.seed);
      std::vector<Vertex> points;
      for (Vertex v = 1; v <= s.n; ++v) {
        for (int i = 0; i < s.d; ++i) points.push_back(v);
      }
      for (int attempt = 0; attempt < 10000; ++attempt) {
        for (std::size_t i = points.size(); i > 1; --i) std::swap(points[i - 1], points[rng.below(i)]);
        std::vector<Edge> edges;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < points.size(); i += 2) {
          Vertex u = points[i];
          Vertex v = points[i + 1];
          if (u == v) {
            ok = false;
            break;
          }
          edges.emplace_back(std::min(u, v), std::max(u, v));
        }
        if (!ok) continue;
        std::ranges::sort(edges);
        if (std::ranges::adjacent_find(edges) != edges.end()) continue;
        return Graph(s.n, std::move(edges));
      }
      throw CapExceeded("regular: pairing model kept colliding");
    }
    case Family::SmallExhaustive: {
      std::optional<Graph> found;
      long long i = 0;
      for_each_connected_graph(s.n, [&](Graph g) {
        if (i++ == s.index) {
          found = std::move(g);
          return false;
        }
        return true;
      });
      if (!found) throw PreconditionError("small: index past the last connected graph");
      return *found;
    }
    case Family::PullGadget:
      return s.which == 8 ? detail::pull_gadget_8() : detail::pull_gadget_12(s.k, s.which == 1);
    case Family::ReviseGadget:
      return detail::revise_gadget(s.k, s.t, s.which);
  }
  throw PreconditionError("unknown family");
}

}  // namespace starpack
