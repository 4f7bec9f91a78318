#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "starpack/error.hpp"
#include "starpack/graph.hpp"
#include "starpack/packing.hpp"

namespace starpack {

struct SeqConfig {
  long long max_nodes = 50'000'000;
  bool prune = true;  // false disables every bound; only for cross-checking
};

struct SeqResult {
  Packing packing;
  long long nodes = 0;
};

/// Covers every non-isolated vertex with stars of unbounded size.
///
/// Greedy maximal matching in ascending order, then every unmatched non-isolated vertex hangs
/// off its lowest matched neighbor. A matching edge with hangers on both ends is split so each
/// end centers its own star.
inline Packing spanning_star_forest(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.order());
  std::vector<Vertex> mate(n + 1, 0);
  for (Vertex u : g.vertices()) {
    if (mate[static_cast<std::size_t>(u)] != 0) continue;
    for (Vertex w : g.neighbors(u)) {
      if (mate[static_cast<std::size_t>(w)] == 0) {
        mate[static_cast<std::size_t>(u)] = w;
        mate[static_cast<std::size_t>(w)] = u;
        break;
      }
    }
  }
  std::vector<std::vector<Vertex>> hang(n + 1);
  for (Vertex u : g.vertices()) {
    if (mate[static_cast<std::size_t>(u)] == 0 && g.degree(u) > 0) {
      hang[static_cast<std::size_t>(g.neighbors(u).front())].push_back(u);
    }
  }
  Packing p;
  for (Vertex a : g.vertices()) {
    const Vertex b = mate[static_cast<std::size_t>(a)];
    if (b == 0 || b < a) continue;
    auto& ha = hang[static_cast<std::size_t>(a)];
    auto& hb = hang[static_cast<std::size_t>(b)];
    if (!ha.empty() && !hb.empty()) {
      p.stars.emplace_back(a, ha);
      p.stars.emplace_back(b, hb);
    } else if (!hb.empty()) {
      hb.push_back(a);
      p.stars.emplace_back(b, hb);
    } else {
      ha.push_back(b);
      p.stars.emplace_back(a, ha);
    }
  }
  std::ranges::sort(p.stars);
  return p;
}

namespace detail {

// Branch and bound over 64-bit vertex masks (bit v-1 is vertex v).
class SeqSearch {
 public:
  SeqSearch(const Graph& g, int k, const SeqConfig& cfg) : g_(g), k_(k), cfg_(cfg), nbr_(g.order() + 1, 0) {
    for (auto [u, v] : g.edges()) {
      nbr_[static_cast<std::size_t>(u)] |= bit(v);
      nbr_[static_cast<std::size_t>(v)] |= bit(u);
    }
  }

  SeqResult run() {
    const std::uint64_t all = g_.order() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g_.order()) - 1;
    root_bound_ = bound(all);
    go(all, 0);
    SeqResult r;
    r.nodes = nodes_;
    for (const auto& [c, sats] : best_) r.packing.stars.emplace_back(c, masked(sats));
    std::ranges::sort(r.packing.stars);
    return r;
  }

 private:
  static std::uint64_t bit(Vertex v) { return std::uint64_t{1} << (v - 1); }
  static std::vector<Vertex> masked(std::uint64_t m) {
    std::vector<Vertex> out;
    for (; m != 0; m &= m - 1) out.push_back(std::countr_zero(m) + 1);
    return out;
  }
  std::uint64_t around(Vertex v, std::uint64_t u) const { return nbr_[static_cast<std::size_t>(v)] & u; }

  int bound(std::uint64_t u) const {
    int live = 0;
    int matched = 0;
    std::uint64_t free = u;
    for (std::uint64_t m = u; m != 0; m &= m - 1) {
      const Vertex v = std::countr_zero(m) + 1;
      if (around(v, u) != 0) ++live;
      if (free & bit(v)) {
        const std::uint64_t cand = around(v, free);
        if (cand != 0) {
          free &= ~(bit(v) | (cand & (~cand + 1)));
          ++matched;
        }
      }
    }
    if (k_ == kUnbounded) return live;
    const long long by_matching = 2LL * matched * (k_ + 1);
    return static_cast<int>(std::min<long long>(live, by_matching));
  }

  // Calls f on every subset of `pool` with size in [lo, hi], larger sets first, each size in
  // lexicographic order of the chosen bit positions. Stops when f returns false.
  template <class F>
  static bool subsets_desc(std::uint64_t pool, int lo, int hi, F&& f) {
    std::vector<std::uint64_t> bits;
    for (std::uint64_t m = pool; m != 0; m &= m - 1) bits.push_back(m & (~m + 1));
    const int d = static_cast<int>(bits.size());
    hi = std::min(hi, d);
    std::vector<int> idx;
    for (int s = hi; s >= lo; --s) {
      if (s == 0) {
        if (!f(std::uint64_t{0})) return false;
        continue;
      }
      idx.resize(static_cast<std::size_t>(s));
      for (int i = 0; i < s; ++i) idx[static_cast<std::size_t>(i)] = i;
      for (;;) {
        std::uint64_t pick = 0;
        for (int i : idx) pick |= bits[static_cast<std::size_t>(i)];
        if (!f(pick)) return false;
        int i = s - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == d - s + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < s; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
    return true;
  }

  // Returns false once the search can stop (optimum certified).
  bool go(std::uint64_t u, int cur) {
    if (++nodes_ > cfg_.max_nodes) {
      throw CapExceeded("sequential branch and bound exceeded " + std::to_string(cfg_.max_nodes) + " nodes");
    }
    if (u == 0) {
      if (cur > best_cov_) {
        best_cov_ = cur;
        best_ = stack_;
      }
      return !(cfg_.prune && best_cov_ == root_bound_);
    }
    if (cfg_.prune && cur + bound(u) <= best_cov_) return true;

    const Vertex v = std::countr_zero(u) + 1;
    const std::uint64_t rest = u & ~bit(v);
    const std::uint64_t nv = around(v, rest);
    const int cap = k_ == kUnbounded ? 64 : k_;

    bool keep = subsets_desc(nv, 1, cap, [&](std::uint64_t sats) {
      stack_.emplace_back(v, sats);
      const bool r = go(rest & ~sats, cur + 1 + std::popcount(sats));
      stack_.pop_back();
      return r;
    });
    if (!keep) return false;

    for (std::uint64_t cs = nv; cs != 0; cs &= cs - 1) {
      const Vertex c = std::countr_zero(cs) + 1;
      const std::uint64_t rest_c = rest & ~bit(c);
      // a 1-star {c; v} is the same vertex set as {v; c}, already tried above
      keep = subsets_desc(around(c, rest_c), 1, cap - 1, [&](std::uint64_t extra) {
        stack_.emplace_back(c, extra | bit(v));
        const bool r = go(rest_c & ~extra, cur + 2 + std::popcount(extra));
        stack_.pop_back();
        return r;
      });
      if (!keep) return false;
    }
    return go(rest, cur);
  }

  const Graph& g_;
  int k_;
  SeqConfig cfg_;
  std::vector<std::uint64_t> nbr_;
  int root_bound_ = 0;
  int best_cov_ = -1;
  long long nodes_ = 0;
  std::vector<std::pair<Vertex, std::uint64_t>> stack_;
  std::vector<std::pair<Vertex, std::uint64_t>> best_;
};

}  // namespace detail

/// Maximum-coverage packing with star sizes 1..k, certified by exhaustive branch and bound.
/// Unbounded k goes through spanning_star_forest, which is optimal there.
inline SeqResult sequential_exact_search(const Graph& g, int k, const SeqConfig& cfg = {}) {
  Constraint::seq(k);
  if (g.order() < 1) throw PreconditionError("sequential packing needs n >= 1");
  if (k == kUnbounded) return {spanning_star_forest(g), 0};
  if (g.order() > 64) throw CapExceeded("exact sequential search limited to n <= 64");
  return detail::SeqSearch(g, k, cfg).run();
}

inline Packing solve_sequential_exact(const Graph& g, int k, const SeqConfig& cfg = {}) {
  return sequential_exact_search(g, k, cfg).packing;
}

struct CriticalReport {
  VertexSet v0;
  std::vector<std::pair<Vertex, std::vector<int>>> critical;  // uncovered v -> star indices K(v)
  std::vector<int> union_k;
  std::vector<std::string> diagnostics;
};

/// For every vertex left uncovered by q0, the closure of k-stars reachable by alternately stepping
/// to adjacent k-star centers and to the satellites of those stars. Neighbors that are not
/// k-star centers contradict optimality of q0 and are reported, not fatal.
inline CriticalReport critical_closure(const Graph& g, const Packing& q0, int k) {
  const auto n = static_cast<std::size_t>(g.order());
  std::vector<int> star_of(n + 1, -1);
  std::vector<char> is_center(n + 1, 0);
  for (std::size_t i = 0; i < q0.stars.size(); ++i) {
    const auto& s = q0.stars[i];
    star_of[static_cast<std::size_t>(s.center)] = static_cast<int>(i);
    is_center[static_cast<std::size_t>(s.center)] = 1;
    for (Vertex x : s.satellites) star_of[static_cast<std::size_t>(x)] = static_cast<int>(i);
  }
  auto k_star_center = [&](Vertex y) {
    const auto yi = static_cast<std::size_t>(y);
    return is_center[yi] && k != kUnbounded && q0.stars[static_cast<std::size_t>(star_of[yi])].size() == k;
  };

  CriticalReport r;
  r.v0 = VertexSet(g.order());
  std::vector<char> in_union(q0.stars.size(), 0);
  for (Vertex v : g.vertices()) {
    if (star_of[static_cast<std::size_t>(v)] >= 0) continue;
    r.v0.insert(v);
    std::vector<int> kv;
    std::vector<char> taken(q0.stars.size(), 0);
    std::vector<Vertex> frontier{v};
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      const Vertex x = frontier[head];
      const int home = star_of[static_cast<std::size_t>(x)];
      for (Vertex y : g.neighbors(x)) {
        if (home >= 0 && q0.stars[static_cast<std::size_t>(home)].center == y) continue;
        if (!k_star_center(y)) {
          const std::string who = home < 0 ? "uncovered vertex " : "satellite ";
          r.diagnostics.push_back(who + std::to_string(x) + " adjacent to " + std::to_string(y) +
                                  ", which is not a k-star center (closure of " + std::to_string(v) + ")");
          continue;
        }
        const int si = star_of[static_cast<std::size_t>(y)];
        if (taken[static_cast<std::size_t>(si)]) continue;
        taken[static_cast<std::size_t>(si)] = 1;
        kv.push_back(si);
        for (Vertex s : q0.stars[static_cast<std::size_t>(si)].satellites) frontier.push_back(s);
      }
    }
    std::ranges::sort(kv);
    for (int si : kv) in_union[static_cast<std::size_t>(si)] = 1;
    r.critical.emplace_back(v, std::move(kv));
  }
  for (std::size_t i = 0; i < in_union.size(); ++i) {
    if (in_union[i]) r.union_k.push_back(static_cast<int>(i));
  }
  return r;
}

}  // namespace starpack
