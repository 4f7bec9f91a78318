#pragma once

#include <bit>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "starpack/error.hpp"
#include "starpack/graph.hpp"
#include "starpack/packing.hpp"
#include "starpack/rational.hpp"

namespace starpack {

struct OracleConfig {
  int max_n = 14;
};

struct OracleResult {
  int opt_coverage = 0;
  Packing witness;
  long long nodes = 0;
};

namespace detail {

using Mask = std::uint32_t;

inline Mask bit_of(Vertex v) { return Mask{1} << (v - 1); }

inline std::vector<Mask> neighbor_masks(const Graph& g) {
  std::vector<Mask> nbr(static_cast<std::size_t>(g.order()) + 1, 0);
  for (auto [u, v] : g.edges()) {
    nbr[static_cast<std::size_t>(u)] |= bit_of(v);
    nbr[static_cast<std::size_t>(v)] |= bit_of(u);
  }
  return nbr;
}

inline std::vector<char> allowed_sizes(int n, const Constraint& c) {
  std::vector<char> ok(static_cast<std::size_t>(n) + 1, 0);
  for (int ell = 1; ell <= n; ++ell) ok[static_cast<std::size_t>(ell)] = c.allows(ell) ? 1 : 0;
  return ok;
}

inline std::vector<Vertex> mask_vertices(Mask m) {
  std::vector<Vertex> out;
  for (; m != 0; m &= m - 1) out.push_back(std::countr_zero(m) + 1);
  return out;
}

inline void check_oracle_size(const Graph& g, const OracleConfig& cfg) {
  if (g.order() > cfg.max_n) {
    throw CapExceeded("oracle limited to n <= " + std::to_string(cfg.max_n) + ", got n = " + std::to_string(g.order()));
  }
  if (g.order() > 30) throw CapExceeded("oracle cannot exceed n = 30");
}

// f(S) = best coverage using only vertices of S; recursion on the lowest vertex of S.
class SubsetDp {
 public:
  SubsetDp(const Graph& g, const Constraint& c)
      : nbr_(neighbor_masks(g)), ok_(allowed_sizes(g.order(), c)), memo_(std::size_t{1} << g.order(), -1) {}

  int solve(Mask s) {
    if (s == 0) return 0;
    auto& slot = memo_[s];
    if (slot >= 0) return slot;
    ++nodes_;
    const Vertex v = std::countr_zero(s) + 1;
    const Mask rest = s & ~bit_of(v);
    const int cap = std::popcount(s);
    int best = solve(rest);
    if (best < cap) {
      for_each_star(v, rest, [&](Mask star) {
        if (best == cap) return;
        const int got = std::popcount(star) + solve(s & ~star);
        if (got > best) best = got;
      });
    }
    memo_[s] = static_cast<std::int8_t>(best);
    return best;
  }

  Packing witness(Mask s) {
    Packing p;
    while (s != 0) {
      const int target = solve(s);
      const Vertex v = std::countr_zero(s) + 1;
      const Mask rest = s & ~bit_of(v);
      if (solve(rest) == target) {
        s = rest;
        continue;
      }
      bool found = false;
      for_each_star_with_center(v, rest, [&](Vertex center, Mask star) {
        if (found) return;
        if (std::popcount(star) + solve(s & ~star) == target) {
          found = true;
          p.stars.emplace_back(center, mask_vertices(star & ~bit_of(center)));
          s &= ~star;
        }
      });
      if (!found) throw Error("oracle witness reconstruction failed");
    }
    return p;
  }

  long long nodes() const { return nodes_; }

 private:
  template <class F>
  void for_each_star(Vertex v, Mask rest, F&& f) {
    for_each_star_with_center(v, rest, [&](Vertex, Mask star) { f(star); });
  }

  // Every admissible star inside rest ∪ {v} that contains v, as (center, vertex mask).
  template <class F>
  void for_each_star_with_center(Vertex v, Mask rest, F&& f) {
    const Mask vb = bit_of(v);
    const Mask around = nbr_[static_cast<std::size_t>(v)] & rest;
    for (Mask sub = around; sub != 0; sub = (sub - 1) & around) {
      if (ok_[static_cast<std::size_t>(std::popcount(sub))]) f(v, sub | vb);
    }
    for (Mask cs = around; cs != 0; cs &= cs - 1) {
      const Vertex c = std::countr_zero(cs) + 1;
      const Mask cb = bit_of(c);
      const Mask others = nbr_[static_cast<std::size_t>(c)] & rest & ~cb;
      for (Mask sub = others;; sub = (sub - 1) & others) {
        if (ok_[static_cast<std::size_t>(std::popcount(sub) + 1)]) f(c, sub | vb | cb);
        if (sub == 0) break;
      }
    }
  }

  std::vector<Mask> nbr_;
  std::vector<char> ok_;
  std::vector<std::int8_t> memo_;
  long long nodes_ = 0;
};

}  // namespace detail

/// Exact maximum coverage under c by memoized subset dynamic programming.
inline OracleResult oracle_max_packing(const Graph& g, const Constraint& c, const OracleConfig& cfg = {}) {
  c.check();
  detail::check_oracle_size(g, cfg);
  detail::SubsetDp dp(g, c);
  const detail::Mask all = g.order() == 0 ? 0 : static_cast<detail::Mask>((std::uint64_t{1} << g.order()) - 1);
  OracleResult r;
  r.opt_coverage = dp.solve(all);
  r.witness = dp.witness(all);
  r.nodes = dp.nodes();
  return r;
}

/// Same optimum by plain recursion over a precomputed list of every admissible star, without
/// memoization. Exponential; meant for cross-checking the DP on small graphs.
inline int enumerate_max_packing(const Graph& g, const Constraint& c, const OracleConfig& cfg = {}) {
  c.check();
  detail::check_oracle_size(g, cfg);
  using detail::Mask;
  const int n = g.order();
  // stars_with[v]: masks of admissible stars whose lowest vertex is v
  std::vector<std::vector<Mask>> stars_with(static_cast<std::size_t>(n) + 1);
  for (Vertex center : g.vertices()) {
    const auto nb = g.neighbors(center);
    const std::size_t d = nb.size();
    if (d >= 31) throw CapExceeded("degree too large for enumeration");
    for (std::uint64_t pick = 1; pick < (std::uint64_t{1} << d); ++pick) {
      const int ell = std::popcount(pick);
      if (!c.allows(ell)) continue;
      Mask star = detail::bit_of(center);
      for (std::size_t i = 0; i < d; ++i) {
        if ((pick >> i) & 1U) star |= detail::bit_of(nb[i]);
      }
      stars_with[static_cast<std::size_t>(std::countr_zero(star) + 1)].push_back(star);
    }
  }
  const Mask all = n == 0 ? 0 : static_cast<Mask>((std::uint64_t{1} << n) - 1);
  auto go = [&](auto& self, Mask free) -> int {
    if (free == 0) return 0;
    const Vertex v = std::countr_zero(free) + 1;
    int best = self(self, free & ~detail::bit_of(v));
    for (Mask star : stars_with[static_cast<std::size_t>(v)]) {
      if ((star & free) == star) best = std::max(best, std::popcount(star) + self(self, free & ~star));
    }
    return best;
  };
  return go(go, all);
}

/// Reshapes the k-stars of an optimal sequential packing q0 so that every vertex it leaves
/// uncovered is also left uncovered by qstar, keeping coverage and every star size.
///
/// For each offending v (lowest id first) a search walks from v to the partner of v in its
/// qstar star, which must center a star of q0, then to that star's satellites, and so on,
/// until it reaches a satellite u that qstar leaves uncovered. Satellites are then shifted
/// one step along the path: v joins the first star, its displaced satellite joins the next,
/// and u drops out.
inline Packing lemma8_normalize(const Graph& g, const Packing& q0, const Packing& qstar, int k) {
  (void)k;
  const int n = g.order();
  SolveState state = rebuild_state(g, q0);
  const VertexSet star_cover = qstar.covered_set(n);
  std::vector<Vertex> star_owner(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& s : qstar.stars) {
    star_owner[static_cast<std::size_t>(s.center)] = s.center;
    for (Vertex x : s.satellites) star_owner[static_cast<std::size_t>(x)] = s.center;
  }
  // Vertices adjacent to x inside x's qstar star.
  auto partners = [&](Vertex x) {
    std::vector<Vertex> out;
    const Vertex c = star_owner[static_cast<std::size_t>(x)];
    if (c != x) {
      out.push_back(c);
    } else {
      for (Vertex y : g.neighbors(x)) {
        if (star_owner[static_cast<std::size_t>(y)] == x) out.push_back(y);
      }
    }
    return out;
  };

  for (;;) {
    Vertex v = 0;
    for (Vertex x : g.vertices()) {
      if (!state.covered(x) && star_cover.contains(x)) {
        v = x;
        break;
      }
    }
    if (v == 0) break;

    std::vector<Vertex> reached_from(static_cast<std::size_t>(n) + 1, 0);  // center -> vertex that reached it
    std::vector<Vertex> via(static_cast<std::size_t>(n) + 1, 0);           // satellite -> center it was found in
    std::vector<char> labeled(static_cast<std::size_t>(n) + 1, 0);
    labeled[static_cast<std::size_t>(v)] = 1;
    std::deque<Vertex> queue{v};
    Vertex u = 0;
    while (!queue.empty() && u == 0) {
      const Vertex x = queue.front();
      queue.pop_front();
      for (Vertex c : partners(x)) {
        if (!state.is_center(c)) {
          throw PreconditionError("normalize: partner " + std::to_string(c) + " of " + std::to_string(x) +
                                  " is not a center; q0 is not optimal");
        }
        if (reached_from[static_cast<std::size_t>(c)] != 0 || c == state.owner(x)) continue;
        reached_from[static_cast<std::size_t>(c)] = x;
        for (Vertex y : state.satellites_of(c)) {
          if (labeled[static_cast<std::size_t>(y)]) continue;
          labeled[static_cast<std::size_t>(y)] = 1;
          via[static_cast<std::size_t>(y)] = c;
          if (!star_cover.contains(y)) {
            u = y;
            break;
          }
          queue.push_back(y);
        }
        if (u != 0) break;
      }
    }
    if (u == 0) throw PreconditionError("normalize: no exchange path from " + std::to_string(v));

    struct Hop {
      Vertex joins;
      Vertex center;
      Vertex leaves;
    };
    std::vector<Hop> path;
    for (Vertex y = u; y != v;) {
      const Vertex c = via[static_cast<std::size_t>(y)];
      const Vertex x = reached_from[static_cast<std::size_t>(c)];
      path.push_back({x, c, y});
      y = x;
    }
    for (const auto& h : path) state.remove_satellite(h.leaves);
    for (const auto& h : path) state.add_satellite(h.center, h.joins);
  }
  return state.packing();
}

}  // namespace starpack
