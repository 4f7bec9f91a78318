#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "starpack/error.hpp"
#include "starpack/graph.hpp"
#include "starpack/packing.hpp"
#include "starpack/seq.hpp"
#include "starpack/trace.hpp"

namespace starpack {

struct KmtConfig {
  int max_iters = 0;  // 0 means n^2 + n
  bool check_invariants = true;
};

struct KmtResult {
  Packing packing;   // after trimming
  RunReport report;  // report.coverage is the final coverage
  Packing q0;        // exact sequential packing the search started from
  Packing pre_trim;  // after the Revise loop
  CriticalReport critical;
};

/// Largest vertex set repack_subset accepts: three stars around two t-stars, or a t-star
/// next to a k-star, whichever is bigger. Unbounded k has no fixed footprint.
inline int repack_footprint_cap(int k, int t) {
  if (k == kUnbounded) return 64;
  return std::min(64, std::max(3 * t + 4, t + k + 2));
}

namespace detail {

struct CoverLimits {
  int k = kUnbounded;
  int max_stars = 64;
  int forbid_size = 0;  // stars of this size cut the branch (0 = none)
};

/// Calls f(stars) for every way to partition vs into stars of g with 1..k satellites.
/// Branches on the lowest unused vertex: it centers a star with some non-empty neighbor subset,
/// or it is a satellite of some neighbor c together with a subset of c's other neighbors.
/// The two orientations of a 1-star are distinct results. f returns false to stop.
template <class F>
bool for_each_exact_cover(const Graph& g, const std::vector<Vertex>& vs, const CoverLimits& lim, F&& f) {
  const int m = static_cast<int>(vs.size());
  if (m > 64) throw CapExceeded("exact cover limited to 64 vertices");
  std::vector<std::uint64_t> nbr(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i != j && g.adjacent(vs[static_cast<std::size_t>(i)], vs[static_cast<std::size_t>(j)])) {
        nbr[static_cast<std::size_t>(i)] |= std::uint64_t{1} << j;
      }
    }
  }
  std::vector<Star> stars;
  auto emit = [&](int center, std::uint64_t sats) {
    std::vector<Vertex> list;
    for (; sats != 0; sats &= sats - 1) list.push_back(vs[static_cast<std::size_t>(std::countr_zero(sats))]);
    stars.emplace_back(vs[static_cast<std::size_t>(center)], std::move(list));
  };
  const std::uint64_t all = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  auto fits = [&](int ell) {
    return ell <= lim.k && ell != lim.forbid_size;
  };
  auto go = [&](auto& self, std::uint64_t free) -> bool {
    if (free == 0) return f(static_cast<const std::vector<Star>&>(stars));
    if (static_cast<int>(stars.size()) >= lim.max_stars) return true;
    const int v = std::countr_zero(free);
    const std::uint64_t vb = std::uint64_t{1} << v;
    const std::uint64_t rest = free & ~vb;
    const std::uint64_t around = nbr[static_cast<std::size_t>(v)] & rest;
    for (std::uint64_t sub = around; sub != 0; sub = (sub - 1) & around) {
      if (!fits(std::popcount(sub))) continue;
      emit(v, sub);
      const bool more = self(self, rest & ~sub);
      stars.pop_back();
      if (!more) return false;
    }
    for (std::uint64_t cs = around; cs != 0; cs &= cs - 1) {
      const int c = std::countr_zero(cs);
      const std::uint64_t cb = std::uint64_t{1} << c;
      const std::uint64_t others = nbr[static_cast<std::size_t>(c)] & rest & ~cb;
      for (std::uint64_t sub = others;; sub = (sub - 1) & others) {
        if (fits(std::popcount(sub) + 1)) {
          emit(c, sub | vb);
          const bool more = self(self, rest & ~cb & ~sub);
          stars.pop_back();
          if (!more) return false;
        }
        if (sub == 0) break;
      }
    }
    return true;
  };
  return go(go, all);
}

inline std::vector<Vertex> union_vertices(const Packing& p, std::initializer_list<std::size_t> idx) {
  std::vector<Vertex> out;
  for (std::size_t i : idx) {
    const auto& s = p.stars[i];
    out.push_back(s.center);
    out.insert(out.end(), s.satellites.begin(), s.satellites.end());
  }
  std::ranges::sort(out);
  return out;
}

// Replaces the stars at `slots` (ascending) by `with`: slots are reused in order, extra
// results are appended, surplus slots are erased.
inline void replace_stars(Packing& p, std::vector<std::size_t> slots, const std::vector<Star>& with) {
  std::size_t i = 0;
  for (; i < slots.size() && i < with.size(); ++i) p.stars[slots[i]] = with[i];
  for (; i < with.size(); ++i) p.stars.push_back(with[i]);
  for (std::size_t j = slots.size(); j > with.size(); --j) {
    p.stars.erase(p.stars.begin() + static_cast<std::ptrdiff_t>(slots[j - 1]));
  }
}

inline void check_index(const Packing& p, std::size_t i, const char* op) {
  if (i >= p.stars.size()) throw PreconditionError(std::string(op) + ": star index " + std::to_string(i) + " out of range");
}

}  // namespace detail

/// Every packing of G[vs] whose stars (1..k satellites) cover vs exactly.
inline std::vector<Packing> repack_subset(const Graph& g, const VertexSet& vs, int k, int t) {
  const int cap = repack_footprint_cap(k, t);
  if (vs.size() > cap) {
    throw CapExceeded("repack footprint " + std::to_string(vs.size()) + " exceeds " + std::to_string(cap));
  }
  std::vector<Packing> out;
  detail::for_each_exact_cover(g, vs.to_vector(), {k, 64, 0}, [&](const std::vector<Star>& stars) {
    out.push_back(Packing{stars});
    return true;
  });
  return out;
}

/// Revise-t: a t-star with two adjacent satellites becomes a (t-2)-star on the same center plus
/// a 1-star on the first such pair (lowest ids).
inline std::optional<TraceEvent> try_revise_t(const Graph& g, Packing& p, std::size_t a, int t) {
  if (t < 3) throw PreconditionError("Revise-t needs t >= 3");
  detail::check_index(p, a, "Revise-t");
  const Star& s = p.stars[a];
  if (s.size() != t) throw PreconditionError("Revise-t: star " + std::to_string(a) + " is not a t-star");
  for (std::size_t i = 0; i < s.satellites.size(); ++i) {
    for (std::size_t j = i + 1; j < s.satellites.size(); ++j) {
      const Vertex x = s.satellites[i];
      const Vertex y = s.satellites[j];
      if (!g.adjacent(x, y)) continue;
      std::vector<Vertex> keep;
      for (Vertex z : s.satellites) {
        if (z != x && z != y) keep.push_back(z);
      }
      const Packing before = p;
      detail::replace_stars(p, {a}, {Star(s.center, keep), Star(x, {y})});
      return diff_event(OpKind::ReviseT, before, p);
    }
  }
  return std::nullopt;
}

/// Revise-(t,i): repacks a t-star and any other star into two or three stars with a better
/// potential (fewer t-stars, or as many t-stars and more stars).
inline std::optional<TraceEvent> try_revise_pair(const Graph& g, Packing& p, std::size_t a, std::size_t b,
                                                 const Constraint& c) {
  detail::check_index(p, a, "Revise-pair");
  detail::check_index(p, b, "Revise-pair");
  if (a == b) throw PreconditionError("Revise-pair: the two stars must differ");
  if (p.stars[a].size() != c.t) throw PreconditionError("Revise-pair: first star is not a t-star");
  const KmtPotential before{1 + (p.stars[b].size() == c.t ? 1 : 0), 2};
  std::optional<std::vector<Star>> found;
  detail::for_each_exact_cover(g, detail::union_vertices(p, {a, b}), {c.k, 3, 0}, [&](const std::vector<Star>& r) {
    if (r.size() < 2) return true;
    const KmtPotential after{static_cast<int>(std::ranges::count_if(r, [&](const Star& s) { return s.size() == c.t; })),
                             static_cast<int>(r.size())};
    if (!after.improves_on(before)) return true;
    found = r;
    return false;
  });
  if (!found) return std::nullopt;
  const Packing old = p;
  detail::replace_stars(p, {std::min(a, b), std::max(a, b)}, *found);
  return diff_event(OpKind::RevisePair, old, p);
}

/// Revise-(t,t,i): two t-stars plus a star of size 1, t-1 or t+1 become two or three stars,
/// none of them a t-star.
inline std::optional<TraceEvent> try_revise_triple(const Graph& g, Packing& p, std::size_t a, std::size_t b,
                                                   std::size_t o, const Constraint& c) {
  for (std::size_t i : {a, b, o}) detail::check_index(p, i, "Revise-triple");
  if (a == b || a == o || b == o) throw PreconditionError("Revise-triple: the three stars must differ");
  if (p.stars[a].size() != c.t || p.stars[b].size() != c.t) {
    throw PreconditionError("Revise-triple: first two stars must be t-stars");
  }
  const int i = p.stars[o].size();
  if (i != 1 && i != c.t - 1 && i != c.t + 1) {
    throw PreconditionError("Revise-triple: third star has size " + std::to_string(i) + ", not 1, t-1 or t+1");
  }
  std::optional<std::vector<Star>> found;
  detail::for_each_exact_cover(g, detail::union_vertices(p, {a, b, o}), {c.k, 3, c.t}, [&](const std::vector<Star>& r) {
    if (r.size() < 2) return true;
    found = r;
    return false;
  });
  if (!found) return std::nullopt;
  const Packing old = p;
  std::vector<std::size_t> slots{a, b, o};
  std::ranges::sort(slots);
  detail::replace_stars(p, slots, *found);
  return diff_event(OpKind::ReviseTriple, old, p);
}

/// One Revise step: first accepted move in the order Revise-t, Revise-pair, Revise-triple,
/// ascending star indices.
inline std::optional<TraceEvent> apply_first_revise(const Graph& g, Packing& p, const Constraint& c) {
  const int t = c.t;
  std::vector<std::size_t> t_stars;
  for (std::size_t i = 0; i < p.stars.size(); ++i) {
    if (p.stars[i].size() == t) t_stars.push_back(i);
  }
  if (t_stars.empty()) return std::nullopt;
  if (t >= 3) {
    for (std::size_t a : t_stars) {
      if (auto e = try_revise_t(g, p, a, t)) return e;
    }
  }
  for (std::size_t a : t_stars) {
    for (std::size_t b = 0; b < p.stars.size(); ++b) {
      if (b == a || (b < a && p.stars[b].size() == t)) continue;
      if (auto e = try_revise_pair(g, p, a, b, c)) return e;
    }
  }
  for (std::size_t x = 0; x < t_stars.size(); ++x) {
    for (std::size_t y = x + 1; y < t_stars.size(); ++y) {
      for (std::size_t o = 0; o < p.stars.size(); ++o) {
        const int i = p.stars[o].size();
        if (i != 1 && i != t - 1 && i != t + 1) continue;
        if (auto e = try_revise_triple(g, p, t_stars[x], t_stars[y], o, c)) return e;
      }
    }
  }
  return std::nullopt;
}

/// Drops the highest-id satellite of every t-star.
inline std::vector<TraceEvent> trim_t_stars(Packing& p, int t) {
  std::vector<TraceEvent> events;
  for (auto& s : p.stars) {
    if (s.size() != t) continue;
    TraceEvent e;
    e.kind = OpKind::Trim;
    e.before = p.coverage();
    e.removed.push_back(s);
    s.satellites.pop_back();
    e.added.push_back(s);
    e.after = e.before - 1;
    events.push_back(std::move(e));
  }
  return events;
}

inline Packing baseline_trim(const Graph& g, int k, int t) {
  Constraint::kmt(k, t);
  Packing p = solve_sequential_exact(g, k);
  trim_t_stars(p, t);
  return p;
}

/// Conditions that must hold when the Revise loop stops:
///  - the uncovered set is still that of q0 and every critical star of q0 survives unchanged,
///  - a satellite of a t-star only sees its own center and centers of (t-1)-stars or k-stars
///    (siblings are tolerated when t = 2),
///  - a t-star center only sees, outside its star, satellites of (t+1)-stars or other centers.
/// Both endpoints of a 1-star count as centers.
inline std::vector<std::string> check_exit_structure(const Graph& g, const Packing& q0, const CriticalReport& critical,
                                             const Packing& pre_trim, const Constraint& c) {
  std::vector<std::string> out;
  const int n = g.order();
  if (!(q0.covered_set(n) == pre_trim.covered_set(n))) out.push_back("covered set changed during the Revise loop");
  for (int si : critical.union_k) {
    const Star& s = q0.stars[static_cast<std::size_t>(si)];
    if (std::ranges::find(pre_trim.stars, s) == pre_trim.stars.end()) {
      out.push_back("critical star centered at " + std::to_string(s.center) + " was modified");
    }
  }
  std::vector<int> size_of(static_cast<std::size_t>(n) + 1, -1);  // star size, for centers only
  std::vector<int> home(static_cast<std::size_t>(n) + 1, -1);
  for (std::size_t i = 0; i < pre_trim.stars.size(); ++i) {
    const auto& s = pre_trim.stars[i];
    size_of[static_cast<std::size_t>(s.center)] = s.size();
    home[static_cast<std::size_t>(s.center)] = static_cast<int>(i);
    for (Vertex x : s.satellites) {
      home[static_cast<std::size_t>(x)] = static_cast<int>(i);
      if (s.size() == 1) size_of[static_cast<std::size_t>(x)] = 1;
    }
  }
  auto center_of_size = [&](Vertex y, int ell) { return size_of[static_cast<std::size_t>(y)] == ell; };
  for (std::size_t i = 0; i < pre_trim.stars.size(); ++i) {
    const auto& s = pre_trim.stars[i];
    if (s.size() != c.t) continue;
    for (Vertex x : s.satellites) {
      for (Vertex y : g.neighbors(x)) {
        if (y == s.center) continue;
        if (home[static_cast<std::size_t>(y)] == static_cast<int>(i)) {
          if (c.t >= 3) out.push_back("t-star satellites " + std::to_string(x) + " and " + std::to_string(y) + " adjacent");
          continue;
        }
        const bool ok = center_of_size(y, c.t - 1) || (c.k != kUnbounded && center_of_size(y, c.k));
        if (!ok) {
          out.push_back("t-star satellite " + std::to_string(x) + " adjacent to " + std::to_string(y) +
                        ", not a center of a (t-1)-star or k-star");
        }
      }
    }
    for (Vertex y : g.neighbors(s.center)) {
      const int h = home[static_cast<std::size_t>(y)];
      if (h == static_cast<int>(i)) continue;
      bool ok = false;
      if (h >= 0) {
        const auto& other = pre_trim.stars[static_cast<std::size_t>(h)];
        ok = size_of[static_cast<std::size_t>(y)] >= 0 || other.size() == c.t + 1;
      }
      if (!ok) {
        out.push_back("t-star center " + std::to_string(s.center) + " adjacent to " + std::to_string(y) +
                      ", not a satellite of a (t+1)-star or another center");
      }
    }
  }
  return out;
}

inline KmtResult run_local_search_kmt(const Graph& g, int k, int t, const KmtConfig& cfg = {}) {
  const Constraint c = Constraint::kmt(k, t);
  const long long n = g.order();
  const long long max_iters = cfg.max_iters > 0 ? cfg.max_iters : n * n + n;

  KmtResult r;
  r.q0 = solve_sequential_exact(g, k);
  r.critical = critical_closure(g, r.q0, k);
  Packing p = r.q0;
  while (auto e = apply_first_revise(g, p, c)) {
    if (++r.report.iterations > max_iters) {
      throw CapExceeded("Revise loop exceeded " + std::to_string(max_iters) + " iterations");
    }
    r.report.trace.push_back(std::move(*e));
  }
  r.pre_trim = p;
  for (auto& e : trim_t_stars(p, t)) r.report.trace.push_back(std::move(e));
  r.packing = std::move(p);
  r.report.coverage = r.packing.coverage();
  if (cfg.check_invariants) r.report.violations = check_exit_structure(g, r.q0, r.critical, r.pre_trim, c);
  return r;
}

}  // namespace starpack
