#pragma once

#include <optional>
#include <string>
#include <vector>

#include "starpack/error.hpp"
#include "starpack/graph.hpp"
#include "starpack/packing.hpp"
#include "starpack/trace.hpp"

namespace starpack {

enum class KPlusVariant {
  General,       // Collect plus the four pair/single pulls, any k >= 2
  TwoPlusExtra,  // k = 2 only, adds the triple pull over three 2-stars
};

struct KPlusConfig {
  int max_iters = 0;  // 0 means 10 * n
  bool check_invariants = true;
};

struct KPlusResult {
  Packing packing;
  RunReport report;
  SolveState state;
};

/// Moves v and all of its uncovered neighbors into a new star centered at v.
inline Star collect(SolveState& state, Vertex v, int k) {
  if (state.covered(v)) throw PreconditionError("collect: vertex " + std::to_string(v) + " is covered");
  if (state.remainder_degree(v) < k) {
    throw PreconditionError("collect: vertex " + std::to_string(v) + " has remainder degree " +
                            std::to_string(state.remainder_degree(v)) + " < k");
  }
  std::vector<Vertex> sats;
  for (Vertex u : state.graph().neighbors(v)) {
    if (!state.covered(u)) sats.push_back(u);
  }
  state.add_star(v, sats);
  return Star(v, std::move(sats));
}

/// Number of uncovered vertices adjacent to some center, i.e. what extend_centers would absorb.
inline int extendable_count(const SolveState& state) {
  int count = 0;
  for (Vertex u : state.graph().vertices()) {
    if (state.covered(u)) continue;
    for (Vertex w : state.graph().neighbors(u)) {
      if (state.is_center(w)) {
        ++count;
        break;
      }
    }
  }
  return count;
}

/// Every center, in ascending order, absorbs all of its uncovered neighbors.
inline int extend_centers(SolveState& state) {
  int absorbed = 0;
  for (Vertex c : state.centers()) {
    for (Vertex u : state.graph().neighbors(c)) {
      if (!state.covered(u)) {
        state.add_satellite(c, u);
        ++absorbed;
      }
    }
  }
  return absorbed;
}

struct Extraction {
  std::vector<Vertex> centers;  // Collect order that produced `state`
  SolveState state;             // after the collects and extend_centers
};

/// Tries every ordered sequence of at most `max_collects` maximal Collects whose centers lie in
/// seed or its neighborhood, each followed by extend_centers, and keeps the one with the largest
/// coverage (first found on ties, the empty sequence first). Does not touch `state`.
///
/// Only vertices in seed ∪ N(seed) can reach remainder degree k after the seed is freed, as long
/// as no Collect was applicable beforehand, so the pool is complete.
inline Extraction extraction_search(const SolveState& state, const VertexSet& seed, int k, int max_collects = 3) {
  const Graph& g = state.graph();
  std::vector<char> in_pool(static_cast<std::size_t>(g.order()) + 1, 0);
  seed.for_each([&](Vertex v) {
    in_pool[static_cast<std::size_t>(v)] = 1;
    for (Vertex u : g.neighbors(v)) in_pool[static_cast<std::size_t>(u)] = 1;
  });
  std::vector<Vertex> pool;
  for (Vertex v : g.vertices()) {
    if (in_pool[static_cast<std::size_t>(v)] && !state.covered(v)) pool.push_back(v);
  }

  Extraction best{{}, state};
  int best_cov = -1;
  std::vector<Vertex> seq;
  auto dfs = [&](auto& self, const SolveState& cur, int depth) -> void {
    const int reachable = cur.coverage() + extendable_count(cur);
    if (reachable > best_cov) {
      best_cov = reachable;
      best.centers = seq;
      best.state = cur;
      extend_centers(best.state);
    }
    if (depth == max_collects) return;
    for (Vertex c : pool) {
      if (cur.covered(c) || cur.remainder_degree(c) < k) continue;
      SolveState next = cur;
      collect(next, c, k);
      seq.push_back(c);
      self(self, next, depth + 1);
      seq.pop_back();
    }
  };
  dfs(dfs, state, 0);
  return best;
}

namespace detail {

inline std::optional<TraceEvent> commit_if_gain(SolveState& state, const SolveState& trial, const VertexSet& seed,
                                                int k, OpKind kind) {
  auto ext = extraction_search(trial, seed, k);
  if (ext.state.coverage() <= state.coverage()) return std::nullopt;
  auto event = diff_event(kind, state.packing(), ext.state.packing());
  state = std::move(ext.state);
  return event;
}

inline void require_center_with(const SolveState& state, Vertex c, const char* op, bool ok, const char* what) {
  if (!state.is_center(c)) throw PreconditionError(std::string(op) + ": " + std::to_string(c) + " is not a center");
  if (!ok) throw PreconditionError(std::string(op) + ": star at " + std::to_string(c) + " " + what);
}

inline VertexSet star_vertices(const SolveState& state, Vertex c) {
  VertexSet s(state.order());
  s.insert(c);
  for (Vertex u : state.satellites_of(c)) s.insert(u);
  return s;
}

}  // namespace detail

/// Pull-by-(k+1)+: frees satellite v of the (k+1)+-star centered at c and re-extracts.
inline std::optional<TraceEvent> try_pull_satellite(SolveState& state, Vertex c, Vertex v, int k) {
  detail::require_center_with(state, c, "pull satellite", state.satellite_count(c) >= k + 1,
                              "has fewer than k+1 satellites");
  if (v == c || state.owner(v) != c) {
    throw PreconditionError("pull satellite: " + std::to_string(v) + " is not a satellite of " + std::to_string(c));
  }
  SolveState trial = state;
  trial.remove_satellite(v);
  VertexSet seed(state.order());
  seed.insert(v);
  auto event = detail::commit_if_gain(state, trial, seed, k, OpKind::PullSat);
  if (event && !state.covered(v)) event->note = "improving extraction leaves the pulled satellite uncovered";
  return event;
}

/// Pull-by-k: frees the whole k-star centered at c and re-extracts.
inline std::optional<TraceEvent> try_pull_kstar(SolveState& state, Vertex c, int k) {
  detail::require_center_with(state, c, "pull k-star", state.satellite_count(c) == k, "is not a k-star");
  const VertexSet seed = detail::star_vertices(state, c);
  SolveState trial = state;
  trial.remove_star(c);
  return detail::commit_if_gain(state, trial, seed, k, OpKind::PullK);
}

/// Pull-by-(k,(k+1)+): frees the k-star at a and satellite v of the (k+1)+-star at b.
inline std::optional<TraceEvent> try_pull_pair_k_big(SolveState& state, Vertex a, Vertex b, Vertex v, int k) {
  detail::require_center_with(state, a, "pull k/(k+1)+ pair", state.satellite_count(a) == k, "is not a k-star");
  detail::require_center_with(state, b, "pull k/(k+1)+ pair", state.satellite_count(b) >= k + 1,
                              "has fewer than k+1 satellites");
  if (v == b || state.owner(v) != b) {
    throw PreconditionError("pull k/(k+1)+ pair: " + std::to_string(v) + " is not a satellite of " +
                            std::to_string(b));
  }
  VertexSet seed = detail::star_vertices(state, a);
  seed.insert(v);
  SolveState trial = state;
  trial.remove_star(a);
  trial.remove_satellite(v);
  return detail::commit_if_gain(state, trial, seed, k, OpKind::PullK_Kp1);
}

/// Pull-by-(k,k): frees two k-stars.
inline std::optional<TraceEvent> try_pull_pair_kk(SolveState& state, Vertex a, Vertex b, int k) {
  if (a == b) throw PreconditionError("pull k/k pair: the two stars must differ");
  detail::require_center_with(state, a, "pull k/k pair", state.satellite_count(a) == k, "is not a k-star");
  detail::require_center_with(state, b, "pull k/k pair", state.satellite_count(b) == k, "is not a k-star");
  VertexSet seed = detail::star_vertices(state, a);
  seed |= detail::star_vertices(state, b);
  SolveState trial = state;
  trial.remove_star(a);
  trial.remove_star(b);
  return detail::commit_if_gain(state, trial, seed, k, OpKind::PullKK);
}

/// Pull-by-(k,k,k), only in the 2+ variant: frees three 2-stars.
inline std::optional<TraceEvent> try_pull_triple_kkk(SolveState& state, Vertex a, Vertex b, Vertex c, int k,
                                                      KPlusVariant variant) {
  if (k != 2 || variant != KPlusVariant::TwoPlusExtra) {
    throw PreconditionError("pull k/k/k triple exists only in the 2+ variant");
  }
  if (a == b || a == c || b == c) throw PreconditionError("pull k/k/k triple: the three stars must differ");
  for (Vertex x : {a, b, c}) {
    detail::require_center_with(state, x, "pull k/k/k triple", state.satellite_count(x) == k, "is not a k-star");
  }
  VertexSet seed = detail::star_vertices(state, a);
  seed |= detail::star_vertices(state, b);
  seed |= detail::star_vertices(state, c);
  SolveState trial = state;
  trial.remove_star(a);
  trial.remove_star(b);
  trial.remove_star(c);
  return detail::commit_if_gain(state, trial, seed, k, OpKind::PullKKK);
}

/// One step of the local search: the first applicable operation in the fixed priority
/// Collect, PullSat, PullK, PullK_Kp1, PullKK, PullKKK (ascending centers and satellites).
inline std::optional<TraceEvent> apply_first_kplus(SolveState& state, int k, KPlusVariant variant) {
  const Graph& g = state.graph();
  for (Vertex v : g.vertices()) {
    if (!state.covered(v) && state.remainder_degree(v) >= k) {
      const int before = state.coverage();
      Star s = collect(state, v, k);
      TraceEvent e;
      e.kind = OpKind::Collect;
      e.added.push_back(std::move(s));
      e.before = before;
      e.after = state.coverage();
      return e;
    }
  }

  std::vector<Vertex> k_stars;
  std::vector<Vertex> big_stars;
  for (Vertex c : state.centers()) {
    if (state.satellite_count(c) == k) {
      k_stars.push_back(c);
    } else if (state.satellite_count(c) > k) {
      big_stars.push_back(c);
    }
  }

  for (Vertex b : big_stars) {
    for (Vertex v : state.satellites_of(b)) {
      if (auto e = try_pull_satellite(state, b, v, k)) return e;
    }
  }
  for (Vertex a : k_stars) {
    if (auto e = try_pull_kstar(state, a, k)) return e;
  }
  for (Vertex a : k_stars) {
    for (Vertex b : big_stars) {
      for (Vertex v : state.satellites_of(b)) {
        if (auto e = try_pull_pair_k_big(state, a, b, v, k)) return e;
      }
    }
  }
  for (std::size_t i = 0; i < k_stars.size(); ++i) {
    for (std::size_t j = i + 1; j < k_stars.size(); ++j) {
      if (auto e = try_pull_pair_kk(state, k_stars[i], k_stars[j], k)) return e;
    }
  }
  if (variant == KPlusVariant::TwoPlusExtra) {
    for (std::size_t i = 0; i < k_stars.size(); ++i) {
      for (std::size_t j = i + 1; j < k_stars.size(); ++j) {
        for (std::size_t l = j + 1; l < k_stars.size(); ++l) {
          if (auto e = try_pull_triple_kkk(state, k_stars[i], k_stars[j], k_stars[l], k, variant)) return e;
        }
      }
    }
  }
  return std::nullopt;
}

/// Structural conditions that must hold once no operation applies:
///  - the remainder graph has maximum degree <= k-1,
///  - no uncovered vertex is adjacent to a center,
///  - every satellite has at most k-1 uncovered neighbors,
///  - no satellite of a (k+1)+-star sees the center of an outside (k-1)-star.
inline std::vector<std::string> check_kplus_termination(const SolveState& state, int k) {
  std::vector<std::string> out;
  const Graph& g = state.graph();
  for (Vertex v : g.vertices()) {
    const std::string vs = std::to_string(v);
    if (!state.covered(v)) {
      if (state.remainder_degree(v) > k - 1) {
        out.push_back("remainder vertex " + vs + " has remainder degree " + std::to_string(state.remainder_degree(v)));
      }
      for (Vertex u : g.neighbors(v)) {
        if (state.is_center(u)) out.push_back("remainder vertex " + vs + " adjacent to center " + std::to_string(u));
      }
    } else if (state.is_satellite(v)) {
      if (state.remainder_degree(v) > k - 1) {
        out.push_back("satellite " + vs + " has " + std::to_string(state.remainder_degree(v)) + " uncovered neighbors");
      }
      if (state.satellite_count(state.owner(v)) >= k + 1) {
        for (Vertex u : g.neighbors(v)) {
          if (!state.covered(u) && state.remainder_degree(u) == k - 1) {
            out.push_back("satellite " + vs + " of a (k+1)+-star adjacent to outside (k-1)-star center " +
                          std::to_string(u));
          }
        }
      }
    }
  }
  return out;
}

/// Every accepted Collect/Pull must strictly increase coverage, extend steps never decrease it.
inline std::vector<std::string> check_kplus_progress(const RunReport& report, int n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < report.trace.size(); ++i) {
    const auto& e = report.trace[i];
    const bool ok = e.kind == OpKind::ExtendCenters ? e.after >= e.before : e.after > e.before;
    if (!ok) out.push_back("event " + std::to_string(i) + " (" + std::string(to_string(e.kind)) + ") did not improve");
  }
  if (report.iterations > n) out.push_back("accepted iterations " + std::to_string(report.iterations) + " > n");
  return out;
}

inline KPlusResult run_local_search_kplus(const Graph& g, int k, KPlusVariant variant, const KPlusConfig& cfg = {}) {
  Constraint::kplus(k);
  if (variant == KPlusVariant::TwoPlusExtra && k != 2) throw PreconditionError("the 2+ variant requires k = 2");
  const int max_iters = cfg.max_iters > 0 ? cfg.max_iters : 10 * std::max(1, g.order());

  SolveState state(g);
  RunReport report;
  while (auto event = apply_first_kplus(state, k, variant)) {
    if (++report.iterations > max_iters) {
      throw CapExceeded("k+ local search exceeded " + std::to_string(max_iters) + " iterations");
    }
    report.trace.push_back(std::move(*event));
    if (extendable_count(state) > 0) {
      const Packing before = state.packing();
      extend_centers(state);
      report.trace.push_back(diff_event(OpKind::ExtendCenters, before, state.packing()));
    }
  }
  report.coverage = state.coverage();
  if (cfg.check_invariants) {
    report.violations = check_kplus_termination(state, k);
    for (auto& v : check_kplus_progress(report, g.order())) report.violations.push_back(std::move(v));
  }
  return {state.packing(), std::move(report), std::move(state)};
}

}  // namespace starpack
