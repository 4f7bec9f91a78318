#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "starpack/error.hpp"
#include "starpack/graph.hpp"

namespace starpack {

using Json = nlohmann::ordered_json;

/// One center plus a non-empty sorted satellite list (an l-star, l = satellites.size()).
struct Star {
  Vertex center = 0;
  std::vector<Vertex> satellites;

  Star() = default;
  Star(Vertex c, std::vector<Vertex> sats) : center(c), satellites(std::move(sats)) {
    std::ranges::sort(satellites);
  }

  int size() const { return static_cast<int>(satellites.size()); }
  int vertex_count() const { return size() + 1; }
  bool contains(Vertex v) const { return v == center || std::ranges::binary_search(satellites, v); }

  friend bool operator==(const Star&, const Star&) = default;
  friend auto operator<=>(const Star&, const Star&) = default;
};

struct Packing {
  std::vector<Star> stars;

  int coverage() const {
    int total = 0;
    for (const auto& s : stars) total += s.vertex_count();
    return total;
  }
  int count_of_size(int ell) const {
    return static_cast<int>(std::ranges::count_if(stars, [&](const Star& s) { return s.size() == ell; }));
  }
  VertexSet covered_set(int n) const {
    VertexSet out(n);
    for (const auto& s : stars) {
      out.insert(s.center);
      for (Vertex v : s.satellites) out.insert(v);
    }
    return out;
  }

  friend bool operator==(const Packing&, const Packing&) = default;
};

inline constexpr int kUnbounded = std::numeric_limits<int>::max();

enum class Mode { KPlus, SeqKMinus, KMinusT };

/// Which star sizes are admissible. k may be kUnbounded for SeqKMinus and KMinusT.
struct Constraint {
  Mode mode = Mode::KPlus;
  int k = 2;
  int t = 0;

  static Constraint kplus(int k) { return checked({Mode::KPlus, k, 0}); }
  static Constraint seq(int k) { return checked({Mode::SeqKMinus, k, 0}); }
  static Constraint kmt(int k, int t) { return checked({Mode::KMinusT, k, t}); }
  static Constraint of(Mode m, int k, int t) { return checked({m, k, m == Mode::KMinusT ? t : 0}); }

  bool unbounded() const { return k == kUnbounded; }

  bool allows(int ell) const {
    switch (mode) {
      case Mode::KPlus: return ell >= k;
      case Mode::SeqKMinus: return ell >= 1 && ell <= k;
      case Mode::KMinusT: return ell >= 1 && ell <= k && ell != t;
    }
    return false;
  }

  void check() const {
    switch (mode) {
      case Mode::KPlus:
        if (k < 2 || unbounded()) throw PreconditionError("k+ packing needs a finite k >= 2");
        break;
      case Mode::SeqKMinus:
        if (k < 1) throw PreconditionError("sequential packing needs k >= 1");
        break;
      case Mode::KMinusT:
        if (t < 2) throw PreconditionError("k-/t packing needs t >= 2");
        if (k <= t) throw PreconditionError("k-/t packing needs k > t");
        break;
    }
  }

  std::string describe() const;

  friend bool operator==(const Constraint&, const Constraint&) = default;

 private:
  static Constraint checked(Constraint c) {
    c.check();
    return c;
  }
};

inline std::string k_to_string(int k) { return k == kUnbounded ? "inf" : std::to_string(k); }

inline std::string Constraint::describe() const {
  switch (mode) {
    case Mode::KPlus: return "kplus(k=" + k_to_string(k) + ")";
    case Mode::SeqKMinus: return "seq(k=" + k_to_string(k) + ")";
    case Mode::KMinusT: return "kmt(k=" + k_to_string(k) + ",t=" + std::to_string(t) + ")";
  }
  return "?";
}

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks star shape, adjacency to the host graph, vertex-disjointness and the size rule of c.
inline ValidationReport validate(const Graph& g, const Packing& p, const Constraint& c) {
  ValidationReport report;
  auto bad = [&](std::size_t idx, const std::string& what) {
    report.violations.push_back("star " + std::to_string(idx) + ": " + what);
  };
  std::vector<int> seen(static_cast<std::size_t>(g.order()) + 1, -1);
  auto claim = [&](std::size_t idx, Vertex v) {
    if (v < 1 || v > g.order()) {
      bad(idx, "vertex " + std::to_string(v) + " out of range");
      return;
    }
    auto& slot = seen[static_cast<std::size_t>(v)];
    if (slot >= 0) {
      bad(idx, "disjointness: vertex " + std::to_string(v) + " already used by star " + std::to_string(slot));
    } else {
      slot = static_cast<int>(idx);
    }
  };
  for (std::size_t i = 0; i < p.stars.size(); ++i) {
    const Star& s = p.stars[i];
    if (s.satellites.empty()) bad(i, "no satellites");
    if (!std::ranges::is_sorted(s.satellites)) bad(i, "satellites not sorted");
    claim(i, s.center);
    for (Vertex v : s.satellites) {
      if (v == s.center) {
        bad(i, "center listed as its own satellite");
        continue;
      }
      claim(i, v);
      if (!g.adjacent(s.center, v)) {
        bad(i, "satellite " + std::to_string(v) + " not adjacent to center " + std::to_string(s.center));
      }
    }
    if (!s.satellites.empty() && !c.allows(s.size())) {
      bad(i, "size " + std::to_string(s.size()) + " not allowed by " + c.describe());
    }
  }
  return report;
}

/// Improvement order for k-/t local search: fewer t-stars, then more stars.
struct KmtPotential {
  int t_stars = 0;
  int stars = 0;

  bool improves_on(const KmtPotential& o) const {
    return t_stars < o.t_stars || (t_stars == o.t_stars && stars > o.stars);
  }
  friend bool operator==(const KmtPotential&, const KmtPotential&) = default;
};

inline KmtPotential potential_kmt(const Packing& p, int t) {
  return {p.count_of_size(t), static_cast<int>(p.stars.size())};
}

/// A packing plus the remainder graph bookkeeping the k+ local search runs on.
/// Stars are identified by their center; star order is ascending center id.
class SolveState {
 public:
  SolveState() = default;
  explicit SolveState(const Graph& g)
      : g_(&g),
        owner_(static_cast<std::size_t>(g.order()) + 1, 0),
        sat_count_(static_cast<std::size_t>(g.order()) + 1, 0),
        rem_deg_(static_cast<std::size_t>(g.order()) + 1, 0) {
    for (Vertex v : g.vertices()) rem_deg_[idx(v)] = g.degree(v);
  }

  const Graph& graph() const { return *g_; }
  int order() const { return g_->order(); }

  /// 0 when v is uncovered, otherwise the center of the star holding v.
  Vertex owner(Vertex v) const { return owner_[idx(v)]; }
  bool covered(Vertex v) const { return owner_[idx(v)] != 0; }
  bool is_center(Vertex v) const { return owner_[idx(v)] == v; }
  bool is_satellite(Vertex v) const { return covered(v) && !is_center(v); }
  int satellite_count(Vertex c) const { return sat_count_[idx(c)]; }
  /// Number of uncovered neighbors; for uncovered v this is its degree in the remainder graph.
  int remainder_degree(Vertex v) const { return rem_deg_[idx(v)]; }
  int coverage() const { return covered_; }

  VertexSet remainder() const {
    VertexSet r(order());
    for (Vertex v : g_->vertices()) {
      if (!covered(v)) r.insert(v);
    }
    return r;
  }

  std::vector<Vertex> centers() const {
    std::vector<Vertex> out;
    for (Vertex v : g_->vertices()) {
      if (is_center(v)) out.push_back(v);
    }
    return out;
  }

  std::vector<Vertex> satellites_of(Vertex c) const {
    std::vector<Vertex> out;
    for (Vertex u : g_->neighbors(c)) {
      if (owner_[idx(u)] == c) out.push_back(u);
    }
    return out;
  }

  Star star_at(Vertex c) const { return Star(c, satellites_of(c)); }

  Packing packing() const {
    Packing p;
    for (Vertex c : centers()) p.stars.push_back(star_at(c));
    return p;
  }

  void add_star(Vertex c, std::span<const Vertex> sats) {
    if (covered(c)) throw PreconditionError("center " + std::to_string(c) + " already covered");
    take(c, c);
    for (Vertex v : sats) add_satellite(c, v);
  }

  void add_satellite(Vertex c, Vertex v) {
    if (!is_center(c)) throw PreconditionError(std::to_string(c) + " is not a center");
    if (covered(v)) throw PreconditionError("satellite " + std::to_string(v) + " already covered");
    take(v, c);
    ++sat_count_[idx(c)];
  }

  void remove_satellite(Vertex v) {
    if (!is_satellite(v)) throw PreconditionError(std::to_string(v) + " is not a satellite");
    --sat_count_[idx(owner(v))];
    release(v);
  }

  void remove_star(Vertex c) {
    if (!is_center(c)) throw PreconditionError(std::to_string(c) + " is not a center");
    for (Vertex u : g_->neighbors(c)) {
      if (owner_[idx(u)] == c) release(u);
    }
    sat_count_[idx(c)] = 0;
    release(c);
  }

  friend bool operator==(const SolveState& a, const SolveState& b) {
    return a.g_ == b.g_ && a.owner_ == b.owner_ && a.sat_count_ == b.sat_count_ && a.rem_deg_ == b.rem_deg_ &&
           a.covered_ == b.covered_;
  }

 private:
  static std::size_t idx(Vertex v) { return static_cast<std::size_t>(v); }

  void take(Vertex v, Vertex c) {
    owner_[idx(v)] = c;
    ++covered_;
    for (Vertex u : g_->neighbors(v)) --rem_deg_[idx(u)];
  }
  void release(Vertex v) {
    owner_[idx(v)] = 0;
    --covered_;
    for (Vertex u : g_->neighbors(v)) ++rem_deg_[idx(u)];
  }

  const Graph* g_ = nullptr;
  std::vector<Vertex> owner_;
  std::vector<int> sat_count_;
  std::vector<int> rem_deg_;
  int covered_ = 0;
};

/// Builds the state for p from scratch; throws when p is not a disjoint packing of g's edges.
inline SolveState rebuild_state(const Graph& g, const Packing& p) {
  const auto report = validate(g, p, Constraint{Mode::SeqKMinus, kUnbounded, 0});
  if (!report.ok()) throw PreconditionError("invalid packing: " + report.violations.front());
  SolveState state(g);
  for (const auto& s : p.stars) state.add_star(s.center, s.satellites);
  return state;
}

// JSON

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::KPlus: return "kplus";
    case Mode::SeqKMinus: return "seq";
    case Mode::KMinusT: return "kmt";
  }
  return "?";
}

inline Json to_json(const Star& s) {
  return Json{{"center", s.center}, {"satellites", s.satellites}};
}

inline Json to_json(const Packing& p, const Constraint& c) {
  Json stars = Json::array();
  for (const auto& s : p.stars) stars.push_back(to_json(s));
  Json j;
  j["mode"] = mode_name(c.mode);
  if (c.unbounded()) {
    j["k"] = "inf";
  } else {
    j["k"] = c.k;
  }
  if (c.mode == Mode::KMinusT) {
    j["t"] = c.t;
  } else {
    j["t"] = nullptr;
  }
  j["stars"] = std::move(stars);
  j["covered"] = p.coverage();
  return j;
}

struct PackingDocument {
  Packing packing;
  Constraint constraint;
  int covered = 0;
};

inline PackingDocument packing_from_json(const Json& j) {
  try {
    PackingDocument doc;
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "kplus") {
      doc.constraint.mode = Mode::KPlus;
    } else if (mode == "seq") {
      doc.constraint.mode = Mode::SeqKMinus;
    } else if (mode == "kmt") {
      doc.constraint.mode = Mode::KMinusT;
    } else {
      throw ParseError("unknown mode '" + mode + "'");
    }
    const auto& k = j.at("k");
    if (k.is_string()) {
      if (k.get<std::string>() != "inf") throw ParseError("k must be an integer or \"inf\"");
      doc.constraint.k = kUnbounded;
    } else {
      doc.constraint.k = k.get<int>();
    }
    const auto& t = j.at("t");
    doc.constraint.t = t.is_null() ? 0 : t.get<int>();
    doc.constraint.check();
    for (const auto& s : j.at("stars")) {
      doc.packing.stars.emplace_back(s.at("center").get<Vertex>(), s.at("satellites").get<std::vector<Vertex>>());
    }
    doc.covered = j.at("covered").get<int>();
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("packing JSON: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("packing JSON: ") + e.what());
  }
}

}  // namespace starpack
