#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "starpack/packing.hpp"

namespace starpack {

enum class OpKind {
  Collect,
  ExtendCenters,
  PullSat,
  PullK,
  PullK_Kp1,
  PullKK,
  PullKKK,
  ReviseT,
  RevisePair,
  ReviseTriple,
  Trim,
};

inline std::string_view to_string(OpKind kind) {
  switch (kind) {
    case OpKind::Collect: return "Collect";
    case OpKind::ExtendCenters: return "ExtendCenters";
    case OpKind::PullSat: return "PullSat";
    case OpKind::PullK: return "PullK";
    case OpKind::PullK_Kp1: return "PullK_Kp1";
    case OpKind::PullKK: return "PullKK";
    case OpKind::PullKKK: return "PullKKK";
    case OpKind::ReviseT: return "ReviseT";
    case OpKind::RevisePair: return "RevisePair";
    case OpKind::ReviseTriple: return "ReviseTriple";
    case OpKind::Trim: return "Trim";
  }
  return "?";
}

struct TraceEvent {
  OpKind kind = OpKind::Collect;
  std::vector<Star> removed;
  std::vector<Star> added;
  int before = 0;
  int after = 0;
  std::string note;
};

struct RunReport {
  std::vector<TraceEvent> trace;
  int iterations = 0;  // accepted Collect/Pull/Revise operations
  int coverage = 0;
  std::vector<std::string> violations;

  int count(OpKind kind) const {
    return static_cast<int>(std::ranges::count_if(trace, [&](const TraceEvent& e) { return e.kind == kind; }));
  }
};

/// Stars of `before` missing from `after` and vice versa; both inputs in any order.
inline TraceEvent diff_event(OpKind kind, const Packing& before, const Packing& after) {
  TraceEvent e;
  e.kind = kind;
  e.before = before.coverage();
  e.after = after.coverage();
  auto a = before.stars;
  auto b = after.stars;
  std::ranges::sort(a);
  std::ranges::sort(b);
  std::ranges::set_difference(a, b, std::back_inserter(e.removed));
  std::ranges::set_difference(b, a, std::back_inserter(e.added));
  return e;
}

inline Json to_json(const TraceEvent& e) {
  auto stars = [](const std::vector<Star>& list) {
    Json arr = Json::array();
    for (const auto& s : list) arr.push_back(to_json(s));
    return arr;
  };
  Json j;
  j["kind"] = std::string(to_string(e.kind));
  j["removed"] = stars(e.removed);
  j["added"] = stars(e.added);
  j["before"] = e.before;
  j["after"] = e.after;
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

inline void write_trace_jsonl(std::ostream& out, const std::vector<TraceEvent>& trace) {
  for (const auto& e : trace) out << to_json(e).dump() << '\n';
}

}  // namespace starpack
