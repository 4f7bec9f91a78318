#pragma once

#include <chrono>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "starpack/error.hpp"
#include "starpack/generate.hpp"
#include "starpack/graph.hpp"
#include "starpack/kmt.hpp"
#include "starpack/kplus.hpp"
#include "starpack/oracle.hpp"
#include "starpack/packing.hpp"
#include "starpack/rational.hpp"
#include "starpack/seq.hpp"
#include "starpack/trace.hpp"

namespace starpack {

enum class Algo { KPlus, KPlus2, Kmt, KmtBaseline, Seq, Oracle };

inline const char* algo_name(Algo a) {
  switch (a) {
    case Algo::KPlus: return "kplus";
    case Algo::KPlus2: return "kplus2";
    case Algo::Kmt: return "kmt";
    case Algo::KmtBaseline: return "kmt-baseline";
    case Algo::Seq: return "seq";
    case Algo::Oracle: return "oracle";
  }
  return "?";
}

inline Algo algo_from_name(const std::string& s) {
  for (Algo a : {Algo::KPlus, Algo::KPlus2, Algo::Kmt, Algo::KmtBaseline, Algo::Seq, Algo::Oracle}) {
    if (s == algo_name(a)) return a;
  }
  throw ParseError("unknown algorithm '" + s + "'");
}

/// "inf" or a positive integer.
inline int parse_k(const std::string& s) {
  if (s == "inf") return kUnbounded;
  long long v = 0;
  if (!detail::parse_int(s, v) || v < 1 || v > 1'000'000) throw ParseError("k must be a positive integer or inf");
  return static_cast<int>(v);
}

struct SolveRequest {
  Algo algo = Algo::KPlus;
  int k = 2;
  int t = 0;
  Mode oracle_mode = Mode::KPlus;  // which problem the oracle solves
  int max_iters = 0;
  OracleConfig oracle;
};

inline Constraint constraint_for(const SolveRequest& r) {
  switch (r.algo) {
    case Algo::KPlus:
    case Algo::KPlus2: return Constraint::kplus(r.k);
    case Algo::Kmt:
    case Algo::KmtBaseline: return Constraint::kmt(r.k, r.t);
    case Algo::Seq: return Constraint::seq(r.k);
    case Algo::Oracle: return Constraint::of(r.oracle_mode, r.k, r.t);
  }
  throw PreconditionError("unknown algorithm");
}

struct SolveOutcome {
  Packing packing;
  Constraint constraint;
  RunReport report;
};

inline SolveOutcome run_algorithm(const Graph& g, const SolveRequest& r) {
  SolveOutcome out;
  out.constraint = constraint_for(r);
  switch (r.algo) {
    case Algo::KPlus:
    case Algo::KPlus2: {
      KPlusConfig cfg;
      cfg.max_iters = r.max_iters;
      auto res = run_local_search_kplus(g, r.k, r.algo == Algo::KPlus2 ? KPlusVariant::TwoPlusExtra : KPlusVariant::General,
                                        cfg);
      out.packing = std::move(res.packing);
      out.report = std::move(res.report);
      break;
    }
    case Algo::Kmt: {
      KmtConfig cfg;
      cfg.max_iters = r.max_iters;
      auto res = run_local_search_kmt(g, r.k, r.t, cfg);
      out.packing = std::move(res.packing);
      out.report = std::move(res.report);
      break;
    }
    case Algo::KmtBaseline: {
      out.packing = solve_sequential_exact(g, r.k);
      out.report.trace = trim_t_stars(out.packing, r.t);
      break;
    }
    case Algo::Seq:
      out.packing = solve_sequential_exact(g, r.k);
      break;
    case Algo::Oracle:
      out.packing = oracle_max_packing(g, out.constraint, r.oracle).witness;
      break;
  }
  out.report.coverage = out.packing.coverage();
  return out;
}

/// The proven worst-case opt/apx for each algorithm; 1 for the exact ones.
inline Rational theorem_bound(Algo a, int k, int t) {
  switch (a) {
    case Algo::KPlus: return Rational(1) + Rational(static_cast<std::int64_t>(k) * k, 2LL * k + 1);
    case Algo::KPlus2: return {3, 2};
    case Algo::Kmt:
      if (k == kUnbounded) return {t + 3, t + 2};
      return {static_cast<std::int64_t>(k) * (t + 2) + 1, static_cast<std::int64_t>(k) * (t + 1) + 1};
    case Algo::KmtBaseline: return {t + 1, t};
    case Algo::Seq:
    case Algo::Oracle: return {1, 1};
  }
  return {1, 1};
}

struct ExperimentOptions {
  Family family = Family::Gnp;
  int count = 100;
  std::uint64_t seed = 1;
  int n_min = 8;
  int n_max = 12;
  double p_min = 0.1;
  double p_max = 0.6;
  int d = 3;
  int which = 1;
  SolveRequest solve;
  bool with_oracle = false;
  bool timing = false;  // real elapsed milliseconds; otherwise the column is 0 so output is byte-stable
};

/// The corpus: instance i draws its size, density and generator seed from one SplitMix64
/// stream seeded with opts.seed. Exhaustive families take consecutive indices instead.
inline std::vector<InstanceSpec> experiment_specs(const ExperimentOptions& opts) {
  if (opts.count < 0) throw PreconditionError("count must be non-negative");
  if (opts.n_min < 1 || opts.n_max < opts.n_min) throw PreconditionError("need 1 <= n-min <= n-max");
  if (opts.p_min < 0 || opts.p_max > 1 || opts.p_max < opts.p_min) throw PreconditionError("need 0 <= p-min <= p-max <= 1");
  SplitMix64 rng(opts.seed);
  std::vector<InstanceSpec> specs;
  for (int i = 0; i < opts.count; ++i) {
    InstanceSpec s;
    s.family = opts.family;
    switch (opts.family) {
      case Family::Gnp:
      case Family::Bipartite:
        s.n = rng.between(opts.n_min, opts.n_max);
        s.p = opts.p_min + (opts.p_max - opts.p_min) * rng.uniform();
        if (opts.family == Family::Bipartite) {
          s.n2 = s.n - s.n / 2;
          s.n /= 2;
          if (s.n == 0) s.n = 1;
        }
        break;
      case Family::RandomRegular:
        s.n = rng.between(opts.n_min, opts.n_max);
        if ((static_cast<long long>(s.n) * opts.d) % 2 != 0) ++s.n;
        s.d = opts.d;
        break;
      case Family::SmallExhaustive:
        s.n = opts.n_min;
        s.index = i;
        break;
      case Family::PullGadget:
      case Family::ReviseGadget:
        s.k = opts.solve.k;
        s.t = opts.solve.t;
        s.which = opts.which;
        break;
    }
    s.seed = rng.next();
    specs.push_back(s);
  }
  return specs;
}

struct ExperimentRow {
  int instance_id = 0;
  int n = 0;
  int m = 0;
  std::uint64_t seed = 0;
  Algo algo = Algo::KPlus;
  int k = 0;
  int t = 0;
  int apx = 0;
  std::optional<int> opt;
  std::optional<Rational> ratio;
  int iters = 0;
  double ms = 0;
};

inline const char* experiment_header() { return "instance_id,n,m,seed,algo,k,t,apx,opt,ratio,iters,ms"; }

inline std::string to_csv(const ExperimentRow& r) {
  const bool has_t = r.algo == Algo::Kmt || r.algo == Algo::KmtBaseline;
  char ms[32];
  std::snprintf(ms, sizeof ms, "%.3f", r.ms);
  std::string out = std::to_string(r.instance_id) + "," + std::to_string(r.n) + "," + std::to_string(r.m) + "," +
                    std::to_string(r.seed) + "," + algo_name(r.algo) + "," + k_to_string(r.k) + "," +
                    (has_t ? std::to_string(r.t) : "") + "," + std::to_string(r.apx) + ",";
  out += r.opt ? std::to_string(*r.opt) : "";
  out += ",";
  out += r.ratio ? r.ratio->str() : "";
  out += "," + std::to_string(r.iters) + "," + ms;
  return out;
}

struct ExperimentSummary {
  int rows = 0;
  int with_opt = 0;
  Rational max_ratio{1, 1};
  double mean_ratio = 1.0;
  int violations = 0;
  Rational bound{1, 1};
  int over_bound = 0;
  std::vector<std::string> messages;
};

inline std::string summary_line(const ExperimentSummary& s) {
  char mean[32];
  std::snprintf(mean, sizeof mean, "%.6f", s.mean_ratio);
  return "# rows=" + std::to_string(s.rows) + " with_opt=" + std::to_string(s.with_opt) +
         " max_ratio=" + s.max_ratio.str() + " mean_ratio=" + mean + " bound=" + s.bound.str() +
         " over_bound=" + std::to_string(s.over_bound) + " violations=" + std::to_string(s.violations);
}

/// Solves every instance, writes one CSV row each (header first) and returns the summary.
/// Stops at the first row whose packing fails validation or whose run reports an invariant
/// violation; that row is still counted in the summary.
inline ExperimentSummary run_experiment(const ExperimentOptions& opts, std::ostream& out) {
  const auto specs = experiment_specs(opts);
  const Constraint c = constraint_for(opts.solve);
  ExperimentSummary sum;
  sum.bound = theorem_bound(opts.solve.algo, opts.solve.k, opts.solve.t);
  double ratio_total = 0;
  out << experiment_header() << '\n';
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const Graph g = generate(specs[i]);
    ExperimentRow row;
    row.instance_id = static_cast<int>(i);
    row.n = g.order();
    row.m = g.size();
    row.seed = specs[i].seed;
    row.algo = opts.solve.algo;
    row.k = opts.solve.k;
    row.t = opts.solve.t;

    const auto start = std::chrono::steady_clock::now();
    const SolveOutcome res = run_algorithm(g, opts.solve);
    const auto stop = std::chrono::steady_clock::now();
    if (opts.timing) row.ms = std::chrono::duration<double, std::milli>(stop - start).count();
    row.apx = res.packing.coverage();
    row.iters = res.report.iterations;

    std::vector<std::string> bad = validate(g, res.packing, c).violations;
    for (const auto& v : res.report.violations) bad.push_back(v);
    if (opts.with_oracle && g.order() <= opts.solve.oracle.max_n) {
      row.opt = oracle_max_packing(g, c, opts.solve.oracle).opt_coverage;
      if (*row.opt < row.apx) bad.push_back("apx exceeds the oracle optimum");
      row.ratio = ratio_of(*row.opt, row.apx);
      ++sum.with_opt;
      ratio_total += row.ratio->to_double();
      if (*row.ratio > sum.max_ratio) sum.max_ratio = *row.ratio;
      if (*row.ratio > sum.bound) ++sum.over_bound;
    }
    out << to_csv(row) << '\n';
    ++sum.rows;
    if (!bad.empty()) {
      ++sum.violations;
      for (auto& b : bad) sum.messages.push_back("instance " + std::to_string(i) + ": " + b);
      break;
    }
  }
  if (sum.with_opt > 0) sum.mean_ratio = ratio_total / sum.with_opt;
  out << summary_line(sum) << '\n';
  return sum;
}

}  // namespace starpack
