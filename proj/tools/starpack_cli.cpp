#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "starpack/starpack.hpp"

using namespace starpack;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitInput = 2;
constexpr int kExitCap = 3;

Graph read_graph(const std::string& path) {
  if (path == "-") return parse_graph(std::cin);
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return parse_graph(in);
}

Mode mode_from_name(const std::string& s) {
  if (s == "kplus") return Mode::KPlus;
  if (s == "seq") return Mode::SeqKMinus;
  if (s == "kmt") return Mode::KMinusT;
  throw ParseError("unknown mode '" + s + "'");
}

void warn_large_t(const SolveRequest& r) {
  if ((r.algo == Algo::Kmt || (r.algo == Algo::Oracle && r.oracle_mode == Mode::KMinusT)) && r.t > 5) {
    std::cerr << "warning: t = " << r.t << " makes every Revise step enumerate large vertex sets\n";
  }
}

struct Common {
  std::string algo = "kplus";
  std::string k = "2";
  int t = 0;
  std::string mode = "kplus";
  int max_iters = 0;
  int oracle_max_n = 14;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--algo", algo, "kplus | kplus2 | kmt | kmt-baseline | seq | oracle");
    cmd->add_option("--k", k, "star size parameter, integer or inf");
    cmd->add_option("--t", t, "forbidden star size for kmt");
    cmd->add_option("--mode", mode, "problem the oracle solves: kplus | seq | kmt");
    cmd->add_option("--max-iters", max_iters, "iteration cap (0 = solver default)");
    cmd->add_option("--oracle-max-n", oracle_max_n, "largest n the oracle accepts");
  }

  SolveRequest request() const {
    SolveRequest r;
    r.algo = algo_from_name(algo);
    r.k = parse_k(k);
    r.t = t;
    r.oracle_mode = mode_from_name(mode);
    r.max_iters = max_iters;
    r.oracle.max_n = oracle_max_n;
    constraint_for(r);
    return r;
  }
};

int cmd_solve(const Common& common, const std::string& in, const std::string& trace_path) {
  const SolveRequest req = common.request();
  warn_large_t(req);
  const Graph g = read_graph(in);
  const SolveOutcome res = run_algorithm(g, req);
  const auto report = validate(g, res.packing, res.constraint);
  if (!report.ok() || !res.report.violations.empty()) {
    std::cerr << "internal error: solver output failed validation\n";
    for (const auto& v : report.violations) std::cerr << "  " << v << '\n';
    for (const auto& v : res.report.violations) std::cerr << "  " << v << '\n';
    return kExitValidation;
  }
  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    if (!out) throw ParseError("cannot write " + trace_path);
    write_trace_jsonl(out, res.report.trace);
  }
  std::cout << to_json(res.packing, res.constraint).dump() << '\n';
  return 0;
}

int cmd_verify(const std::string& graph_path, const std::string& packing_path) {
  const Graph g = read_graph(graph_path);
  std::ifstream in(packing_path);
  if (!in) throw ParseError("cannot open " + packing_path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("packing JSON: ") + e.what());
  }
  const PackingDocument doc = packing_from_json(j);
  auto report = validate(g, doc.packing, doc.constraint);
  if (doc.covered != doc.packing.coverage()) {
    report.violations.push_back("declared covered " + std::to_string(doc.covered) + " but stars cover " +
                                std::to_string(doc.packing.coverage()));
  }
  if (!report.ok()) {
    for (const auto& v : report.violations) std::cout << v << '\n';
    return kExitValidation;
  }
  std::cout << "ok " << doc.constraint.describe() << " covered=" << doc.packing.coverage() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Star packing solvers: k+ and k-/t local search, exact sequential packing, oracles"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "emit a graph in edge-list format");
  std::string family = "gnp";
  InstanceSpec spec;
  std::string out_path = "-";
  bool print_spec = false;
  gen->add_option("--family", family, "gnp | regular | bipartite | small | pull-gadget | revise-gadget");
  gen->add_option("--n", spec.n, "vertex count (left side for bipartite)");
  gen->add_option("--n2", spec.n2, "right side for bipartite");
  gen->add_option("--d", spec.d, "degree for regular");
  gen->add_option("--p", spec.p, "edge probability");
  gen->add_option("--k", spec.k, "gadget k");
  gen->add_option("--t", spec.t, "gadget t");
  gen->add_option("--which", spec.which, "gadget variant");
  gen->add_option("--index", spec.index, "index for small");
  gen->add_option("--seed", spec.seed, "64-bit seed");
  gen->add_option("--out", out_path, "output file, - for stdout");
  gen->add_flag("--print-spec", print_spec, "also write the spec JSON as a comment line");

  auto* solve = app.add_subcommand("solve", "solve one graph and print the packing JSON");
  Common solve_opts;
  solve_opts.add_to(solve);
  std::string in_path = "-";
  std::string trace_path;
  solve->add_option("--in", in_path, "graph file, - for stdin");
  solve->add_option("--trace", trace_path, "write the operation trace as JSONL");

  auto* verify = app.add_subcommand("verify", "check a packing JSON against a graph");
  std::string verify_graph;
  std::string verify_packing;
  verify->add_option("--in", verify_graph, "graph file")->required();
  verify->add_option("--packing", verify_packing, "packing JSON file")->required();

  auto* exp = app.add_subcommand("experiment", "solve a generated corpus and print CSV");
  Common exp_opts;
  exp_opts.add_to(exp);
  ExperimentOptions eo;
  std::string exp_family = "gnp";
  exp->add_option("--family", exp_family, "gnp | regular | bipartite | small | pull-gadget | revise-gadget");
  exp->add_option("--count", eo.count, "number of instances");
  exp->add_option("--seed", eo.seed, "corpus seed");
  exp->add_option("--n-min", eo.n_min, "smallest n (the n for small)");
  exp->add_option("--n-max", eo.n_max, "largest n");
  exp->add_option("--p-min", eo.p_min, "smallest edge probability");
  exp->add_option("--p-max", eo.p_max, "largest edge probability");
  exp->add_option("--d", eo.d, "degree for regular");
  exp->add_option("--which", eo.which, "gadget number");
  exp->add_flag("--with-oracle", eo.with_oracle, "compute the exact optimum when n fits the oracle");
  exp->add_flag("--timing", eo.timing, "fill the ms column with wall-clock time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*gen) {
      spec.family = family_from_name(family);
      const Graph g = generate(spec);
      std::ostringstream text;
      if (print_spec) text << "# " << to_json(spec).dump() << '\n';
      text << to_text(g);
      if (out_path == "-") {
        std::cout << text.str();
      } else {
        std::ofstream out(out_path);
        if (!out) throw ParseError("cannot write " + out_path);
        out << text.str();
      }
      return 0;
    }
    if (*solve) return cmd_solve(solve_opts, in_path, trace_path);
    if (*verify) return cmd_verify(verify_graph, verify_packing);
    if (*exp) {
      eo.family = family_from_name(exp_family);
      eo.solve = exp_opts.request();
      warn_large_t(eo.solve);
      const auto sum = run_experiment(eo, std::cout);
      if (sum.violations > 0) {
        for (const auto& m : sum.messages) std::cerr << m << '\n';
        return kExitValidation;
      }
      return 0;
    }
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return kExitCap;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
