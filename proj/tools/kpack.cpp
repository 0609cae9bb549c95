// kpack: k-set packing solver toolkit.
//
// Subcommands: solve, exact, gen-random, gen-lowerbound, verify, bench.
// Exit codes: 0 success, 2 usage or I/O error, 3 internal consistency error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "kpack/graphs.hpp"
#include "kpack/local_search.hpp"
#include "kpack/lowerbound.hpp"
#include "kpack/oracle.hpp"

using json = nlohmann::ordered_json;
using namespace kpack;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

class cli_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cli_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw cli_error("cannot write " + path);
  out << content;
}

SetSystem load_instance(const std::string& path) {
  return parse_instance(read_file(path));
}

Packing load_packing(const std::string& path) {
  json j = json::parse(read_file(path));
  Packing p;
  const json* arr = nullptr;
  if (j.is_array())
    arr = &j;
  else if (j.contains("packing"))
    arr = &j["packing"];
  else if (j.contains("a_pack"))
    arr = &j["a_pack"];
  else
    throw cli_error(path + ": expected a packing array");
  for (const auto& v : *arr) p.members.push_back(v.get<int>());
  std::sort(p.members.begin(), p.members.end());
  return p;
}

struct CommonOut {
  std::string json_path;
  bool quiet = false;
};

void emit(const CommonOut& out, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (!out.quiet) std::cout << text;
  if (!out.json_path.empty()) write_file(out.json_path, text);
}

struct SolveArgs {
  std::string instance;
  std::string mode = "citc";
  std::string trials = "200";
  std::string initial;
  std::string dump_aux;
  SearchParams params;
};

json params_json(const SetSystem& sys, const SearchParams& p) {
  return json{{"epsilon", p.epsilon},
              {"p_small", p.p_small},
              {"p_path", p.p_path},
              {"tail_cap", p.tail_cap},
              {"t", p.color_groups},
              {"kt", sys.k * p.color_groups},
              {"trials", p.exhaustive_colorings ? json("exhaustive")
                                                : json(p.trials)},
              {"max_add", p.max_add},
              {"tail_cap_formula", p.tail_cap_formula(sys.k)},
              {"p_path_formula", p.p_path_formula(sys.n_sets())},
              {"ln_2N", sys.n_sets() > 1
                            ? json(trial_count_log(sys.n_sets(), sys.k,
                                                   p.epsilon))
                            : json()}};
}

int cmd_solve(SolveArgs& args, const CommonOut& out) {
  SetSystem sys = load_instance(args.instance);
  auto mode = mode_from_name(args.mode);
  if (!mode) throw CLI::ValidationError("--mode", "unknown mode " + args.mode);
  args.params.mode = *mode;
  if (args.trials == "exhaustive") {
    args.params.exhaustive_colorings = true;
  } else {
    args.params.trials = std::stoi(args.trials);
  }
  std::optional<Packing> initial;
  if (!args.initial.empty()) initial = load_packing(args.initial);

  RunStats stats;
  const auto start = std::chrono::steady_clock::now();
  Packing result = run_li(sys, args.params, &stats, initial);
  const auto stop = std::chrono::steady_clock::now();
  const double wall_ms =
      std::chrono::duration<double, std::milli>(stop - start).count();

  if (!verify_packing(sys, result))
    throw internal_error("emitted packing failed verification");

  if (!args.dump_aux.empty()) {
    auto cg = build_conflict_graph(sys, result);
    auto g = build_aux_multigraph(sys, cg, {}, std::nullopt);
    write_file(args.dump_aux, dump_aux_multigraph(cg, g));
  }

  json j{{"seed", args.params.seed},
         {"k", sys.k},
         {"n_sets", sys.n_sets()},
         {"algorithm", mode_name(args.params.mode)},
         {"packing", result.members},
         {"size", result.size()},
         {"iterations", stats.iterations},
         {"wall_ms", wall_ms},
         {"params", params_json(sys, args.params)},
         {"diagnostics",
          {{"passes", stats.passes},
           {"small_improvements", stats.small_improvements},
           {"citc_improvements", stats.citc_improvements},
           {"trials_run", stats.trials_run},
           {"tail_changes_found", stats.citc.tail_changes},
           {"groups_found", stats.citc.groups},
           {"edges_built", stats.citc.edges},
           {"dp_states", stats.citc.dp_states},
           {"shapes_tried", stats.citc.shapes_tried}}}};
  emit(out, j);
  return kExitOk;
}

int cmd_exact(const std::string& instance, long long budget,
              const CommonOut& out) {
  SetSystem sys = load_instance(instance);
  const auto start = std::chrono::steady_clock::now();
  ExactResult res = exact_optimum(sys, budget);
  const auto stop = std::chrono::steady_clock::now();
  if (!verify_packing(sys, res.packing))
    throw internal_error("exact packing failed verification");
  json j{{"k", sys.k},
         {"n_sets", sys.n_sets()},
         {"algorithm", "exact"},
         {"packing", res.packing.members},
         {"size", res.packing.size()},
         {"proved", res.proved},
         {"nodes", res.nodes},
         {"wall_ms",
          std::chrono::duration<double, std::milli>(stop - start).count()}};
  emit(out, j);
  return kExitOk;
}

int cmd_gen_random(int n, int k, int universe, std::uint64_t seed,
                   const std::string& out_path) {
  SetSystem sys = gen_random(n, k, universe, seed);
  const std::string text = serialize_instance(sys);
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return kExitOk;
}

int cmd_gen_lowerbound(int n, int k, std::uint64_t seed, int verify_t,
                       int retries, const std::string& out_path,
                       const CommonOut& out) {
  StabilityReport report;
  auto inst = gen_lower_bound_stable(n, k, seed, verify_t, retries, &report);
  if (!inst)
    throw cli_error("no stable instance within " + std::to_string(retries) +
                    " retries");
  const std::string text = serialize_instance(inst->sys);
  if (!out_path.empty()) write_file(out_path, text);

  json sidecar{{"n", n},
               {"k", k},
               {"seed", seed},
               {"stable_seed", inst->seed},
               {"retries", report.retries},
               {"verify_t", verify_t},
               {"a_size", inst->a_pack.size()},
               {"b_size", inst->b_pack.size()},
               {"a_pack", inst->a_pack.members},
               {"b_pack", inst->b_pack.members}};
  if (!out_path.empty())
    write_file(out_path + ".json", sidecar.dump(2) + "\n");
  emit(out, sidecar);
  if (out_path.empty() && out.quiet) std::cout << text;
  return kExitOk;
}

int cmd_verify(const std::string& instance, const std::string& packing_path,
               const CommonOut& out) {
  SetSystem sys = load_instance(instance);
  Packing p = load_packing(packing_path);
  const bool valid = verify_packing(sys, p);
  json j{{"valid", valid}, {"size", p.size()}, {"n_sets", sys.n_sets()}};
  emit(out, j);
  return kExitOk;
}

struct BenchArgs {
  std::vector<std::string> instances;
  std::string modes = "greedy,small_only,citc";
  int reps = 1;
  bool with_exact = false;
  long long budget = 10'000'000;
  std::string out_csv;
  std::string out_jsonl;
  SearchParams params;
};

int cmd_bench(BenchArgs& args, const CommonOut& out) {
  std::vector<std::string> mode_names;
  {
    std::stringstream ss(args.modes);
    std::string item;
    while (std::getline(ss, item, ',')) mode_names.push_back(item);
  }
  std::sort(args.instances.begin(), args.instances.end());

  std::ostringstream csv, jsonl;
  csv << "instance,mode,seed,rep,size,opt,proved,ratio\n";
  for (const auto& path : args.instances) {
    for (const auto& mode_str : mode_names) {
      for (int rep = 0; rep < args.reps; ++rep) {
        json row{{"instance", path}, {"mode", mode_str}, {"rep", rep},
                 {"seed", args.params.seed}};
        std::string size_s, opt_s, proved_s, ratio_s;
        try {
          SetSystem sys = load_instance(path);
          auto mode = mode_from_name(mode_str);
          if (!mode) throw cli_error("unknown mode " + mode_str);
          SearchParams params = args.params;
          params.mode = *mode;
          RunStats stats;
          const auto start = std::chrono::steady_clock::now();
          Packing result = run_li(sys, params, &stats);
          const auto stop = std::chrono::steady_clock::now();
          if (!verify_packing(sys, result))
            throw internal_error("bench packing failed verification");
          row["size"] = result.size();
          row["iterations"] = stats.iterations;
          row["wall_ms"] =
              std::chrono::duration<double, std::milli>(stop - start).count();
          size_s = std::to_string(result.size());
          if (args.with_exact) {
            ExactResult er = exact_optimum(sys, args.budget);
            row["opt"] = er.packing.size();
            row["proved"] = er.proved;
            opt_s = std::to_string(er.packing.size());
            proved_s = er.proved ? "1" : "0";
            if (er.proved) {
              const double ratio =
                  double(er.packing.size()) / double(result.size());
              row["ratio"] = ratio;
              std::ostringstream r;
              r << ratio;
              ratio_s = r.str();
            }
          }
        } catch (const std::exception& e) {
          row["error"] = e.what();
        }
        csv << path << ',' << mode_str << ',' << args.params.seed << ','
            << rep << ',' << size_s << ',' << opt_s << ',' << proved_s << ','
            << ratio_s << '\n';
        jsonl << row.dump() << '\n';
      }
    }
  }
  if (!args.out_csv.empty()) write_file(args.out_csv, csv.str());
  if (!args.out_jsonl.empty()) write_file(args.out_jsonl, jsonl.str());
  if (!out.quiet) std::cout << csv.str();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kpack: k-set packing local-search toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOut out;
  app.add_option("--json", out.json_path, "write result JSON to this path");
  app.add_flag("--quiet", out.quiet, "suppress stdout result");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "run the local-improvement solver");
  s->add_option("instance", solve.instance)->required();
  s->add_option("--mode", solve.mode,
                "greedy | small_only | binocular | citc");
  s->add_option("--epsilon", solve.params.epsilon);
  s->add_option("--trials", solve.trials, "coloring trials, or 'exhaustive'");
  s->add_option("--seed", solve.params.seed);
  s->add_option("--p-small", solve.params.p_small);
  s->add_option("--p-path", solve.params.p_path);
  s->add_option("--tail-cap", solve.params.tail_cap);
  s->add_option("--t", solve.params.color_groups, "color groups (kt = k*t)");
  s->add_option("--max-add", solve.params.max_add);
  s->add_option("--exhaustive-budget", solve.params.exhaustive_budget);
  s->add_option("--initial", solve.initial, "start from this packing (JSON)");
  s->add_option("--dump-aux", solve.dump_aux,
                "dump the final auxiliary multigraph");

  std::string exact_instance;
  long long exact_budget = 10'000'000;
  auto* e = app.add_subcommand("exact", "branch-and-bound optimum");
  e->add_option("instance", exact_instance)->required();
  e->add_option("--budget", exact_budget, "node budget");

  int gr_n = 20, gr_k = 3, gr_universe = 30;
  std::uint64_t gr_seed = 1;
  std::string gr_out;
  auto* gr = app.add_subcommand("gen-random", "random instance generator");
  gr->add_option("--n", gr_n)->required();
  gr->add_option("--k", gr_k)->required();
  gr->add_option("--universe", gr_universe)->required();
  gr->add_option("--seed", gr_seed);
  gr->add_option("-o,--out", gr_out);

  int lb_n = 30, lb_k = 3, lb_verify_t = 3, lb_retries = 64;
  std::uint64_t lb_seed = 1;
  std::string lb_out;
  auto* lb = app.add_subcommand("gen-lowerbound",
                                "adversarial locality-gap instance");
  lb->add_option("--n", lb_n)->required();
  lb->add_option("--k", lb_k)->required();
  lb->add_option("--seed", lb_seed);
  lb->add_option("--verify-t", lb_verify_t);
  lb->add_option("--retries", lb_retries);
  lb->add_option("-o,--out", lb_out);

  std::string v_instance, v_packing;
  auto* v = app.add_subcommand("verify", "check a packing against an instance");
  v->add_option("instance", v_instance)->required();
  v->add_option("--packing", v_packing)->required();

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "run modes across instances");
  b->add_option("instances", bench.instances)->required();
  b->add_option("--modes", bench.modes);
  b->add_option("--reps", bench.reps);
  b->add_flag("--with-exact", bench.with_exact);
  b->add_option("--budget", bench.budget);
  b->add_option("--seed", bench.params.seed);
  b->add_option("--epsilon", bench.params.epsilon);
  b->add_option("--trials", bench.params.trials);
  b->add_option("--t", bench.params.color_groups);
  b->add_option("--p-small", bench.params.p_small);
  b->add_option("--p-path", bench.params.p_path);
  b->add_option("--tail-cap", bench.params.tail_cap);
  b->add_option("--out-csv", bench.out_csv);
  b->add_option("--out-jsonl", bench.out_jsonl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    if (err.get_exit_code() == 0) return app.exit(err);  // --help
    app.exit(err);
    return kExitUsage;
  }

  try {
    if (*s) return cmd_solve(solve, out);
    if (*e) return cmd_exact(exact_instance, exact_budget, out);
    if (*gr) return cmd_gen_random(gr_n, gr_k, gr_universe, gr_seed, gr_out);
    if (*lb)
      return cmd_gen_lowerbound(lb_n, lb_k, lb_seed, lb_verify_t, lb_retries,
                                lb_out, out);
    if (*v) return cmd_verify(v_instance, v_packing, out);
    if (*b) return cmd_bench(bench, out);
  } catch (const internal_error& err) {
    std::cerr << "internal error: " << err.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
