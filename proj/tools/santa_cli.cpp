// Command-line driver: solve pipeline, instance generators and component-level
// subcommands. Exit codes: 0 success, 1 input error, 2 reject/counterexample,
// 3 budget exhaustion.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "santa/aug_build.hpp"
#include "santa/augment.hpp"
#include "santa/canonical.hpp"
#include "santa/clp.hpp"
#include "santa/config.hpp"
#include "santa/continuous_greedy.hpp"
#include "santa/generators.hpp"
#include "santa/instance.hpp"
#include "santa/multilinear.hpp"
#include "santa/oracle.hpp"
#include "santa/pipeline.hpp"
#include "santa/rounding.hpp"

namespace {

using nlohmann::json;
using namespace santa;

struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string mode;
  double alpha = -1, gamma = -1;
  std::int64_t beta = -1;
  int h = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "config JSON file");
  cmd->add_option("--seed", opts.seed, "RNG seed")->each([&](const std::string&) {
    opts.seed_set = true;
  });
  cmd->add_option("--mode", opts.mode, "theory|practical");
  cmd->add_option("--alpha", opts.alpha, "coverage parameter");
  cmd->add_option("--beta", opts.beta, "congestion parameter");
  cmd->add_option("--gamma", opts.gamma, "approximation target parameter");
  cmd->add_option("--h", opts.h, "number of levels");
}

SolveConfig resolve_config(const CommonOpts& opts) {
  SolveConfig config;
  if (!opts.config_path.empty()) config = load_config(opts.config_path);
  if (opts.seed_set) config.seed = opts.seed;
  if (!opts.mode.empty()) {
    if (opts.mode == "theory")
      config.mode = Mode::Theory;
    else if (opts.mode == "practical")
      config.mode = Mode::Practical;
    else
      throw InputError("mode must be 'theory' or 'practical'");
  }
  if (opts.alpha > 0) config.practical.alpha = opts.alpha;
  if (opts.beta > 0) config.practical.beta = opts.beta;
  if (opts.gamma > 0) config.practical.gamma = opts.gamma;
  if (opts.h > 0) config.practical.h = opts.h;
  return config;
}

json run_header(const std::string& instance_path, const CommonOpts& opts,
                const SolveConfig& config) {
  json j;
  j["event"] = "run";
  j["format_version"] = 1;
  j["instance"] = instance_path;
  j["config_file"] = opts.config_path;
  j["seed"] = config.seed;
  j["config"] = json::parse(config_to_json(config));
  return j;
}

int cmd_solve(const std::string& instance_path, const CommonOpts& opts,
              const std::string& out_path, const std::string& report_path) {
  SolveConfig config = resolve_config(opts);
  Instance instance = load_instance(instance_path);

  std::ostringstream trace;
  trace << run_header(instance_path, opts, config).dump() << "\n";
  SolveReport report = solve_instance(instance, config, &trace);

  json alloc;
  alloc["format_version"] = 1;
  json assignments = json::object();
  for (int r = 0; r < instance.num_resources(); ++r) {
    const int p = report.search.allocation.owner[r];
    if (p != Assignment::kUnassigned)
      assignments[instance.resource_names()[r]] = instance.player_names()[p];
  }
  alloc["assignments"] = assignments;
  alloc["min_value"] = report.search.min_value;
  alloc["eta_star"] = report.search.eta_star;

  {
    json j;
    j["event"] = "result";
    j["eta_star"] = report.search.eta_star;
    j["min_value"] = report.search.min_value;
    j["exit_code"] = report.exit_code;
    trace << j.dump() << "\n";
  }

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << alloc.dump(2) << "\n";
  }
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    out << trace.str();
  }
  std::cout << "eta_star " << report.search.eta_star << "\n"
            << "min_value " << report.search.min_value << "\n"
            << "grid_points " << report.search.grid.size() << "\n"
            << (report.exit_code == 0   ? "status solved"
                : report.exit_code == 2 ? "status reject"
                                        : "status degraded")
            << "\n";
  return report.exit_code;
}

int cmd_gen(const std::string& family, int players, int resources,
            std::uint64_t seed, const std::string& out_path) {
  GeneratedInstance gen = generate_instance(family, players, resources, seed);
  std::ofstream out(out_path);
  if (!out) throw InputError("cannot write " + out_path);
  out << instance_to_json(gen.instance);

  json meta;
  meta["format_version"] = 1;
  meta["family"] = family;
  meta["players"] = players;
  meta["resources"] = resources;
  meta["seed"] = seed;
  if (gen.planted_optimum.has_value())
    meta["planted_optimum"] = *gen.planted_optimum;
  else
    meta["planted_optimum"] = nullptr;
  std::ofstream meta_out(out_path + ".meta.json");
  meta_out << meta.dump(2) << "\n";
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int component_check_submodular(const std::string& instance_path) {
  Instance instance = load_instance(instance_path, /*lenient_tables=*/true);
  bool any_violation = false;
  for (int p = 0; p < instance.num_players(); ++p) {
    SubmodularityVerdict v = check_submodular(instance.valuation(p));
    if (v.ok) {
      std::cout << instance.player_names()[p] << " ok\n";
      continue;
    }
    any_violation = true;
    const auto& viol = *v.violation;
    auto show = [&](const Bundle& b) {
      std::string s = "{";
      for (std::size_t i = 0; i < b.size(); ++i) {
        if (i) s += ",";
        s += instance.resource_names()[b[i]];
      }
      return s + "}";
    };
    std::cout << instance.player_names()[p] << " violation (" << viol.reason
              << "): A=" << show(viol.set_a) << " B=" << show(viol.set_b)
              << " r="
              << (viol.resource >= 0 ? instance.resource_names()[viol.resource]
                                     : std::string("-"))
              << "\n";
  }
  return any_violation ? 2 : 0;
}

// Bundled demo: six elements of value 0.4 with cap 1 over the box sum(x)<=2.5.
int component_cgreedy(std::uint64_t seed) {
  std::map<int, double> values;
  for (int i = 0; i < 6; ++i) values[i] = 0.4;
  ValuationOracle f = ValuationOracle::truncated_additive(std::move(values), 1.0);
  std::vector<int> ground{0, 1, 2, 3, 4, 5};
  const double box = 2.5;

  LinearMaxOracle oracle = [&](const std::vector<double>& w)
      -> std::optional<std::vector<double>> {
    // maximize w.x over {x in [0,1]^6 : sum x <= box}: greedy by weight.
    std::vector<int> order{0, 1, 2, 3, 4, 5};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return w[a] > w[b]; });
    std::vector<double> x(6, 0.0);
    double left = box;
    for (int i : order) {
      if (w[i] <= 0 || left <= 0) break;
      x[i] = std::min(1.0, left);
      left -= x[i];
    }
    return x;
  };
  CgreedyOptions opt;
  opt.seed = seed;
  CgreedyResult res = continuous_greedy(f, ground, oracle, opt);

  SubsetTable table(f, ground);
  const double got = multilinear_exact(table, res.point);
  // Exact optimum by grid search over the symmetric profile x_i = t.
  double best = 0.0;
  for (int step = 0; step <= 1000; ++step) {
    const double t = std::min(1.0, box / 6.0) * step / 1000.0;
    std::vector<double> x(6, t);
    best = std::max(best, multilinear_exact(table, x));
  }
  std::cout << "F(y) " << got << "\n" << "optimum " << best << "\n";
  return 0;
}

int component_brute(const std::string& instance_path) {
  Instance instance = load_instance(instance_path);
  BruteOptResult res = brute_opt(instance);
  std::cout << "opt " << res.value << "\n";
  for (int r = 0; r < instance.num_resources(); ++r) {
    const int p = res.allocation.owner[r];
    if (p != Assignment::kUnassigned)
      std::cout << instance.resource_names()[r] << " -> "
                << instance.player_names()[p] << "\n";
  }
  return 0;
}

int component_clp_membership(const std::string& instance_path,
                             const CommonOpts& opts) {
  SolveConfig config = resolve_config(opts);
  Instance instance = load_instance(instance_path);
  Params params = config.resolve(instance.num_resources() + instance.num_players());
  CanonicalReduction red = canonicalize(instance, params.gamma);
  Assignment sigma(red.canonical.num_resources());
  for (int cp = 0; cp < red.canonical.num_complex(); ++cp)
    sigma.owner[red.canonical.private_resource[cp]] =
        red.canonical.num_basic() + cp;
  BuiltAug built = build_aug_instance(red.canonical, sigma, params.h);
  if (built.nothing_to_augment()) {
    std::cout << "nothing to augment\n";
    return 0;
  }
  const double budget =
      config.round_budget(built.instance.total_vertices(), params.beta);
  ClpSolver clp(built.instance, config, params);
  MembershipResult res = clp.membership(
      0, {built.t_vertex},
      Eigen::VectorXd::Constant(built.instance.suffix_edge_count(0), budget));
  if (res.kind == MembershipResult::Kind::Accepted) {
    std::cout << "accepted (columns " << res.witness->entries.size() << ")\n";
    return 0;
  }
  if (res.kind == MembershipResult::Kind::Refuted) {
    std::cout << "refuted\n";
    return 2;
  }
  std::cout << "status " << res.status << "\n";
  return 3;
}

int component_round(const std::string& instance_path, const CommonOpts& opts) {
  SolveConfig config = resolve_config(opts);
  Instance instance = load_instance(instance_path);
  Params params = config.resolve(instance.num_resources() + instance.num_players());
  CanonicalReduction red = canonicalize(instance, params.gamma);
  Assignment sigma(red.canonical.num_resources());
  for (int cp = 0; cp < red.canonical.num_complex(); ++cp)
    sigma.owner[red.canonical.private_resource[cp]] =
        red.canonical.num_basic() + cp;
  BuiltAug built = build_aug_instance(red.canonical, sigma, params.h);
  if (built.nothing_to_augment()) {
    std::cout << "nothing to augment\n";
    return 0;
  }
  AugSolverOutcome out = lp_rounding_solver(built, {built.t_vertex}, config, params);
  if (out.kind == AugSolverOutcome::Kind::Solution) {
    std::cout << "rounded congestion " << out.solution.congestion << "\n";
    return 0;
  }
  if (out.kind == AugSolverOutcome::Kind::NoSolution) {
    std::cout << "no coverage-1 congestion-1 solution\n";
    return 2;
  }
  std::cout << "status " << out.status << "\n";
  return 3;
}

int component_augment_once(const std::string& instance_path, const CommonOpts& opts) {
  SolveConfig config = resolve_config(opts);
  Instance instance = load_instance(instance_path);
  Params params = config.resolve(instance.num_resources() + instance.num_players());
  CanonicalReduction red = canonicalize(instance, params.gamma);
  Assignment sigma(red.canonical.num_resources());
  for (int cp = 0; cp < red.canonical.num_complex(); ++cp)
    sigma.owner[red.canonical.private_resource[cp]] =
        red.canonical.num_basic() + cp;
  BuiltAug built = build_aug_instance(red.canonical, sigma, params.h);
  if (built.nothing_to_augment()) {
    std::cout << "nothing to augment\n";
    return 0;
  }
  auto solution = brute_aug(built.instance, {built.t_vertex});
  if (!solution.has_value()) {
    std::cout << "no (1,1) augmentation exists\n";
    return 2;
  }
  AugmentStats stats;
  augment_once(red.canonical, sigma, built, *solution, 1.0, 1, params.gamma, 1,
               false, &stats);
  std::cout << "uncovered " << stats.uncovered_before << " -> "
            << stats.uncovered_after << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"max-min fair allocation solver for monotone submodular valuations"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "run the full solver on an instance");
  std::string solve_instance_path, solve_out, solve_report;
  CommonOpts solve_opts;
  solve->add_option("instance", solve_instance_path, "instance JSON")->required();
  solve->add_option("--out", solve_out, "allocation JSON output path");
  solve->add_option("--report", solve_report, "JSON-lines report path");
  add_common(solve, solve_opts);

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  std::string gen_family, gen_out;
  int gen_players = 0, gen_resources = 0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--family", gen_family, "instance family")->required();
  gen->add_option("--players", gen_players, "number of players")->required();
  gen->add_option("--resources", gen_resources, "number of resources")->required();
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output path")->required();

  // component
  auto* comp = app.add_subcommand("component", "run one component");
  comp->require_subcommand(1);
  std::string comp_instance;
  CommonOpts comp_opts;
  auto* c_sub = comp->add_subcommand("check-submodular", "validate oracles");
  c_sub->add_option("instance", comp_instance)->required();
  auto* c_grd = comp->add_subcommand("cgreedy", "continuous greedy demo");
  std::uint64_t cg_seed = 0;
  c_grd->add_option("--seed", cg_seed);
  auto* c_brute = comp->add_subcommand("brute", "brute-force optimum");
  c_brute->add_option("instance", comp_instance)->required();
  auto* c_clp = comp->add_subcommand("clp-membership", "LP membership query");
  c_clp->add_option("instance", comp_instance)->required();
  add_common(c_clp, comp_opts);
  auto* c_round = comp->add_subcommand("round", "membership + rounding");
  c_round->add_option("instance", comp_instance)->required();
  add_common(c_round, comp_opts);
  auto* c_aug = comp->add_subcommand("augment-once", "one augmentation step");
  c_aug->add_option("instance", comp_instance)->required();
  add_common(c_aug, comp_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed())
      return cmd_solve(solve_instance_path, solve_opts, solve_out, solve_report);
    if (gen->parsed())
      return cmd_gen(gen_family, gen_players, gen_resources, gen_seed, gen_out);
    if (c_sub->parsed()) return component_check_submodular(comp_instance);
    if (c_grd->parsed()) return component_cgreedy(cg_seed);
    if (c_brute->parsed()) return component_brute(comp_instance);
    if (c_clp->parsed()) return component_clp_membership(comp_instance, comp_opts);
    if (c_round->parsed()) return component_round(comp_instance, comp_opts);
    if (c_aug->parsed()) return component_augment_once(comp_instance, comp_opts);
  } catch (const BudgetExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
