#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "vrp2l/io.hpp"
#include "vrp2l/oracle.hpp"
#include "vrp2l/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace vrp2l;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitInputError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct SolveOptions {
  std::string instance_path;
  std::string out_dir = "run";
  double budget_seconds = 60;
  long iterations = -1;
  std::uint64_t seed = 1;
  int tenure = 0;
  int bundle_threshold = 0;
  bool no_bundle = false;
  bool no_postopt = false;
  double pack_threshold = 0.85;
  int beam_width = 5;
  std::vector<double> pack_weights{1.0, 0.5, 1.0};
  double cluster_radius_scale = 1.2;
  long route_node_budget = 200'000;
  int threads = 0;
};

PipelineOptions to_pipeline_options(const SolveOptions& o) {
  PipelineOptions opt;
  RouteSolverParams route;
  route.node_budget = o.route_node_budget;
  route.pack.prejudge_threshold = o.pack_threshold;
  route.pack.beam_width = o.beam_width;
  route.pack.w_waste = o.pack_weights[0];
  route.pack.w_irregularity = o.pack_weights[1];
  route.pack.w_cover = o.pack_weights[2];

  opt.construct.radius_scale = o.cluster_radius_scale;
  opt.construct.route = route;
  opt.tabu.route = route;
  opt.tabu.budget_seconds = o.budget_seconds;
  opt.tabu.iteration_budget = o.iterations;
  opt.tabu.tenure = o.tenure;
  opt.tabu.bundle_break_threshold = o.bundle_threshold;
  opt.tabu.bundling = !o.no_bundle;
  opt.tabu.threads = o.threads;
  opt.postopt.route = route;
  opt.run_postopt = !o.no_postopt;
  return opt;
}

ordered_json solve_config_json(const SolveOptions& o, const std::string& instance_text) {
  ordered_json j;
  j["instance"] = o.instance_path;
  j["instance_fnv1a"] = fnv1a(instance_text);
  j["seed"] = o.seed;
  j["budget_seconds"] = o.budget_seconds;
  j["iterations"] = o.iterations;
  j["tenure"] = o.tenure;
  j["bundle_threshold"] = o.bundle_threshold;
  j["no_bundle"] = o.no_bundle;
  j["no_postopt"] = o.no_postopt;
  j["pack_threshold"] = o.pack_threshold;
  j["beam_width"] = o.beam_width;
  j["pack_weights"] = o.pack_weights;
  j["cluster_radius_scale"] = o.cluster_radius_scale;
  j["route_node_budget"] = o.route_node_budget;
  j["threads"] = o.threads;
  return j;
}

int run_solve(const SolveOptions& o) {
  std::string text = read_file(o.instance_path);
  Instance instance = parse_instance(text);

  fs::create_directories(o.out_dir);
  write_file(fs::path(o.out_dir) / "run_config.json",
             solve_config_json(o, text).dump(2) + "\n");

  PipelineResult result;
  try {
    result = run_pipeline(instance, to_pipeline_options(o));
  } catch (const ConstructionError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  }

  write_file(fs::path(o.out_dir) / "solution.json",
             write_solution(result.final, instance, &result.diagnostics));
  write_file(fs::path(o.out_dir) / "convergence.csv", result.convergence_csv);

  ordered_json summary;
  summary["initial_mileage"] = result.initial.total_mileage;
  summary["tabu_mileage"] = result.after_tabu.total_mileage;
  if (!o.no_postopt) summary["postopt_mileage"] = result.final.total_mileage;
  summary["trucks_used"] = result.final.routes.size();
  summary["feasible"] = result.diagnostics.feasible;
  write_file(fs::path(o.out_dir) / "summary.json", summary.dump(2) + "\n");

  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

struct BenchCombo {
  std::string name;
  SolveOptions overrides;
};

std::vector<BenchCombo> default_grid(const SolveOptions& base) {
  std::vector<BenchCombo> grid;
  for (int tenure : {4, 8, 16})
    for (int beam : {3, 5})
      for (double threshold : {0.8, 0.9})
        for (double w2 : {0.25, 0.5}) {
          SolveOptions o = base;
          o.tenure = tenure;
          o.beam_width = beam;
          o.pack_threshold = threshold;
          o.pack_weights = {1.0, w2, 1.0};
          std::ostringstream name;
          name << "tenure" << tenure << "_beam" << beam << "_thr" << threshold << "_w2" << w2;
          grid.push_back({name.str(), o});
        }
  return grid;
}

std::vector<BenchCombo> grid_from_file(const std::string& path, const SolveOptions& base) {
  ordered_json doc = ordered_json::parse(read_file(path));
  std::vector<BenchCombo> grid;
  for (const auto& j : doc) {
    SolveOptions o = base;
    if (j.contains("tenure")) o.tenure = j["tenure"].get<int>();
    if (j.contains("beam_width")) o.beam_width = j["beam_width"].get<int>();
    if (j.contains("pack_threshold")) o.pack_threshold = j["pack_threshold"].get<double>();
    if (j.contains("pack_weights")) o.pack_weights = j["pack_weights"].get<std::vector<double>>();
    if (j.contains("bundle_threshold")) o.bundle_threshold = j["bundle_threshold"].get<int>();
    if (j.contains("no_bundle")) o.no_bundle = j["no_bundle"].get<bool>();
    grid.push_back({j.value("name", "combo" + std::to_string(grid.size())), o});
  }
  return grid;
}

int run_bench(const SolveOptions& base, const std::vector<std::uint64_t>& seeds,
              const std::string& grid_path, int parallel) {
  std::string text = read_file(base.instance_path);
  Instance instance = parse_instance(text);

  std::vector<BenchCombo> grid =
      grid_path.empty() ? default_grid(base) : grid_from_file(grid_path, base);

  fs::create_directories(base.out_dir);

  struct Run {
    std::string combo;
    std::uint64_t seed;
    SolveOptions options;
  };
  std::vector<Run> runs;
  for (const BenchCombo& combo : grid)
    for (std::uint64_t seed : seeds) {
      SolveOptions o = combo.overrides;
      o.seed = seed;
      runs.push_back({combo.name, seed, o});
    }

  struct Row {
    std::string combo;
    std::uint64_t seed;
    double initial = 0, final_mileage = 0;
    bool ok = false;
    std::string error;
  };
  std::vector<Row> rows(runs.size());

  auto run_one = [&](size_t i) {
    const Run& run = runs[i];
    Row row;
    row.combo = run.combo;
    row.seed = run.seed;
    try {
      PipelineResult result = run_pipeline(instance, to_pipeline_options(run.options));
      row.initial = result.initial.total_mileage;
      row.final_mileage = result.final.total_mileage;
      row.ok = true;
      std::string tag = run.combo + "_seed" + std::to_string(run.seed);
      write_file(fs::path(base.out_dir) / ("convergence_" + tag + ".csv"),
                 result.convergence_csv);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows[i] = std::move(row);
  };

  if (parallel <= 1) {
    for (size_t i = 0; i < runs.size(); ++i) run_one(i);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= runs.size()) return;
        run_one(i);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < parallel; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<size_t> order(rows.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (rows[a].ok != rows[b].ok) return rows[a].ok;
    if (rows[a].final_mileage != rows[b].final_mileage)
      return rows[a].final_mileage < rows[b].final_mileage;
    return rows[a].combo < rows[b].combo;
  });

  std::ostringstream table;
  table << "rank,combo,seed,initial_mileage,final_mileage,status\n";
  int rank = 1;
  for (size_t i : order) {
    const Row& r = rows[i];
    table << rank++ << "," << r.combo << "," << r.seed << "," << r.initial << ","
          << r.final_mileage << "," << (r.ok ? "ok" : ("error: " + r.error)) << "\n";
  }
  write_file(fs::path(base.out_dir) / "ranked.csv", table.str());
  std::cout << table.str();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D-loading multi-depot heterogeneous VRPTW solver"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic instance");
  GeneratorConfig gen_cfg;
  std::string gen_out = "instance.json";
  gen->add_option("--seed", gen_cfg.seed);
  gen->add_option("--suppliers", gen_cfg.n_suppliers);
  gen->add_option("--warehouses", gen_cfg.n_warehouses);
  gen->add_option("--shipments", gen_cfg.n_shipments);
  gen->add_option("--trucks", gen_cfg.n_trucks);
  gen->add_option("--cities", gen_cfg.n_cities);
  gen->add_option("--bin-variants", gen_cfg.bin_variants);
  gen->add_option("--tightness", gen_cfg.window_tightness);
  gen->add_option("--dock-min", gen_cfg.dock_count_min);
  gen->add_option("--dock-max", gen_cfg.dock_count_max);
  gen->add_option("-o,--output", gen_out);

  // solve
  auto* solve = app.add_subcommand("solve", "run the full pipeline on an instance");
  SolveOptions solve_opts;
  solve->add_option("instance", solve_opts.instance_path)->required();
  solve->add_option("-o,--output", solve_opts.out_dir);
  solve->add_option("--budget-seconds", solve_opts.budget_seconds);
  solve->add_option("--iterations", solve_opts.iterations);
  solve->add_option("--seed", solve_opts.seed);
  solve->add_option("--tenure", solve_opts.tenure);
  solve->add_option("--bundle-threshold", solve_opts.bundle_threshold);
  solve->add_flag("--no-bundle", solve_opts.no_bundle);
  solve->add_flag("--no-postopt", solve_opts.no_postopt);
  solve->add_option("--pack-threshold", solve_opts.pack_threshold);
  solve->add_option("--beam-width", solve_opts.beam_width);
  solve->add_option("--pack-weights", solve_opts.pack_weights)->expected(3);
  solve->add_option("--cluster-radius-scale", solve_opts.cluster_radius_scale);
  solve->add_option("--route-node-budget", solve_opts.route_node_budget);
  solve->add_option("--threads", solve_opts.threads);

  // bench
  auto* bench = app.add_subcommand("bench", "run a parameter/seed matrix");
  SolveOptions bench_opts;
  std::vector<std::uint64_t> bench_seeds{1};
  std::string bench_grid;
  int bench_parallel = 1;
  bench->add_option("--instance", bench_opts.instance_path)->required();
  bench->add_option("-o,--output", bench_opts.out_dir);
  bench->add_option("--budget-seconds", bench_opts.budget_seconds);
  bench->add_option("--iterations", bench_opts.iterations);
  bench->add_option("--seeds", bench_seeds)->delimiter(',');
  bench->add_option("--grid", bench_grid);
  bench->add_option("--parallel", bench_parallel);
  bench->add_option("--threads", bench_opts.threads);

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "exact solve of a tiny instance");
  std::string oracle_instance, oracle_out;
  oracle_cmd->add_option("instance", oracle_instance)->required();
  oracle_cmd->add_option("-o,--output", oracle_out);

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "check a solution document");
  std::string val_instance, val_solution;
  validate_cmd->add_option("instance", val_instance)->required();
  validate_cmd->add_option("solution", val_solution)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      Instance instance = generate_instance(gen_cfg);
      write_file(gen_out, serialize_instance(instance));
      std::cout << "wrote " << gen_out << " (" << instance.shipments.size() << " shipments, "
                << instance.trucks.size() << " trucks)\n";
      return kExitOk;
    }
    if (solve->parsed()) return run_solve(solve_opts);
    if (bench->parsed()) return run_bench(bench_opts, bench_seeds, bench_grid, bench_parallel);
    if (oracle_cmd->parsed()) {
      Instance instance = parse_instance(read_file(oracle_instance));
      OracleResult result = exact_solve(instance);
      if (!result.feasible) {
        std::cout << "infeasible\n";
        return kExitInfeasible;
      }
      std::cout << "optimal mileage: " << result.mileage << "\n";
      if (!oracle_out.empty())
        write_file(oracle_out, write_solution(*result.solution, instance));
      return kExitOk;
    }
    if (validate_cmd->parsed()) {
      Instance instance = parse_instance(read_file(val_instance));
      Solution solution = parse_solution(read_file(val_solution), instance);
      std::vector<Violation> violations = validate_solution(solution, instance);
      if (violations.empty()) {
        std::cout << "OK: no violations, mileage " << total_mileage(solution, instance) << "\n";
        return kExitOk;
      }
      for (const Violation& v : violations) {
        std::cout << to_string(v.family) << ": " << v.rule;
        for (const std::string& e : v.entities) std::cout << " [" << e << "]";
        std::cout << "\n";
      }
      return kExitInfeasible;
    }
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const OracleError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ModelError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
