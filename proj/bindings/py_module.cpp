#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vrp2l/io.hpp"
#include "vrp2l/oracle.hpp"
#include "vrp2l/pipeline.hpp"
#include "vrp2l/schedule.hpp"

namespace py = pybind11;
using namespace vrp2l;

namespace {

GeneratorConfig config_from_kwargs(std::uint64_t seed, int suppliers, int warehouses,
                                   int shipments, int trucks, int cities, int bin_variants,
                                   double tightness) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.n_suppliers = suppliers;
  cfg.n_warehouses = warehouses;
  cfg.n_shipments = shipments;
  cfg.n_trucks = trucks;
  cfg.n_cities = cities;
  cfg.bin_variants = bin_variants;
  cfg.window_tightness = tightness;
  return cfg;
}

py::list violations_to_list(const std::vector<Violation>& violations) {
  py::list out;
  for (const Violation& v : violations) {
    py::dict d;
    d["family"] = to_string(v.family);
    d["rule"] = v.rule;
    d["entities"] = v.entities;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_vrp2l, m) {
  m.doc() = "2D-loading multi-depot heterogeneous VRPTW solver";

  m.def("generate_instance", [](std::uint64_t seed, int suppliers, int warehouses,
                                int shipments, int trucks, int cities, int bin_variants,
                                double tightness) {
          return serialize_instance(generate_instance(config_from_kwargs(
              seed, suppliers, warehouses, shipments, trucks, cities, bin_variants, tightness)));
        },
        py::arg("seed") = 1, py::arg("suppliers") = 10, py::arg("warehouses") = 2,
        py::arg("shipments") = 30, py::arg("trucks") = 10, py::arg("cities") = 2,
        py::arg("bin_variants") = 6, py::arg("tightness") = 0.5);

  m.def("solve", [](const std::string& instance_json, double budget_seconds, long iterations,
                    bool bundling, bool run_postopt, int threads) {
          Instance instance = parse_instance(instance_json);
          PipelineOptions opts;
          opts.tabu.budget_seconds = budget_seconds;
          opts.tabu.iteration_budget = iterations;
          opts.tabu.bundling = bundling;
          opts.tabu.threads = threads;
          opts.run_postopt = run_postopt;
          PipelineResult result = run_pipeline(instance, opts);
          py::dict out;
          out["initial_mileage"] = result.initial.total_mileage;
          out["tabu_mileage"] = result.after_tabu.total_mileage;
          out["final_mileage"] = result.final.total_mileage;
          out["solution"] = write_solution(result.final, instance, &result.diagnostics);
          out["convergence_csv"] = result.convergence_csv;
          return out;
        },
        py::arg("instance_json"), py::arg("budget_seconds") = 10.0,
        py::arg("iterations") = -1, py::arg("bundling") = true, py::arg("run_postopt") = true,
        py::arg("threads") = 0);

  m.def("validate", [](const std::string& instance_json, const std::string& solution_json) {
          Instance instance = parse_instance(instance_json);
          Solution solution = parse_solution(solution_json, instance);
          return violations_to_list(validate_solution(solution, instance));
        },
        py::arg("instance_json"), py::arg("solution_json"));

  m.def("recompute_mileage",
        [](const std::string& instance_json, const std::string& solution_json) {
          Instance instance = parse_instance(instance_json);
          Solution solution = parse_solution(solution_json, instance);
          return total_mileage(solution, instance);
        },
        py::arg("instance_json"), py::arg("solution_json"));

  m.def("oracle_solve", [](const std::string& instance_json) {
          Instance instance = parse_instance(instance_json);
          OracleResult result = exact_solve(instance);
          py::dict out;
          out["feasible"] = result.feasible;
          out["mileage"] = result.mileage;
          if (result.solution) out["solution"] = write_solution(*result.solution, instance);
          return out;
        },
        py::arg("instance_json"));

  m.def("psi", [](int n, const std::vector<Minutes>& values) { return psi(n, values); },
        py::arg("n"), py::arg("values"));

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<ModelError>(m, "ModelError");
  py::register_exception<OracleError>(m, "OracleError");
}
