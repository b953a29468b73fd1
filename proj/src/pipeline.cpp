#include "vrp2l/pipeline.hpp"

#include <sstream>

#include "vrp2l/solution_build.hpp"

namespace vrp2l {

PipelineResult run_pipeline(const Instance& instance, PipelineOptions options) {
  PipelineResult result;
  result.initial = initial_solution(instance, options.construct);

  std::ostringstream telemetry;
  telemetry << "iteration,elapsed_ms,current_mileage,best_mileage\n";
  options.tabu.telemetry = &telemetry;
  result.after_tabu = tabu_search(result.initial, instance, options.tabu);
  result.convergence_csv = telemetry.str();

  result.final = options.run_postopt
                     ? postoptimize(result.after_tabu, instance, options.postopt)
                     : result.after_tabu;

  std::vector<Route> routes = result.final.routes;
  result.diagnostics = simulate_queues(routes, instance);
  return result;
}

}  // namespace vrp2l
