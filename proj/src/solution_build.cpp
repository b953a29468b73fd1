#include "vrp2l/solution_build.hpp"

#include <algorithm>

namespace vrp2l {

std::optional<Solution> assemble_solution(std::vector<TruckLoad> loads,
                                          const Instance& instance, GtwReport* report_out) {
  std::sort(loads.begin(), loads.end(),
            [](const TruckLoad& a, const TruckLoad& b) { return a.truck < b.truck; });

  std::vector<Route> routes;
  routes.reserve(loads.size());
  for (const TruckLoad& l : loads) routes.push_back(l.route);

  GtwReport report = simulate_queues(routes, instance);
  if (report_out) *report_out = report;
  if (!report.feasible) return std::nullopt;

  Solution sol;
  for (size_t i = 0; i < loads.size(); ++i) {
    for (const ShipmentId& sid : loads[i].shipments)
      sol.assignment.truck_of[sid] = loads[i].truck;
    sol.routes.push_back(routes[i]);
    sol.placements.push_back(loads[i].placement);
  }
  sol.total_mileage = total_mileage(sol, instance);
  return sol;
}

std::map<TruckId, std::vector<ShipmentId>> loads_by_truck(const Solution& solution) {
  std::map<TruckId, std::vector<ShipmentId>> loads;
  for (const auto& [sid, tid] : solution.assignment.truck_of) loads[tid].push_back(sid);
  return loads;
}

}  // namespace vrp2l
