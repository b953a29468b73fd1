#pragma once

#include <string>
#include <vector>

#include "vrp2l/model.hpp"
#include "vrp2l/routing.hpp"

namespace vrp2l {

class ConstructionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SupplierAreas {
  std::vector<std::vector<LocationId>> groups;  // disjoint cover of all suppliers
  double modularity = 0;
};

// Proximity-graph community detection: edge between suppliers closer than
// radius_scale * mean pairwise distance, weight 1/distance; greedy
// agglomerative modularity merging. Deterministic.
SupplierAreas cluster_suppliers(const Instance& instance, double radius_scale = 1.2);

struct ConstructParams {
  double radius_scale = 1.2;
  RouteSolverParams route;
  int repair_round_cap = 10;
};

// Greedy initialization: shipments grouped by supplier area, sorted by
// source-destination distance descending, packed onto trucks one by one;
// A2 violations repaired by reassignment rounds. Returns a fully feasible
// solution or throws ConstructionError.
Solution initial_solution(const Instance& instance, const ConstructParams& params = {});

}  // namespace vrp2l
