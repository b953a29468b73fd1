#pragma once

#include <vector>

#include "vrp2l/model.hpp"
#include "vrp2l/routing.hpp"

namespace vrp2l {

struct PostoptParams {
  RouteSolverParams route;
  int held_karp_cap = 15;  // exact DP up to this many sub-routes
  Minutes merged_horizon = kMergedHorizon;
};

struct SubrouteEndpoints {
  LocationId first;  // first non-yard stop
  LocationId last;   // last non-yard stop
};

struct SubrouteOrdering {
  std::vector<int> order;
  bool exact = true;  // false when the size exceeded the DP cap
};

// Minimum-connection ordering of sub-routes anchored at the yard; exact
// Held-Karp up to the cap, nearest-neighbour plus pairwise exchange beyond.
SubrouteOrdering sequence_subroutes(const std::vector<SubrouteEndpoints>& subroutes,
                                    const LocationId& yard, const Instance& instance,
                                    int held_karp_cap = 15);

// Replaces trucks with smaller-surface idle trucks when the swap strictly
// lowers total mileage cost and stays feasible. Iterates to a fixpoint.
Solution downsize_trucks(const Solution& solution, const Instance& instance,
                         const PostoptParams& params = {});

// Greedily merges route pairs into multi-trip tours (no yard return between
// sub-routes) while total mileage does not increase and feasibility holds.
Solution merge_routes(const Solution& solution, const Instance& instance,
                      const PostoptParams& params = {});

// Full pass: downsizing and merging interleaved to a joint fixpoint.
Solution postoptimize(const Solution& solution, const Instance& instance,
                      const PostoptParams& params = {});

}  // namespace vrp2l
