#pragma once

#include <iosfwd>
#include <vector>

#include "vrp2l/model.hpp"
#include "vrp2l/routing.hpp"

namespace vrp2l {

struct Bundle {
  std::string id;
  LocationId source;
  LocationId destination;
  std::vector<ShipmentId> shipments;
};

// Partition by (source, destination); ordered by (source id, destination id).
// break_threshold > 0 splits bundles larger than that many shipments into
// ceil(size/threshold) sub-bundles.
std::vector<Bundle> bundle_shipments(const Instance& instance, int break_threshold = 0);

struct Move {
  int bundle_idx = -1;
  TruckId from;
  TruckId to;
};

struct MoveEval {
  double mileage = std::numeric_limits<double>::infinity();
  bool feasible = false;
};

// Shared evaluation state: per-(truck, shipment set) route results reused
// across iterations. Safe for concurrent evaluate_move calls.
class EvalContext {
public:
  explicit EvalContext(RouteSolverParams params) : cache_(std::move(params)) {}
  RouteQueryCache& cache() { return cache_; }

private:
  RouteQueryCache cache_;
};

// Applies the move (all of the bundle's shipments currently on `from` go to
// `to`), re-solves the two touched trucks, re-simulates queues over the full
// route set. The input solution is not mutated.
MoveEval evaluate_move(const Solution& x, const Move& move, const std::vector<Bundle>& bundles,
                       const Instance& instance, EvalContext& ctx);

struct TabuParams {
  double budget_seconds = 60;  // used when iteration_budget < 0
  long iteration_budget = -1;  // >= 0 makes runs deterministic
  int tenure = 0;              // 0 = ceil(sqrt(bundle count))
  int bundle_break_threshold = 0;
  bool bundling = true;  // false reproduces TS-NB (singleton bundles)
  int threads = 0;       // 0 = hardware concurrency
  RouteSolverParams route;
  std::ostream* telemetry = nullptr;  // CSV: iteration,elapsed_ms,current_mileage,best_mileage
};

// Tabu Search over bundle moves. Requires a feasible starting solution
// (throws ModelError otherwise); returns the best solution found.
Solution tabu_search(const Solution& x0, const Instance& instance, const TabuParams& params);

}  // namespace vrp2l
