#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "vrp2l/loading.hpp"
#include "vrp2l/model.hpp"

namespace vrp2l {

struct RouteSolverParams {
  long node_budget = 200'000;
  PackParams pack;
  Minutes horizon = kDayHorizon;
};

struct RouteResult {
  bool feasible = false;
  std::optional<Route> route;
  std::optional<Placement> placement;
  double mileage = std::numeric_limits<double>::infinity();
  bool budget_truncated = false;
};

// Memo of "does this column multiset fit this surface at all" answers,
// shared across solve_route calls. Thread-safe.
class GeometryCache {
public:
  std::optional<bool> lookup(const std::string& key) const;
  void store(const std::string& key, bool fits);

private:
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, bool> map_;
};

// One-stop time propagation rule shared by the tree search and the
// standalone propagate_times: arrival from the previous departure, wait
// until every applicable window opens, service must close in time.
struct StepTimes {
  Minutes arrival = 0;
  Minutes wait = 0;
  Minutes departure = 0;
};
std::optional<StepTimes> step_times(const Instance& instance, Minutes prev_departure,
                                    const LocationId& from, const Stop& next);

// Times an untimed stop sequence (first/last stop must be the yard).
// Returns std::nullopt when A1/A3 cannot be satisfied. Queue waits (A2) are
// not modeled here.
std::optional<std::vector<Stop>> propagate_times(const std::vector<Stop>& sequence,
                                                 const Truck& truck, const Instance& instance,
                                                 Minutes horizon = kDayHorizon);

// Searches visit orders of the pickup/delivery multiset for the given truck
// and shipment set, pruning on time windows, precedence, partial mileage and
// per-stop packing feasibility. Deterministic.
RouteResult solve_route(const Truck& truck, const std::vector<ShipmentId>& shipments,
                        const Instance& instance, const RouteSolverParams& params,
                        GeometryCache* geometry_cache = nullptr);

// solve_route keyed by (truck, shipment set); safe for concurrent use.
// One cache per parameter set.
class RouteQueryCache {
public:
  explicit RouteQueryCache(RouteSolverParams params) : params_(std::move(params)) {}

  RouteResult solve(const Truck& truck, std::vector<ShipmentId> shipments,
                    const Instance& instance);
  const RouteSolverParams& params() const { return params_; }

private:
  RouteSolverParams params_;
  GeometryCache geometry_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, RouteResult> map_;
};

}  // namespace vrp2l
