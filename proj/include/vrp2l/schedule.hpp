#pragma once

#include <map>
#include <string>
#include <vector>

#include "vrp2l/model.hpp"

namespace vrp2l {

// Smallest of the n largest values. With fewer than n values a dock is free,
// so the result degrades to the minimum (the wait term must vanish).
Minutes psi(int n, const std::vector<Minutes>& values);

struct DockEvent {
  LocationId location;
  TruckId truck;
  Minutes arrival = 0;
  Minutes service_start = 0;
  Minutes service_end = 0;
};

struct GtwViolation {
  LocationId location;
  Minutes time = 0;
  std::string detail;
  std::vector<std::string> entities;
};

struct GtwReport {
  bool feasible = true;
  std::map<std::pair<TruckId, int>, Minutes> waits;  // (truck, stop index) -> minutes
  std::vector<GtwViolation> violations;
  std::vector<DockEvent> events;
};

inline constexpr int kGtwIterationCap = 50;

// Global time-window check: event-driven FIFO dock simulation across all
// routes. Recomputes every stop's wait (window wait plus queue wait), writes
// the settled times back into the routes, then verifies hub precedence,
// iterating to a fixpoint. Routes must already be A1/A3-consistent stop
// sequences; times are recomputed here.
GtwReport simulate_queues(std::vector<Route>& routes, const Instance& instance);

}  // namespace vrp2l
