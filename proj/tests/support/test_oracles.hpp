#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "vrp2l/model.hpp"

namespace vrp2l::test {

// Independent mileage re-summation (direct loop over legs).
inline double resum_mileage(const Solution& sol, const Instance& inst) {
  double total = 0;
  for (const Route& r : sol.routes) {
    double cost = inst.truck(r.truck).cost_per_distance;
    for (size_t k = 0; k + 1 < r.stops.size(); ++k) {
      int a = inst.loc_idx(r.stops[k].location);
      int b = inst.loc_idx(r.stops[k + 1].location);
      total += cost * inst.travel.distance[a][b];
    }
  }
  return total;
}

// Forklift oracle for the loading-sequence rule: replay the route stop by
// stop, physically pulling due items out through the rear (v = 0 edge) with
// straight pulls; items loaded strictly later than the extractee may be
// lifted aside.
inline bool forklift_extractable(const std::vector<PlacedItem>& items) {
  int max_stop = 0;
  for (const PlacedItem& it : items) max_stop = std::max(max_stop, it.delivery_stop);
  for (int stop = 1; stop <= max_stop; ++stop) {
    std::vector<const PlacedItem*> present, due;
    for (const PlacedItem& it : items)
      if (it.pickup_stop < stop && it.delivery_stop >= stop) {
        present.push_back(&it);
        if (it.delivery_stop == stop) due.push_back(&it);
      }
    std::set<const PlacedItem*> removed;
    bool progress = true;
    while (removed.size() < due.size() && progress) {
      progress = false;
      for (const PlacedItem* a : due) {
        if (removed.count(a)) continue;
        bool blocked = false;
        for (const PlacedItem* b : present) {
          if (b == a || removed.count(b)) continue;
          bool u_overlap = a->u + a->width > b->u + kGeomEps && b->u + b->width > a->u + kGeomEps;
          if (!u_overlap) continue;
          if (b->v + kGeomEps >= a->v) continue;   // nose-ward of the pull path
          if (b->pickup_stop > a->pickup_stop) continue;  // lift aside, reload
          blocked = true;
          break;
        }
        if (!blocked) {
          removed.insert(a);
          progress = true;
        }
      }
    }
    if (removed.size() < due.size()) return false;
  }
  return true;
}

// Sort-based psi reference.
inline Minutes psi_by_sort(int n, std::vector<Minutes> values) {
  std::sort(values.begin(), values.end());
  int idx = static_cast<int>(values.size()) - n;
  if (idx < 0) idx = 0;
  return values[idx];
}

}  // namespace vrp2l::test
