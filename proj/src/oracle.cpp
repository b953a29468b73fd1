#include "vrp2l/oracle.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <tuple>

namespace vrp2l {

namespace {

constexpr double kEps = 1e-9;

struct ORect {
  double u = 0, v = 0, w = 0, l = 0;
  int pickup = 0, delivery = 0;
  int item_idx = 0;
};

bool o_coexist(const ORect& a, const ORect& b) {
  return a.pickup < b.delivery && b.pickup < a.delivery;
}

bool o_overlap(const ORect& a, const ORect& b) {
  return a.u + a.w > b.u + kEps && b.u + b.w > a.u + kEps && a.v + a.l > b.v + kEps &&
         b.v + b.l > a.v + kEps;
}

bool u_ranges_overlap(const ORect& a, const ORect& b) {
  return a.u + a.w > b.u + kEps && b.u + b.w > a.u + kEps;
}

// forklift simulation: at every stop, items due there must come out through
// the rear via straight pulls; blockers loaded strictly later than the
// extractee may be lifted aside and reloaded
bool extraction_simulation(const std::vector<ORect>& rects) {
  int max_stop = 0;
  for (const ORect& r : rects) max_stop = std::max(max_stop, r.delivery);
  for (int stop = 1; stop <= max_stop; ++stop) {
    std::vector<const ORect*> present;
    std::vector<const ORect*> due;
    for (const ORect& r : rects) {
      if (r.pickup < stop && r.delivery >= stop) {
        present.push_back(&r);
        if (r.delivery == stop) due.push_back(&r);
      }
    }
    std::set<const ORect*> out;
    bool progress = true;
    while (out.size() < due.size() && progress) {
      progress = false;
      for (const ORect* a : due) {
        if (out.count(a)) continue;
        bool blocked = false;
        for (const ORect* b : present) {
          if (b == a || out.count(b)) continue;
          if (!u_ranges_overlap(*a, *b)) continue;
          if (b->v + kEps >= a->v) continue;           // nose-ward, no obstruction
          if (b->pickup > a->pickup) continue;         // loaded later: lift aside
          blocked = true;
          break;
        }
        if (!blocked) {
          out.insert(a);
          progress = true;
        }
      }
    }
    if (out.size() < due.size()) return false;
  }
  return true;
}

std::vector<double> grid_values(const std::vector<double>& dims, double bound) {
  std::set<double> sums{0.0};
  for (double d : dims) {
    std::set<double> next = sums;
    for (double s : sums) {
      double x = s + d;
      bool dup = false;
      for (double y : next)
        if (std::abs(x - y) <= kEps) dup = true;
      if (!dup && x <= bound + kEps) next.insert(x);
    }
    sums = std::move(next);
  }
  return {sums.begin(), sums.end()};
}

struct PlacementSearch {
  std::vector<ORect> items;  // ordered for search
  double surf_w, surf_l;
  std::vector<double> us, vs;
  long budget = 500'000;
  std::vector<ORect> placed;

  bool identical(const ORect& a, const ORect& b) const {
    return std::abs(a.w - b.w) <= kEps && std::abs(a.l - b.l) <= kEps && a.pickup == b.pickup &&
           a.delivery == b.delivery;
  }

  bool dfs(size_t level) {
    if (level == items.size()) return extraction_simulation(placed);
    ORect r = items[level];
    for (double u : us) {
      if (u + r.w > surf_w + kEps) break;
      // the sequence rule is mirror-symmetric across the width axis:
      // anchor the first item in the left half
      if (level == 0 && u > (surf_w - r.w) / 2 + kEps) break;
      for (double v : vs) {
        if (v + r.l > surf_l + kEps) break;
        if (--budget < 0) throw OracleError("exact_pack: search budget exceeded");
        if (level > 0 && identical(items[level - 1], items[level])) {
          const ORect& prev = placed.back();
          if (u < prev.u - kEps || (std::abs(u - prev.u) <= kEps && v < prev.v - kEps))
            continue;
        }
        r.u = u;
        r.v = v;
        bool ok = true;
        for (const ORect& p : placed) {
          if (o_coexist(p, r) && o_overlap(p, r)) {
            ok = false;
            break;
          }
          // loading-sequence disjunction, pruned pairwise (the leaf runs the
          // full extraction simulation)
          const ORect* later = nullptr;
          const ORect* earlier = nullptr;
          if (p.delivery < r.delivery && r.pickup <= p.pickup) {
            later = &r;
            earlier = &p;
          } else if (r.delivery < p.delivery && p.pickup <= r.pickup) {
            later = &p;
            earlier = &r;
          }
          if (later && u_ranges_overlap(*later, *earlier) &&
              !(earlier->v + earlier->l <= later->v + kEps)) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        placed.push_back(r);
        if (dfs(level + 1)) return true;
        placed.pop_back();
      }
    }
    return false;
  }
};

std::optional<std::vector<ORect>> exact_pack_single(const std::vector<PackItem>& items,
                                                    const Truck& truck);

// Constraints (overlap and the sequence rule) only bind between coexisting
// items, so the search splits into connected components of the coexistence
// graph. Positions may repeat across components.
std::optional<std::vector<ORect>> exact_pack_find(const std::vector<PackItem>& items,
                                                  const Truck& truck, int max_columns) {
  if (static_cast<int>(items.size()) > max_columns)
    throw OracleError("exact_pack: column count exceeds the oracle limit");
  if (items.empty()) return std::vector<ORect>{};

  int n = static_cast<int>(items.size());
  std::vector<int> comp(n);
  for (int i = 0; i < n; ++i) comp[i] = i;
  std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      bool coexist = items[i].pickup_stop < items[j].delivery_stop &&
                     items[j].pickup_stop < items[i].delivery_stop;
      if (coexist) comp[find(i)] = find(j);
    }
  std::map<int, std::vector<int>> components;
  for (int i = 0; i < n; ++i) components[find(i)].push_back(i);

  std::vector<ORect> all;
  for (const auto& [root, member_idxs] : components) {
    std::vector<PackItem> sub;
    for (int i : member_idxs) sub.push_back(items[i]);
    auto placed = exact_pack_single(sub, truck);
    if (!placed) return std::nullopt;
    for (ORect r : *placed) {
      r.item_idx = member_idxs[r.item_idx];
      all.push_back(r);
    }
  }
  return all;
}

std::optional<std::vector<ORect>> exact_pack_single(const std::vector<PackItem>& items,
                                                    const Truck& truck) {
  PlacementSearch search;
  search.surf_w = truck.surface_width;
  search.surf_l = truck.surface_length;
  for (size_t i = 0; i < items.size(); ++i) {
    const PackItem& it = items[i];
    ORect r;
    r.w = it.column.width;
    r.l = it.column.length;
    r.pickup = it.pickup_stop;
    r.delivery = it.delivery_stop;
    r.item_idx = static_cast<int>(i);
    if (r.w > search.surf_w + kEps || r.l > search.surf_l + kEps) return std::nullopt;
    search.items.push_back(r);
  }

  // per-stop coexistence area bound: everything on board together must fit
  {
    int max_stop = 0;
    for (const ORect& r : search.items) max_stop = std::max(max_stop, r.delivery);
    double surface = search.surf_w * search.surf_l;
    for (int stop = 0; stop < max_stop; ++stop) {
      double onboard = 0;
      for (const ORect& r : search.items)
        if (r.pickup <= stop && r.delivery > stop) onboard += r.w * r.l;
      if (onboard > surface + kEps) return std::nullopt;
    }
  }
  std::sort(search.items.begin(), search.items.end(), [](const ORect& a, const ORect& b) {
    if (a.delivery != b.delivery) return a.delivery < b.delivery;
    double aa = a.w * a.l, ab = b.w * b.l;
    if (std::abs(aa - ab) > kEps) return aa > ab;
    return a.item_idx < b.item_idx;
  });

  std::vector<double> ws, ls;
  for (const ORect& r : search.items) {
    ws.push_back(r.w);
    ls.push_back(r.l);
  }
  search.us = grid_values(ws, search.surf_w);
  search.vs = grid_values(ls, search.surf_l);

  if (!search.dfs(0)) return std::nullopt;
  return search.placed;
}

}  // namespace

bool exact_pack(const std::vector<PackItem>& items, const Truck& truck,
                const OracleLimits& limits) {
  return exact_pack_find(items, truck, limits.max_columns).has_value();
}

// ---------------------------------------------------------------------------
// exact_solve
// ---------------------------------------------------------------------------

namespace {

struct OracleRoute {
  double mileage = 0;
  std::vector<Stop> stops;          // untimed templates (sequence only)
  std::vector<ORect> placed;        // grid placement
  std::vector<PackItem> pack_items;
};

// all canonical stop sequences (adjacent same-location actions merged in
// ascending action order) that satisfy A1/A3; leaves carry a feasible grid
// placement
struct RouteEnumerator {
  const Instance& inst;
  const Truck& truck;
  std::vector<const Shipment*> ships;
  std::vector<std::vector<Column>> cols;
  int n = 0;
  long node_cap = 2'000'000;
  int pack_cap = 10;

  std::vector<char> done;
  std::vector<int> pickup_stop;
  std::vector<Stop> stops;
  double mileage = 0;
  double onboard_area = 0;
  std::vector<OracleRoute> out;
  // leaf pack results keyed by the sorted (w,l,pickup,delivery) signature;
  // stored coordinates pair up positionally with the sorted signature
  std::map<std::string, std::optional<std::vector<std::array<double, 2>>>> pack_memo;

  double shipment_area(int s) const {
    double area = 0;
    for (const Column& c : cols[s]) area += c.width * c.length;
    return area;
  }

  void leaf() {
    Stop back{truck.home_yard, {}, {}, 0, 0, 0};
    Minutes arr = stops.back().departure + inst.travel_time(stops.back().location, back.location);
    // superset of the production space: multi-trip tours may run to the
    // merged horizon
    if (arr > kMergedHorizon) return;
    back.arrival = arr;
    back.departure = arr;
    std::vector<Stop> full = stops;
    full.push_back(back);

    std::vector<PackItem> items;
    double area = 0;
    for (int s = 0; s < n; ++s) {
      int delivery = -1;
      for (size_t k = 0; k < full.size(); ++k)
        if (std::count(full[k].deliveries.begin(), full[k].deliveries.end(), ships[s]->id))
          delivery = static_cast<int>(k);
      for (const Column& c : cols[s]) {
        items.push_back({c, pickup_stop[s], delivery});
        area += c.width * c.length;
      }
    }
    if (static_cast<int>(items.size()) > pack_cap) {
      if (area > truck.surface_area() + kEps) return;  // provably unpackable
      throw OracleError("exact_solve: per-truck column count exceeds the oracle limit");
    }
    std::vector<std::tuple<double, double, int, int, int>> sig_parts;  // + input index
    for (size_t i = 0; i < items.size(); ++i)
      sig_parts.push_back({items[i].column.width, items[i].column.length,
                           items[i].pickup_stop, items[i].delivery_stop,
                           static_cast<int>(i)});
    std::sort(sig_parts.begin(), sig_parts.end());
    std::string sig;
    for (const auto& [w, l, p, d, idx] : sig_parts) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%d,%d;", w, l, p, d);
      sig += buf;
    }

    std::optional<std::vector<ORect>> placed;
    auto memo = pack_memo.find(sig);
    if (memo != pack_memo.end()) {
      if (!memo->second) return;
      placed.emplace();
      for (size_t i = 0; i < sig_parts.size(); ++i) {
        const auto& [w, l, p, d, idx] = sig_parts[i];
        ORect r;
        r.u = (*memo->second)[i][0];
        r.v = (*memo->second)[i][1];
        r.w = w;
        r.l = l;
        r.pickup = p;
        r.delivery = d;
        r.item_idx = idx;
        placed->push_back(r);
      }
    } else {
      placed = exact_pack_find(items, truck, pack_cap);
      if (!placed) {
        pack_memo.emplace(std::move(sig), std::nullopt);
        return;
      }
      // store coordinates aligned with the sorted signature
      std::vector<std::array<double, 2>> coords(sig_parts.size());
      std::vector<char> taken(placed->size(), 0);
      for (size_t i = 0; i < sig_parts.size(); ++i) {
        const auto& [w, l, p, d, idx] = sig_parts[i];
        for (size_t j = 0; j < placed->size(); ++j) {
          const ORect& r = (*placed)[j];
          if (taken[j]) continue;
          if (std::abs(r.w - w) <= kEps && std::abs(r.l - l) <= kEps && r.pickup == p &&
              r.delivery == d) {
            coords[i] = {r.u, r.v};
            taken[j] = 1;
            break;
          }
        }
      }
      pack_memo.emplace(sig, std::move(coords));
    }

    OracleRoute route;
    route.mileage =
        mileage + truck.cost_per_distance * inst.distance(stops.back().location, back.location);
    route.stops = std::move(full);
    route.placed = std::move(*placed);
    route.pack_items = std::move(items);
    out.push_back(std::move(route));
  }

  void enumerate() {
    if (--node_cap < 0) throw OracleError("exact_solve: route enumeration budget exceeded");
    bool all_done = true;
    for (int a = 0; a < 2 * n; ++a)
      if (!done[a]) all_done = false;
    if (all_done) {
      leaf();
      return;
    }

    int max_in_cur = -1;
    if (stops.size() > 1) {
      const Stop& cur = stops.back();
      for (int s = 0; s < n; ++s) {
        if (std::count(cur.pickups.begin(), cur.pickups.end(), ships[s]->id))
          max_in_cur = std::max(max_in_cur, s);
        if (std::count(cur.deliveries.begin(), cur.deliveries.end(), ships[s]->id))
          max_in_cur = std::max(max_in_cur, n + s);
      }
    }

    for (int a = 0; a < 2 * n; ++a) {
      if (done[a]) continue;
      bool is_delivery = a >= n;
      int s = is_delivery ? a - n : a;
      if (is_delivery && pickup_stop[s] < 0) continue;
      const LocationId& loc_id = is_delivery ? ships[s]->destination : ships[s]->source;
      const Location& loc = inst.location(loc_id);
      if (!loc.admits_truck_length(truck.length_class)) continue;

      bool merge = stops.size() > 1 && stops.back().location == loc_id;
      if (merge && a <= max_in_cur) continue;

      Stop base = merge ? stops.back() : Stop{loc_id, {}, {}, 0, 0, 0};
      (is_delivery ? base.deliveries : base.pickups).push_back(ships[s]->id);

      // retime: earliest start respecting every window at the stop
      const Stop& prev = merge ? stops[stops.size() - 2] : stops.back();
      Minutes arrival = prev.departure + inst.travel_time(prev.location, loc_id);
      Minutes earliest = std::max(arrival, loc.working_window.open);
      Minutes close = loc.working_window.close;
      for (const ShipmentId& sid : base.pickups) {
        const Shipment& sh = inst.shipment(sid);
        earliest = std::max(earliest, sh.pickup_window.open);
        close = std::min(close, sh.pickup_window.close);
      }
      for (const ShipmentId& sid : base.deliveries) {
        const Shipment& sh = inst.shipment(sid);
        earliest = std::max(earliest, sh.delivery_window.open);
        close = std::min(close, sh.delivery_window.close);
      }
      Minutes departure = earliest + loc.handling_time;
      if (departure > close) continue;
      base.arrival = arrival;
      base.wait = earliest - arrival;
      base.departure = departure;

      // side rules
      if (!merge && loc.must_be_first && stops.size() != 1) continue;
      if (!merge && stops.size() > 1 && inst.location(stops.back().location).must_be_last)
        continue;
      if (!merge && loc.max_visits) {
        int visits = 0;
        for (const Stop& st : stops)
          if (st.location == loc_id) ++visits;
        if (visits + 1 > *loc.max_visits) continue;
      }

      // onboard load can never exceed the surface area
      double area_delta = is_delivery ? -shipment_area(s) : shipment_area(s);
      if (!is_delivery && onboard_area + area_delta > truck.surface_area() + kEps) continue;

      Stop saved = stops.back();
      double leg = 0;
      if (merge) {
        stops.back() = base;
      } else {
        leg = truck.cost_per_distance * inst.distance(stops.back().location, loc_id);
        stops.push_back(base);
        mileage += leg;
      }
      done[a] = 1;
      onboard_area += area_delta;
      int saved_pickup = pickup_stop[s];
      if (!is_delivery) pickup_stop[s] = static_cast<int>(stops.size()) - 1;

      enumerate();

      if (!is_delivery) pickup_stop[s] = saved_pickup;
      onboard_area -= area_delta;
      done[a] = 0;
      if (merge) {
        stops.back() = saved;
      } else {
        stops.pop_back();
        mileage -= leg;
      }
    }
  }
};

// independent chronological FIFO queue replay with hub floors
struct OracleSim {
  bool feasible = false;
  std::vector<std::vector<Stop>> timed;  // settled stops per route
};

OracleSim oracle_queue_sim(const Instance& inst,
                           const std::vector<std::pair<const Truck*, std::vector<Stop>>>& routes) {
  OracleSim sim;
  std::map<std::pair<int, int>, Minutes> floors;

  for (int pass = 0; pass < 50; ++pass) {
    std::vector<std::vector<Stop>> timed;
    for (const auto& [truck, stops] : routes) timed.push_back(stops);

    struct Cursor {
      int route;
      int stop;
      Minutes arrival;
      TruckId truck;
    };
    auto later = [](const Cursor& a, const Cursor& b) {
      if (a.arrival != b.arrival) return a.arrival > b.arrival;
      return a.truck > b.truck;
    };
    std::priority_queue<Cursor, std::vector<Cursor>, decltype(later)> pq(later);
    for (size_t r = 0; r < timed.size(); ++r) {
      timed[r].front().arrival = 0;
      timed[r].front().wait = 0;
      timed[r].front().departure = 0;
      Minutes arr =
          inst.travel_time(timed[r][0].location, timed[r][1].location);
      pq.push({static_cast<int>(r), 1, arr, routes[r].first->id});
    }

    std::map<LocationId, std::vector<Minutes>> busy;  // in-service end times
    bool window_ok = true;

    while (!pq.empty()) {
      Cursor c = pq.top();
      pq.pop();
      std::vector<Stop>& stops = timed[c.route];
      Stop& st = stops[c.stop];
      const Location& loc = inst.location(st.location);
      st.arrival = c.arrival;
      if (loc.kind == LocationKind::TruckYard) {
        st.wait = 0;
        st.departure = c.arrival;
      } else {
        Minutes earliest = std::max(c.arrival, loc.working_window.open);
        Minutes close = loc.working_window.close;
        for (const ShipmentId& sid : st.pickups) {
          earliest = std::max(earliest, inst.shipment(sid).pickup_window.open);
          close = std::min(close, inst.shipment(sid).pickup_window.close);
        }
        for (const ShipmentId& sid : st.deliveries) {
          earliest = std::max(earliest, inst.shipment(sid).delivery_window.open);
          close = std::min(close, inst.shipment(sid).delivery_window.close);
        }
        auto f = floors.find({c.route, c.stop});
        if (f != floors.end()) earliest = std::max(earliest, f->second);
        std::vector<Minutes>& ends = busy[st.location];
        if (static_cast<int>(ends.size()) >= loc.dock_count) {
          auto min_it = std::min_element(ends.begin(), ends.end());
          earliest = std::max(earliest, *min_it);
          ends.erase(min_it);
        }
        Minutes end = earliest + loc.handling_time;
        ends.push_back(end);
        st.wait = earliest - c.arrival;
        st.departure = end;
        if (end > close) window_ok = false;
      }
      if (c.stop + 1 < static_cast<int>(stops.size())) {
        Minutes arr = st.departure +
                      inst.travel_time(st.location, stops[c.stop + 1].location);
        pq.push({c.route, c.stop + 1, arr, c.truck});
      } else if (st.arrival > kMergedHorizon) {
        window_ok = false;
      }
    }

    // hub precedence; add floors and replay when violated
    bool changed = false;
    bool hub_ok = true;
    for (const HubLink& link : inst.hub_links) {
      Minutes up_end = -1, down_start = -1;
      int droute = -1, dstop = -1;
      for (size_t r = 0; r < timed.size(); ++r)
        for (size_t k = 0; k < timed[r].size(); ++k) {
          const Stop& st = timed[r][k];
          if (std::count(st.deliveries.begin(), st.deliveries.end(), link.upstream))
            up_end = st.departure;
          if (std::count(st.pickups.begin(), st.pickups.end(), link.downstream)) {
            down_start = st.arrival + st.wait;
            droute = static_cast<int>(r);
            dstop = static_cast<int>(k);
          }
        }
      if (up_end < 0 || down_start < 0) continue;
      if (down_start < up_end) {
        hub_ok = false;
        auto key = std::make_pair(droute, dstop);
        if (floors[key] < up_end) {
          floors[key] = up_end;
          changed = true;
        }
      }
    }
    if (!changed) {
      sim.feasible = window_ok && hub_ok;
      sim.timed = std::move(timed);
      return sim;
    }
  }
  return sim;
}

std::string set_key(const TruckId& truck, const std::vector<int>& shipment_idxs) {
  std::string key = truck;
  for (int s : shipment_idxs) key += "," + std::to_string(s);
  return key;
}

}  // namespace

OracleResult exact_solve(const Instance& instance, const OracleLimits& limits) {
  int n = static_cast<int>(instance.shipments.size());
  int nt = static_cast<int>(instance.trucks.size());
  if (n > limits.max_shipments)
    throw OracleError("exact_solve: shipment count exceeds the oracle limit");
  if (nt > limits.max_trucks)
    throw OracleError("exact_solve: truck count exceeds the oracle limit");

  OracleResult result;
  if (n == 0) {
    result.feasible = true;
    result.mileage = 0;
    result.solution = Solution{};
    return result;
  }
  if (nt == 0) return result;

  // memoized feasible route lists per (truck, shipment set)
  std::map<std::string, std::vector<OracleRoute>> route_lists;
  auto routes_for = [&](int truck_idx,
                        const std::vector<int>& shipment_idxs) -> const std::vector<OracleRoute>& {
    std::string key = set_key(instance.trucks[truck_idx].id, shipment_idxs);
    auto it = route_lists.find(key);
    if (it != route_lists.end()) return it->second;

    RouteEnumerator en{instance, instance.trucks[truck_idx]};
    en.pack_cap = 3 * limits.max_columns;
    std::string city;
    bool city_ok = true;
    for (int s : shipment_idxs) {
      const Shipment& sh = instance.shipments[s];
      const std::string& c = instance.location(sh.source).city;
      if (city.empty())
        city = c;
      else if (c != city)
        city_ok = false;
      en.ships.push_back(&sh);
      en.cols.push_back(build_columns(sh, instance.pallet));
    }
    std::vector<OracleRoute> list;
    if (city_ok) {
      en.n = static_cast<int>(shipment_idxs.size());
      en.done.assign(2 * en.n, 0);
      en.pickup_stop.assign(en.n, -1);
      en.stops.push_back({instance.trucks[truck_idx].home_yard, {}, {}, 0, 0, 0});
      en.enumerate();
      list = std::move(en.out);
      std::sort(list.begin(), list.end(), [](const OracleRoute& a, const OracleRoute& b) {
        return a.mileage < b.mileage;
      });
    }
    return route_lists.emplace(key, std::move(list)).first->second;
  };

  double best_mileage = std::numeric_limits<double>::infinity();
  std::optional<Solution> best_solution;

  std::vector<int> assign(n, 0);
  while (true) {
    // evaluate the assignment
    std::vector<std::vector<int>> sets(nt);
    for (int s = 0; s < n; ++s) sets[assign[s]].push_back(s);

    std::vector<const std::vector<OracleRoute>*> lists;
    bool viable = true;
    double lower_bound = 0;
    for (int t = 0; t < nt && viable; ++t) {
      if (sets[t].empty()) continue;
      const auto& list = routes_for(t, sets[t]);
      if (list.empty())
        viable = false;
      else {
        lists.push_back(&list);
        lower_bound += list.front().mileage;
      }
    }

    if (viable && lower_bound < best_mileage - kMileageEps) {
      // best-first product over per-truck route choices
      std::vector<int> active_trucks;
      for (int t = 0; t < nt; ++t)
        if (!sets[t].empty()) active_trucks.push_back(t);

      struct Combo {
        double mileage;
        std::vector<int> choice;
      };
      auto worse = [](const Combo& a, const Combo& b) {
        if (a.mileage != b.mileage) return a.mileage > b.mileage;
        return a.choice > b.choice;
      };
      std::priority_queue<Combo, std::vector<Combo>, decltype(worse)> pq(worse);
      std::set<std::vector<int>> seen;
      std::vector<int> first(lists.size(), 0);
      pq.push({lower_bound, first});
      seen.insert(first);
      long pops = 0;

      while (!pq.empty()) {
        Combo combo = pq.top();
        pq.pop();
        if (combo.mileage >= best_mileage - kMileageEps) break;
        if (++pops > 50'000) throw OracleError("exact_solve: combination budget exceeded");

        std::vector<std::pair<const Truck*, std::vector<Stop>>> routes;
        for (size_t i = 0; i < lists.size(); ++i) {
          const OracleRoute& r = (*lists[i])[combo.choice[i]];
          routes.push_back({&instance.trucks[active_trucks[i]], r.stops});
        }
        OracleSim sim = oracle_queue_sim(instance, routes);
        if (sim.feasible) {
          best_mileage = combo.mileage;
          Solution sol;
          for (size_t i = 0; i < lists.size(); ++i) {
            const OracleRoute& r = (*lists[i])[combo.choice[i]];
            const Truck& truck = instance.trucks[active_trucks[i]];
            for (int s : sets[active_trucks[i]])
              sol.assignment.truck_of[instance.shipments[s].id] = truck.id;
            Route route;
            route.truck = truck.id;
            route.stops = sim.timed[i];
            route.horizon = kMergedHorizon;
            sol.routes.push_back(std::move(route));
            Placement placement;
            placement.truck = truck.id;
            for (const ORect& rect : r.placed) {
              const PackItem& item = r.pack_items[rect.item_idx];
              PlacedItem pi;
              pi.shipment = item.column.shipment;
              pi.column_index = rect.item_idx;
              pi.u = rect.u;
              pi.v = rect.v;
              pi.width = rect.w;
              pi.length = rect.l;
              pi.layers = item.column.layers;
              pi.bin_total = item.column.bin_total();
              pi.on_pallet = item.column.on_pallet;
              pi.pickup_stop = rect.pickup;
              pi.delivery_stop = rect.delivery;
              placement.items.push_back(std::move(pi));
            }
            sol.placements.push_back(std::move(placement));
          }
          sol.total_mileage = total_mileage(sol, instance);
          best_solution = std::move(sol);
          break;  // optimal for this assignment
        }
        for (size_t i = 0; i < lists.size(); ++i) {
          if (combo.choice[i] + 1 >= static_cast<int>(lists[i]->size())) continue;
          Combo next = combo;
          next.choice[i] += 1;
          next.mileage = 0;
          for (size_t k = 0; k < lists.size(); ++k)
            next.mileage += (*lists[k])[next.choice[k]].mileage;
          if (seen.insert(next.choice).second) pq.push(next);
        }
      }
    }

    // next assignment
    int pos = n - 1;
    while (pos >= 0 && assign[pos] == nt - 1) {
      assign[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    assign[pos] += 1;
  }

  if (best_solution) {
    result.feasible = true;
    result.mileage = best_mileage;
    result.solution = std::move(best_solution);
  }
  return result;
}

}  // namespace vrp2l
