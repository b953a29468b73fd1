#include "vrp2l/tabu.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <thread>

#include "vrp2l/schedule.hpp"
#include "vrp2l/solution_build.hpp"

namespace vrp2l {

std::vector<Bundle> bundle_shipments(const Instance& instance, int break_threshold) {
  std::map<std::pair<LocationId, LocationId>, std::vector<ShipmentId>> groups;
  for (const Shipment& s : instance.shipments)
    groups[{s.source, s.destination}].push_back(s.id);

  std::vector<Bundle> bundles;
  for (auto& [key, members] : groups) {
    std::sort(members.begin(), members.end());
    int chunk = break_threshold > 0 ? break_threshold : static_cast<int>(members.size());
    int n_chunks = (static_cast<int>(members.size()) + chunk - 1) / chunk;
    for (int c = 0; c < n_chunks; ++c) {
      Bundle b;
      b.source = key.first;
      b.destination = key.second;
      b.id = key.first + ">" + key.second;
      if (n_chunks > 1) b.id += "#" + std::to_string(c);
      for (int i = c * chunk; i < std::min<int>((c + 1) * chunk, members.size()); ++i)
        b.shipments.push_back(members[i]);
      bundles.push_back(std::move(b));
    }
  }
  return bundles;
}

namespace {

std::map<TruckId, std::vector<ShipmentId>> loads_of(const Solution& x) {
  std::map<TruckId, std::vector<ShipmentId>> loads;
  for (const auto& [sid, tid] : x.assignment.truck_of) loads[tid].push_back(sid);
  return loads;
}

struct MovedSets {
  bool valid = false;
  std::vector<ShipmentId> from_set, to_set, fragment;
};

MovedSets apply_to_sets(const Solution& x, const Move& move, const Bundle& bundle) {
  MovedSets out;
  auto loads = loads_of(x);
  auto from_it = loads.find(move.from);
  if (from_it == loads.end()) return out;
  std::vector<ShipmentId> to_set =
      loads.count(move.to) ? loads[move.to] : std::vector<ShipmentId>{};

  for (const ShipmentId& sid : from_it->second) {
    if (std::count(bundle.shipments.begin(), bundle.shipments.end(), sid))
      out.fragment.push_back(sid);
    else
      out.from_set.push_back(sid);
  }
  if (out.fragment.empty()) return out;
  out.to_set = std::move(to_set);
  out.to_set.insert(out.to_set.end(), out.fragment.begin(), out.fragment.end());
  out.valid = true;
  return out;
}

struct CandidateSolution {
  bool feasible = false;
  double mileage = std::numeric_limits<double>::infinity();
  std::vector<TruckLoad> loads;
};

CandidateSolution build_candidate(const Solution& x, const Move& move,
                                  const std::vector<Bundle>& bundles, const Instance& instance,
                                  EvalContext& ctx, bool need_loads) {
  CandidateSolution cand;
  if (move.bundle_idx < 0 || move.bundle_idx >= static_cast<int>(bundles.size())) return cand;
  if (move.from == move.to) return cand;
  MovedSets sets = apply_to_sets(x, move, bundles[move.bundle_idx]);
  if (!sets.valid) return cand;

  const Truck& from_truck = instance.truck(move.from);
  const Truck& to_truck = instance.truck(move.to);

  RouteResult from_rr = ctx.cache().solve(from_truck, sets.from_set, instance);
  if (!from_rr.feasible) return cand;
  RouteResult to_rr = ctx.cache().solve(to_truck, sets.to_set, instance);
  if (!to_rr.feasible) return cand;

  std::vector<TruckLoad> loads;
  auto current = loads_of(x);
  for (const auto& [tid, shipments] : current) {
    if (tid == move.from || tid == move.to) continue;
    const Route* r = x.route_of(tid);
    const Placement* p = x.placement_of(tid);
    if (!r || !p) return cand;
    loads.push_back({tid, shipments, *r, *p});
  }
  if (!sets.from_set.empty())
    loads.push_back({move.from, sets.from_set, *from_rr.route, *from_rr.placement});
  if (!sets.to_set.empty())
    loads.push_back({move.to, sets.to_set, *to_rr.route, *to_rr.placement});

  GtwReport report;
  auto sol = assemble_solution(loads, instance, &report);
  if (!sol) return cand;
  cand.feasible = true;
  cand.mileage = sol->total_mileage;
  if (need_loads) cand.loads = std::move(loads);
  return cand;
}

}  // namespace

MoveEval evaluate_move(const Solution& x, const Move& move, const std::vector<Bundle>& bundles,
                       const Instance& instance, EvalContext& ctx) {
  CandidateSolution cand = build_candidate(x, move, bundles, instance, ctx, false);
  return {cand.mileage, cand.feasible};
}

Solution tabu_search(const Solution& x0, const Instance& instance, const TabuParams& params) {
  {
    std::vector<Violation> violations = validate_solution(x0, instance);
    if (!violations.empty())
      throw ModelError("tabu_search: initial solution is infeasible (" +
                       std::to_string(violations.size()) + " violations, first: " +
                       violations.front().rule + ")");
  }

  std::vector<Bundle> bundles =
      params.bundling ? bundle_shipments(instance, params.bundle_break_threshold)
                      : bundle_shipments(instance, 1);
  int tenure = params.tenure > 0
                   ? params.tenure
                   : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(
                         std::max<size_t>(1, bundles.size())))));

  EvalContext ctx(params.route);
  Solution current = x0;
  Solution best = x0;

  // reverse moves forbidden until the stored iteration
  std::map<std::tuple<int, TruckId, TruckId>, long> tabu;

  auto t_start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t_start)
        .count();
  };
  auto budget_left = [&](long iter) {
    if (params.iteration_budget >= 0) return iter < params.iteration_budget;
    return elapsed_ms() < static_cast<long long>(params.budget_seconds * 1000);
  };

  int n_threads = params.threads > 0
                      ? params.threads
                      : std::max(1u, std::thread::hardware_concurrency());

  for (long iter = 0; budget_left(iter); ++iter) {
    auto loads = loads_of(current);

    // enumerate bundle-fragment moves; cheap city prefilter
    std::vector<Move> moves;
    for (size_t b = 0; b < bundles.size(); ++b) {
      const Bundle& bundle = bundles[b];
      const std::string& bundle_city = instance.location(bundle.source).city;
      std::vector<TruckId> froms;
      for (const auto& [tid, shipments] : loads)
        for (const ShipmentId& sid : shipments)
          if (std::count(bundle.shipments.begin(), bundle.shipments.end(), sid)) {
            froms.push_back(tid);
            break;
          }
      for (const TruckId& from : froms)
        for (const Truck& to : instance.trucks) {
          if (to.id == from) continue;
          auto to_load = loads.find(to.id);
          if (to_load != loads.end() && !to_load->second.empty()) {
            const std::string& to_city =
                instance.location(instance.shipment(to_load->second.front()).source).city;
            if (to_city != bundle_city) continue;
          }
          moves.push_back({static_cast<int>(b), from, to.id});
        }
    }
    if (moves.empty()) break;

    std::vector<MoveEval> evals(moves.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= moves.size()) return;
        evals[i] = evaluate_move(current, moves[i], bundles, instance, ctx);
      }
    };
    if (n_threads <= 1 || moves.size() < 2) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }

    auto is_tabu = [&](const Move& m) {
      auto it = tabu.find({m.bundle_idx, m.from, m.to});
      return it != tabu.end() && it->second > iter;
    };

    int chosen = -1;
    while (true) {
      for (size_t i = 0; i < moves.size(); ++i) {
        if (!evals[i].feasible) continue;
        bool aspires = evals[i].mileage < best.total_mileage - kMileageEps;
        if (is_tabu(moves[i]) && !aspires) continue;
        if (chosen < 0 || evals[i].mileage < evals[chosen].mileage - kMileageEps)
          chosen = static_cast<int>(i);
      }
      if (chosen >= 0) break;
      // deadlock: evict the oldest tabu entry and retry
      long oldest = std::numeric_limits<long>::max();
      std::map<std::tuple<int, TruckId, TruckId>, long>::iterator oldest_it = tabu.end();
      for (auto it = tabu.begin(); it != tabu.end(); ++it)
        if (it->second > iter && it->second < oldest) {
          oldest = it->second;
          oldest_it = it;
        }
      if (oldest_it == tabu.end()) break;
      tabu.erase(oldest_it);
    }
    if (chosen < 0) break;  // no feasible neighbor at all

    CandidateSolution cand =
        build_candidate(current, moves[chosen], bundles, instance, ctx, true);
    if (!cand.feasible) break;  // should not happen: evaluation is pure
    auto sol = assemble_solution(cand.loads, instance);
    if (!sol) break;
    current = std::move(*sol);

    const Move& m = moves[chosen];
    tabu[{m.bundle_idx, m.to, m.from}] = iter + 1 + tenure;

    if (current.total_mileage <= best.total_mileage + kMileageEps) best = current;

    if (params.telemetry)
      (*params.telemetry) << iter << "," << elapsed_ms() << "," << current.total_mileage
                          << "," << best.total_mileage << "\n";
  }

  return best;
}

}  // namespace vrp2l
