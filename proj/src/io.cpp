#include "vrp2l/io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "json.hpp"
#include "vrp2l/loading.hpp"
#include "vrp2l/routing.hpp"

namespace vrp2l {

using json = nlohmann::ordered_json;

namespace {

json window_to_json(const TimeWindow& w) { return json::array({w.open, w.close}); }

TimeWindow window_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    throw ParseError(where + ": window must be a [open, close] pair");
  return {j[0].get<Minutes>(), j[1].get<Minutes>()};
}

template <typename T>
T require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": bad field '" + key + "': " + e.what());
  }
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("syntax error: ") + e.what());
  }
}

}  // namespace

Instance parse_instance(const std::string& text) {
  json doc = parse_text(text);
  if (!doc.is_object()) throw ParseError("instance document must be a JSON object");
  int version = require<int>(doc, "schema_version", "instance");
  if (version != kSchemaVersion)
    throw ParseError("unsupported schema_version " + std::to_string(version));

  Instance inst;
  for (const json& j : require<json>(doc, "locations", "instance")) {
    Location loc;
    loc.id = require<std::string>(j, "id", "location");
    std::string where = "location " + loc.id;
    loc.kind = location_kind_from_string(require<std::string>(j, "kind", where));
    loc.working_window = window_from_json(j.at("window"), where);
    loc.dock_count = require<int>(j, "dock_count", where);
    loc.handling_time = require<Minutes>(j, "handling_time", where);
    loc.city = require<std::string>(j, "city", where);
    if (j.contains("allowed_truck_lengths") && !j["allowed_truck_lengths"].is_null()) {
      std::set<std::string> allowed;
      for (const json& a : j["allowed_truck_lengths"]) allowed.insert(a.get<std::string>());
      loc.allowed_truck_lengths = std::move(allowed);
    }
    if (j.contains("max_visits") && !j["max_visits"].is_null())
      loc.max_visits = j["max_visits"].get<int>();
    loc.must_be_first = j.value("must_be_first", false);
    loc.must_be_last = j.value("must_be_last", false);
    if (j.contains("coord") && !j["coord"].is_null())
      loc.coord = std::array<double, 2>{j["coord"][0].get<double>(), j["coord"][1].get<double>()};
    inst.locations.push_back(std::move(loc));
  }

  const json& matrices = require<json>(doc, "matrices", "instance");
  inst.travel.distance =
      require<std::vector<std::vector<double>>>(matrices, "distance", "matrices");
  inst.travel.travel_time =
      require<std::vector<std::vector<Minutes>>>(matrices, "travel_time", "matrices");

  for (const json& j : require<json>(doc, "trucks", "instance")) {
    Truck t;
    t.id = require<std::string>(j, "id", "truck");
    std::string where = "truck " + t.id;
    t.model = require<std::string>(j, "model", where);
    t.surface_width = require<double>(j, "surface_width", where);
    t.surface_length = require<double>(j, "surface_length", where);
    t.length_class = require<std::string>(j, "length_class", where);
    t.cost_per_distance = require<double>(j, "cost_per_distance", where);
    t.home_yard = require<std::string>(j, "home_yard", where);
    inst.trucks.push_back(std::move(t));
  }

  for (const json& j : require<json>(doc, "shipments", "instance")) {
    Shipment s;
    s.id = require<std::string>(j, "id", "shipment");
    std::string where = "shipment " + s.id;
    s.source = require<std::string>(j, "source", where);
    s.destination = require<std::string>(j, "destination", where);
    s.bin_count = require<int>(j, "bin_count", where);
    const json& bin = require<json>(j, "bin", where);
    s.bin.width = require<double>(bin, "width", where + " bin");
    s.bin.length = require<double>(bin, "length", where + " bin");
    s.bin.height = bin.value("height", 0.0);
    s.bin.stack_limit = require<int>(bin, "stack_limit", where + " bin");
    s.needs_pallet = j.value("needs_pallet", false);
    s.pickup_window = window_from_json(j.at("pickup_window"), where);
    s.delivery_window = window_from_json(j.at("delivery_window"), where);
    inst.shipments.push_back(std::move(s));
  }

  if (doc.contains("hub_links"))
    for (const json& j : doc["hub_links"])
      inst.hub_links.push_back({require<std::string>(j, "upstream", "hub_link"),
                                require<std::string>(j, "downstream", "hub_link")});

  if (doc.contains("pallet") && !doc["pallet"].is_null()) {
    const json& p = doc["pallet"];
    inst.pallet.width = require<double>(p, "width", "pallet");
    inst.pallet.length = require<double>(p, "length", "pallet");
    inst.pallet.stack_limit = require<int>(p, "stack_limit", "pallet");
  }

  try {
    inst.finalize();
  } catch (const ModelError& e) {
    throw ParseError(std::string("semantic error: ") + e.what());
  }
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  json locations = json::array();
  for (const Location& loc : inst.locations) {
    json j;
    j["id"] = loc.id;
    j["kind"] = to_string(loc.kind);
    j["window"] = window_to_json(loc.working_window);
    j["dock_count"] = loc.dock_count;
    j["handling_time"] = loc.handling_time;
    j["city"] = loc.city;
    if (loc.allowed_truck_lengths) {
      json a = json::array();
      for (const std::string& s : *loc.allowed_truck_lengths) a.push_back(s);
      j["allowed_truck_lengths"] = a;
    }
    if (loc.max_visits) j["max_visits"] = *loc.max_visits;
    if (loc.must_be_first) j["must_be_first"] = true;
    if (loc.must_be_last) j["must_be_last"] = true;
    if (loc.coord) j["coord"] = json::array({(*loc.coord)[0], (*loc.coord)[1]});
    locations.push_back(std::move(j));
  }
  doc["locations"] = std::move(locations);
  doc["matrices"] = {{"distance", inst.travel.distance},
                     {"travel_time", inst.travel.travel_time}};
  json trucks = json::array();
  for (const Truck& t : inst.trucks) {
    trucks.push_back({{"id", t.id},
                      {"model", t.model},
                      {"surface_width", t.surface_width},
                      {"surface_length", t.surface_length},
                      {"length_class", t.length_class},
                      {"cost_per_distance", t.cost_per_distance},
                      {"home_yard", t.home_yard}});
  }
  doc["trucks"] = std::move(trucks);
  json shipments = json::array();
  for (const Shipment& s : inst.shipments) {
    json j;
    j["id"] = s.id;
    j["source"] = s.source;
    j["destination"] = s.destination;
    j["bin_count"] = s.bin_count;
    j["bin"] = {{"width", s.bin.width},
                {"length", s.bin.length},
                {"height", s.bin.height},
                {"stack_limit", s.bin.stack_limit}};
    j["needs_pallet"] = s.needs_pallet;
    j["pickup_window"] = window_to_json(s.pickup_window);
    j["delivery_window"] = window_to_json(s.delivery_window);
    shipments.push_back(std::move(j));
  }
  doc["shipments"] = std::move(shipments);
  json hub_links = json::array();
  for (const HubLink& h : inst.hub_links)
    hub_links.push_back({{"upstream", h.upstream}, {"downstream", h.downstream}});
  doc["hub_links"] = std::move(hub_links);
  doc["pallet"] = {{"width", inst.pallet.width},
                   {"length", inst.pallet.length},
                   {"stack_limit", inst.pallet.stack_limit}};
  return doc.dump(2) + "\n";
}

Solution parse_solution(const std::string& text, const Instance& instance) {
  json doc = parse_text(text);
  if (!doc.is_object()) throw ParseError("solution document must be a JSON object");
  int version = require<int>(doc, "schema_version", "solution");
  if (version != kSchemaVersion)
    throw ParseError("unsupported schema_version " + std::to_string(version));

  Solution sol;
  json assignment = require<json>(doc, "assignment", "solution");
  for (const auto& [sid, tid] : assignment.items())
    sol.assignment.truck_of[sid] = tid.get<std::string>();

  for (const json& rj : require<json>(doc, "routes", "solution")) {
    Route r;
    r.truck = require<std::string>(rj, "truck", "route");
    r.horizon = rj.value("horizon", kDayHorizon);
    for (const json& sj : require<json>(rj, "stops", "route " + r.truck)) {
      Stop st;
      st.location = require<std::string>(sj, "location", "stop");
      st.pickups = sj.value("pickups", std::vector<std::string>{});
      st.deliveries = sj.value("deliveries", std::vector<std::string>{});
      st.arrival = require<Minutes>(sj, "arrival", "stop");
      st.wait = require<Minutes>(sj, "wait", "stop");
      st.departure = require<Minutes>(sj, "departure", "stop");
      r.stops.push_back(std::move(st));
    }
    sol.routes.push_back(std::move(r));
  }

  for (const json& pj : require<json>(doc, "placements", "solution")) {
    Placement p;
    p.truck = require<std::string>(pj, "truck", "placement");
    for (const json& ij : require<json>(pj, "items", "placement " + p.truck)) {
      PlacedItem it;
      it.shipment = require<std::string>(ij, "shipment", "item");
      it.column_index = require<int>(ij, "column_index", "item");
      it.u = require<double>(ij, "u", "item");
      it.v = require<double>(ij, "v", "item");
      it.width = require<double>(ij, "width", "item");
      it.length = require<double>(ij, "length", "item");
      it.layers = require<int>(ij, "layers", "item");
      it.bin_total = require<int>(ij, "bin_total", "item");
      it.on_pallet = ij.value("on_pallet", false);
      it.pickup_stop = require<int>(ij, "pickup_stop", "item");
      it.delivery_stop = require<int>(ij, "delivery_stop", "item");
      p.items.push_back(std::move(it));
    }
    sol.placements.push_back(std::move(p));
  }

  sol.total_mileage = require<double>(doc, "total_mileage", "solution");

  for (const auto& [sid, tid] : sol.assignment.truck_of) {
    if (!instance.shipment_index.count(sid))
      throw ParseError("semantic error: assignment references unknown shipment " + sid);
    if (!instance.truck_index.count(tid))
      throw ParseError("semantic error: assignment references unknown truck " + tid);
  }
  return sol;
}

std::string write_solution(const Solution& sol, const Instance& instance,
                           const GtwReport* diagnostics) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  json assignment = json::object();
  for (const auto& [sid, tid] : sol.assignment.truck_of) assignment[sid] = tid;
  doc["assignment"] = std::move(assignment);

  json routes = json::array();
  for (const Route& r : sol.routes) {
    json stops = json::array();
    for (const Stop& st : r.stops)
      stops.push_back({{"location", st.location},
                       {"pickups", st.pickups},
                       {"deliveries", st.deliveries},
                       {"arrival", st.arrival},
                       {"wait", st.wait},
                       {"departure", st.departure}});
    routes.push_back({{"truck", r.truck}, {"horizon", r.horizon}, {"stops", std::move(stops)}});
  }
  doc["routes"] = std::move(routes);

  json placements = json::array();
  for (const Placement& p : sol.placements) {
    json items = json::array();
    for (const PlacedItem& it : p.items)
      items.push_back({{"shipment", it.shipment},
                       {"column_index", it.column_index},
                       {"u", it.u},
                       {"v", it.v},
                       {"width", it.width},
                       {"length", it.length},
                       {"layers", it.layers},
                       {"bin_total", it.bin_total},
                       {"on_pallet", it.on_pallet},
                       {"pickup_stop", it.pickup_stop},
                       {"delivery_stop", it.delivery_stop}});
    placements.push_back({{"truck", p.truck}, {"items", std::move(items)}});
  }
  doc["placements"] = std::move(placements);
  doc["total_mileage"] = sol.total_mileage;

  if (diagnostics) {
    json d;
    d["feasible"] = diagnostics->feasible;
    json waits = json::array();
    for (const auto& [key, w] : diagnostics->waits)
      waits.push_back({{"truck", key.first}, {"stop", key.second}, {"wait", w}});
    d["waits"] = std::move(waits);
    json violations = json::array();
    for (const GtwViolation& v : diagnostics->violations)
      violations.push_back({{"location", v.location},
                            {"time", v.time},
                            {"detail", v.detail},
                            {"entities", v.entities}});
    d["violations"] = std::move(violations);
    doc["diagnostics"] = std::move(d);
  }
  (void)instance;
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Instance generator
// ---------------------------------------------------------------------------

namespace {

// deterministic helpers on top of mt19937_64 (library distributions are
// implementation-defined)
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  std::uint64_t next() { return eng(); }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double uniform(double lo, double hi) {
    double x = static_cast<double>(next() >> 11) * 0x1p-53;
    return lo + x * (hi - lo);
  }
  bool chance(double p) { return uniform(0, 1) < p; }
};

std::string padded_id(const char* prefix, int i, int width = 3) {
  std::string n = std::to_string(i);
  while (static_cast<int>(n.size()) < width) n = "0" + n;
  return prefix + n;
}

// Shelf fit used only to certify the generated witness: columns grouped by
// delivery stop, one band of rows per group, earliest delivery rearmost.
bool shelf_fits(const std::vector<std::vector<Column>>& groups, const Truck& truck) {
  double total_length = 0;
  for (const auto& group : groups) {
    double row_width = 0, row_length = 0;
    for (const Column& c : group) {
      if (c.width > truck.surface_width + kGeomEps) return false;
      if (row_width + c.width > truck.surface_width + kGeomEps) {
        total_length += row_length;
        row_width = 0;
        row_length = 0;
      }
      row_width += c.width;
      row_length = std::max(row_length, c.length);
    }
    total_length += row_length;
  }
  return total_length <= truck.surface_length + kGeomEps;
}

struct TruckModel {
  const char* model;
  const char* length_class;
  double width, length, cost;
};

constexpr TruckModel kTruckModels[] = {
    {"box-7.6", "7.6m", 2.3, 7.0, 1.0},
    {"box-9.6", "9.6m", 2.3, 9.2, 1.25},
    {"box-12", "12m", 2.4, 11.5, 1.5},
};

}  // namespace

Instance generate_instance(const GeneratorConfig& cfg) {
  if (cfg.n_suppliers < 1 || cfg.n_warehouses < 1 || cfg.n_cities < 1 || cfg.bin_variants < 1)
    throw ModelError("generator config infeasible: counts must be positive");
  if (cfg.n_shipments > 0 && cfg.n_trucks < 1)
    throw ModelError("generator config infeasible: zero trucks with nonzero shipments");
  if (!(cfg.window_tightness > 0 && cfg.window_tightness <= 1))
    throw ModelError("generator config infeasible: window_tightness must be in (0,1]");
  if (cfg.dock_count_min < 1 || cfg.dock_count_max < cfg.dock_count_min)
    throw ModelError("generator config infeasible: bad dock count range");

  Rng rng(cfg.seed);
  Instance inst;
  inst.pallet = {1.25, 1.25, 2};

  // city centers on a circle, plants and the yard near the middle
  std::vector<std::array<double, 2>> centers;
  for (int c = 0; c < cfg.n_cities; ++c) {
    double angle = 2 * 3.14159265358979323846 * c / cfg.n_cities;
    double radius = cfg.n_cities == 1 ? 0.0 : 35.0;
    centers.push_back({50 + radius * std::cos(angle), 50 + radius * std::sin(angle)});
  }

  Location yard;
  yard.id = "Y000";
  yard.kind = LocationKind::TruckYard;
  yard.working_window = {0, kMergedHorizon};
  yard.dock_count = std::max(1, cfg.n_trucks);
  yard.handling_time = 0;
  yard.city = "plants";
  yard.coord = {{50.0, 44.0}};
  inst.locations.push_back(yard);

  std::vector<std::string> city_names;
  for (int c = 0; c < cfg.n_cities; ++c) city_names.push_back(padded_id("city-", c, 2));

  for (int i = 0; i < cfg.n_suppliers; ++i) {
    Location loc;
    loc.id = padded_id("S", i);
    loc.kind = LocationKind::Supplier;
    loc.working_window = {0, kDayHorizon};
    loc.dock_count = rng.uniform_int(cfg.dock_count_min, cfg.dock_count_max);
    loc.handling_time = rng.uniform_int(10, 25);
    int c = i % cfg.n_cities;
    loc.city = city_names[c];
    double angle = rng.uniform(0, 2 * 3.14159265358979323846);
    double r = rng.uniform(0, 6.0);
    loc.coord = {{centers[c][0] + r * std::cos(angle), centers[c][1] + r * std::sin(angle)}};
    inst.locations.push_back(std::move(loc));
  }

  for (int i = 0; i < cfg.n_warehouses; ++i) {
    Location loc;
    loc.id = padded_id("W", i);
    loc.kind = LocationKind::Warehouse;
    loc.working_window = {0, kDayHorizon};
    loc.dock_count = rng.uniform_int(std::max(2, cfg.dock_count_min), std::max(2, cfg.dock_count_max));
    loc.handling_time = rng.uniform_int(10, 20);
    loc.city = "plants";
    double angle = rng.uniform(0, 2 * 3.14159265358979323846);
    double r = rng.uniform(0, 4.0);
    loc.coord = {{50 + r * std::cos(angle), 50 + r * std::sin(angle)}};
    inst.locations.push_back(std::move(loc));
  }

  size_t n_loc = inst.locations.size();
  inst.travel.distance.assign(n_loc, std::vector<double>(n_loc, 0));
  inst.travel.travel_time.assign(n_loc, std::vector<Minutes>(n_loc, 0));
  for (size_t i = 0; i < n_loc; ++i)
    for (size_t j = 0; j < n_loc; ++j) {
      if (i == j) continue;
      const auto& a = *inst.locations[i].coord;
      const auto& b = *inst.locations[j].coord;
      double d = std::hypot(a[0] - b[0], a[1] - b[1]);
      d = std::round(d * 100) / 100;  // 2-decimal distances
      inst.travel.distance[i][j] = d;
      inst.travel.travel_time[i][j] = static_cast<Minutes>(std::ceil(d / 0.7));
    }

  for (int i = 0; i < cfg.n_trucks; ++i) {
    const TruckModel& m = kTruckModels[i % 3];
    Truck t;
    t.id = padded_id("T", i);
    t.model = m.model;
    t.surface_width = m.width;
    t.surface_length = m.length;
    t.length_class = m.length_class;
    t.cost_per_distance = m.cost;
    t.home_yard = "Y000";
    inst.trucks.push_back(std::move(t));
  }

  std::vector<BinSpec> bins;
  for (int i = 0; i < cfg.bin_variants; ++i) {
    BinSpec b;
    b.width = std::round(rng.uniform(0.4, 1.2) * 10) / 10;
    b.length = std::round(rng.uniform(0.4, 1.2) * 10) / 10;
    b.height = std::round(rng.uniform(0.5, 1.2) * 10) / 10;
    b.stack_limit = rng.uniform_int(1, 4);
    bins.push_back(b);
  }

  for (int i = 0; i < cfg.n_shipments; ++i) {
    Shipment s;
    s.id = padded_id("J", i);
    int supplier = rng.uniform_int(0, cfg.n_suppliers - 1);
    int warehouse = rng.uniform_int(0, cfg.n_warehouses - 1);
    s.source = inst.locations[1 + supplier].id;
    s.destination = inst.locations[1 + cfg.n_suppliers + warehouse].id;
    s.bin = bins[rng.uniform_int(0, cfg.bin_variants - 1)];
    int n_cols = rng.uniform_int(1, 3);
    s.bin_count = s.bin.stack_limit * (n_cols - 1) + rng.uniform_int(1, s.bin.stack_limit);
    s.needs_pallet = rng.chance(0.2) && s.bin.width <= inst.pallet.width &&
                     s.bin.length <= inst.pallet.length;
    s.pickup_window = {0, kDayHorizon};
    s.delivery_window = {0, kDayHorizon};
    inst.shipments.push_back(std::move(s));
  }

  inst.finalize();
  if (cfg.n_shipments == 0) return inst;

  // ------------------------------------------------------------------
  // Witness: greedy shelf-certified truck fills, city by city
  // ------------------------------------------------------------------
  struct WitnessTruck {
    int truck_idx;
    std::vector<int> shipments;
  };

  std::vector<int> truck_order(inst.trucks.size());
  for (size_t i = 0; i < truck_order.size(); ++i) truck_order[i] = static_cast<int>(i);
  std::sort(truck_order.begin(), truck_order.end(), [&](int a, int b) {
    double sa = inst.trucks[a].surface_area(), sb = inst.trucks[b].surface_area();
    if (sa != sb) return sa < sb;
    return inst.trucks[a].id < inst.trucks[b].id;
  });

  std::map<std::string, std::vector<int>> by_city;
  for (size_t i = 0; i < inst.shipments.size(); ++i)
    by_city[inst.location(inst.shipments[i].source).city].push_back(static_cast<int>(i));
  for (auto& [city, list] : by_city)
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      double da = inst.distance(inst.shipments[a].source, inst.shipments[a].destination);
      double db = inst.distance(inst.shipments[b].source, inst.shipments[b].destination);
      if (da != db) return da > db;
      return inst.shipments[a].id < inst.shipments[b].id;
    });

  auto truck_fits = [&](const Truck& truck, const std::vector<int>& shipment_idxs) {
    // group columns by destination id (delivery bands)
    std::map<LocationId, std::vector<Column>> groups;
    for (int si : shipment_idxs) {
      auto cols = build_columns(inst.shipments[si], inst.pallet);
      auto& g = groups[inst.shipments[si].destination];
      g.insert(g.end(), cols.begin(), cols.end());
    }
    std::vector<std::vector<Column>> bands;
    for (auto& [dest, cols] : groups) bands.push_back(cols);
    return shelf_fits(bands, truck);
  };

  std::vector<WitnessTruck> witness;
  size_t next_truck = 0;
  for (auto& [city, list] : by_city) {
    WitnessTruck* current = nullptr;
    for (int si : list) {
      if (current) {
        std::vector<int> trial = current->shipments;
        trial.push_back(si);
        if (truck_fits(inst.trucks[truck_order[current->truck_idx]], trial)) {
          current->shipments = std::move(trial);
          continue;
        }
      }
      // open the next truck
      while (next_truck < truck_order.size()) {
        const Truck& t = inst.trucks[truck_order[next_truck]];
        if (truck_fits(t, {si})) break;
        ++next_truck;
      }
      if (next_truck >= truck_order.size())
        throw ModelError("generator config infeasible: fleet too small for a feasible witness");
      witness.push_back({static_cast<int>(next_truck), {si}});
      current = &witness.back();
      ++next_truck;
    }
  }

  // witness routes: sources by id, then destinations by id
  std::vector<Route> routes;
  for (const WitnessTruck& wt : witness) {
    const Truck& truck = inst.trucks[truck_order[wt.truck_idx]];
    std::map<LocationId, Stop> pick_stops, del_stops;
    for (int si : wt.shipments) {
      const Shipment& s = inst.shipments[si];
      Stop& ps = pick_stops[s.source];
      ps.location = s.source;
      ps.pickups.push_back(s.id);
      Stop& ds = del_stops[s.destination];
      ds.location = s.destination;
      ds.deliveries.push_back(s.id);
    }
    Route r;
    r.truck = truck.id;
    r.stops.push_back({truck.home_yard, {}, {}, 0, 0, 0});
    for (auto& [loc, st] : pick_stops) r.stops.push_back(st);
    for (auto& [loc, st] : del_stops) r.stops.push_back(st);
    r.stops.push_back({truck.home_yard, {}, {}, 0, 0, 0});
    auto timed = propagate_times(r.stops, truck, inst, kDayHorizon);
    if (!timed)
      throw ModelError("generator config infeasible: witness route exceeds the horizon");
    r.stops = std::move(*timed);
    routes.push_back(std::move(r));
  }

  // settle queue waits, then size windows around the settled schedule
  GtwReport settled = simulate_queues(routes, inst);
  if (!settled.feasible)
    throw ModelError("generator config infeasible: witness queues do not settle");

  Minutes shipment_slack = static_cast<Minutes>(std::ceil(45.0 / cfg.window_tightness));
  Minutes location_slack = static_cast<Minutes>(std::ceil(90.0 / cfg.window_tightness));

  std::map<LocationId, std::pair<Minutes, Minutes>> visit_span;
  std::map<ShipmentId, std::pair<Minutes, Minutes>> pickup_span, delivery_span;
  std::map<LocationId, int> visit_count;
  std::map<LocationId, std::set<std::string>> visit_classes;
  for (const Route& r : routes) {
    const Truck& truck = inst.truck(r.truck);
    for (size_t k = 1; k + 1 < r.stops.size(); ++k) {
      const Stop& st = r.stops[k];
      Minutes start = st.arrival + st.wait;
      auto [it, fresh] = visit_span.try_emplace(st.location, start, st.departure);
      if (!fresh) {
        it->second.first = std::min(it->second.first, start);
        it->second.second = std::max(it->second.second, st.departure);
      }
      visit_count[st.location] += 1;
      visit_classes[st.location].insert(truck.length_class);
      for (const ShipmentId& sid : st.pickups) pickup_span[sid] = {start, st.departure};
      for (const ShipmentId& sid : st.deliveries) delivery_span[sid] = {start, st.departure};
    }
  }

  for (Location& loc : inst.locations) {
    if (loc.kind == LocationKind::TruckYard) continue;
    auto it = visit_span.find(loc.id);
    if (it == visit_span.end()) {
      loc.working_window = {0, kDayHorizon};
      continue;
    }
    loc.working_window = {std::max(0, it->second.first - location_slack),
                          std::min(kDayHorizon, it->second.second + location_slack)};
  }
  for (Shipment& s : inst.shipments) {
    auto p = pickup_span.at(s.id);
    auto d = delivery_span.at(s.id);
    s.pickup_window = {std::max(0, p.first - shipment_slack),
                       std::min(kDayHorizon, p.second + shipment_slack)};
    s.delivery_window = {std::max(0, d.first - shipment_slack),
                         std::min(kDayHorizon, d.second + shipment_slack)};
  }

  // sparse extra side constraints, always satisfied by the witness
  for (Location& loc : inst.locations) {
    if (loc.kind != LocationKind::Supplier) continue;
    auto vc = visit_count.find(loc.id);
    if (vc == visit_count.end()) continue;
    if (rng.chance(0.2)) {
      std::set<std::string> allowed = visit_classes[loc.id];
      allowed.insert(kTruckModels[rng.uniform_int(0, 2)].length_class);
      loc.allowed_truck_lengths = std::move(allowed);
    }
    if (rng.chance(0.2)) loc.max_visits = vc->second + rng.uniform_int(1, 2);
  }

  inst.finalize();

  // the witness must stay feasible with the final windows
  for (Route& r : routes) {
    auto timed = propagate_times(r.stops, inst.truck(r.truck), inst, kDayHorizon);
    if (!timed) throw ModelError("generator internal error: witness broke during window sizing");
    r.stops = std::move(*timed);
  }
  GtwReport final_report = simulate_queues(routes, inst);
  if (!final_report.feasible)
    throw ModelError("generator internal error: witness queues infeasible after window sizing");

  return inst;
}

}  // namespace vrp2l
