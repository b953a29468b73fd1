#pragma once

#include <cstdint>
#include <string>

#include "vrp2l/model.hpp"
#include "vrp2l/schedule.hpp"

namespace vrp2l {

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;

// UTF-8 JSON documents. Top-level instance keys: locations, matrices, trucks,
// shipments, hub_links, pallet. Solution keys: assignment, routes,
// placements, total_mileage (plus an optional diagnostics block).
Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& instance);

Solution parse_solution(const std::string& text, const Instance& instance);
std::string write_solution(const Solution& solution, const Instance& instance,
                           const GtwReport* diagnostics = nullptr);

struct GeneratorConfig {
  std::uint64_t seed = 1;
  int n_suppliers = 10;
  int n_warehouses = 2;
  int n_shipments = 30;
  int n_trucks = 10;
  int n_cities = 2;
  int bin_variants = 6;
  double window_tightness = 0.5;  // in (0,1]; 1 = tightest windows
  int dock_count_min = 1;
  int dock_count_max = 3;
};

// Deterministic in the seed; every generated instance admits at least one
// feasible solution (a greedy witness is built and windows are sized around
// its settled schedule). Throws ModelError on infeasible configs.
Instance generate_instance(const GeneratorConfig& config);

}  // namespace vrp2l
