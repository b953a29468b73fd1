#pragma once

#include <optional>
#include <vector>

#include "vrp2l/loading.hpp"
#include "vrp2l/model.hpp"

namespace vrp2l {

class OracleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  int max_shipments = 6;
  int max_trucks = 3;
  int max_columns = 5;
};

struct OracleResult {
  bool feasible = false;
  double mileage = std::numeric_limits<double>::infinity();
  std::optional<Solution> solution;
};

// Brute-force reference solver: enumerates all assignments, all canonical
// visit orders, all grid placements and an independent queue simulation.
// Test/debug only; refuses inputs beyond the limits with OracleError.
OracleResult exact_solve(const Instance& instance, const OracleLimits& limits = {});

// Exhaustive placement search on the grid of dimension partial sums, with a
// rear-extraction forklift simulation for the loading sequence rule.
// Independent of the production packing code.
bool exact_pack(const std::vector<PackItem>& items, const Truck& truck,
                const OracleLimits& limits = {});

}  // namespace vrp2l
