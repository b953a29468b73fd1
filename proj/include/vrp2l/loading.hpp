#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vrp2l/model.hpp"

namespace vrp2l {

// A bin column placed on one pallet layer, coordinates relative to the pallet.
struct PalletColumnSlot {
  int pallet_layer = 0;
  double u = 0;
  double v = 0;
  int bin_layers = 1;
  bool operator==(const PalletColumnSlot&) const = default;
};

// One placeable rectangle on the truck surface: either a bare column of
// stacked bins or a stack of loaded pallets.
struct Column {
  ShipmentId shipment;
  double width = 0;
  double length = 0;
  int layers = 1;  // bin layers (bare) or pallet count (pallet stack)
  bool on_pallet = false;
  std::vector<PalletColumnSlot> pallet_columns;

  int bin_total() const {
    if (!on_pallet) return layers;
    int total = 0;
    for (const auto& slot : pallet_columns) total += slot.bin_layers;
    return total;
  }
  bool operator==(const Column&) const = default;
};

struct PackParams {
  double prejudge_threshold = 0.85;
  int beam_width = 5;  // 0 selects the exhaustive complete search
  double w_waste = 1.0;
  double w_irregularity = 0.5;
  double w_cover = 1.0;
  // below this many columns the search is always exhaustive (complete)
  int auto_exhaustive_cap = 6;
  long exhaustive_node_cap = 20'000'000;
};

enum class PackReject { None, Prejudge, NoArrangement, Sequence };

const char* to_string(PackReject r);

struct PackOutcome {
  bool feasible = false;
  std::optional<Placement> placement;
  PackReject reject_reason = PackReject::None;
};

struct PackItem {
  Column column;
  int pickup_stop = 0;
  int delivery_stop = 1;
};

// Stacks a shipment's bins into columns; pallet shipments get their columns
// arranged onto pallet footprints and the loaded pallets stacked.
// Throws ModelError when the bin footprint exceeds the pallet footprint.
std::vector<Column> build_columns(const Shipment& shipment, const PalletSpec& pallet);

// Area filter: total column footprint area within threshold * surface area.
bool prejudge(std::span<const Column> columns, const Truck& truck, double threshold);

// Searches for a placement satisfying B2 (bounds, non-overlap among
// coexisting items) and B3 (rear extraction order). Deterministic.
PackOutcome pack(const std::vector<PackItem>& items, const Truck& truck,
                 const PackParams& params);

// B3 check on a finished placement (stop indices carried by the items).
bool check_sequence(const Placement& placement, const Route& route);

}  // namespace vrp2l
