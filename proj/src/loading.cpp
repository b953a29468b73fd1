#include "vrp2l/loading.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace vrp2l {

const char* to_string(PackReject r) {
  switch (r) {
    case PackReject::None: return "none";
    case PackReject::Prejudge: return "prejudge";
    case PackReject::NoArrangement: return "no-arrangement";
    case PackReject::Sequence: return "sequence";
  }
  return "none";
}

std::vector<Column> build_columns(const Shipment& shipment, const PalletSpec& pallet) {
  std::vector<Column> out;
  const BinSpec& bin = shipment.bin;
  int remaining = shipment.bin_count;

  if (!shipment.needs_pallet) {
    while (remaining > 0) {
      int layers = std::min(remaining, bin.stack_limit);
      out.push_back({shipment.id, bin.width, bin.length, layers, false, {}});
      remaining -= layers;
    }
    return out;
  }

  if (bin.width > pallet.width + kGeomEps || bin.length > pallet.length + kGeomEps)
    throw ModelError("shipment " + shipment.id + ": bin footprint exceeds the pallet footprint");

  // Identical fixed-orientation columns: a grid fill is maximal per pallet.
  int per_row = static_cast<int>(std::floor(pallet.width / bin.width + kGeomEps));
  int per_col = static_cast<int>(std::floor(pallet.length / bin.length + kGeomEps));
  int per_pallet = per_row * per_col;

  std::vector<int> column_layers;
  while (remaining > 0) {
    int layers = std::min(remaining, bin.stack_limit);
    column_layers.push_back(layers);
    remaining -= layers;
  }

  int n_columns = static_cast<int>(column_layers.size());
  int n_pallets = (n_columns + per_pallet - 1) / per_pallet;
  int n_stacks = (n_pallets + pallet.stack_limit - 1) / pallet.stack_limit;

  int col = 0;
  int pallet_idx = 0;
  for (int s = 0; s < n_stacks; ++s) {
    Column stack{shipment.id, pallet.width, pallet.length, 0, true, {}};
    for (int layer = 0; layer < pallet.stack_limit && pallet_idx < n_pallets; ++layer, ++pallet_idx) {
      stack.layers += 1;
      for (int slot = 0; slot < per_pallet && col < n_columns; ++slot, ++col) {
        double u = (slot % per_row) * bin.width;
        double v = (slot / per_row) * bin.length;
        stack.pallet_columns.push_back({layer, u, v, column_layers[col]});
      }
    }
    out.push_back(std::move(stack));
  }
  return out;
}

bool prejudge(std::span<const Column> columns, const Truck& truck, double threshold) {
  double area = 0;
  for (const Column& c : columns) area += c.width * c.length;
  return area <= threshold * truck.surface_area() + kGeomEps;
}

namespace {

struct Rect {
  double u, v, w, l;
  int pickup, delivery;
};

bool coexist(const Rect& a, const Rect& b) {
  return a.pickup < b.delivery && b.pickup < a.delivery;
}

// B3 pair rule: b unloaded before a while a was on board no later than b.
bool pair_sequence_ok(const Rect& a, const Rect& b) {
  if (!(b.delivery < a.delivery && a.pickup <= b.pickup)) return true;
  bool u_disjoint = a.u + kGeomEps >= b.u + b.w || b.u + kGeomEps >= a.u + a.w;
  bool b_rearward = b.v + b.l <= a.v + kGeomEps;
  return u_disjoint || b_rearward;
}

bool position_ok(const std::vector<Rect>& placed, const Rect& cand, double surf_w,
                 double surf_l, bool* b3_blocked) {
  if (cand.u < -kGeomEps || cand.v < -kGeomEps || cand.u + cand.w > surf_w + kGeomEps ||
      cand.v + cand.l > surf_l + kGeomEps)
    return false;
  for (const Rect& p : placed) {
    if (coexist(p, cand) &&
        rects_overlap(p.u, p.v, p.w, p.l, cand.u, cand.v, cand.w, cand.l))
      return false;
  }
  for (const Rect& p : placed) {
    if (!pair_sequence_ok(p, cand) || !pair_sequence_ok(cand, p)) {
      if (b3_blocked) *b3_blocked = true;
      return false;
    }
  }
  return true;
}

std::vector<double> dedup_sorted(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  for (double x : xs) {
    if (out.empty() || x > out.back() + kGeomEps) out.push_back(x);
  }
  return out;
}

// Subset sums of the item dimensions, bounded by the surface extent. Complete
// candidate grid for axis-aligned fixed-orientation rectangles.
std::vector<double> subset_sums(const std::vector<double>& dims, double bound) {
  std::vector<double> sums{0.0};
  for (double d : dims) {
    size_t n = sums.size();
    for (size_t i = 0; i < n; ++i) {
      double s = sums[i] + d;
      if (s <= bound + kGeomEps) sums.push_back(s);
    }
    sums = dedup_sorted(std::move(sums));
  }
  return sums;
}

struct OrderedItem {
  Rect rect;      // u, v unset until placed
  int input_idx;  // position in the caller's item list
};

// canonical insertion order: earlier deliveries first (they sit rearward),
// then larger footprints, then stable input order
std::vector<OrderedItem> order_items(const std::vector<PackItem>& items) {
  std::vector<OrderedItem> out;
  out.reserve(items.size());
  for (size_t i = 0; i < items.size(); ++i) {
    const PackItem& it = items[i];
    out.push_back({{0, 0, it.column.width, it.column.length, it.pickup_stop, it.delivery_stop},
                   static_cast<int>(i)});
  }
  std::stable_sort(out.begin(), out.end(), [](const OrderedItem& a, const OrderedItem& b) {
    if (a.rect.delivery != b.rect.delivery) return a.rect.delivery < b.rect.delivery;
    double aa = a.rect.w * a.rect.l, ab = b.rect.w * b.rect.l;
    if (std::abs(aa - ab) > kGeomEps) return aa > ab;
    return a.input_idx < b.input_idx;
  });
  return out;
}

bool same_shape_and_stops(const OrderedItem& a, const OrderedItem& b) {
  return std::abs(a.rect.w - b.rect.w) <= kGeomEps && std::abs(a.rect.l - b.rect.l) <= kGeomEps &&
         a.rect.pickup == b.rect.pickup && a.rect.delivery == b.rect.delivery;
}

struct ExhaustiveSearch {
  const std::vector<OrderedItem>& items;
  double surf_w, surf_l;
  const std::vector<double>& us;
  const std::vector<double>& vs;
  long budget;
  bool b3_blocked = false;
  std::vector<Rect> placed;
  std::vector<std::pair<double, double>> positions;

  bool run(size_t level) {
    if (level == items.size()) return true;
    Rect r = items[level].rect;
    for (double u : us) {
      if (u + r.w > surf_w + kGeomEps) break;
      for (double v : vs) {
        if (v + r.l > surf_l + kGeomEps) break;
        if (--budget < 0) return false;
        // identical items are interchangeable: force lexicographic positions
        if (level > 0 && same_shape_and_stops(items[level - 1], items[level])) {
          const auto& prev = positions[level - 1];
          if (u < prev.first - kGeomEps ||
              (std::abs(u - prev.first) <= kGeomEps && v < prev.second - kGeomEps))
            continue;
        }
        r.u = u;
        r.v = v;
        if (!position_ok(placed, r, surf_w, surf_l, &b3_blocked)) continue;
        placed.push_back(r);
        positions.push_back({u, v});
        if (run(level + 1)) return true;
        placed.pop_back();
        positions.pop_back();
      }
    }
    return false;
  }
};

struct BeamState {
  std::vector<Rect> placed;
  double score = 0;
};

double skyline_score(const std::vector<Rect>& placed, const PackParams& params) {
  if (placed.empty()) return 0;
  std::vector<double> cuts;
  for (const Rect& r : placed) {
    cuts.push_back(r.u);
    cuts.push_back(r.u + r.w);
  }
  cuts = dedup_sorted(std::move(cuts));
  double covered = 0;
  for (const Rect& r : placed) covered += r.w * r.l;
  double envelope = 0, irregularity = 0, prev_height = -1;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    double height = 0;
    for (const Rect& r : placed)
      if (r.u <= mid && mid <= r.u + r.w) height = std::max(height, r.v + r.l);
    envelope += height * (cuts[i + 1] - cuts[i]);
    if (prev_height >= 0) irregularity += std::abs(height - prev_height);
    prev_height = height;
  }
  double waste = std::max(0.0, envelope - covered);
  return params.w_cover * covered - params.w_waste * waste -
         params.w_irregularity * irregularity;
}

bool lex_less(const std::vector<Rect>& a, const std::vector<Rect>& b) {
  for (size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i].u != b[i].u) return a[i].u < b[i].u;
    if (a[i].v != b[i].v) return a[i].v < b[i].v;
  }
  return a.size() < b.size();
}

}  // namespace

PackOutcome pack(const std::vector<PackItem>& items, const Truck& truck,
                 const PackParams& params) {
  PackOutcome out;
  if (items.empty()) {
    out.feasible = true;
    out.placement = Placement{truck.id, {}};
    return out;
  }

  std::vector<OrderedItem> ordered = order_items(items);
  double surf_w = truck.surface_width;
  double surf_l = truck.surface_length;

  for (const OrderedItem& it : ordered)
    if (it.rect.w > surf_w + kGeomEps || it.rect.l > surf_l + kGeomEps) {
      out.reject_reason = PackReject::NoArrangement;
      return out;
    }

  bool exhaustive = params.beam_width <= 0 ||
                    static_cast<int>(items.size()) <= params.auto_exhaustive_cap;

  std::vector<Rect> final_placed;
  bool found = false;
  bool b3_blocked = false;

  if (exhaustive) {
    std::vector<double> widths, lengths;
    for (const OrderedItem& it : ordered) {
      widths.push_back(it.rect.w);
      lengths.push_back(it.rect.l);
    }
    std::vector<double> us = subset_sums(widths, surf_w);
    std::vector<double> vs = subset_sums(lengths, surf_l);
    ExhaustiveSearch search{ordered, surf_w, surf_l, us, vs, params.exhaustive_node_cap};
    found = search.run(0);
    b3_blocked = search.b3_blocked;
    if (found) final_placed = search.placed;
  } else {
    std::vector<BeamState> beam{{{}, 0}};
    for (const OrderedItem& it : ordered) {
      std::vector<BeamState> next;
      for (const BeamState& state : beam) {
        std::vector<double> us{0.0}, vs{0.0};
        for (const Rect& p : state.placed) {
          us.push_back(p.u + p.w);
          vs.push_back(p.v + p.l);
        }
        us = dedup_sorted(std::move(us));
        vs = dedup_sorted(std::move(vs));
        for (double u : us)
          for (double v : vs) {
            Rect r = it.rect;
            r.u = u;
            r.v = v;
            if (!position_ok(state.placed, r, surf_w, surf_l, &b3_blocked)) continue;
            BeamState child{state.placed, 0};
            child.placed.push_back(r);
            child.score = skyline_score(child.placed, params);
            next.push_back(std::move(child));
          }
      }
      if (next.empty()) break;
      std::sort(next.begin(), next.end(), [](const BeamState& a, const BeamState& b) {
        if (a.score != b.score) return a.score > b.score;
        return lex_less(a.placed, b.placed);
      });
      if (static_cast<int>(next.size()) > params.beam_width)
        next.resize(params.beam_width);
      beam = std::move(next);
    }
    if (!beam.empty() && beam.front().placed.size() == ordered.size()) {
      found = true;
      final_placed = beam.front().placed;
    }
  }

  if (!found) {
    out.reject_reason = b3_blocked ? PackReject::Sequence : PackReject::NoArrangement;
    return out;
  }

  Placement placement{truck.id, {}};
  for (size_t i = 0; i < ordered.size(); ++i) {
    const PackItem& src = items[ordered[i].input_idx];
    const Rect& r = final_placed[i];
    PlacedItem item;
    item.shipment = src.column.shipment;
    item.column_index = ordered[i].input_idx;
    item.u = r.u;
    item.v = r.v;
    item.width = r.w;
    item.length = r.l;
    item.layers = src.column.layers;
    item.bin_total = src.column.bin_total();
    item.on_pallet = src.column.on_pallet;
    item.pickup_stop = src.pickup_stop;
    item.delivery_stop = src.delivery_stop;
    placement.items.push_back(std::move(item));
  }
  std::sort(placement.items.begin(), placement.items.end(),
            [](const PlacedItem& a, const PlacedItem& b) {
              if (a.shipment != b.shipment) return a.shipment < b.shipment;
              return a.column_index < b.column_index;
            });
  out.feasible = true;
  out.placement = std::move(placement);
  return out;
}

bool check_sequence(const Placement& placement, const Route& route) {
  int n = route.n_stops();
  for (const PlacedItem& it : placement.items)
    if (it.pickup_stop < 0 || it.delivery_stop >= n || it.pickup_stop >= it.delivery_stop)
      return false;
  for (size_t i = 0; i < placement.items.size(); ++i)
    for (size_t j = i + 1; j < placement.items.size(); ++j) {
      const PlacedItem& a = placement.items[i];
      const PlacedItem& b = placement.items[j];
      if (!sequence_pair_ok(a, b) || !sequence_pair_ok(b, a)) return false;
    }
  return true;
}

}  // namespace vrp2l
