#pragma once

#include <string>

#include "vrp2l/construct.hpp"
#include "vrp2l/postopt.hpp"
#include "vrp2l/schedule.hpp"
#include "vrp2l/tabu.hpp"

namespace vrp2l {

struct PipelineOptions {
  ConstructParams construct;
  TabuParams tabu;
  PostoptParams postopt;
  bool run_postopt = true;
};

struct PipelineResult {
  Solution initial;
  Solution after_tabu;
  Solution final;
  GtwReport diagnostics;           // queue report of the final solution
  std::string convergence_csv;     // iteration,elapsed_ms,current_mileage,best_mileage
};

// construct -> tabu_search -> post-optimization
PipelineResult run_pipeline(const Instance& instance, PipelineOptions options);

}  // namespace vrp2l
