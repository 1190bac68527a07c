#pragma once

#include <cstdint>
#include <string>

#include "pmm/rational.hpp"

namespace pmm {

// Random-instance parameters. Generation is deterministic in the seed: the
// same options always produce byte-identical files.
struct GenOptions {
  std::uint64_t seed = 1;
  int facilities = 8;
  int clients = 10;
  std::string matroid = "uniform";  // uniform | partition | laminar | graphic
  int q = 2;           // radius reaches the q-th nearest facility
  Rat slack = Rat(1);  // radius = slack * that distance; < 1 courts infeasibility
  bool uniform_radius = false;    // all radii equal (the max of the per-client rule)
  bool plant_infeasible = false;  // one client's radius placed below every facility
  int grid = 40;                  // integer coordinates in [0, grid]
  int dims = 2;
  int max_cost = 20;    // facility opening cost in [0, max_cost]
  int max_demand = 5;   // client demand in [1, max_demand]
  int zero_radius_percent = 10;  // chance of a radius-0 client pinned on a facility
  // Redraw until the relaxation is feasible (at most this many attempts);
  // the emitted file's meta.feasible records "lp", "no", or "unknown".
  int feasibility_attempts = 20;
  bool check_feasibility = true;
};

// Serialized instance JSON (trailing newline included).
std::string generate_instance_text(const GenOptions& opts);

}  // namespace pmm
