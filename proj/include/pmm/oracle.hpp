#pragma once

#include <vector>

#include "pmm/instance.hpp"
#include "pmm/solution.hpp"
#include "pmm/stage_three.hpp"
#include "pmm/stage_two.hpp"

namespace pmm {

// Exact optimum by enumerating every independent facility set that serves all
// clients within their radii; cost uses the induced nearest-open assignment.
struct ExactOpt {
  bool feasible = false;
  Rat opt;
  Mask best_set = 0;             // first minimizer in ascending mask order
  std::vector<int> best_assign;  // per client: nearest open facility
};

ExactOpt exact_opt(const Instance& inst, int cap = 14);

// Minimum of the stage-two surrogate T over the half-integral grid points of
// its polytope. The polytope's vertices are half-integral, so this equals the
// LP optimum; values are evaluated through eval_T, independent of the LP's
// row assembly.
Rat enumerate_q_optimum(const Instance& red, const StageTwoSets& sets, int cap = 16);

// Minimum of the final objective H over integral points: independent sets
// hitting each representative block exactly once, evaluated through eval_H.
Rat enumerate_r_optimum(const Instance& red, const HalfIntState& half,
                        const CenterClustering& cl, int cap = 16);

}  // namespace pmm
