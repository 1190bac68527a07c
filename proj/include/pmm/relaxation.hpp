#pragma once

#include "pmm/instance.hpp"
#include "pmm/lp.hpp"
#include "pmm/solution.hpp"

namespace pmm {

// The fractional relaxation: open mass y_i per facility, assignment mass x_ij
// per (facility, client) pair with d(i,j) <= r_j, minimizing opening plus
// demand-weighted connection cost subject to unit coverage, x <= y, and y in
// the matroid polytope (enforced by the caller via solve_over_matroid).
struct MainLp {
  LinearProgram lp;
  std::vector<int> y_var;                               // per facility
  std::vector<std::vector<std::pair<int, int>>> x_var;  // per client: (facility, lp var)
};

// Throws InfeasibleError when some client has no facility within its radius.
MainLp build_main_lp(const Instance& inst);

// Per-client cheapest fractional assignment given open mass y: fill facilities
// nearest-first (ties by facility index) until total mass 1, never using a
// facility beyond the client radius. Throws InfeasibleError when a client's
// radius ball carries y-mass < 1.
FracSolution assign_from_y(const Instance& inst, const std::vector<Rat>& y);

struct RelaxationResult {
  FracSolution frac;  // x re-derived by assign_from_y (canonical greedy form)
  Rat lp_value;
  int pivots = 0;
  int cuts_added = 0;
};

// Builds and solves the relaxation, then canonicalizes x via assign_from_y.
// The greedy x is per-client optimal for the solved y, so its objective equals
// the LP optimum exactly (checked).
RelaxationResult solve_relaxation(const Instance& inst, int enum_cap = 22,
                                  LinearProgram* final_lp = nullptr);

}  // namespace pmm
