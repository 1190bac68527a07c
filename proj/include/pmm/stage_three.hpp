#pragma once

#include <vector>

#include "pmm/instance.hpp"
#include "pmm/ledger.hpp"
#include "pmm/solution.hpp"
#include "pmm/stage_two.hpp"

namespace pmm {

// Centers grouped by overlapping open-support pairs S_t = {i1(t), i2(t)}.
// Representatives ("cprime") are chosen greedily by increasing chat and own
// pairwise-disjoint support pairs; every other center points at the first
// representative whose pair intersects its own.
struct CenterClustering {
  std::vector<Mask> S;      // per center: support pair as a facility mask
  std::vector<int> cprime;  // representatives, in pick order
  std::vector<int> ctr;     // per center: its representative (self if picked)
};

CenterClustering cluster_centers(const Instance& red, const HalfIntState& half, Ledger& ledger);

// yhat with each representative block S_u overwritten by that center's xhat
// values; feasible for the final polytope and the comparison point for H.
std::vector<Rat> build_yhat_prime(const Instance& red, const HalfIntState& half,
                                  const CenterClustering& cl, Ledger& ledger);

// Final-stage objective: facility costs plus, per center, a proxy assignment
// cost L_t over its representative's block (with a signed correction on the
// center's own primary when that primary sits outside the block).
Rat eval_H(const Instance& red, const HalfIntState& half, const CenterClustering& cl,
           const std::vector<Rat>& z);

struct IntegralState {
  std::vector<Rat> yhat_prime;
  std::vector<Rat> ztilde;  // integral optimum of H over the final polytope
  Rat H_yhat_prime;
  Rat H_ztilde;
};

// Minimizes H over {z in the matroid polytope, 0 <= z <= 1, z(S_u) = 1 for
// every representative u}; the certified vertex is exactly integral.
IntegralState solve_r(const Instance& red, const HalfIntState& half, const CenterClustering& cl,
                      Ledger& ledger, int enum_cap = 22);

// Opens {i : ztilde_i = 1} and routes each center to its block's open
// facility, or to its own primary when that happens to be open.
IntegralSolution extract_integral(const Instance& red, const HalfIntState& half,
                                  const CenterClustering& cl, const IntegralState& integral,
                                  Ledger& ledger);

}  // namespace pmm
