#pragma once

#include <string>
#include <vector>

#include "pmm/instance.hpp"
#include "pmm/ledger.hpp"
#include "pmm/solution.hpp"

namespace pmm {

// Rounding modes. The pair (phi, lambda) steers the filtering sweep:
//   general21: phi = lambda = min(r_j, 2 cbar_j)        -> (21, 12) guarantees
//   general36: phi = cbar_j, lambda = 2 cbar_j          -> (36, 8)
//   uniform:   phi = cbar_j, lambda = min(L, 2 cbar_j)  -> (9, 8), radii all L
//   custom:    explicit per-client tables (experimental; generic ledger only)
enum class Mode { General21, General36, Uniform, Custom };

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& name);

struct PhiLambda {
  std::vector<Rat> phi;
  std::vector<Rat> lambda;
};

// Built-in tables from the fractional solution (uniform requires equal radii).
PhiLambda make_phi_lambda(const Instance& inst, const FracSolution& frac, Mode mode);

// Compatibility: any phi-sorted order is also lambda-sorted. Equivalent to
// phi(a) < phi(b) => lambda(a) <= lambda(b) and phi ties forcing lambda ties.
// Built-in tables satisfy this; custom tables are rejected when they don't.
void check_compatible_or_throw(const PhiLambda& pl);

// Result of the filtering sweep: centers in pick order; every original client
// belongs to exactly one center's child list (centers are their own children).
struct ClusterOutput {
  std::vector<int> centers;                 // original client indices
  std::vector<std::vector<int>> children;   // per center: covered clients
  std::vector<Rat> new_demand;              // per center: sum of child demands
  PhiLambda tables;                         // per original client
  std::vector<int> center_of;               // per original client -> centers slot
};

// Greedy sweep: repeatedly pick the uncovered client with smallest
// (phi, index), make it a center, and absorb every uncovered k with
// d(center, k) <= 2 lambda(k).
ClusterOutput run_filter(const Instance& inst, const PhiLambda& pl);

// The filtered instance: same facilities/metric/matroid, clients = centers
// (radii inherited, demand = absorbed demand). Shares the distance table.
Instance reduce_instance(const Instance& inst, const ClusterOutput& clusters);

// Restriction of a fractional point to the filtered instance's clients.
FracSolution restrict_frac(const FracSolution& frac, const ClusterOutput& clusters);

// Lifts a solution on the filtered instance back to the original one. The
// certified route sends every child to its center's facility; the returned
// solution uses the nearest open facility per client, which is never worse in
// either cost or per-client distance (both are checked).
struct TranslateResult {
  IntegralSolution sol;           // nearest-open assignment
  std::vector<int> center_route;  // certified per-client assignment
  Rat center_route_cost;
};

TranslateResult translate_back(const Instance& inst, const ClusterOutput& clusters,
                               const IntegralSolution& reduced_sol, Ledger* ledger);

}  // namespace pmm
