#pragma once

#include <vector>

#include "pmm/instance.hpp"
#include "pmm/ledger.hpp"
#include "pmm/lp.hpp"
#include "pmm/solution.hpp"

namespace pmm {

// Per-center facility structure on the filtered instance (clients = centers):
//   F[t]      facilities whose nearest center is t (ties: lower center slot)
//   Fprime[t] members of F[t] within lambda(t)  (== all facilities that close)
//   gamma[t]  distance to the nearest foreign facility (+inf when F[t] = all)
//   G[t]      members of F[t] within gamma[t]
//   rho[t]    smallest radius at which y-mass around t reaches 1
//   B[t]      all facilities within rho[t]
//   small[t]  rho[t] <= gamma[t] and B[t] nested in G[t] (the strong regime
//             whose ball-equality row enters the polytope below)
struct StageTwoSets {
  std::vector<Mask> F, Fprime, G, B;
  std::vector<RatOrInf> gamma;
  std::vector<Rat> rho;
  std::vector<bool> small;
  std::vector<int> owner;  // facility -> center slot
};

// Builds the sets and certifies their structure (disjoint ownership, nesting,
// gamma > lambda, rho within the center radius, half coverage of Fprime).
// lambda is aligned with the reduced instance's clients.
StageTwoSets build_sets(const Instance& red, const FracSolution& frac,
                        const std::vector<Rat>& lambda, Ledger& ledger);

// Seed point for the polytope: y'_i = x_{i,owner(i)} on G[owner(i)], else 0.
// Certifies membership in every polytope row and y' <= y.
std::vector<Rat> build_yprime(const Instance& red, const FracSolution& frac,
                              const StageTwoSets& sets, Ledger& ledger);

// The surrogate objective: T(v) = sum_i f_i v_i +
//   sum_t a'_t (2 sum_{i in G[t]} d(i,t) v_i + 4 gamma_t (1 - v(G[t])))
// with the gamma term emitted only for centers outside the small regime
// (inside it the ball-equality row pins v(G[t]) = 1, so the term vanishes).
// Direct per-definition evaluation; demands of red are the filtered weights.
Rat eval_T(const Instance& red, const StageTwoSets& sets, const std::vector<Rat>& v);

// Outcome of the half-integral stage.
struct HalfIntState {
  std::vector<Rat> yprime, yhat;
  Rat T_yprime, T_yhat;
  std::vector<int> i1, i2;    // per center: primary / secondary facility
  std::vector<int> sigma;     // per center: center slot (itself when G-mass 1)
  std::vector<std::vector<std::pair<int, Rat>>> xhat;  // per center assignment
  std::vector<Rat> conn_half;  // per center: sum_i d(i,t) xhat_i
  std::vector<Rat> chat;       // per center: half-integral connection estimate
};

// Minimizes T over the polytope
//   { v >= 0 : matroid rank rows, v(Fprime) >= 1/2, v(G) <= 1,
//     v(B) = 1 on the small regime }
// whose vertices are half-integral (two laminar row families). Certifies
// half-integrality, vertex-ness, row laminarity, and T(yhat) <= T(yprime).
HalfIntState solve_q(const Instance& red, const FracSolution& frac, const StageTwoSets& sets,
                     Ledger& ledger, int enum_cap = 22);

// Derives (i1, i2, sigma, xhat, chat) from yhat and certifies the supporting
// claims (primary inside Fprime, sigma within 2 gamma, the small regime's
// G-mass pinned to 1, secondary distance bounds).
void derive_half_solution(const Instance& red, const StageTwoSets& sets, HalfIntState& half,
                          Ledger& ledger);

// Opening plus connection cost of (xhat, yhat) on the filtered instance.
Rat half_solution_cost(const Instance& red, const HalfIntState& half);

}  // namespace pmm
