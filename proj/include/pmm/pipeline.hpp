#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmm/filter.hpp"
#include "pmm/instance.hpp"
#include "pmm/ledger.hpp"
#include "pmm/relaxation.hpp"
#include "pmm/solution.hpp"
#include "pmm/stage_three.hpp"
#include "pmm/stage_two.hpp"

namespace pmm {

// Proven per-mode factors. Radius factors multiply the radius r_k of the
// worst child client k of a center; cost factors multiply the fractional
// optimum. Custom tables carry no proven factors (has_factor_rows = false).
struct ModeConstants {
  bool has_factor_rows = false;
  int reduced_cost = 0;  // reduced fractional cost <= this * fractional cost
  int child = 0;         // d(center, child) <= this * r_k
  int primary = 0;       // d(primary, center) <= this * r_k
  int rho = 0;           // rho(center) <= this * r_k
  int small_sec = 0;     // small regime: d(secondary, center) <= this * r_k
  int large_sec = 0;     // large regime: d(secondary, center) <= this * r_k
  int center = 0;        // d(final open, center) <= this * r_k
  int end = 0;           // d(k, S) <= this * r_k
  int cost = 0;          // final cost <= this * fractional cost
};

ModeConstants mode_constants(Mode mode);

struct PipelineOptions {
  Mode mode = Mode::General21;
  int enum_cap = 22;
  // Required for Mode::Custom; must pass the compatibility check and give
  // every picked center lambda >= min(radius, 2 cbar) so the half-coverage
  // row of the next stage is provable.
  const PhiLambda* custom_tables = nullptr;
  // Throw InternalError naming the first failing ledger row (the default).
  // Batch callers turn this off to collect failures instead.
  bool throw_on_ledger_failure = true;
};

// Everything a run produces, including the intermediate state (instances at
// desk scale make the copies cheap and the dumps/tests need them).
struct RunReport {
  Mode mode = Mode::General21;
  Rat lp_value;
  Rat reduced_frac_cost;   // fractional cost restricted to centers
  Rat t_yprime, t_yhat;    // surrogate values around the half-integral stage
  Rat half_cost;           // cost of the half-integral solution
  Rat h_yhat_prime, h_ztilde;
  Rat reduced_int_cost;    // integral cost on the filtered instance
  Rat final_cost;
  std::optional<Rat> cost_ratio;  // final / lp, absent when lp_value = 0
  DilationReport dil;
  IntegralSolution sol;  // on the original instance
  Ledger ledger;

  RelaxationResult relax;
  PhiLambda tables;
  ClusterOutput clusters;
  Instance reduced;
  StageTwoSets sets;
  HalfIntState half;
  CenterClustering clustering;
  IntegralState integral;
  IntegralSolution reduced_sol;
  std::vector<int> center_route;

  std::vector<std::pair<std::string, double>> stage_ms;  // wall time per stage
};

// The full rounding pipeline: relaxation, filtering, half-integral stage,
// integral stage, translation back, plus every certified inequality. Throws
// InfeasibleError when the relaxation is infeasible and (by default)
// InternalError when a ledger row fails.
RunReport run_pipeline(const Instance& inst, const PipelineOptions& opts = {});

}  // namespace pmm
