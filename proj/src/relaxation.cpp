#include "pmm/relaxation.hpp"

#include <algorithm>

#include "pmm/errors.hpp"

namespace pmm {

MainLp build_main_lp(const Instance& inst) {
  MainLp out;
  LinearProgram& lp = out.lp;
  out.y_var.resize(inst.nf());
  for (int i = 0; i < inst.nf(); ++i)
    out.y_var[i] = lp.add_var("y_" + inst.facilities[i].id, inst.facilities[i].open_cost, Rat(1));
  out.x_var.resize(inst.nc());
  for (int j = 0; j < inst.nc(); ++j) {
    for (int i = 0; i < inst.nf(); ++i) {
      if (inst.dfc(i, j) > inst.clients[j].radius) continue;  // x_ij fixed to 0, omitted
      int v = lp.add_var("x_" + inst.facilities[i].id + "_" + inst.clients[j].id,
                         inst.clients[j].demand * inst.dfc(i, j), std::nullopt);
      out.x_var[j].emplace_back(i, v);
    }
    if (out.x_var[j].empty())
      throw InfeasibleError("client '" + inst.clients[j].id +
                            "' has no facility within its radius");
    std::vector<std::pair<int, Rat>> cover;
    for (const auto& [i, v] : out.x_var[j]) cover.emplace_back(v, Rat(1));
    lp.add_row(std::move(cover), Rel::Ge, Rat(1));
    for (const auto& [i, v] : out.x_var[j])
      lp.add_row({{v, Rat(1)}, {out.y_var[i], Rat(-1)}}, Rel::Le, Rat(0));
  }
  return out;
}

FracSolution assign_from_y(const Instance& inst, const std::vector<Rat>& y) {
  check_internal(static_cast<int>(y.size()) == inst.nf(), "assign_from_y: bad y length");
  FracSolution frac;
  frac.y = y;
  frac.x.resize(inst.nc());
  frac.cbar.assign(inst.nc(), Rat(0));
  for (int j = 0; j < inst.nc(); ++j) {
    Rat remaining = 1;
    for (int i : inst.facilities_by_distance(j)) {
      if (remaining == 0) break;
      if (inst.dfc(i, j) > inst.clients[j].radius) break;  // sorted; nothing closer remains
      if (y[i] == 0) continue;
      Rat take = rat_min(y[i], remaining);
      frac.x[j].emplace_back(i, take);
      frac.cbar[j] += inst.dfc(i, j) * take;
      remaining -= take;
    }
    if (remaining > 0)
      throw InfeasibleError("client '" + inst.clients[j].id +
                            "' has open mass < 1 within its radius");
    std::sort(frac.x[j].begin(), frac.x[j].end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  return frac;
}

RelaxationResult solve_relaxation(const Instance& inst, int enum_cap, LinearProgram* final_lp) {
  MainLp model = build_main_lp(inst);
  MatroidEmbedding emb{&inst.matroid, model.y_var};
  SolveOptions opts;
  opts.certify_vertex = false;  // the pipeline needs optimality, not vertex structure, here
  LpResult res = solve_over_matroid(std::move(model.lp), {emb}, opts, enum_cap, final_lp);
  if (res.status == LpStatus::Infeasible)
    throw InfeasibleError("LP relaxation is infeasible");
  check_internal(res.status == LpStatus::Optimal, "main LP cannot be unbounded");

  std::vector<Rat> y(inst.nf());
  for (int i = 0; i < inst.nf(); ++i) y[i] = res.x[model.y_var[i]];
  RelaxationResult out{assign_from_y(inst, y), res.value, res.pivots, res.cuts_added};
  // The greedy x is optimal for this y, so the objective must be unchanged.
  check_internal(lp_cost(inst, out.frac) == res.value,
                 "greedy reassignment changed the LP objective");
  return out;
}

}  // namespace pmm
