#include "pmm/pipeline.hpp"

#include <chrono>

#include "pmm/errors.hpp"

namespace pmm {

ModeConstants mode_constants(Mode mode) {
  switch (mode) {
    case Mode::General21:
      return {true, 2, 2, 1, 3, 3, 9, 19, 21, 12};
    case Mode::General36:
      return {true, 1, 4, 2, 5, 5, 15, 32, 36, 8};
    case Mode::Uniform:
      return {true, 1, 2, 1, 1, 1, 3, 7, 9, 8};
    case Mode::Custom:
      return {};
  }
  throw InternalError("mode_constants: unknown mode");
}

namespace {

class StageClock {
 public:
  explicit StageClock(std::vector<std::pair<std::string, double>>& out) : out_(out) {}
  void lap(const std::string& name) {
    auto now = std::chrono::steady_clock::now();
    out_.emplace_back(name, std::chrono::duration<double, std::milli>(now - last_).count());
    last_ = now;
  }

 private:
  std::vector<std::pair<std::string, double>>& out_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace

RunReport run_pipeline(const Instance& inst, const PipelineOptions& opts) {
  RunReport rep;
  rep.mode = opts.mode;
  Ledger& led = rep.ledger;
  StageClock clock(rep.stage_ms);

  rep.relax = solve_relaxation(inst, opts.enum_cap);
  const FracSolution& frac = rep.relax.frac;
  rep.lp_value = rep.relax.lp_value;
  clock.lap("relaxation");
  {
    WorstPair cb;
    for (int j = 0; j < inst.nc(); ++j)
      cb.update(frac.cbar[j], inst.clients[j].radius, "client " + inst.clients[j].id);
    led.require_worst_le("lp/cbar-le-radius", cb);
  }

  if (opts.mode == Mode::Custom) {
    if (!opts.custom_tables)
      throw ValidationError("custom mode needs explicit phi/lambda tables");
    if (static_cast<int>(opts.custom_tables->phi.size()) != inst.nc() ||
        static_cast<int>(opts.custom_tables->lambda.size()) != inst.nc())
      throw ValidationError("custom phi/lambda tables must list every client");
    rep.tables = *opts.custom_tables;
  } else {
    rep.tables = make_phi_lambda(inst, frac, opts.mode);
  }
  check_compatible_or_throw(rep.tables);
  rep.clusters = run_filter(inst, rep.tables);
  if (opts.mode == Mode::Custom) {
    // Each center's coverage row in the half-integral stage (mass >= 1/2
    // within lambda) is provable only when lambda reaches min(radius, 2 cbar).
    for (int t : rep.clusters.centers) {
      Rat need = rat_min(inst.clients[t].radius, 2 * frac.cbar[t]);
      if (rep.tables.lambda[t] < need)
        throw ValidationError("custom lambda for client '" + inst.clients[t].id +
                              "' is below min(radius, 2*cbar); half-coverage would be unproven");
    }
  }
  rep.reduced = reduce_instance(inst, rep.clusters);
  FracSolution rfrac = restrict_frac(frac, rep.clusters);
  rep.reduced_frac_cost = lp_cost(rep.reduced, rfrac);
  const ModeConstants mc = mode_constants(opts.mode);
  if (mc.has_factor_rows)
    led.require_le("filter/reduced-cost-factor", rep.reduced_frac_cost,
                   mc.reduced_cost * rep.lp_value);
  clock.lap("filter");

  std::vector<Rat> lambda_of_center;
  for (int t : rep.clusters.centers) lambda_of_center.push_back(rep.tables.lambda[t]);
  rep.sets = build_sets(rep.reduced, rfrac, lambda_of_center, led);
  rep.half = solve_q(rep.reduced, rfrac, rep.sets, led, opts.enum_cap);
  derive_half_solution(rep.reduced, rep.sets, rep.half, led);
  rep.t_yprime = rep.half.T_yprime;
  rep.t_yhat = rep.half.T_yhat;
  rep.half_cost = half_solution_cost(rep.reduced, rep.half);
  led.require_le("stage2/halfcost-le-t-yhat", rep.half_cost, rep.t_yhat);
  led.require_le("stage2/t-yprime-le-4-reduced-cost", rep.t_yprime, 4 * rep.reduced_frac_cost);
  clock.lap("half-integral");

  rep.clustering = cluster_centers(rep.reduced, rep.half, led);
  rep.integral = solve_r(rep.reduced, rep.half, rep.clustering, led, opts.enum_cap);
  rep.h_yhat_prime = rep.integral.H_yhat_prime;
  rep.h_ztilde = rep.integral.H_ztilde;
  rep.reduced_sol = extract_integral(rep.reduced, rep.half, rep.clustering, rep.integral, led);
  rep.reduced_int_cost = rep.reduced_sol.cost;
  clock.lap("integral");

  TranslateResult tr = translate_back(inst, rep.clusters, rep.reduced_sol, &led);
  rep.sol = std::move(tr.sol);
  rep.center_route = std::move(tr.center_route);
  {
    Rat detour = 0;
    for (int k = 0; k < inst.nc(); ++k)
      detour += inst.clients[k].demand * 2 * rep.tables.lambda[k];
    led.require_le("final/route-cost-le-reduced-cost-plus-detour", tr.center_route_cost,
                   rep.reduced_int_cost + detour);
  }
  rep.final_cost = rep.sol.cost;
  if (rep.lp_value != 0) rep.cost_ratio = rep.final_cost / rep.lp_value;
  rep.dil = dilation(inst, rep.sol.assign);

  if (mc.has_factor_rows) {
    led.require_le("final/cost-le-factor-lp", rep.final_cost, mc.cost * rep.lp_value);
    WorstPair child, primary, rho, small_sec, large_sec, center, end;
    const int ns = static_cast<int>(rep.clusters.centers.size());
    for (int s = 0; s < ns; ++s) {
      const int t = rep.clusters.centers[s];
      for (int k : rep.clusters.children[s]) {
        const Rat& rk = inst.clients[k].radius;
        const std::string w = "center " + inst.clients[t].id + ", client " + inst.clients[k].id;
        child.update(inst.dcc(t, k), mc.child * rk, w);
        primary.update(rep.reduced.dfc(rep.half.i1[s], s), mc.primary * rk, w);
        rho.update(rep.sets.rho[s], mc.rho * rk, w);
        if (rep.sets.small[s])
          small_sec.update(rep.reduced.dfc(rep.half.i2[s], s), mc.small_sec * rk, w);
        else
          large_sec.update(rep.reduced.dfc(rep.half.i2[s], s), mc.large_sec * rk, w);
        center.update(rep.reduced.dfc(rep.reduced_sol.assign[s], s), mc.center * rk, w);
        end.update(inst.dfc(rep.sol.assign[k], k), mc.end * rk, w);
      }
    }
    led.require_worst_le("final/child-detour-factor", child);
    led.require_worst_le("final/primary-distance-factor", primary);
    led.require_worst_le("final/rho-factor", rho);
    led.require_worst_le("final/secondary-small-factor", small_sec);
    led.require_worst_le("final/secondary-large-factor", large_sec);
    led.require_worst_le("final/center-distance-factor", center);
    led.require_worst_le("final/dilation-factor", end);
    led.require_true("final/zero-radius-served-at-zero", rep.dil.zero_radius_served_at_zero);
  }
  clock.lap("translate");

  if (opts.throw_on_ledger_failure) led.throw_if_failed();
  return rep;
}

}  // namespace pmm
