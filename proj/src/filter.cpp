#include "pmm/filter.hpp"

#include <algorithm>
#include <map>

#include "pmm/errors.hpp"

namespace pmm {

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::General21: return "general21";
    case Mode::General36: return "general36";
    case Mode::Uniform: return "uniform";
    case Mode::Custom: return "custom";
  }
  return "?";
}

Mode mode_from_name(const std::string& name) {
  if (name == "general21") return Mode::General21;
  if (name == "general36") return Mode::General36;
  if (name == "uniform") return Mode::Uniform;
  if (name == "custom") return Mode::Custom;
  throw ValidationError("unknown mode '" + name + "' (general21, general36, uniform, custom)");
}

PhiLambda make_phi_lambda(const Instance& inst, const FracSolution& frac, Mode mode) {
  PhiLambda pl;
  pl.phi.resize(inst.nc());
  pl.lambda.resize(inst.nc());
  if (mode == Mode::Uniform && !inst.uniform_radii())
    throw ValidationError("uniform mode requires all client radii to be equal");
  if (mode == Mode::Custom)
    throw ValidationError("custom mode needs explicit phi/lambda tables");
  for (int j = 0; j < inst.nc(); ++j) {
    const Rat& r = inst.clients[j].radius;
    Rat twice = 2 * frac.cbar[j];
    switch (mode) {
      case Mode::General21:
        pl.phi[j] = pl.lambda[j] = rat_min(r, twice);
        break;
      case Mode::General36:
        pl.phi[j] = frac.cbar[j];
        pl.lambda[j] = twice;
        break;
      case Mode::Uniform:
        pl.phi[j] = frac.cbar[j];
        pl.lambda[j] = rat_min(r, twice);  // L = common radius
        break;
      case Mode::Custom:
        break;
    }
  }
  return pl;
}

void check_compatible_or_throw(const PhiLambda& pl) {
  const int n = static_cast<int>(pl.phi.size());
  check_internal(pl.lambda.size() == pl.phi.size(), "phi/lambda length mismatch");
  std::vector<int> order(n);
  for (int j = 0; j < n; ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (pl.phi[a] != pl.phi[b]) return pl.phi[a] < pl.phi[b];
    return a < b;
  });
  for (int t = 1; t < n; ++t) {
    int a = order[t - 1], b = order[t];
    bool ok = pl.phi[a] == pl.phi[b] ? pl.lambda[a] == pl.lambda[b]
                                     : pl.lambda[a] <= pl.lambda[b];
    if (!ok)
      throw ValidationError("phi/lambda tables are not compatible (clients " + std::to_string(a) +
                            ", " + std::to_string(b) + ")");
  }
  for (int j = 0; j < n; ++j)
    if (pl.phi[j] < 0 || pl.lambda[j] < 0)
      throw ValidationError("phi/lambda tables must be nonnegative");
}

ClusterOutput run_filter(const Instance& inst, const PhiLambda& pl) {
  check_compatible_or_throw(pl);
  const int n = inst.nc();
  ClusterOutput out;
  out.tables = pl;
  out.center_of.assign(n, -1);

  std::vector<int> order(n);
  for (int j = 0; j < n; ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (pl.phi[a] != pl.phi[b]) return pl.phi[a] < pl.phi[b];
    return a < b;
  });

  std::vector<bool> covered(n, false);
  for (int j : order) {
    if (covered[j]) continue;
    int slot = static_cast<int>(out.centers.size());
    out.centers.push_back(j);
    out.children.emplace_back();
    out.new_demand.emplace_back(0);
    for (int k : order) {  // phi order; j itself qualifies at distance 0
      if (covered[k]) continue;
      if (inst.dcc(j, k) <= 2 * pl.lambda[k]) {
        covered[k] = true;
        out.children[slot].push_back(k);
        out.new_demand[slot] += inst.clients[k].demand;
        out.center_of[k] = slot;
      }
    }
  }

  // Structure audit (exact): the child lists partition the clients, every
  // center pair is separated by more than twice either lambda, and the picked
  // center minimizes phi (and lambda) inside its own cluster.
  int covered_count = 0;
  for (int j = 0; j < n; ++j)
    if (out.center_of[j] >= 0) ++covered_count;
  check_internal(covered_count == n, "filter: clients escaped the partition");
  for (size_t s = 0; s < out.centers.size(); ++s) {
    int j = out.centers[s];
    check_internal(out.center_of[j] == static_cast<int>(s), "filter: center not its own child");
    for (int k : out.children[s]) {
      check_internal(pl.phi[j] <= pl.phi[k] && pl.lambda[j] <= pl.lambda[k],
                     "filter: center does not minimize phi/lambda in its cluster");
      check_internal(inst.dcc(j, k) <= 2 * pl.lambda[k], "filter: child beyond coverage radius");
    }
    for (size_t u = s + 1; u < out.centers.size(); ++u) {
      int j2 = out.centers[u];
      check_internal(inst.dcc(j, j2) > 2 * rat_max(pl.lambda[j], pl.lambda[j2]),
                     "filter: centers too close");
    }
  }
  return out;
}

Instance reduce_instance(const Instance& inst, const ClusterOutput& clusters) {
  Instance red;
  red.facilities = inst.facilities;
  red.table = inst.table;
  red.fac_point = inst.fac_point;
  red.matroid = inst.matroid;
  for (size_t s = 0; s < clusters.centers.size(); ++s) {
    int j = clusters.centers[s];
    Client c = inst.clients[j];
    c.demand = clusters.new_demand[s];
    red.clients.push_back(c);
    red.client_point.push_back(inst.client_point[j]);
  }
  return red;
}

FracSolution restrict_frac(const FracSolution& frac, const ClusterOutput& clusters) {
  FracSolution out;
  out.y = frac.y;
  for (int j : clusters.centers) {
    out.x.push_back(frac.x[j]);
    out.cbar.push_back(frac.cbar[j]);
  }
  return out;
}

TranslateResult translate_back(const Instance& inst, const ClusterOutput& clusters,
                               const IntegralSolution& reduced_sol, Ledger* ledger) {
  const int n = inst.nc();
  TranslateResult out;
  // Certified route: every child inherits its center's facility.
  out.center_route.assign(n, -1);
  for (size_t s = 0; s < clusters.centers.size(); ++s)
    for (int k : clusters.children[s]) out.center_route[k] = reduced_sol.assign[s];
  for (int j = 0; j < n; ++j)
    check_internal(out.center_route[j] >= 0, "translate_back: missing center");

  out.sol.open = reduced_sol.open;
  out.sol.assign.resize(n);
  WorstPair dist_cmp;
  for (int j = 0; j < n; ++j) {
    int best = -1;
    for (int i : out.sol.open)
      if (best < 0 || inst.dfc(i, j) < inst.dfc(best, j)) best = i;
    check_internal(best >= 0, "translate_back: empty open set");
    out.sol.assign[j] = best;
    dist_cmp.update(inst.dfc(best, j), inst.dfc(out.center_route[j], j),
                    "client " + inst.clients[j].id);
  }
  out.sol.cost = solution_cost(inst, out.sol.open, out.sol.assign);
  out.center_route_cost = solution_cost(inst, out.sol.open, out.center_route);
  if (ledger) {
    ledger->require_worst_le("translate/nearest-open-distance-le-center-route", dist_cmp);
    ledger->require_le("translate/nearest-open-cost-le-center-route", out.sol.cost,
                       out.center_route_cost);
  }
  return out;
}

}  // namespace pmm
