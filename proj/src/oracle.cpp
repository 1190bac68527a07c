#include "pmm/oracle.hpp"

#include <string>
#include <utility>

#include "pmm/errors.hpp"

namespace pmm {

namespace {

void check_cap(int nf, int cap, const char* what) {
  if (nf > cap)
    throw ValidationError(std::string(what) + " enumeration supports at most " +
                          std::to_string(cap) + " facilities, instance has " +
                          std::to_string(nf));
}

}  // namespace

ExactOpt exact_opt(const Instance& inst, int cap) {
  const int nf = inst.nf(), nc = inst.nc();
  check_cap(nf, cap, "exact-optimum");
  RankProfile prof(inst.matroid);

  std::vector<Mask> allowed(nc, 0);
  for (int j = 0; j < nc; ++j)
    for (int i = 0; i < nf; ++i)
      if (inst.dfc(i, j) <= inst.clients[j].radius) allowed[j] |= mask_bit(i);

  ExactOpt out;
  std::vector<int> assign(nc);
  const Mask full = (Mask{1} << nf) - 1;
  for (Mask m = 0;; ++m) {
    bool serves = true;
    for (int j = 0; j < nc && serves; ++j)
      if ((m & allowed[j]) == 0) serves = false;
    if (serves && prof.is_independent(m)) {
      Rat cost = 0;
      for (Mask rest = m; rest; rest &= rest - 1)
        cost += inst.facilities[__builtin_ctz(rest)].open_cost;
      for (int j = 0; j < nc; ++j)
        for (int i : inst.facilities_by_distance(j))
          if (mask_has(m, i)) {
            assign[j] = i;
            cost += inst.clients[j].demand * inst.dfc(i, j);
            break;
          }
      if (!out.feasible || cost < out.opt) {
        out.feasible = true;
        out.opt = std::move(cost);
        out.best_set = m;
        out.best_assign = assign;
      }
    }
    if (m == full) break;
  }
  return out;
}

Rat enumerate_q_optimum(const Instance& red, const StageTwoSets& sets, int cap) {
  const int nf = red.nf(), nt = red.nc();
  check_cap(nf, cap, "half-integral-grid");
  const PolytopeRows pr = matroid_polytope_rows(red.matroid);
  RankProfile prof(red.matroid);

  // Row system over grid points: lower rows mass >= lo, upper rows mass <= hi.
  std::vector<std::pair<Mask, Rat>> lower, upper;
  for (int t = 0; t < nt; ++t) {
    lower.emplace_back(sets.Fprime[t], rat_frac(1, 2));
    upper.emplace_back(sets.G[t], Rat(1));
    if (sets.small[t]) {
      lower.emplace_back(sets.B[t], Rat(1));
      upper.emplace_back(sets.B[t], Rat(1));
    }
  }
  for (const MatroidRow& row : pr.rows) upper.emplace_back(row.set, Rat(row.cap));

  std::vector<Rat> umax(nf);
  for (int i = 0; i < nf; ++i) umax[i] = Rat(prof.rank(mask_bit(i)) > 0 ? 1 : 0);

  // Linearization of T, used only for pruning; leaf values go through eval_T.
  Rat t_const = 0;
  std::vector<Rat> w(nf);
  for (int i = 0; i < nf; ++i) w[i] = red.facilities[i].open_cost;
  for (int t = 0; t < nt; ++t) {
    const Rat& a = red.clients[t].demand;
    for (Mask rest = sets.G[t]; rest; rest &= rest - 1) {
      int i = __builtin_ctz(rest);
      w[i] += a * 2 * red.dfc(i, t);
    }
    if (!sets.small[t]) {
      check_internal(sets.gamma[t].has_value(), "grid enumeration: large regime needs finite gamma");
      const Rat& gm = *sets.gamma[t];
      t_const += a * 4 * gm;
      for (Mask rest = sets.G[t]; rest; rest &= rest - 1) w[__builtin_ctz(rest)] -= a * 4 * gm;
    }
  }
  std::vector<Rat> negpot(nf + 1, Rat(0));
  for (int i = nf - 1; i >= 0; --i) {
    Rat drop = w[i] * umax[i];
    negpot[i] = negpot[i + 1] + (drop < 0 ? drop : Rat(0));
  }
  // Per lower row: how much mass the still-undecided facilities can add.
  std::vector<std::vector<Rat>> pot(lower.size(), std::vector<Rat>(nf + 1, Rat(0)));
  for (size_t r = 0; r < lower.size(); ++r)
    for (int i = nf - 1; i >= 0; --i)
      pot[r][i] = pot[r][i + 1] + (mask_has(lower[r].first, i) ? umax[i] : Rat(0));

  std::optional<Rat> best;
  std::vector<Rat> v(nf, Rat(0));
  std::vector<Rat> lmass(lower.size(), Rat(0)), umass(upper.size(), Rat(0));
  const Rat levels[3] = {Rat(0), rat_frac(1, 2), Rat(1)};

  auto dfs = [&](auto&& self, int i, const Rat& partial) -> void {
    if (best && partial + negpot[i] >= *best) return;
    for (size_t r = 0; r < lower.size(); ++r)
      if (lmass[r] + pot[r][i] < lower[r].second) return;
    if (i == nf) {
      if (!pr.exact && separate(red.matroid, v)) return;
      Rat val = eval_T(red, sets, v);
      if (!best || val < *best) best = std::move(val);
      return;
    }
    for (const Rat& level : levels) {
      if (level > umax[i]) break;
      v[i] = level;
      bool ok = true;
      for (size_t r = 0; r < upper.size(); ++r)
        if (mask_has(upper[r].first, i)) {
          umass[r] += level;
          if (umass[r] > upper[r].second) ok = false;
        }
      for (size_t r = 0; r < lower.size(); ++r)
        if (mask_has(lower[r].first, i)) lmass[r] += level;
      if (ok) self(self, i + 1, partial + w[i] * level);
      for (size_t r = 0; r < upper.size(); ++r)
        if (mask_has(upper[r].first, i)) umass[r] -= level;
      for (size_t r = 0; r < lower.size(); ++r)
        if (mask_has(lower[r].first, i)) lmass[r] -= level;
    }
    v[i] = 0;
  };
  dfs(dfs, 0, t_const);
  check_internal(best.has_value(), "grid enumeration found no feasible point");
  return *best;
}

Rat enumerate_r_optimum(const Instance& red, const HalfIntState& half,
                        const CenterClustering& cl, int cap) {
  const int nf = red.nf();
  check_cap(nf, cap, "independent-set");
  RankProfile prof(red.matroid);

  std::optional<Rat> best;
  std::vector<Rat> z(nf, Rat(0));
  const Mask full = (Mask{1} << nf) - 1;
  for (Mask m = 0;; ++m) {
    bool hits = true;
    for (int u : cl.cprime)
      if (mask_size(m & cl.S[u]) != 1) {
        hits = false;
        break;
      }
    if (hits && prof.is_independent(m)) {
      z.assign(nf, Rat(0));
      for (Mask rest = m; rest; rest &= rest - 1) z[__builtin_ctz(rest)] = 1;
      Rat val = eval_H(red, half, cl, z);
      if (!best || val < *best) best = std::move(val);
    }
    if (m == full) break;
  }
  check_internal(best.has_value(), "no independent set hits every block exactly once");
  return *best;
}

}  // namespace pmm
