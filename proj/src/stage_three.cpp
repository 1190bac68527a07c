#include "pmm/stage_three.hpp"

#include <algorithm>
#include <numeric>

#include "pmm/errors.hpp"
#include "pmm/lp.hpp"

namespace pmm {

namespace {

std::string cid(const Instance& red, int t) { return red.clients[t].id; }

}  // namespace

CenterClustering cluster_centers(const Instance& red, const HalfIntState& half, Ledger& ledger) {
  const int nt = red.nc();
  CenterClustering cl;
  cl.S.resize(nt);
  for (int t = 0; t < nt; ++t) cl.S[t] = mask_bit(half.i1[t]) | mask_bit(half.i2[t]);
  cl.ctr.assign(nt, -1);

  std::vector<int> order(nt);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (half.chat[a] != half.chat[b]) return half.chat[a] < half.chat[b];
    return a < b;
  });
  for (int t : order) {
    if (cl.ctr[t] != -1) continue;
    cl.cprime.push_back(t);
    for (int u : order)
      if (cl.ctr[u] == -1 && (cl.S[t] & cl.S[u]) != 0) cl.ctr[u] = t;
  }

  {
    bool disjoint = true;
    for (size_t a = 0; a < cl.cprime.size(); ++a)
      for (size_t b = a + 1; b < cl.cprime.size(); ++b)
        if (cl.S[cl.cprime[a]] & cl.S[cl.cprime[b]]) disjoint = false;
    ledger.require_true("stage3/blocks-disjoint", disjoint);
  }
  {
    bool intersects = true;
    WorstPair dominate;
    for (int t = 0; t < nt; ++t) {
      if ((cl.S[cl.ctr[t]] & cl.S[t]) == 0) intersects = false;
      dominate.update(half.chat[cl.ctr[t]], half.chat[t], "center " + cid(red, t));
    }
    ledger.require_true("stage3/ctr-block-intersects", intersects);
    ledger.require_worst_le("stage3/ctr-chat-dominates", dominate);
  }
  {
    // Every overlap of two support pairs must match one of three patterns:
    // full overlap (mutual neighbour centers), a shared primary of one side
    // (the other side's neighbour is that center), or a shared secondary
    // (both neighbours equal the third center owning that facility).
    bool cases_ok = true;
    std::string witness;
    for (int t = 0; t < nt && cases_ok; ++t)
      for (int u = t + 1; u < nt && cases_ok; ++u) {
        Mask inter = cl.S[t] & cl.S[u];
        if (!inter) continue;
        bool ok = false;
        if (mask_size(inter) == 2) {
          ok = half.sigma[t] == u && half.sigma[u] == t;
        } else {
          const int e = __builtin_ctz(inter);
          const bool pt = e == half.i1[t], pu = e == half.i1[u];
          if (pt && !pu) {
            ok = half.sigma[u] == t && half.sigma[t] != u;
          } else if (pu && !pt) {
            ok = half.sigma[t] == u && half.sigma[u] != t;
          } else if (!pt && !pu) {
            const int p = half.sigma[t];
            ok = e == half.i2[t] && e == half.i2[u] && half.sigma[u] == p && p != t && p != u &&
                 half.i1[p] == e;
          }  // two centers can never share a primary: ownership is disjoint
        }
        if (!ok) {
          cases_ok = false;
          witness = "centers " + cid(red, t) + ", " + cid(red, u);
        }
      }
    ledger.require_true("stage3/overlap-cases", cases_ok, witness);
  }
  return cl;
}

std::vector<Rat> build_yhat_prime(const Instance& red, const HalfIntState& half,
                                  const CenterClustering& cl, Ledger& ledger) {
  std::vector<Rat> yp = half.yhat;
  for (int u : cl.cprime)
    for (const auto& [i, v] : half.xhat[u]) yp[i] = v;

  {
    Mask blocks = 0;
    for (int u : cl.cprime) blocks |= cl.S[u];
    bool ok = true;
    for (int i = 0; i < red.nf(); ++i) {
      if (yp[i] > half.yhat[i]) ok = false;
      if (!mask_has(blocks, i) && yp[i] != half.yhat[i]) ok = false;
    }
    ledger.require_true("stage3/yhat-prime-le-yhat", ok);
  }
  {
    bool ok = true;
    std::string witness;
    for (int u : cl.cprime) {
      Rat mass = 0;
      for (Mask rest = cl.S[u]; rest; rest &= rest - 1) mass += yp[__builtin_ctz(rest)];
      if (mass != 1) {
        ok = false;
        witness = "block of center " + cid(red, u);
      }
    }
    for (int i = 0; i < red.nf(); ++i)
      if (yp[i] < 0 || yp[i] > 1) ok = false;
    if (separate(red.matroid, yp)) {
      ok = false;
      witness = "matroid row violated";
    }
    ledger.require_true("stage3/yhat-prime-in-r", ok, witness);
  }
  return yp;
}

Rat eval_H(const Instance& red, const HalfIntState& half, const CenterClustering& cl,
           const std::vector<Rat>& z) {
  Rat total = 0;
  for (int i = 0; i < red.nf(); ++i) total += red.facilities[i].open_cost * z[i];
  for (int t = 0; t < red.nc(); ++t) {
    const Rat& a = red.clients[t].demand;
    const int u = cl.ctr[t];
    if (mask_has(cl.S[u], half.i1[t])) {
      for (Mask rest = cl.S[u]; rest; rest &= rest - 1) {
        int i = __builtin_ctz(rest);
        total += a * red.dfc(i, t) * z[i];
      }
    } else {
      const int sg = half.sigma[t];
      check_internal(sg != t, "eval_H: primary outside the block forces a neighbour center");
      for (Mask rest = cl.S[u]; rest; rest &= rest - 1) {
        int i = __builtin_ctz(rest);
        total += a * (red.dcc(t, sg) + red.dfc(i, sg)) * z[i];
      }
      total += a * (red.dfc(half.i1[t], t) - red.dcc(t, sg) - red.dfc(half.i1[sg], sg)) *
               z[half.i1[t]];
    }
  }
  return total;
}

IntegralState solve_r(const Instance& red, const HalfIntState& half, const CenterClustering& cl,
                      Ledger& ledger, int enum_cap) {
  const int nf = red.nf();
  IntegralState st;
  st.yhat_prime = build_yhat_prime(red, half, cl, ledger);
  st.H_yhat_prime = eval_H(red, half, cl, st.yhat_prime);

  // Linearize H into per-facility weights (H has no constant term).
  std::vector<Rat> w(nf, Rat(0));
  for (int i = 0; i < nf; ++i) w[i] = red.facilities[i].open_cost;
  for (int t = 0; t < red.nc(); ++t) {
    const Rat& a = red.clients[t].demand;
    const int u = cl.ctr[t];
    if (mask_has(cl.S[u], half.i1[t])) {
      for (Mask rest = cl.S[u]; rest; rest &= rest - 1) {
        int i = __builtin_ctz(rest);
        w[i] += a * red.dfc(i, t);
      }
    } else {
      const int sg = half.sigma[t];
      check_internal(sg != t, "solve_r: primary outside the block forces a neighbour center");
      for (Mask rest = cl.S[u]; rest; rest &= rest - 1) {
        int i = __builtin_ctz(rest);
        w[i] += a * (red.dcc(t, sg) + red.dfc(i, sg));
      }
      w[half.i1[t]] += a * (red.dfc(half.i1[t], t) - red.dcc(t, sg) - red.dfc(half.i1[sg], sg));
    }
  }

  LinearProgram lp;
  std::vector<int> var(nf);
  for (int i = 0; i < nf; ++i)
    var[i] = lp.add_var("z_" + red.facilities[i].id, w[i], Rat(1));
  for (int u : cl.cprime) {
    std::vector<std::pair<int, Rat>> coef;
    for (Mask rest = cl.S[u]; rest; rest &= rest - 1)
      coef.emplace_back(var[__builtin_ctz(rest)], Rat(1));
    lp.add_row(std::move(coef), Rel::Eq, Rat(1));
  }
  MatroidEmbedding emb{&red.matroid, var};
  LpResult res = solve_over_matroid(std::move(lp), {emb}, SolveOptions{true}, enum_cap);
  check_internal(res.status == LpStatus::Optimal,
                 "final-stage LP must be feasible and bounded");
  ledger.require_true("stage3/ztilde-vertex", res.vertex_checked && res.is_vertex);

  st.ztilde.resize(nf);
  bool integral = true;
  Mask open_mask = 0;
  for (int i = 0; i < nf; ++i) {
    st.ztilde[i] = res.x[var[i]];
    if (!rat_is_int(st.ztilde[i])) integral = false;
    if (st.ztilde[i] == 1) open_mask |= mask_bit(i);
  }
  ledger.require_true("stage3/ztilde-integral", integral);
  ledger.require_true("stage3/ztilde-independent",
                      integral && RankProfile(red.matroid).is_independent(open_mask));
  {
    bool ok = true;
    for (int u : cl.cprime) {
      Rat mass = 0;
      for (Mask rest = cl.S[u]; rest; rest &= rest - 1) mass += st.ztilde[__builtin_ctz(rest)];
      if (mass != 1) ok = false;
    }
    ledger.require_true("stage3/ztilde-blocks-hit-once", ok);
  }
  st.H_ztilde = eval_H(red, half, cl, st.ztilde);
  ledger.require_eq("stage3/h-objective-consistent", st.H_ztilde, res.value);
  ledger.require_le("stage3/h-ztilde-le-h-yhat-prime", st.H_ztilde, st.H_yhat_prime);
  ledger.require_le("stage3/h-yhat-prime-le-t-yhat", st.H_yhat_prime, half.T_yhat);
  return st;
}

IntegralSolution extract_integral(const Instance& red, const HalfIntState& half,
                                  const CenterClustering& cl, const IntegralState& integral,
                                  Ledger& ledger) {
  const int nf = red.nf(), nt = red.nc();
  IntegralSolution sol;
  Mask open_mask = 0;
  for (int i = 0; i < nf; ++i)
    if (integral.ztilde[i] == 1) {
      sol.open.push_back(i);
      open_mask |= mask_bit(i);
    }
  auto block_open = [&](int u) {
    Mask m = cl.S[u] & open_mask;
    check_internal(mask_size(m) == 1, "extract_integral: block must hold exactly one open facility");
    return __builtin_ctz(m);
  };
  sol.assign.resize(nt);
  for (int t = 0; t < nt; ++t) {
    if (cl.ctr[t] == t) {
      sol.assign[t] = block_open(t);
    } else if (integral.ztilde[half.i1[t]] == 1) {
      sol.assign[t] = half.i1[t];
    } else {
      sol.assign[t] = block_open(cl.ctr[t]);
    }
  }
  sol.cost = solution_cost(red, sol.open, sol.assign);
  ledger.require_le("stage3/cost-le-h-ztilde", sol.cost, integral.H_ztilde);
  return sol;
}

}  // namespace pmm
