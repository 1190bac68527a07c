#include "pmm/stage_two.hpp"

#include <algorithm>

#include "pmm/errors.hpp"

namespace pmm {

namespace {

std::string cid(const Instance& red, int t) { return red.clients[t].id; }
std::string fid(const Instance& red, int i) { return red.facilities[i].id; }

}  // namespace

StageTwoSets build_sets(const Instance& red, const FracSolution& frac,
                        const std::vector<Rat>& lambda, Ledger& ledger) {
  const int nf = red.nf(), nt = red.nc();
  check_internal(static_cast<int>(lambda.size()) == nt, "build_sets: lambda length mismatch");
  StageTwoSets s;
  s.F.assign(nt, 0);
  s.Fprime.assign(nt, 0);
  s.G.assign(nt, 0);
  s.B.assign(nt, 0);
  s.gamma.resize(nt);
  s.rho.resize(nt);
  s.small.assign(nt, false);
  s.owner.assign(nf, -1);

  // Ownership: nearest center, ties to the earlier center slot (slots keep
  // the original client order through the filter).
  for (int i = 0; i < nf; ++i) {
    int best = 0;
    for (int t = 1; t < nt; ++t)
      if (red.dfc(i, t) < red.dfc(i, best)) best = t;
    s.owner[i] = best;
    s.F[best] |= mask_bit(i);
  }

  for (int t = 0; t < nt; ++t) {
    for (Mask rest = s.F[t]; rest; rest &= rest - 1) {
      int i = __builtin_ctz(rest);
      if (red.dfc(i, t) <= lambda[t]) s.Fprime[t] |= mask_bit(i);
    }
    RatOrInf gamma;  // +inf when F[t] covers every facility
    for (int i = 0; i < nf; ++i) {
      if (mask_has(s.F[t], i)) continue;
      if (!gamma || red.dfc(i, t) < *gamma) gamma = red.dfc(i, t);
    }
    s.gamma[t] = gamma;
    for (Mask rest = s.F[t]; rest; rest &= rest - 1) {
      int i = __builtin_ctz(rest);
      if (le_inf(red.dfc(i, t), gamma)) s.G[t] |= mask_bit(i);
    }
    // rho: walk facilities nearest-first until the accumulated y-mass hits 1
    Rat mass = 0;
    bool reached = false;
    for (int i : red.facilities_by_distance(t)) {
      mass += frac.y[i];
      if (mass >= 1) {
        s.rho[t] = red.dfc(i, t);
        reached = true;
        break;
      }
    }
    check_internal(reached, "build_sets: total y-mass below 1");
    for (int i = 0; i < nf; ++i)
      if (red.dfc(i, t) <= s.rho[t]) s.B[t] |= mask_bit(i);
    // Small regime: mass-1 ball within gamma *and* fully inside G[t]. A
    // foreign facility at distance exactly rho = gamma would let the ball
    // escape G[t]; such centers take the (weaker, still certified)
    // large-regime route instead.
    s.small[t] = le_inf(s.rho[t], s.gamma[t]) && (s.B[t] & ~s.G[t]) == 0;
  }

  // Structure ledger.
  {
    Mask seen = 0;
    bool disjoint = true;
    for (int t = 0; t < nt; ++t) {
      if (s.F[t] & seen) disjoint = false;
      seen |= s.F[t];
    }
    ledger.require_true("stage2/ownership-partition", disjoint && mask_size(seen) == nf);
  }
  {
    // Every facility within lambda(t) of center t belongs to F[t]: centers are
    // separated by more than twice either lambda, so the ball cannot be owned
    // elsewhere.
    bool ok = true;
    std::string witness;
    for (int t = 0; t < nt && ok; ++t)
      for (int i = 0; i < nf && ok; ++i)
        if (red.dfc(i, t) <= lambda[t] && s.owner[i] != t) {
          ok = false;
          witness = "facility " + fid(red, i) + " near center " + cid(red, t);
        }
    ledger.require_true("stage2/lambda-ball-owned", ok, witness);
  }
  {
    WorstPair lambda_gamma;
    bool nested = true;
    for (int t = 0; t < nt; ++t) {
      if (s.gamma[t]) lambda_gamma.update(lambda[t], *s.gamma[t], "center " + cid(red, t));
      if ((s.Fprime[t] & ~s.G[t]) || (s.G[t] & ~s.F[t])) nested = false;
    }
    ledger.require_worst_lt("stage2/lambda-lt-gamma", lambda_gamma);
    ledger.require_true("stage2/fprime-in-g-in-f", nested);
  }
  {
    WorstPair rho_r;
    for (int t = 0; t < nt; ++t)
      rho_r.update(s.rho[t], red.clients[t].radius, "center " + cid(red, t));
    ledger.require_worst_le("stage2/rho-le-radius", rho_r);
  }
  {
    // x(Fprime) >= 1/2, and exactly 1 once lambda reaches the center radius.
    WorstPair half_mass;
    bool full_ok = true;
    for (int t = 0; t < nt; ++t) {
      Rat mass = 0;
      for (const auto& [i, v] : frac.x[t])
        if (mask_has(s.Fprime[t], i)) mass += v;
      half_mass.update(rat_frac(1, 2), mass, "center " + cid(red, t));
      if (lambda[t] >= red.clients[t].radius && mass != 1) full_ok = false;
    }
    ledger.require_worst_le("stage2/fprime-half-mass", half_mass);
    ledger.require_true("stage2/fprime-full-mass-at-radius", full_ok);
  }
  {
    bool ok = true;
    for (int t = 0; t < nt; ++t)
      if (s.small[t] && (s.B[t] & ~s.G[t])) ok = false;
    ledger.require_true("stage2/small-ball-in-g", ok);
  }
  return s;
}

std::vector<Rat> build_yprime(const Instance& red, const FracSolution& frac,
                              const StageTwoSets& sets, Ledger& ledger) {
  const int nf = red.nf(), nt = red.nc();
  std::vector<Rat> yp(nf, Rat(0));
  for (int i = 0; i < nf; ++i) {
    int t = sets.owner[i];
    if (mask_has(sets.G[t], i)) yp[i] = frac.x_value(t, i);
  }

  bool le_y = true;
  for (int i = 0; i < nf; ++i)
    if (yp[i] > frac.y[i]) le_y = false;
  ledger.require_true("stage2/yprime-le-y", le_y);

  bool rows_ok = true;
  std::string witness;
  for (int t = 0; t < nt; ++t) {
    Rat fp = 0, g = 0, b = 0;
    for (int i = 0; i < nf; ++i) {
      if (mask_has(sets.Fprime[t], i)) fp += yp[i];
      if (mask_has(sets.G[t], i)) g += yp[i];
      if (mask_has(sets.B[t], i)) b += yp[i];
    }
    if (fp < rat_frac(1, 2)) { rows_ok = false; witness = "Fprime row, center " + cid(red, t); }
    if (g > 1) { rows_ok = false; witness = "G row, center " + cid(red, t); }
    if (sets.small[t] && b != 1) { rows_ok = false; witness = "B row, center " + cid(red, t); }
  }
  ledger.require_true("stage2/yprime-center-rows", rows_ok, witness);
  ledger.require_true("stage2/yprime-in-matroid", !separate(red.matroid, yp).has_value());
  return yp;
}

Rat eval_T(const Instance& red, const StageTwoSets& sets, const std::vector<Rat>& v) {
  Rat total = 0;
  for (int i = 0; i < red.nf(); ++i) total += red.facilities[i].open_cost * v[i];
  for (int t = 0; t < red.nc(); ++t) {
    const Rat& a = red.clients[t].demand;
    Rat conn = 0, gmass = 0;
    for (Mask rest = sets.G[t]; rest; rest &= rest - 1) {
      int i = __builtin_ctz(rest);
      conn += red.dfc(i, t) * v[i];
      gmass += v[i];
    }
    total += a * 2 * conn;
    if (!sets.small[t]) {
      check_internal(sets.gamma[t].has_value(), "eval_T: large-regime center with infinite gamma");
      total += a * 4 * *sets.gamma[t] * (1 - gmass);
    }
  }
  return total;
}

HalfIntState solve_q(const Instance& red, const FracSolution& frac, const StageTwoSets& sets,
                     Ledger& ledger, int enum_cap) {
  const int nf = red.nf(), nt = red.nc();
  HalfIntState half;
  half.yprime = build_yprime(red, frac, sets, ledger);
  half.T_yprime = eval_T(red, sets, half.yprime);

  // Row family laminarity: every pair of center rows is nested or disjoint.
  {
    std::vector<Mask> family;
    for (int t = 0; t < nt; ++t) {
      family.push_back(sets.Fprime[t]);
      family.push_back(sets.G[t]);
      if (sets.small[t]) family.push_back(sets.B[t]);
    }
    bool laminar = true;
    for (size_t a = 0; a < family.size() && laminar; ++a)
      for (size_t b = a + 1; b < family.size() && laminar; ++b) {
        Mask inter = family[a] & family[b];
        if (inter != 0 && inter != family[a] && inter != family[b]) laminar = false;
      }
    ledger.require_true("stage2/q-rows-laminar", laminar);
  }

  // Linearize T: T(v) = t_const + sum_i w_i v_i everywhere.
  LinearProgram lp;
  std::vector<int> var(nf);
  Rat t_const = 0;
  {
    std::vector<Rat> w(nf, Rat(0));
    for (int i = 0; i < nf; ++i) w[i] = red.facilities[i].open_cost;
    for (int t = 0; t < nt; ++t) {
      const Rat& a = red.clients[t].demand;
      for (Mask rest = sets.G[t]; rest; rest &= rest - 1) {
        int i = __builtin_ctz(rest);
        w[i] += a * 2 * red.dfc(i, t);
      }
      if (!sets.small[t]) {
        const Rat& gm = *sets.gamma[t];
        t_const += a * 4 * gm;
        for (Mask rest = sets.G[t]; rest; rest &= rest - 1)
          w[__builtin_ctz(rest)] -= a * 4 * gm;
      }
    }
    for (int i = 0; i < nf; ++i) var[i] = lp.add_var("v_" + fid(red, i), w[i], Rat(1));
  }
  auto mask_row = [&](Mask m) {
    std::vector<std::pair<int, Rat>> coef;
    for (Mask rest = m; rest; rest &= rest - 1)
      coef.emplace_back(var[__builtin_ctz(rest)], Rat(1));
    return coef;
  };
  for (int t = 0; t < nt; ++t) {
    lp.add_row(mask_row(sets.Fprime[t]), Rel::Ge, rat_frac(1, 2));
    lp.add_row(mask_row(sets.G[t]), Rel::Le, Rat(1));
    if (sets.small[t]) lp.add_row(mask_row(sets.B[t]), Rel::Eq, Rat(1));
  }

  MatroidEmbedding emb{&red.matroid, var};
  LpResult res = solve_over_matroid(std::move(lp), {emb}, SolveOptions{true}, enum_cap);
  check_internal(res.status == LpStatus::Optimal,
                 "half-integral stage LP must be feasible and bounded");
  ledger.require_true("stage2/yhat-vertex", res.vertex_checked && res.is_vertex);

  half.yhat.resize(nf);
  bool half_integral = true;
  for (int i = 0; i < nf; ++i) {
    half.yhat[i] = res.x[var[i]];
    if (!rat_is_half_int(half.yhat[i])) half_integral = false;
  }
  ledger.require_true("stage2/yhat-half-integral", half_integral);
  half.T_yhat = eval_T(red, sets, half.yhat);
  ledger.require_eq("stage2/yhat-objective-consistent", half.T_yhat, res.value + t_const);
  ledger.require_le("stage2/T-yhat-le-T-yprime", half.T_yhat, half.T_yprime);
  return half;
}

void derive_half_solution(const Instance& red, const StageTwoSets& sets, HalfIntState& half,
                          Ledger& ledger) {
  const int nt = red.nc();
  const std::vector<Rat>& y = half.yhat;
  half.i1.assign(nt, -1);
  half.i2.assign(nt, -1);
  half.sigma.assign(nt, -1);
  half.xhat.assign(nt, {});
  half.conn_half.assign(nt, Rat(0));
  half.chat.assign(nt, Rat(0));

  // Positive facilities by (distance to t, inside-G[t] first, index). The
  // in-G preference only matters on exact distance ties; it keeps the
  // secondary of a G-mass-1 center inside G[t], which the overlap-pattern
  // audit of the next stage relies on.
  auto sorted_positives = [&](int t) {
    std::vector<int> out;
    for (int i = 0; i < red.nf(); ++i)
      if (y[i] > 0) out.push_back(i);
    std::sort(out.begin(), out.end(), [&](int a, int b) {
      if (red.dfc(a, t) != red.dfc(b, t)) return red.dfc(a, t) < red.dfc(b, t);
      bool ag = mask_has(sets.G[t], a), bg = mask_has(sets.G[t], b);
      if (ag != bg) return ag;
      return a < b;
    });
    return out;
  };

  std::vector<std::vector<int>> positives(nt);
  for (int t = 0; t < nt; ++t) {
    positives[t] = sorted_positives(t);
    check_internal(!positives[t].empty(), "derive_half_solution: no open mass");
    half.i1[t] = positives[t][0];
  }

  bool i1_in_fprime = true, g_mass_levels = true, small_full = true;
  WorstPair sigma_2gamma, i2_small, i2_large, gamma_rho, i2_via_sigma;
  for (int t = 0; t < nt; ++t) {
    const int i1 = half.i1[t];
    if (!mask_has(sets.Fprime[t], i1)) i1_in_fprime = false;

    Rat gmass = 0;
    for (Mask rest = sets.G[t]; rest; rest &= rest - 1) gmass += y[__builtin_ctz(rest)];
    if (gmass != 1 && gmass != rat_frac(1, 2)) g_mass_levels = false;
    if (sets.small[t]) {
      Rat bmass = 0;
      for (Mask rest = sets.B[t]; rest; rest &= rest - 1) bmass += y[__builtin_ctz(rest)];
      if (gmass != 1 || bmass != 1) small_full = false;
    }

    int sigma = t;
    if (gmass != 1) {
      check_internal(nt >= 2, "derive_half_solution: lone center with partial G-mass");
      sigma = -1;
      for (int u = 0; u < nt; ++u) {
        if (u == t) continue;
        if (sigma < 0 || red.dcc(t, u) < red.dcc(t, sigma)) sigma = u;
      }
      check_internal(sets.gamma[t].has_value(),
                     "derive_half_solution: partial G-mass with infinite gamma");
      sigma_2gamma.update(red.dcc(t, sigma), 2 * *sets.gamma[t], "center " + cid(red, t));
    }
    half.sigma[t] = sigma;

    int i2;
    if (y[i1] == 1) {
      i2 = i1;  // fully open primary, no secondary needed
    } else if (gmass == 1) {
      check_internal(positives[t].size() >= 2, "derive_half_solution: missing second opening");
      i2 = positives[t][1];
    } else {
      check_internal(y[i1] == rat_frac(1, 2), "derive_half_solution: primary mass not half");
      i2 = half.i1[sigma];  // the neighbour center's primary
    }
    half.i2[t] = i2;

    half.xhat[t].emplace_back(i1, y[i1]);
    if (y[i1] < 1) half.xhat[t].emplace_back(i2, 1 - y[i1]);
    for (const auto& [i, v] : half.xhat[t]) half.conn_half[t] += red.dfc(i, t) * v;

    Rat d_sigma = sigma == t ? Rat(0) : red.dcc(t, sigma);
    Rat d_i2_sigma = sigma == t ? red.dfc(i2, t) : red.dfc(i2, sigma);
    half.chat[t] = (red.dfc(i1, t) + d_sigma + d_i2_sigma) / 2;

    if (sets.small[t]) {
      i2_small.update(red.dfc(i2, t), sets.rho[t], "center " + cid(red, t));
    } else {
      const Rat& gm = *sets.gamma[t];  // the large regime always has finite gamma
      i2_large.update(red.dfc(i2, t), 3 * gm, "center " + cid(red, t));
      gamma_rho.update(gm, sets.rho[t], "center " + cid(red, t));
      if (sigma != t)
        i2_via_sigma.update(red.dfc(i2, t), red.dcc(t, sigma) + red.dfc(half.i1[sigma], sigma),
                            "center " + cid(red, t));
    }
  }
  ledger.require_true("stage2/i1-in-fprime", i1_in_fprime);
  ledger.require_true("stage2/g-mass-half-or-one", g_mass_levels);
  ledger.require_true("stage2/small-g-and-b-mass-one", small_full);
  ledger.require_worst_le("stage2/sigma-within-2gamma", sigma_2gamma);
  ledger.require_worst_le("stage2/i2-small-within-rho", i2_small);
  ledger.require_worst_le("stage2/i2-large-within-3gamma", i2_large);
  ledger.require_worst_le("stage2/gamma-le-rho-on-large", gamma_rho);
  ledger.require_worst_le("stage2/i2-large-via-sigma-primary", i2_via_sigma);
}

Rat half_solution_cost(const Instance& red, const HalfIntState& half) {
  Rat total = 0;
  for (int i = 0; i < red.nf(); ++i) total += red.facilities[i].open_cost * half.yhat[i];
  for (int t = 0; t < red.nc(); ++t) total += red.clients[t].demand * half.conn_half[t];
  return total;
}

}  // namespace pmm
