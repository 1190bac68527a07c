#include "pmm/lp.hpp"

#include <algorithm>
#include <sstream>

#include "pmm/errors.hpp"

namespace pmm {

int LinearProgram::add_var(std::string name, Rat obj, std::optional<Rat> ub) {
  names.push_back(std::move(name));
  objective.push_back(std::move(obj));
  upper.push_back(std::move(ub));
  return nvars() - 1;
}

namespace {

// Dense simplex tableau: A z = b with z >= 0, minimizing cost . z.
// Columns: structural vars, then slacks, then (phase 1 only) artificials.
struct Tableau {
  int ncols = 0;
  std::vector<std::vector<Rat>> a;  // per row: ncols coefficients
  std::vector<Rat> b;               // per row: rhs, kept >= 0
  std::vector<int> basis;           // per row: basic column
  std::vector<Rat> cost;            // reduced costs, ncols

  int rows() const { return static_cast<int>(a.size()); }

  void pivot(int r, int c, int* pivot_count) {
    ++*pivot_count;
    std::vector<Rat>& pr = a[r];
    const Rat inv = pr[c];
    if (inv != 1) {
      for (Rat& v : pr)
        if (v != 0) v /= inv;
      b[r] /= inv;
      pr[c] = 1;  // guard against drift; exact anyway
    }
    for (int i = 0; i < rows(); ++i) {
      if (i == r) continue;
      const Rat m = a[i][c];
      if (m == 0) continue;
      std::vector<Rat>& ri = a[i];
      for (int j = 0; j < ncols; ++j)
        if (pr[j] != 0) ri[j] -= m * pr[j];
      ri[c] = 0;
      b[i] -= m * b[r];
    }
    const Rat m = cost[c];
    if (m != 0) {
      for (int j = 0; j < ncols; ++j)
        if (pr[j] != 0) cost[j] -= m * pr[j];
      cost[c] = 0;
    }
    basis[r] = c;
  }

  // Installs objective c (padded with zeros) and eliminates basic columns.
  void set_objective(const std::vector<Rat>& c) {
    cost.assign(ncols, Rat(0));
    for (size_t j = 0; j < c.size() && static_cast<int>(j) < ncols; ++j) cost[j] = c[j];
    for (int i = 0; i < rows(); ++i) {
      const Rat m = cost[basis[i]];
      if (m == 0) continue;
      const std::vector<Rat>& ri = a[i];
      for (int j = 0; j < ncols; ++j)
        if (ri[j] != 0) cost[j] -= m * ri[j];
      cost[basis[i]] = 0;
    }
  }

  // Bland's rule. Returns Optimal or Unbounded.
  LpStatus iterate(int* pivot_count) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < ncols; ++j)
        if (cost[j] < 0) {
          enter = j;
          break;
        }
      if (enter < 0) return LpStatus::Optimal;
      int leave = -1;
      Rat best_ratio;
      for (int i = 0; i < rows(); ++i) {
        if (a[i][enter] <= 0) continue;
        Rat ratio = b[i] / a[i][enter];
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter, pivot_count);
    }
  }
};

}  // namespace

LpResult solve(const LinearProgram& lp, const SolveOptions& opts) {
  const int n = lp.nvars();
  LpResult res;

  // Materialize rows: user rows plus one x_i <= u_i row per finite upper bound.
  struct NormRow {
    std::vector<Rat> coef;  // dense over structural vars
    Rel rel;
    Rat rhs;
  };
  std::vector<NormRow> norm;
  norm.reserve(lp.rows.size() + n);
  for (const LinRow& row : lp.rows) {
    NormRow r{std::vector<Rat>(n, Rat(0)), row.rel, row.rhs};
    for (const auto& [v, c] : row.coef) {
      check_internal(v >= 0 && v < n, "lp row references unknown variable");
      r.coef[v] += c;
    }
    norm.push_back(std::move(r));
  }
  for (int i = 0; i < n; ++i)
    if (lp.upper[i]) {
      check_internal(*lp.upper[i] >= 0, "negative upper bound");
      NormRow r{std::vector<Rat>(n, Rat(0)), Rel::Le, *lp.upper[i]};
      r.coef[i] = 1;
      norm.push_back(std::move(r));
    }

  // Sign-normalize (rhs >= 0) and count slacks.
  for (NormRow& r : norm)
    if (r.rhs < 0) {
      for (Rat& c : r.coef) c = -c;
      r.rhs = -r.rhs;
      if (r.rel == Rel::Le)
        r.rel = Rel::Ge;
      else if (r.rel == Rel::Ge)
        r.rel = Rel::Le;
    }

  const int m = static_cast<int>(norm.size());
  int nslack = 0;
  for (const NormRow& r : norm)
    if (r.rel != Rel::Eq) ++nslack;

  Tableau t;
  std::vector<int> artificial_of_row(m, -1);
  int nart = 0;
  for (const NormRow& r : norm)
    if (r.rel != Rel::Le) ++nart;  // Ge and Eq rows need artificials
  t.ncols = n + nslack + nart;
  t.a.assign(m, std::vector<Rat>(t.ncols, Rat(0)));
  t.b.resize(m);
  t.basis.assign(m, -1);
  {
    int next_slack = n, next_art = n + nslack;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) t.a[i][j] = norm[i].coef[j];
      t.b[i] = norm[i].rhs;
      if (norm[i].rel == Rel::Le) {
        t.a[i][next_slack] = 1;
        t.basis[i] = next_slack++;
      } else if (norm[i].rel == Rel::Ge) {
        t.a[i][next_slack] = -1;
        ++next_slack;
        t.a[i][next_art] = 1;
        t.basis[i] = next_art;
        artificial_of_row[i] = next_art++;
      } else {
        t.a[i][next_art] = 1;
        t.basis[i] = next_art;
        artificial_of_row[i] = next_art++;
      }
    }
  }

  // Phase 1: minimize the sum of artificials.
  if (nart > 0) {
    std::vector<Rat> phase1(t.ncols, Rat(0));
    for (int j = n + nslack; j < t.ncols; ++j) phase1[j] = 1;
    t.set_objective(phase1);
    LpStatus st = t.iterate(&res.pivots);
    check_internal(st == LpStatus::Optimal, "phase 1 cannot be unbounded");
    Rat phase1_value = 0;
    for (int i = 0; i < m; ++i)
      if (t.basis[i] >= n + nslack) phase1_value += t.b[i];
    if (phase1_value > 0) {
      res.status = LpStatus::Infeasible;
      return res;
    }
    // Drive leftover (degenerate) artificials out of the basis.
    for (int i = m - 1; i >= 0; --i) {
      if (t.basis[i] < n + nslack) continue;
      int c = -1;
      for (int j = 0; j < n + nslack; ++j)
        if (t.a[i][j] != 0) {
          c = j;
          break;
        }
      if (c >= 0) {
        t.pivot(i, c, &res.pivots);
      } else {
        // Redundant row; remove it.
        t.a.erase(t.a.begin() + i);
        t.b.erase(t.b.begin() + i);
        t.basis.erase(t.basis.begin() + i);
      }
    }
    // Artificials are all nonbasic now; truncate their columns.
    t.ncols = n + nslack;
    for (auto& row : t.a) row.resize(t.ncols);
  }

  // Phase 2.
  t.set_objective(lp.objective);
  LpStatus st = t.iterate(&res.pivots);
  if (st == LpStatus::Unbounded) {
    res.status = LpStatus::Unbounded;
    return res;
  }

  res.status = LpStatus::Optimal;
  res.x.assign(n, Rat(0));
  for (int i = 0; i < t.rows(); ++i)
    if (t.basis[i] < n) res.x[t.basis[i]] = t.b[i];
  res.value = 0;
  for (int j = 0; j < n; ++j) res.value += lp.objective[j] * res.x[j];

  // Exact feasibility audit of the returned point.
  for (int j = 0; j < n; ++j) {
    check_internal(res.x[j] >= 0, "solve: negative variable in result");
    check_internal(!lp.upper[j] || res.x[j] <= *lp.upper[j], "solve: upper bound violated");
  }
  for (const LinRow& row : lp.rows) {
    Rat lhs = 0;
    for (const auto& [v, c] : row.coef) lhs += c * res.x[v];
    bool ok = row.rel == Rel::Le ? lhs <= row.rhs : row.rel == Rel::Ge ? lhs >= row.rhs : lhs == row.rhs;
    check_internal(ok, "solve: returned point violates a row");
  }

  if (opts.certify_vertex) {
    std::vector<std::vector<Rat>> tight;
    for (const LinRow& row : lp.rows) {
      Rat lhs = 0;
      for (const auto& [v, c] : row.coef) lhs += c * res.x[v];
      if (lhs == row.rhs) {
        std::vector<Rat> r(n, Rat(0));
        for (const auto& [v, c] : row.coef) r[v] += c;
        tight.push_back(std::move(r));
      }
    }
    for (int j = 0; j < n; ++j)
      if (res.x[j] == 0 || (lp.upper[j] && res.x[j] == *lp.upper[j])) {
        std::vector<Rat> r(n, Rat(0));
        r[j] = 1;
        tight.push_back(std::move(r));
      }
    res.vertex_checked = true;
    res.is_vertex = exact_rank(std::move(tight)) == n;
  }
  return res;
}

int exact_rank(std::vector<std::vector<Rat>> mat) {
  if (mat.empty()) return 0;
  const int nc = static_cast<int>(mat[0].size());
  int rank = 0;
  for (int col = 0; col < nc && rank < static_cast<int>(mat.size()); ++col) {
    int p = -1;
    for (int i = rank; i < static_cast<int>(mat.size()); ++i)
      if (mat[i][col] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(mat[rank], mat[p]);
    const Rat inv = mat[rank][col];
    for (int j = col; j < nc; ++j)
      if (mat[rank][j] != 0) mat[rank][j] /= inv;
    for (int i = 0; i < static_cast<int>(mat.size()); ++i) {
      if (i == rank || mat[i][col] == 0) continue;
      const Rat f = mat[i][col];
      for (int j = col; j < nc; ++j)
        if (mat[rank][j] != 0) mat[i][j] -= f * mat[rank][j];
    }
    ++rank;
  }
  return rank;
}

LpResult solve_over_matroid(LinearProgram lp, const std::vector<MatroidEmbedding>& embeddings,
                            const SolveOptions& opts, int enum_cap, LinearProgram* final_lp) {
  int cuts = 0;
  for (const MatroidEmbedding& emb : embeddings) {
    check_internal(static_cast<int>(emb.vars.size()) == emb.spec->ground_size,
                   "embedding size mismatch");
    PolytopeRows rows = matroid_polytope_rows(*emb.spec);
    for (int e = 0; e < emb.spec->ground_size; ++e) {
      Rat cap(rows.unit_caps[e]);
      auto& ub = lp.upper[emb.vars[e]];
      if (!ub || *ub > cap) ub = cap;
    }
    if (rows.exact) {
      for (const MatroidRow& r : rows.rows) {
        std::vector<std::pair<int, Rat>> coef;
        for (Mask rest = r.set; rest; rest &= rest - 1)
          coef.emplace_back(emb.vars[__builtin_ctz(rest)], Rat(1));
        lp.add_row(std::move(coef), Rel::Le, Rat(r.cap));
        ++cuts;
      }
    }
  }

  LpResult res;
  for (int round = 0;; ++round) {
    check_internal(round < 100000, "cutting-plane loop failed to terminate");
    res = solve(lp, opts);
    if (res.status != LpStatus::Optimal) break;
    bool violated = false;
    for (const MatroidEmbedding& emb : embeddings) {
      std::vector<Rat> v(emb.spec->ground_size);
      for (int e = 0; e < emb.spec->ground_size; ++e) v[e] = res.x[emb.vars[e]];
      auto row = separate(*emb.spec, v, enum_cap);
      if (!row) continue;
      std::vector<std::pair<int, Rat>> coef;
      for (Mask rest = row->set; rest; rest &= rest - 1)
        coef.emplace_back(emb.vars[__builtin_ctz(rest)], Rat(1));
      lp.add_row(std::move(coef), Rel::Le, Rat(row->rank));
      ++cuts;
      violated = true;
      break;  // one cut per round keeps the added rows deterministic
    }
    if (!violated) break;
  }
  res.cuts_added = cuts;
  if (res.status == LpStatus::Optimal) {
    // final sweep: every embedding must pass exact separation
    for (const MatroidEmbedding& emb : embeddings) {
      std::vector<Rat> v(emb.spec->ground_size);
      for (int e = 0; e < emb.spec->ground_size; ++e) v[e] = res.x[emb.vars[e]];
      check_internal(!separate(*emb.spec, v, enum_cap).has_value(),
                     "point escapes matroid polytope after cutting-plane loop");
    }
  }
  if (final_lp) *final_lp = std::move(lp);
  return res;
}

std::string dump_lp(const LinearProgram& lp) {
  std::ostringstream os;
  auto var = [&](int j) {
    return lp.names[j].empty() ? "x" + std::to_string(j) : lp.names[j];
  };
  os << "minimize\n  ";
  bool first = true;
  for (int j = 0; j < lp.nvars(); ++j) {
    if (lp.objective[j] == 0) continue;
    if (!first) os << " + ";
    os << rat_to_string(lp.objective[j]) << " " << var(j);
    first = false;
  }
  if (first) os << "0";
  os << "\nsubject to\n";
  for (const LinRow& row : lp.rows) {
    os << "  ";
    bool f2 = true;
    for (const auto& [v, c] : row.coef) {
      if (!f2) os << " + ";
      os << rat_to_string(c) << " " << var(v);
      f2 = false;
    }
    if (f2) os << "0";
    os << (row.rel == Rel::Le ? " <= " : row.rel == Rel::Ge ? " >= " : " = ");
    os << rat_to_string(row.rhs) << "\n";
  }
  os << "bounds\n";
  for (int j = 0; j < lp.nvars(); ++j) {
    os << "  0 <= " << var(j);
    if (lp.upper[j]) os << " <= " << rat_to_string(*lp.upper[j]);
    os << "\n";
  }
  return os.str();
}

}  // namespace pmm
