#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmm/matroid.hpp"
#include "pmm/rational.hpp"

namespace pmm {

enum class Rel { Le, Ge, Eq };

struct LinRow {
  std::vector<std::pair<int, Rat>> coef;  // (variable, coefficient), unique vars
  Rel rel = Rel::Le;
  Rat rhs;
};

// Minimization LP over variables x_i >= 0 with optional finite upper bounds.
struct LinearProgram {
  std::vector<std::string> names;
  std::vector<Rat> objective;
  std::vector<std::optional<Rat>> upper;
  std::vector<LinRow> rows;

  int nvars() const { return static_cast<int>(objective.size()); }
  int add_var(std::string name, Rat obj, std::optional<Rat> ub);
  void add_row(LinRow row) { rows.push_back(std::move(row)); }
  void add_row(std::vector<std::pair<int, Rat>> coef, Rel rel, Rat rhs) {
    rows.push_back({std::move(coef), rel, std::move(rhs)});
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rat> x;  // structural variable values, only for Optimal
  Rat value;
  bool vertex_checked = false;
  bool is_vertex = false;
  int pivots = 0;
  int cuts_added = 0;  // rank rows added by solve_over_matroid
};

struct SolveOptions {
  // Certify the returned point post-hoc: exact rank of the tight-constraint
  // matrix equals the variable count. Cubic in size, so callers solving large
  // models repeatedly may turn it off.
  bool certify_vertex = true;
};

// Exact two-phase primal simplex with Bland's rule on a dense rational
// tableau. Deterministic; always returns a basic solution.
LpResult solve(const LinearProgram& lp, const SolveOptions& opts = {});

// Ties LP variables to matroid ground elements: vars[e] is the LP variable
// carrying element e.
struct MatroidEmbedding {
  const MatroidSpec* spec;
  std::vector<int> vars;
};

// Solves lp subject to every embedded matroid polytope. Classes with explicit
// row descriptions get their rows added up front; the rest are enforced by a
// cutting-plane loop around separate(). Unit rank bounds always tighten the
// variable upper bounds (rank-0 elements are pinned to 0). On return the
// point passes a final separation sweep for every embedding.
LpResult solve_over_matroid(LinearProgram lp, const std::vector<MatroidEmbedding>& embeddings,
                            const SolveOptions& opts = {}, int enum_cap = 22,
                            LinearProgram* final_lp = nullptr);

// Human-readable dump (objective, rows, bounds) with exact coefficients.
std::string dump_lp(const LinearProgram& lp);

// Exact rank of a rational matrix (used by the vertex certificate and tests).
int exact_rank(std::vector<std::vector<Rat>> m);

}  // namespace pmm
