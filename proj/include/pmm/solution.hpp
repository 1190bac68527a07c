#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmm/instance.hpp"
#include "pmm/ledger.hpp"
#include "pmm/rational.hpp"

namespace pmm {

// Fractional LP point over an instance: y per facility, x per client as a
// sparse (facility, value) list sorted by facility index, plus the cached
// per-client connection cost cbar_j = sum_i d(i,j) x_ij.
struct FracSolution {
  std::vector<Rat> y;
  std::vector<std::vector<std::pair<int, Rat>>> x;
  std::vector<Rat> cbar;

  Rat x_mass(int j) const;       // sum_i x_ij
  Rat x_value(int j, int i) const;
};

// LP objective of a fractional point: sum_i f_i y_i + sum_j a_j cbar_j.
Rat lp_cost(const Instance& inst, const FracSolution& frac);
// Same restricted to a client subset with overridden demands (used for the
// filtered instance cost with reweighted demands).
Rat lp_cost_restricted(const Instance& inst, const FracSolution& frac,
                       const std::vector<int>& clients, const std::vector<Rat>& demands);

// Feasibility audit of a fractional point for the LP relaxation: coverage,
// x <= y, no mass beyond client radii, bounds, and y inside the matroid
// polytope (via exact separation). Returns problems; empty = feasible.
std::vector<std::string> check_frac_feasible(const Instance& inst, const FracSolution& frac,
                                             int enum_cap = 22);

struct IntegralSolution {
  std::vector<int> open;    // facility indices, ascending
  std::vector<int> assign;  // per client: an open facility index
  Rat cost;
};

Rat solution_cost(const Instance& inst, const std::vector<int>& open,
                  const std::vector<int>& assign);

// Per-client dilation d(j, assign(j)) / r_j; nullopt for r_j = 0 clients,
// which are instead covered by the zero_radius_served_at_zero flag.
struct DilationReport {
  std::vector<std::optional<Rat>> per_client;
  std::optional<Rat> max_dilation;  // over clients with r_j > 0
  bool zero_radius_served_at_zero = true;
};

DilationReport dilation(const Instance& inst, const std::vector<int>& assign);

// Solution file round trip.
std::string solution_to_json_text(const Instance& inst, const IntegralSolution& sol,
                                  const std::string& mode, const Ledger& ledger,
                                  bool decimal = false);

struct ParsedSolution {
  std::vector<std::string> open_ids;
  std::vector<std::pair<std::string, std::string>> assign_ids;  // client -> facility
  Rat cost;
  std::optional<Rat> max_dilation;
  bool zero_radius_served_at_zero = true;
  bool all_ledger_rows_hold = true;
};

ParsedSolution solution_from_json_text(const std::string& text);

// Recomputes everything the solution file claims; returns mismatch list.
std::vector<std::string> verify_solution(const Instance& inst, const ParsedSolution& sol);

}  // namespace pmm
