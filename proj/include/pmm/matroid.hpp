#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pmm/rational.hpp"

namespace pmm {

// Ground sets are facility index sets represented as bit masks; the artifact
// caps ground sets at 30 elements (desk scale).
using Mask = std::uint32_t;

inline int mask_size(Mask m) { return __builtin_popcount(m); }
inline bool mask_has(Mask m, int e) { return (m >> e) & 1u; }
inline Mask mask_bit(int e) { return Mask{1} << e; }

// Lexicographic order on the sorted element lists (lowest element first).
// Used to break ties deterministically among candidate sets.
bool mask_lex_less(Mask a, Mask b);

enum class MatroidKind { Uniform, Partition, Laminar, Graphic };

// Declarative matroid over the facilities of an instance.
//  - Uniform: rank k.
//  - Partition: disjoint parts covering the ground set, one capacity each.
//  - Laminar: a laminar family of sets with capacities (the full set is not
//    required to be in the family; singleton caps beyond the family are 1).
//  - Graphic: each element is an edge of a graph; independent = forest.
struct MatroidSpec {
  MatroidKind kind = MatroidKind::Uniform;
  int ground_size = 0;
  int k = 0;                                      // uniform
  std::vector<Mask> sets;                         // partition parts / laminar family
  std::vector<int> caps;                          // aligned with sets
  int graph_vertices = 0;                         // graphic
  std::vector<std::pair<int, int>> edges;         // graphic: edges[e] = {u, v}

  // Throws ValidationError when malformed (overlapping parts, non-laminar
  // family, bad edge endpoints, negative caps, ...).
  void validate() const;

  std::string kind_name() const;
};

// Rank oracle. All queries are exact; rank is computed by the matroid greedy
// where no closed form exists.
class RankProfile {
 public:
  explicit RankProfile(const MatroidSpec& spec);

  int rank(Mask s) const;
  bool is_independent(Mask s) const;
  // True when adding e to the independent set s keeps it independent.
  bool can_extend(Mask s, int e) const;
  int ground_size() const { return spec_->ground_size; }

 private:
  const MatroidSpec* spec_;
};

// One rank constraint v(set) <= cap.
struct MatroidRow {
  Mask set;
  int cap;
};

// Explicit inequality description of the independence polytope, when the class
// admits a compact exact one (uniform / partition / laminar). Unit bounds
// v_e <= min(1, rank({e})) are always returned separately in unit_caps.
struct PolytopeRows {
  bool exact = false;           // true: rows + unit caps fully describe P_M
  std::vector<MatroidRow> rows; // empty for graphic
  std::vector<int> unit_caps;   // per element, 0 or 1
};

PolytopeRows matroid_polytope_rows(const MatroidSpec& spec);

struct ViolatedRow {
  Mask set;
  int rank;
  Rat violation;  // v(set) - rank(set) > 0
};

// Exact separation for P_M at point v (v_e >= 0 assumed). Returns the most
// violated rank row, ties broken by smaller set size then lexicographic
// element order; nullopt when v lies in the polytope. For classes without
// explicit rows this enumerates all subsets, so ground sets are capped
// (default 22).
std::optional<ViolatedRow> separate(const MatroidSpec& spec, std::span<const Rat> v,
                                    int enum_cap = 22);

}  // namespace pmm
