#include "pmm/matroid.hpp"

#include <algorithm>
#include <numeric>

#include "pmm/errors.hpp"

namespace pmm {

bool mask_lex_less(Mask a, Mask b) {
  while (a && b) {
    int ea = __builtin_ctz(a), eb = __builtin_ctz(b);
    if (ea != eb) return ea < eb;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

void MatroidSpec::validate() const {
  if (ground_size < 0 || ground_size > 30)
    throw ValidationError("matroid ground set must have between 0 and 30 elements");
  const Mask full = ground_size == 0 ? 0 : (ground_size == 32 ? ~Mask{0} : (Mask{1} << ground_size) - 1);
  auto check_sets_in_range = [&] {
    for (Mask s : sets)
      if (s & ~full) throw ValidationError("matroid set references an element out of range");
    if (sets.size() != caps.size()) throw ValidationError("matroid sets/caps length mismatch");
    for (int c : caps)
      if (c < 0) throw ValidationError("matroid capacities must be nonnegative");
  };
  switch (kind) {
    case MatroidKind::Uniform:
      if (k < 0) throw ValidationError("uniform matroid needs k >= 0");
      break;
    case MatroidKind::Partition: {
      check_sets_in_range();
      Mask seen = 0;
      for (Mask s : sets) {
        if (s & seen) throw ValidationError("partition matroid parts must be disjoint");
        seen |= s;
      }
      if (seen != full) throw ValidationError("partition matroid parts must cover all facilities");
      break;
    }
    case MatroidKind::Laminar: {
      check_sets_in_range();
      for (size_t a = 0; a < sets.size(); ++a)
        for (size_t b = a + 1; b < sets.size(); ++b) {
          Mask inter = sets[a] & sets[b];
          if (inter != 0 && inter != sets[a] && inter != sets[b])
            throw ValidationError("laminar matroid family has crossing sets");
        }
      break;
    }
    case MatroidKind::Graphic: {
      if (graph_vertices < 0) throw ValidationError("graphic matroid needs vertices >= 0");
      if (static_cast<int>(edges.size()) != ground_size)
        throw ValidationError("graphic matroid needs one edge per facility");
      for (auto [u, w] : edges)
        if (u < 0 || u >= graph_vertices || w < 0 || w >= graph_vertices)
          throw ValidationError("graphic matroid edge endpoint out of range");
      break;
    }
  }
}

std::string MatroidSpec::kind_name() const {
  switch (kind) {
    case MatroidKind::Uniform: return "uniform";
    case MatroidKind::Partition: return "partition";
    case MatroidKind::Laminar: return "laminar";
    case MatroidKind::Graphic: return "graphic";
  }
  return "?";
}

RankProfile::RankProfile(const MatroidSpec& spec) : spec_(&spec) {}

namespace {

// union-find for graphic rank
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

int RankProfile::rank(Mask s) const {
  const MatroidSpec& m = *spec_;
  switch (m.kind) {
    case MatroidKind::Uniform:
      return std::min(mask_size(s), m.k);
    case MatroidKind::Partition: {
      int r = 0;
      for (size_t t = 0; t < m.sets.size(); ++t)
        r += std::min(mask_size(s & m.sets[t]), m.caps[t]);
      return r;
    }
    case MatroidKind::Laminar: {
      // matroid greedy: scan elements in id order, keep those that fit
      Mask kept = 0;
      int r = 0;
      for (Mask rest = s; rest; rest &= rest - 1) {
        int e = __builtin_ctz(rest);
        if (can_extend(kept, e)) {
          kept |= mask_bit(e);
          ++r;
        }
      }
      return r;
    }
    case MatroidKind::Graphic: {
      Dsu dsu(m.graph_vertices);
      int r = 0;
      for (Mask rest = s; rest; rest &= rest - 1) {
        int e = __builtin_ctz(rest);
        auto [u, w] = m.edges[e];
        if (u != w && dsu.unite(u, w)) ++r;
      }
      return r;
    }
  }
  return 0;
}

bool RankProfile::is_independent(Mask s) const { return rank(s) == mask_size(s); }

bool RankProfile::can_extend(Mask s, int e) const {
  const MatroidSpec& m = *spec_;
  switch (m.kind) {
    case MatroidKind::Uniform:
      return mask_size(s) < m.k;
    case MatroidKind::Partition:
      for (size_t t = 0; t < m.sets.size(); ++t)
        if (mask_has(m.sets[t], e) && mask_size(s & m.sets[t]) >= m.caps[t]) return false;
      return true;
    case MatroidKind::Laminar:
      for (size_t t = 0; t < m.sets.size(); ++t)
        if (mask_has(m.sets[t], e) && mask_size(s & m.sets[t]) >= m.caps[t]) return false;
      return true;
    case MatroidKind::Graphic:
      return is_independent(s | mask_bit(e));  // small sets; rebuild is fine
  }
  return false;
}

PolytopeRows matroid_polytope_rows(const MatroidSpec& spec) {
  RankProfile rp(spec);
  PolytopeRows out;
  out.unit_caps.resize(spec.ground_size);
  for (int e = 0; e < spec.ground_size; ++e)
    out.unit_caps[e] = std::min(1, rp.rank(mask_bit(e)));
  switch (spec.kind) {
    case MatroidKind::Uniform: {
      out.exact = true;
      const Mask full = spec.ground_size == 0 ? 0 : (Mask{1} << spec.ground_size) - 1;
      if (spec.ground_size > 0) out.rows.push_back({full, std::min(spec.k, spec.ground_size)});
      break;
    }
    case MatroidKind::Partition:
    case MatroidKind::Laminar: {
      out.exact = true;
      for (size_t t = 0; t < spec.sets.size(); ++t) {
        // skip rows dominated by unit bounds
        if (mask_size(spec.sets[t]) <= 1) continue;
        out.rows.push_back({spec.sets[t], std::min(spec.caps[t], mask_size(spec.sets[t]))});
      }
      break;
    }
    case MatroidKind::Graphic:
      out.exact = false;
      break;
  }
  return out;
}

std::optional<ViolatedRow> separate(const MatroidSpec& spec, std::span<const Rat> v, int enum_cap) {
  check_internal(static_cast<int>(v.size()) == spec.ground_size,
                 "separate: vector length != ground size");
  RankProfile rp(spec);
  std::optional<ViolatedRow> best;
  auto consider = [&](Mask s, int rank) {
    Rat sum = 0;
    for (Mask rest = s; rest; rest &= rest - 1) sum += v[__builtin_ctz(rest)];
    if (sum <= rank) return;
    Rat viol = sum - rank;
    if (!best || viol > best->violation ||
        (viol == best->violation && (mask_size(s) < mask_size(best->set) ||
                                     (mask_size(s) == mask_size(best->set) &&
                                      mask_lex_less(s, best->set)))))
      best = ViolatedRow{s, rank, viol};
  };

  PolytopeRows rows = matroid_polytope_rows(spec);
  if (rows.exact) {
    for (int e = 0; e < spec.ground_size; ++e) consider(mask_bit(e), rows.unit_caps[e]);
    for (const MatroidRow& r : rows.rows) consider(r.set, r.cap);
    return best;
  }
  if (spec.ground_size > enum_cap)
    throw ValidationError("matroid separation by enumeration capped at " +
                          std::to_string(enum_cap) + " elements");
  const Mask full = spec.ground_size == 0 ? 0 : (Mask{1} << spec.ground_size) - 1;
  for (Mask s = 1; full != 0; ++s) {
    consider(s, rp.rank(s));
    if (s == full) break;
  }
  return best;
}

}  // namespace pmm
