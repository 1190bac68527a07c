#pragma once

// Hand-traced fixtures shared by the half-integral and integral stage tests.
// Each builds a small instance plus a fractional point whose entire pipeline
// trace has been worked out by hand in the test expectations.

#include "pmm/instance.hpp"
#include "pmm/solution.hpp"
#include "support/corpus.hpp"

namespace pmmtest {

using pmm::FracSolution;
using pmm::Instance;
using pmm::Rat;

// Three facilities on a line, two well-separated clients; the relaxation is
// uniquely integral (open f1 and f2), both centers land in the small regime,
// and the final support pairs are disjoint singletons.
//   f1 (0,0) cost 2   f2 (6,0) cost 1   f3 (7,0) cost 10
//   t1 (1,0)          t2 (6,1)          radii 10, uniform matroid k=2
inline Instance two_center_instance() {
  return pmm::instance_from_json_text(l1_instance_text(
      {{"f1", "2"}, {"f2", "1"}, {"f3", "10"}},
      {{"t1", "10", "1"}, {"t2", "10", "1"}},
      {{0, 0}, {6, 0}, {7, 0}}, {{1, 0}, {6, 1}}, uniform_matroid_json(2)));
}

// Two facilities, two far-apart clients, a single opening allowed. With the
// fabricated fractional point splitting both clients across both facilities,
// the half-integral polytope collapses to the all-halves point, the centers
// become each other's fallback, and their support pairs coincide.
//   p (0,0) cost 1   q (10,0) cost 2
//   t (1,0)          u (9,0)           radii 20, uniform matroid k=1
struct PairFixture {
  Instance inst;
  FracSolution frac;
  std::vector<Rat> lambda{Rat(2), Rat(2)};
};

inline PairFixture pair_fixture() {
  PairFixture fx{pmm::instance_from_json_text(l1_instance_text(
                     {{"p", "1"}, {"q", "2"}}, {{"t", "20", "1"}, {"u", "20", "1"}},
                     {{0, 0}, {10, 0}}, {{1, 0}, {9, 0}}, uniform_matroid_json(1))),
                 {}};
  fx.frac.y = {pmm::rat_frac(1, 2), pmm::rat_frac(1, 2)};
  fx.frac.x = {{{0, pmm::rat_frac(1, 2)}, {1, pmm::rat_frac(1, 2)}},
               {{0, pmm::rat_frac(1, 2)}, {1, pmm::rat_frac(1, 2)}}};
  fx.frac.cbar = {Rat(5), Rat(5)};
  return fx;
}

// Three centers around a shared middle: center P owns {e, g}, centers T and U
// own one distant facility each and leave half their mass on e. P lands in
// the small regime, T and U in the large one; afterwards every support pair
// meets every other in exactly the facility e.
//   e (0,0) cost 0   g (0,2) cost 1   a (5,0) cost 0   b (-5,0) cost 1/2
//   P (0,1)          T (4,0)          U (-4,0)         radii 10, uniform k=2
struct TripleFixture {
  Instance inst;
  FracSolution frac;
  std::vector<Rat> lambda{Rat(2), Rat(2), Rat(2)};
};

inline TripleFixture triple_fixture() {
  TripleFixture fx{pmm::instance_from_json_text(l1_instance_text(
                       {{"e", "0"}, {"g", "1"}, {"a", "0"}, {"b", "1/2"}},
                       {{"P", "10", "1"}, {"T", "10", "1"}, {"U", "10", "1"}},
                       {{0, 0}, {0, 2}, {5, 0}, {-5, 0}}, {{0, 1}, {4, 0}, {-4, 0}},
                       uniform_matroid_json(2))),
                   {}};
  Rat h = pmm::rat_frac(1, 2);
  fx.frac.y = {h, h, h, h};
  fx.frac.x = {{{0, h}, {1, h}}, {{0, h}, {2, h}}, {{0, h}, {3, h}}};
  fx.frac.cbar = {Rat(1), pmm::rat_frac(5, 2), pmm::rat_frac(5, 2)};
  return fx;
}

}  // namespace pmmtest
