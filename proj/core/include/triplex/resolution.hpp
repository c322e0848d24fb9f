#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "triplex/design.hpp"

namespace triplex {

// A design together with a partition of its block list into w >= 2 classes,
// each class covering every point the same number sigma of times
// (a (1,sigma)-resolution; sigma = 1 is a parallelism).
struct ResolvedDesign {
  Design design;
  std::vector<std::vector<std::uint32_t>> classes;  // block indices per class
  Int sigma = 0;

  std::size_t w() const { return classes.size(); }
};

// Metadata for designs built as a concatenated copies of a simple core with
// t classes: classes c and c + t hold identical block content, w = a * t.
// a = 1 means the design itself is simple.
struct SimpleCore {
  Int t = 0;
  Int a = 1;
};

// Circular distance between classes i and j (1-based labels in 1..w):
// min(|i-j|, w - |i-j|).
int class_distance(int w, int i, int j);

// Classes of the complete 2-(v,2,1) design for even v, the circle method:
// round r pairs the fixed point v-1 with r and folds the remaining labels
// symmetrically around r. w = v-1 classes of v/2 disjoint pairs, sigma = 1.
ResolvedDesign round_robin_one_factorization(int v);

// Orbit classes of x -> x+1 (mod v) acting on all k-subsets, for
// gcd(v,k) = 1: every orbit has exactly v blocks and covers every point k
// times. Classes are ordered by their lexicographically least member.
// w = C(v-1,k-1)/k, sigma = k.
ResolvedDesign cyclic_orbit_resolution(int v, int k);

// Partition of all C(v,k) k-subsets into C(v-1,k-1) parallel classes of v/k
// disjoint blocks (k | v), built by the inductive integral-flow argument:
// points join partial partitions one at a time, each step realized by an
// exact max-flow whose integral solution exists because the fractional one
// does. Deterministic: fixed node order, lowest-index-first augmentation.
ResolvedDesign baranyai_parallelism(int v, int k);

// a copies of a simple resolved core: block multiset repeated a times,
// class list repeated a times in order. sigma is unchanged.
std::pair<ResolvedDesign, SimpleCore> concatenate_resolution(
    const ResolvedDesign& core, int a);

struct ResolutionCheck {
  bool ok = true;
  Int sigma = 0;       // common per-class point degree when ok
  std::string reason;  // first violation otherwise
  Int class_index = -1;
  Int point = -1;
  Int count = -1;
};

// Recomputes everything the ResolvedDesign claims: the classes partition the
// block list, every class covers every point equally often, the common count
// matches across classes and equals the declared sigma.
ResolutionCheck verify_resolution(const ResolvedDesign& rd);

}  // namespace triplex
