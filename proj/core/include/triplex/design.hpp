#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "triplex/ints.hpp"

namespace triplex {

// Point labels are dense integers 0..v-1.
using Point = std::uint16_t;

// A block is a strictly increasing sequence of point labels.
using Block = std::vector<Point>;

// A block multiset on points 0..v-1, all blocks of size k, kept in
// lexicographic order (duplicates allowed and adjacent).
class Design {
 public:
  Design(int v, int k);

  // Takes flat storage (block i at [i*k, (i+1)*k)). Validates every block;
  // sorts the block list unless the caller promises it is already sorted.
  static Design from_flat(int v, int k, std::vector<Point> flat,
                          bool already_sorted = false);

  int v() const { return v_; }
  int k() const { return k_; }
  std::size_t block_count() const { return flat_.size() / k_; }
  std::span<const Point> block(std::size_t i) const {
    return {flat_.data() + i * k_, static_cast<std::size_t>(k_)};
  }
  const std::vector<Point>& flat() const { return flat_; }

  bool operator==(const Design& o) const = default;

 private:
  int v_;
  int k_;
  std::vector<Point> flat_;
};

// All C(v,k) k-subsets of 0..v-1 in lexicographic order.
Design complete_design(int v, int k);

// The block multiset repeated a times (a >= 1). Copy r of input block p sits
// at index p*a + r, which keeps the result sorted.
Design union_copies(const Design& d, int a);

// Every label shifted by offset into a point set of size new_v.
Design translate(const Design& d, int offset, int new_v);

struct CoverageWitness {
  Block subset_min, subset_max;  // extremal s-subsets by coverage count
  Int count_min = 0, count_max = 0;
};

// Coverage counts for all subset sizes s = 0..t, by direct enumeration.
struct LambdaProfile {
  int t = 0;
  std::vector<Int> lambda;             // size t+1; lambda[0] = block count;
                                       // lambda[s] = -1 when not uniform
  std::vector<char> uniform;           // uniform[s]: all s-subsets covered equally
  std::vector<CoverageWitness> witness;  // witness[s] meaningful iff !uniform[s]

  // True iff every subset size 1..s is uniformly covered.
  bool design_at(int s) const {
    for (int i = 1; i <= s; ++i)
      if (!uniform[static_cast<std::size_t>(i)]) return false;
    return true;
  }
};

// Counts, for each s <= t, how many blocks contain each s-subset of the point
// set. t must satisfy 0 <= t <= k.
LambdaProfile lambda_profile(const Design& d, int t);

struct SimplicityReport {
  bool simple = true;
  Block duplicate;       // first repeated block when !simple
  Int multiplicity = 0;  // its multiplicity
};

SimplicityReport is_simple(const Design& d);

}  // namespace triplex
