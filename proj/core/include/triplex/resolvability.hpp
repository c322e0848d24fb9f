#pragma once

#include <vector>

#include "triplex/construction.hpp"
#include "triplex/resolution.hpp"

namespace triplex {

// Per-pair replication data for the cell-level resolution of a constructed
// design: within one cell (i,j), every point of the doubled set lies in
// exactly `sigma` blocks.
struct PairSigma {
  int h = 0;           // 1-based pair index (half pair last)
  bool half = false;
  Int sigma = 0;
  Int cell_count = 0;  // z*w cells contributed by the pair
  Int cell_size = 0;   // blocks per cell
};

// Requires a balanced construction (theta == delta, i.e. no filler).
std::vector<PairSigma> pair_sigmas(const CountingSummary& counts);

struct MultiplierChoice {
  std::vector<Int> m;  // parallel to the pair_sigmas list
  Int sigma = 0;       // common value m[h] * sigma_h
};

// Smallest common sigma with every m_h dividing its pair's cell count;
// fails when no scaling works (e.g. parity obstructions).
MultiplierChoice find_multipliers(const std::vector<PairSigma>& sigmas);

// Group each pair's cells — ascending i, then ascending j — into runs of
// m_h consecutive cells; each run becomes one resolution class. The result
// is verified to be a (1,sigma)-resolution before it is returned.
ResolvedDesign partition_constructed(const Assembled& assembled,
                                     const MultiplierChoice& choice);

}  // namespace triplex
