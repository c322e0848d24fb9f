#include "triplex/resolvability.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "triplex/error.hpp"

namespace triplex {

std::vector<PairSigma> pair_sigmas(const CountingSummary& counts) {
  if (counts.lambda_filler != 0)
    fail(ErrorCategory::Validation,
         "cell resolution applies only when theta == delta, but "
         "theta-delta=" +
             std::to_string(counts.lambda_filler));
  std::vector<PairSigma> out;
  out.reserve(counts.pairs.size());
  for (const PairCounts& pc : counts.pairs) {
    PairSigma ps;
    ps.h = pc.h;
    ps.half = pc.half;
    ps.cell_count = checked_mul(pc.z, pc.w);
    if (pc.half) {
      ps.sigma = checked_mul(pc.u_left, pc.b_left);
      ps.cell_size = checked_mul(pc.b_left, pc.b_left);
    } else {
      ps.sigma = checked_add(checked_mul(pc.u_left, pc.b_right),
                             checked_mul(pc.u_right, pc.b_left));
      ps.cell_size = 2 * checked_mul(pc.b_left, pc.b_right);
    }
    out.push_back(ps);
  }
  return out;
}

MultiplierChoice find_multipliers(const std::vector<PairSigma>& sigmas) {
  if (sigmas.empty())
    fail(ErrorCategory::Range, "no pairs to choose multipliers for");
  Int L = 1;
  for (const PairSigma& ps : sigmas) {
    if (ps.sigma <= 0)
      fail(ErrorCategory::Range,
           "pair " + std::to_string(ps.h) + " has sigma=0");
    L = checked_mul(L / std::gcd(L, ps.sigma), ps.sigma);
  }
  // m_h = c*L/sigma_h must divide cell_count_h, so in particular
  // m_h <= cell_count_h, bounding the search.
  Int cmax = INT64_MAX;
  for (const PairSigma& ps : sigmas)
    cmax = std::min(cmax, ps.cell_count / (L / ps.sigma));
  for (Int c = 1; c <= cmax; ++c) {
    bool ok = true;
    for (const PairSigma& ps : sigmas) {
      if (ps.cell_count % (c * (L / ps.sigma)) != 0) {
        ok = false;
        break;
      }
    }
    if (ok) {
      MultiplierChoice mc;
      mc.sigma = checked_mul(c, L);
      for (const PairSigma& ps : sigmas) mc.m.push_back(mc.sigma / ps.sigma);
      return mc;
    }
  }
  std::string detail = "no feasible multipliers: need m_h | cell_count_h with";
  for (const PairSigma& ps : sigmas)
    detail += " (sigma=" + std::to_string(ps.sigma) +
              ", cells=" + std::to_string(ps.cell_count) + ")";
  fail(ErrorCategory::Validation, detail);
}

ResolvedDesign partition_constructed(const Assembled& assembled,
                                     const MultiplierChoice& choice) {
  const auto& prov = assembled.prov;
  const auto& counts = assembled.counts;
  if (prov.size() != assembled.design.block_count())
    fail(ErrorCategory::Internal, "provenance does not match block list");
  if (choice.m.size() != counts.pairs.size())
    fail(ErrorCategory::Range,
         "multiplier list does not match the pair list");

  // Cells keyed by (pair, i, j); ascending key order is the grouping order.
  auto key_of = [](const BlockProvenance& p) -> std::uint64_t {
    return (static_cast<std::uint64_t>(p.pair) << 42) |
           (static_cast<std::uint64_t>(p.i) << 21) |
           static_cast<std::uint64_t>(p.j);
  };
  std::vector<std::uint64_t> keys;
  keys.reserve(prov.size());
  for (const BlockProvenance& p : prov) {
    if (p.type == BlockType::Filler)
      fail(ErrorCategory::Validation,
           "design contains filler blocks; cell partition undefined");
    if (p.pair < 1 || p.pair > static_cast<int>(counts.pairs.size()) ||
        p.i <= 0 || p.j <= 0 || p.i >= (1 << 21) || p.j >= (1 << 21))
      fail(ErrorCategory::Range, "provenance indices out of range");
    keys.push_back(key_of(p));
  }
  std::vector<std::uint64_t> cell_keys = keys;
  std::sort(cell_keys.begin(), cell_keys.end());
  cell_keys.erase(std::unique(cell_keys.begin(), cell_keys.end()),
                  cell_keys.end());

  // Per-pair cell ranges, checked against the counting summary.
  std::vector<std::size_t> pair_begin(counts.pairs.size() + 1, 0);
  for (std::size_t p = 0; p < counts.pairs.size(); ++p) {
    const std::uint64_t next_pair = static_cast<std::uint64_t>(p + 2) << 42;
    pair_begin[p + 1] = static_cast<std::size_t>(
        std::lower_bound(cell_keys.begin(), cell_keys.end(), next_pair) -
        cell_keys.begin());
    const Int have =
        static_cast<Int>(pair_begin[p + 1]) - static_cast<Int>(pair_begin[p]);
    if (have != checked_mul(counts.pairs[p].z, counts.pairs[p].w))
      fail(ErrorCategory::Internal,
           "pair " + std::to_string(p + 1) + " shows " + std::to_string(have) +
               " cells, expected z*w=" +
               std::to_string(counts.pairs[p].z * counts.pairs[p].w));
    if (have % choice.m[p] != 0)
      fail(ErrorCategory::Range, "m does not divide the cell count of pair " +
                                     std::to_string(p + 1));
  }

  // Class of each cell: consecutive runs of m_h cells within each pair.
  std::size_t n_classes = 0;
  std::vector<std::uint32_t> class_of_cell(cell_keys.size());
  for (std::size_t p = 0; p < counts.pairs.size(); ++p) {
    const std::size_t m = static_cast<std::size_t>(choice.m[p]);
    for (std::size_t c = pair_begin[p]; c < pair_begin[p + 1]; ++c)
      class_of_cell[c] =
          static_cast<std::uint32_t>(n_classes + (c - pair_begin[p]) / m);
    n_classes += (pair_begin[p + 1] - pair_begin[p]) / m;
  }

  ResolvedDesign rd{assembled.design, {}, choice.sigma};
  rd.classes.resize(n_classes);
  for (std::size_t b = 0; b < keys.size(); ++b) {
    const std::size_t cell = static_cast<std::size_t>(
        std::lower_bound(cell_keys.begin(), cell_keys.end(), keys[b]) -
        cell_keys.begin());
    rd.classes[class_of_cell[cell]].push_back(static_cast<std::uint32_t>(b));
  }
  for (auto& cls : rd.classes) std::sort(cls.begin(), cls.end());

  ResolutionCheck rc = verify_resolution(rd);
  if (!rc.ok)
    fail(ErrorCategory::Internal, "cell partition fails verification: " +
                                      rc.reason + " (class " +
                                      std::to_string(rc.class_index) + ")");
  if (rc.sigma != choice.sigma)
    fail(ErrorCategory::Internal,
         "partition yields sigma=" + std::to_string(rc.sigma) +
             ", expected " + std::to_string(choice.sigma));
  return rd;
}

}  // namespace triplex
