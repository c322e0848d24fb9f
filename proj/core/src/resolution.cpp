#include "triplex/resolution.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "parallel.hpp"
#include "triplex/error.hpp"

namespace triplex {

int class_distance(int w, int i, int j) {
  if (w < 2 || i < 1 || i > w || j < 1 || j > w)
    fail(ErrorCategory::Range, "class_distance: labels must lie in 1..w");
  int d = i > j ? i - j : j - i;
  return std::min(d, w - d);
}

ResolvedDesign round_robin_one_factorization(int v) {
  if (v < 4 || v % 2 != 0)
    fail(ErrorCategory::Congruence,
         "one-factorization needs even v >= 4, got v=" + std::to_string(v));
  Design d = complete_design(v, 2);
  // Index of pair {a,b}, a < b, in the lexicographic complete design.
  auto pair_index = [v](int a, int b) -> std::uint32_t {
    // blocks starting with a occupy a run after all smaller first elements
    Int before = binomial(v, 2) - binomial(v - a, 2);
    return static_cast<std::uint32_t>(before + (b - a - 1));
  };
  const int m = v - 1;
  ResolvedDesign rd{std::move(d), {}, 1};
  rd.classes.resize(m);
  for (int r = 0; r < m; ++r) {
    auto& cls = rd.classes[r];
    cls.reserve(v / 2);
    cls.push_back(pair_index(std::min(r, v - 1), std::max(r, v - 1)));
    for (int i = 1; i <= v / 2 - 1; ++i) {
      int a = (r + i) % m;
      int b = ((r - i) % m + m) % m;
      cls.push_back(pair_index(std::min(a, b), std::max(a, b)));
    }
    std::sort(cls.begin(), cls.end());
  }
  return rd;
}

namespace {

// Least cyclic rotation of the circular gap vector; two k-subsets lie in the
// same shift orbit exactly when their gap vectors are rotations of each other.
std::uint64_t orbit_key(const Point* b, int k, int v) {
  int gaps[9];
  for (int i = 0; i + 1 < k; ++i) gaps[i] = b[i + 1] - b[i];
  gaps[k - 1] = v - b[k - 1] + b[0];
  int best = 0;
  for (int s = 1; s < k; ++s) {
    for (int i = 0; i < k; ++i) {
      int x = gaps[(s + i) % k], y = gaps[(best + i) % k];
      if (x != y) {
        if (x < y) best = s;
        break;
      }
    }
  }
  std::uint64_t key = 0;
  for (int i = 0; i < k; ++i)
    key = (key << 8) | static_cast<std::uint64_t>(gaps[(best + i) % k] & 0xff);
  return key;
}

}  // namespace

ResolvedDesign cyclic_orbit_resolution(int v, int k) {
  if (k < 2 || v <= k)
    fail(ErrorCategory::Range, "orbit resolution requires v > k >= 2");
  if (std::gcd(v, k) != 1)
    fail(ErrorCategory::Congruence,
         "orbit resolution requires gcd(v,k)=1, got v=" + std::to_string(v) +
             " k=" + std::to_string(k));
  if (k > 8 || v > 255)
    fail(ErrorCategory::Range, "orbit resolution supports k <= 8, v <= 255");
  const Int w = binomial(v - 1, k - 1) / k;
  if (w < 2)
    fail(ErrorCategory::Range,
         "orbit resolution degenerate (single class) for v=" +
             std::to_string(v) + " k=" + std::to_string(k));

  Design d = complete_design(v, k);
  const std::size_t n = d.block_count();
  ResolvedDesign rd{std::move(d), {}, k};
  rd.classes.reserve(static_cast<std::size_t>(w));
  std::unordered_map<std::uint64_t, std::uint32_t> ids;
  ids.reserve(static_cast<std::size_t>(w) * 2);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t key = orbit_key(rd.design.flat().data() + i * k, k, v);
    auto [it, fresh] = ids.try_emplace(key, static_cast<std::uint32_t>(rd.classes.size()));
    if (fresh) rd.classes.emplace_back().reserve(v);
    rd.classes[it->second].push_back(static_cast<std::uint32_t>(i));
  }
  if (rd.classes.size() != static_cast<std::size_t>(w))
    fail(ErrorCategory::Internal, "orbit count mismatch");
  for (const auto& c : rd.classes) {
    if (c.size() != static_cast<std::size_t>(v))
      fail(ErrorCategory::Internal, "orbit size mismatch");
  }
  return rd;
}

std::pair<ResolvedDesign, SimpleCore> concatenate_resolution(
    const ResolvedDesign& core, int a) {
  if (a < 1) fail(ErrorCategory::Range, "concatenation requires a >= 1");
  if (core.w() < 2)
    fail(ErrorCategory::Range, "concatenation requires a resolved core (w >= 2)");
  SimplicityReport rep = is_simple(core.design);
  if (!rep.simple)
    fail(ErrorCategory::Ingredient,
         "concatenation core must be simple (a block has multiplicity " +
             std::to_string(rep.multiplicity) + ")");
  ResolvedDesign out{union_copies(core.design, a), {}, core.sigma};
  const std::size_t t = core.w();
  out.classes.reserve(t * static_cast<std::size_t>(a));
  for (int r = 0; r < a; ++r) {
    for (std::size_t c = 0; c < t; ++c) {
      auto& cls = out.classes.emplace_back();
      cls.reserve(core.classes[c].size());
      // copy r of core block p lands at index p*a + r in the repeated multiset
      for (std::uint32_t p : core.classes[c])
        cls.push_back(p * static_cast<std::uint32_t>(a) +
                      static_cast<std::uint32_t>(r));
      std::sort(cls.begin(), cls.end());
    }
  }
  return {std::move(out), SimpleCore{static_cast<Int>(t), a}};
}

ResolutionCheck verify_resolution(const ResolvedDesign& rd) {
  ResolutionCheck res;
  auto violation = [&res](std::string reason, Int cls, Int pt, Int cnt) {
    res.ok = false;
    res.reason = std::move(reason);
    res.class_index = cls;
    res.point = pt;
    res.count = cnt;
    return res;
  };
  const std::size_t n = rd.design.block_count();
  const int v = rd.design.v(), k = rd.design.k();
  if (rd.w() < 2) return violation("fewer than two classes", -1, -1, -1);

  std::vector<char> seen(n, 0);
  for (std::size_t c = 0; c < rd.w(); ++c) {
    for (std::uint32_t b : rd.classes[c]) {
      if (b >= n)
        return violation("class references block index out of range",
                         static_cast<Int>(c), -1, b);
      if (seen[b])
        return violation("block index appears in two classes",
                         static_cast<Int>(c), -1, b);
      seen[b] = 1;
    }
  }
  for (std::size_t b = 0; b < n; ++b) {
    if (!seen[b])
      return violation("block index missing from every class", -1, -1,
                       static_cast<Int>(b));
  }

  Int sigma = -1;
  std::vector<Int> deg(v);
  for (std::size_t c = 0; c < rd.w(); ++c) {
    std::fill(deg.begin(), deg.end(), 0);
    for (std::uint32_t b : rd.classes[c]) {
      auto blk = rd.design.block(b);
      for (Point p : blk) deg[p]++;
    }
    for (int p = 0; p < v; ++p) {
      if (deg[p] != deg[0])
        return violation("point degrees differ within class",
                         static_cast<Int>(c), p, deg[p]);
    }
    if (sigma < 0) {
      sigma = deg[0];
    } else if (deg[0] != sigma) {
      return violation("per-class degree differs across classes",
                       static_cast<Int>(c), 0, deg[0]);
    }
  }
  if (sigma <= 0)
    return violation("class covers no points", 0, 0, sigma);
  // b * k = v * sigma for every class of a 1-(v,k,sigma) design
  for (std::size_t c = 0; c < rd.w(); ++c) {
    if (static_cast<Int>(rd.classes[c].size()) * k != static_cast<Int>(v) * sigma)
      return violation("class size inconsistent with sigma",
                       static_cast<Int>(c), -1,
                       static_cast<Int>(rd.classes[c].size()));
  }
  if (rd.sigma != sigma)
    return violation("declared sigma is " + std::to_string(rd.sigma) +
                         " but classes have degree " + std::to_string(sigma),
                     -1, -1, sigma);
  res.sigma = sigma;
  return res;
}

}  // namespace triplex
