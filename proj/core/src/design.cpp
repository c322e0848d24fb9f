#include "triplex/design.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <numeric>

#include "parallel.hpp"
#include "triplex/config.hpp"
#include "triplex/error.hpp"

namespace triplex {

static std::atomic<int> g_threads{1};
void set_threads(int n) { g_threads = n < 1 ? 1 : n; }
int threads() { return g_threads.load(); }

namespace {

bool block_less(const Point* a, const Point* b, int k) {
  for (int i = 0; i < k; ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

// Blocks of up to 8 points below label 256 pack into one comparable word.
bool packable(int v, int k) { return k <= 8 && v <= 256; }

std::uint64_t pack_block(const Point* p, int k) {
  std::uint64_t key = 0;
  for (int i = 0; i < k; ++i)
    key |= static_cast<std::uint64_t>(p[i] & 0xff) << (8 * (7 - i));
  return key;
}

void sort_flat(int v, int k, std::vector<Point>& flat) {
  const std::size_t n = flat.size() / k;
  if (n < 2) return;
  if (packable(v, k)) {
    std::vector<std::uint64_t> keys(n);
    for (std::size_t i = 0; i < n; ++i) keys[i] = pack_block(&flat[i * k], k);
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 0; i < n; ++i) {
      for (int j = 0; j < k; ++j)
        flat[i * k + j] = static_cast<Point>((keys[i] >> (8 * (7 - j))) & 0xff);
    }
    return;
  }
  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0u);
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    return block_less(&flat[std::size_t{a} * k], &flat[std::size_t{b} * k], k);
  });
  std::vector<Point> out(flat.size());
  for (std::size_t i = 0; i < n; ++i)
    std::memcpy(&out[i * k], &flat[std::size_t{idx[i]} * k],
                sizeof(Point) * k);
  flat.swap(out);
}

}  // namespace

Design::Design(int v, int k) : v_(v), k_(k) {
  if (k < 2 || v <= k)
    fail(ErrorCategory::Range, "design requires v > k >= 2");
  if (v > 0xffff) fail(ErrorCategory::Range, "point labels exceed 16 bits");
}

Design Design::from_flat(int v, int k, std::vector<Point> flat,
                         bool already_sorted) {
  Design d(v, k);
  if (flat.size() % static_cast<std::size_t>(k) != 0)
    fail(ErrorCategory::Range, "flat block storage not a multiple of k");
  const std::size_t n = flat.size() / k;
  for (std::size_t i = 0; i < n; ++i) {
    const Point* b = &flat[i * k];
    for (int j = 0; j < k; ++j) {
      if (b[j] >= v)
        fail(ErrorCategory::Range,
             "block " + std::to_string(i) + " has label out of range");
      if (j > 0 && b[j] <= b[j - 1])
        fail(ErrorCategory::Range,
             "block " + std::to_string(i) + " is not strictly increasing");
    }
  }
  if (!already_sorted) sort_flat(v, k, flat);
  d.flat_ = std::move(flat);
  return d;
}

Design complete_design(int v, int k) {
  Design d(v, k);
  const Int n = binomial(v, k);
  std::vector<Point> flat;
  flat.reserve(static_cast<std::size_t>(n) * k);
  std::vector<Point> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = static_cast<Point>(i);
  while (true) {
    flat.insert(flat.end(), cur.begin(), cur.end());
    int i = k - 1;
    while (i >= 0 && cur[i] == v - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = static_cast<Point>(cur[j - 1] + 1);
  }
  return Design::from_flat(v, k, std::move(flat), /*already_sorted=*/true);
}

Design union_copies(const Design& d, int a) {
  if (a < 1) fail(ErrorCategory::Range, "union_copies requires a >= 1");
  const int k = d.k();
  const std::size_t n = d.block_count();
  std::vector<Point> flat(n * static_cast<std::size_t>(a) * k);
  for (std::size_t p = 0; p < n; ++p) {
    const Point* src = d.flat().data() + p * k;
    for (int r = 0; r < a; ++r)
      std::memcpy(&flat[(p * a + r) * static_cast<std::size_t>(k)], src,
                  sizeof(Point) * k);
  }
  return Design::from_flat(d.v(), k, std::move(flat), /*already_sorted=*/true);
}

Design translate(const Design& d, int offset, int new_v) {
  if (offset < 0 || d.v() + offset > new_v)
    fail(ErrorCategory::Range, "translate: labels would leave 0..new_v-1");
  std::vector<Point> flat(d.flat());
  for (auto& p : flat) p = static_cast<Point>(p + offset);
  return Design::from_flat(new_v, d.k(), std::move(flat),
                           /*already_sorted=*/true);
}

namespace {

// Colexicographic subset ranking against a small binomial table.
struct BinomTable {
  int v, t;
  std::vector<Int> c;  // c[n * (t + 1) + r]
  BinomTable(int v_, int t_) : v(v_), t(t_), c((v + 1) * (t + 1), 0) {
    for (int n = 0; n <= v; ++n) {
      for (int r = 0; r <= t; ++r) c[n * (t + 1) + r] = binomial(n, r);
    }
  }
  Int at(int n, int r) const { return c[n * (t + 1) + r]; }
};

Block unrank_colex(Int rank, int s, const BinomTable& bt) {
  Block out(s);
  int x = bt.v - 1;
  for (int j = s; j >= 1; --j) {
    while (bt.at(x, j) > rank) --x;
    out[j - 1] = static_cast<Point>(x);
    rank -= bt.at(x, j);
  }
  return out;
}

}  // namespace

LambdaProfile lambda_profile(const Design& d, int t) {
  if (t < 0 || t > d.k())
    fail(ErrorCategory::Range, "lambda_profile requires 0 <= t <= k");
  const int k = d.k(), v = d.v();
  const std::size_t n = d.block_count();
  const BinomTable bt(v, std::max(t, 1));

  std::vector<std::size_t> sizes(t + 1, 1);
  for (int s = 1; s <= t; ++s)
    sizes[s] = static_cast<std::size_t>(binomial(v, s));

  const std::size_t nw =
      std::min<std::size_t>(static_cast<std::size_t>(threads()), n ? n : 1);
  // counts[w][s] is worker w's private accumulator for subset size s.
  std::vector<std::vector<std::vector<Int>>> counts(std::max<std::size_t>(nw, 1));
  for (auto& per : counts) {
    per.resize(t + 1);
    for (int s = 1; s <= t; ++s) per[s].assign(sizes[s], 0);
  }

  detail::parallel_chunks(n, [&](std::size_t w, std::size_t b, std::size_t e) {
    auto& acc = counts[w];
    for (std::size_t i = b; i < e; ++i) {
      const Point* blk = d.flat().data() + i * k;
      if (t >= 1) {
        auto& c1 = acc[1];
        for (int a = 0; a < k; ++a) c1[blk[a]]++;
      }
      if (t >= 2) {
        auto& c2 = acc[2];
        for (int a2 = 1; a2 < k; ++a2) {
          const Int base = bt.at(blk[a2], 2);
          for (int a1 = 0; a1 < a2; ++a1) c2[base + blk[a1]]++;
        }
      }
      if (t >= 3) {
        auto& c3 = acc[3];
        for (int a3 = 2; a3 < k; ++a3) {
          const Int b3 = bt.at(blk[a3], 3);
          for (int a2 = 1; a2 < a3; ++a2) {
            const Int b2 = b3 + bt.at(blk[a2], 2);
            for (int a1 = 0; a1 < a2; ++a1) c3[b2 + blk[a1]]++;
          }
        }
      }
      if (t >= 4) {
        auto& c4 = acc[4];
        for (int a4 = 3; a4 < k; ++a4) {
          const Int b4 = bt.at(blk[a4], 4);
          for (int a3 = 2; a3 < a4; ++a3) {
            const Int b3 = b4 + bt.at(blk[a3], 3);
            for (int a2 = 1; a2 < a3; ++a2) {
              const Int b2 = b3 + bt.at(blk[a2], 2);
              for (int a1 = 0; a1 < a2; ++a1) c4[b2 + blk[a1]]++;
            }
          }
        }
      }
    }
  });

  for (std::size_t w = 1; w < counts.size(); ++w) {
    for (int s = 1; s <= t; ++s) {
      for (std::size_t i = 0; i < sizes[s]; ++i) counts[0][s][i] += counts[w][s][i];
    }
  }

  LambdaProfile out;
  out.t = t;
  out.lambda.assign(t + 1, 0);
  out.uniform.assign(t + 1, 1);
  out.witness.assign(t + 1, {});
  out.lambda[0] = static_cast<Int>(n);
  for (int s = 1; s <= t; ++s) {
    const auto& c = counts[0][s];
    std::size_t imin = 0, imax = 0;
    for (std::size_t i = 1; i < c.size(); ++i) {
      if (c[i] < c[imin]) imin = i;
      if (c[i] > c[imax]) imax = i;
    }
    if (c[imin] == c[imax]) {
      out.lambda[s] = c[imin];
    } else {
      out.lambda[s] = -1;
      out.uniform[s] = 0;
      out.witness[s] = {unrank_colex(static_cast<Int>(imin), s, bt),
                        unrank_colex(static_cast<Int>(imax), s, bt), c[imin],
                        c[imax]};
    }
  }
  return out;
}

SimplicityReport is_simple(const Design& d) {
  const int k = d.k();
  const std::size_t n = d.block_count();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Point* a = d.flat().data() + i * k;
    const Point* b = a + k;
    if (std::memcmp(a, b, sizeof(Point) * k) == 0) {
      SimplicityReport r;
      r.simple = false;
      r.duplicate.assign(a, a + k);
      r.multiplicity = 2;
      for (std::size_t j = i + 2;
           j < n && std::memcmp(a, d.flat().data() + j * k,
                                sizeof(Point) * k) == 0;
           ++j)
        ++r.multiplicity;
      return r;
    }
  }
  return {};
}

const char* to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Range: return "range";
    case ErrorCategory::Congruence: return "congruence";
    case ErrorCategory::Ingredient: return "ingredient";
    case ErrorCategory::Validation: return "validation";
    case ErrorCategory::Overflow: return "overflow";
    case ErrorCategory::Io: return "io";
    case ErrorCategory::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace triplex
