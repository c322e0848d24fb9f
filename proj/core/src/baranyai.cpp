#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "triplex/error.hpp"
#include "triplex/resolution.hpp"

namespace triplex {

namespace {

// Point sets as 256-bit masks; enough for every desk-scale instance.
struct Mask {
  std::array<std::uint64_t, 4> w{};
  bool operator==(const Mask&) const = default;
  void set(int b) { w[b >> 6] |= 1ull << (b & 63); }
  bool test(int b) const { return (w[b >> 6] >> (b & 63)) & 1; }
  int size() const {
    return __builtin_popcountll(w[0]) + __builtin_popcountll(w[1]) +
           __builtin_popcountll(w[2]) + __builtin_popcountll(w[3]);
  }
};

struct MaskHash {
  std::size_t operator()(const Mask& m) const {
    std::uint64_t x = 0x9e3779b97f4a7c15ull;
    for (std::uint64_t word : m.w) {
      x = (x ^ word) * 0xbf58476d1ce4e5b9ull;
      x ^= x >> 31;
    }
    x *= 0x94d049bb133111ebull;
    return static_cast<std::size_t>(x ^ (x >> 29));
  }
};

// Max-flow with BFS level graph and current-arc DFS. Adjacency lists are
// built in a fixed order, so augmentation is lowest-index-first and the
// whole computation is deterministic.
class Dinic {
 public:
  explicit Dinic(int nodes)
      : adj_(nodes), level_(nodes), iter_(nodes) {}

  void add_edge(int from, int to, Int cap) {
    adj_[from].push_back(static_cast<int>(to_.size()));
    to_.push_back(to);
    cap_.push_back(cap);
    adj_[to].push_back(static_cast<int>(to_.size()));
    to_.push_back(from);
    cap_.push_back(0);
  }

  Int run(int s, int t) {
    Int flow = 0;
    while (bfs(s, t)) {
      std::fill(iter_.begin(), iter_.end(), 0);
      while (Int f = dfs(s, t, INT64_MAX)) flow += f;
    }
    return flow;
  }

  Int edge_flow(int id) const { return cap_[id ^ 1]; }  // pushed amount

 private:
  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    queue_.clear();
    queue_.push_back(s);
    level_[s] = 0;
    for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
      int u = queue_[qi];
      for (int e : adj_[u]) {
        if (cap_[e] > 0 && level_[to_[e]] < 0) {
          level_[to_[e]] = level_[u] + 1;
          queue_.push_back(to_[e]);
        }
      }
    }
    return level_[t] >= 0;
  }

  Int dfs(int u, int t, Int limit) {
    if (u == t) return limit;
    for (int& i = iter_[u]; i < static_cast<int>(adj_[u].size()); ++i) {
      int e = adj_[u][i];
      int w = to_[e];
      if (cap_[e] <= 0 || level_[w] != level_[u] + 1) continue;
      Int got = dfs(w, t, std::min(limit, cap_[e]));
      if (got > 0) {
        cap_[e] -= got;
        cap_[e ^ 1] += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<std::vector<int>> adj_;
  std::vector<int> to_;
  std::vector<Int> cap_;
  std::vector<int> level_;
  std::vector<int> iter_;
  std::vector<int> queue_;
};

// Lexicographic rank of a k-subset among all k-subsets of 0..v-1.
Int lex_rank(const std::vector<int>& x, int v, int k) {
  Int rank = 0;
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    for (int c = prev + 1; c < x[i]; ++c) rank += binomial(v - 1 - c, k - 1 - i);
    prev = x[i];
  }
  return rank;
}

}  // namespace

ResolvedDesign baranyai_parallelism(int v, int k) {
  if (k < 2 || v <= k)
    fail(ErrorCategory::Range, "parallelism requires v > k >= 2");
  if (v % k != 0)
    fail(ErrorCategory::Congruence,
         "parallelism requires k | v, got v=" + std::to_string(v) +
             " k=" + std::to_string(k));
  if (v > 256)
    fail(ErrorCategory::Range, "parallelism generator supports v <= 256");

  const Int n_classes = binomial(v - 1, k - 1);
  const int parts_per_class = v / k;
  const int N = static_cast<int>(n_classes);

  // Partial state: each class partitions the points seen so far into at most
  // v/k parts (empty parts tracked explicitly). Invariant maintained by the
  // flow step: every s-subset of the first m points occurs as a part with
  // total multiplicity C(v-m, k-s) across classes.
  std::vector<std::vector<Mask>> parts(
      N, std::vector<Mask>(parts_per_class, Mask{}));

  std::vector<Mask> node_mask;          // subset node id -> mask
  std::unordered_map<Mask, int, MaskHash> node_id;
  std::vector<int> class_choice(N);

  for (int m = 0; m < v; ++m) {
    node_mask.clear();
    node_id.clear();
    // Subset nodes: distinct incomplete parts, discovered in class order.
    for (int c = 0; c < N; ++c) {
      for (const Mask& p : parts[c]) {
        if (p.size() >= k) continue;
        if (node_id.try_emplace(p, static_cast<int>(node_mask.size())).second)
          node_mask.push_back(p);
      }
    }
    const int Q = static_cast<int>(node_mask.size());
    const int source = 0, sink = 1 + N + Q;
    Dinic flow(sink + 1);
    for (int c = 0; c < N; ++c) flow.add_edge(source, 1 + c, 1);

    // One edge per distinct incomplete part per class, recorded for readback.
    std::vector<std::pair<int, int>> edge_of;  // (class, subset node) per edge id
    std::vector<int> scratch;  // dedupe within a class
    for (int c = 0; c < N; ++c) {
      scratch.clear();
      for (const Mask& p : parts[c]) {
        if (p.size() >= k) continue;
        int id = node_id.find(p)->second;
        if (std::find(scratch.begin(), scratch.end(), id) != scratch.end())
          continue;
        scratch.push_back(id);
        edge_of.emplace_back(c, id);
        flow.add_edge(1 + c, 1 + N + id, 1);
      }
    }
    for (int q = 0; q < Q; ++q) {
      const int s = node_mask[q].size();
      flow.add_edge(1 + N + q, sink, binomial(v - m - 1, k - s - 1));
    }

    if (flow.run(source, sink) != n_classes)
      fail(ErrorCategory::Internal,
           "parallelism flow not saturated at point " + std::to_string(m));

    // Each class pushed exactly one unit; find through which part.
    std::fill(class_choice.begin(), class_choice.end(), -1);
    for (std::size_t e = 0; e < edge_of.size(); ++e) {
      // class->subset edges were added after the N source edges, two edge
      // slots each (forward/backward)
      const int id = static_cast<int>(2 * N + 2 * e);
      if (flow.edge_flow(id) > 0) class_choice[edge_of[e].first] = static_cast<int>(e);
    }
    for (int c = 0; c < N; ++c) {
      if (class_choice[c] < 0)
        fail(ErrorCategory::Internal,
             "class received no assignment at point " + std::to_string(m));
      const Mask want = node_mask[edge_of[class_choice[c]].second];
      for (Mask& p : parts[c]) {
        if (p == want) {
          p.set(m);
          break;
        }
      }
    }
  }

  Design d = complete_design(v, k);
  ResolvedDesign rd{std::move(d), {}, 1};
  rd.classes.resize(N);
  std::vector<int> pts;
  for (int c = 0; c < N; ++c) {
    auto& cls = rd.classes[c];
    cls.reserve(parts_per_class);
    for (const Mask& p : parts[c]) {
      pts.clear();
      for (int b = 0; b < v; ++b) {
        if (p.test(b)) pts.push_back(b);
      }
      if (static_cast<int>(pts.size()) != k)
        fail(ErrorCategory::Internal, "incomplete part after final point");
      cls.push_back(static_cast<std::uint32_t>(lex_rank(pts, v, k)));
    }
    std::sort(cls.begin(), cls.end());
  }
  return rd;
}

}  // namespace triplex
