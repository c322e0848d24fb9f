#include "triplex/construction.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>

#include "triplex/error.hpp"

namespace triplex {

Int annulus_width(int w, int epsilon, int s) {
  if (w < 2) fail(ErrorCategory::Range, "annulus needs w >= 2");
  if (epsilon != 0 && epsilon != 1)
    fail(ErrorCategory::Range, "annulus epsilon must be 0 or 1");
  if (s < epsilon || 2 * s > w)
    fail(ErrorCategory::Range,
         "annulus radius must satisfy epsilon <= s <= floor(w/2)");
  return 2 * s == w ? 2 * s - epsilon : 2 * s + 1 - epsilon;
}

std::pair<int, int> choose_annulus(int w, Int z) {
  if (w < 2 || z < 1 || z > w)
    fail(ErrorCategory::Range,
         "no annulus realizes z=" + std::to_string(z) + " with w=" +
             std::to_string(w));
  std::pair<int, int> es;
  if (z % 2 == 1) {
    es = {0, static_cast<int>((z - 1) / 2)};
  } else if (z < w) {
    es = {1, static_cast<int>(z / 2)};
  } else {  // z == w, even
    es = {0, static_cast<int>(w / 2)};
  }
  if (annulus_width(w, es.first, es.second) != z)
    fail(ErrorCategory::Internal, "annulus realization disagrees");
  return es;
}

namespace {

// 1-based classes j with epsilon <= d(i,j) <= s, ascending.
std::vector<int> annulus_members(int w, int eps, int s, int i) {
  std::vector<int> js;
  js.reserve(static_cast<std::size_t>(2 * s + 1));
  for (int d = eps; d <= s; ++d) {
    int j1 = ((i - 1 + d) % w) + 1;
    int j2 = ((i - 1 - d) % w + w) % w + 1;
    js.push_back(j1);
    if (j2 != j1) js.push_back(j2);
  }
  std::sort(js.begin(), js.end());
  js.erase(std::unique(js.begin(), js.end()), js.end());
  return js;
}

struct SideInfo {
  Int w = 0, b = 0, u = 0, lam2 = 0, lam3 = 0;
  Int t = 0, a = 1;
  bool hard_ok = true;     // resolution + design checks passed
  bool simple_ok = false;  // a == 1 and verified simple
};

void add_violation(std::vector<Violation>& out, int pair, std::string rule,
                   std::string detail) {
  out.push_back({pair, std::move(rule), std::move(detail)});
}

// Everything checkable about one ingredient side; fills info, records
// violations under the given pair index.
void analyze_side(const ResolvedDesign& rd, const SimpleCore& core, int spec_v,
                  int pair, const char* side, std::vector<Violation>& out,
                  SideInfo& info) {
  const std::string who = std::string(side) + " ingredient";
  if (rd.design.v() != spec_v) {
    add_violation(out, pair, "point-set",
                  who + " lives on " + std::to_string(rd.design.v()) +
                      " points, spec says " + std::to_string(spec_v));
    info.hard_ok = false;
    return;
  }
  ResolutionCheck rc = verify_resolution(rd);
  if (!rc.ok) {
    add_violation(out, pair, "resolution", who + ": " + rc.reason);
    info.hard_ok = false;
    return;
  }
  info.w = static_cast<Int>(rd.w());
  info.u = rc.sigma;
  info.b = static_cast<Int>(rd.classes[0].size());
  info.t = core.t;
  info.a = core.a;

  if (core.a < 1 || core.t < 1 || core.a * core.t != info.w) {
    add_violation(out, pair, "core-shape",
                  who + " core metadata (t=" + std::to_string(core.t) +
                      ", a=" + std::to_string(core.a) + ") does not match w=" +
                      std::to_string(info.w));
    info.hard_ok = false;
    return;
  }

  const int kj = rd.design.k();
  const int t_prof = std::min(3, kj);
  LambdaProfile prof = lambda_profile(rd.design, t_prof);
  if (!prof.design_at(t_prof)) {
    int bad = 1;
    while (prof.uniform[bad]) ++bad;
    add_violation(out, pair, "not-a-design",
                  who + " covers " + std::to_string(bad) +
                      "-subsets unevenly (" +
                      std::to_string(prof.witness[bad].count_min) + " vs " +
                      std::to_string(prof.witness[bad].count_max) + ")");
    info.hard_ok = false;
    return;
  }
  info.lam2 = prof.lambda[2];
  info.lam3 = kj >= 3 ? prof.lambda[3] : 0;

  if (core.a == 1) {
    SimplicityReport sr = is_simple(rd.design);
    if (!sr.simple) {
      add_violation(out, pair, "not-simple",
                    who + " declared simple but a block repeats " +
                        std::to_string(sr.multiplicity) + " times");
    } else {
      info.simple_ok = true;
    }
    return;
  }

  // Concatenated ingredient: classes must repeat with period t and one
  // period must form a simple design.
  const int k = rd.design.k();
  const std::size_t t = static_cast<std::size_t>(core.t);
  for (std::size_t c = 0; c < t && info.hard_ok; ++c) {
    const auto& ref = rd.classes[c];
    for (Int r = 1; r < core.a; ++r) {
      const auto& cls = rd.classes[r * t + c];
      bool same = cls.size() == ref.size();
      for (std::size_t p = 0; same && p < ref.size(); ++p) {
        same = std::memcmp(rd.design.block(ref[p]).data(),
                           rd.design.block(cls[p]).data(),
                           sizeof(Point) * k) == 0;
      }
      if (!same) {
        add_violation(out, pair, "core-structure",
                      who + " class " + std::to_string(r * t + c) +
                          " does not repeat class " + std::to_string(c));
        info.hard_ok = false;
      }
    }
  }
  if (!info.hard_ok) return;
  std::vector<Point> period_flat;
  period_flat.reserve(rd.design.block_count() / core.a * k);
  for (std::size_t c = 0; c < t; ++c) {
    for (std::uint32_t bidx : rd.classes[c]) {
      auto blk = rd.design.block(bidx);
      period_flat.insert(period_flat.end(), blk.begin(), blk.end());
    }
  }
  Design period = Design::from_flat(rd.design.v(), k, std::move(period_flat));
  if (!is_simple(period).simple) {
    add_violation(out, pair, "core-structure",
                  who + " period is not a simple design");
    info.hard_ok = false;
  }
}

struct Analysis {
  std::vector<Violation> violations;
  std::vector<SideInfo> left, right;  // per full pair
  SideInfo half;
  std::vector<Int> z;  // per full pair
  Int z_half = 0;
  CountingSummary summary;
  bool counts_valid = false;
};

Analysis analyze(const ConstructionSpec& spec, ValidationLevel level,
                 bool enforce_rules) {
  Analysis an;
  auto& out = an.violations;
  const int n_full = static_cast<int>(spec.pairs.size());
  const int half_idx = n_full + 1;

  if (spec.v <= spec.k / 2 || spec.k < 4)
    add_violation(out, 0, "shape",
                  "target needs k >= 4 and ingredient point count above every "
                  "ingredient block size");
  if (spec.mode == Mode::I && spec.half.has_value())
    add_violation(out, 0, "mode", "mode I spec carries a half pair");
  if (spec.mode == Mode::II && !spec.half.has_value())
    add_violation(out, 0, "mode", "mode II spec lacks its half pair");
  if (spec.mode == Mode::II && spec.k % 2 != 0)
    add_violation(out, 0, "mode", "mode II needs even k");
  if (spec.mode == Mode::I && spec.pairs.empty())
    add_violation(out, 0, "mode", "mode I needs at least one pair");

  an.left.resize(n_full);
  an.right.resize(n_full);
  an.z.assign(n_full, 0);

  int prev_kl = 0;
  for (int h = 0; h < n_full; ++h) {
    const PairSpec& p = spec.pairs[h];
    const int kl = p.left.design.k(), kr = p.right.design.k();
    if (kl + kr != spec.k)
      add_violation(out, h + 1, "block-size",
                    "pair block sizes " + std::to_string(kl) + "+" +
                        std::to_string(kr) + " != k=" + std::to_string(spec.k));
    if (2 * kl >= spec.k)
      add_violation(out, h + 1, "block-size",
                    "left block size must stay below k/2");
    if (kl <= prev_kl)
      add_violation(out, h + 1, "pair-order",
                    "left block sizes must increase strictly");
    prev_kl = kl;

    analyze_side(p.left, p.left_core, spec.v, h + 1, "left", out, an.left[h]);
    analyze_side(p.right, p.right_core, spec.v, h + 1, "right", out,
                 an.right[h]);
    if (!an.left[h].hard_ok || !an.right[h].hard_ok) continue;

    if (an.left[h].w != an.right[h].w) {
      add_violation(out, h + 1, "w-mismatch",
                    "left has w=" + std::to_string(an.left[h].w) +
                        ", right has w=" + std::to_string(an.right[h].w));
      continue;
    }
    if (!an.left[h].simple_ok && !an.right[h].simple_ok)
      add_violation(out, h + 1, "one-simple",
                    "neither side of the pair is a verified simple design");
    try {
      an.z[h] = annulus_width(static_cast<int>(an.left[h].w), p.epsilon, p.s);
    } catch (const Error& e) {
      add_violation(out, h + 1, "annulus", e.what());
      continue;
    }
    const Int guard_left = an.left[h].a > 1 ? an.left[h].t : an.left[h].w;
    const Int guard_right = an.right[h].a > 1 ? an.right[h].t : an.right[h].w;
    if (an.z[h] > std::min(guard_left, guard_right))
      add_violation(out, h + 1, "simplicity-guard",
                    "annulus size z=" + std::to_string(an.z[h]) +
                        " exceeds the repeat-free bound " +
                        std::to_string(std::min(guard_left, guard_right)));
  }

  if (spec.half) {
    const HalfPair& hp = *spec.half;
    if (hp.design.design.k() * 2 != spec.k)
      add_violation(out, half_idx, "half-size",
                    "half pair block size " + std::to_string(hp.design.design.k()) +
                        " is not k/2");
    if (n_full > 0 &&
        hp.design.design.k() <= spec.pairs.back().left.design.k())
      add_violation(out, half_idx, "pair-order",
                    "half block size must exceed every left block size");
    analyze_side(hp.design, SimpleCore{static_cast<Int>(hp.design.w()), 1},
                 spec.v, half_idx, "half", out, an.half);
    if (an.half.hard_ok) {
      if (!an.half.simple_ok)
        add_violation(out, half_idx, "half-simple",
                      "the half-pair design must be simple");
      try {
        an.z_half =
            annulus_width(static_cast<int>(an.half.w), hp.epsilon, hp.s);
      } catch (const Error& e) {
        add_violation(out, half_idx, "annulus", e.what());
      }
    }
  }

  bool hard_ok = std::all_of(an.left.begin(), an.left.end(),
                             [](const SideInfo& s) { return s.hard_ok; }) &&
                 std::all_of(an.right.begin(), an.right.end(),
                             [](const SideInfo& s) { return s.hard_ok; }) &&
                 (!spec.half || (an.half.hard_ok && an.z_half > 0));
  for (int h = 0; h < n_full && hard_ok; ++h)
    hard_ok = an.z[h] > 0 && an.left[h].w == an.right[h].w;

  if (!hard_ok) return an;

  // Exact counting against the measured ingredient values.
  CountingSummary& cs = an.summary;
  cs.v = spec.v;
  cs.k = spec.k;
  cs.mode = spec.mode;
  Int theta = 0, delta = 0;
  for (int h = 0; h < n_full; ++h) {
    const SideInfo &L = an.left[h], &R = an.right[h];
    PairCounts pc;
    pc.h = h + 1;
    pc.half = false;
    pc.k_left = spec.pairs[h].left.design.k();
    pc.k_right = spec.pairs[h].right.design.k();
    pc.w = L.w;
    pc.z = an.z[h];
    pc.b_left = L.b;
    pc.b_right = R.b;
    pc.u_left = L.u;
    pc.u_right = R.u;
    pc.lam_left = L.lam3;
    pc.lam_right = R.lam3;
    pc.lam2_left = L.lam2;
    pc.lam2_right = R.lam2;
    cs.pairs.push_back(pc);
    theta = checked_add(theta,
                        checked_mul(pc.z, checked_add(checked_mul(L.lam2, R.u),
                                                      checked_mul(R.lam2, L.u))));
    delta = checked_add(delta,
                        checked_mul(pc.z, checked_add(checked_mul(L.lam3, R.b),
                                                      checked_mul(R.lam3, L.b))));
  }
  if (spec.half) {
    const SideInfo& H = an.half;
    PairCounts pc;
    pc.h = half_idx;
    pc.half = true;
    pc.k_left = pc.k_right = spec.half->design.design.k();
    pc.w = H.w;
    pc.z = an.z_half;
    pc.b_left = pc.b_right = H.b;
    pc.u_left = pc.u_right = H.u;
    pc.lam_left = pc.lam_right = H.lam3;
    pc.lam2_left = pc.lam2_right = H.lam2;
    cs.pairs.push_back(pc);
    theta = checked_add(theta, checked_mul(pc.z, checked_mul(H.lam2, H.u)));
    delta = checked_add(delta, checked_mul(pc.z, checked_mul(H.lam3, H.b)));
  }
  cs.theta = theta;
  cs.delta = delta;
  cs.lambda_filler = theta - delta;
  an.counts_valid = true;

  if (!enforce_rules) return an;

  if (cs.lambda_filler < 0)
    add_violation(out, 0, "lambda-negative",
                  "cross blocks overshoot: Theta=" + std::to_string(theta) +
                      " < Delta=" + std::to_string(delta));
  if (spec.declared_filler_lambda &&
      *spec.declared_filler_lambda != cs.lambda_filler)
    add_violation(out, 0, "declared-lambda",
                  "spec declares filler lambda " +
                      std::to_string(*spec.declared_filler_lambda) +
                      " but Theta-Delta=" + std::to_string(cs.lambda_filler));

  if (cs.lambda_filler == 0 && spec.filler)
    add_violation(out, 0, "filler-present",
                  "Theta == Delta but a filler design was supplied");
  if (cs.lambda_filler > 0 && level == ValidationLevel::Full) {
    if (!spec.filler) {
      add_violation(out, 0, "filler-missing",
                    "Theta-Delta=" + std::to_string(cs.lambda_filler) +
                        " requires a filler design");
    } else {
      const Design& f = *spec.filler;
      if (f.v() != spec.v || f.k() != spec.k) {
        add_violation(out, 0, "filler-shape",
                      "filler must be a block-size-" + std::to_string(spec.k) +
                          " design on the ingredient points");
      } else {
        SimplicityReport sr = is_simple(f);
        if (!sr.simple)
          add_violation(out, 0, "filler-not-simple",
                        "filler repeats a block " +
                            std::to_string(sr.multiplicity) + " times");
        LambdaProfile fp = lambda_profile(f, 3);
        if (!fp.design_at(3))
          add_violation(out, 0, "filler-not-a-design",
                        "filler does not cover all triples evenly");
        else if (fp.lambda[3] != cs.lambda_filler)
          add_violation(out, 0, "filler-lambda",
                        "filler has lambda_3=" + std::to_string(fp.lambda[3]) +
                            ", construction needs " +
                            std::to_string(cs.lambda_filler));
      }
    }
  }
  return an;
}

}  // namespace

std::vector<Violation> validate_spec(const ConstructionSpec& spec,
                                     ValidationLevel level) {
  return analyze(spec, level, /*enforce_rules=*/true).violations;
}

CountingSummary compute_counts(const ConstructionSpec& spec) {
  Analysis an = analyze(spec, ValidationLevel::CountsOnly, true);
  if (!an.violations.empty()) {
    const Violation& v = an.violations.front();
    fail(ErrorCategory::Validation,
         "spec invalid (pair " + std::to_string(v.pair) + ", " + v.rule +
             "): " + v.detail);
  }
  return an.summary;
}

namespace {

void visit_with(const ConstructionSpec& spec, const Analysis& an,
                const std::function<void(const Point*, int, const BlockProvenance&)>& fn) {
  const int v = spec.v, k = spec.k;
  int buf_k = k;
  if (spec.filler) buf_k = std::max(buf_k, spec.filler->k());
  std::vector<Point> buf(static_cast<std::size_t>(buf_k));

  if (spec.filler) {
    const Design& f = *spec.filler;
    const int fk = f.k();
    for (std::size_t b = 0; b < f.block_count(); ++b)
      fn(f.block(b).data(), fk, {0, 0, 0, BlockType::Filler});
    for (std::size_t b = 0; b < f.block_count(); ++b) {
      auto blk = f.block(b);
      for (int p = 0; p < fk; ++p) buf[p] = static_cast<Point>(blk[p] + v);
      fn(buf.data(), fk, {0, 0, 0, BlockType::Filler});
    }
  }

  for (int h = 0; h < static_cast<int>(spec.pairs.size()); ++h) {
    const PairSpec& p = spec.pairs[h];
    const int w = static_cast<int>(p.left.w());
    const int kl = p.left.design.k(), kr = p.right.design.k();
    for (int i = 1; i <= w; ++i) {
      for (int j : annulus_members(w, p.epsilon, p.s, i)) {
        BlockProvenance pv{h + 1, i, j, BlockType::Cross};
        for (std::uint32_t a : p.left.classes[i - 1]) {
          auto A = p.left.design.block(a);
          std::copy(A.begin(), A.end(), buf.begin());
          for (std::uint32_t b : p.right.classes[j - 1]) {
            auto B = p.right.design.block(b);
            for (int q = 0; q < kr; ++q)
              buf[kl + q] = static_cast<Point>(B[q] + v);
            fn(buf.data(), k, pv);
          }
        }
        pv.type = BlockType::MirrorCross;
        for (std::uint32_t a : p.left.classes[i - 1]) {
          auto A = p.left.design.block(a);
          for (int q = 0; q < kl; ++q)
            buf[kr + q] = static_cast<Point>(A[q] + v);
          for (std::uint32_t b : p.right.classes[j - 1]) {
            auto B = p.right.design.block(b);
            std::copy(B.begin(), B.end(), buf.begin());
            fn(buf.data(), k, pv);
          }
        }
      }
    }
  }

  if (spec.half) {
    const HalfPair& hp = *spec.half;
    const int w = static_cast<int>(hp.design.w());
    const int kh = hp.design.design.k();
    const int idx = static_cast<int>(spec.pairs.size()) + 1;
    for (int i = 1; i <= w; ++i) {
      for (int j : annulus_members(w, hp.epsilon, hp.s, i)) {
        BlockProvenance pv{idx, i, j, BlockType::HalfCross};
        for (std::uint32_t a : hp.design.classes[i - 1]) {
          auto A = hp.design.design.block(a);
          std::copy(A.begin(), A.end(), buf.begin());
          for (std::uint32_t b : hp.design.classes[j - 1]) {
            auto B = hp.design.design.block(b);
            for (int q = 0; q < kh; ++q)
              buf[kh + q] = static_cast<Point>(B[q] + v);
            fn(buf.data(), k, pv);
          }
        }
      }
    }
  }
  (void)an;
}

Assembled materialize(const ConstructionSpec& spec, const Analysis& an,
                      bool check_identity) {
  const int k = spec.k;
  const int v2 = 2 * spec.v;
  std::size_t total = spec.filler ? 2 * spec.filler->block_count() : 0;
  for (std::size_t h = 0; h < spec.pairs.size(); ++h) {
    total += static_cast<std::size_t>(an.z[h]) * an.left[h].w * 2 *
             static_cast<std::size_t>(an.left[h].b) *
             static_cast<std::size_t>(an.right[h].b);
  }
  if (spec.half)
    total += static_cast<std::size_t>(an.z_half) * an.half.w *
             static_cast<std::size_t>(an.half.b) *
             static_cast<std::size_t>(an.half.b);

  // Raw + sorted copies of the flat points and provenance, plus sort keys.
  const std::size_t peak_bytes =
      total * (4 * sizeof(Point) * static_cast<std::size_t>(k) +
               2 * sizeof(BlockProvenance) + 16);
  if (peak_bytes > std::size_t{3} << 30)
    fail(ErrorCategory::Range,
         "materializing this instance needs about " +
             std::to_string(peak_bytes >> 20) + " MiB for " +
             std::to_string(total) +
             " blocks; use the counting interfaces instead");

  std::vector<Point> flat;
  flat.reserve(total * k);
  std::vector<BlockProvenance> prov;
  prov.reserve(total);
  visit_with(spec, an, [&](const Point* b, int kk, const BlockProvenance& pv) {
    flat.insert(flat.end(), b, b + kk);
    prov.push_back(pv);
  });
  if (prov.size() != total)
    fail(ErrorCategory::Internal, "emitted block count mismatch");

  if (check_identity) {
    // sum over blocks of C(k,3) equals Theta * C(2v,3)
    const Int lhs = checked_mul(static_cast<Int>(total), binomial(k, 3));
    const Int rhs = checked_mul(an.summary.theta, binomial(v2, 3));
    if (lhs != rhs)
      fail(ErrorCategory::Internal,
           "block count disagrees with Theta identity");
  }

  // Canonical sort, provenance carried along.
  const std::size_t n = prov.size();
  std::vector<Point> sorted_flat(flat.size());
  std::vector<BlockProvenance> sorted_prov(n);
  if (k <= 8 && v2 <= 256) {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t key = 0;
      for (int q = 0; q < k; ++q)
        key |= static_cast<std::uint64_t>(flat[i * k + q] & 0xff)
               << (8 * (7 - q));
      keyed[i] = {key, static_cast<std::uint32_t>(i)};
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 0; i < n; ++i) {
      for (int q = 0; q < k; ++q)
        sorted_flat[i * k + q] =
            static_cast<Point>((keyed[i].first >> (8 * (7 - q))) & 0xff);
      sorted_prov[i] = prov[keyed[i].second];
    }
  } else {
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::uint32_t x, std::uint32_t y) {
                       return std::memcmp(&flat[std::size_t{x} * k],
                                          &flat[std::size_t{y} * k],
                                          sizeof(Point) * k) < 0;
                     });
    for (std::size_t i = 0; i < n; ++i) {
      std::memcpy(&sorted_flat[i * k], &flat[std::size_t{idx[i]} * k],
                  sizeof(Point) * k);
      sorted_prov[i] = prov[idx[i]];
    }
  }
  return Assembled{Design::from_flat(v2, k, std::move(sorted_flat), true),
                   std::move(sorted_prov), an.summary};
}

Assembled assemble_impl(const ConstructionSpec& spec, bool enforce) {
  Analysis an = analyze(spec,
                        enforce ? ValidationLevel::Full
                                : ValidationLevel::CountsOnly,
                        enforce);
  if (enforce && !an.violations.empty()) {
    const Violation& v = an.violations.front();
    fail(ErrorCategory::Validation,
         "spec invalid (pair " + std::to_string(v.pair) + ", " + v.rule +
             "): " + v.detail + (an.violations.size() > 1
                                     ? " (+" +
                                           std::to_string(an.violations.size() - 1) +
                                           " more)"
                                     : ""));
  }
  if (!an.counts_valid)
    fail(ErrorCategory::Ingredient,
         "ingredients do not verify; cannot assemble: " +
             (an.violations.empty() ? std::string("unknown")
                                    : an.violations.front().detail));
  return materialize(spec, an, enforce);
}

}  // namespace

Assembled assemble(const ConstructionSpec& spec) {
  return assemble_impl(spec, true);
}

Assembled assemble_unvalidated(const ConstructionSpec& spec) {
  return assemble_impl(spec, false);
}

void assemble_visit(
    const ConstructionSpec& spec,
    const std::function<void(const Point*, int, const BlockProvenance&)>& fn) {
  Analysis an = analyze(spec, ValidationLevel::CountsOnly, false);
  if (!an.counts_valid)
    fail(ErrorCategory::Ingredient, "ingredients do not verify");
  visit_with(spec, an, fn);
}

VerifiedConstruction construct_and_verify(const ConstructionSpec& spec) {
  VerifiedConstruction vc{assemble(spec), {}};
  vc.profile = lambda_profile(vc.assembled.design, 3);
  if (!vc.profile.design_at(3))
    fail(ErrorCategory::Internal,
         "constructed blocks do not cover all triples evenly");
  if (vc.profile.lambda[3] != vc.assembled.counts.theta)
    fail(ErrorCategory::Internal,
         "constructed lambda_3=" + std::to_string(vc.profile.lambda[3]) +
             " but counting said Theta=" +
             std::to_string(vc.assembled.counts.theta));
  SimplicityReport sr = is_simple(vc.assembled.design);
  if (!sr.simple)
    fail(ErrorCategory::Internal,
         "constructed design repeats a block (multiplicity " +
             std::to_string(sr.multiplicity) + ")");
  return vc;
}

// ---------------------------------------------------------------------------
// TripleCounter

namespace {

// Occurrence indexes for one resolved ingredient: which blocks contain a
// point / a pair, and which class each block belongs to.
struct SideIndex {
  const ResolvedDesign* rd = nullptr;
  int v = 0, k = 0, w = 0;
  Int b = 0;
  std::vector<std::uint32_t> class_of;
  std::vector<std::uint32_t> pt_off, pt_blk;      // CSR point -> blocks
  std::vector<std::uint32_t> pair_off, pair_blk;  // CSR pair -> blocks

  static std::size_t pair_rank(int a, int bb) {  // a < bb, colex
    return static_cast<std::size_t>(bb) * (bb - 1) / 2 + a;
  }

  void build(const ResolvedDesign& r) {
    rd = &r;
    v = r.design.v();
    k = r.design.k();
    w = static_cast<int>(r.w());
    b = static_cast<Int>(r.classes[0].size());
    const std::size_t n = r.design.block_count();
    class_of.assign(n, 0);
    for (std::size_t c = 0; c < r.w(); ++c) {
      for (std::uint32_t x : r.classes[c])
        class_of[x] = static_cast<std::uint32_t>(c);
    }
    pt_off.assign(v + 1, 0);
    const std::size_t npairs = static_cast<std::size_t>(v) * (v - 1) / 2;
    pair_off.assign(npairs + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto blk = r.design.block(i);
      for (int x = 0; x < k; ++x) {
        pt_off[blk[x] + 1]++;
        for (int y = x + 1; y < k; ++y) pair_off[pair_rank(blk[x], blk[y]) + 1]++;
      }
    }
    for (std::size_t i = 1; i < pt_off.size(); ++i) pt_off[i] += pt_off[i - 1];
    for (std::size_t i = 1; i < pair_off.size(); ++i)
      pair_off[i] += pair_off[i - 1];
    pt_blk.resize(pt_off.back());
    pair_blk.resize(pair_off.back());
    std::vector<std::uint32_t> pt_cur(pt_off.begin(), pt_off.end() - 1);
    std::vector<std::uint32_t> pair_cur(pair_off.begin(), pair_off.end() - 1);
    for (std::size_t i = 0; i < n; ++i) {
      auto blk = r.design.block(i);
      for (int x = 0; x < k; ++x) {
        pt_blk[pt_cur[blk[x]]++] = static_cast<std::uint32_t>(i);
        for (int y = x + 1; y < k; ++y)
          pair_blk[pair_cur[pair_rank(blk[x], blk[y])]++] =
              static_cast<std::uint32_t>(i);
      }
    }
  }

  // Per-class counts of blocks containing the subset (size 0..3).
  void counts(const Block& u, std::vector<Int>& out) const {
    out.assign(w, 0);
    switch (u.size()) {
      case 0:
        std::fill(out.begin(), out.end(), b);
        return;
      case 1: {
        for (std::uint32_t i = pt_off[u[0]]; i < pt_off[u[0] + 1]; ++i)
          out[class_of[pt_blk[i]]]++;
        return;
      }
      case 2: {
        const std::size_t pr = pair_rank(u[0], u[1]);
        for (std::uint32_t i = pair_off[pr]; i < pair_off[pr + 1]; ++i)
          out[class_of[pair_blk[i]]]++;
        return;
      }
      case 3: {
        if (u.size() > static_cast<std::size_t>(k)) return;
        const std::size_t pr = pair_rank(u[0], u[1]);
        for (std::uint32_t i = pair_off[pr]; i < pair_off[pr + 1]; ++i) {
          auto blk = rd->design.block(pair_blk[i]);
          if (std::find(blk.begin(), blk.end(), u[2]) != blk.end())
            out[class_of[pair_blk[i]]]++;
        }
        return;
      }
      default:
        fail(ErrorCategory::Range, "subset too large");
    }
  }
};

// Sum of q over the annulus of each class: W[i] = sum of q[j] over
// epsilon <= d(i+1, j+1) <= s (0-based storage).
void annulus_sums(const std::vector<Int>& q, int eps, int s,
                  std::vector<Int>& out) {
  const int w = static_cast<int>(q.size());
  out.assign(w, 0);
  if (2 * s + 1 >= w) {
    Int tot = 0;
    for (Int x : q) tot += x;
    for (int i = 0; i < w; ++i) out[i] = tot;
  } else {
    std::vector<Int> pre(w + 1, 0);
    for (int i = 0; i < w; ++i) pre[i + 1] = pre[i] + q[i];
    for (int i = 0; i < w; ++i) {
      int lo = i - s, hi = i + s;
      if (lo < 0) {
        out[i] = (pre[hi + 1] - pre[0]) + (pre[w] - pre[lo + w]);
      } else if (hi >= w) {
        out[i] = (pre[w] - pre[lo]) + (pre[hi - w + 1] - pre[0]);
      } else {
        out[i] = pre[hi + 1] - pre[lo];
      }
    }
  }
  if (eps == 1) {
    for (int i = 0; i < w; ++i) out[i] -= q[i];
  }
}

}  // namespace

struct TripleCounter::Impl {
  const ConstructionSpec* spec;
  std::vector<SideIndex> left, right;
  SideIndex half;
  bool has_half = false;
};

TripleCounter::TripleCounter(const ConstructionSpec& spec)
    : impl_(new Impl{&spec, {}, {}, {}, false}) {
  impl_->left.resize(spec.pairs.size());
  impl_->right.resize(spec.pairs.size());
  for (std::size_t h = 0; h < spec.pairs.size(); ++h) {
    impl_->left[h].build(spec.pairs[h].left);
    impl_->right[h].build(spec.pairs[h].right);
  }
  if (spec.half) {
    impl_->half.build(spec.half->design);
    impl_->has_half = true;
  }
}

TripleCounter::~TripleCounter() { delete impl_; }

TripleCoverage TripleCounter::count(const Block& triple) const {
  const ConstructionSpec& spec = *impl_->spec;
  const int v = spec.v;
  if (triple.size() != 3 || triple[0] >= triple[1] || triple[1] >= triple[2] ||
      triple[2] >= 2 * v)
    fail(ErrorCategory::Range, "need a sorted 3-subset of the doubled points");
  Block s_lo, s_hi;  // untranslated halves
  for (Point p : triple)
    (p < v ? s_lo : s_hi).push_back(p < v ? p : static_cast<Point>(p - v));

  TripleCoverage cov;
  cov.cross.assign(spec.pairs.size(), 0);

  if (spec.filler) {
    const Design& f = *spec.filler;
    const Block& side = s_hi.empty() ? s_lo : s_hi;
    if (s_lo.empty() || s_hi.empty()) {
      for (std::size_t i = 0; i < f.block_count(); ++i) {
        auto blk = f.block(i);
        bool all = true;
        for (Point p : side)
          all = all && std::find(blk.begin(), blk.end(), p) != blk.end();
        cov.filler += all ? 1 : 0;
      }
    }
  }

  std::vector<Int> cl, cr, wsum;
  for (std::size_t h = 0; h < spec.pairs.size(); ++h) {
    const PairSpec& p = spec.pairs[h];
    const SideIndex &L = impl_->left[h], &R = impl_->right[h];
    Int c = 0;
    // left-class blocks hold s_lo, translated right-class blocks hold s_hi
    if (s_lo.size() <= static_cast<std::size_t>(L.k) &&
        s_hi.size() <= static_cast<std::size_t>(R.k)) {
      L.counts(s_lo, cl);
      R.counts(s_hi, cr);
      annulus_sums(cr, p.epsilon, p.s, wsum);
      for (int i = 0; i < L.w; ++i)
        c = checked_add(c, checked_mul(cl[i], wsum[i]));
    }
    // mirrored: translated left holds s_hi, right holds s_lo
    if (s_hi.size() <= static_cast<std::size_t>(L.k) &&
        s_lo.size() <= static_cast<std::size_t>(R.k)) {
      L.counts(s_hi, cl);
      R.counts(s_lo, cr);
      annulus_sums(cr, p.epsilon, p.s, wsum);
      for (int i = 0; i < L.w; ++i)
        c = checked_add(c, checked_mul(cl[i], wsum[i]));
    }
    cov.cross[h] = c;
  }

  if (impl_->has_half) {
    const HalfPair& hp = *spec.half;
    const SideIndex& H = impl_->half;
    if (s_lo.size() <= static_cast<std::size_t>(H.k) &&
        s_hi.size() <= static_cast<std::size_t>(H.k)) {
      H.counts(s_lo, cl);
      H.counts(s_hi, cr);
      annulus_sums(cr, hp.epsilon, hp.s, wsum);
      for (int i = 0; i < H.w; ++i)
        cov.half_cross = checked_add(cov.half_cross, checked_mul(cl[i], wsum[i]));
    }
  }
  return cov;
}

}  // namespace triplex
