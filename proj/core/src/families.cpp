#include "triplex/families.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "triplex/error.hpp"
#include "triplex/resolution.hpp"

namespace triplex {

namespace {

Int ipow2(int f) {
  if (f < 0 || f > 62) fail(ErrorCategory::Range, "2^f out of range");
  return Int{1} << f;
}

std::string istr(Int x) { return std::to_string(x); }

PairSpec make_pair(ResolvedDesign left, SimpleCore lc, ResolvedDesign right,
                   SimpleCore rc, Int z) {
  auto [eps, s] = choose_annulus(static_cast<int>(left.w()), z);
  return PairSpec{std::move(left), std::move(right), lc, rc, eps, s};
}

HalfPair make_half(ResolvedDesign d, Int z) {
  auto [eps, s] = choose_annulus(static_cast<int>(d.w()), z);
  return HalfPair{std::move(d), eps, s};
}

SimpleCore whole_core(const ResolvedDesign& d) {
  return SimpleCore{static_cast<Int>(d.w()), 1};
}

Int exact_div(Int num, Int den, const char* what) {
  if (den == 0 || num % den != 0)
    fail(ErrorCategory::Congruence, std::string(what) + " is not an integer (" +
                                        istr(num) + "/" + istr(den) + ")");
  return num / den;
}

}  // namespace

ABPair compute_AB(int v, int k) {
  if (k < 3) fail(ErrorCategory::Range, "requires k >= 3, got k=" + istr(k));
  if (std::gcd(v, 2 * k) != 1)
    fail(ErrorCategory::Congruence,
         "requires gcd(v,2k)=1, got gcd(" + istr(v) + "," + istr(2 * k) +
             ")=" + istr(std::gcd(v, 2 * k)));
  if (std::gcd(v, k + 1) != 1)
    fail(ErrorCategory::Congruence,
         "requires gcd(v,k+1)=1, got gcd(" + istr(v) + "," + istr(k + 1) +
             ")=" + istr(std::gcd(v, k + 1)));

  Rational ra = Rational::of(binomial(v - 3, 2 * k - 3), 1)
                    .times(checked_add(checked_mul(v, 4 * Int{k} * k - 10 * k + 2),
                                       8 * Int{k}))
                    .over(Int{2 * k - 2} * (2 * k - 1));
  if (!ra.integral())
    fail(ErrorCategory::Congruence, "A evaluates to " + ra.str() +
                                        ", not an integer, at v=" + istr(v) +
                                        " k=" + istr(k));
  Rational rb = Rational::of(2 * binomial(v - 3, k - 2), 1)
                    .times(v - k - 1)
                    .over(k - 1);
  if (!rb.integral())
    fail(ErrorCategory::Congruence, "B evaluates to " + rb.str() +
                                        ", not an integer, at v=" + istr(v) +
                                        " k=" + istr(k));
  if (rb.num <= 0)
    fail(ErrorCategory::Range, "B=" + istr(rb.num) + " must be positive");
  return ABPair{ra.num, rb.num, Rational::of(ra.num, rb.num)};
}

std::vector<std::pair<Int, Int>> solve_z(Int A, Int B, Int z1_max, Int z2_max) {
  if (A <= 0 || B <= 0)
    fail(ErrorCategory::Range, "solve_z requires A, B > 0");
  const Int g = std::gcd(A, B);
  const Int step1 = B / g, step2 = A / g;
  std::vector<std::pair<Int, Int>> out;
  for (Int t = 1;; ++t) {
    const Int z1 = checked_mul(step1, t), z2 = checked_mul(step2, t);
    if (z1 > z1_max || z2 > z2_max) break;
    out.emplace_back(z1, z2);
  }
  return out;
}

ConstructionSpec family_thm_3_1(int v) {
  if (v % 6 != 2)
    fail(ErrorCategory::Congruence,
         "requires v == 2 (mod 6), got v=" + istr(v));
  if (v <= 5) fail(ErrorCategory::Range, "requires v > 5, got v=" + istr(v));

  const Int a1 = (v - 2) / 6;
  auto [d1, core1] = concatenate_resolution(round_robin_one_factorization(v), a1);
  ResolvedDesign d2 = cyclic_orbit_resolution(v, 3);
  SimpleCore core2 = whole_core(d2);

  ConstructionSpec spec;
  spec.v = v;
  spec.k = 5;
  spec.mode = Mode::I;
  spec.pairs.push_back(make_pair(std::move(d1), core1, std::move(d2), core2,
                                 (v - 4) / 2));
  spec.filler = complete_design(v, 5);
  spec.declared_filler_lambda = binomial(v - 3, 2);
  return spec;
}

ConstructionSpec family_thm_3_2(int f, std::optional<Design> filler) {
  if (f <= 1 || std::gcd(f, 6) != 1)
    fail(ErrorCategory::Congruence,
         "requires gcd(f,6)=1 and f > 1, got f=" + istr(f));
  const Int v64 = checked_add(ipow2(f), 1);
  if (v64 > 255)
    fail(ErrorCategory::Range,
         "2^f+1 = " + istr(v64) + " exceeds the generator limit of 255 points");
  const int v = static_cast<int>(v64);

  auto [d1, core1] = concatenate_resolution(cyclic_orbit_resolution(v, 2),
                                            Int{v} - 2);
  ResolvedDesign d2 = baranyai_parallelism(v, 3);
  SimpleCore core2 = whole_core(d2);

  ConstructionSpec spec;
  spec.v = v;
  spec.k = 5;
  spec.mode = Mode::I;
  spec.pairs.push_back(make_pair(std::move(d1), core1, std::move(d2), core2, 5));
  spec.declared_filler_lambda = 10 * (ipow2(f) - 2);
  if (filler) spec.filler = std::move(*filler);
  return spec;
}

ConstructionSpec family_thm_3_3(int v, Int m) {
  const int r = v % 60;
  if (r != 4 && r != 8 && r != 28 && r != 32 && r != 44 && r != 52)
    fail(ErrorCategory::Congruence,
         "requires v == 4, 8, 28, 32, 44, or 52 (mod 60), got v=" + istr(v));
  if (m < 1 || 30 * m > v - 1)
    fail(ErrorCategory::Range, "requires 1 <= m <= (v-1)/30 = " +
                                   Rational::of(v - 1, 30).str() +
                                   ", got m=" + istr(m));

  const Int a1 = exact_div(binomial(v - 2, 3), 20, "a1 = C(v-2,3)/20");
  auto [d1, core1] =
      concatenate_resolution(round_robin_one_factorization(v), a1);
  ResolvedDesign d3 = cyclic_orbit_resolution(v, 5);
  SimpleCore core3 = whole_core(d3);
  auto [d2, core2] =
      concatenate_resolution(cyclic_orbit_resolution(v, 3), Int{v} - 3);
  ResolvedDesign d4 = baranyai_parallelism(v, 4);
  SimpleCore core4 = whole_core(d4);

  ConstructionSpec spec;
  spec.v = v;
  spec.k = 7;
  spec.mode = Mode::I;
  spec.pairs.push_back(
      make_pair(std::move(d1), core1, std::move(d3), core3, 30 * m));
  spec.pairs.push_back(
      make_pair(std::move(d2), core2, std::move(d4), core4, (v + 10) * m));
  spec.declared_filler_lambda = 0;
  return spec;
}

ConstructionSpec family_thm_3_4(int f, Int lam, std::optional<Design> filler) {
  if (f <= 1 || std::gcd(f, 6) != 1)
    fail(ErrorCategory::Congruence,
         "requires gcd(f,6)=1 and f > 1, got f=" + istr(f));
  static const Int admitted[] = {10, 60, 70, 90, 100, 150, 160};
  if (std::find(std::begin(admitted), std::end(admitted), lam) ==
      std::end(admitted))
    fail(ErrorCategory::Range,
         "lam must lie in {10,60,70,90,100,150,160}, got lam=" + istr(lam));
  const Int v64 = checked_add(ipow2(f), 1);
  if (v64 > 256)
    fail(ErrorCategory::Range,
         "2^f+1 = " + istr(v64) + " exceeds the generator limit of 256 points");
  const int v = static_cast<int>(v64);

  ConstructionSpec spec;
  spec.v = v;
  spec.k = 6;
  spec.mode = Mode::II;
  spec.half = make_half(baranyai_parallelism(v, 3), lam / 2);
  spec.declared_filler_lambda = lam * (ipow2(f) - 2) / 3;
  if (filler) spec.filler = std::move(*filler);
  return spec;
}

ConstructionSpec family_gen_2k(int v, int k, Design filler) {
  if (k < 2) fail(ErrorCategory::Range, "requires k >= 2, got k=" + istr(k));
  if (std::gcd(v, k) != 1)
    fail(ErrorCategory::Congruence,
         "requires gcd(v,k)=1, got gcd(" + istr(v) + "," + istr(k) +
             ")=" + istr(std::gcd(v, k)));
  if (v <= 2 * k)
    fail(ErrorCategory::Range,
         "requires v > 2k, got v=" + istr(v) + " k=" + istr(k));
  if (filler.v() != v || filler.k() != 2 * k)
    fail(ErrorCategory::Ingredient,
         "filler must be a design on " + istr(v) + " points with block size " +
             istr(2 * k) + ", got v=" + istr(filler.v()) +
             " k=" + istr(filler.k()));
  LambdaProfile prof = lambda_profile(filler, 3);
  if (!prof.design_at(3))
    fail(ErrorCategory::Ingredient,
         "filler does not cover all triples evenly (saw " +
             istr(prof.witness[3].count_min) + " and " +
             istr(prof.witness[3].count_max) + ")");
  SimplicityReport sr = is_simple(filler);
  if (!sr.simple)
    fail(ErrorCategory::Ingredient, "filler repeats a block " +
                                        istr(sr.multiplicity) + " times");
  const Int Lambda = prof.lambda[3];
  const Int m =
      exact_div(Lambda, 2 * binomial(v - 3, k - 2), "m = Lambda/(2 C(v-3,k-2))");
  const Int w = binomial(v - 1, k - 1) / k;
  if (m < 1 || m > w)
    fail(ErrorCategory::Range, "requires 1 <= m <= C(v-1,k-1)/k = " + istr(w) +
                                   ", got m=" + istr(m));

  ConstructionSpec spec;
  spec.v = v;
  spec.k = 2 * k;
  spec.mode = Mode::II;
  spec.half = make_half(cyclic_orbit_resolution(v, k), m);
  spec.declared_filler_lambda = Lambda;
  spec.filler = std::move(filler);
  return spec;
}

ConstructionSpec family_cor_2k(int v, int k, bool materialize_filler) {
  bool ok = false;
  std::string cond;
  switch (k) {
    case 3: {
      const int r = v % 12;
      ok = r == 1 || r == 4 || r == 5 || r == 8;
      cond = "v == 1, 4, 5, or 8 (mod 12)";
      break;
    }
    case 4: {
      const int r = v % 20;
      ok = r == 1 || r == 5 || r == 7 || r == 11 || r == 15 || r == 17;
      cond = "v == 1, 5, 7, 11, 15, or 17 (mod 20)";
      break;
    }
    case 5: {
      const int r8 = v % 8, r7 = v % 7;
      ok = std::gcd(v, 5) == 1 && (r8 == 0 || r8 == 1 || r8 == 6 || r8 == 7) &&
           (r7 == 0 || r7 == 1 || r7 == 2 || r7 == 6);
      cond = "gcd(v,5)=1, v == 0,1,6,7 (mod 8), and v == 0,1,2,6 (mod 7)";
      break;
    }
    default:
      fail(ErrorCategory::Range, "k must be 3, 4, or 5, got k=" + istr(k));
  }
  if (!ok)
    fail(ErrorCategory::Congruence,
         "requires " + cond + ", got v=" + istr(v));
  if (v <= 2 * k)
    fail(ErrorCategory::Range,
         "requires v > 2k, got v=" + istr(v) + " k=" + istr(k));

  if (materialize_filler)
    return family_gen_2k(v, k, complete_design(v, 2 * k));

  const Int Lambda = binomial(v - 3, 2 * k - 3);
  const Int m =
      exact_div(Lambda, 2 * binomial(v - 3, k - 2), "m = Lambda/(2 C(v-3,k-2))");
  const Int w = binomial(v - 1, k - 1) / k;
  if (m < 1 || m > w)
    fail(ErrorCategory::Range, "requires 1 <= m <= C(v-1,k-1)/k = " + istr(w) +
                                   ", got m=" + istr(m));
  ConstructionSpec spec;
  spec.v = v;
  spec.k = 2 * k;
  spec.mode = Mode::II;
  spec.half = make_half(cyclic_orbit_resolution(v, k), m);
  spec.declared_filler_lambda = Lambda;
  return spec;
}

ConstructionSpec family_thm_AB(int v, int k, Int z1) {
  const ABPair ab = compute_AB(v, k);
  if (v <= 2 * k)
    fail(ErrorCategory::Range,
         "requires v > 2k, got v=" + istr(v) + " k=" + istr(k));
  if (ab.A <= 0)
    fail(ErrorCategory::Range,
         "A=" + istr(ab.A) + " leaves no room for z2 >= 1");
  if (ab.A % ab.B != 0)
    fail(ErrorCategory::Congruence,
         "A/B = " + ab.ratio.str() + " is not an integer at v=" + istr(v) +
             " k=" + istr(k));
  const Int ratio = ab.A / ab.B;
  if (z1 < 1 || 2 * z1 > v - 1)
    fail(ErrorCategory::Range,
         "requires 1 <= z1 <= (v-1)/2 = " + istr((v - 1) / 2) +
             ", got z1=" + istr(z1));
  const Int z2 = checked_mul(z1, ratio);
  const Int w_half = binomial(v - 1, k) / (k + 1);
  if (z2 > w_half)
    fail(ErrorCategory::Range, "z2 = z1*A/B = " + istr(z2) +
                                   " exceeds C(v-1,k)/(k+1) = " + istr(w_half));
  const Int a1 = exact_div(binomial(v - 2, 2 * k - 2), Int{k} * (2 * k - 1),
                           "a1 = C(v-2,2k-2)/(k(2k-1))");

  auto [d1, core1] =
      concatenate_resolution(cyclic_orbit_resolution(v, 2), a1);
  ResolvedDesign d2 = cyclic_orbit_resolution(v, 2 * k);
  SimpleCore core2 = whole_core(d2);

  ConstructionSpec spec;
  spec.v = v;
  spec.k = 2 * (k + 1);
  spec.mode = Mode::II;
  spec.pairs.push_back(make_pair(std::move(d1), core1, std::move(d2), core2, z1));
  spec.half = make_half(cyclic_orbit_resolution(v, k + 1), z2);
  spec.declared_filler_lambda = 0;
  return spec;
}

ConstructionSpec family_cor_AB(int v, int k, Int z1) {
  if (k == 3) {
    const int r = v % 60;
    if (r != 5 && r != 17 && r != 35 && r != 47)
      fail(ErrorCategory::Congruence,
           "requires v == 5, 17, 35, or 47 (mod 60), got v=" + istr(v));
  } else if (k == 4) {
    const int r = v % 280;
    static const int admitted[] = {7, 23, 63, 111, 167, 191, 223, 231, 247};
    if (std::find(std::begin(admitted), std::end(admitted), r) ==
        std::end(admitted))
      fail(ErrorCategory::Congruence,
           "requires v == 7, 23, 63, 111, 167, 191, 223, 231, or 247 "
           "(mod 280), got v=" +
               istr(v));
  } else {
    fail(ErrorCategory::Range, "k must be 3 or 4, got k=" + istr(k));
  }
  return family_thm_AB(v, k, z1);
}

}  // namespace triplex
