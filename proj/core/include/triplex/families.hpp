#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "triplex/construction.hpp"

namespace triplex {

// The coefficients of the balance equation  B*z2 - A*z1 = 0  for the
// two-ingredient even-block-size family; both are exact.
struct ABPair {
  Int A = 0;
  Int B = 0;
  Rational ratio;  // A/B, reduced
};

ABPair compute_AB(int v, int k);

// All positive solutions (z1, z2) of A*z1 == B*z2 with z1 <= z1_max and
// z2 <= z2_max, ascending. Steps through multiples of (B/g, A/g), g=gcd(A,B).
std::vector<std::pair<Int, Int>> solve_z(Int A, Int B, Int z1_max, Int z2_max);

// Parameterized spec builders. Each validates its admissibility conditions
// (congruences, ranges, divisibility) and fails with a message naming the
// violated condition. Fillers passed in are attached, never synthesized,
// except where a family is defined by the complete design.

// k=5 family on doubled points, v == 2 (mod 6): one-factored pairs plus
// orbit-resolved triples, complete k=5 filler.
ConstructionSpec family_thm_3_1(int v);

// k=5 family at v = 2^f + 1, gcd(f,6)=1: orbit-resolved pairs plus a
// Baranyai parallelism on triples; the filler (a simple 3-(v,5,10(2^f-2))
// design) comes from the caller. Omitting it leaves a counts-only spec.
ConstructionSpec family_thm_3_2(int f, std::optional<Design> filler);

// k=7 family, v == 4,8,28,32,44,52 (mod 60), multiplier 1 <= m <= (v-1)/30:
// two pairs (2+5 and 3+4), no filler (the cross blocks balance exactly).
ConstructionSpec family_thm_3_3(int v, Int m);

// k=6 half-pair family at v = 2^f + 1: Baranyai triples against themselves,
// caller-provided filler verifying as 3-(v,6,lam(2^f-2)/3),
// lam in {10,60,70,90,100,150,160}.
ConstructionSpec family_thm_3_4(int f, Int lam, std::optional<Design> filler);

// Even-block-size doubling: half pair = orbit-resolved complete k-subsets,
// annulus size m = lambda3(filler)/(2*C(v-3,k-2)); filler is any simple
// 3-(v,2k,Lambda) design making m a positive integer within range.
ConstructionSpec family_gen_2k(int v, int k, Design filler);

// The same with the complete 3-(v,2k,C(v-3,2k-3)) design as filler;
// materialize=false keeps the spec counts-only (declared filler lambda,
// no block storage) for parameter ranges where the filler is huge.
ConstructionSpec family_cor_2k(int v, int k, bool materialize_filler);

// Two-ingredient family with block sizes 2 and 2k plus half pair k+1 on
// 2(k+1)-subsets; z2 = z1 * A/B balances the counts exactly (no filler).
ConstructionSpec family_thm_AB(int v, int k, Int z1);

// Residue-restricted instances of the above (k=3: v == 5,17,35,47 mod 60;
// k=4: v == 7,23,63,111,167,191,223,231,247 mod 280).
ConstructionSpec family_cor_AB(int v, int k, Int z1);

}  // namespace triplex
