#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "triplex/design.hpp"
#include "triplex/resolution.hpp"

namespace triplex {

// Annulus size: the number of classes j with epsilon <= d(i,j) <= s, the
// same for every i. Requires 0/1 epsilon and epsilon <= s <= floor(w/2).
Int annulus_width(int w, int epsilon, int s);

// Canonical (epsilon, s) realizing a requested annulus size 1 <= z <= w.
std::pair<int, int> choose_annulus(int w, Int z);

// One ingredient pair (left block size + right block size = target k),
// with the annulus parameters governing which class pairs are crossed.
struct PairSpec {
  ResolvedDesign left, right;
  SimpleCore left_core, right_core;  // concatenation metadata (a=1: simple)
  int epsilon = 0, s = 0;
};

// The half-size pair of mode II: one simple design plays both roles.
struct HalfPair {
  ResolvedDesign design;  // block size k/2
  int epsilon = 0, s = 0;
};

enum class Mode { I, II };

struct ConstructionSpec {
  int v = 0, k = 0;
  Mode mode = Mode::I;
  std::vector<PairSpec> pairs;  // ordered by increasing left block size
  std::optional<HalfPair> half;
  std::optional<Design> filler;  // simple 3-(v,k,Lambda) when Lambda > 0
  // What the filler's lambda must be, when stated by the originating family.
  // With no loaded filler this makes counts-only validation possible.
  std::optional<Int> declared_filler_lambda;
};

struct Violation {
  int pair = 0;  // 1-based pair index; half pair = pairs.size()+1; 0 = global
  std::string rule;
  std::string detail;
};

enum class ValidationLevel {
  CountsOnly,  // everything except filler presence/content
  Full,
};

std::vector<Violation> validate_spec(const ConstructionSpec& spec,
                                     ValidationLevel level = ValidationLevel::Full);

struct PairCounts {
  int h = 0;  // 1-based; the half pair comes last
  bool half = false;
  int k_left = 0, k_right = 0;
  Int w = 0, z = 0;
  Int b_left = 0, b_right = 0;      // blocks per class
  Int u_left = 0, u_right = 0;      // per-class point degree (sigma)
  Int lam_left = 0, lam_right = 0;  // 3-subset coverage (0 for block size 2)
  Int lam2_left = 0, lam2_right = 0;
};

struct CountingSummary {
  int v = 0, k = 0;
  Mode mode = Mode::I;
  std::vector<PairCounts> pairs;
  Int theta = 0;   // lambda of the constructed 3-design
  Int delta = 0;   // the part the cross blocks cannot cover
  Int lambda_filler = 0;  // theta - delta
};

// Per-pair quantities measured from the actual ingredient block sets, and
// the resulting exact Theta/Delta/Lambda. Throws on any validation failure
// (counts-only level).
CountingSummary compute_counts(const ConstructionSpec& spec);

// Which ingredient produced a block of the output.
enum class BlockType : std::uint8_t {
  Filler = 1,       // filler block on the original points
  Cross = 2,        // left class block + translated right class block
  MirrorCross = 3,  // translated left class block + right class block
  HalfCross = 4,    // half-pair block + translated half-pair block
};

struct BlockProvenance {
  std::int32_t pair = 0;  // 1-based pair (half = last); 0 for filler blocks
  std::int32_t i = 0, j = 0;  // 1-based class labels; 0 for filler blocks
  BlockType type = BlockType::Filler;
};

struct Assembled {
  Design design;                       // canonically sorted, on 2v points
  std::vector<BlockProvenance> prov;   // parallel to design block order
  CountingSummary counts;
};

// Full validation, then emits every block with provenance and sorts
// canonically. The output block count must equal Theta*C(2v,3)/C(k,3).
Assembled assemble(const ConstructionSpec& spec);

// Assembly without the rule checks, for negative experiments (e.g. watching
// duplicate blocks appear once the annulus outgrows a concatenation period).
// Ingredients must still verify as resolutions so counting is possible.
Assembled assemble_unvalidated(const ConstructionSpec& spec);

// Streams blocks in generation order (filler, cross cells pair by pair, half
// cells) without materializing the design.
void assemble_visit(
    const ConstructionSpec& spec,
    const std::function<void(const Point*, int, const BlockProvenance&)>& fn);

struct VerifiedConstruction {
  Assembled assembled;
  LambdaProfile profile;  // t = 3, uniform, lambda_3 == theta
};

// assemble + exhaustive triple count + simplicity; throws Internal if the
// output fails any claimed property.
VerifiedConstruction construct_and_verify(const ConstructionSpec& spec);

// Exact per-category coverage of one 3-subset of the doubled point set,
// counted against the actual ingredient classes (annulus sums of per-class
// containment counts), not against closed formulas.
struct TripleCoverage {
  Int filler = 0;            // both filler orientations
  std::vector<Int> cross;    // per full pair: Cross + MirrorCross blocks
  Int half_cross = 0;
  Int total() const {
    Int t = filler + half_cross;
    for (Int c : cross) t += c;
    return t;
  }
};

// Prepares point/pair occurrence indexes once, then answers coverage
// queries in ~O(lambda_2 + w) per triple.
class TripleCounter {
 public:
  explicit TripleCounter(const ConstructionSpec& spec);
  ~TripleCounter();
  TripleCounter(const TripleCounter&) = delete;
  TripleCounter& operator=(const TripleCounter&) = delete;

  TripleCoverage count(const Block& triple) const;  // triple on 0..2v-1

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace triplex
