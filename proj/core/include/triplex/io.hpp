#pragma once

#include <optional>
#include <string>
#include <vector>

#include "triplex/construction.hpp"
#include "triplex/resolution.hpp"

namespace triplex {

// Declared metadata the structured format may carry; every declared value
// is re-verified by counting when the file is read.
struct DesignFileMeta {
  std::optional<int> t;
  std::optional<Int> lambda;  // lambda_t for the declared t
  std::optional<bool> simple;
};

// Text format: header line "v k n_blocks", then one block per line as
// space-separated ascending point labels, ASCII decimal, LF endings.
void write_design_text(const std::string& path, const Design& d);

// Structured format: {"format":"triplex-design-1","v":..,"k":..,
//                     "blocks":[[..],..]} plus optional "t"/"lambda"/"simple".
void write_design_json(const std::string& path, const Design& d,
                       const DesignFileMeta& meta = {});

// Detects the format from the first byte. Blocks are canonicalized on read;
// malformed records report their line number.
Design read_design(const std::string& path);

// Resolution files: the design part in class-major block order plus a
// classes sidecar ("sigma w" header, then one class start offset per line).
void write_resolution(const std::string& design_path,
                      const std::string& classes_path,
                      const ResolvedDesign& rd);
ResolvedDesign read_resolution(const std::string& design_path,
                               const std::string& classes_path);

// Provenance sidecar: counting summary plus the per-block (pair, i, j, type)
// tuples, parallel to the canonical block order of the design file.
struct ProvenanceFile {
  std::string design_file;
  CountingSummary counts;
  std::vector<BlockProvenance> prov;
};
void write_provenance(const std::string& path, const std::string& design_file,
                      const Assembled& assembled);
ProvenanceFile read_provenance(const std::string& path);

}  // namespace triplex
