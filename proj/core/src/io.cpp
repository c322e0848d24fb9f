#include "triplex/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "triplex/error.hpp"

namespace triplex {

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in.good() && !in.eof()) fail(ErrorCategory::Io, "cannot read " + path);
  return std::move(ss).str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCategory::Io, "cannot open " + path + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out.good()) fail(ErrorCategory::Io, "cannot write " + path);
}

// Splits text into lines and parses each as whitespace-separated integers.
// Reports 1-based line numbers on any malformed record.
class LineParser {
 public:
  LineParser(const std::string& path, std::string text)
      : path_(path), text_(std::move(text)) {}

  // Next non-empty line as integers; empty vector at end of input.
  std::vector<Int> next() {
    while (pos_ < text_.size()) {
      std::size_t eol = text_.find('\n', pos_);
      if (eol == std::string::npos) eol = text_.size();
      std::string_view line(text_.data() + pos_, eol - pos_);
      pos_ = eol + 1;
      ++lineno_;
      std::vector<Int> vals = parse_line(line);
      if (!vals.empty()) return vals;
    }
    return {};
  }

  int lineno() const { return lineno_; }
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorCategory::Io,
         path_ + ":" + std::to_string(lineno_) + ": " + msg);
  }

 private:
  std::vector<Int> parse_line(std::string_view line) {
    std::vector<Int> vals;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      if (*p == ' ' || *p == '\t' || *p == '\r') {
        ++p;
        continue;
      }
      Int v = 0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc())
        error("expected an integer, got '" +
              std::string(p, std::min<std::size_t>(8, end - p)) + "'");
      vals.push_back(v);
      p = next;
      if (p < end && *p != ' ' && *p != '\t' && *p != '\r')
        error("unexpected character '" + std::string(1, *p) + "' after value");
    }
    return vals;
  }

  std::string path_;
  std::string text_;
  std::size_t pos_ = 0;
  int lineno_ = 0;
};

// Shared body for the two text readers: header + n_blocks records in file
// order, each validated as an ascending in-range block.
struct RawBlocks {
  int v = 0, k = 0;
  std::size_t n = 0;
  std::vector<Point> flat;  // file order
};

RawBlocks read_text_blocks(const std::string& path, std::string text) {
  LineParser lp(path, std::move(text));
  std::vector<Int> header = lp.next();
  if (header.size() != 3)
    lp.error("header must be 'v k n_blocks', got " +
             std::to_string(header.size()) + " values");
  RawBlocks raw;
  if (header[0] < 3 || header[0] > 0xffff || header[1] < 2 ||
      header[1] >= header[0] || header[2] < 0)
    lp.error("header values out of range");
  raw.v = static_cast<int>(header[0]);
  raw.k = static_cast<int>(header[1]);
  raw.n = static_cast<std::size_t>(header[2]);
  raw.flat.reserve(raw.n * raw.k);
  for (std::size_t i = 0; i < raw.n; ++i) {
    std::vector<Int> vals = lp.next();
    if (vals.empty()) lp.error("expected " + std::to_string(raw.n) +
                               " blocks, file ends after " +
                               std::to_string(i));
    if (vals.size() != static_cast<std::size_t>(raw.k))
      lp.error("expected " + std::to_string(raw.k) + " values, got " +
               std::to_string(vals.size()));
    for (std::size_t q = 0; q < vals.size(); ++q) {
      if (vals[q] < 0 || vals[q] >= raw.v)
        lp.error("point " + std::to_string(vals[q]) + " outside 0.." +
                 std::to_string(raw.v - 1));
      if (q > 0 && vals[q] <= vals[q - 1])
        lp.error("block is not strictly increasing");
      raw.flat.push_back(static_cast<Point>(vals[q]));
    }
  }
  if (!lp.next().empty()) lp.error("trailing data after the last block");
  return raw;
}

std::string render_text(const Design& d) {
  std::string out;
  out.reserve(d.block_count() * d.k() * 4 + 32);
  out += std::to_string(d.v());
  out += ' ';
  out += std::to_string(d.k());
  out += ' ';
  out += std::to_string(d.block_count());
  out += '\n';
  for (std::size_t i = 0; i < d.block_count(); ++i) {
    auto blk = d.block(i);
    for (int q = 0; q < d.k(); ++q) {
      if (q) out += ' ';
      out += std::to_string(blk[q]);
    }
    out += '\n';
  }
  return out;
}

json parse_json(const std::string& path, const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    fail(ErrorCategory::Io, path + ": not valid structured data");
  return j;
}

Int get_int(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key) || !j[key].is_number_integer())
    fail(ErrorCategory::Io,
         path + ": missing or non-integer field '" + std::string(key) + "'");
  return j[key].get<Int>();
}

Design read_design_json(const std::string& path, const std::string& text) {
  json j = parse_json(path, text);
  if (j.contains("format") && j["format"] != "triplex-design-1")
    fail(ErrorCategory::Io, path + ": unknown format tag");
  const Int v = get_int(j, "v", path);
  const Int k = get_int(j, "k", path);
  if (v < 3 || v > 0xffff || k < 2 || k >= v)
    fail(ErrorCategory::Io, path + ": v/k out of range");
  if (!j.contains("blocks") || !j["blocks"].is_array())
    fail(ErrorCategory::Io, path + ": missing 'blocks' array");
  std::vector<Point> flat;
  flat.reserve(j["blocks"].size() * static_cast<std::size_t>(k));
  std::size_t idx = 0;
  for (const json& b : j["blocks"]) {
    ++idx;
    if (!b.is_array() || b.size() != static_cast<std::size_t>(k))
      fail(ErrorCategory::Io, path + ": block " + std::to_string(idx) +
                                  " is not an array of " + std::to_string(k) +
                                  " points");
    Int prev = -1;
    for (const json& x : b) {
      if (!x.is_number_integer())
        fail(ErrorCategory::Io,
             path + ": block " + std::to_string(idx) + " has a non-integer");
      const Int p = x.get<Int>();
      if (p < 0 || p >= v || p <= prev)
        fail(ErrorCategory::Io, path + ": block " + std::to_string(idx) +
                                    " is not an ascending in-range block");
      prev = p;
      flat.push_back(static_cast<Point>(p));
    }
  }
  Design d = Design::from_flat(static_cast<int>(v), static_cast<int>(k),
                               std::move(flat));

  if (j.contains("lambda") && !j.contains("t"))
    fail(ErrorCategory::Io, path + ": 'lambda' declared without 't'");
  if (j.contains("t")) {
    const Int t = get_int(j, "t", path);
    if (t < 1 || t > k)
      fail(ErrorCategory::Io, path + ": declared t out of range");
    LambdaProfile prof = lambda_profile(d, static_cast<int>(t));
    if (!prof.design_at(static_cast<int>(t)))
      fail(ErrorCategory::Validation,
           path + ": declared a " + std::to_string(t) +
               "-design but coverage is uneven (" +
               std::to_string(prof.witness[t].count_min) + " vs " +
               std::to_string(prof.witness[t].count_max) + ")");
    if (j.contains("lambda")) {
      const Int lam = get_int(j, "lambda", path);
      if (prof.lambda[t] != lam)
        fail(ErrorCategory::Validation,
             path + ": declared lambda=" + std::to_string(lam) +
                 " but counted " + std::to_string(prof.lambda[t]));
    }
  }
  if (j.contains("simple")) {
    if (!j["simple"].is_boolean())
      fail(ErrorCategory::Io, path + ": 'simple' must be boolean");
    const bool declared = j["simple"].get<bool>();
    SimplicityReport sr = is_simple(d);
    if (declared != sr.simple)
      fail(ErrorCategory::Validation,
           path + (declared ? ": declared simple but a block repeats " +
                                  std::to_string(sr.multiplicity) + " times"
                            : ": declared non-simple but no block repeats"));
  }
  return d;
}

}  // namespace

void write_design_text(const std::string& path, const Design& d) {
  spill(path, render_text(d));
}

void write_design_json(const std::string& path, const Design& d,
                       const DesignFileMeta& meta) {
  json j;
  j["format"] = "triplex-design-1";
  j["v"] = d.v();
  j["k"] = d.k();
  if (meta.t) j["t"] = *meta.t;
  if (meta.lambda) j["lambda"] = *meta.lambda;
  if (meta.simple) j["simple"] = *meta.simple;
  json blocks = json::array();
  for (std::size_t i = 0; i < d.block_count(); ++i) {
    json b = json::array();
    for (Point p : d.block(i)) b.push_back(p);
    blocks.push_back(std::move(b));
  }
  j["blocks"] = std::move(blocks);
  spill(path, j.dump(1) + "\n");
}

Design read_design(const std::string& path) {
  std::string text = slurp(path);
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos)
    fail(ErrorCategory::Io, path + ": empty file");
  if (text[first] == '{') return read_design_json(path, text);
  RawBlocks raw = read_text_blocks(path, std::move(text));
  return Design::from_flat(raw.v, raw.k, std::move(raw.flat));
}

void write_resolution(const std::string& design_path,
                      const std::string& classes_path,
                      const ResolvedDesign& rd) {
  const Design& d = rd.design;
  std::string out;
  out.reserve(d.block_count() * d.k() * 4 + 32);
  out += std::to_string(d.v());
  out += ' ';
  out += std::to_string(d.k());
  out += ' ';
  out += std::to_string(d.block_count());
  out += '\n';
  std::size_t written = 0;
  std::string classes;
  classes += std::to_string(rd.sigma);
  classes += ' ';
  classes += std::to_string(rd.classes.size());
  classes += '\n';
  for (const auto& cls : rd.classes) {
    classes += std::to_string(written);
    classes += '\n';
    for (std::uint32_t idx : cls) {
      auto blk = d.block(idx);
      for (int q = 0; q < d.k(); ++q) {
        if (q) out += ' ';
        out += std::to_string(blk[q]);
      }
      out += '\n';
      ++written;
    }
  }
  if (written != d.block_count())
    fail(ErrorCategory::Internal, "classes do not cover the block list");
  spill(design_path, out);
  spill(classes_path, classes);
}

ResolvedDesign read_resolution(const std::string& design_path,
                               const std::string& classes_path) {
  RawBlocks raw = read_text_blocks(design_path, slurp(design_path));

  LineParser lp(classes_path, slurp(classes_path));
  std::vector<Int> header = lp.next();
  if (header.size() != 2) lp.error("header must be 'sigma w'");
  const Int sigma = header[0];
  const Int w = header[1];
  if (sigma < 1 || w < 2) lp.error("sigma/w out of range");
  std::vector<std::size_t> offsets;
  offsets.reserve(static_cast<std::size_t>(w) + 1);
  for (Int c = 0; c < w; ++c) {
    std::vector<Int> vals = lp.next();
    if (vals.size() != 1) lp.error("expected one class start offset");
    if (vals[0] < 0 || static_cast<std::size_t>(vals[0]) >= raw.n ||
        (!offsets.empty() && static_cast<std::size_t>(vals[0]) <= offsets.back()))
      lp.error("class offsets must be ascending and within the block list");
    if (offsets.empty() && vals[0] != 0)
      lp.error("first class must start at offset 0");
    offsets.push_back(static_cast<std::size_t>(vals[0]));
  }
  if (!lp.next().empty()) lp.error("trailing data after class offsets");
  offsets.push_back(raw.n);

  // Canonicalize while keeping the file-order -> canonical-order map.
  const std::size_t n = raw.n;
  const int k = raw.k;
  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0u);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return std::memcmp(&raw.flat[std::size_t{a} * k],
                                        &raw.flat[std::size_t{b} * k],
                                        sizeof(Point) * k) < 0;
                   });
  std::vector<Point> sorted_flat(raw.flat.size());
  std::vector<std::uint32_t> canon_of_file(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    std::memcpy(&sorted_flat[pos * k], &raw.flat[std::size_t{idx[pos]} * k],
                sizeof(Point) * k);
    canon_of_file[idx[pos]] = static_cast<std::uint32_t>(pos);
  }

  ResolvedDesign rd{Design::from_flat(raw.v, k, std::move(sorted_flat), true),
                    {},
                    sigma};
  rd.classes.resize(static_cast<std::size_t>(w));
  for (std::size_t c = 0; c < rd.classes.size(); ++c) {
    auto& cls = rd.classes[c];
    cls.reserve(offsets[c + 1] - offsets[c]);
    for (std::size_t i = offsets[c]; i < offsets[c + 1]; ++i)
      cls.push_back(canon_of_file[i]);
    std::sort(cls.begin(), cls.end());
  }

  ResolutionCheck rc = verify_resolution(rd);
  if (!rc.ok)
    fail(ErrorCategory::Validation,
         design_path + ": declared classes are not a resolution: " + rc.reason +
             " (class " + std::to_string(rc.class_index) + ")");
  if (rc.sigma != sigma)
    fail(ErrorCategory::Validation,
         classes_path + ": declared sigma=" + std::to_string(sigma) +
             " but classes verify at sigma=" + std::to_string(rc.sigma));
  return rd;
}

void write_provenance(const std::string& path, const std::string& design_file,
                      const Assembled& assembled) {
  const CountingSummary& cs = assembled.counts;
  json j;
  j["format"] = "triplex-provenance-1";
  j["design_file"] = design_file;
  j["v"] = cs.v;
  j["k"] = cs.k;
  j["mode"] = cs.mode == Mode::I ? "I" : "II";
  j["theta"] = cs.theta;
  j["delta"] = cs.delta;
  j["lambda_filler"] = cs.lambda_filler;
  json pairs = json::array();
  for (const PairCounts& pc : cs.pairs) {
    json p;
    p["h"] = pc.h;
    p["half"] = pc.half;
    p["k_left"] = pc.k_left;
    p["k_right"] = pc.k_right;
    p["w"] = pc.w;
    p["z"] = pc.z;
    p["b_left"] = pc.b_left;
    p["b_right"] = pc.b_right;
    p["u_left"] = pc.u_left;
    p["u_right"] = pc.u_right;
    p["lam_left"] = pc.lam_left;
    p["lam_right"] = pc.lam_right;
    p["lam2_left"] = pc.lam2_left;
    p["lam2_right"] = pc.lam2_right;
    pairs.push_back(std::move(p));
  }
  j["pairs"] = std::move(pairs);

  // Blocks array dominates the file; rendered by hand to keep it compact.
  std::string out = j.dump(1);
  // splice "blocks" in before the closing brace
  if (out.size() < 2 || out.back() != '}')
    fail(ErrorCategory::Internal, "unexpected serialization");
  out.pop_back();
  while (!out.empty() && (out.back() == '\n' || out.back() == ' '))
    out.pop_back();
  out += ",\n \"blocks\": [";
  for (std::size_t i = 0; i < assembled.prov.size(); ++i) {
    const BlockProvenance& bp = assembled.prov[i];
    if (i) out += ',';
    out += '[';
    out += std::to_string(bp.pair);
    out += ',';
    out += std::to_string(bp.i);
    out += ',';
    out += std::to_string(bp.j);
    out += ',';
    out += std::to_string(static_cast<int>(bp.type));
    out += ']';
  }
  out += "]\n}\n";
  spill(path, out);
}

ProvenanceFile read_provenance(const std::string& path) {
  json j = parse_json(path, slurp(path));
  if (!j.contains("format") || j["format"] != "triplex-provenance-1")
    fail(ErrorCategory::Io, path + ": not a provenance file");
  ProvenanceFile pf;
  if (!j.contains("design_file") || !j["design_file"].is_string())
    fail(ErrorCategory::Io, path + ": missing 'design_file'");
  pf.design_file = j["design_file"].get<std::string>();
  CountingSummary& cs = pf.counts;
  cs.v = static_cast<int>(get_int(j, "v", path));
  cs.k = static_cast<int>(get_int(j, "k", path));
  if (!j.contains("mode") || (j["mode"] != "I" && j["mode"] != "II"))
    fail(ErrorCategory::Io, path + ": 'mode' must be \"I\" or \"II\"");
  cs.mode = j["mode"] == "I" ? Mode::I : Mode::II;
  cs.theta = get_int(j, "theta", path);
  cs.delta = get_int(j, "delta", path);
  cs.lambda_filler = get_int(j, "lambda_filler", path);
  if (!j.contains("pairs") || !j["pairs"].is_array())
    fail(ErrorCategory::Io, path + ": missing 'pairs' array");
  int expect_h = 1;
  for (const json& p : j["pairs"]) {
    PairCounts pc;
    pc.h = static_cast<int>(get_int(p, "h", path));
    if (pc.h != expect_h++)
      fail(ErrorCategory::Io, path + ": pair list is not 1,2,...");
    if (!p.contains("half") || !p["half"].is_boolean())
      fail(ErrorCategory::Io, path + ": pair missing 'half' flag");
    pc.half = p["half"].get<bool>();
    pc.k_left = static_cast<int>(get_int(p, "k_left", path));
    pc.k_right = static_cast<int>(get_int(p, "k_right", path));
    pc.w = get_int(p, "w", path);
    pc.z = get_int(p, "z", path);
    pc.b_left = get_int(p, "b_left", path);
    pc.b_right = get_int(p, "b_right", path);
    pc.u_left = get_int(p, "u_left", path);
    pc.u_right = get_int(p, "u_right", path);
    pc.lam_left = get_int(p, "lam_left", path);
    pc.lam_right = get_int(p, "lam_right", path);
    pc.lam2_left = get_int(p, "lam2_left", path);
    pc.lam2_right = get_int(p, "lam2_right", path);
    cs.pairs.push_back(pc);
  }
  if (!j.contains("blocks") || !j["blocks"].is_array())
    fail(ErrorCategory::Io, path + ": missing 'blocks' array");
  pf.prov.reserve(j["blocks"].size());
  for (const json& b : j["blocks"]) {
    if (!b.is_array() || b.size() != 4 || !b[0].is_number_integer() ||
        !b[1].is_number_integer() || !b[2].is_number_integer() ||
        !b[3].is_number_integer())
      fail(ErrorCategory::Io, path + ": each block entry must be [h,i,j,type]");
    const Int ty = b[3].get<Int>();
    if (ty < 1 || ty > 4)
      fail(ErrorCategory::Io, path + ": block type out of range");
    pf.prov.push_back(BlockProvenance{
        static_cast<std::int32_t>(b[0].get<Int>()),
        static_cast<std::int32_t>(b[1].get<Int>()),
        static_cast<std::int32_t>(b[2].get<Int>()),
        static_cast<BlockType>(ty)});
  }
  return pf;
}

}  // namespace triplex
