#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "triplex/config.hpp"
#include "triplex/error.hpp"
#include "triplex/families.hpp"
#include "triplex/io.hpp"
#include "triplex/resolvability.hpp"

namespace {

using namespace triplex;

struct FamilyArgs {
  std::string family;
  std::optional<int> v, f, k;
  std::optional<Int> m, z1, lam;
  std::string ingredient;
};

[[noreturn]] void need(const std::string& fam, const char* opt) {
  fail(ErrorCategory::Range, "family " + fam + " requires " + opt);
}

int geti(const std::optional<int>& x, const std::string& fam, const char* opt) {
  if (!x) need(fam, opt);
  return *x;
}

Int getl(const std::optional<Int>& x, const std::string& fam, const char* opt) {
  if (!x) need(fam, opt);
  return *x;
}

ConstructionSpec build_spec(const FamilyArgs& a, bool counts_only) {
  const std::string& fam = a.family;
  if (fam == "thm3_1") return family_thm_3_1(geti(a.v, fam, "--v"));
  if (fam == "thm3_2") {
    std::optional<Design> fil;
    if (!a.ingredient.empty()) fil = read_design(a.ingredient);
    return family_thm_3_2(geti(a.f, fam, "--f"), std::move(fil));
  }
  if (fam == "thm3_3")
    return family_thm_3_3(geti(a.v, fam, "--v"), getl(a.m, fam, "--m"));
  if (fam == "thm3_4") {
    std::optional<Design> fil;
    if (!a.ingredient.empty()) fil = read_design(a.ingredient);
    return family_thm_3_4(geti(a.f, fam, "--f"), getl(a.lam, fam, "--lam"),
                          std::move(fil));
  }
  if (fam == "gen2k") {
    if (a.ingredient.empty()) need(fam, "--ingredient");
    return family_gen_2k(geti(a.v, fam, "--v"), geti(a.k, fam, "--k"),
                         read_design(a.ingredient));
  }
  if (fam == "cor2k")
    return family_cor_2k(geti(a.v, fam, "--v"), geti(a.k, fam, "--k"),
                         /*materialize_filler=*/!counts_only);
  if (fam == "thm_ab")
    return family_thm_AB(geti(a.v, fam, "--v"), geti(a.k, fam, "--k"),
                         getl(a.z1, fam, "--z1"));
  if (fam == "cor_ab")
    return family_cor_AB(geti(a.v, fam, "--v"), geti(a.k, fam, "--k"),
                         getl(a.z1, fam, "--z1"));
  fail(ErrorCategory::Range,
       "unknown family '" + fam +
           "' (expected thm3_1, thm3_2, thm3_3, thm3_4, gen2k, cor2k, "
           "thm_ab, cor_ab)");
}

void print_counts(const CountingSummary& cs) {
  std::cout << "v=" << cs.v << " k=" << cs.k
            << " mode=" << (cs.mode == Mode::I ? "I" : "II")
            << " pairs=" << cs.pairs.size() << "\n";
  for (const PairCounts& pc : cs.pairs) {
    std::cout << "pair " << pc.h << (pc.half ? " (half)" : "") << ": k="
              << pc.k_left << "+" << pc.k_right << " w=" << pc.w
              << " z=" << pc.z << " b=(" << pc.b_left << "," << pc.b_right
              << ") u=(" << pc.u_left << "," << pc.u_right << ") lambda2=("
              << pc.lam2_left << "," << pc.lam2_right << ") lambda3=("
              << pc.lam_left << "," << pc.lam_right << ")\n";
  }
  std::cout << "Theta=" << cs.theta << " Delta=" << cs.delta
            << " Lambda=" << cs.lambda_filler << "\n";
}

void write_resolution_pair(const std::string& out, const ResolvedDesign& rd,
                           const char* kind) {
  write_resolution(out, out + ".classes", rd);
  std::cout << kind << ": v=" << rd.design.v() << " k=" << rd.design.k()
            << " w=" << rd.w() << " sigma=" << rd.sigma << " blocks="
            << rd.design.block_count() << " -> " << out << " and " << out
            << ".classes\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"construction toolkit for simple 3-designs on doubled point sets"};
  app.require_subcommand(1);
  app.fallthrough();
  int n_threads = 0;
  app.add_option("--threads", n_threads,
                 "worker threads for counting passes (0 = all hardware)");

  FamilyArgs fa;
  auto add_family_opts = [&](CLI::App* c) {
    c->add_option("--family", fa.family, "family id")->required();
    c->add_option("--v", fa.v, "point count");
    c->add_option("--f", fa.f, "exponent for v = 2^f+1 families");
    c->add_option("--k", fa.k, "block-size parameter");
    c->add_option("--m", fa.m, "multiplier");
    c->add_option("--z1", fa.z1, "annulus size of the first pair");
    c->add_option("--lam", fa.lam, "filler lambda selector");
    c->add_option("--ingredient", fa.ingredient, "ingredient design file");
  };

  auto* c_construct =
      app.add_subcommand("construct", "assemble a family instance");
  std::string out_path, prov_path;
  add_family_opts(c_construct);
  c_construct->add_option("--out", out_path, "output design file")->required();
  c_construct->add_option("--provenance", prov_path,
                          "also write the provenance sidecar");

  auto* c_verify =
      app.add_subcommand("verify", "count a design's lambda profile");
  int verify_t = 3;
  std::string verify_file;
  c_verify->add_option("--t", verify_t, "profile depth (default 3)");
  c_verify->add_option("file", verify_file, "design file")->required();

  auto* c_rescheck =
      app.add_subcommand("resolve-check", "verify a resolution file pair");
  std::string rc_file, rc_classes;
  c_rescheck->add_option("file", rc_file, "design part")->required();
  c_rescheck->add_option("--classes", rc_classes, "classes sidecar")
      ->required();

  auto* c_resbuild = app.add_subcommand(
      "resolve-build", "partition a constructed design into classes");
  std::string rb_spec, rb_out, rb_design;
  c_resbuild->add_option("--spec-from", rb_spec, "provenance sidecar")
      ->required();
  c_resbuild->add_option("--out", rb_out, "output resolution file")->required();
  c_resbuild->add_option("--design", rb_design,
                         "design file (overrides the provenance entry)");

  int gv = 0, gk = 0;
  std::string g_out;
  auto* c_baranyai =
      app.add_subcommand("baranyai", "parallelism of the complete design");
  c_baranyai->add_option("--v", gv)->required();
  c_baranyai->add_option("--k", gk)->required();
  c_baranyai->add_option("--out", g_out)->required();
  auto* c_orbits =
      app.add_subcommand("orbits", "cyclic orbit resolution of the complete design");
  c_orbits->add_option("--v", gv)->required();
  c_orbits->add_option("--k", gk)->required();
  c_orbits->add_option("--out", g_out)->required();
  auto* c_onefactor =
      app.add_subcommand("onefactor", "round-robin one-factorization");
  c_onefactor->add_option("--v", gv)->required();
  c_onefactor->add_option("--out", g_out)->required();

  auto* c_counts =
      app.add_subcommand("counts", "counting summary without assembling");
  add_family_opts(c_counts);

  auto* c_solveab =
      app.add_subcommand("solve-ab", "balance coefficients for the 2+2k family");
  c_solveab->add_option("--v", gv)->required();
  c_solveab->add_option("--k", gk)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    set_threads(n_threads);

    if (app.got_subcommand(c_construct)) {
      Assembled a = assemble(build_spec(fa, /*counts_only=*/false));
      write_design_text(out_path, a.design);
      if (!prov_path.empty()) write_provenance(prov_path, out_path, a);
      std::cout << "3-(" << 2 * a.counts.v << "," << a.counts.k << ","
                << a.counts.theta << "): " << a.design.block_count()
                << " blocks -> " << out_path << "\n";
      return 0;
    }

    if (app.got_subcommand(c_verify)) {
      Design d = read_design(verify_file);
      if (verify_t < 1 || verify_t > d.k())
        fail(ErrorCategory::Range, "--t must lie in 1..k");
      LambdaProfile prof = lambda_profile(d, verify_t);
      std::cout << "blocks: " << prof.lambda[0] << "\n";
      for (int s = 1; s <= verify_t; ++s) {
        if (prof.uniform[static_cast<std::size_t>(s)]) {
          std::cout << "lambda_" << s << ": "
                    << prof.lambda[static_cast<std::size_t>(s)] << "\n";
        } else {
          const auto& wit = prof.witness[static_cast<std::size_t>(s)];
          std::cout << "lambda_" << s << ": non-uniform (" << wit.count_min
                    << ".." << wit.count_max << ")\n";
        }
      }
      SimplicityReport sr = is_simple(d);
      const bool des = prof.design_at(verify_t);
      std::string line;
      if (des)
        line = std::to_string(verify_t) + "-(" + std::to_string(d.v()) + "," +
               std::to_string(d.k()) + "," +
               std::to_string(prof.lambda[static_cast<std::size_t>(verify_t)]) +
               ")";
      else
        line = "not a " + std::to_string(verify_t) + "-design";
      line += sr.simple ? ", simple"
                        : ", NOT simple (a block repeats " +
                              std::to_string(sr.multiplicity) + " times)";
      std::cout << line << "\n";
      return des && sr.simple ? 0 : 1;
    }

    if (app.got_subcommand(c_rescheck)) {
      ResolvedDesign rd = read_resolution(rc_file, rc_classes);
      std::cout << "resolution ok: w=" << rd.w() << " sigma=" << rd.sigma
                << " blocks=" << rd.design.block_count() << "\n";
      return 0;
    }

    if (app.got_subcommand(c_resbuild)) {
      ProvenanceFile pf = read_provenance(rb_spec);
      std::string dpath = rb_design.empty() ? pf.design_file : rb_design;
      if (rb_design.empty() && !std::filesystem::exists(dpath)) {
        const auto alt =
            std::filesystem::path(rb_spec).parent_path() / dpath;
        if (std::filesystem::exists(alt)) dpath = alt.string();
      }
      Design d = read_design(dpath);
      if (d.block_count() != pf.prov.size())
        fail(ErrorCategory::Io,
             "design has " + std::to_string(d.block_count()) +
                 " blocks but the provenance lists " +
                 std::to_string(pf.prov.size()));
      if (d.v() != 2 * pf.counts.v || d.k() != pf.counts.k)
        fail(ErrorCategory::Io, "design shape does not match the provenance");
      Assembled a{std::move(d), std::move(pf.prov), std::move(pf.counts)};
      MultiplierChoice mc = find_multipliers(pair_sigmas(a.counts));
      ResolvedDesign rd = partition_constructed(a, mc);
      write_resolution_pair(rb_out, rd, "resolution");
      return 0;
    }

    if (app.got_subcommand(c_baranyai)) {
      write_resolution_pair(g_out, baranyai_parallelism(gv, gk), "parallelism");
      return 0;
    }
    if (app.got_subcommand(c_orbits)) {
      write_resolution_pair(g_out, cyclic_orbit_resolution(gv, gk),
                            "orbit resolution");
      return 0;
    }
    if (app.got_subcommand(c_onefactor)) {
      write_resolution_pair(g_out, round_robin_one_factorization(gv),
                            "one-factorization");
      return 0;
    }

    if (app.got_subcommand(c_counts)) {
      print_counts(compute_counts(build_spec(fa, /*counts_only=*/true)));
      return 0;
    }

    if (app.got_subcommand(c_solveab)) {
      ABPair ab = compute_AB(gv, gk);
      std::cout << "A=" << ab.A << " B=" << ab.B << " ratio=" << ab.ratio.str()
                << "\n";
      if (ab.A <= 0 || !ab.ratio.integral()) {
        std::cout << "no admissible z1 (A/B must be a positive integer)\n";
      } else {
        const Int r = ab.A / ab.B;
        const Int zmax =
            std::min<Int>((gv - 1) / 2, (binomial(gv - 1, gk) / (gk + 1)) / r);
        if (zmax < 1)
          std::cout << "no admissible z1\n";
        else
          std::cout << "admissible z1: 1.." << zmax << "\n";
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.category()) << "]: " << e.what()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
