#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path tmp() {
  static const fs::path dir = [] {
    fs::remove_all("tmp_cli");
    fs::create_directories("tmp_cli");
    return fs::path("tmp_cli");
  }();
  return dir;
}

RunResult run(const std::string& args) {
  static int seq = 0;
  const fs::path so = tmp() / ("stdout" + std::to_string(seq) + ".txt");
  const fs::path se = tmp() / ("stderr" + std::to_string(seq) + ".txt");
  ++seq;
  const std::string cmd = std::string(TRIPLEX_CLI_PATH) + " " + args + " > " +
                          so.string() + " 2> " + se.string();
  const int rc = std::system(cmd.c_str());
  RunResult r;
  if (rc != -1 && WIFEXITED(rc)) r.code = WEXITSTATUS(rc);
  r.out = slurp(so);
  r.err = slurp(se);
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("usage errors exit 2, help exits 0") {
  CHECK(run("").code == 2);
  CHECK(run("--help").code == 0);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("construct --family thm3_1 --v 8").code == 2);  // --out missing
}

TEST_CASE("counts prints the summary") {
  RunResult r = run("counts --family thm3_1 --v 8");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "v=8 k=5 mode=I pairs=1"));
  CHECK(contains(r.out,
                 "pair 1: k=2+3 w=7 z=2 b=(4,8) u=(1,3) lambda2=(1,6) "
                 "lambda3=(0,1)"));
  CHECK(contains(r.out, "Theta=18 Delta=8 Lambda=10"));
}

TEST_CASE("family errors carry a category and exit 1") {
  RunResult r = run("counts --family thm3_1 --v 9");
  CHECK(r.code == 1);
  CHECK(contains(r.err, "error[congruence]:"));
  CHECK(contains(r.err, "v == 2 (mod 6)"));

  r = run("counts --family nope --v 9");
  CHECK(r.code == 1);
  CHECK(contains(r.err, "error[range]:"));
  CHECK(contains(r.err, "thm3_1, thm3_2, thm3_3, thm3_4"));

  r = run("counts --family thm3_1");
  CHECK(r.code == 1);
  CHECK(contains(r.err, "requires --v"));
}

TEST_CASE("construct, verify and the provenance round trip") {
  const fs::path d8 = tmp() / "d8.txt";
  const fs::path p8 = tmp() / "d8.prov";
  RunResult r = run("construct --family thm3_1 --v 8 --out " + d8.string() +
                    " --provenance " + p8.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "3-(16,5,18): 1008 blocks"));
  CHECK(fs::exists(d8));
  CHECK(fs::exists(p8));

  r = run("verify " + d8.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "blocks: 1008"));
  CHECK(contains(r.out, "lambda_1: 315"));
  CHECK(contains(r.out, "lambda_2: 84"));
  CHECK(contains(r.out, "lambda_3: 18"));
  CHECK(contains(r.out, "3-(16,5,18), simple"));

  // a filler-bearing instance cannot be resolved into classes
  r = run("resolve-build --spec-from " + p8.string() + " --out " +
          (tmp() / "d8.res").string());
  CHECK(r.code == 1);
  CHECK(contains(r.err, "error["));
}

TEST_CASE("verify flags a tampered file through its exit code") {
  const fs::path good = tmp() / "pairs.txt";
  {
    std::ofstream out(good);
    out << "4 2 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
  }
  RunResult r = run("verify --t 2 " + good.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "2-(4,2,1), simple"));

  const fs::path bad = tmp() / "pairs_bad.txt";
  {
    std::ofstream out(bad);
    out << "4 2 6\n0 1\n0 2\n0 3\n1 2\n1 3\n1 3\n";
  }
  r = run("verify --t 2 " + bad.string());
  CHECK(r.code == 1);
  CHECK(contains(r.out, "NOT simple"));
  CHECK(contains(r.out, "non-uniform"));
}

TEST_CASE("generators write resolutions that resolve-check accepts") {
  const fs::path f8 = tmp() / "f8.txt";
  RunResult r = run("onefactor --v 8 --out " + f8.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "one-factorization: v=8 k=2 w=7 sigma=1 blocks=28"));

  r = run("resolve-check " + f8.string() + " --classes " + f8.string() +
          ".classes");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "resolution ok: w=7 sigma=1 blocks=28"));

  const fs::path b9 = tmp() / "b9.txt";
  r = run("baranyai --v 9 --k 3 --out " + b9.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "parallelism: v=9 k=3 w=28 sigma=1 blocks=84"));

  const fs::path o8 = tmp() / "o8.txt";
  r = run("orbits --v 8 --k 3 --out " + o8.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "orbit resolution: v=8 k=3 w=7 sigma=3 blocks=56"));

  // mismatched sidecar
  r = run("resolve-check " + b9.string() + " --classes " + o8.string() +
          ".classes");
  CHECK(r.code == 1);
  CHECK(contains(r.err, "error["));
}

TEST_CASE("an ingredient file feeds the doubling family") {
  const fs::path ing = tmp() / "complete86.txt";
  {
    // all 6-subsets of 8 points, one per missing pair
    std::ofstream out(ing);
    out << "8 6 28\n";
    for (int i = 0; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j) {
        bool first = true;
        for (int p = 0; p < 8; ++p) {
          if (p == i || p == j) continue;
          out << (first ? "" : " ") << p;
          first = false;
        }
        out << "\n";
      }
  }
  RunResult r = run("counts --family gen2k --v 8 --k 3 --ingredient " +
                    ing.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "mode=II"));
  CHECK(contains(r.out, "Theta=18"));

  const fs::path out6 = tmp() / "g8.txt";
  r = run("construct --family gen2k --v 8 --k 3 --ingredient " + ing.string() +
          " --out " + out6.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "3-(16,6,18): 504 blocks"));

  r = run("verify " + out6.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "3-(16,6,18), simple"));
}

TEST_CASE("solve-ab reports the balance data") {
  RunResult r = run("solve-ab --v 17 --k 3");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "A=2912 B=182 ratio=16"));
  CHECK(contains(r.out, "admissible z1: 1..8"));
}

TEST_CASE("the balanced family round trips through resolve-build") {
  const fs::path d = tmp() / "ab17.txt";
  const fs::path p = tmp() / "ab17.prov";
  RunResult r = run("construct --family thm_ab --v 17 --k 3 --z1 1 --out " +
                    d.string() + " --provenance " + p.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "3-(34,8,9996): 1068144 blocks"));

  const fs::path res = tmp() / "ab17.res";
  r = run("resolve-build --spec-from " + p.string() + " --out " + res.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "resolution: v=34 k=8 w=1848 sigma=136 blocks=1068144"));

  r = run("resolve-check " + res.string() + " --classes " + res.string() +
          ".classes");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "resolution ok: w=1848 sigma=136 blocks=1068144"));
}

TEST_SUITE_END();
