// Acceptance gate: nine criteria, each printed as one [PASS] line with its
// measured time against the stated budget. Any failure aborts with [FAIL]
// and a nonzero exit.
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "triplex/construction.hpp"
#include "triplex/design.hpp"
#include "triplex/error.hpp"
#include "triplex/families.hpp"
#include "triplex/ints.hpp"
#include "triplex/io.hpp"
#include "triplex/resolution.hpp"
#include "triplex/resolvability.hpp"

using namespace triplex;

namespace {

#define REQUIRE(cond, msg)                                                      \
    do {                                                                        \
        if (!(cond)) {                                                          \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg \
                      << "\n";                                                  \
            std::exit(1);                                                       \
        }                                                                       \
    } while (0)

#define REQUIRE_EQ(a, b, what)                                                 \
    do {                                                                       \
        const auto va = (a);                                                   \
        const auto vb = (b);                                                   \
        if (!(va == vb)) {                                                     \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " "       \
                      << what << ": " << va << " != " << vb << "\n";           \
            std::exit(1);                                                      \
        }                                                                      \
    } while (0)

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void pass(int n, const std::string& what, double secs, double limit) {
    if (limit > 0) {
        REQUIRE(secs < limit, "criterion " << n << " exceeded its time budget: "
                                           << secs << " s >= " << limit << " s");
        std::cout << "[PASS] " << n << ": " << what << " [" << secs << " s < "
                  << limit << " s]\n";
    } else {
        std::cout << "[PASS] " << n << ": " << what << " [" << secs << " s]\n";
    }
    std::cout.flush();
}

// every point exactly once per class
void require_parallel_classes(const ResolvedDesign& rd, const char* name) {
    const int v = rd.design.v();
    for (std::size_t c = 0; c < rd.classes.size(); ++c) {
        std::vector<int> seen(static_cast<std::size_t>(v), 0);
        for (std::uint32_t b : rd.classes[c])
            for (Point p : rd.design.block(b)) ++seen[p];
        for (int p = 0; p < v; ++p)
            REQUIRE(seen[static_cast<std::size_t>(p)] == 1,
                    name << " class " << c << " covers point " << p << " "
                         << seen[static_cast<std::size_t>(p)] << " times");
    }
}

void criterion_1() {
    const auto t0 = Clock::now();

    ResolvedDesign rr = round_robin_one_factorization(8);
    REQUIRE_EQ(rr.w(), 7u, "round-robin(8) class count");
    REQUIRE_EQ(rr.sigma, 1, "round-robin(8) sigma");
    REQUIRE(verify_resolution(rr).ok, "round-robin(8) resolution recount");
    require_parallel_classes(rr, "round-robin(8)");
    REQUIRE(rr.design == complete_design(8, 2),
            "round-robin(8) must cover every pair exactly once");

    ResolvedDesign orb = cyclic_orbit_resolution(8, 3);
    REQUIRE_EQ(orb.w(), 7u, "orbit(8,3) class count");
    REQUIRE_EQ(orb.sigma, 3, "orbit(8,3) sigma");
    REQUIRE(verify_resolution(orb).ok, "orbit(8,3) resolution recount");
    REQUIRE(orb.design == complete_design(8, 3),
            "orbit(8,3) must cover every 3-set exactly once");

    ResolvedDesign b93 = baranyai_parallelism(9, 3);
    REQUIRE_EQ(b93.w(), 28u, "baranyai(9,3) class count");
    REQUIRE_EQ(b93.sigma, 1, "baranyai(9,3) sigma");
    REQUIRE(verify_resolution(b93).ok, "baranyai(9,3) resolution recount");
    require_parallel_classes(b93, "baranyai(9,3)");
    REQUIRE(b93.design == complete_design(9, 3),
            "baranyai(9,3) must cover every 3-set exactly once");

    ResolvedDesign b124 = baranyai_parallelism(12, 4);
    REQUIRE_EQ(b124.w(), 165u, "baranyai(12,4) class count");
    REQUIRE_EQ(b124.sigma, 1, "baranyai(12,4) sigma");
    REQUIRE(verify_resolution(b124).ok, "baranyai(12,4) resolution recount");
    require_parallel_classes(b124, "baranyai(12,4)");
    REQUIRE(b124.design == complete_design(12, 4),
            "baranyai(12,4) must cover every 4-set exactly once");

    pass(1, "resolution generators (round-robin, orbits, set partitions)",
         seconds_since(t0), 5.0);
}

void require_family(const ConstructionSpec& spec, Int lambda, Int n_blocks,
                    const char* name) {
    Assembled a = assemble(spec);
    REQUIRE_EQ(a.design.block_count(), static_cast<std::size_t>(n_blocks),
               name << " block count");
    LambdaProfile prof = lambda_profile(a.design, 3);
    REQUIRE(prof.design_at(3), name << " is not a 3-design");
    REQUIRE_EQ(prof.lambda[3], lambda, name << " lambda_3");
    REQUIRE(is_simple(a.design).simple, name << " repeats a block");
}

void criterion_2() {
    auto t0 = Clock::now();
    require_family(family_thm_3_1(8), 18, 1008, "doubling(8)");
    double s8 = seconds_since(t0);
    REQUIRE(s8 < 1.0, "v=8 instance exceeded 1 s: " << s8);

    t0 = Clock::now();
    require_family(family_thm_3_1(14), 90, 29484, "doubling(14)");
    double s14 = seconds_since(t0);
    REQUIRE(s14 < 10.0, "v=14 instance exceeded 10 s: " << s14);

    pass(2, "first doubling family at v=8 and v=14, exhaustive",
         s8 + s14, 0);
}

void criterion_3() {
    const auto t0 = Clock::now();
    require_family(family_cor_2k(8, 3, true), 18, 504, "half-block family(8)");
    require_family(family_cor_2k(13, 3, true), 198, 25740,
                   "half-block family(13)");
    pass(3, "half-block family at v=8 and v=13, exhaustive", seconds_since(t0),
         30.0);
}

std::optional<Assembled> g_ab17;  // shared between criteria 4 and 5

void criterion_4() {
    const auto t0 = Clock::now();
    g_ab17 = assemble(family_thm_AB(17, 3, 1));
    REQUIRE_EQ(g_ab17->design.block_count(), 1068144u,
               "balanced family block count");
    LambdaProfile prof = lambda_profile(g_ab17->design, 3);
    REQUIRE(prof.design_at(3), "balanced family is not a 3-design");
    REQUIRE_EQ(prof.lambda[3], 9996, "balanced family lambda_3");
    REQUIRE(is_simple(g_ab17->design).simple, "balanced family repeats a block");
    pass(4, "balanced family 3-(34,8,9996), all 5984 triples",
         seconds_since(t0), 300.0);
}

void criterion_5() {
    const auto t0 = Clock::now();
    MultiplierChoice mc = find_multipliers(pair_sigmas(g_ab17->counts));
    ResolvedDesign rd = partition_constructed(*g_ab17, mc);
    REQUIRE_EQ(rd.w(), 1848u, "partition class count");
    REQUIRE_EQ(rd.sigma, 136, "partition sigma");
    for (std::size_t c = 0; c < rd.classes.size(); ++c)
        REQUIRE_EQ(rd.classes[c].size(), 578u, "class " << c << " size");
    ResolutionCheck rc = verify_resolution(rd);
    REQUIRE(rc.ok, "per-class point counts: " << rc.reason);
    REQUIRE_EQ(rc.sigma, 136, "recounted sigma");
    g_ab17.reset();  // release ~50 MB before the v=32 instance
    pass(5, "resolution of the v=17 instance into 1848 classes of 1-(34,8,136)",
         seconds_since(t0), 300.0);
}

void criterion_6() {
    const auto t0 = Clock::now();

    ConstructionSpec spec = family_thm_3_3(32, 1);
    CountingSummary cs = compute_counts(spec);
    REQUIRE_EQ(cs.theta, 243600, "Theta at v=32");
    REQUIRE_EQ(cs.delta, 243600, "Delta at v=32");
    REQUIRE_EQ(cs.lambda_filler, 0, "filler share at v=32");
    REQUIRE_EQ(cs.pairs.size(), 2u, "pair count at v=32");
    REQUIRE_EQ(cs.pairs[0].z, 30, "first annulus size");
    REQUIRE_EQ(cs.pairs[1].z, 42, "second annulus size");

    // the four ingredients, rebuilt standalone
    const ResolvedDesign ing[4] = {
        round_robin_one_factorization(32), cyclic_orbit_resolution(32, 5),
        cyclic_orbit_resolution(32, 3), baranyai_parallelism(32, 4)};
    const Int want_sigma[4] = {1, 5, 3, 1};
    for (int i = 0; i < 4; ++i) {
        ResolutionCheck rc = verify_resolution(ing[i]);
        REQUIRE(rc.ok, "ingredient " << i << ": " << rc.reason);
        REQUIRE_EQ(rc.sigma, want_sigma[i], "ingredient " << i << " sigma");
    }

    // triple coverage on a fixed random sample, streamed from the class
    // structure (the full enumeration would hold ~2.9e8 blocks)
    TripleCounter tc(spec);
    std::mt19937 rng(20260819u);
    std::uniform_int_distribution<int> pd(0, 63);
    for (int trial = 0; trial < 1000; ++trial) {
        int a = pd(rng), b = pd(rng), c = pd(rng);
        while (b == a) b = pd(rng);
        while (c == a || c == b) c = pd(rng);
        Block triple = {static_cast<Point>(a), static_cast<Point>(b),
                        static_cast<Point>(c)};
        std::sort(triple.begin(), triple.end());
        const Int got = tc.count(triple).total();
        REQUIRE(got == 243600, "triple (" << triple[0] << "," << triple[1]
                                          << "," << triple[2]
                                          << ") covered " << got << " times");
    }

    pass(6, "large instance: counts, ingredient sigmas, 1000-triple sample",
         seconds_since(t0), 0);
}

// ---- criterion 7: randomized spec engine ----------------------------------

PairSpec rand_pair(ResolvedDesign left, ResolvedDesign right, SimpleCore lc,
                   SimpleCore rc, Int z) {
    auto [eps, s] = choose_annulus(static_cast<int>(left.w()), z);
    return PairSpec{std::move(left), std::move(right), lc, rc, eps, s};
}

HalfPair rand_half(ResolvedDesign d, Int z) {
    auto [eps, s] = choose_annulus(static_cast<int>(d.w()), z);
    return HalfPair{std::move(d), eps, s};
}

struct RandomSpec {
    ConstructionSpec spec;
    bool valid;
    bool guard_negative;
};

RandomSpec random_spec(int i, std::mt19937& rng) {
    switch (i % 7) {
        case 0: {  // one pair on 8 points, k=5: filler fits only at z=2
            Int z = std::uniform_int_distribution<Int>(1, 3)(rng);
            ConstructionSpec spec;
            spec.v = 8;
            spec.k = 5;
            spec.pairs.push_back(rand_pair(round_robin_one_factorization(8),
                                           cyclic_orbit_resolution(8, 3),
                                           SimpleCore{7, 1}, SimpleCore{7, 1},
                                           z));
            spec.filler = complete_design(8, 5);
            return {std::move(spec), z == 2, false};
        }
        case 1: {  // half pair on 8 points, k=6: filler fits only at z=1
            Int z = std::uniform_int_distribution<Int>(1, 4)(rng);
            ConstructionSpec spec;
            spec.v = 8;
            spec.k = 6;
            spec.mode = Mode::II;
            spec.half = rand_half(cyclic_orbit_resolution(8, 3), z);
            spec.filler = complete_design(8, 6);
            return {std::move(spec), z == 1, false};
        }
        case 2: {  // half pair of 2-sets, k=4, on 7 or 11 points
            int v = std::uniform_int_distribution<int>(0, 1)(rng) ? 7 : 11;
            Int z = std::uniform_int_distribution<Int>(1, (v - 1) / 2)(rng);
            ConstructionSpec spec;
            spec.v = v;
            spec.k = 4;
            spec.mode = Mode::II;
            spec.half = rand_half(cyclic_orbit_resolution(v, 2), z);
            spec.filler = complete_design(v, 4);
            return {std::move(spec), 2 * z == v - 3, false};
        }
        case 3: {  // two pairs on 8 points, k=7; balance is 25 z2 - 15 z1
            Int z1 = std::uniform_int_distribution<Int>(1, 7)(rng);
            Int z2 = std::uniform_int_distribution<Int>(1, 9)(rng);
            ConstructionSpec spec;
            spec.v = 8;
            spec.k = 7;
            spec.pairs.push_back(rand_pair(round_robin_one_factorization(8),
                                           cyclic_orbit_resolution(8, 5),
                                           SimpleCore{7, 1}, SimpleCore{7, 1},
                                           z1));
            auto [l2, c2] = concatenate_resolution(cyclic_orbit_resolution(8, 3), 5);
            spec.pairs.push_back(rand_pair(std::move(l2),
                                           baranyai_parallelism(8, 4), c2,
                                           SimpleCore{35, 1}, z2));
            Int lam = 25 * z2 - 15 * z1;
            bool valid = lam == 0;
            if (lam == 5) {
                spec.filler = complete_design(8, 7);
                valid = true;
            } else if (lam > 0) {
                spec.filler = complete_design(8, 7);
            }
            if (z2 > 7) valid = false;  // annulus beyond the copy period
            return {std::move(spec), valid, false};
        }
        case 4: {  // full pair + half pair on 11 points, k=6
            Int z1 = std::uniform_int_distribution<Int>(1, 6)(rng);
            Int zh = std::uniform_int_distribution<Int>(1, 5)(rng);
            ConstructionSpec spec;
            spec.v = 11;
            spec.k = 6;
            spec.mode = Mode::II;
            auto [l, lc] = concatenate_resolution(cyclic_orbit_resolution(11, 2), 6);
            spec.pairs.push_back(rand_pair(std::move(l),
                                           cyclic_orbit_resolution(11, 4), lc,
                                           SimpleCore{30, 1}, z1));
            spec.half = rand_half(cyclic_orbit_resolution(11, 3), zh);
            spec.filler = complete_design(11, 6);
            return {std::move(spec), z1 + 2 * zh == 7 && z1 <= 5, false};
        }
        case 5: {  // annulus spans two copy periods: duplicates guaranteed
            Int z = std::uniform_int_distribution<Int>(13, 27)(rng);
            ConstructionSpec spec;
            spec.v = 12;
            spec.k = 5;
            auto [l, lc] =
                concatenate_resolution(round_robin_one_factorization(12), 5);
            spec.pairs.push_back(rand_pair(std::move(l),
                                           baranyai_parallelism(12, 3), lc,
                                           SimpleCore{55, 1}, z));
            return {std::move(spec), false, true};
        }
        default: {  // same shape inside the guard, filler fits at z=4
            ConstructionSpec spec;
            spec.v = 12;
            spec.k = 5;
            auto [l, lc] =
                concatenate_resolution(round_robin_one_factorization(12), 5);
            spec.pairs.push_back(rand_pair(std::move(l),
                                           baranyai_parallelism(12, 3), lc,
                                           SimpleCore{55, 1}, 4));
            spec.filler = complete_design(12, 5);
            return {std::move(spec), true, false};
        }
    }
}

void criterion_7() {
    const auto t0 = Clock::now();
    std::mt19937 rng(777);
    int n_valid = 0, n_guard = 0;
    for (int i = 0; i < 200; ++i) {
        RandomSpec rs = random_spec(i, rng);
        auto violations = validate_spec(rs.spec);
        if (rs.valid) {
            REQUIRE(violations.empty(),
                    "spec " << i << " flagged: " << violations.front().rule
                            << " (" << violations.front().detail << ")");
            VerifiedConstruction vc = construct_and_verify(rs.spec);
            REQUIRE(vc.profile.design_at(3), "spec " << i << " not a 3-design");
            REQUIRE_EQ(vc.profile.lambda[3], vc.assembled.counts.theta,
                       "spec " << i << " lambda_3 vs Theta");
            REQUIRE(is_simple(vc.assembled.design).simple,
                    "spec " << i << " repeats a block");
            ++n_valid;
        } else {
            REQUIRE(!violations.empty(), "spec " << i << " passed validation"
                                                 << " but was built invalid");
            if (rs.guard_negative) {
                bool guard = false;
                for (const auto& x : violations)
                    guard = guard || x.rule == "simplicity-guard";
                REQUIRE(guard, "spec " << i << " missed the repetition guard");
                SimplicityReport rep = is_simple(assemble_unvalidated(rs.spec).design);
                REQUIRE(!rep.simple && rep.multiplicity >= 2,
                        "spec " << i << " produced no duplicate witness");
                ++n_guard;
            }
        }
    }
    REQUIRE(n_valid >= 30, "only " << n_valid << " valid specs in the mix");
    REQUIRE(n_guard >= 20, "only " << n_guard << " negative-control specs");
    pass(7, "200 randomized specs: exact lambda on valid, duplicate witness on "
            "guard violations", seconds_since(t0), 0);
}

void criterion_8() {
    const auto t0 = Clock::now();
    namespace fs = std::filesystem;
    fs::create_directories("tmp_acceptance");
    const std::string good_path = "tmp_acceptance/filler86.txt";
    const Design good = complete_design(8, 6);
    write_design_text(good_path, good);

    // accepted: spec validates and assembles
    ConstructionSpec spec = family_gen_2k(8, 3, read_design(good_path));
    REQUIRE(validate_spec(spec).empty(), "valid filler file rejected");
    require_family(spec, 18, 504, "external-filler instance");

    // one block removed: rejected, and the error names the uneven counts
    std::vector<Point> flat(good.flat().begin(), good.flat().end() - 6);
    const std::string bad_path = "tmp_acceptance/filler86_short.txt";
    write_design_text(bad_path, Design::from_flat(8, 6, std::move(flat), true));
    bool rejected = false;
    std::string message;
    try {
        family_gen_2k(8, 3, read_design(bad_path));
    } catch (const Error& e) {
        rejected = true;
        message = e.what();
    }
    REQUIRE(rejected, "truncated filler file accepted");
    REQUIRE(message.find("saw 9 and 10") != std::string::npos,
            "rejection lacks the coverage witness: " << message);
    pass(8, "external filler file accepted; truncated copy rejected with "
            "witness", seconds_since(t0), 0);
}

void require_theta(const ConstructionSpec& spec, const Rational& want,
                   const std::string& name) {
    REQUIRE(want.integral(), name << " closed form is not integral");
    const Int got = compute_counts(spec).theta;
    REQUIRE(got == want.num, name << " Theta " << got << " != " << want.num);
}

void criterion_9() {
    const auto t0 = Clock::now();

    for (int v : {8, 14, 20, 26, 32, 38, 44, 50, 56})
        require_theta(family_thm_3_1(v),
                      Rational::of(3 * Int{v - 2} * (v - 4), 4),
                      "doubling v=" + std::to_string(v));

    require_theta(family_thm_3_2(5, std::nullopt), Rational::of(15 * 31, 1),
                  "projective doubling f=5");

    for (int v : {32, 44, 52})
        require_theta(family_thm_3_3(v, 1),
                      Rational::of(35 * Int{v} * (v - 2) * (v - 3), 4),
                      "two-pair doubling v=" + std::to_string(v));

    for (Int lam : {10, 60, 70, 90, 100, 150, 160})
        require_theta(family_thm_3_4(5, lam, std::nullopt),
                      Rational::of(31 * lam, 2),
                      "even doubling lam=" + std::to_string(lam));

    const auto cor2k_form = [](int v, int k) {
        return Rational::of(Int{k} * (v - 2) * binomial(v - 3, 2 * k - 3),
                            2 * Int{v - k});
    };
    for (int v : {8, 13, 16, 17, 20, 25, 28, 29, 32, 37, 40, 41, 44, 49, 52, 53, 56})
        require_theta(family_cor_2k(v, 3, false), cor2k_form(v, 3),
                      "half-block k=3 v=" + std::to_string(v));
    for (int v : {11, 15, 17, 21, 25, 27, 31, 35, 37, 41, 45, 47, 51, 55, 57})
        require_theta(family_cor_2k(v, 4, false), cor2k_form(v, 4),
                      "half-block k=4 v=" + std::to_string(v));
    for (int v : {14, 16, 22, 23, 41, 48, 49, 56, 57})
        require_theta(family_cor_2k(v, 5, false), cor2k_form(v, 5),
                      "half-block k=5 v=" + std::to_string(v));

    // balanced family, k=3: Theta* = (7/30) v (v-2)(v-3)(v-5) z1
    const auto ab3_form = [](int v, Int z1) {
        return Rational::of(7 * Int{v} * (v - 2) * (v - 3) * (v - 5) * z1, 30);
    };
    for (Int z1 = 1; z1 <= 8; ++z1)
        require_theta(family_thm_AB(17, 3, z1), ab3_form(17, z1),
                      "balanced v=17 z1=" + std::to_string(z1));
    for (Int z1 : {1, 9, 17})
        require_theta(family_cor_AB(35, 3, z1), ab3_form(35, z1),
                      "balanced v=35 z1=" + std::to_string(z1));
    for (Int z1 : {1, 11, 23})
        require_theta(family_cor_AB(47, 3, z1), ab3_form(47, z1),
                      "balanced v=47 z1=" + std::to_string(z1));

    // balanced family, k=4 at v=23: Theta* = 81 v C(v-2,6) z1 / (7(v-5))
    for (Int z1 : {1, 6, 11})
        require_theta(family_cor_AB(23, 4, z1),
                      Rational::of(81 * Int{23} * binomial(21, 6) * z1, 7 * 18),
                      "balanced k=4 z1=" + std::to_string(z1));

    pass(9, "closed-form regression over every admissible instance, v <= 60",
         seconds_since(t0), 0);
}

}  // namespace

int main() {
    std::cout.precision(2);
    std::cout << std::fixed;
    std::cerr.precision(2);
    std::cerr << std::fixed;
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    std::cerr << "acceptance: 9/9 criteria passed\n";
    return 0;
}
