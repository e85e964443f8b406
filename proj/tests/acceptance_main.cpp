// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Every tolerance is pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "polypick/json_io.hpp"
#include "polypick/verify.hpp"
#include "support/generators.hpp"

using namespace polypick;
using polypick::detail::SplitMix64;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", number, name.c_str(), detail.c_str());
    if (!pass) ++failures;
}

RationalInnerFunction singular_example() {
    MultiPoly q(2);
    q.set_coeff({0, 0}, {2.0, 0.0});
    q.set_coeff({1, 0}, {-1.0, 0.0});
    q.set_coeff({0, 1}, {-1.0, 0.0});
    return make_rif(Cx{1.0, 0.0}, {1, 1}, q);
}

NodeGrid grid_with_diagonal() {
    NodeGridConfig config;
    config.multipliers = {{Cx{1.0, 0.0},
                           Cx{std::cos(2.0 * std::numbers::pi / 3.0), std::sin(2.0 * std::numbers::pi / 3.0)},
                           Cx{std::cos(4.0 * std::numbers::pi / 3.0), std::sin(4.0 * std::numbers::pi / 3.0)}}};
    return generate_nodes(3, 2, config);
}

// 1. Normal-form validity: random inner functions are unimodular on the
//    torus (off singular neighborhoods) and bounded by 1 inside.
void criterion_1() {
    const auto start = Clock::now();
    SplitMix64 rng(10001);
    double worst_defect = 0.0, worst_interior = 0.0;
    bool ok = true;
    for (int trial = 0; trial < 25; ++trial) {
        const RationalInnerFunction f = testing::random_rif2(rng, 4, /*allow_boundary_contact=*/true);
        TorusSample sample;
        sample.angles = 64;
        sample.interior_samples = 100;
        sample.seed = rng.next();
        const InnerValidationReport rep = validate_inner(f, sample);
        worst_defect = std::max(worst_defect, rep.max_torus_defect);
        worst_interior = std::max(worst_interior, rep.max_interior_modulus);
        ok = ok && rep.max_torus_defect <= 1e-9 && rep.max_interior_modulus <= 1.0 + 1e-12;
    }
    const double elapsed = seconds_since(start);
    ok = ok && elapsed < 5.0;
    char detail[256];
    std::snprintf(detail, sizeof(detail),
                  "25 random inner functions on the bidisc, max torus defect %.2e (<= 1e-9), "
                  "max interior modulus - 1 = %.2e (<= 1e-12), %.2f s (< 5 s)",
                  worst_defect, worst_interior - 1.0, elapsed);
    report(1, "normal-form validity on the torus and the interior", ok, detail);
}

// 2. Uniqueness certificates at n = 2, N = 3 for 20 random functions of
//    degree < 3, with the per-disc spectral bounds and cross-check residuals.
void criterion_2() {
    const auto start = Clock::now();
    SplitMix64 rng(20002);
    const NodeGrid grid = generate_nodes(3, 2);
    bool ok = true;
    double worst_min_eig = 0.0, worst_rel = 0.0, worst_resid = 0.0, worst_cross = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const RationalInnerFunction f = testing::random_rif2(rng, 2);
        CertifyOptions opts;
        opts.seed = 555 + static_cast<std::uint64_t>(trial);
        const UniquenessCertificate cert = certify_uniqueness(f, grid, opts);
        ok = ok && cert.overall;
        for (const auto& ev : cert.per_disc) {
            const double top = ev.spectrum.empty() ? 1.0 : ev.spectrum.back();
            worst_min_eig = std::min(worst_min_eig, ev.verdict.min_eigenvalue / top);
            worst_rel = std::max(worst_rel, std::abs(ev.verdict.smallest_relative_eigenvalue));
            worst_resid = std::max(worst_resid, ev.reconstruction_residual);
            ok = ok && ev.verdict.min_eigenvalue >= -1e-8 * top;
            ok = ok && std::abs(ev.verdict.smallest_relative_eigenvalue) <= 1e-6;
            ok = ok && ev.reconstruction_residual <= 1e-7;
        }
        ok = ok && cert.mobius.has_value();
        if (cert.mobius) {
            worst_cross = std::max({worst_cross, cert.mobius->reconstruction_residual,
                                    cert.mobius->consistency_residual});
            ok = ok && cert.mobius->reconstruction_residual <= 1e-7 &&
                 cert.mobius->consistency_residual <= 1e-7;
        }
    }
    const double elapsed = seconds_since(start);
    ok = ok && elapsed < 10.0;
    char detail[320];
    std::snprintf(detail, sizeof(detail),
                  "20 certificates (3 discs, 9 nodes): min eig >= %.1e * |P| (>= -1e-8), "
                  "rel singularity <= %.1e (<= 1e-6), residual <= %.1e (<= 1e-7), "
                  "cross-check <= %.1e (<= 1e-7), %.2f s (< 10 s)",
                  worst_min_eig, worst_rel, worst_resid, worst_cross, elapsed);
    report(2, "uniqueness certificates on the bidisc, N = 3", ok, detail);
}

// 3. Full chain at n = 3, N = 2 including the five-sample pairing sweep.
void criterion_3() {
    const auto start = Clock::now();
    SplitMix64 rng(30003);
    const NodeGrid grid = generate_nodes(2, 3);
    bool ok = grid.disc_count() == 4 && grid.nodes.size() == 8;
    int passed = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const RationalInnerFunction f = testing::random_rif3_deg1(rng);
        CertifyOptions opts;
        opts.seed = 777 + static_cast<std::uint64_t>(trial);
        const UniquenessCertificate cert = certify_uniqueness(f, grid, opts);
        ok = ok && cert.overall && cert.rho_sweep.size() == 5;
        for (const auto& rev : cert.rho_sweep) ok = ok && rev.pass;
        if (cert.overall) ++passed;
    }
    const double elapsed = seconds_since(start);
    ok = ok && elapsed < 20.0;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "%d/10 certificates pass (4 discs, 8 nodes, 5 rho samples), %.2f s (< 20 s)",
                  passed, elapsed);
    report(3, "uniqueness certificates on the tridisc, N = 2", ok, detail);
}

// 4. Graph-disc intersections: distinct in-disc roots with tiny residuals;
//    the a = 0 degeneration returns the origin exactly.
void criterion_4() {
    SplitMix64 rng(40004);
    bool ok = true;
    double worst_residual = 0.0, worst_gap = 1.0;
    for (int trial = 0; trial < 5; ++trial) {
        const auto taus = testing::random_distinct_unimodular(rng, 5);
        const MobiusChoice choice = choose_mobius(taus, 42 + static_cast<std::uint64_t>(trial));
        worst_residual = std::max(worst_residual, choice.intersections.max_residual);
        worst_gap = std::min(worst_gap, choice.intersections.min_pairwise_gap);
        ok = ok && choice.intersections.max_residual <= 1e-10;
        ok = ok && choice.intersections.min_pairwise_gap > 1e-6;
        for (const auto& pt : choice.intersections.per_disc) ok = ok && std::abs(pt.selected) < 1.0;

        const IntersectionResult degenerate =
            intersect_mobius_with_flat(taus, MobiusMap(choice.m.t, Cx{0.0, 0.0}));
        for (const auto& pt : degenerate.per_disc) ok = ok && pt.selected == Cx{0.0, 0.0};
    }
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "5 multiplier sets of size 5: max residual %.2e (<= 1e-10), min root gap %.2e "
                  "(> 1e-6), a = 0 roots all exactly 0",
                  worst_residual, worst_gap);
    report(4, "graph-disc intersections with flat discs", ok, detail);
}

// 5. Refined counts: the singular example restricts to -z on the diagonal
//    disc and certifies there with two nodes, saving at least one node.
void criterion_5() {
    const RationalInnerFunction f = singular_example();
    const NodeGrid grid = grid_with_diagonal();

    const OneVarRational r = restrict_to_disc(f, grid.discs[0]);
    const MultiPoly expected = MultiPoly::monomial(1, {1}, Cx{-1.0, 0.0});
    const double num_err = (r.num - expected).max_coeff_modulus();
    const double den_err = (r.den - MultiPoly::constant(1, {1.0, 0.0})).max_coeff_modulus();
    bool ok = num_err <= 1e-12 && den_err <= 1e-12;

    const UniquenessCertificate cert = refined_certify(f, grid);
    ok = ok && cert.overall;
    ok = ok && cert.per_disc[0].node_count == 2 && cert.per_disc[0].pass;
    ok = ok && cert.node_savings > 0;

    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "diagonal restriction -z to %.1e coefficientwise (<= 1e-12), refined pass with "
                  "N_0 = %d nodes, savings %d (> 0)",
                  std::max(num_err, den_err), cert.per_disc[0].node_count, cert.node_savings);
    report(5, "refined per-disc node counts for a singular function", ok, detail);
}

// 6. Sharpness: one node fewer than the restricted degree + 1 leaves a
//    positive definite matrix and two genuinely different interpolants.
void criterion_6() {
    SplitMix64 rng(60006);
    bool ok = true;
    double worst_rel = 1.0, worst_node = 0.0, worst_gap = 0.0, min_radius = 1.0;
    int demos = 0;

    const auto run_demo = [&](const RationalInnerFunction& f, const NodeGrid& grid, Cx z_star) {
        const SharpnessReport rep = sharpness_demo(f, grid, 0, z_star);
        ok = ok && rep.pass;
        ok = ok && rep.reduced_verdict.solvable && !rep.reduced_verdict.unique;
        if (!rep.kept_nodes.empty())
            worst_rel = std::min(worst_rel, rep.reduced_verdict.smallest_relative_eigenvalue);
        worst_node = std::max(worst_node, rep.max_node_residual);
        worst_gap = std::max(worst_gap, std::abs(rep.disagreement - 2.0 * rep.disc.radius));
        min_radius = std::min(min_radius, rep.disc.radius);
        ok = ok && rep.disc.radius > 1e-4;
        ok = ok && rep.max_node_residual <= 1e-9;
        ok = ok && std::abs(rep.disagreement - 2.0 * rep.disc.radius) <= 1e-8;
        ++demos;
    };

    const NodeGrid grid2 = generate_nodes(2, 2);
    for (int trial = 0; trial < 5; ++trial) {
        RationalInnerFunction f = testing::random_rif2(rng, 1);
        if (restrict_to_disc(f, grid2.discs[0]).num_degree() != 1) continue;
        run_demo(f, grid2, rng.in_disc(0.5));
    }
    const NodeGrid grid3 = generate_nodes(3, 2);
    for (int trial = 0; trial < 8 && demos < 8; ++trial) {
        RationalInnerFunction f = testing::random_rif2(rng, 2);
        if (f.degree() != 2) continue;
        if (restrict_to_disc(f, grid3.discs[0]).num_degree() != 2) continue;
        run_demo(f, grid3, rng.in_disc(0.5));
    }
    ok = ok && demos >= 5;

    char detail[260];
    std::snprintf(detail, sizeof(detail),
                  "%d demonstrations: reduced matrices PD with rel eig >= %.1e (>= 1e-6), node "
                  "residual <= %.1e (<= 1e-9), diameter mismatch <= %.1e (<= 1e-8), radius >= %.1e "
                  "(> 1e-4)",
                  demos, worst_rel, worst_node, worst_gap, min_radius);
    report(6, "sharpness: dropping a node breaks uniqueness", ok, detail);
}

// 7. One-variable equivalence: k+1 samples of a degree-k product are
//    determining, k samples are not.
void criterion_7() {
    SplitMix64 rng(70007);
    bool ok = true;
    double worst_match = 0.0;
    for (int trial = 0; trial < 30; ++trial) {
        const int k = 1 + static_cast<int>(rng.next() % 5);
        const RationalInnerFunction f = testing::random_blaschke(rng, k);
        const auto zeros = testing::blaschke_zeros(f);
        const auto nodes = testing::random_separated_nodes(rng, k + 1);

        PickProblem full;
        for (Cx z : nodes) {
            full.nodes.push_back(z);
            full.targets.push_back(testing::blaschke_eval(zeros, f.tau, z));
        }
        const PickMatrix fm = build_pick_matrix(full);
        const UniquenessVerdict fv = classify(fm);
        ok = ok && fv.unique;

        const OneVarRational g = reconstruct_unique(full, fm);
        for (int t = 0; t < 50; ++t) {
            const Cx z = rng.in_disc(0.9);
            const double err = std::abs(g.eval(z) - testing::blaschke_eval(zeros, f.tau, z));
            worst_match = std::max(worst_match, err);
            ok = ok && err <= 1e-8;
        }

        PickProblem under = full;
        under.nodes.pop_back();
        under.targets.pop_back();
        const UniquenessVerdict uv = classify(build_pick_matrix(under));
        ok = ok && uv.solvable && !uv.unique;
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "30 products of degree 1..5: k+1 samples unique with match <= %.1e (<= 1e-8), "
                  "k samples non-unique",
                  worst_match);
    report(7, "one-variable determinacy spot check", ok, detail);
}

// 8. Mutation soundness: a 1e-3 perturbation of any single sampled target
//    must break the certificate nearly always.
void criterion_8() {
    SplitMix64 rng(80008);
    const RationalInnerFunction f = singular_example();
    const NodeGrid grid = grid_with_diagonal();
    CertifyOptions base;
    base.seed = 313;
    if (!certify_uniqueness(f, grid, base).overall) {
        report(8, "mutation soundness", false, "baseline certificate unexpectedly failed");
        return;
    }
    const long targets = certify_target_count(grid);
    int flipped = 0;
    for (int trial = 0; trial < 100; ++trial) {
        CertifyOptions opts = base;
        opts.mutate_target = static_cast<long>(rng.next() % static_cast<std::uint64_t>(targets));
        opts.mutate_delta = 1e-3 * rng.unimodular();
        if (!certify_uniqueness(f, grid, opts).overall) ++flipped;
    }
    const bool ok = flipped >= 95;
    char detail[120];
    std::snprintf(detail, sizeof(detail), "%d/100 mutated runs detected (>= 95)", flipped);
    report(8, "mutation soundness of the certificate", ok, detail);
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
