#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "polypick/rif.hpp"
#include "support/generators.hpp"

using namespace polypick;
using polypick::detail::SplitMix64;

namespace {

MultiPoly two_minus_sum() {
    MultiPoly p(2);
    p.set_coeff({0, 0}, {2.0, 0.0});
    p.set_coeff({1, 0}, {-1.0, 0.0});
    p.set_coeff({0, 1}, {-1.0, 0.0});
    return p;
}

// f = (2 z1 z2 - z1 - z2) / (2 - z1 - z2), the running singular example.
RationalInnerFunction worked_example() {
    return make_rif(Cx{1.0, 0.0}, {1, 1}, two_minus_sum());
}

} // namespace

TEST_CASE("normal-form construction") {
    SECTION("coordinate function") {
        const auto f = make_rif(Cx{1.0, 0.0}, {1, 0}, MultiPoly::constant(2, {1.0, 0.0}));
        CHECK(f.numerator == MultiPoly::monomial(2, {1, 0}));
        CHECK(f.degree() == 1);
        CHECK(eval_rif(f, {Cx{0.3, 0.1}, Cx{-0.5, 0.2}}) == Cx{0.3, 0.1});
    }
    SECTION("worked bidisc example caches the reflected numerator") {
        const auto f = worked_example();
        CHECK(f.numerator.coeff({1, 1}) == Cx{2.0, 0.0});
        CHECK(f.numerator.coeff({1, 0}) == Cx{-1.0, 0.0});
        CHECK(f.numerator.coeff({0, 1}) == Cx{-1.0, 0.0});
        CHECK(f.degree() == 2);
    }
    SECTION("degree-zero constant") {
        const auto f = make_rif(Cx{1.0, 0.0}, {0, 0}, MultiPoly::constant(2, {1.0, 0.0}));
        CHECK(f.degree() == 0);
        CHECK(eval_rif(f, {Cx{0.1, 0.0}, Cx{0.2, 0.0}}) == Cx{1.0, 0.0});
    }
    SECTION("rejections") {
        MultiPoly unstable(2);
        unstable.set_coeff({0, 0}, {-0.5, 0.0});
        unstable.set_coeff({1, 0}, {1.0, 0.0});
        CHECK_THROWS_AS(make_rif(Cx{1.0, 0.0}, {1, 0}, unstable), StabilityError);
        CHECK_THROWS_AS(make_rif(Cx{0.5, 0.0}, {1, 1}, two_minus_sum()), ArgumentError);
        CHECK_THROWS_AS(make_rif(Cx{1.0, 0.0}, {1, 0}, two_minus_sum()), DominationError);
    }
}

TEST_CASE("evaluation") {
    const auto f = worked_example();
    CHECK(eval_rif(f, {Cx{0.0, 0.0}, Cx{0.0, 0.0}}) == Cx{0.0, 0.0});
    CHECK(std::abs(eval_rif(f, {Cx{0.5, 0.0}, Cx{0.5, 0.0}}) - Cx{-0.5, 0.0}) < 1e-15);
    CHECK_THROWS_AS(eval_rif(f, {Cx{1.0, 0.0}, Cx{1.0, 0.0}}), SingularPointError);
    CHECK_THROWS_AS(eval_rif(f, {Cx{1.5, 0.0}, Cx{0.0, 0.0}}), ArgumentError);
}

TEST_CASE("restriction to analytic discs") {
    const AnalyticDisc diagonal = AnalyticDisc::flat({Cx{1.0, 0.0}});

    SECTION("monomial composes to z^2") {
        const auto f = make_rif(Cx{1.0, 0.0}, {1, 1}, MultiPoly::constant(2, {1.0, 0.0}));
        const OneVarRational r = restrict_to_disc(f, diagonal);
        CHECK(r.num_degree() == 2);
        CHECK(std::abs(r.num.coeff({2}) - Cx{1.0, 0.0}) < 1e-14);
        CHECK(r.inner);
    }
    SECTION("singular example cancels the boundary pair to -z") {
        const OneVarRational r = restrict_to_disc(worked_example(), diagonal);
        CHECK(r.num_degree() == 1);
        const MultiPoly expected_num = MultiPoly::monomial(1, {1}, Cx{-1.0, 0.0});
        CHECK((r.num - expected_num).max_coeff_modulus() <= 1e-12);
        CHECK((r.den - MultiPoly::constant(1, {1.0, 0.0})).max_coeff_modulus() <= 1e-12);
        CHECK(r.inner);
    }
    SECTION("first coordinate is unchanged along a graph disc") {
        const auto f = make_rif(Cx{1.0, 0.0}, {1, 0}, MultiPoly::constant(2, {1.0, 0.0}));
        const AnalyticDisc graph =
            AnalyticDisc::mobius_graph(MobiusMap(Cx{0.0, 1.0}, Cx{0.2, -0.1}));
        const OneVarRational r = restrict_to_disc(f, graph);
        CHECK(r.num_degree() == 1);
        CHECK((r.num - MultiPoly::monomial(1, {1})).max_coeff_modulus() <= 1e-12);
        CHECK(r.inner);
    }
}

TEST_CASE("restriction commutes with evaluation") {
    SplitMix64 rng(91);
    for (int trial = 0; trial < 6; ++trial) {
        const RationalInnerFunction f = testing::random_rif2(rng, 4);
        const AnalyticDisc disc = AnalyticDisc::flat({rng.unimodular()});
        const OneVarRational r = restrict_to_disc(f, disc);
        CHECK(r.num_degree() <= f.degree());
        for (int k = 0; k < 50; ++k) {
            const Cx z = rng.in_disc(0.95);
            CHECK(std::abs(r.eval(z) - eval_rif_on_disc(f, disc, z)) < 1e-10);
        }
    }
    // graph discs as well
    for (int trial = 0; trial < 4; ++trial) {
        const RationalInnerFunction f = testing::random_rif2(rng, 3);
        const AnalyticDisc disc =
            AnalyticDisc::mobius_graph(MobiusMap(rng.unimodular(), rng.in_disc(0.4)));
        const OneVarRational r = restrict_to_disc(f, disc);
        CHECK(r.num_degree() <= f.degree());
        for (int k = 0; k < 50; ++k) {
            const Cx z = rng.in_disc(0.9);
            CHECK(std::abs(r.eval(z) - eval_rif_on_disc(f, disc, z)) < 1e-10);
        }
    }
}

TEST_CASE("disc degree") {
    const AnalyticDisc diagonal = AnalyticDisc::flat({Cx{1.0, 0.0}});
    const auto monomial = make_rif(Cx{1.0, 0.0}, {1, 1}, MultiPoly::constant(2, {1.0, 0.0}));
    CHECK(disc_degree(monomial, diagonal) == 2);

    // boundary singularity at (1,1) drops the count below degree(f) = 2
    CHECK(disc_degree(worked_example(), diagonal) == 1);

    const auto constant = make_rif(Cx{0.0, 1.0}, {0, 0}, MultiPoly::constant(2, {1.0, 0.0}));
    CHECK(disc_degree(constant, diagonal) == 0);
}

TEST_CASE("inner validation") {
    SECTION("coordinate function has no torus defect") {
        const auto f = make_rif(Cx{1.0, 0.0}, {1, 0}, MultiPoly::constant(2, {1.0, 0.0}));
        const auto report = validate_inner(f);
        CHECK(report.max_torus_defect == 0.0);
        CHECK(report.singular_suspects.empty());
        CHECK(report.max_interior_modulus <= 1.0 + 1e-12);
    }
    SECTION("singular example: tiny defect off the excluded corner") {
        const auto report = validate_inner(worked_example());
        CHECK(report.max_torus_defect <= 1e-9);
        REQUIRE(report.singular_suspects.size() == 1);
        CHECK(std::abs(report.singular_suspects[0][0] - Cx{1.0, 0.0}) < 1e-14);
        CHECK(std::abs(report.singular_suspects[0][1] - Cx{1.0, 0.0}) < 1e-14);
    }
    SECTION("constant function") {
        const auto f = make_rif(Cx{1.0, 0.0}, {0, 0}, MultiPoly::constant(2, {1.0, 0.0}));
        const auto report = validate_inner(f);
        CHECK(report.max_torus_defect == 0.0);
        CHECK(report.max_interior_modulus == 1.0);
    }
}

TEST_CASE("modulus bound over random inner functions") {
    SplitMix64 rng(140);
    for (int trial = 0; trial < 25; ++trial) {
        const RationalInnerFunction f = testing::random_rif2(rng, 4);
        for (int k = 0; k < 100; ++k) {
            const std::vector<Cx> z{rng.in_disc(0.97), rng.in_disc(0.97)};
            CHECK(std::abs(eval_rif(f, z)) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("normal-form recovery from a numerator/denominator pair") {
    const auto f = worked_example();
    const auto g = rif_from_fraction(f.numerator, f.q, StabilityGrid::for_dimension(2));
    CHECK(g.d == f.d);
    CHECK(std::abs(g.tau - f.tau) < 1e-12);
    CHECK(g.q == f.q);

    // a pair that is not inner-normalizable is rejected
    const MultiPoly num = MultiPoly::monomial(2, {1, 1}, Cx{0.5, 0.0});
    CHECK_THROWS_AS(rif_from_fraction(num, two_minus_sum(), StabilityGrid::for_dimension(2)),
                    ArgumentError);
}

TEST_CASE("pairing restriction produces a normal-form inner function") {
    SplitMix64 rng(77);
    for (int trial = 0; trial < 5; ++trial) {
        const RationalInnerFunction f = testing::random_rif3_deg1(rng);
        const Cx rho = rng.unimodular();
        const RationalInnerFunction f_rho = restrict_pairing(f, rho);
        CHECK(f_rho.nvars() == 2);
        CHECK(f_rho.degree() == f.degree());
        for (int k = 0; k < 30; ++k) {
            const Cx z1 = rng.in_disc(0.9), z2 = rng.in_disc(0.9);
            const std::vector<Cx> lifted{z1, z2, std::conj(rho) * z2};
            CHECK(std::abs(eval_rif(f_rho, {z1, z2}) - eval_rif(f, lifted)) < 1e-12);
        }
    }
    // a genuinely three-variable example
    MultiPoly q(3);
    q.set_coeff({0, 0, 0}, {3.0, 0.0});
    q.set_coeff({1, 0, 0}, {-0.5, 0.0});
    q.set_coeff({0, 1, 0}, {-0.5, 0.0});
    q.set_coeff({0, 0, 1}, {-0.5, 0.0});
    const auto f = make_rif(Cx{1.0, 0.0}, {1, 1, 1}, q);
    const Cx rho{0.0, 1.0};
    const RationalInnerFunction f_rho = restrict_pairing(f, rho);
    CHECK(f_rho.degree() == 3);
    CHECK(f_rho.d == MultiIndex{1, 2});
    SplitMix64 rng2(78);
    for (int k = 0; k < 30; ++k) {
        const Cx z1 = rng2.in_disc(0.9), z2 = rng2.in_disc(0.9);
        const std::vector<Cx> lifted{z1, z2, std::conj(rho) * z2};
        CHECK(std::abs(eval_rif(f_rho, {z1, z2}) - eval_rif(f, lifted)) < 1e-12);
    }
}

TEST_CASE("refined node counts") {
    NodeGridConfig config;
    config.multipliers = {{Cx{1.0, 0.0},
                           Cx{std::cos(2.0 * std::numbers::pi / 3.0), std::sin(2.0 * std::numbers::pi / 3.0)},
                           Cx{std::cos(4.0 * std::numbers::pi / 3.0), std::sin(4.0 * std::numbers::pi / 3.0)}}};
    const NodeGrid grid = generate_nodes(3, 2, config);

    const auto monomial = make_rif(Cx{1.0, 0.0}, {1, 1}, MultiPoly::constant(2, {1.0, 0.0}));
    const auto counts_monomial = refined_node_counts(monomial, grid);
    CHECK(counts_monomial[0] == 3); // diagonal disc: double zero, no savings

    const auto counts_singular = refined_node_counts(worked_example(), grid);
    CHECK(counts_singular[0] == 2); // boundary singularity saves a node
    CHECK(counts_singular[1] == 3);
    CHECK(counts_singular[2] == 3);

    const auto constant = make_rif(Cx{1.0, 0.0}, {0, 0}, MultiPoly::constant(2, {1.0, 0.0}));
    for (int c : refined_node_counts(constant, grid)) CHECK(c == 1);
}

TEST_CASE("ambiguous root pairs abort the reduction") {
    // roots 5e-8 apart: too far to cancel at 1e-8, too close to keep apart
    MultiPoly num(1), den(1);
    num.set_coeff({0}, {-(0.5 + 5e-8), 0.0});
    num.set_coeff({1}, {1.0, 0.0});
    den.set_coeff({0}, {-0.5, 0.0});
    den.set_coeff({1}, {1.0, 0.0});
    CHECK_THROWS_AS(make_reduced_rational(num, den), ReductionUnstableError);

    // well-separated roots reduce without complaint
    den.set_coeff({0}, {-0.2, 0.0});
    CHECK_NOTHROW(make_reduced_rational(num, den));
}

TEST_CASE("reduced rational validation flags") {
    // num and den sharing no roots, poles outside the closed disc -> inner
    MultiPoly num(1), den(1);
    num.set_coeff({0}, {-0.3, 0.0});
    num.set_coeff({1}, {1.0, 0.0});
    den.set_coeff({0}, {1.0, 0.0});
    den.set_coeff({1}, {-0.3, 0.0});
    const OneVarRational blaschke = make_reduced_rational(num, den);
    CHECK(blaschke.inner);

    // pole inside the disc -> not inner
    MultiPoly den2(1);
    den2.set_coeff({0}, {1.0, 0.0});
    den2.set_coeff({1}, {-2.0, 0.0});
    const OneVarRational not_inner = make_reduced_rational(num, den2);
    CHECK_FALSE(not_inner.inner);
}
