#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polypick/errors.hpp"
#include "polypick/geometry.hpp"
#include "polypick/multipoly.hpp"
#include "polypick/rng.hpp"

namespace polypick {

constexpr double kDenominatorFloor = 1e-12;
constexpr double kInnerDefectTolerance = 1e-8;
constexpr double kDiscDegreeBoundaryBand = 1e-7;

/**
 * One-variable rational function num/den in reduced form. `inner` is set by
 * validation: unimodular on the sampled circle and pole-free on the closed
 * disc (to tolerance).
 */
struct OneVarRational {
    MultiPoly num{1};
    MultiPoly den{1};
    bool inner = false;

    int num_degree() const { return num.is_zero() ? 0 : num.degree_1d(); }
    int den_degree() const { return den.is_zero() ? 0 : den.degree_1d(); }

    Cx eval(Cx z) const {
        const Cx d = den.eval1(z);
        if (std::abs(d) < kDenominatorFloor)
            throw SingularPointError("OneVarRational::eval: denominator below floor");
        return num.eval1(z) / d;
    }
};

struct ReduceOptions {
    double pair_tol_scale = 1e-8;   ///< cancel pairs within pair_tol_scale * max(1, |root|)
    double ambiguity_factor = 10.0; ///< distances within this factor of the tolerance are ambiguous
    bool throw_on_ambiguity = true;
};

/**
 * Builds a reduced OneVarRational from numerator/denominator polynomials:
 * roots both sides, greedily cancels matched pairs, rebuilds from the
 * surviving roots, normalizes den(0) = 1 when possible, and validates the
 * inner property on a sampled circle.
 */
inline OneVarRational make_reduced_rational(const MultiPoly& num_in, const MultiPoly& den_in,
                                            const ReduceOptions& opt = {}) {
    if (num_in.nvars() != 1 || den_in.nvars() != 1)
        throw ArgumentError("make_reduced_rational: operands must be univariate");
    if (den_in.is_zero()) throw ArgumentError("make_reduced_rational: zero denominator");

    OneVarRational r;
    if (num_in.is_zero()) {
        r.num = MultiPoly(1);
        r.den = MultiPoly::constant(1, {1.0, 0.0});
        return r;
    }

    std::vector<Cx> nroots = roots_1d(num_in);
    std::vector<Cx> droots = roots_1d(den_in);
    const Cx nlead = num_in.coeff({num_in.degree_1d()});
    const Cx dlead = den_in.coeff({den_in.degree_1d()});

    auto pair_tol = [&](Cx root) { return opt.pair_tol_scale * std::max(1.0, std::abs(root)); };

    // Greedy closest-pair cancellation.
    while (!nroots.empty() && !droots.empty()) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < nroots.size(); ++i)
            for (std::size_t j = 0; j < droots.size(); ++j) {
                const double dist = std::abs(nroots[i] - droots[j]);
                if (dist < best) {
                    best = dist;
                    bi = i;
                    bj = j;
                }
            }
        if (best > pair_tol(nroots[bi])) {
            if (opt.throw_on_ambiguity && best <= opt.ambiguity_factor * pair_tol(nroots[bi]))
                throw ReductionUnstableError(
                    "make_reduced_rational: root pair at distance " + std::to_string(best) +
                    " is within a factor " + std::to_string(opt.ambiguity_factor) +
                    " of the pairing tolerance " + std::to_string(pair_tol(nroots[bi])));
            break;
        }
        nroots.erase(nroots.begin() + static_cast<std::ptrdiff_t>(bi));
        droots.erase(droots.begin() + static_cast<std::ptrdiff_t>(bj));
    }

    r.num = poly_from_roots(nlead, nroots);
    r.den = poly_from_roots(dlead, droots);

    const Cx d0 = r.den.coeff({0});
    if (std::abs(d0) > 1e-12 * std::max(1.0, r.den.max_coeff_modulus())) {
        const Cx inv = Cx{1.0, 0.0} / d0;
        r.num = inv * r.num;
        r.den = inv * r.den;
    }

    // Inner validation: no pole on the closed disc and |num| = |den| on T.
    bool pole_free = true;
    for (Cx s : droots)
        if (std::abs(s) <= 1.0 + kDiscDegreeBoundaryBand) pole_free = false;
    double defect = 0.0;
    for (int k = 0; k < 128; ++k) {
        const double theta = 2.0 * std::numbers::pi * (k + 0.5) / 128.0;
        const Cx zeta{std::cos(theta), std::sin(theta)};
        const double dm = std::abs(r.den.eval1(zeta));
        if (dm < kDenominatorFloor) {
            pole_free = false;
            continue;
        }
        defect = std::max(defect, std::abs(std::abs(r.num.eval1(zeta)) / dm - 1.0));
    }
    r.inner = pole_free && defect <= kInnerDefectTolerance;
    return r;
}

/**
 * Rational inner function in normal form tau * q~ / q with q~ = reflect(q, d):
 * tau unimodular, q non-vanishing on the open polydisc, d dominating the
 * multidegree of q. The numerator tau * reflect(q, d) is cached.
 */
struct RationalInnerFunction {
    Cx tau{1.0, 0.0};
    MultiIndex d;
    MultiPoly q{1};
    MultiPoly numerator{1};

    int nvars() const { return q.nvars(); }
    int degree() const { return index_total(d); }
};

inline int degree(const RationalInnerFunction& f) { return f.degree(); }

inline RationalInnerFunction make_rif(Cx tau, MultiIndex d, MultiPoly q, const StabilityGrid& grid) {
    if (!is_unimodular(tau)) throw ArgumentError("make_rif: tau must be unimodular");
    if (static_cast<int>(d.size()) != q.nvars())
        throw ArgumentError("make_rif: degree tuple length != number of variables");
    for (int x : d)
        if (x < 0) throw ArgumentError("make_rif: negative degree entry");
    if (q.is_zero()) throw ArgumentError("make_rif: zero denominator");
    if (!dominates(d, q.multidegree()))
        throw DominationError("make_rif: d does not dominate the multidegree of q");
    const StabilityReport report = is_stable(q, grid);
    if (!report.stable)
        throw StabilityError("make_rif: denominator vanishes on the open polydisc (min sampled modulus " +
                             std::to_string(report.min_modulus) + ")");
    RationalInnerFunction f;
    f.tau = tau;
    f.d = std::move(d);
    f.numerator = tau * reflect(q, f.d);
    f.q = std::move(q);
    return f;
}

inline RationalInnerFunction make_rif(Cx tau, MultiIndex d, MultiPoly q) {
    const StabilityGrid grid = StabilityGrid::for_dimension(q.nvars());
    return make_rif(tau, std::move(d), std::move(q), grid);
}

/**
 * Accepts a numerator/denominator pair only if it is verifiably in normal
 * form: recovers d and tau from the top coefficient and checks
 * num = tau * reflect(den, d) coefficientwise.
 */
inline RationalInnerFunction rif_from_fraction(const MultiPoly& num, const MultiPoly& den,
                                               const StabilityGrid& grid, double identity_tol = 1e-10) {
    if (num.nvars() != den.nvars()) throw ArgumentError("rif_from_fraction: nvars mismatch");
    if (num.is_zero()) throw ArgumentError("rif_from_fraction: zero numerator is not inner");
    const MultiIndex d = num.multidegree();
    if (!dominates(d, den.multidegree()))
        throw DominationError("rif_from_fraction: numerator multidegree does not dominate denominator's");
    const Cx den0 = den.coeff(MultiIndex(d.size(), 0));
    if (std::abs(den0) == 0.0) throw ArgumentError("rif_from_fraction: denominator constant term vanishes");
    Cx tau = num.coeff(d) / std::conj(den0);
    if (std::abs(std::abs(tau) - 1.0) > 1e-8)
        throw ArgumentError("rif_from_fraction: recovered constant is not unimodular");
    tau /= std::abs(tau);

    const MultiPoly expected = tau * reflect(den, d);
    const MultiPoly diff = expected - num;
    if (diff.max_coeff_modulus() > identity_tol * std::max(1.0, num.max_coeff_modulus()))
        throw ArgumentError("rif_from_fraction: pair is not in normal form (reflection identity fails, defect " +
                            std::to_string(diff.max_coeff_modulus()) + ")");
    return make_rif(tau, d, den, grid);
}

inline Cx eval_rif(const RationalInnerFunction& f, std::span<const Cx> z) {
    if (static_cast<int>(z.size()) != f.nvars())
        throw ArgumentError("eval_rif: point dimension mismatch");
    for (Cx zr : z)
        if (std::abs(zr) > 1.0 + kUnimodularTolerance)
            throw ArgumentError("eval_rif: point outside the closed polydisc");
    const Cx den = f.q.eval(z);
    if (std::abs(den) < kDenominatorFloor)
        throw SingularPointError("eval_rif: denominator modulus below 1e-12 at the requested point");
    return f.numerator.eval(z) / den;
}

inline Cx eval_rif(const RationalInnerFunction& f, std::initializer_list<Cx> z) {
    return eval_rif(f, std::span<const Cx>(z.begin(), z.size()));
}

/// Evaluates f on a one-dimensional analytic disc at base point z.
inline Cx eval_rif_on_disc(const RationalInnerFunction& f, const AnalyticDisc& disc, Cx z,
                           bool allow_boundary = false) {
    const std::vector<Cx> point = disc_eval(disc, z, allow_boundary);
    return eval_rif(f, std::span<const Cx>(point.data(), point.size()));
}

/**
 * Restriction of f to a one-dimensional analytic disc (flat or Mobius graph):
 * composes numerator and denominator with the parametrization, clears graph
 * denominators symbolically, cancels matched root pairs, and validates.
 * The reduced degree never exceeds degree(f).
 */
inline OneVarRational restrict_to_disc(const RationalInnerFunction& f, const AnalyticDisc& disc) {
    if (disc.n != f.nvars()) throw ArgumentError("restrict_to_disc: disc dimension mismatch");

    MultiPoly num1(1), den1(1);
    switch (disc.kind) {
        case DiscKind::flat: {
            std::vector<Cx> taus;
            taus.reserve(static_cast<std::size_t>(disc.n));
            taus.push_back({1.0, 0.0});
            for (Cx t : disc.multipliers) taus.push_back(t);
            num1 = restrict_flat(f.numerator, taus);
            den1 = restrict_flat(f.q, taus);
            break;
        }
        case DiscKind::mobius_graph: {
            const int clear_power = std::max(f.numerator.multidegree()[1], f.q.multidegree()[1]);
            num1 = substitute_mobius_graph(f.numerator, disc.m.t, disc.m.a, clear_power);
            den1 = substitute_mobius_graph(f.q, disc.m.t, disc.m.a, clear_power);
            break;
        }
        case DiscKind::coordinate_pairing:
            if (disc.n == 2) {
                num1 = substitute_last_pairing(f.numerator, std::conj(disc.rho));
                den1 = substitute_last_pairing(f.q, std::conj(disc.rho));
                break;
            }
            throw ArgumentError("restrict_to_disc: coordinate_pairing with n > 2 is not one-dimensional; "
                                "use restrict_pairing");
    }

    OneVarRational r = make_reduced_rational(num1, den1);
    if (r.num_degree() > f.degree())
        throw ReductionUnstableError("restrict_to_disc: reduced degree exceeds degree(f)");
    return r;
}

/**
 * Number of zeros of the restriction strictly inside the disc. Roots within
 * the band [1 - 1e-7, 1 + 1e-7] of the circle are treated as boundary and
 * not counted. Always at most degree(f); strictly less when f carries a
 * boundary singularity on the closure of the disc image.
 */
inline int disc_degree(const RationalInnerFunction& f, const AnalyticDisc& disc) {
    const OneVarRational r = restrict_to_disc(f, disc);
    if (r.num.is_zero() || r.num.degree_1d() == 0) return 0;
    int count = 0;
    for (Cx root : roots_1d(r.num))
        if (std::abs(root) < 1.0 - kDiscDegreeBoundaryBand) ++count;
    return count;
}

/**
 * Restriction of f to the coordinate-pairing disc
 * (z_1, ..., z_{n-1}) -> (z_1, ..., z_{n-1}, conj(rho) z_{n-1}); the result
 * is again a rational inner function in normal form, one variable down,
 * verified through the reflection identity.
 */
inline RationalInnerFunction restrict_pairing(const RationalInnerFunction& f, Cx rho) {
    if (f.nvars() < 2) throw ArgumentError("restrict_pairing: needs at least two variables");
    if (!is_unimodular(rho)) throw ArgumentError("restrict_pairing: rho not unimodular");
    const MultiPoly num = substitute_last_pairing(f.numerator, std::conj(rho));
    const MultiPoly den = substitute_last_pairing(f.q, std::conj(rho));
    return rif_from_fraction(num, den, StabilityGrid::coarse());
}

struct TorusSample {
    int angles = 64;
    double exclusion_rel = 1e-6;  ///< exclude torus points with |q| below this times the q scale
    int interior_samples = 100;
    double interior_radius = 0.97;
    std::uint64_t seed = 2024;

    static TorusSample for_dimension(int nvars) {
        TorusSample s;
        if (nvars >= 3) s.angles = 24;
        return s;
    }
};

struct InnerValidationReport {
    double max_torus_defect = 0.0;      ///< max | |f| - 1 | off the excluded set
    double max_interior_modulus = 0.0;
    std::vector<std::vector<Cx>> singular_suspects; ///< torus points with near-vanishing denominator
    int torus_angles = 0;
    int interior_samples = 0;
};

/// Samples | |f| - 1 | on the distinguished torus and |f| on interior points.
inline InnerValidationReport validate_inner(const RationalInnerFunction& f, const TorusSample& sample) {
    InnerValidationReport report;
    report.torus_angles = sample.angles;
    report.interior_samples = sample.interior_samples;

    const int n = f.nvars();
    const double qscale = f.q.max_coeff_modulus();
    std::vector<Cx> circle;
    circle.reserve(static_cast<std::size_t>(sample.angles));
    for (int k = 0; k < sample.angles; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / sample.angles;
        circle.push_back({std::cos(theta), std::sin(theta)});
    }

    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    std::vector<Cx> zeta(static_cast<std::size_t>(n), circle[0]);
    while (true) {
        const double qm = std::abs(f.q.eval(zeta));
        if (qm < sample.exclusion_rel * std::max(1.0, qscale)) {
            report.singular_suspects.push_back(zeta);
        } else {
            const double fm = std::abs(f.numerator.eval(zeta)) / qm;
            report.max_torus_defect = std::max(report.max_torus_defect, std::abs(fm - 1.0));
        }
        int r = 0;
        for (; r < n; ++r) {
            auto& i = idx[static_cast<std::size_t>(r)];
            if (++i < circle.size()) {
                zeta[static_cast<std::size_t>(r)] = circle[i];
                break;
            }
            i = 0;
            zeta[static_cast<std::size_t>(r)] = circle[0];
        }
        if (r == n) break;
    }

    detail::SplitMix64 rng(sample.seed);
    std::vector<Cx> z(static_cast<std::size_t>(n));
    for (int k = 0; k < sample.interior_samples; ++k) {
        for (auto& zr : z) zr = rng.in_disc(sample.interior_radius);
        report.max_interior_modulus =
            std::max(report.max_interior_modulus, std::abs(eval_rif(f, z)));
    }
    return report;
}

inline InnerValidationReport validate_inner(const RationalInnerFunction& f) {
    return validate_inner(f, TorusSample::for_dimension(f.nvars()));
}

/// Per-disc refined node counts N_k = disc_degree(f, D_k) + 1.
inline std::vector<int> refined_node_counts(const RationalInnerFunction& f, const NodeGrid& grid) {
    if (grid.n != f.nvars()) throw ArgumentError("refined_node_counts: dimension mismatch");
    std::vector<int> counts;
    counts.reserve(grid.discs.size());
    for (const auto& disc : grid.discs) counts.push_back(disc_degree(f, disc) + 1);
    return counts;
}

} // namespace polypick
