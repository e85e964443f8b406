#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polypick/errors.hpp"
#include "polypick/geometry.hpp"
#include "polypick/pick.hpp"
#include "polypick/rif.hpp"
#include "polypick/rng.hpp"

namespace polypick {

struct CertifyTolerances {
    double psd = 1e-9;
    double rank = 1e-7;
    double recon_residual = 1e-7;
    double cross_residual = 1e-7;
    double intersect_residual = 1e-10;
};

/// Five evenly spread points on the upper half circle (8th-root subset).
inline std::vector<Cx> default_rho_samples() {
    std::vector<Cx> rho;
    for (int k = 0; k <= 4; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / 8.0;
        rho.push_back({std::cos(theta), std::sin(theta)});
    }
    return rho;
}

struct CertifyOptions {
    std::uint64_t seed = 1;
    int fresh_points = 50;
    double fresh_radius = 0.9;
    std::vector<Cx> rho_samples = default_rho_samples();
    CertifyTolerances tol;
    /// Mutation hook for soundness tests: adds mutate_delta to the sampled
    /// target with this global index (flat targets disc-major first, then
    /// cross-check targets, then the rho sub-chains in order). -1 disables.
    long mutate_target = -1;
    Cx mutate_delta{0.0, 0.0};
};

struct DiscEvidence {
    int disc_index = 0;
    std::vector<Cx> multipliers;
    int node_count = 0;
    int restricted_degree = 0;
    int interior_zero_count = 0;
    UniquenessVerdict verdict;
    std::vector<double> spectrum;
    double reconstruction_residual = 0.0;
    bool pass = false;
    std::string failure;
};

struct MobiusEvidence {
    MobiusMap m;
    double epsilon = 0.0;
    std::vector<Cx> points;
    double max_intersection_residual = 0.0;
    double min_point_gap = 0.0;
    int restricted_degree = 0;
    UniquenessVerdict verdict;
    std::vector<double> spectrum;
    double reconstruction_residual = 0.0;
    double consistency_residual = 0.0;
    bool pass = false;
    std::string failure;
};

/**
 * Executable uniqueness certificate: per-disc restriction degrees, Pick
 * spectra, reconstruction residuals, and the dimension-specific cross
 * checks. `overall` holds exactly when every recorded stage passed. The
 * certificate checks the hypothesis chain on f itself; it does not (and
 * cannot) enumerate Schur-class competitors.
 */
struct UniquenessCertificate {
    std::string kind = "full"; // "full" or "refined"
    int n = 0;
    int N = 0;
    int f_degree = 0;
    std::uint64_t seed = 0;
    CertifyTolerances tol;
    std::vector<DiscEvidence> per_disc;
    std::optional<MobiusEvidence> mobius;

    struct RhoEvidence {
        Cx rho{1.0, 0.0};
        std::shared_ptr<UniquenessCertificate> sub;
        bool pass = false;
    };
    std::vector<RhoEvidence> rho_sweep;

    int node_savings = 0; // refined chain only
    bool overall = false;
    std::string semantics =
        "certifies the hypothesis chain on the given function; does not enumerate competing interpolants";
    std::vector<std::string> caveats;
};

namespace detail {

struct MutationCounter {
    long next = 0;
    long target = -1;
    Cx delta{0.0, 0.0};

    Cx apply(Cx w) {
        if (next++ == target) return w + delta;
        return w;
    }
};

inline std::vector<double> spectrum_of(const PickMatrix& m) {
    std::vector<double> s(static_cast<std::size_t>(m.eigenvalues.size()));
    for (Eigen::Index i = 0; i < m.eigenvalues.size(); ++i) s[static_cast<std::size_t>(i)] = m.eigenvalues(i);
    return s;
}

inline double reconstruction_residual(const OneVarRational& g, const RationalInnerFunction& f,
                                      const AnalyticDisc& disc, std::uint64_t seed, int count,
                                      double radius) {
    SplitMix64 rng(seed);
    double worst = 0.0;
    for (int k = 0; k < count; ++k) {
        const Cx w = rng.in_disc(radius);
        worst = std::max(worst, std::abs(g.eval(w) - eval_rif_on_disc(f, disc, w)));
    }
    return worst;
}

inline UniquenessCertificate certify_impl(const RationalInnerFunction& f, const NodeGrid& grid,
                                          const CertifyOptions& opts, bool refined,
                                          MutationCounter& mutation);

} // namespace detail

inline UniquenessCertificate certify_uniqueness(const RationalInnerFunction& f, const NodeGrid& grid,
                                                const CertifyOptions& opts = {}) {
    detail::MutationCounter mutation{0, opts.mutate_target, opts.mutate_delta};
    return detail::certify_impl(f, grid, opts, /*refined=*/false, mutation);
}

inline UniquenessCertificate refined_certify(const RationalInnerFunction& f, const NodeGrid& grid,
                                             const CertifyOptions& opts = {}) {
    detail::MutationCounter mutation{0, opts.mutate_target, opts.mutate_delta};
    return detail::certify_impl(f, grid, opts, /*refined=*/true, mutation);
}

namespace detail {

inline UniquenessCertificate certify_impl(const RationalInnerFunction& f, const NodeGrid& grid,
                                          const CertifyOptions& opts, bool refined,
                                          MutationCounter& mutation) {
    if (grid.n != f.nvars())
        throw ArgumentError("certify: grid dimension does not match the function");
    if (f.degree() >= grid.N)
        throw PreconditionError("certify: requires degree(f) < N, got degree " +
                                std::to_string(f.degree()) + " with N = " + std::to_string(grid.N));
    if (grid.n > 3)
        throw PreconditionError("certify: the certification chain is implemented for n <= 3");

    UniquenessCertificate cert;
    cert.kind = refined ? "refined" : "full";
    cert.n = grid.n;
    cert.N = grid.N;
    cert.f_degree = f.degree();
    cert.seed = opts.seed;
    cert.tol = opts.tol;

    std::vector<std::optional<OneVarRational>> flat_recons(grid.discs.size());

    for (std::size_t k = 0; k < grid.discs.size(); ++k) {
        const AnalyticDisc& disc = grid.discs[k];
        DiscEvidence ev;
        ev.disc_index = static_cast<int>(k);
        ev.multipliers = disc.multipliers;
        try {
            const OneVarRational restricted = restrict_to_disc(f, disc);
            ev.restricted_degree = restricted.num_degree();
            int interior = 0;
            if (!restricted.num.is_zero() && restricted.num.degree_1d() > 0)
                for (Cx root : roots_1d(restricted.num))
                    if (std::abs(root) < 1.0 - kDiscDegreeBoundaryBand) ++interior;
            ev.interior_zero_count = interior;

            ev.node_count = refined ? interior + 1 : grid.N;
            cert.node_savings += grid.N - ev.node_count;

            PickProblem problem;
            for (int j = 0; j < ev.node_count; ++j) {
                const Cx z = grid.base_points[k][static_cast<std::size_t>(j)];
                problem.nodes.push_back(z);
                problem.targets.push_back(mutation.apply(eval_rif_on_disc(f, disc, z)));
            }
            const PickMatrix matrix = build_pick_matrix(problem, {opts.tol.psd, opts.tol.rank});
            ev.spectrum = spectrum_of(matrix);
            ev.verdict = classify(matrix, {opts.tol.psd, opts.tol.rank});
            if (!ev.verdict.unique) {
                ev.failure = "pick matrix is not singular positive semi-definite";
            } else if (ev.restricted_degree >= ev.node_count) {
                ev.failure = "restricted degree not below the node count";
            } else {
                const OneVarRational recon = reconstruct_unique(problem, matrix, {opts.tol.psd, opts.tol.rank});
                ev.reconstruction_residual = reconstruction_residual(
                    recon, f, disc, derive_seed(opts.seed, 1000 + k), opts.fresh_points, opts.fresh_radius);
                if (ev.reconstruction_residual > opts.tol.recon_residual)
                    ev.failure = "reconstruction residual above tolerance";
                else
                    flat_recons[k] = recon;
            }
        } catch (const Error& e) {
            ev.failure = e.what();
        }
        ev.pass = ev.failure.empty();
        cert.per_disc.push_back(std::move(ev));
    }

    if (grid.n == 2) {
        MobiusEvidence ev;
        try {
            const std::vector<Cx>& taus = grid.tau_table.at(0);
            const MobiusChoice choice =
                choose_mobius(taus, derive_seed(opts.seed, 7));
            ev.m = choice.m;
            ev.epsilon = choice.epsilon;
            ev.max_intersection_residual = choice.intersections.max_residual;
            ev.min_point_gap = choice.intersections.min_pairwise_gap;

            const AnalyticDisc graph = AnalyticDisc::mobius_graph(choice.m);
            const OneVarRational restricted = restrict_to_disc(f, graph);
            ev.restricted_degree = restricted.num_degree();

            PickProblem problem;
            for (const auto& pt : choice.intersections.per_disc) {
                ev.points.push_back(pt.selected);
                problem.nodes.push_back(pt.selected);
                problem.targets.push_back(mutation.apply(eval_rif_on_disc(f, graph, pt.selected)));
            }
            const PickMatrix matrix = build_pick_matrix(problem, {opts.tol.psd, opts.tol.rank});
            ev.spectrum = spectrum_of(matrix);
            ev.verdict = classify(matrix, {opts.tol.psd, opts.tol.rank});

            if (ev.max_intersection_residual > opts.tol.intersect_residual) {
                ev.failure = "intersection residual above tolerance";
            } else if (ev.restricted_degree >= grid.N) {
                ev.failure = "graph-disc restricted degree not below N";
            } else if (!ev.verdict.unique) {
                ev.failure = "graph-disc pick matrix is not singular positive semi-definite";
            } else {
                const OneVarRational recon = reconstruct_unique(problem, matrix, {opts.tol.psd, opts.tol.rank});
                ev.reconstruction_residual = reconstruction_residual(
                    recon, f, graph, derive_seed(opts.seed, 2000), opts.fresh_points, opts.fresh_radius);
                for (std::size_t i = 0; i < grid.discs.size(); ++i) {
                    if (!flat_recons[i]) continue;
                    const Cx at = choice.intersections.per_disc[i].selected;
                    ev.consistency_residual = std::max(
                        ev.consistency_residual, std::abs(recon.eval(at) - flat_recons[i]->eval(at)));
                }
                if (ev.reconstruction_residual > opts.tol.cross_residual)
                    ev.failure = "graph-disc reconstruction residual above tolerance";
                else if (ev.consistency_residual > opts.tol.cross_residual)
                    ev.failure = "graph/flat reconstruction values disagree at the intersection points";
            }
        } catch (const Error& e) {
            ev.failure = e.what();
        }
        ev.pass = ev.failure.empty();
        cert.mobius = std::move(ev);
    }

    if (grid.n == 3) {
        cert.caveats.push_back("the pairing-disc family is sampled at " +
                               std::to_string(opts.rho_samples.size()) +
                               " values of rho; the full family is a continuum");
        for (std::size_t k = 0; k < opts.rho_samples.size(); ++k) {
            UniquenessCertificate::RhoEvidence rev;
            rev.rho = opts.rho_samples[k];
            try {
                const RationalInnerFunction f_rho = restrict_pairing(f, rev.rho);
                NodeGridConfig sub_config;
                sub_config.seed = derive_seed(opts.seed, 3000 + k);
                const NodeGrid sub_grid = generate_nodes(grid.N, 2, sub_config);
                CertifyOptions sub_opts = opts;
                sub_opts.seed = derive_seed(opts.seed, 4000 + k);
                sub_opts.mutate_target = -1; // the shared counter below handles mutation
                MutationCounter& shared = mutation;
                rev.sub = std::make_shared<UniquenessCertificate>(
                    certify_impl(f_rho, sub_grid, sub_opts, refined, shared));
                rev.pass = rev.sub->overall;
            } catch (const Error& e) {
                rev.pass = false;
                auto sub = std::make_shared<UniquenessCertificate>();
                sub->caveats.push_back(std::string("stage error: ") + e.what());
                rev.sub = std::move(sub);
            }
            cert.rho_sweep.push_back(std::move(rev));
        }
    }

    cert.overall = true;
    for (const auto& ev : cert.per_disc) cert.overall = cert.overall && ev.pass;
    if (cert.mobius) cert.overall = cert.overall && cert.mobius->pass;
    for (const auto& rev : cert.rho_sweep) cert.overall = cert.overall && rev.pass;
    return cert;
}

} // namespace detail

/// Flat-target count of a certificate run, for addressing the mutation hook.
inline long certify_target_count(const NodeGrid& grid, const CertifyOptions& opts = {}) {
    long count = static_cast<long>(grid.discs.size()) * grid.N;
    if (grid.n == 2) count += grid.N;
    if (grid.n == 3)
        count += static_cast<long>(opts.rho_samples.size()) * (static_cast<long>(grid.N) * grid.N + grid.N);
    return count;
}

struct SharpnessChecks {
    double node_residual = 1e-9;      ///< both interpolants must match the kept data this well
    double disagreement = 1e-8;       ///< |g1(z*) - g2(z*)| must equal 2 radius this well
    double min_radius = 1e-4;         ///< the value disc must be at least this wide
    double min_relative_eigenvalue = 1e-6; ///< reduced matrix must be this far from singular
};

struct SharpnessReport {
    int disc_index = 0;
    Cx z_star{0.0, 0.0};
    int restricted_degree = 0;
    std::vector<Cx> kept_nodes;
    std::vector<Cx> kept_targets;
    Cx dropped_node{0.0, 0.0};
    UniquenessVerdict reduced_verdict;
    std::vector<double> spectrum;
    ValueDisc disc;
    OneVarRational first;
    OneVarRational second;
    Cx value_first{0.0, 0.0};
    Cx value_second{0.0, 0.0};
    double disagreement = 0.0;
    double max_node_residual = 0.0;
    bool pass = false;
    std::string failure;
};

/**
 * Sharpness companion: on a disc whose restriction has degree exactly N-1,
 * dropping one node leaves a positive definite Pick matrix and two distinct
 * interpolants through the remaining data, disagreeing at z* by the full
 * value-disc diameter.
 */
inline SharpnessReport sharpness_demo(const RationalInnerFunction& f, const NodeGrid& grid,
                                      int disc_index, Cx z_star, const CertifyOptions& opts = {},
                                      const SharpnessChecks& checks = {}) {
    if (disc_index < 0 || disc_index >= grid.disc_count())
        throw ArgumentError("sharpness_demo: disc index out of range");
    if (std::abs(z_star) >= 1.0) throw ArgumentError("sharpness_demo: z* outside the open disc");
    if (f.nvars() != grid.n) throw ArgumentError("sharpness_demo: dimension mismatch");

    const AnalyticDisc& disc = grid.discs[static_cast<std::size_t>(disc_index)];
    const OneVarRational restricted = restrict_to_disc(f, disc);

    SharpnessReport report;
    report.disc_index = disc_index;
    report.z_star = z_star;
    report.restricted_degree = restricted.num_degree();
    if (report.restricted_degree < grid.N - 1)
        throw InapplicableError(
            "sharpness_demo: the restriction has degree " + std::to_string(report.restricted_degree) +
            " < N-1 = " + std::to_string(grid.N - 1) +
            "; the refined node count already certifies this disc, so dropping a node need not break uniqueness");

    PickProblem problem;
    const auto& base = grid.base_points[static_cast<std::size_t>(disc_index)];
    for (int j = 0; j + 1 < grid.N; ++j) {
        const Cx z = base[static_cast<std::size_t>(j)];
        problem.nodes.push_back(z);
        problem.targets.push_back(eval_rif_on_disc(f, disc, z));
    }
    report.dropped_node = base[static_cast<std::size_t>(grid.N - 1)];
    report.kept_nodes = problem.nodes;
    report.kept_targets = problem.targets;

    try {
        const PickMatrix matrix = build_pick_matrix(problem, {opts.tol.psd, opts.tol.rank});
        report.spectrum = detail::spectrum_of(matrix);
        report.reduced_verdict = classify(matrix, {opts.tol.psd, opts.tol.rank});
        if (!report.reduced_verdict.solvable || report.reduced_verdict.unique) {
            report.failure = "reduced problem is not positive definite";
        } else if (!problem.nodes.empty() &&
                   report.reduced_verdict.smallest_relative_eigenvalue < checks.min_relative_eigenvalue) {
            report.failure = "reduced matrix too close to singular";
        } else {
            const TwoSolutions two = two_solutions(problem, z_star, {opts.tol.psd, opts.tol.rank});
            report.disc = two.disc;
            report.first = two.first;
            report.second = two.second;
            report.value_first = two.first.eval(z_star);
            report.value_second = two.second.eval(z_star);
            report.disagreement = std::abs(report.value_first - report.value_second);
            for (std::size_t i = 0; i < problem.nodes.size(); ++i) {
                report.max_node_residual = std::max({
                    report.max_node_residual,
                    std::abs(two.first.eval(problem.nodes[i]) - problem.targets[i]),
                    std::abs(two.second.eval(problem.nodes[i]) - problem.targets[i])});
            }
            if (two.disc.radius <= checks.min_radius)
                report.failure = "value-disc radius below the sharpness floor";
            else if (report.max_node_residual > checks.node_residual)
                report.failure = "interpolants miss the kept data";
            else if (std::abs(report.disagreement - 2.0 * two.disc.radius) > checks.disagreement)
                report.failure = "disagreement does not match the value-disc diameter";
        }
    } catch (const Error& e) {
        report.failure = e.what();
    }
    report.pass = report.failure.empty();
    return report;
}

struct SweepParams {
    std::vector<Cx> taus;  ///< multipliers seeding the validated graph family (default: 8th roots of unity)
    std::uint64_t seed = 1;
    int t_count = 6;
    int a_radii = 3;
    int a_angles = 4;
    int z_count = 12;
    double z_radius = 0.9;
};

struct SweepPoint {
    Cx t, a, z;
    Cx ambient_1, ambient_2;
};

struct SweepReport {
    double max_deviation = 0.0;
    SweepPoint argmax;
    long point_count = 0;
    MobiusMap base;
    double epsilon = 0.0;
};

/// Sample points of the validated Mobius-graph family C_{m_{t,a}}.
inline std::vector<SweepPoint> sweep_points(const SweepParams& params) {
    std::vector<Cx> taus = params.taus;
    if (taus.empty())
        for (int k = 0; k < 8; ++k) {
            const double theta = 2.0 * std::numbers::pi * k / 8.0;
            taus.push_back({std::cos(theta), std::sin(theta)});
        }
    const MobiusChoice choice = choose_mobius(taus, params.seed);
    const double eps = choice.epsilon;
    const Cx t0 = choice.m.t;

    std::vector<SweepPoint> points;
    for (int it = 0; it < params.t_count; ++it) {
        const double dt = (params.t_count == 1)
                              ? 0.0
                              : eps * (-0.45 + 0.9 * it / (params.t_count - 1));
        const Cx t = t0 * Cx{std::cos(dt), std::sin(dt)};
        for (int ir = 1; ir <= params.a_radii; ++ir) {
            const double ra = 0.5 * eps * ir / params.a_radii;
            for (int ia = 0; ia < params.a_angles; ++ia) {
                const double pa = 2.0 * std::numbers::pi * ia / params.a_angles;
                const Cx a = ra * Cx{std::cos(pa), std::sin(pa)};
                MobiusMap m(t, a);
                for (int iz = 0; iz < params.z_count; ++iz) {
                    const double rz = params.z_radius * (iz + 1.0) / params.z_count;
                    const double pz = 2.0 * std::numbers::pi * iz / params.z_count;
                    const Cx z = rz * Cx{std::cos(pz), std::sin(pz)};
                    SweepPoint pt;
                    pt.t = t;
                    pt.a = a;
                    pt.z = z;
                    pt.ambient_1 = z;
                    pt.ambient_2 = mobius_eval(m, z);
                    points.push_back(pt);
                }
            }
        }
    }
    return points;
}

/**
 * Maximum of |f - g| over the sampled Mobius-graph family on the bidisc; a
 * finite surrogate for the set-of-uniqueness sweep.
 */
inline SweepReport equality_sweep(const std::function<Cx(Cx, Cx)>& f,
                                  const std::function<Cx(Cx, Cx)>& g, const SweepParams& params = {}) {
    std::vector<Cx> taus = params.taus;
    if (taus.empty())
        for (int k = 0; k < 8; ++k) {
            const double theta = 2.0 * std::numbers::pi * k / 8.0;
            taus.push_back({std::cos(theta), std::sin(theta)});
        }
    const MobiusChoice choice = choose_mobius(taus, params.seed);

    SweepReport report;
    report.base = choice.m;
    report.epsilon = choice.epsilon;
    for (const SweepPoint& pt : sweep_points(params)) {
        const double dev = std::abs(f(pt.ambient_1, pt.ambient_2) - g(pt.ambient_1, pt.ambient_2));
        ++report.point_count;
        if (dev > report.max_deviation) {
            report.max_deviation = dev;
            report.argmax = pt;
        }
    }
    return report;
}

} // namespace polypick
