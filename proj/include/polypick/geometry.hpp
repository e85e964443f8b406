#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "polypick/errors.hpp"
#include "polypick/multipoly.hpp"
#include "polypick/rng.hpp"

namespace polypick {

constexpr double kUnimodularTolerance = 1e-12;

inline bool is_unimodular(Cx t, double tol = kUnimodularTolerance) {
    return std::abs(std::abs(t) - 1.0) <= tol;
}

/// Disc automorphism m(z) = t (z - a) / (1 - conj(a) z), |t| = 1, |a| < 1.
struct MobiusMap {
    Cx t{1.0, 0.0};
    Cx a{0.0, 0.0};

    MobiusMap() = default;
    MobiusMap(Cx t_, Cx a_) : t(t_), a(a_) {
        if (!is_unimodular(t)) throw ArgumentError("MobiusMap: t must be unimodular");
        if (std::abs(a) >= 1.0) throw ArgumentError("MobiusMap: |a| must be < 1");
    }
};

inline Cx mobius_eval(const MobiusMap& m, Cx z) {
    const Cx den = Cx{1.0, 0.0} - std::conj(m.a) * z;
    if (std::abs(den) < 1e-14) throw SingularPointError("mobius_eval: pole at 1/conj(a)");
    return m.t * (z - m.a) / den;
}

enum class DiscKind { flat, mobius_graph, coordinate_pairing };

/**
 * Analytic disc into the polydisc. Three parametrized families:
 *   flat:                z -> (z, tau_2 z, ..., tau_n z)
 *   mobius_graph (n=2):  z -> (z, m(z))
 *   coordinate_pairing:  (z_1, ..., z_{n-1}) -> (z_1, ..., z_{n-1}, rho_conj z_{n-1})
 */
struct AnalyticDisc {
    DiscKind kind = DiscKind::flat;
    int n = 1;
    std::vector<Cx> multipliers; // flat: coordinates 2..n
    MobiusMap m;                 // mobius_graph
    Cx rho{1.0, 0.0};            // coordinate_pairing

    static AnalyticDisc flat(std::vector<Cx> taus) {
        AnalyticDisc d;
        d.kind = DiscKind::flat;
        d.n = static_cast<int>(taus.size()) + 1;
        for (Cx t : taus)
            if (!is_unimodular(t)) throw ArgumentError("AnalyticDisc::flat: multiplier not unimodular");
        d.multipliers = std::move(taus);
        return d;
    }

    static AnalyticDisc mobius_graph(MobiusMap map) {
        AnalyticDisc d;
        d.kind = DiscKind::mobius_graph;
        d.n = 2;
        d.m = map;
        return d;
    }

    static AnalyticDisc pairing(int n, Cx rho) {
        if (n < 2) throw ArgumentError("AnalyticDisc::pairing: needs n >= 2");
        if (!is_unimodular(rho)) throw ArgumentError("AnalyticDisc::pairing: rho not unimodular");
        AnalyticDisc d;
        d.kind = DiscKind::coordinate_pairing;
        d.n = n;
        d.rho = rho;
        return d;
    }
};

/// Image of a base point under a one-dimensional disc (flat or mobius_graph).
inline std::vector<Cx> disc_eval(const AnalyticDisc& d, Cx z, bool allow_boundary = false) {
    const double limit = allow_boundary ? 1.0 + kUnimodularTolerance : 1.0;
    if (std::abs(z) >= limit && !allow_boundary)
        throw ArgumentError("disc_eval: base point not in the open disc");
    if (allow_boundary && std::abs(z) > limit)
        throw ArgumentError("disc_eval: base point outside the closed disc");
    switch (d.kind) {
        case DiscKind::flat: {
            std::vector<Cx> out;
            out.reserve(static_cast<std::size_t>(d.n));
            out.push_back(z);
            for (Cx t : d.multipliers) out.push_back(t * z);
            return out;
        }
        case DiscKind::mobius_graph:
            return {z, mobius_eval(d.m, z)};
        case DiscKind::coordinate_pairing:
            if (d.n != 2)
                throw ArgumentError("disc_eval: coordinate_pairing needs a base point per coordinate");
            return {z, std::conj(d.rho) * z};
    }
    throw ArgumentError("disc_eval: unknown disc kind");
}

/// Image of a base tuple under a coordinate-pairing (n-1)-disc.
inline std::vector<Cx> disc_eval(const AnalyticDisc& d, std::span<const Cx> z, bool allow_boundary = false) {
    if (d.kind != DiscKind::coordinate_pairing) {
        if (z.size() != 1) throw ArgumentError("disc_eval: one-dimensional disc takes one base coordinate");
        return disc_eval(d, z[0], allow_boundary);
    }
    if (static_cast<int>(z.size()) != d.n - 1)
        throw ArgumentError("disc_eval: coordinate_pairing base tuple has wrong length");
    const double limit = allow_boundary ? 1.0 + kUnimodularTolerance : 1.0;
    std::vector<Cx> out(z.begin(), z.end());
    for (Cx zr : z)
        if (std::abs(zr) >= limit && !allow_boundary)
            throw ArgumentError("disc_eval: base point not in the open polydisc");
    out.push_back(std::conj(d.rho) * z[z.size() - 1]);
    return out;
}

struct IntersectionPoint {
    Cx selected;                   ///< the in-disc root r_i
    Cx other;                      ///< the second quadratic root (when finite)
    bool other_finite = true;      ///< false in the a = 0 degeneration (s_i at infinity)
    double residual = 0.0;         ///< |tau_i r_i - m(r_i)|
};

struct IntersectionResult {
    std::vector<IntersectionPoint> per_disc;
    double min_pairwise_gap = std::numeric_limits<double>::infinity();
    double max_residual = 0.0;
};

namespace detail {

/// Stable quadratic solve of qa z^2 + qb z + qc = 0 with qa != 0.
inline std::pair<Cx, Cx> solve_quadratic(Cx qa, Cx qb, Cx qc) {
    const Cx disc = qb * qb - 4.0 * qa * qc;
    Cx sq = std::sqrt(disc);
    if (std::real(std::conj(qb) * sq) < 0.0) sq = -sq;
    const Cx q = -0.5 * (qb + sq);
    if (std::abs(q) > 0.0) return {q / qa, qc / q};
    return {(-qb + sq) / (2.0 * qa), (-qb - sq) / (2.0 * qa)};
}

} // namespace detail

/**
 * Intersections of the graph disc z -> (z, m(z)) with the flat discs
 * z -> (z, tau_i z): solves tau_i z = m(z), i.e. the quadratic
 * -tau_i conj(a) z^2 + (tau_i - t) z + t a = 0, and selects the in-disc root.
 */
inline IntersectionResult intersect_mobius_with_flat(std::span<const Cx> taus, const MobiusMap& m) {
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!is_unimodular(taus[i])) throw ArgumentError("intersect_mobius_with_flat: tau not unimodular");
        for (std::size_t j = i + 1; j < taus.size(); ++j)
            if (std::abs(taus[i] - taus[j]) < 1e-14)
                throw ArgumentError("intersect_mobius_with_flat: multipliers must be distinct");
    }

    IntersectionResult result;
    result.per_disc.reserve(taus.size());
    for (Cx tau : taus) {
        IntersectionPoint pt;
        const Cx qa = -tau * std::conj(m.a);
        const Cx qb = tau - m.t;
        const Cx qc = m.t * m.a;
        if (std::abs(m.a) == 0.0) {
            if (std::abs(qb) < 1e-14)
                throw DegenerateConfigurationError(
                    "intersect_mobius_with_flat: t equals a multiplier with a = 0 (coincident discs)");
            pt.selected = Cx{0.0, 0.0}; // exact: the equation reduces to (tau - t) z = 0
            pt.other_finite = false;
            pt.residual = 0.0;
            result.per_disc.push_back(pt);
            continue;
        }
        auto [r1, r2] = detail::solve_quadratic(qa, qb, qc);
        const bool in1 = std::abs(r1) < 1.0, in2 = std::abs(r2) < 1.0;
        if (in1 == in2)
            throw ConfigurationError(in1
                ? "intersect_mobius_with_flat: both roots inside the disc; shrink |a|"
                : "intersect_mobius_with_flat: no root inside the disc; shrink |a|");
        pt.selected = in1 ? r1 : r2;
        pt.other = in1 ? r2 : r1;
        pt.residual = std::abs(tau * pt.selected - mobius_eval(m, pt.selected));
        result.per_disc.push_back(pt);
    }

    for (std::size_t i = 0; i < result.per_disc.size(); ++i) {
        result.max_residual = std::max(result.max_residual, result.per_disc[i].residual);
        for (std::size_t j = i + 1; j < result.per_disc.size(); ++j)
            result.min_pairwise_gap = std::min(
                result.min_pairwise_gap,
                std::abs(result.per_disc[i].selected - result.per_disc[j].selected));
    }
    return result;
}

struct MobiusChoice {
    MobiusMap m;
    double epsilon = 0.0;
    IntersectionResult intersections;
};

/**
 * Picks t on the circle at the midpoint of the largest multiplier gap and a
 * small nonzero a, validated by bisection on |a|: all selected intersection
 * roots must lie in |z| < 1/2, be pairwise separated, and satisfy the
 * defining equation to 1e-10. Deterministic for a fixed seed.
 */
inline MobiusChoice choose_mobius(std::span<const Cx> taus, std::uint64_t seed) {
    if (taus.empty()) throw ArgumentError("choose_mobius: no multipliers");
    std::vector<double> angles;
    angles.reserve(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!is_unimodular(taus[i])) throw ArgumentError("choose_mobius: tau not unimodular");
        for (std::size_t j = i + 1; j < taus.size(); ++j)
            if (std::abs(taus[i] - taus[j]) < 1e-14)
                throw ArgumentError("choose_mobius: multipliers must be distinct");
        double th = std::arg(taus[i]);
        if (th < 0.0) th += 2.0 * std::numbers::pi;
        angles.push_back(th);
    }
    std::sort(angles.begin(), angles.end());

    double best_gap = -1.0, best_mid = 0.0;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const double lo = angles[i];
        const double hi = (i + 1 < angles.size()) ? angles[i + 1] : angles[0] + 2.0 * std::numbers::pi;
        if (hi - lo > best_gap) {
            best_gap = hi - lo;
            best_mid = 0.5 * (lo + hi);
        }
    }
    const Cx t{std::cos(best_mid), std::sin(best_mid)};

    // Direction of the perturbation a; seed 0 keeps a real and positive.
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(seed % 8) / 8.0;
    const Cx dir{std::cos(phase), std::sin(phase)};

    double epsilon = best_gap / 8.0;
    for (int attempt = 0; attempt < 60; ++attempt, epsilon *= 0.5) {
        const Cx a = (epsilon / 2.0) * dir;
        if (std::abs(a) >= 1.0) continue;
        try {
            MobiusMap m(t, a);
            IntersectionResult xs = intersect_mobius_with_flat(taus, m);
            bool ok = xs.max_residual <= 1e-10;
            for (const auto& pt : xs.per_disc) ok = ok && std::abs(pt.selected) < 0.5;
            if (taus.size() > 1) ok = ok && xs.min_pairwise_gap > 1e-6;
            if (ok) return {m, epsilon, std::move(xs)};
        } catch (const ConfigurationError&) {
            // shrink and retry
        }
    }
    throw ConfigurationError("choose_mobius: no admissible a found after bisection");
}

/**
 * Node lattice: N^{n-1} flat discs over all multiplier combinations with N
 * distinct base points each, giving N^n pairwise-distinct lifted nodes.
 */
struct NodeGrid {
    int N = 0;
    int n = 0;
    std::vector<std::vector<Cx>> tau_table;    ///< rows r = 2..n, N entries each
    std::vector<AnalyticDisc> discs;           ///< M = N^{n-1} flat discs, combination order
    std::vector<std::vector<Cx>> base_points;  ///< per disc, N base points
    std::vector<std::vector<Cx>> nodes;        ///< disc-major, base-point-minor
    std::uint64_t seed = 0;

    int disc_count() const { return static_cast<int>(discs.size()); }
};

struct NodeGridConfig {
    /// Per-coordinate multiplier rows (r = 2..n); defaults are evenly spread
    /// with a per-coordinate offset that avoids disc coincidences.
    std::optional<std::vector<std::vector<Cx>>> multipliers;
    /// Base points shared by every disc; default j/(N+1), j = 1..N.
    std::optional<std::vector<Cx>> base_points;
    std::uint64_t seed = 0;
};

inline NodeGrid generate_nodes(int N, int n, const NodeGridConfig& config = {}) {
    if (N < 1) throw ArgumentError("generate_nodes: N must be >= 1");
    if (n < 1) throw ArgumentError("generate_nodes: n must be >= 1");

    NodeGrid grid;
    grid.N = N;
    grid.n = n;
    grid.seed = config.seed;

    if (config.multipliers) {
        if (static_cast<int>(config.multipliers->size()) != n - 1)
            throw ArgumentError("generate_nodes: expected n-1 multiplier rows");
        grid.tau_table = *config.multipliers;
        for (const auto& row : grid.tau_table) {
            if (static_cast<int>(row.size()) != N)
                throw ArgumentError("generate_nodes: each multiplier row needs N entries");
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (!is_unimodular(row[i]))
                    throw ArgumentError("generate_nodes: multiplier not unimodular");
                for (std::size_t j = i + 1; j < row.size(); ++j)
                    if (std::abs(row[i] - row[j]) < 1e-14)
                        throw ArgumentError("generate_nodes: multipliers in a row must be distinct");
            }
        }
    } else {
        for (int r = 2; r <= n; ++r) {
            std::vector<Cx> row;
            row.reserve(static_cast<std::size_t>(N));
            for (int i = 1; i <= N; ++i) {
                const double theta =
                    2.0 * std::numbers::pi *
                    (static_cast<double>(i - 1) / N + static_cast<double>(r - 1) / (2.0 * N * n));
                row.push_back({std::cos(theta), std::sin(theta)});
            }
            grid.tau_table.push_back(std::move(row));
        }
    }

    std::vector<Cx> base;
    if (config.base_points) {
        base = *config.base_points;
        if (static_cast<int>(base.size()) != N)
            throw ArgumentError("generate_nodes: expected N base points");
        for (std::size_t i = 0; i < base.size(); ++i) {
            if (std::abs(base[i]) >= 1.0)
                throw ArgumentError("generate_nodes: base point not in the open disc");
            for (std::size_t j = i + 1; j < base.size(); ++j)
                if (std::abs(base[i] - base[j]) < 1e-14)
                    throw ArgumentError("generate_nodes: base points must be distinct");
        }
    } else {
        for (int j = 1; j <= N; ++j)
            base.push_back({static_cast<double>(j) / (N + 1), 0.0});
    }

    // Odometer over multiplier combinations; row 2 runs fastest.
    int M = 1;
    for (int r = 0; r < n - 1; ++r) M *= N;
    std::vector<int> idx(static_cast<std::size_t>(n - 1), 0);
    for (int k = 0; k < M; ++k) {
        std::vector<Cx> taus;
        taus.reserve(static_cast<std::size_t>(n - 1));
        for (int r = 0; r < n - 1; ++r)
            taus.push_back(grid.tau_table[static_cast<std::size_t>(r)][static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])]);
        grid.discs.push_back(AnalyticDisc::flat(taus));
        grid.base_points.push_back(base);
        for (Cx z : base) grid.nodes.push_back(disc_eval(grid.discs.back(), z));
        for (int r = 0; r < n - 1; ++r) {
            if (++idx[static_cast<std::size_t>(r)] < N) break;
            idx[static_cast<std::size_t>(r)] = 0;
        }
    }
    return grid;
}

} // namespace polypick
