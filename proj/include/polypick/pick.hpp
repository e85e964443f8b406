#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "polypick/errors.hpp"
#include "polypick/multipoly.hpp"
#include "polypick/rif.hpp"

namespace polypick {

/// Interpolation data: distinct nodes in the open disc, targets in its closure.
struct PickProblem {
    std::vector<Cx> nodes;
    std::vector<Cx> targets;

    std::size_t size() const { return nodes.size(); }
};

inline void validate_problem(const PickProblem& p) {
    if (p.nodes.size() != p.targets.size())
        throw ArgumentError("PickProblem: node/target count mismatch");
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
        if (std::abs(p.nodes[i]) >= 1.0)
            throw ArgumentError("PickProblem: node outside the open disc");
        if (std::abs(p.targets[i]) > 1.0 + 1e-12)
            throw ArgumentError("PickProblem: target outside the closed disc");
        for (std::size_t j = i + 1; j < p.nodes.size(); ++j)
            if (p.nodes[i] == p.nodes[j])
                throw ArgumentError("PickProblem: duplicate nodes");
    }
}

struct PickTolerances {
    double psd = 1e-9;  ///< negative-eigenvalue slack, relative to max(1, largest eigenvalue)
    double rank = 1e-7; ///< singularity threshold, relative to the largest eigenvalue
};

/**
 * The Hermitian matrix P_ij = (1 - w_i conj(w_j)) / (1 - l_i conj(l_j))
 * together with its full spectrum (ascending) and eigenvectors.
 */
struct PickMatrix {
    Eigen::MatrixXcd entries;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
    int rank_estimate = 0;
};

inline PickMatrix build_pick_matrix(const PickProblem& p, const PickTolerances& tol = {}) {
    validate_problem(p);
    const int n = static_cast<int>(p.size());
    PickMatrix m;
    m.entries = Eigen::MatrixXcd(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const Cx v = (Cx{1.0, 0.0} - p.targets[static_cast<std::size_t>(i)] * std::conj(p.targets[static_cast<std::size_t>(j)])) /
                         (Cx{1.0, 0.0} - p.nodes[static_cast<std::size_t>(i)] * std::conj(p.nodes[static_cast<std::size_t>(j)]));
            m.entries(i, j) = v;
            m.entries(j, i) = std::conj(v);
        }
    }
    if (n == 0) {
        m.eigenvalues = Eigen::VectorXd(0);
        m.eigenvectors = Eigen::MatrixXcd(0, 0);
        return m;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.entries);
    if (solver.info() != Eigen::Success) throw Error("build_pick_matrix: eigensolver failed");
    m.eigenvalues = solver.eigenvalues();
    m.eigenvectors = solver.eigenvectors();
    const double top = m.eigenvalues(n - 1);
    for (int i = 0; i < n; ++i)
        if (m.eigenvalues(i) > tol.rank * top) ++m.rank_estimate;
    return m;
}

struct UniquenessVerdict {
    bool solvable = false;
    bool unique = false;
    double min_eigenvalue = 0.0;
    double smallest_relative_eigenvalue = 0.0;
    PickTolerances tol;
};

/**
 * Solvability and uniqueness from the spectrum: solvable when the matrix is
 * positive semi-definite to tolerance, unique when it is additionally
 * singular (smallest eigenvalue below tol.rank relative to the largest).
 * The empty problem is solvable and never unique.
 */
inline UniquenessVerdict classify(const PickMatrix& m, const PickTolerances& tol = {}) {
    UniquenessVerdict v;
    v.tol = tol;
    const int n = static_cast<int>(m.eigenvalues.size());
    if (n == 0) {
        v.solvable = true;
        return v;
    }
    const double lo = m.eigenvalues(0), hi = m.eigenvalues(n - 1);
    v.min_eigenvalue = lo;
    v.smallest_relative_eigenvalue = hi > 0.0 ? lo / hi : lo;
    v.solvable = lo >= -tol.psd * std::max(1.0, hi);
    v.unique = v.solvable && lo <= tol.rank * hi;
    return v;
}

/**
 * The unique interpolant from a null vector nu of the singular Pick matrix:
 * P nu = 0 forces sum_j nu_j / (1 - conj(l_j) z) = w_i * sum_j nu_j conj(w_j) / (1 - conj(l_j) z)
 * at every node, so f(z) = A(z) / B(z) with those Cauchy sums. Clearing the
 * common product of (1 - conj(l_j) z) leaves a polynomial pair of degree
 * < N, which reduces to a finite Blaschke product of degree rank(P).
 * Post-validated: interpolation within 1e-8, inner, degree = rank estimate.
 */
inline OneVarRational reconstruct_unique(const PickProblem& p, const PickMatrix& m,
                                         const PickTolerances& tol = {}) {
    const UniquenessVerdict v = classify(m, tol);
    if (!v.unique)
        throw PreconditionError("reconstruct_unique: problem is not uniquely solvable");
    const std::size_t n = p.size();

    const Eigen::VectorXcd nu = m.eigenvectors.col(0);
    MultiPoly numer(1), denom(1);
    for (std::size_t j = 0; j < n; ++j) {
        MultiPoly prod = MultiPoly::constant(1, {1.0, 0.0});
        for (std::size_t l = 0; l < n; ++l) {
            if (l == j) continue;
            MultiPoly lin(1);
            lin.set_coeff({0}, {1.0, 0.0});
            lin.set_coeff({1}, -std::conj(p.nodes[l]));
            prod = prod * lin;
        }
        numer = numer + nu(static_cast<Eigen::Index>(j)) * prod;
        denom = denom + (nu(static_cast<Eigen::Index>(j)) * std::conj(p.targets[j])) * prod;
    }

    OneVarRational f;
    try {
        f = make_reduced_rational(numer, denom, {.pair_tol_scale = 1e-6, .throw_on_ambiguity = false});
    } catch (const Error& e) {
        throw ReconstructionError(std::string("reconstruct_unique: reduction failed: ") + e.what());
    }

    for (std::size_t i = 0; i < n; ++i) {
        Cx fi;
        try {
            fi = f.eval(p.nodes[i]);
        } catch (const SingularPointError&) {
            throw ReconstructionError("reconstruct_unique: reconstructed function singular at a node");
        }
        if (std::abs(fi - p.targets[i]) > 1e-8)
            throw ReconstructionError("reconstruct_unique: interpolation residual " +
                                      std::to_string(std::abs(fi - p.targets[i])) + " above 1e-8");
    }
    if (!f.inner)
        throw ReconstructionError("reconstruct_unique: result failed the inner validation");
    if (f.num_degree() != m.rank_estimate)
        throw ReconstructionError("reconstruct_unique: degree " + std::to_string(f.num_degree()) +
                                  " does not match rank estimate " + std::to_string(m.rank_estimate));
    return f;
}

/// Closed disc of admissible values f(z*) over all Schur-class solutions.
struct ValueDisc {
    Cx center{0.0, 0.0};
    double radius = 0.0;
};

/**
 * Nevanlinna range of f(z*): the extension of the problem by (z*, w) is
 * solvable iff |w - center| <= radius. For a positive definite base matrix
 * the Schur complement of the extended matrix is a real quadratic in
 * (w, conj(w)) whose non-negativity region is this disc; for a singular
 * (uniquely solvable) base the disc degenerates to the forced value.
 */
inline ValueDisc value_disc(const PickProblem& p, Cx z_star, const PickTolerances& tol = {}) {
    if (std::abs(z_star) >= 1.0) throw ArgumentError("value_disc: z* outside the open disc");
    const PickMatrix m = build_pick_matrix(p, tol);
    const UniquenessVerdict v = classify(m, tol);
    if (!v.solvable) throw PreconditionError("value_disc: base problem unsolvable");

    if (v.unique) {
        const OneVarRational f = reconstruct_unique(p, m, tol);
        return {f.eval(z_star), 0.0};
    }

    const std::size_t n = p.size();
    Eigen::VectorXcd u(static_cast<Eigen::Index>(n)), w(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const Cx den = Cx{1.0, 0.0} - p.nodes[i] * std::conj(z_star);
        u(static_cast<Eigen::Index>(i)) = Cx{1.0, 0.0} / den;
        w(static_cast<Eigen::Index>(i)) = p.targets[i] / den;
    }
    const double self = 1.0 / (1.0 - std::norm(z_star));
    double quad_a = self, quad_b = self;
    Cx beta{0.0, 0.0};
    if (n > 0) {
        const Eigen::LDLT<Eigen::MatrixXcd> ldlt(m.entries);
        const Eigen::VectorXcd pu = ldlt.solve(u);
        const Eigen::VectorXcd pw = ldlt.solve(w);
        quad_a = self - std::real(u.dot(pu)); // u* P^{-1} u
        quad_b = self + std::real(w.dot(pw));
        beta = u.dot(pw); // u* P^{-1} w
    }
    ValueDisc disc;
    disc.center = beta / quad_b;
    const double r2 = quad_a / quad_b + std::norm(beta) / (quad_b * quad_b);
    disc.radius = r2 > 0.0 ? std::sqrt(r2) : 0.0;
    return disc;
}

struct TwoSolutions {
    OneVarRational first;
    OneVarRational second;
    ValueDisc disc;
};

/**
 * For a solvable, non-unique problem: the two extremal interpolants whose
 * values at z* realize the endpoints center +/- radius of the value disc.
 * Each extension is singular positive semi-definite by construction.
 */
inline TwoSolutions two_solutions(const PickProblem& p, Cx z_star, const PickTolerances& tol = {}) {
    for (Cx node : p.nodes)
        if (node == z_star) throw ArgumentError("two_solutions: z* coincides with a node");
    const PickMatrix m = build_pick_matrix(p, tol);
    const UniquenessVerdict v = classify(m, tol);
    if (!v.solvable) throw PreconditionError("two_solutions: base problem unsolvable");
    if (v.unique) throw PreconditionError("two_solutions: base problem already unique");

    const ValueDisc disc = value_disc(p, z_star, tol);
    if (disc.radius < 1e-10)
        throw NearUniqueError("two_solutions: value disc radius " + std::to_string(disc.radius) +
                              " below 1e-10; data nearly determine the solution");

    TwoSolutions out;
    out.disc = disc;
    const Cx offsets[2] = {disc.center + disc.radius, disc.center - disc.radius};
    OneVarRational* slots[2] = {&out.first, &out.second};
    for (int k = 0; k < 2; ++k) {
        PickProblem ext = p;
        ext.nodes.push_back(z_star);
        Cx target = offsets[k];
        if (std::abs(target) > 1.0) target /= std::abs(target); // clip rounding overshoot
        ext.targets.push_back(target);
        const PickMatrix em = build_pick_matrix(ext, tol);
        *slots[k] = reconstruct_unique(ext, em, tol);
    }

    const double gap = std::abs(out.first.eval(z_star) - out.second.eval(z_star));
    if (std::abs(gap - 2.0 * disc.radius) > 1e-8)
        throw ReconstructionError("two_solutions: endpoint gap " + std::to_string(gap) +
                                  " disagrees with the value-disc diameter");
    return out;
}

} // namespace polypick
