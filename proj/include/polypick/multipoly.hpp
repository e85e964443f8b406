#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "polypick/errors.hpp"

namespace polypick {

using Cx = std::complex<double>;

/// Exponent tuple (alpha_1, ..., alpha_n) of a monomial.
using MultiIndex = std::vector<int>;

inline int index_total(const MultiIndex& a) {
    return std::accumulate(a.begin(), a.end(), 0);
}

/// d dominates a: d_r >= a_r in every coordinate.
inline bool dominates(const MultiIndex& d, const MultiIndex& a) {
    if (d.size() != a.size()) return false;
    for (std::size_t r = 0; r < d.size(); ++r)
        if (a[r] > d[r]) return false;
    return true;
}

/// Graded lexicographic order: total degree first, then lexicographic.
struct GradedLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        const int ta = index_total(a), tb = index_total(b);
        if (ta != tb) return ta < tb;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

/// Integer power by repeated squaring; exact for exact inputs, 0^0 = 1.
inline Cx pow_int(Cx z, int e) {
    Cx acc{1.0, 0.0};
    while (e > 0) {
        if (e & 1) acc *= z;
        z *= z;
        e >>= 1;
    }
    return acc;
}

/**
 * Finitely supported complex-coefficient polynomial in n variables.
 *
 * Terms live in a graded-lex-ordered table keyed by exponent tuple, which
 * makes iteration (and serialization) deterministic. Arithmetic prunes
 * coefficients below 1e-14 x the operand scale so cancellations leave a
 * canonical table.
 */
class MultiPoly {
public:
    static constexpr double kPruneRel = 1e-14;

    using TermMap = std::map<MultiIndex, Cx, GradedLexLess>;

    explicit MultiPoly(int nvars) : nvars_(nvars) {
        if (nvars < 1) throw ArgumentError("MultiPoly: nvars must be >= 1");
    }

    static MultiPoly constant(int nvars, Cx c) {
        MultiPoly p(nvars);
        p.set_coeff(MultiIndex(static_cast<std::size_t>(nvars), 0), c);
        return p;
    }

    static MultiPoly monomial(int nvars, MultiIndex e, Cx c = Cx{1.0, 0.0}) {
        MultiPoly p(nvars);
        p.set_coeff(std::move(e), c);
        return p;
    }

    /// The coordinate function z_{index} (0-based index).
    static MultiPoly variable(int nvars, int index) {
        if (index < 0 || index >= nvars) throw ArgumentError("MultiPoly::variable: index out of range");
        MultiIndex e(static_cast<std::size_t>(nvars), 0);
        e[static_cast<std::size_t>(index)] = 1;
        return monomial(nvars, std::move(e));
    }

    /// Univariate polynomial from ascending coefficients c0 + c1 z + ...
    static MultiPoly from_coeffs_1d(std::span<const Cx> coeffs) {
        MultiPoly p(1);
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            p.set_coeff({static_cast<int>(k)}, coeffs[k]);
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    Cx coeff(const MultiIndex& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Cx{0.0, 0.0} : it->second;
    }

    void set_coeff(MultiIndex e, Cx c) {
        if (static_cast<int>(e.size()) != nvars_)
            throw ArgumentError("MultiPoly::set_coeff: exponent length != nvars");
        for (int x : e)
            if (x < 0) throw ArgumentError("MultiPoly::set_coeff: negative exponent");
        if (c == Cx{0.0, 0.0})
            terms_.erase(e);
        else
            terms_[std::move(e)] = c;
    }

    void add_to_coeff(const MultiIndex& e, Cx c) { set_coeff(e, coeff(e) + c); }

    double max_coeff_modulus() const {
        double m = 0.0;
        for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    /// Componentwise maximum exponent; all zeros for the zero polynomial.
    MultiIndex multidegree() const {
        MultiIndex d(static_cast<std::size_t>(nvars_), 0);
        for (const auto& [e, c] : terms_)
            for (std::size_t r = 0; r < e.size(); ++r) d[r] = std::max(d[r], e[r]);
        return d;
    }

    int total_degree() const {
        return terms_.empty() ? 0 : index_total(terms_.rbegin()->first);
    }

    /// Drops coefficients with modulus below kPruneRel x scale.
    MultiPoly& prune(double scale) {
        const double thresh = kPruneRel * scale;
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (std::abs(it->second) < thresh)
                it = terms_.erase(it);
            else
                ++it;
        }
        return *this;
    }

    Cx eval(std::span<const Cx> z) const {
        if (static_cast<int>(z.size()) != nvars_)
            throw ArgumentError("MultiPoly::eval: point dimension != nvars");
        Cx acc{0.0, 0.0};
        for (const auto& [e, c] : terms_) {
            Cx term = c;
            for (std::size_t r = 0; r < e.size(); ++r)
                if (e[r] != 0) term *= pow_int(z[r], e[r]);
            acc += term;
        }
        return acc;
    }

    Cx eval(std::initializer_list<Cx> z) const {
        return eval(std::span<const Cx>(z.begin(), z.size()));
    }

    /// Horner evaluation; nvars must be 1.
    Cx eval1(Cx z) const {
        if (nvars_ != 1) throw ArgumentError("MultiPoly::eval1: not univariate");
        if (terms_.empty()) return {0.0, 0.0};
        Cx acc{0.0, 0.0};
        int k = degree_1d();
        auto it = terms_.rbegin();
        for (; k >= 0; --k) {
            acc *= z;
            if (it != terms_.rend() && it->first[0] == k) {
                acc += it->second;
                ++it;
            }
        }
        return acc;
    }

    int degree_1d() const {
        if (nvars_ != 1) throw ArgumentError("MultiPoly::degree_1d: not univariate");
        return terms_.empty() ? 0 : terms_.rbegin()->first[0];
    }

    /// Ascending dense coefficient vector of a univariate polynomial.
    std::vector<Cx> coeffs_1d() const {
        if (nvars_ != 1) throw ArgumentError("MultiPoly::coeffs_1d: not univariate");
        std::vector<Cx> c(static_cast<std::size_t>(degree_1d()) + 1, Cx{0.0, 0.0});
        for (const auto& [e, v] : terms_) c[static_cast<std::size_t>(e[0])] = v;
        return c;
    }

    MultiPoly derivative_1d() const {
        if (nvars_ != 1) throw ArgumentError("MultiPoly::derivative_1d: not univariate");
        MultiPoly d(1);
        for (const auto& [e, c] : terms_)
            if (e[0] > 0) d.set_coeff({e[0] - 1}, c * static_cast<double>(e[0]));
        return d;
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
        check_same_dim(a, b, "+");
        const double scale = std::max(a.max_coeff_modulus(), b.max_coeff_modulus());
        MultiPoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_to_coeff(e, c);
        return r.prune(scale);
    }

    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
        check_same_dim(a, b, "-");
        const double scale = std::max(a.max_coeff_modulus(), b.max_coeff_modulus());
        MultiPoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_to_coeff(e, -c);
        return r.prune(scale);
    }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        check_same_dim(a, b, "*");
        const double scale = a.max_coeff_modulus() * b.max_coeff_modulus();
        MultiPoly r(a.nvars_);
        MultiIndex e(static_cast<std::size_t>(a.nvars_), 0);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
                r.add_to_coeff(e, ca * cb);
            }
        }
        return r.prune(scale);
    }

    friend MultiPoly operator*(Cx s, const MultiPoly& p) {
        MultiPoly r(p.nvars_);
        const double scale = std::abs(s) * p.max_coeff_modulus();
        for (const auto& [e, c] : p.terms_) r.set_coeff(e, s * c);
        return r.prune(scale);
    }

    friend MultiPoly operator*(const MultiPoly& p, Cx s) { return s * p; }
    friend MultiPoly operator-(const MultiPoly& p) { return Cx{-1.0, 0.0} * p; }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
            for (std::size_t r = 0; r < e.size(); ++r)
                if (e[r] != 0) os << "*z" << (r + 1) << "^" << e[r];
        }
        return os.str();
    }

private:
    static void check_same_dim(const MultiPoly& a, const MultiPoly& b, const char* op) {
        if (a.nvars_ != b.nvars_)
            throw ArgumentError(std::string("MultiPoly operator") + op + ": nvars mismatch");
    }

    int nvars_;
    TermMap terms_;
};

/// Largest coefficient modulus of either operand; the canonical prune scale.
inline double pair_scale(const MultiPoly& a, const MultiPoly& b) {
    return std::max(a.max_coeff_modulus(), b.max_coeff_modulus());
}

/**
 * Reflection q~(z) = z^d * conj(q)(1/conj(z_1), ..., 1/conj(z_n)):
 * per-term exponent reversal alpha -> d - alpha with coefficient conjugation.
 * Requires d to dominate every stored exponent.
 */
inline MultiPoly reflect(const MultiPoly& p, const MultiIndex& d) {
    if (static_cast<int>(d.size()) != p.nvars())
        throw ArgumentError("reflect: degree tuple length != nvars");
    for (int x : d)
        if (x < 0) throw ArgumentError("reflect: negative degree bound");
    MultiPoly r(p.nvars());
    MultiIndex e(d.size(), 0);
    for (const auto& [a, c] : p.terms()) {
        if (!dominates(d, a)) {
            throw DominationError("reflect: exponent " + MultiPoly::monomial(p.nvars(), a).to_string() +
                                  " exceeds the degree bound in some coordinate");
        }
        for (std::size_t r2 = 0; r2 < d.size(); ++r2) e[r2] = d[r2] - a[r2];
        r.set_coeff(e, std::conj(c));
    }
    return r;
}

/// Monic product prefix(z) * (z - root) updated in place (dense ascending coefficients).
inline void multiply_linear_factor(std::vector<Cx>& coeffs, Cx root) {
    coeffs.push_back({0.0, 0.0});
    for (std::size_t k = coeffs.size() - 1; k > 0; --k)
        coeffs[k] = coeffs[k - 1] - root * coeffs[k];
    coeffs[0] = -root * coeffs[0];
}

/// leading * prod (z - r_i) as a univariate MultiPoly.
inline MultiPoly poly_from_roots(Cx leading, std::span<const Cx> roots) {
    std::vector<Cx> c{leading};
    for (Cx r : roots) multiply_linear_factor(c, r);
    return MultiPoly::from_coeffs_1d(c);
}

/**
 * All deg(p) roots of a univariate polynomial, with multiplicity, via
 * companion-matrix eigenvalues plus one conditional Newton polish per root.
 * Sorted by (re, im) for determinism.
 */
inline std::vector<Cx> roots_1d(const MultiPoly& p) {
    if (p.nvars() != 1) throw ArgumentError("roots_1d: not univariate");
    if (p.is_zero()) throw ArgumentError("roots_1d: zero polynomial");
    const auto c = p.coeffs_1d();
    const int deg = static_cast<int>(c.size()) - 1;
    if (deg == 0) return {};

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 0; i < deg; ++i) {
        companion(i, deg - 1) = -c[static_cast<std::size_t>(i)] / c[static_cast<std::size_t>(deg)];
        if (i > 0) companion(i, i - 1) = Cx{1.0, 0.0};
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw Error("roots_1d: eigenvalue iteration failed");

    const MultiPoly dp = p.derivative_1d();
    std::vector<Cx> roots;
    roots.reserve(static_cast<std::size_t>(deg));
    for (int i = 0; i < deg; ++i) {
        Cx r = solver.eigenvalues()(i);
        const Cx pr = p.eval1(r);
        const Cx dpr = dp.eval1(r);
        if (std::abs(dpr) > 0.0) {
            const Cx r2 = r - pr / dpr;
            if (std::abs(p.eval1(r2)) < std::abs(pr)) r = r2;
        }
        roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end(), [](Cx a, Cx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

/// Polydisc sampling plan for the non-vanishing check.
struct StabilityGrid {
    std::vector<double> radii{0.0, 0.25, 0.5, 0.75, 0.9, 0.99};
    int angles = 64;

    /// Default plan, thinned in higher dimension to keep the product grid tractable.
    static StabilityGrid for_dimension(int nvars) {
        StabilityGrid g;
        if (nvars >= 3) {
            g.radii = {0.0, 0.5, 0.75, 0.9, 0.99};
            g.angles = 12;
        }
        return g;
    }

    /// Deliberately small plan for inputs whose stability is already known.
    static StabilityGrid coarse() {
        StabilityGrid g;
        g.radii = {0.0, 0.5, 0.9};
        g.angles = 8;
        return g;
    }
};

struct StabilityReport {
    bool stable = false;
    double min_modulus = 0.0;          ///< min |p| over the interior grid
    std::vector<Cx> witness;           ///< interior point achieving the minimum
    double boundary_min_modulus = 0.0; ///< min |p| over the distinguished torus sample
    std::vector<Cx> boundary_witness;
    StabilityGrid grid;
};

namespace detail {

/// Minimum of |p| over the product grid with the given per-coordinate candidates.
inline void scan_min_modulus(const MultiPoly& p, const std::vector<Cx>& candidates,
                             double& min_mod, std::vector<Cx>& witness) {
    const int n = p.nvars();
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    std::vector<Cx> z(static_cast<std::size_t>(n));
    for (auto& zr : z) zr = candidates[0];
    while (true) {
        const double m = std::abs(p.eval(z));
        if (m < min_mod) {
            min_mod = m;
            witness = z;
        }
        int r = 0;
        for (; r < n; ++r) {
            auto& i = idx[static_cast<std::size_t>(r)];
            if (++i < candidates.size()) {
                z[static_cast<std::size_t>(r)] = candidates[i];
                break;
            }
            i = 0;
            z[static_cast<std::size_t>(r)] = candidates[0];
        }
        if (r == n) break;
    }
}

} // namespace detail

constexpr double kStabilityTolerance = 1e-9;
constexpr double kRootBoundaryTolerance = 1e-9;

/**
 * Non-vanishing check on the open polydisc. Exact (via roots) in one
 * variable; a sampled heuristic, not a certificate, in two or more.
 * The verdict uses interior samples only; the distinguished torus is
 * scanned separately so boundary zeros do not fail an inner denominator.
 */
inline StabilityReport is_stable(const MultiPoly& p, const StabilityGrid& grid) {
    if (p.is_zero()) throw ArgumentError("is_stable: zero polynomial");
    StabilityReport report;
    report.grid = grid;

    std::vector<Cx> interior, torus;
    interior.reserve(grid.radii.size() * static_cast<std::size_t>(grid.angles));
    for (int k = 0; k < grid.angles; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / grid.angles;
        const Cx dir{std::cos(theta), std::sin(theta)};
        torus.push_back(dir);
        for (double r : grid.radii) {
            if (r == 0.0 && k > 0) continue; // origin once
            interior.push_back(r * dir);
        }
    }

    report.min_modulus = std::numeric_limits<double>::infinity();
    detail::scan_min_modulus(p, interior, report.min_modulus, report.witness);
    report.boundary_min_modulus = std::numeric_limits<double>::infinity();
    detail::scan_min_modulus(p, torus, report.boundary_min_modulus, report.boundary_witness);

    if (p.nvars() == 1) {
        bool ok = true;
        for (Cx r : roots_1d(p))
            if (std::abs(r) < 1.0 - kRootBoundaryTolerance) {
                ok = false;
                report.witness = {r};
                report.min_modulus = std::abs(p.eval1(r));
                break;
            }
        report.stable = ok;
    } else {
        report.stable = report.min_modulus > kStabilityTolerance;
    }
    return report;
}

inline StabilityReport is_stable(const MultiPoly& p) {
    return is_stable(p, StabilityGrid::for_dimension(p.nvars()));
}

/// p(s(z)) for univariate p and s, by Horner over polynomial arithmetic.
inline MultiPoly compose_univariate(const MultiPoly& p, const MultiPoly& s) {
    if (p.nvars() != 1 || s.nvars() != 1)
        throw ArgumentError("compose_univariate: both operands must be univariate");
    if (p.is_zero()) return MultiPoly(1);
    const auto c = p.coeffs_1d();
    MultiPoly acc = MultiPoly::constant(1, c.back());
    for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k)
        acc = acc * s + MultiPoly::constant(1, c[static_cast<std::size_t>(k)]);
    return acc;
}

/**
 * Restriction along a flat disc: substitutes z_r = tau_r * z for every
 * coordinate (tau_1 is conventionally 1) and returns the univariate result.
 */
inline MultiPoly restrict_flat(const MultiPoly& p, std::span<const Cx> taus) {
    if (static_cast<int>(taus.size()) != p.nvars())
        throw ArgumentError("restrict_flat: multiplier count != nvars");
    MultiPoly r(1);
    for (const auto& [e, c] : p.terms()) {
        Cx coeff = c;
        for (std::size_t k = 0; k < e.size(); ++k)
            if (e[k] != 0) coeff *= pow_int(taus[k], e[k]);
        r.add_to_coeff({index_total(e)}, coeff);
    }
    return r.prune(p.max_coeff_modulus());
}

/**
 * Substitutes z_n = mult * z_{n-1}, merging the last two exponents; the
 * result has one variable fewer.
 */
inline MultiPoly substitute_last_pairing(const MultiPoly& p, Cx mult) {
    const int n = p.nvars();
    if (n < 2) throw ArgumentError("substitute_last_pairing: needs nvars >= 2");
    MultiPoly r(n - 1);
    MultiIndex e(static_cast<std::size_t>(n - 1), 0);
    for (const auto& [a, c] : p.terms()) {
        for (std::size_t k = 0; k + 2 < a.size(); ++k) e[k] = a[k];
        e[static_cast<std::size_t>(n - 2)] = a[static_cast<std::size_t>(n - 2)] + a[static_cast<std::size_t>(n - 1)];
        r.add_to_coeff(e, c * pow_int(mult, a[static_cast<std::size_t>(n - 1)]));
    }
    return r.prune(p.max_coeff_modulus());
}

/**
 * Substitutes z_2 = t(z - a)/(1 - conj(a) z) into a bivariate polynomial and
 * clears the graph denominator by multiplying through with
 * (1 - conj(a) z)^clear_power. clear_power must dominate the z_2-degree.
 */
inline MultiPoly substitute_mobius_graph(const MultiPoly& p, Cx t, Cx a, int clear_power) {
    if (p.nvars() != 2) throw ArgumentError("substitute_mobius_graph: needs nvars == 2");
    if (clear_power < p.multidegree()[1])
        throw ArgumentError("substitute_mobius_graph: clearing power below z2-degree");

    const Cx abar = std::conj(a);
    std::vector<MultiPoly> num_pow{MultiPoly::constant(1, {1.0, 0.0})}; // (z - a)^k
    std::vector<MultiPoly> den_pow{MultiPoly::constant(1, {1.0, 0.0})}; // (1 - conj(a) z)^k
    MultiPoly lin_num(1), lin_den(1);
    lin_num.set_coeff({0}, -a);
    lin_num.set_coeff({1}, {1.0, 0.0});
    lin_den.set_coeff({0}, {1.0, 0.0});
    lin_den.set_coeff({1}, -abar);
    for (int k = 1; k <= clear_power; ++k) {
        num_pow.push_back(num_pow.back() * lin_num);
        den_pow.push_back(den_pow.back() * lin_den);
    }

    MultiPoly r(1);
    for (const auto& [e, c] : p.terms()) {
        const int e1 = e[0], e2 = e[1];
        MultiPoly term = (c * pow_int(t, e2)) *
                         (num_pow[static_cast<std::size_t>(e2)] * den_pow[static_cast<std::size_t>(clear_power - e2)]);
        MultiPoly shifted(1);
        for (const auto& [te, tc] : term.terms()) shifted.set_coeff({te[0] + e1}, tc);
        r = r + shifted;
    }
    return r;
}

} // namespace polypick
