#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polypick/geometry.hpp"
#include "polypick/multipoly.hpp"
#include "polypick/pick.hpp"
#include "polypick/rif.hpp"
#include "polypick/verify.hpp"

namespace polypick {

using json = nlohmann::json;

namespace io_detail {

inline const json& require(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) throw SchemaError("expected object at " + path);
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError("missing field '" + std::string(key) + "' at " + path);
    return *it;
}

inline double require_number(const json& j, const char* key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_number()) throw SchemaError("field '" + std::string(key) + "' at " + path + " must be a number");
    return v.get<double>();
}

} // namespace io_detail

inline json complex_to_json(Cx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline Cx complex_from_json(const json& j, const std::string& path = "$") {
    return {io_detail::require_number(j, "re", path), io_detail::require_number(j, "im", path)};
}

// ---------------------------------------------------------------------------
// MultiPoly: {"nvars": n, "terms": [{"exp": [e1..en], "re": x, "im": y}, ...]}
// Terms are emitted in graded-lex order; finite doubles round-trip bit-exactly.
// ---------------------------------------------------------------------------

inline json to_json(const MultiPoly& p) {
    json terms = json::array();
    for (const auto& [e, c] : p.terms())
        terms.push_back(json{{"exp", e}, {"re", c.real()}, {"im", c.imag()}});
    return json{{"nvars", p.nvars()}, {"terms", std::move(terms)}};
}

inline MultiPoly multipoly_from_json(const json& j, const std::string& path = "$") {
    const int nvars = static_cast<int>(io_detail::require_number(j, "nvars", path));
    MultiPoly p(nvars);
    const json& terms = io_detail::require(j, "terms", path);
    if (!terms.is_array()) throw SchemaError("field 'terms' at " + path + " must be an array");
    std::size_t k = 0;
    for (const json& t : terms) {
        const std::string tpath = path + ".terms[" + std::to_string(k++) + "]";
        const json& exp = io_detail::require(t, "exp", tpath);
        if (!exp.is_array()) throw SchemaError("field 'exp' at " + tpath + " must be an array");
        MultiIndex e;
        for (const json& x : exp) {
            if (!x.is_number_integer()) throw SchemaError("exponents at " + tpath + " must be integers");
            e.push_back(x.get<int>());
        }
        try {
            p.set_coeff(std::move(e),
                        {io_detail::require_number(t, "re", tpath), io_detail::require_number(t, "im", tpath)});
        } catch (const ArgumentError& err) {
            throw SchemaError(std::string(err.what()) + " at " + tpath);
        }
    }
    return p;
}

// ---------------------------------------------------------------------------
// RationalInnerFunction: {"tau": {re,im}, "d": [...], "q": <polynomial>}
// Loading re-validates every invariant through make_rif.
// ---------------------------------------------------------------------------

inline json to_json(const RationalInnerFunction& f) {
    return json{{"tau", complex_to_json(f.tau)}, {"d", f.d}, {"q", to_json(f.q)}};
}

inline RationalInnerFunction rif_from_json(const json& j, const std::string& path = "$") {
    const Cx tau = complex_from_json(io_detail::require(j, "tau", path), path + ".tau");
    const json& dj = io_detail::require(j, "d", path);
    if (!dj.is_array()) throw SchemaError("field 'd' at " + path + " must be an array");
    MultiIndex d;
    for (const json& x : dj) {
        if (!x.is_number_integer()) throw SchemaError("entries of 'd' at " + path + " must be integers");
        d.push_back(x.get<int>());
    }
    const MultiPoly q = multipoly_from_json(io_detail::require(j, "q", path), path + ".q");
    return make_rif(tau, std::move(d), q);
}

// ---------------------------------------------------------------------------
// OneVarRational: {"num": <polynomial>, "den": <polynomial>, "inner": bool}
// ---------------------------------------------------------------------------

inline json to_json(const OneVarRational& r) {
    return json{{"num", to_json(r.num)}, {"den", to_json(r.den)}, {"inner", r.inner}};
}

inline OneVarRational one_var_rational_from_json(const json& j, const std::string& path = "$") {
    OneVarRational r;
    r.num = multipoly_from_json(io_detail::require(j, "num", path), path + ".num");
    r.den = multipoly_from_json(io_detail::require(j, "den", path), path + ".den");
    const json& inner = io_detail::require(j, "inner", path);
    if (!inner.is_boolean()) throw SchemaError("field 'inner' at " + path + " must be boolean");
    r.inner = inner.get<bool>();
    return r;
}

// ---------------------------------------------------------------------------
// NodeGrid
// ---------------------------------------------------------------------------

inline json to_json(const NodeGrid& grid) {
    json tau_table = json::array();
    for (const auto& row : grid.tau_table) {
        json r = json::array();
        for (Cx t : row) r.push_back(complex_to_json(t));
        tau_table.push_back(std::move(r));
    }
    json base = json::array();
    for (const auto& row : grid.base_points) {
        json r = json::array();
        for (Cx z : row) r.push_back(complex_to_json(z));
        base.push_back(std::move(r));
    }
    json nodes = json::array();
    for (const auto& node : grid.nodes) {
        json r = json::array();
        for (Cx z : node) r.push_back(complex_to_json(z));
        nodes.push_back(std::move(r));
    }
    return json{{"N", grid.N},          {"n", grid.n},      {"seed", grid.seed},
                {"tau_table", std::move(tau_table)}, {"base_points", std::move(base)},
                {"nodes", std::move(nodes)}};
}

inline NodeGrid grid_from_json(const json& j, const std::string& path = "$") {
    const int N = static_cast<int>(io_detail::require_number(j, "N", path));
    const int n = static_cast<int>(io_detail::require_number(j, "n", path));

    NodeGridConfig config;
    if (auto it = j.find("seed"); it != j.end()) config.seed = it->get<std::uint64_t>();

    const json& taus = io_detail::require(j, "tau_table", path);
    if (!taus.is_array()) throw SchemaError("field 'tau_table' at " + path + " must be an array");
    std::vector<std::vector<Cx>> rows;
    for (const json& rj : taus) {
        std::vector<Cx> row;
        for (const json& t : rj) row.push_back(complex_from_json(t, path + ".tau_table"));
        rows.push_back(std::move(row));
    }
    if (!rows.empty()) config.multipliers = rows;

    const json& base = io_detail::require(j, "base_points", path);
    if (!base.is_array() || base.empty())
        throw SchemaError("field 'base_points' at " + path + " must be a non-empty array");
    std::vector<Cx> base_row;
    for (const json& z : base[0]) base_row.push_back(complex_from_json(z, path + ".base_points"));
    config.base_points = base_row;

    NodeGrid grid;
    try {
        grid = generate_nodes(N, n, config);
    } catch (const ArgumentError& e) {
        throw SchemaError(std::string(e.what()) + " at " + path);
    }

    // Cross-check the stored lattice against the regenerated one.
    const json& nodes = io_detail::require(j, "nodes", path);
    if (!nodes.is_array() || nodes.size() != grid.nodes.size())
        throw SchemaError("field 'nodes' at " + path + " has wrong cardinality (expected " +
                          std::to_string(grid.nodes.size()) + ")");
    for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
        std::size_t r = 0;
        for (const json& zj : nodes[k]) {
            const Cx z = complex_from_json(zj, path + ".nodes");
            if (std::abs(z - grid.nodes[k][r++]) > 1e-12)
                throw SchemaError("stored node " + std::to_string(k) + " at " + path +
                                  " does not match the lattice recomputed from tau_table/base_points");
        }
    }
    return grid;
}

// ---------------------------------------------------------------------------
// Pick problems and verdicts
// ---------------------------------------------------------------------------

inline json to_json(const PickProblem& p) {
    json nodes = json::array(), targets = json::array();
    for (Cx z : p.nodes) nodes.push_back(complex_to_json(z));
    for (Cx w : p.targets) targets.push_back(complex_to_json(w));
    return json{{"nodes", std::move(nodes)}, {"targets", std::move(targets)}};
}

inline PickProblem pick_problem_from_json(const json& j, const std::string& path = "$") {
    PickProblem p;
    const json& nodes = io_detail::require(j, "nodes", path);
    const json& targets = io_detail::require(j, "targets", path);
    if (!nodes.is_array() || !targets.is_array())
        throw SchemaError("fields 'nodes' and 'targets' at " + path + " must be arrays");
    for (const json& z : nodes) p.nodes.push_back(complex_from_json(z, path + ".nodes"));
    for (const json& w : targets) p.targets.push_back(complex_from_json(w, path + ".targets"));
    try {
        validate_problem(p);
    } catch (const ArgumentError& e) {
        throw SchemaError(std::string(e.what()) + " at " + path);
    }
    return p;
}

inline json to_json(const UniquenessVerdict& v) {
    return json{{"solvable", v.solvable},
                {"unique", v.unique},
                {"min_eigenvalue", v.min_eigenvalue},
                {"smallest_relative_eigenvalue", v.smallest_relative_eigenvalue},
                {"tolerances", json{{"psd", v.tol.psd}, {"rank", v.tol.rank}}}};
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

inline json to_json(const CertifyTolerances& t) {
    return json{{"psd", t.psd},
                {"rank", t.rank},
                {"reconstruction_residual", t.recon_residual},
                {"cross_residual", t.cross_residual},
                {"intersection_residual", t.intersect_residual}};
}

inline json to_json(const DiscEvidence& ev) {
    json multipliers = json::array();
    for (Cx t : ev.multipliers) multipliers.push_back(complex_to_json(t));
    return json{{"disc", ev.disc_index},
                {"multipliers", std::move(multipliers)},
                {"node_count", ev.node_count},
                {"restricted_degree", ev.restricted_degree},
                {"interior_zero_count", ev.interior_zero_count},
                {"verdict", to_json(ev.verdict)},
                {"spectrum", ev.spectrum},
                {"reconstruction_residual", ev.reconstruction_residual},
                {"pass", ev.pass},
                {"failure", ev.failure}};
}

inline json to_json(const MobiusEvidence& ev) {
    json points = json::array();
    for (Cx z : ev.points) points.push_back(complex_to_json(z));
    return json{{"t", complex_to_json(ev.m.t)},
                {"a", complex_to_json(ev.m.a)},
                {"epsilon", ev.epsilon},
                {"intersection_points", std::move(points)},
                {"max_intersection_residual", ev.max_intersection_residual},
                {"min_point_gap", ev.min_point_gap},
                {"restricted_degree", ev.restricted_degree},
                {"verdict", to_json(ev.verdict)},
                {"spectrum", ev.spectrum},
                {"reconstruction_residual", ev.reconstruction_residual},
                {"consistency_residual", ev.consistency_residual},
                {"pass", ev.pass},
                {"failure", ev.failure}};
}

inline json to_json(const UniquenessCertificate& cert) {
    json j{{"format", "polypick-certificate"},
           {"version", 1},
           {"kind", cert.kind},
           {"n", cert.n},
           {"N", cert.N},
           {"degree", cert.f_degree},
           {"seed", cert.seed},
           {"tolerances", to_json(cert.tol)},
           {"semantics", cert.semantics},
           {"caveats", cert.caveats},
           {"node_savings", cert.node_savings},
           {"overall", cert.overall}};
    json discs = json::array();
    for (const auto& ev : cert.per_disc) discs.push_back(to_json(ev));
    j["per_disc"] = std::move(discs);
    if (cert.mobius) j["mobius_cross_check"] = to_json(*cert.mobius);
    if (!cert.rho_sweep.empty()) {
        json sweep = json::array();
        for (const auto& rev : cert.rho_sweep)
            sweep.push_back(json{{"rho", complex_to_json(rev.rho)},
                                 {"pass", rev.pass},
                                 {"certificate", rev.sub ? to_json(*rev.sub) : json()}});
        j["rho_sweep"] = std::move(sweep);
    }
    return j;
}

namespace io_detail {

inline std::string join_spectrum(const std::vector<double>& spectrum) {
    std::ostringstream os;
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        if (i) os << ';';
        os << json(spectrum[i]).dump();
    }
    return os.str();
}

inline void certificate_csv_rows(const UniquenessCertificate& cert, const std::string& prefix,
                                 std::ostringstream& os) {
    for (const auto& ev : cert.per_disc)
        os << prefix << "flat:" << ev.disc_index << ',' << ev.node_count << ','
           << ev.restricted_degree << ',' << join_spectrum(ev.spectrum) << ','
           << json(ev.reconstruction_residual).dump() << ',' << (ev.pass ? 1 : 0) << '\n';
    if (cert.mobius)
        os << prefix << "mobius," << cert.mobius->points.size() << ','
           << cert.mobius->restricted_degree << ',' << join_spectrum(cert.mobius->spectrum) << ','
           << json(cert.mobius->reconstruction_residual).dump() << ',' << (cert.mobius->pass ? 1 : 0)
           << '\n';
    for (std::size_t k = 0; k < cert.rho_sweep.size(); ++k)
        if (cert.rho_sweep[k].sub)
            certificate_csv_rows(*cert.rho_sweep[k].sub, prefix + "rho" + std::to_string(k) + ":", os);
}

} // namespace io_detail

/// CSV summary of all certificate stages; columns fixed by the v1 header.
inline std::string certificate_csv(const UniquenessCertificate& cert) {
    std::ostringstream os;
    os << "# polypick certificate CSV v1\n";
    os << "stage,node_count,restricted_degree,eigenvalues,reconstruction_residual,pass\n";
    io_detail::certificate_csv_rows(cert, "", os);
    return os.str();
}

// ---------------------------------------------------------------------------
// Sharpness and sweep reports
// ---------------------------------------------------------------------------

inline json to_json(const ValueDisc& d) {
    return json{{"center", complex_to_json(d.center)}, {"radius", d.radius}};
}

inline json to_json(const SharpnessReport& r) {
    json kept_nodes = json::array(), kept_targets = json::array();
    for (Cx z : r.kept_nodes) kept_nodes.push_back(complex_to_json(z));
    for (Cx w : r.kept_targets) kept_targets.push_back(complex_to_json(w));
    return json{{"format", "polypick-sharpness"},
                {"version", 1},
                {"disc", r.disc_index},
                {"z_star", complex_to_json(r.z_star)},
                {"restricted_degree", r.restricted_degree},
                {"kept_nodes", std::move(kept_nodes)},
                {"kept_targets", std::move(kept_targets)},
                {"dropped_node", complex_to_json(r.dropped_node)},
                {"reduced_verdict", to_json(r.reduced_verdict)},
                {"spectrum", r.spectrum},
                {"value_disc", to_json(r.disc)},
                {"first", to_json(r.first)},
                {"second", to_json(r.second)},
                {"value_first", complex_to_json(r.value_first)},
                {"value_second", complex_to_json(r.value_second)},
                {"disagreement", r.disagreement},
                {"max_node_residual", r.max_node_residual},
                {"pass", r.pass},
                {"failure", r.failure}};
}

inline json to_json(const SweepReport& r) {
    return json{{"format", "polypick-sweep"},
                {"version", 1},
                {"max_deviation", r.max_deviation},
                {"point_count", r.point_count},
                {"base_t", complex_to_json(r.base.t)},
                {"base_a", complex_to_json(r.base.a)},
                {"epsilon", r.epsilon},
                {"argmax", json{{"t", complex_to_json(r.argmax.t)},
                                {"a", complex_to_json(r.argmax.a)},
                                {"z", complex_to_json(r.argmax.z)},
                                {"point", json::array({complex_to_json(r.argmax.ambient_1),
                                                       complex_to_json(r.argmax.ambient_2)})}}}};
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

inline json load_json_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw SchemaError("cannot open file: " + file);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("malformed JSON in " + file + ": " + e.what());
    }
}

inline void write_text_file(const std::string& file, const std::string& text) {
    std::ofstream out(file);
    if (!out) throw Error("cannot write file: " + file);
    out << text;
    if (!out) throw Error("write failed: " + file);
}

inline void write_json_file(const std::string& file, const json& j) {
    write_text_file(file, j.dump(2) + "\n");
}

} // namespace polypick
