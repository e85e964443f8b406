// Command-line front end: node lattices, inner functions in normal form,
// restrictions, Pick classification, uniqueness certificates, sharpness
// demonstrations, and equality sweeps. All artifacts are JSON (complex
// numbers always as {"re":..., "im":...}); certificates also export CSV.
//
// Exit codes: 0 success (including "unsolvable" query results), 2 a
// certificate/demonstration failed, 1 usage or validation errors.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "polypick/json_io.hpp"
#include "polypick/verify.hpp"

namespace {

using namespace polypick;

Cx parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) return {std::stod(text), 0.0};
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw ArgumentError("cannot parse complex number from '" + text + "' (expected re,im)");
    }
}

std::vector<Cx> parse_complex_list(const std::string& text) {
    std::vector<Cx> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto semi = text.find(';', start);
        const std::string item =
            semi == std::string::npos ? text.substr(start) : text.substr(start, semi - start);
        if (!item.empty()) out.push_back(parse_complex(item));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    return out;
}

CertifyTolerances tolerance_profile() {
    CertifyTolerances tol;
    const char* profile = std::getenv("POLYPICK_TOL_PROFILE");
    if (profile == nullptr || std::string(profile) == "default") return tol;
    const std::string name(profile);
    if (name == "strict") {
        tol.psd = 1e-10;
        tol.rank = 1e-8;
        tol.recon_residual = 1e-8;
        tol.cross_residual = 1e-8;
    } else if (name == "loose") {
        tol.psd = 1e-8;
        tol.rank = 1e-6;
        tol.recon_residual = 1e-6;
        tol.cross_residual = 1e-6;
    } else {
        throw ArgumentError("unknown POLYPICK_TOL_PROFILE '" + name +
                            "' (expected default, strict, or loose)");
    }
    return tol;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << "\n";
    else
        write_json_file(out_path, j);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rational inner functions, node lattices, and uniqueness certificates on the polydisc"};
    app.require_subcommand(1);

    int exit_code = 0;

    // gen-nodes -------------------------------------------------------------
    auto* gen = app.add_subcommand("gen-nodes", "generate the N^n-node lattice of flat discs");
    int gen_N = 2, gen_n = 2;
    std::uint64_t gen_seed = 0;
    std::string gen_out, gen_taus;
    gen->add_option("--N", gen_N, "points per disc (strict degree bound)")->required();
    gen->add_option("--n", gen_n, "polydisc dimension")->required();
    gen->add_option("--seed", gen_seed, "seed recorded in the grid");
    gen->add_option("--taus", gen_taus,
                    "optional multipliers, rows joined by '|', entries 're,im' joined by ';'");
    gen->add_option("-o,--out", gen_out, "output grid JSON path");
    gen->callback([&] {
        NodeGridConfig config;
        config.seed = gen_seed;
        if (!gen_taus.empty()) {
            std::vector<std::vector<Cx>> rows;
            std::size_t start = 0;
            while (start <= gen_taus.size()) {
                const auto bar = gen_taus.find('|', start);
                const std::string row = bar == std::string::npos ? gen_taus.substr(start)
                                                                 : gen_taus.substr(start, bar - start);
                if (!row.empty()) rows.push_back(parse_complex_list(row));
                if (bar == std::string::npos) break;
                start = bar + 1;
            }
            config.multipliers = rows;
        }
        emit(to_json(generate_nodes(gen_N, gen_n, config)), gen_out);
    });

    // make-rif ---------------------------------------------------------------
    auto* mk = app.add_subcommand("make-rif", "validate and write an inner function in normal form");
    std::string mk_tau = "1,0", mk_d, mk_q, mk_out;
    mk->add_option("--tau", mk_tau, "unimodular constant as re,im");
    mk->add_option("--d", mk_d, "monomial degrees, comma separated (e.g. 1,1)")->required();
    mk->add_option("--q", mk_q, "denominator polynomial JSON path")->required();
    mk->add_option("-o,--out", mk_out, "output JSON path");
    mk->callback([&] {
        MultiIndex d;
        std::size_t start = 0;
        while (start <= mk_d.size()) {
            const auto comma = mk_d.find(',', start);
            const std::string item =
                comma == std::string::npos ? mk_d.substr(start) : mk_d.substr(start, comma - start);
            if (!item.empty()) d.push_back(std::stoi(item));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        const MultiPoly q = multipoly_from_json(load_json_file(mk_q));
        const RationalInnerFunction f = make_rif(parse_complex(mk_tau), d, q);
        emit(to_json(f), mk_out);
    });

    // eval -------------------------------------------------------------------
    auto* ev = app.add_subcommand("eval", "evaluate an inner function at a point");
    std::string ev_rif;
    std::vector<std::string> ev_at;
    ev->add_option("--rif", ev_rif, "inner function JSON path")->required();
    ev->add_option("--at", ev_at, "coordinate re,im (repeat per coordinate)")->required();
    ev->callback([&] {
        const RationalInnerFunction f = rif_from_json(load_json_file(ev_rif));
        std::vector<Cx> z;
        for (const auto& s : ev_at) z.push_back(parse_complex(s));
        const Cx value = eval_rif(f, z);
        std::cout << json{{"value", complex_to_json(value)}}.dump(2) << "\n";
    });

    // restrict ---------------------------------------------------------------
    auto* rs = app.add_subcommand("restrict", "restrict an inner function to an analytic disc");
    std::string rs_rif, rs_grid, rs_taus, rs_t, rs_a, rs_out;
    int rs_disc = 0;
    rs->add_option("--rif", rs_rif, "inner function JSON path")->required();
    rs->add_option("--grid", rs_grid, "grid JSON path (with --disc)");
    rs->add_option("--disc", rs_disc, "disc index into the grid");
    rs->add_option("--taus", rs_taus, "flat multipliers 're,im' joined by ';'");
    rs->add_option("--mobius-t", rs_t, "graph disc rotation re,im");
    rs->add_option("--mobius-a", rs_a, "graph disc center re,im");
    rs->add_option("-o,--out", rs_out, "output JSON path");
    rs->callback([&] {
        const RationalInnerFunction f = rif_from_json(load_json_file(rs_rif));
        AnalyticDisc disc;
        if (!rs_grid.empty()) {
            const NodeGrid grid = grid_from_json(load_json_file(rs_grid));
            if (rs_disc < 0 || rs_disc >= grid.disc_count())
                throw ArgumentError("disc index out of range");
            disc = grid.discs[static_cast<std::size_t>(rs_disc)];
        } else if (!rs_taus.empty()) {
            disc = AnalyticDisc::flat(parse_complex_list(rs_taus));
        } else if (!rs_t.empty()) {
            disc = AnalyticDisc::mobius_graph(MobiusMap(parse_complex(rs_t), parse_complex(rs_a)));
        } else {
            throw ArgumentError("restrict: provide --grid/--disc, --taus, or --mobius-t/--mobius-a");
        }
        emit(to_json(restrict_to_disc(f, disc)), rs_out);
    });

    // pick -------------------------------------------------------------------
    auto* pk = app.add_subcommand("pick", "classify a one-variable interpolation problem");
    std::string pk_problem, pk_out;
    pk->add_option("--problem", pk_problem, "problem JSON path")->required();
    pk->add_option("-o,--out", pk_out, "verdict JSON path");
    pk->callback([&] {
        const PickProblem problem = pick_problem_from_json(load_json_file(pk_problem));
        const CertifyTolerances tol = tolerance_profile();
        const PickMatrix matrix = build_pick_matrix(problem, {tol.psd, tol.rank});
        const UniquenessVerdict verdict = classify(matrix, {tol.psd, tol.rank});
        json j = to_json(verdict);
        j["spectrum"] = detail::spectrum_of(matrix);
        j["summary"] = !verdict.solvable ? "unsolvable"
                       : verdict.unique  ? "unique"
                                         : "solvable, not unique";
        emit(j, pk_out);
        if (pk_out.empty() == false) std::cout << j["summary"].get<std::string>() << "\n";
    });

    // certify / refine ---------------------------------------------------------
    std::string ce_rif, ce_grid, ce_out, ce_csv;
    std::uint64_t ce_seed = 1;
    for (const char* name : {"certify", "refine"}) {
        const bool refined = std::string(name) == "refine";
        auto* ce = app.add_subcommand(name, refined
                                                ? "certificate with refined per-disc node counts"
                                                : "full uniqueness certificate over the node lattice");
        ce->add_option("--rif", ce_rif, "inner function JSON path")->required();
        ce->add_option("--grid", ce_grid, "grid JSON path")->required();
        ce->add_option("--seed", ce_seed, "seed for fresh points and the graph-disc search");
        ce->add_option("-o,--out", ce_out, "certificate JSON path");
        ce->add_option("--csv", ce_csv, "certificate CSV path");
        ce->callback([&, refined] {
            const RationalInnerFunction f = rif_from_json(load_json_file(ce_rif));
            const NodeGrid grid = grid_from_json(load_json_file(ce_grid));
            CertifyOptions opts;
            opts.seed = ce_seed;
            opts.tol = tolerance_profile();
            const UniquenessCertificate cert =
                refined ? refined_certify(f, grid, opts) : certify_uniqueness(f, grid, opts);
            emit(to_json(cert), ce_out);
            if (!ce_csv.empty()) write_text_file(ce_csv, certificate_csv(cert));
            if (!ce_out.empty())
                std::cout << (cert.overall ? "certificate: pass" : "certificate: FAIL") << "\n";
            if (!cert.overall) exit_code = 2;
        });
    }

    // sharpness ----------------------------------------------------------------
    auto* sh = app.add_subcommand("sharpness", "drop a node, exhibit two interpolants");
    std::string sh_rif, sh_grid, sh_z = "0.5,0", sh_out;
    int sh_disc = 0;
    std::uint64_t sh_seed = 1;
    sh->add_option("--rif", sh_rif, "inner function JSON path")->required();
    sh->add_option("--grid", sh_grid, "grid JSON path")->required();
    sh->add_option("--disc", sh_disc, "disc index");
    sh->add_option("--zstar", sh_z, "comparison point re,im");
    sh->add_option("--seed", sh_seed, "seed");
    sh->add_option("-o,--out", sh_out, "report JSON path");
    sh->callback([&] {
        const RationalInnerFunction f = rif_from_json(load_json_file(sh_rif));
        const NodeGrid grid = grid_from_json(load_json_file(sh_grid));
        CertifyOptions opts;
        opts.seed = sh_seed;
        opts.tol = tolerance_profile();
        const SharpnessReport report = sharpness_demo(f, grid, sh_disc, parse_complex(sh_z), opts);
        emit(to_json(report), sh_out);
        if (!report.pass) exit_code = 2;
    });

    // sweep ----------------------------------------------------------------------
    auto* sw = app.add_subcommand("sweep", "max |f - g| over the sampled graph-disc family");
    std::string sw_f, sw_g, sw_out;
    std::uint64_t sw_seed = 1;
    sw->add_option("--rif", sw_f, "first inner function JSON path")->required();
    sw->add_option("--rif2", sw_g, "second inner function JSON path")->required();
    sw->add_option("--seed", sw_seed, "seed");
    sw->add_option("-o,--out", sw_out, "report JSON path");
    sw->callback([&] {
        const RationalInnerFunction f = rif_from_json(load_json_file(sw_f));
        const RationalInnerFunction g = rif_from_json(load_json_file(sw_g));
        if (f.nvars() != 2 || g.nvars() != 2)
            throw ArgumentError("sweep: both functions must live on the bidisc");
        SweepParams params;
        params.seed = sw_seed;
        const SweepReport report = equality_sweep(
            [&](Cx z1, Cx z2) { return eval_rif(f, {z1, z2}); },
            [&](Cx z1, Cx z2) { return eval_rif(g, {z1, z2}); }, params);
        emit(to_json(report), sw_out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
