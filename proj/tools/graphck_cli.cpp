// Command-line front end: verification, Wold decomposition, dilation and
// normal-form pipelines over structured JSON documents.

#include <cstdint>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "ck/dilate.hpp"
#include "ck/expr.hpp"
#include "ck/serialize.hpp"
#include "ck/verify.hpp"
#include "ck/wold.hpp"

namespace {

constexpr long kMaxMatrixEntries = 1000000;

struct Common {
    std::string family_path;
    std::string graph_path;
    std::string out_path;
    double tol = -1.0;
    std::uint64_t seed = 0;
};

ck::Json make_meta(const Common& c, double tolerance, int depth) {
    ck::Json m;
    m["tool_version"] = ck::kToolVersion;
    m["tolerance"] = tolerance;
    m["depth"] = depth;
    m["seed"] = c.seed;
    return m;
}

std::shared_ptr<const ck::Graph> load_graph(const std::string& path) {
    return ck::graph_from_json(ck::load_json(path));
}

ck::OperatorFamily load_family(const Common& c) {
    ck::Json j = ck::load_json(c.family_path);
    if (j.contains("dimension")) {
        long d = j.at("dimension").get<long>();
        if (d * d > kMaxMatrixEntries)
            throw std::runtime_error(
                "family dimension " + std::to_string(d) + " exceeds the matrix "
                "budget (~1e6 entries per operator); split the space or use the "
                "library API directly");
    }
    std::shared_ptr<const ck::Graph> g;
    if (!c.graph_path.empty()) {
        g = load_graph(c.graph_path);
    } else if (j.contains("graph") && j.at("graph").is_string()) {
        // resolve the reference relative to the family file
        std::filesystem::path base =
            std::filesystem::path(c.family_path).parent_path();
        g = load_graph((base / j.at("graph").get<std::string>()).string());
    }
    ck::OperatorFamily fam = ck::family_from_json(j, std::move(g));
    if (c.tol > 0) fam.tolerance = c.tol;
    return fam;
}

void print_report(const ck::RelationReport& rep, const ck::Graph& g) {
    std::cout << "classification: " << ck::to_string(rep.classification) << "\n";
    std::cout << "tolerance:      " << rep.tolerance << "\n";
    std::cout << "projections:    residual " << rep.projection_residual << "\n";
    for (const ck::ColorCheck& cc : rep.colors) {
        std::cout << "color " << g.color_id(cc.color) << ":\n";
        double worst_i = 0.0;
        for (const auto& [e, r] : cc.isometry_residual) worst_i = std::max(worst_i, r);
        std::cout << "  isometry residual (max over edges): " << worst_i << "\n";
        for (const auto& [v, vc] : cc.vertices) {
            std::cout << "  vertex " << g.vertex_id(v) << ": slack " << vc.tck_slack
                      << ", defect norm " << vc.defect_norm << ", defect rank "
                      << vc.defect_rank << "\n";
        }
    }
    if (!rep.singular.empty()) {
        std::cout << "singular vertices:";
        for (const auto& [c, v] : rep.singular)
            std::cout << " (" << g.color_id(c) << "," << g.vertex_id(v) << ")";
        std::cout << "\n";
    }
}

int run_verify(const Common& c, bool with_wold) {
    ck::OperatorFamily fam = load_family(c);
    ck::RelationReport rep = ck::check_full_ck(fam);
    print_report(rep, fam.g());

    ck::Json doc;
    doc["meta"] = make_meta(c, fam.tolerance, fam.depth);
    doc["report"] = ck::report_to_json(rep, fam.g());

    bool invalid = rep.classification == ck::Classification::INVALID;
    if (with_wold && !invalid && fam.g().num_colors() == 1) {
        ck::WoldDecomposition w = ck::wold_decompose(fam);
        std::cout << "wold multiplicities:\n";
        for (const auto& [v, a] : w.multiplicities)
            std::cout << "  alpha(" << fam.g().vertex_id(v) << ") = " << a << "\n";
        std::cout << "  complement dimension = " << w.complement.cols() << "\n";
        doc["wold"] = ck::wold_to_json(w);
    }
    if (!c.out_path.empty()) ck::save_json(c.out_path, doc);
    return invalid ? 2 : 0;
}

int run_wold(const Common& c) {
    ck::OperatorFamily fam = load_family(c);
    if (fam.g().num_colors() != 1) {
        std::cerr << "error: wold needs a single-color family (this one has "
                  << fam.g().num_colors() << " colors)\n";
        return 1;
    }
    ck::RelationReport rep = ck::check_tck(fam);
    if (rep.classification == ck::Classification::INVALID) {
        std::cout << "family is INVALID; no decomposition\n";
        if (!c.out_path.empty()) {
            ck::Json doc;
            doc["meta"] = make_meta(c, fam.tolerance, fam.depth);
            doc["report"] = ck::report_to_json(rep, fam.g());
            ck::save_json(c.out_path, doc);
        }
        return 2;
    }
    ck::WoldDecomposition w = ck::wold_decompose(fam);
    std::cout << "wold multiplicities:\n";
    for (const auto& [v, a] : w.multiplicities)
        std::cout << "  alpha(" << fam.g().vertex_id(v) << ") = " << a << "\n";
    std::cout << "complement dimension: " << w.complement.cols() << "\n";
    std::cout << "orthogonality defect: " << w.diagnostics.orthogonality_defect
              << ", boundary leakage: " << w.diagnostics.boundary_leakage << "\n";
    if (!c.out_path.empty()) {
        ck::Json doc;
        doc["meta"] = make_meta(c, fam.tolerance, fam.depth);
        doc["wold"] = ck::wold_to_json(w);
        ck::save_json(c.out_path, doc);
    }
    return 0;
}

int run_dilate(const Common& c, int depth, int max_degree, int max_dimension,
               const std::vector<std::string>& color_order) {
    ck::OperatorFamily fam = load_family(c);
    ck::RelationReport rep = ck::check_tck(fam);
    if (rep.classification == ck::Classification::INVALID) {
        std::cout << "family is INVALID; not dilating\n";
        if (!c.out_path.empty()) {
            ck::Json doc;
            doc["meta"] = make_meta(c, fam.tolerance, depth);
            doc["report"] = ck::report_to_json(rep, fam.g());
            ck::save_json(c.out_path, doc);
        }
        return 2;
    }

    ck::Dilation dil;
    if (fam.g().num_colors() == 1) {
        dil = ck::full_ck_dilation(fam, depth, max_degree);
    } else {
        std::vector<int> order;
        for (const std::string& id : color_order) {
            auto idx = fam.g().color_index(id);
            if (!idx) {
                std::cerr << "error: unknown color id '" << id << "'\n";
                return 1;
            }
            order.push_back(*idx);
        }
        dil = ck::colored_full_ck_dilation(fam, depth, max_dimension, max_degree,
                                           std::move(order));
    }

    const ck::DilationCertificate& cert = dil.certificate;
    std::cout << "dilated dimension: " << dil.family.dimension << " (from "
              << fam.dimension << ")\n";
    std::cout << "compression error: " << cert.max_compression_error << " over "
              << cert.monomials_checked << " monomials (degree <= "
              << cert.max_degree << ")\n";
    double worst_defect = 0.0;
    for (const auto& [key, n] : cert.interior_defects)
        worst_defect = std::max(worst_defect, n);
    std::cout << "interior defect (max): " << worst_defect << "\n";
    if (cert.partial)
        std::cout << "note: dimension budget reached, certificate is partial\n";

    if (!c.out_path.empty()) {
        ck::Json doc;
        doc["meta"] = make_meta(c, fam.tolerance, depth);
        doc["family"] = ck::family_to_json(dil.family);
        doc["certificate"] = ck::certificate_to_json(cert, fam.g());
        ck::save_json(c.out_path, doc);
    }
    return 0;
}

int run_normalform(const Common& c, const std::string& expr) {
    if (c.graph_path.empty() && c.family_path.empty()) {
        std::cerr << "error: normalform needs --graph (or --family)\n";
        return 1;
    }
    std::shared_ptr<const ck::Graph> g;
    if (!c.graph_path.empty())
        g = load_graph(c.graph_path);
    else
        g = load_family(c).graph;
    ck::AlgElement nf = ck::parse_expression(*g, expr);
    std::string text = ck::to_text(nf);
    std::cout << text << "\n";
    if (!c.out_path.empty()) {
        ck::Json doc;
        doc["meta"] = make_meta(c, c.tol > 0 ? c.tol : 1e-9, -1);
        doc["input"] = expr;
        doc["normal_form"] = text;
        ck::Json terms = ck::Json::array();
        for (const auto& [key, term] : nf.terms()) {
            const auto& [mono, coeff] = term;
            ck::Json jt;
            jt["coefficient"] = {coeff.real(), coeff.imag()};
            jt["mu_source"] = g->vertex_id(mono.mu().source());
            jt["mu"] = ck::path_edge_ids(*g, mono.mu());
            jt["nu"] = ck::path_edge_ids(*g, mono.nu());
            terms.push_back(jt);
        }
        doc["terms"] = terms;
        ck::save_json(c.out_path, doc);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph operator family workbench"};
    app.require_subcommand(1);

    Common common;
    int depth = 4;
    int max_degree = -1;
    int max_dimension = 512;
    std::vector<std::string> color_order;
    std::string expr;

    auto add_common = [&](CLI::App* sub, bool need_family) {
        auto* f = sub->add_option("--family", common.family_path, "family file");
        if (need_family) f->required();
        sub->add_option("--graph", common.graph_path, "graph file");
        sub->add_option("--out", common.out_path, "output document path");
        sub->add_option("--tol", common.tol, "tolerance override");
        sub->add_option("--seed", common.seed, "seed recorded in outputs");
    };

    CLI::App* verify = app.add_subcommand("verify", "check relations and classify");
    add_common(verify, true);

    CLI::App* wold = app.add_subcommand("wold", "Wold decomposition of a TCK family");
    add_common(wold, true);

    CLI::App* dilate = app.add_subcommand("dilate", "dilate to a full CK family");
    add_common(dilate, true);
    dilate->add_option("--depth", depth, "construction depth / rounds");
    dilate->add_option("--max-degree", max_degree,
                       "certificate monomial degree (default depth/2)");
    dilate->add_option("--max-dimension", max_dimension,
                       "dimension budget for the colored construction");
    dilate->add_option("--color-order", color_order,
                       "color ids in processing order (colored families)");

    CLI::App* normalform =
        app.add_subcommand("normalform", "rewrite an expression to normal form");
    normalform->add_option("expression", expr, "expression text")->required();
    add_common(normalform, false);

    CLI::App* report = app.add_subcommand("report", "verification plus Wold summary");
    add_common(report, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(verify)) return run_verify(common, false);
        if (app.got_subcommand(report)) return run_verify(common, true);
        if (app.got_subcommand(wold)) return run_wold(common);
        if (app.got_subcommand(dilate))
            return run_dilate(common, depth, max_degree, max_dimension, color_order);
        if (app.got_subcommand(normalform)) return run_normalform(common, expr);
    } catch (const ck::ParseError& e) {
        std::cerr << "expression error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
