#include "ck/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace ck {

Json graph_to_json(const Graph& g) {
    Json j;
    j["vertices"] = Json::array();
    for (int v = 0; v < g.num_vertices(); ++v) j["vertices"].push_back(g.vertex_id(v));
    j["edges"] = Json::array();
    for (int e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edge(e);
        Json je;
        je["id"] = ed.id;
        je["src"] = g.vertex_id(ed.src);
        je["dst"] = g.vertex_id(ed.dst);
        je["color"] = g.color_id(ed.color);
        j["edges"].push_back(je);
    }
    return j;
}

std::shared_ptr<const Graph> graph_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
        throw std::runtime_error("graph document needs 'vertices' and 'edges'");
    std::vector<std::string> vertices;
    for (const auto& v : j.at("vertices")) vertices.push_back(v.get<std::string>());
    std::vector<EdgeSpec> edges;
    for (const auto& e : j.at("edges")) {
        EdgeSpec spec;
        spec.id = e.at("id").get<std::string>();
        spec.src = e.at("src").get<std::string>();
        spec.dst = e.at("dst").get<std::string>();
        if (e.contains("color")) spec.color = e.at("color").get<std::string>();
        edges.push_back(std::move(spec));
    }
    return make_graph(std::move(vertices), edges);
}

Json matrix_to_json(const Matrix& m) {
    Json j = Json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int k = 0; k < m.cols(); ++k)
            j.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
    return j;
}

Matrix matrix_from_json(const Json& j, int rows, int cols) {
    if (!j.is_array() || static_cast<long>(j.size()) != static_cast<long>(rows) * cols)
        throw std::runtime_error("matrix entry count does not match dimensions");
    Matrix m(rows, cols);
    long idx = 0;
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k, ++idx) {
            const Json& cell = j.at(idx);
            if (!cell.is_array() || cell.size() != 2)
                throw std::runtime_error("matrix entries must be [re, im] pairs");
            m(i, k) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
        }
    return m;
}

Json family_to_json(const OperatorFamily& fam) {
    const Graph& g = fam.g();
    Json j;
    j["graph"] = graph_to_json(g);
    j["dimension"] = fam.dimension;
    if (fam.interior_is_full()) {
        j["interior"] = "all";
    } else {
        try {
            j["interior"] = fam.interior_indices();
        } catch (const std::exception&) {
            j["interior"] = Json{{"matrix", matrix_to_json(fam.interior)}};
        }
    }
    j["P"] = Json::object();
    for (int v = 0; v < g.num_vertices(); ++v)
        j["P"][g.vertex_id(v)] = matrix_to_json(fam.P[v]);
    j["S"] = Json::object();
    for (int e = 0; e < g.num_edges(); ++e)
        j["S"][g.edge(e).id] = matrix_to_json(fam.S[e]);
    j["tolerance"] = fam.tolerance;
    j["depth"] = fam.depth;
    if (!fam.labels.empty()) j["labels"] = fam.labels;
    return j;
}

OperatorFamily family_from_json(const Json& j, std::shared_ptr<const Graph> graph) {
    if (!j.is_object()) throw std::runtime_error("family document must be an object");
    std::shared_ptr<const Graph> g;
    if (j.contains("graph") && j.at("graph").is_object()) {
        g = graph_from_json(j.at("graph"));
        if (graph && !graph->same_structure(*g))
            throw std::runtime_error("inline graph disagrees with the referenced one");
    } else if (graph) {
        g = std::move(graph);
    } else if (j.contains("graph") && j.at("graph").is_string()) {
        throw std::runtime_error("graph reference '" +
                                 j.at("graph").get<std::string>() +
                                 "' must be resolved by the caller");
    } else {
        throw std::runtime_error("family document lacks a graph");
    }

    OperatorFamily fam;
    fam.graph = g;
    fam.dimension = j.at("dimension").get<int>();
    if (fam.dimension < 0) throw std::runtime_error("negative dimension");
    int d = fam.dimension;

    const Json& ji = j.at("interior");
    if (ji.is_string() && ji.get<std::string>() == "all") {
        fam.interior = Matrix::Identity(d, d);
    } else if (ji.is_array()) {
        fam.interior = Matrix::Zero(d, d);
        for (const auto& idx : ji) {
            int i = idx.get<int>();
            if (i < 0 || i >= d) throw std::runtime_error("interior index out of range");
            fam.interior(i, i) = 1.0;
        }
    } else if (ji.is_object() && ji.contains("matrix")) {
        fam.interior = matrix_from_json(ji.at("matrix"), d, d);
    } else {
        throw std::runtime_error("interior must be \"all\", an index list, "
                                 "or {\"matrix\": ...}");
    }

    const Json& jp = j.at("P");
    for (int v = 0; v < g->num_vertices(); ++v) {
        const std::string& id = g->vertex_id(v);
        if (!jp.contains(id)) throw std::runtime_error("missing P entry for vertex " + id);
        fam.P.push_back(matrix_from_json(jp.at(id), d, d));
    }
    const Json& js = j.at("S");
    for (int e = 0; e < g->num_edges(); ++e) {
        const std::string& id = g->edge(e).id;
        if (!js.contains(id)) throw std::runtime_error("missing S entry for edge " + id);
        fam.S.push_back(matrix_from_json(js.at(id), d, d));
    }
    if (j.contains("tolerance")) fam.tolerance = j.at("tolerance").get<double>();
    if (j.contains("depth")) fam.depth = j.at("depth").get<int>();
    if (j.contains("labels"))
        fam.labels = j.at("labels").get<std::vector<std::string>>();
    fam.require_shapes();
    return fam;
}

Json report_to_json(const RelationReport& rep, const Graph& g) {
    Json j;
    j["classification"] = to_string(rep.classification);
    j["tolerance"] = rep.tolerance;
    j["projection_residual"] = rep.projection_residual;
    j["colors"] = Json::array();
    for (const ColorCheck& cc : rep.colors) {
        Json jc;
        jc["color"] = g.color_id(cc.color);
        jc["isometry_residuals"] = Json::object();
        for (const auto& [e, r] : cc.isometry_residual)
            jc["isometry_residuals"][g.edge(e).id] = r;
        jc["vertices"] = Json::object();
        for (const auto& [v, vc] : cc.vertices) {
            Json jv;
            jv["tck_slack"] = vc.tck_slack;
            jv["defect_norm"] = vc.defect_norm;
            jv["defect_rank"] = vc.defect_rank;
            jv["spectrum"] = vc.spectrum;
            jc["vertices"][g.vertex_id(v)] = jv;
        }
        j["colors"].push_back(jc);
    }
    j["singular"] = Json::array();
    for (const auto& [c, v] : rep.singular)
        j["singular"].push_back(Json::array({g.color_id(c), g.vertex_id(v)}));
    return j;
}

Json wold_to_json(const WoldDecomposition& w) {
    const Graph& g = *w.graph;
    Json j;
    j["depth"] = w.depth;
    j["multiplicities"] = Json::object();
    for (const auto& [v, a] : w.multiplicities) j["multiplicities"][g.vertex_id(v)] = a;
    j["wandering"] = Json::object();
    for (const auto& [key, vec] : w.wandering) {
        std::string name = g.vertex_id(key.first) + ":" + std::to_string(key.second);
        j["wandering"][name] = matrix_to_json(vec);
    }
    j["subspaces"] = Json::object();
    for (const auto& [key, sub] : w.subspaces) {
        std::string name = g.vertex_id(key.first) + ":" + std::to_string(key.second);
        Json js;
        js["columns"] = static_cast<int>(sub.cols());
        js["matrix"] = matrix_to_json(sub);
        Json paths = Json::array();
        for (const Path& p : w.orbit_paths.at(key)) {
            Json jp;
            jp["source"] = g.vertex_id(p.source());
            jp["edges"] = path_edge_ids(g, p);
            paths.push_back(jp);
        }
        js["paths"] = paths;
        j["subspaces"][name] = js;
    }
    j["complement_columns"] = static_cast<int>(w.complement.cols());
    j["complement"] = matrix_to_json(w.complement);
    j["diagnostics"] = {
        {"orthogonality_defect", w.diagnostics.orthogonality_defect},
        {"boundary_leakage", w.diagnostics.boundary_leakage},
        {"intertwining_defect", w.diagnostics.intertwining_defect},
    };
    return j;
}

Json certificate_to_json(const DilationCertificate& c, const Graph& g) {
    Json j;
    j["max_degree"] = c.max_degree;
    j["monomials_checked"] = c.monomials_checked;
    j["max_compression_error"] = c.max_compression_error;
    j["interior_defects"] = Json::array();
    for (const auto& [key, norm] : c.interior_defects)
        j["interior_defects"].push_back(Json{{"color", g.color_id(key.first)},
                                             {"vertex", g.vertex_id(key.second)},
                                             {"norm", norm}});
    if (!c.corner_norms.empty()) {
        j["corner_norms"] = Json::object();
        for (const auto& [e, norm] : c.corner_norms)
            j["corner_norms"][g.edge(e).id] = norm;
    }
    j["partial"] = c.partial;
    j["tolerance"] = c.tolerance;
    j["depth"] = c.depth;
    j["embedding_rows"] = static_cast<int>(c.embedding.rows());
    j["embedding_cols"] = static_cast<int>(c.embedding.cols());
    j["embedding"] = matrix_to_json(c.embedding);
    return j;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw std::runtime_error("parse error in " + path + ": " + e.what());
    }
    return j;
}

void save_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace ck
