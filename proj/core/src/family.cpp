#include "ck/family.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ck {

bool OperatorFamily::interior_is_full() const {
    return (interior - Matrix::Identity(dimension, dimension)).cwiseAbs().maxCoeff() == 0.0;
}

std::vector<int> OperatorFamily::interior_indices(double tol) const {
    std::vector<int> idx;
    for (int i = 0; i < dimension; ++i) {
        double d = std::abs(interior(i, i));
        if (d > 1.0 - tol)
            idx.push_back(i);
        else if (d > tol)
            throw std::runtime_error("interior projection is not coordinate-diagonal");
    }
    for (int i = 0; i < dimension; ++i)
        for (int j = 0; j < dimension; ++j)
            if (i != j && std::abs(interior(i, j)) > tol)
                throw std::runtime_error("interior projection is not coordinate-diagonal");
    return idx;
}

void OperatorFamily::require_graph(const Graph& other) const {
    if (graph.get() == &other) return;
    if (!graph->same_structure(other))
        throw std::invalid_argument("operator family built over a different graph");
}

void OperatorFamily::require_shapes() const {
    if (static_cast<int>(P.size()) != graph->num_vertices() ||
        static_cast<int>(S.size()) != graph->num_edges())
        throw std::invalid_argument("family operator count does not match graph");
    for (const Matrix& m : P)
        if (m.rows() != dimension || m.cols() != dimension)
            throw std::invalid_argument("projection dimension mismatch");
    for (const Matrix& m : S)
        if (m.rows() != dimension || m.cols() != dimension)
            throw std::invalid_argument("shift dimension mismatch");
    if (interior.rows() != dimension || interior.cols() != dimension)
        throw std::invalid_argument("interior projection dimension mismatch");
}

std::shared_ptr<const Graph> make_graph(std::vector<std::string> vertices,
                                        const std::vector<EdgeSpec>& edges) {
    return std::make_shared<const Graph>(std::move(vertices), edges);
}

std::string path_label(const Graph& g, const Path& p) {
    if (p.length() == 0) return g.vertex_id(p.source());
    std::ostringstream os;
    const auto& es = p.edges();
    for (auto it = es.rbegin(); it != es.rend(); ++it) {
        if (it != es.rbegin()) os << ".";
        os << g.edge(*it).id;
    }
    return os.str();
}

std::string symbol_label(const Graph& g, const TailSelection& tails,
                         const BackwardSymbol& s) {
    std::ostringstream os;
    os << path_label(g, s.lambda) << "|" << g.vertex_id(s.anchor) << ":" << s.level;
    (void)tails;
    return os.str();
}

namespace {

OperatorFamily fock_on_basis(std::shared_ptr<const Graph> g, const PathBasis& basis,
                             int depth) {
    const Graph& gr = *g;
    OperatorFamily fam;
    fam.graph = g;
    fam.dimension = basis.size();
    fam.depth = depth;
    int d = fam.dimension;
    fam.P.assign(gr.num_vertices(), Matrix::Zero(d, d));
    fam.S.assign(gr.num_edges(), Matrix::Zero(d, d));
    fam.interior = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const Path& p = basis.path(i);
        fam.P[p.range()](i, i) = 1.0;
        if (p.length() <= depth - 1) fam.interior(i, i) = 1.0;
        fam.labels.push_back(path_label(gr, p));
        if (p.length() < depth) {
            for (int e : gr.out_edges(p.range())) {
                auto j = basis.index_of(p.prepended(gr, e));
                fam.S[e](*j, i) = 1.0;
            }
        }
    }
    return fam;
}

}  // namespace

OperatorFamily build_fock(std::shared_ptr<const Graph> g, int depth) {
    if (depth < 1) throw std::invalid_argument("fock depth must be >= 1");
    PathBasis basis(*g, depth);
    return fock_on_basis(std::move(g), basis, depth);
}

OperatorFamily build_pi_v(std::shared_ptr<const Graph> g, int v, int depth) {
    if (depth < 1) throw std::invalid_argument("pi_v depth must be >= 1");
    if (v < 0 || v >= g->num_vertices()) throw std::invalid_argument("unknown vertex");
    PathBasis basis(*g, depth, v);
    return fock_on_basis(std::move(g), basis, depth);
}

BackwardBasis rho_infty_basis(const Graph& g, const TailSelection& tails, int depth) {
    return BackwardBasis(g, tails, depth);
}

OperatorFamily build_backward_family(std::shared_ptr<const Graph> g,
                                     const TailSelection& tails,
                                     const BackwardBasis& basis) {
    const Graph& gr = *g;
    int depth = basis.depth();
    OperatorFamily fam;
    fam.graph = g;
    fam.dimension = basis.size();
    fam.depth = depth;
    int d = fam.dimension;
    fam.P.assign(gr.num_vertices(), Matrix::Zero(d, d));
    fam.S.assign(gr.num_edges(), Matrix::Zero(d, d));
    fam.interior = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const BackwardSymbol& s = basis.symbol(i);
        fam.P[s.range(gr)](i, i) = 1.0;
        // the frontier vacuum at the top truncation level is only interior
        // when the tail actually ends there (base vertex receives nothing)
        bool frontier_vacuum = s.lambda.length() == 0 &&
                               s.level == basis.anchor_cap(s.anchor) &&
                               !gr.in_edges(s.range(gr)).empty();
        if (s.lambda.length() <= depth - 1 && !frontier_vacuum)
            fam.interior(i, i) = 1.0;
        fam.labels.push_back(symbol_label(gr, tails, s));
        for (int e : gr.out_edges(s.range(gr))) {
            BackwardSymbol t =
                basis.reduce(s.anchor, s.level, s.lambda.prepended(gr, e));
            if (t.lambda.length() > depth) continue;  // truncated at the cut
            auto j = basis.index_of(t);
            if (!j) throw std::logic_error("backward shift left the basis");
            fam.S[e](*j, i) = 1.0;
        }
    }
    return fam;
}

OperatorFamily build_rho_infty(std::shared_ptr<const Graph> g,
                               const TailSelection& tails, int depth) {
    if (depth < 1) throw std::invalid_argument("rho_infty depth must be >= 1");
    BackwardBasis basis(*g, tails, depth);
    return build_backward_family(g, tails, basis);
}

OperatorFamily build_rho_v(std::shared_ptr<const Graph> g,
                           const TailSelection& tails, int v, int depth) {
    if (depth < 1) throw std::invalid_argument("rho_v depth must be >= 1");
    if (v < 0 || v >= g->num_vertices()) throw std::invalid_argument("unknown vertex");
    BackwardBasis basis(*g, tails, depth, v);
    return build_backward_family(g, tails, basis);
}

OperatorFamily build_cycle_exact(std::shared_ptr<const Graph> g) {
    const Graph& gr = *g;
    for (int v = 0; v < gr.num_vertices(); ++v) {
        if (gr.in_edges(v).size() != 1 || gr.out_edges(v).size() != 1)
            throw std::invalid_argument(
                "cycle-exact family needs a disjoint union of cycles (vertex " +
                gr.vertex_id(v) + " has in/out degree != 1)");
    }
    int d = gr.num_vertices();
    OperatorFamily fam;
    fam.graph = g;
    fam.dimension = d;
    fam.depth = -1;
    fam.P.assign(d, Matrix::Zero(d, d));
    fam.S.assign(gr.num_edges(), Matrix::Zero(d, d));
    fam.interior = Matrix::Identity(d, d);
    for (int v = 0; v < d; ++v) {
        fam.P[v](v, v) = 1.0;
        fam.labels.push_back(gr.vertex_id(v));
    }
    for (int e = 0; e < gr.num_edges(); ++e)
        fam.S[e](gr.edge(e).dst, gr.edge(e).src) = 1.0;
    return fam;
}

Matrix gauge_unitary(const BackwardBasis& basis, Complex z) {
    if (std::abs(std::abs(z) - 1.0) > 1e-12)
        throw std::invalid_argument("gauge parameter must be unimodular");
    int d = basis.size();
    Matrix u = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        u(i, i) = std::pow(z, basis.symbol(i).gauge_exponent());
    return u;
}

OperatorFamily direct_sum(const std::vector<OperatorFamily>& fams) {
    if (fams.empty()) throw std::invalid_argument("direct sum of no families");
    const OperatorFamily& first = fams.front();
    int d = 0;
    for (const auto& f : fams) {
        f.require_graph(first.g());
        d += f.dimension;
    }
    OperatorFamily out;
    out.graph = first.graph;
    out.dimension = d;
    out.tolerance = first.tolerance;
    out.depth = -1;
    for (const auto& f : fams) {
        out.tolerance = std::max(out.tolerance, f.tolerance);
        out.depth = std::max(out.depth, f.depth);
    }
    out.P.assign(first.g().num_vertices(), Matrix::Zero(d, d));
    out.S.assign(first.g().num_edges(), Matrix::Zero(d, d));
    out.interior = Matrix::Zero(d, d);
    int off = 0;
    for (const auto& f : fams) {
        int n = f.dimension;
        for (int v = 0; v < first.g().num_vertices(); ++v)
            out.P[v].block(off, off, n, n) = f.P[v];
        for (int e = 0; e < first.g().num_edges(); ++e)
            out.S[e].block(off, off, n, n) = f.S[e];
        out.interior.block(off, off, n, n) = f.interior;
        for (int i = 0; i < n; ++i)
            out.labels.push_back(
                (f.labels.empty() ? std::to_string(i) : f.labels[i]) + "@" +
                std::to_string(off));
        off += n;
    }
    return out;
}

OperatorFamily restrict_family(const OperatorFamily& fam, const Matrix& subspace,
                               double reducing_tol) {
    if (reducing_tol < 0) reducing_tol = fam.tolerance;
    if (subspace.rows() != fam.dimension)
        throw std::invalid_argument("subspace row count does not match family dimension");
    if (orthonormality_defect(subspace) > 1e-10)
        throw std::invalid_argument("subspace columns are not orthonormal");
    int k = static_cast<int>(subspace.cols());
    Matrix pout = Matrix::Identity(fam.dimension, fam.dimension) -
                  subspace * subspace.adjoint();

    auto check = [&](const Matrix& a, const std::string& name) {
        double inv = op_norm(pout * (a * subspace));
        double coinv = op_norm(pout * (a.adjoint() * subspace));
        double defect = std::max(inv, coinv);
        if (defect > reducing_tol)
            throw std::runtime_error("subspace is not reducing: operator " + name +
                                     " has defect " + std::to_string(defect));
    };
    for (int v = 0; v < fam.g().num_vertices(); ++v)
        check(fam.P[v], "P(" + fam.g().vertex_id(v) + ")");
    for (int e = 0; e < fam.g().num_edges(); ++e)
        check(fam.S[e], "S(" + fam.g().edge(e).id + ")");

    OperatorFamily out;
    out.graph = fam.graph;
    out.dimension = k;
    out.tolerance = fam.tolerance;
    out.depth = fam.depth;
    for (int v = 0; v < fam.g().num_vertices(); ++v)
        out.P.push_back(subspace.adjoint() * fam.P[v] * subspace);
    for (int e = 0; e < fam.g().num_edges(); ++e)
        out.S.push_back(subspace.adjoint() * fam.S[e] * subspace);
    // compressed interior, rounded back to the nearest projection
    Matrix rounded = Matrix::Zero(k, k);
    if (k > 0) {
        Matrix ci = subspace.adjoint() * fam.interior * subspace;
        Eigen::SelfAdjointEigenSolver<Matrix> es(ci);
        for (int i = 0; i < k; ++i)
            if (es.eigenvalues()(i) > 0.5)
                rounded += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
    out.interior = rounded;
    return out;
}

OperatorFamily color_view(const OperatorFamily& fam, int color) {
    const Graph& g = fam.g();
    if (color < 0 || color >= g.num_colors())
        throw std::invalid_argument("unknown color index");
    std::vector<std::string> verts;
    for (int v = 0; v < g.num_vertices(); ++v) verts.push_back(g.vertex_id(v));
    std::vector<EdgeSpec> edges;
    for (int e : g.color_edges(color)) {
        const Edge& ed = g.edge(e);
        edges.push_back(EdgeSpec{ed.id, g.vertex_id(ed.src), g.vertex_id(ed.dst),
                                 g.color_id(color)});
    }
    auto sub = make_graph(verts, edges);
    OperatorFamily out;
    out.graph = sub;
    out.dimension = fam.dimension;
    out.tolerance = fam.tolerance;
    out.depth = fam.depth;
    out.interior = fam.interior;
    out.labels = fam.labels;
    out.P = fam.P;
    for (int e = 0; e < sub->num_edges(); ++e)
        out.S.push_back(fam.S[*g.edge_index(sub->edge(e).id)]);
    return out;
}

}  // namespace ck
