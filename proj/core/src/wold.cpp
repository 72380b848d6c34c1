#include "ck/wold.hpp"

#include <stdexcept>

namespace ck {

int WoldDecomposition::total_multiplicity() const {
    int t = 0;
    for (const auto& [v, a] : multiplicities) t += a;
    return t;
}

WoldDecomposition wold_decompose(const OperatorFamily& fam) {
    const Graph& g = fam.g();
    if (g.num_colors() != 1)
        throw std::invalid_argument("wold_decompose expects a single-color family; "
                                    "use color_view first");
    RelationReport rep = check_tck(fam);
    if (!rep.is_at_least_tck())
        throw std::runtime_error("wold_decompose requires a TCK family");

    WoldDecomposition w;
    w.graph = fam.graph;
    w.depth = fam.depth;

    std::vector<Vector> all_columns;
    for (int v : g.receivers()) {
        Matrix defect = vertex_defect(fam, 0, v);
        Eigen::SelfAdjointEigenSolver<Matrix> es(defect);
        const Eigen::VectorXd& eigs = es.eigenvalues();
        int alpha = 0;
        for (int i = 0; i < eigs.size(); ++i) {
            double x = eigs(i);
            if (x > 1e-6 && x < 1.0 - 1e-6)
                throw std::runtime_error(
                    "wandering defect rank at vertex " + g.vertex_id(v) +
                    " is ambiguous (eigenvalue " + std::to_string(x) + ")");
            if (x >= 0.5) ++alpha;
        }
        w.multiplicities[v] = alpha;
        // descending eigenvalue order for deterministic numbering
        for (int i = 0; i < alpha; ++i) {
            Vector zeta = es.eigenvectors().col(eigs.size() - 1 - i);
            w.wandering[{v, i}] = zeta;

            // grow the orbit {T_lambda zeta} level by level; the truncation
            // boundary kills vectors, which ends the walk
            std::vector<std::pair<Path, Vector>> frontier{{Path::at_vertex(g, v), zeta}};
            std::vector<Path> paths;
            std::vector<Vector> cols;
            while (!frontier.empty() &&
                   static_cast<int>(all_columns.size() + cols.size()) <= fam.dimension) {
                std::vector<std::pair<Path, Vector>> next;
                for (auto& [p, x] : frontier) {
                    double n = x.norm();
                    if (n < 0.5) {
                        w.diagnostics.boundary_leakage =
                            std::max(w.diagnostics.boundary_leakage, n);
                        continue;
                    }
                    w.diagnostics.orthogonality_defect =
                        std::max(w.diagnostics.orthogonality_defect, std::abs(n - 1.0));
                    paths.push_back(p);
                    cols.push_back(x / n);
                    for (int e : g.out_edges(p.range()))
                        next.emplace_back(p.prepended(g, e), fam.S[e] * x);
                }
                frontier = std::move(next);
            }
            Matrix sub(fam.dimension, static_cast<int>(cols.size()));
            for (int c = 0; c < sub.cols(); ++c) sub.col(c) = cols[c];
            w.subspaces[{v, i}] = sub;
            w.orbit_paths[{v, i}] = std::move(paths);
            for (auto& c : cols) all_columns.push_back(std::move(c));
        }
    }

    // cross-orbit orthogonality diagnostic
    if (!all_columns.empty()) {
        Matrix all(fam.dimension, static_cast<int>(all_columns.size()));
        for (int c = 0; c < all.cols(); ++c) all.col(c) = all_columns[c];
        Matrix gram = all.adjoint() * all;
        for (int i = 0; i < gram.rows(); ++i)
            for (int j = 0; j < gram.cols(); ++j)
                if (i != j)
                    w.diagnostics.orthogonality_defect = std::max(
                        w.diagnostics.orthogonality_defect, std::abs(gram(i, j)));
        w.complement = orthogonal_complement(all, fam.dimension);
    } else {
        w.complement = Matrix::Identity(fam.dimension, fam.dimension);
    }

    double relax = std::max(fam.tolerance,
                            1e3 * (w.diagnostics.orthogonality_defect +
                                   w.diagnostics.boundary_leakage + 1e-12));
    w.complement_family = restrict_family(fam, w.complement, relax);
    return w;
}

Reconstruction reconstruct(const WoldDecomposition& w, std::shared_ptr<const Graph> g,
                           int depth) {
    if (!g->same_structure(*w.graph))
        throw std::invalid_argument("reconstruct: graph mismatch");
    if (w.depth >= 0 && depth != w.depth)
        throw std::invalid_argument("reconstruct: inconsistent depth");

    std::vector<OperatorFamily> blocks;
    struct BlockRef { int v; int i; int offset; const PathBasis* basis; };
    std::vector<BlockRef> refs;
    std::vector<PathBasis> bases;
    int offset = 0;
    for (const auto& [v, alpha] : w.multiplicities) {
        for (int i = 0; i < alpha; ++i) {
            auto it = w.wandering.find({v, i});
            if (it == w.wandering.end())
                throw std::invalid_argument(
                    "reconstruct: multiplicities inconsistent with wandering data");
            blocks.push_back(build_pi_v(g, v, depth));
            bases.emplace_back(*g, depth, v);
            refs.push_back({v, i, offset, nullptr});
            offset += blocks.back().dimension;
        }
    }
    for (std::size_t k = 0; k < refs.size(); ++k) refs[k].basis = &bases[k];

    int orig_dim = 0;
    if (!w.subspaces.empty())
        orig_dim = static_cast<int>(w.subspaces.begin()->second.rows());
    else
        orig_dim = static_cast<int>(w.complement.rows());

    int comp_offset = offset;
    blocks.push_back(w.complement_family);
    OperatorFamily recon = direct_sum(blocks);

    Matrix wmat = Matrix::Zero(recon.dimension, orig_dim);
    for (const auto& r : refs) {
        const Matrix& sub = w.subspaces.at({r.v, r.i});
        const auto& paths = w.orbit_paths.at({r.v, r.i});
        for (int c = 0; c < sub.cols(); ++c) {
            auto idx = r.basis->index_of(paths[c]);
            if (!idx)
                throw std::invalid_argument("reconstruct: orbit path outside depth");
            wmat.row(r.offset + *idx) = sub.col(c).adjoint();
        }
    }
    for (int c = 0; c < w.complement.cols(); ++c)
        wmat.row(comp_offset + c) = w.complement.col(c).adjoint();

    return Reconstruction{std::move(recon), std::move(wmat), 0.0};
}

double intertwining_defect(const Reconstruction& r, const OperatorFamily& original) {
    double defect = 0.0;
    const Graph& g = original.g();
    for (int v = 0; v < g.num_vertices(); ++v)
        defect = std::max(defect, op_norm(r.intertwiner * original.P[v] -
                                          r.family.P[v] * r.intertwiner));
    for (int e = 0; e < g.num_edges(); ++e)
        defect = std::max(defect, op_norm(r.intertwiner * original.S[e] -
                                          r.family.S[e] * r.intertwiner));
    return defect;
}

std::pair<Matrix, OperatorFamily> full_ck_part(const OperatorFamily& fam) {
    WoldDecomposition w = wold_decompose(fam);
    return {w.complement, w.complement_family};
}

namespace {

Matrix column_space(const Matrix& a, int n) {
    if (a.cols() == 0) return Matrix(n, 0);
    Eigen::ColPivHouseholderQR<Matrix> qr(a);
    qr.setThreshold(1e-9);
    int r = static_cast<int>(qr.rank());
    return Matrix(qr.householderQ() * Matrix::Identity(n, r));
}

// Largest subspace of range(k) that reduces every generator: the complement
// of the smallest *-invariant subspace containing range(k)^perp.
Matrix largest_reducing_inside(const OperatorFamily& fam, const Matrix& k) {
    int n = fam.dimension;
    Matrix m = orthogonal_complement(k, n);
    while (m.cols() > 0 && m.cols() < n) {
        int blocks = 1 + 2 * static_cast<int>(fam.S.size()) +
                     static_cast<int>(fam.P.size());
        Matrix stacked(n, m.cols() * blocks);
        int c = 0;
        stacked.middleCols(c, m.cols()) = m;
        c += static_cast<int>(m.cols());
        for (const Matrix& s : fam.S) {
            stacked.middleCols(c, m.cols()) = s * m;
            c += static_cast<int>(m.cols());
            stacked.middleCols(c, m.cols()) = s.adjoint() * m;
            c += static_cast<int>(m.cols());
        }
        for (const Matrix& p : fam.P) {
            stacked.middleCols(c, m.cols()) = p * m;
            c += static_cast<int>(m.cols());
        }
        Matrix grown = column_space(stacked, n);
        if (grown.cols() == m.cols()) break;
        m = grown;
    }
    return orthogonal_complement(m, n);
}

}  // namespace

Matrix max_full_ck_subspace(const OperatorFamily& fam) {
    const Graph& g = fam.g();
    std::vector<OperatorFamily> views;
    for (int c = 0; c < g.num_colors(); ++c) views.push_back(color_view(fam, c));

    Matrix k = Matrix::Identity(fam.dimension, fam.dimension);
    for (;;) {
        Matrix next = k;
        bool first = true;
        for (const auto& view : views) {
            OperatorFamily restricted = restrict_family(view, k, 1e-6);
            auto [sub, part] = full_ck_part(restricted);
            Matrix lifted = k * sub;  // back to ambient coordinates
            next = first ? lifted
                         : subspace_intersection(next, lifted, fam.dimension);
            first = false;
        }
        // the intersection of per-color parts need not reduce the family;
        // shrink to the largest reducing subspace inside it before iterating
        next = largest_reducing_inside(fam, next);
        if (next.cols() == k.cols()) return next;
        if (next.cols() == 0) return Matrix(fam.dimension, 0);
        k = next;
    }
}

}  // namespace ck
