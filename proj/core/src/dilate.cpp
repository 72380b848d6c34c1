#include "ck/dilate.hpp"

#include <algorithm>
#include <memory>
#include <set>
#include <stdexcept>

namespace ck {

namespace {

constexpr double kAmbLow = 1e-6;

// Eigenvectors of a compressed defect with eigenvalue near one, descending.
// Throws when an eigenvalue sits ambiguously between zero and one.
std::vector<Vector> defect_frame(const Matrix& defect, const std::string& where) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(defect);
    const Eigen::VectorXd& eigs = es.eigenvalues();
    std::vector<Vector> frame;
    for (int i = 0; i < eigs.size(); ++i) {
        double x = eigs(i);
        if (x > kAmbLow && x < 1.0 - kAmbLow)
            throw std::runtime_error("defect at " + where +
                                     " is ambiguous (eigenvalue " +
                                     std::to_string(x) + ")");
    }
    for (int i = static_cast<int>(eigs.size()) - 1; i >= 0; --i) {
        if (eigs(i) < 0.5) break;
        frame.push_back(es.eigenvectors().col(i));
    }
    return frame;
}

void record_interior_defects(DilationCertificate& cert, const OperatorFamily& fam) {
    RelationReport rep = check_full_ck(fam);
    for (const ColorCheck& cc : rep.colors)
        for (const auto& [v, vc] : cc.vertices)
            cert.interior_defects[{cc.color, v}] = vc.defect_norm;
}

int default_degree(int depth, int max_degree) {
    return max_degree >= 0 ? max_degree : std::max(1, depth / 2);
}

}  // namespace

DilationCertificate compression_certificate(const OperatorFamily& original,
                                            const OperatorFamily& dilated,
                                            const Matrix& embedding,
                                            int max_degree) {
    original.require_graph(dilated.g());
    if (embedding.rows() != dilated.dimension ||
        embedding.cols() != original.dimension)
        throw std::invalid_argument("embedding shape does not match the families");
    if (orthonormality_defect(embedding) > 1e-8)
        throw std::invalid_argument("embedding is not an isometry");
    const Graph& g = original.g();

    DilationCertificate cert;
    cert.max_degree = max_degree;
    cert.tolerance = original.tolerance;
    cert.depth = dilated.depth;
    // chained products are carried as f(dilated) * V to keep the work thin
    auto score = [&](const Matrix& ao, const Matrix& adv) {
        cert.max_compression_error = std::max(
            cert.max_compression_error, op_norm(embedding.adjoint() * adv - ao));
        ++cert.monomials_checked;
    };
    for (int v = 0; v < g.num_vertices(); ++v)
        score(original.P[v], dilated.P[v] * embedding);

    struct Item {
        Matrix ao, adv;
        int range;
        int len;
    };
    std::vector<Item> stack;
    for (int e = 0; e < g.num_edges(); ++e)
        if (max_degree >= 1)
            stack.push_back(
                {original.S[e], dilated.S[e] * embedding, g.edge(e).dst, 1});
    while (!stack.empty()) {
        Item it = std::move(stack.back());
        stack.pop_back();
        score(it.ao, it.adv);
        if (it.len >= max_degree) continue;
        for (int e : g.out_edges(it.range))
            stack.push_back({original.S[e] * it.ao, dilated.S[e] * it.adv,
                             g.edge(e).dst, it.len + 1});
    }
    cert.embedding = embedding;
    return cert;
}

Dilation one_step_dilation(const OperatorFamily& fam, int v, int m, int depth) {
    const Graph& g = fam.g();
    if (g.num_colors() != 1)
        throw std::invalid_argument("one-step dilation expects a single-color family; "
                                    "use color_view first");
    if (v < 0 || v >= g.num_vertices()) throw std::invalid_argument("unknown vertex");
    if (m < 1) throw std::invalid_argument("inflation count must be >= 1");
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    fam.require_shapes();

    std::vector<Vector> frame =
        defect_frame(vertex_defect(fam, 0, v), "vertex " + g.vertex_id(v));
    int r = static_cast<int>(frame.size());
    if (r == 0)
        throw std::invalid_argument("vertex " + g.vertex_id(v) +
                                    " is not singular: the defect vanishes and "
                                    "no nontrivial dilation exists");

    OperatorFamily fock = build_fock(fam.graph, depth);
    int d0 = fam.dimension;
    int df = fock.dimension;
    int dim = m * d0 + df;

    // Fock source dimensions the corners have to absorb
    const std::vector<int>& in = g.in_edges(v);
    std::vector<std::vector<int>> sources(in.size());
    int total = 0;
    for (std::size_t k = 0; k < in.size(); ++k) {
        int u = g.edge(in[k]).src;
        for (int i = 0; i < df; ++i)
            if (fock.P[u](i, i).real() > 0.5) sources[k].push_back(i);
        total += static_cast<int>(sources[k].size());
    }
    if (static_cast<long>(m) * r < total)
        throw std::invalid_argument(
            "inflation too small: " + std::to_string(m) + " copies of a rank-" +
            std::to_string(r) + " defect cannot absorb " + std::to_string(total) +
            " source directions at vertex " + g.vertex_id(v));

    OperatorFamily out;
    out.graph = fam.graph;
    out.dimension = dim;
    out.tolerance = fam.tolerance;
    out.depth = -1;
    out.P.assign(g.num_vertices(), Matrix::Zero(dim, dim));
    out.S.assign(g.num_edges(), Matrix::Zero(dim, dim));
    out.interior = Matrix::Zero(dim, dim);
    for (int c = 0; c < m; ++c) {
        int off = c * d0;
        for (int w = 0; w < g.num_vertices(); ++w)
            out.P[w].block(off, off, d0, d0) = fam.P[w];
        for (int e = 0; e < g.num_edges(); ++e)
            out.S[e].block(off, off, d0, d0) = fam.S[e];
        out.interior.block(off, off, d0, d0) = fam.interior;
        for (int i = 0; i < d0; ++i)
            out.labels.push_back((fam.labels.empty() ? std::to_string(i)
                                                     : fam.labels[i]) +
                                 "#" + std::to_string(c));
    }
    int foff = m * d0;
    for (int w = 0; w < g.num_vertices(); ++w)
        out.P[w].block(foff, foff, df, df) = fock.P[w];
    for (int e = 0; e < g.num_edges(); ++e)
        if (g.edge(e).dst != v)
            out.S[e].block(foff, foff, df, df) = fock.S[e];
    out.interior.block(foff, foff, df, df) = fock.interior;
    for (int i = 0; i < df; ++i) out.labels.push_back(fock.labels[i] + "#F");

    // corners: consecutive chunks of the inflated defect frame, one column
    // per Fock source direction, in edge-id order
    std::map<int, double> corners;
    int next = 0;
    for (std::size_t k = 0; k < in.size(); ++k) {
        int e = in[k];
        for (int fidx : sources[k]) {
            int copy = next / r;
            int j = next % r;
            ++next;
            out.S[e].block(copy * d0, foff + fidx, d0, 1) = frame[j];
        }
        corners[e] = op_norm(out.S[e].block(0, foff, m * d0, df));
    }

    Matrix emb = Matrix::Zero(dim, d0);
    emb.block(0, 0, d0, d0) = Matrix::Identity(d0, d0);

    Dilation result;
    result.family = std::move(out);
    result.certificate =
        compression_certificate(fam, result.family, emb, std::max(1, depth - 1));
    result.certificate.corner_norms = std::move(corners);
    result.certificate.depth = depth;
    record_interior_defects(result.certificate, result.family);
    return result;
}

Dilation full_ck_dilation(const OperatorFamily& fam, int depth, int max_degree) {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    max_degree = default_degree(depth, max_degree);
    WoldDecomposition w = wold_decompose(fam);
    const Graph& g = fam.g();
    TailSelection tails = TailSelection::select(g);

    struct Ref {
        int v, i, offset;
        const BackwardBasis* basis;
    };
    std::vector<OperatorFamily> blocks;
    std::vector<std::unique_ptr<BackwardBasis>> bases;
    std::vector<Ref> refs;
    int offset = 0;
    for (const auto& [v, alpha] : w.multiplicities) {
        for (int i = 0; i < alpha; ++i) {
            int maxlen = 0;
            for (const Path& p : w.orbit_paths.at({v, i}))
                maxlen = std::max(maxlen, p.length());
            int cap = tails.is_finite(v)
                          ? std::min(depth, tails.finite_length(v))
                          : depth;
            bases.push_back(
                std::make_unique<BackwardBasis>(g, tails, maxlen, v, cap));
            blocks.push_back(build_backward_family(fam.graph, tails, *bases.back()));
            refs.push_back({v, i, offset, bases.back().get()});
            offset += blocks.back().dimension;
        }
    }
    int comp_offset = offset;
    blocks.push_back(w.complement_family);
    OperatorFamily dil = direct_sum(blocks);

    Matrix emb = Matrix::Zero(dil.dimension, fam.dimension);
    for (const Ref& ref : refs) {
        const Matrix& sub = w.subspaces.at({ref.v, ref.i});
        const auto& paths = w.orbit_paths.at({ref.v, ref.i});
        for (int c = 0; c < sub.cols(); ++c) {
            // orbit vectors land in the level-0 layer of their anchor's basis
            BackwardSymbol s{ref.v, 0, paths[c], 0};
            auto idx = ref.basis->index_of(s);
            if (!idx)
                throw std::logic_error("orbit path missing from the backward basis");
            emb.row(ref.offset + *idx) = sub.col(c).adjoint();
        }
    }
    for (int c = 0; c < w.complement.cols(); ++c)
        emb.row(comp_offset + c) = w.complement.col(c).adjoint();

    Dilation out;
    out.family = std::move(dil);
    out.certificate = compression_certificate(fam, out.family, emb, max_degree);
    out.certificate.depth = depth;
    record_interior_defects(out.certificate, out.family);
    return out;
}

namespace {

void grow(Matrix& m, int n) {
    int old = static_cast<int>(m.rows());
    m.conservativeResize(n, n);
    m.block(0, old, n, n - old).setZero();
    m.block(old, 0, n - old, old).setZero();
}

}  // namespace

Dilation colored_full_ck_dilation(const OperatorFamily& fam, int depth,
                                  int max_dimension, int max_degree,
                                  std::vector<int> color_order) {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    if (color_order.empty()) {
        color_order.resize(fam.g().num_colors());
        for (std::size_t i = 0; i < color_order.size(); ++i)
            color_order[i] = static_cast<int>(i);
    } else {
        std::vector<int> sorted = color_order;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i)
            if (static_cast<int>(sorted.size()) != fam.g().num_colors() ||
                sorted[i] != static_cast<int>(i))
                throw std::invalid_argument(
                    "color order must be a permutation of all colors");
    }
    max_degree = default_degree(depth, max_degree);
    if (fam.dimension > max_dimension)
        throw std::invalid_argument("dimension budget is below the family itself");
    if (!check_tck(fam).is_at_least_tck())
        throw std::runtime_error("colored dilation requires a TCK family");
    const Graph& g = fam.g();
    int d0 = fam.dimension;

    std::vector<Matrix> P = fam.P;
    std::vector<Matrix> S = fam.S;
    int dim = d0;
    struct Slot {
        int vertex;
        int round;
        std::set<int> defined;  // out-edges already acting on this slot
    };
    std::vector<Slot> slots;
    bool partial = false;
    int completed = 0;

    for (int r = 1; r <= depth; ++r) {
        // isometric forward growth owed to the previous round's slots
        struct Fwd {
            int slot;
            int edge;
        };
        std::vector<Fwd> fwds;
        for (std::size_t si = 0; si < slots.size(); ++si)
            if (slots[si].round == r - 1)
                for (int f : g.out_edges(slots[si].vertex))
                    if (!slots[si].defined.count(f))
                        fwds.push_back({static_cast<int>(si), f});

        // everything present so far is an interior candidate
        Matrix pi = Matrix::Zero(dim, dim);
        pi.block(0, 0, d0, d0) = fam.interior;
        for (int i = d0; i < dim; ++i) pi(i, i) = 1.0;

        struct Glue {
            int edge;
            Vector zeta;
        };
        std::vector<Glue> glues;
        for (int c : color_order) {
            for (int v : g.receivers(c)) {
                Matrix def = P[v];
                for (int e : g.in_edges(v))
                    if (g.edge(e).color == c) def -= S[e] * S[e].adjoint();
                def = pi * def * pi;
                std::vector<Vector> frame = defect_frame(
                    def, "color " + g.color_id(c) + ", vertex " + g.vertex_id(v));
                if (frame.empty()) continue;
                int e = -1;  // smallest in-edge of this color absorbs the defect
                for (int cand : g.in_edges(v))
                    if (g.edge(cand).color == c) { e = cand; break; }
                for (Vector& z : frame) glues.push_back({e, std::move(z)});
            }
        }

        int add = static_cast<int>(fwds.size() + glues.size());
        if (dim + add > max_dimension) {
            partial = true;
            break;
        }
        if (add == 0) {
            completed = r;
            continue;
        }
        int nd = dim + add;
        for (Matrix& m : P) grow(m, nd);
        for (Matrix& m : S) grow(m, nd);
        int next = dim;
        for (const Fwd& f : fwds) {
            S[f.edge](next, d0 + f.slot) = 1.0;
            slots[f.slot].defined.insert(f.edge);
            P[g.edge(f.edge).dst](next, next) = 1.0;
            slots.push_back({g.edge(f.edge).dst, r, {}});
            ++next;
        }
        for (const Glue& gl : glues) {
            int u = g.edge(gl.edge).src;
            S[gl.edge].block(0, next, gl.zeta.size(), 1) = gl.zeta;
            P[u](next, next) = 1.0;
            slots.push_back({u, r, {gl.edge}});
            ++next;
        }
        dim = nd;
        completed = r;
    }

    OperatorFamily out;
    out.graph = fam.graph;
    out.dimension = dim;
    out.tolerance = fam.tolerance;
    out.depth = -1;
    out.P = std::move(P);
    out.S = std::move(S);
    out.interior = Matrix::Zero(dim, dim);
    out.interior.block(0, 0, d0, d0) = fam.interior;
    for (int i = 0; i < d0; ++i)
        out.labels.push_back(fam.labels.empty() ? std::to_string(i) : fam.labels[i]);
    for (std::size_t si = 0; si < slots.size(); ++si) {
        if (slots[si].round <= completed - 1)
            out.interior(d0 + si, d0 + si) = 1.0;
        out.labels.push_back("aux" + std::to_string(si) + "@" +
                             g.vertex_id(slots[si].vertex));
    }

    Matrix emb = Matrix::Zero(dim, d0);
    emb.block(0, 0, d0, d0) = Matrix::Identity(d0, d0);

    Dilation result;
    result.family = std::move(out);
    result.certificate = compression_certificate(fam, result.family, emb, max_degree);
    result.certificate.partial = partial;
    result.certificate.depth = depth;
    record_interior_defects(result.certificate, result.family);
    return result;
}

}  // namespace ck
