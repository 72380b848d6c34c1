#include "ck/verify.hpp"

#include <stdexcept>

namespace ck {

std::string to_string(Classification c) {
    switch (c) {
        case Classification::INVALID: return "INVALID";
        case Classification::TCK: return "TCK";
        case Classification::CK: return "CK";
        case Classification::FULL_CK: return "FULL_CK";
    }
    return "?";
}

Matrix vertex_defect(const OperatorFamily& fam, int color, int v) {
    const Graph& g = fam.g();
    Matrix sum = Matrix::Zero(fam.dimension, fam.dimension);
    for (int e : g.in_edges(v))
        if (g.edge(e).color == color) sum += fam.S[e] * fam.S[e].adjoint();
    return fam.compress(fam.P[v] - sum);
}

namespace {

double projection_family_residual(const OperatorFamily& fam) {
    const Graph& g = fam.g();
    double worst = 0.0;
    Matrix sum = Matrix::Zero(fam.dimension, fam.dimension);
    for (int v = 0; v < g.num_vertices(); ++v) {
        const Matrix& p = fam.P[v];
        worst = std::max(worst, fam.interior_residual(p * p, p));
        worst = std::max(worst, fam.interior_residual(p.adjoint(), p));
        for (int w = v + 1; w < g.num_vertices(); ++w)
            worst = std::max(worst, op_norm(fam.compress(p * fam.P[w])));
        sum += p;
    }
    // sum of projections must stay below the identity
    Eigen::SelfAdjointEigenSolver<Matrix> es(
        fam.compress(sum - Matrix::Identity(fam.dimension, fam.dimension)));
    double overshoot = es.eigenvalues().size() ? es.eigenvalues().maxCoeff() : 0.0;
    return std::max(worst, std::max(0.0, overshoot));
}

RelationReport run_checks(const OperatorFamily& fam, bool with_defects) {
    fam.require_shapes();
    const Graph& g = fam.g();
    RelationReport rep;
    rep.tolerance = fam.tolerance;
    rep.projection_residual = projection_family_residual(fam);

    bool tck_ok = rep.projection_residual <= fam.tolerance;
    bool full_ok = true;
    for (int c = 0; c < g.num_colors(); ++c) {
        ColorCheck cc;
        cc.color = c;
        for (int e : g.color_edges(c)) {
            double r = fam.interior_residual(fam.S[e].adjoint() * fam.S[e],
                                             fam.P[g.edge(e).src]);
            cc.isometry_residual[e] = r;
            if (r > fam.tolerance) tck_ok = false;
        }
        for (int v : g.receivers(c)) {
            VertexCheck vc;
            Matrix d = vertex_defect(fam, c, v);
            Eigen::SelfAdjointEigenSolver<Matrix> es(d);
            Eigen::VectorXd eigs = es.eigenvalues();
            vc.tck_slack = eigs.size() ? eigs.minCoeff() : 0.0;
            if (vc.tck_slack < -fam.tolerance) tck_ok = false;
            if (with_defects) {
                vc.defect_norm = eigs.size() ? eigs.cwiseAbs().maxCoeff() : 0.0;
                Eigen::VectorXd clipped = eigs.cwiseMax(0.0);
                vc.defect_rank =
                    numerical_rank_psd(clipped, fam.dimension, fam.tolerance);
                for (int i = eigs.size() - 1; i >= 0; --i)
                    vc.spectrum.push_back(eigs(i));
                if (vc.defect_norm > fam.tolerance) full_ok = false;
                if (vc.defect_rank > 0) rep.singular.insert({c, v});
            }
            cc.vertices[v] = std::move(vc);
        }
        rep.colors.push_back(std::move(cc));
    }

    if (!tck_ok)
        rep.classification = Classification::INVALID;
    else if (with_defects && full_ok)
        rep.classification = Classification::FULL_CK;
    else
        rep.classification = Classification::TCK;
    return rep;
}

}  // namespace

RelationReport check_tck(const OperatorFamily& fam) { return run_checks(fam, false); }

RelationReport check_full_ck(const OperatorFamily& fam) { return run_checks(fam, true); }

std::set<std::pair<int, int>> singular_vertex_set(const OperatorFamily& fam) {
    return check_full_ck(fam).singular;
}

std::vector<std::pair<int, int>> singular_vertices(const OperatorFamily& fam) {
    if (fam.g().num_colors() != 1)
        throw std::invalid_argument("singular_vertices expects a single-color family");
    RelationReport rep = check_full_ck(fam);
    std::vector<std::pair<int, int>> out;
    for (const auto& [v, vc] : rep.colors.front().vertices)
        if (vc.defect_rank > 0) out.emplace_back(v, vc.defect_rank);
    return out;
}

int commutant_dimension(const OperatorFamily& fam, int dimension_guard) {
    int d = fam.dimension;
    if (d > dimension_guard)
        throw std::invalid_argument("commutant probe dimension guard exceeded");
    const Graph& g = fam.g();
    std::vector<Matrix> ops;
    for (const Matrix& p : fam.P) ops.push_back(p);
    for (const Matrix& s : fam.S) {
        ops.push_back(s);
        ops.push_back(s.adjoint());
    }
    // vec(XA - AX) = (A^T (x) I - I (x) A) vec(X), column-major vec
    int n2 = d * d;
    Matrix big = Matrix::Zero(static_cast<long>(ops.size()) * n2, n2);
    for (std::size_t k = 0; k < ops.size(); ++k) {
        const Matrix& a = ops[k];
        Matrix at = a.transpose();
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int l = 0; l < d; ++l) {
                    // block row (i,j) of the commutator map
                    long row = static_cast<long>(k) * n2 + j * d + i;
                    big(row, l * d + i) += at(j, l);   // X A term
                    big(row, j * d + l) -= a(i, l);    // A X term
                }
    }
    Eigen::JacobiSVD<Matrix> svd(big);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    double thr = rank_threshold(n2, smax);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > thr) ++rank;
    return n2 - rank;
}

}  // namespace ck
