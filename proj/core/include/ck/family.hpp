#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ck/graph.hpp"
#include "ck/numeric.hpp"

// Concrete operator families {P_v}, {S_e} on finite-dimensional spaces with
// truncation semantics: relations are asserted after compression by the
// interior projection.

namespace ck {

struct OperatorFamily {
    std::shared_ptr<const Graph> graph;
    int dimension = 0;
    std::vector<Matrix> P;        // per vertex index
    std::vector<Matrix> S;        // per edge index
    Matrix interior;              // orthogonal projection (D x D)
    double tolerance = 1e-9;
    int depth = -1;               // truncation depth when known, -1 if exact/unknown
    std::vector<std::string> labels;  // optional basis labels

    const Graph& g() const { return *graph; }
    /// Compression by the interior projection.
    Matrix compress(const Matrix& m) const { return interior * m * interior; }
    /// Residual of a relation lhs = rhs measured on the interior.
    double interior_residual(const Matrix& lhs, const Matrix& rhs) const {
        return op_norm(compress(lhs - rhs));
    }
    bool interior_is_full() const;
    /// Basis indices of a coordinate interior; throws if not coordinate.
    std::vector<int> interior_indices(double tol = 1e-12) const;

    void require_graph(const Graph& other) const;
    void require_shapes() const;
};

std::shared_ptr<const Graph> make_graph(std::vector<std::string> vertices,
                                        const std::vector<EdgeSpec>& edges);

/// Canonical truncated Fock family on paths of length <= depth. The interior
/// projects onto paths of length <= depth-1.
OperatorFamily build_fock(std::shared_ptr<const Graph> g, int depth);

/// Restriction of the Fock family to paths emanating from v (truncated pi_v).
OperatorFamily build_pi_v(std::shared_ptr<const Graph> g, int v, int depth);

/// Truncated backward-path family on the reduced symbol basis; full CK on
/// its interior by construction.
OperatorFamily build_rho_infty(std::shared_ptr<const Graph> g,
                               const TailSelection& tails, int depth);

/// Single-anchor slice of the backward-path family: only symbols whose tail
/// belongs to v. Reducing coordinate summand of build_rho_infty.
OperatorFamily build_rho_v(std::shared_ptr<const Graph> g,
                           const TailSelection& tails, int v, int depth);

/// Backward-path family on an explicitly constructed symbol basis.
OperatorFamily build_backward_family(std::shared_ptr<const Graph> g,
                                     const TailSelection& tails,
                                     const BackwardBasis& basis);

/// Exact full CK family for a disjoint union of cycles (interior = identity).
OperatorFamily build_cycle_exact(std::shared_ptr<const Graph> g);

/// Diagonal gauge unitary z^{|lambda| - |mu|} on a backward basis.
Matrix gauge_unitary(const BackwardBasis& basis, Complex z);

OperatorFamily direct_sum(const std::vector<OperatorFamily>& fams);

/// Compression to a reducing subspace given by orthonormal columns; throws
/// (naming the offending operator) when the subspace fails to reduce.
OperatorFamily restrict_family(const OperatorFamily& fam, const Matrix& subspace,
                               double reducing_tol = -1.0);

/// Single-color view of a colored family: the subgraph of one color class
/// with the corresponding shift operators.
OperatorFamily color_view(const OperatorFamily& fam, int color);

/// The backward basis a build_rho_infty family was built on, reconstructed
/// deterministically from the same inputs.
BackwardBasis rho_infty_basis(const Graph& g, const TailSelection& tails, int depth);

std::string path_label(const Graph& g, const Path& p);
std::string symbol_label(const Graph& g, const TailSelection& tails,
                         const BackwardSymbol& s);

}  // namespace ck
