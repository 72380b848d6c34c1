#pragma once

#include <map>
#include <utility>

#include "ck/family.hpp"
#include "ck/verify.hpp"
#include "ck/wold.hpp"

// Explicit dilations of TCK families to families that are full CK on their
// interior, together with checkable certificates: the original family must be
// recovered by compressing the dilation to the embedded copy.

namespace ck {

struct DilationCertificate {
    Matrix embedding;                    // isometry, dilated dim x original dim
    int max_degree = 0;                  // monomial degree that was checked
    int monomials_checked = 0;
    double max_compression_error = 0.0;  // over all checked forward monomials
    std::map<std::pair<int, int>, double> interior_defects;  // (color, vertex)
    std::map<int, double> corner_norms;  // one-step dilation: per edge into v
    bool partial = false;                // budget ran out before the last round
    double tolerance = 0.0;
    int depth = -1;
};

struct Dilation {
    OperatorFamily family;
    DilationCertificate certificate;
};

/// One-step dilation at a singular vertex v: adjoin m copies of the original
/// family and one depth-truncated Fock block; every edge into v gains a
/// corner mapping the Fock block into the inflated defect space at v. The
/// corner norms witness nontriviality (they reach one). Single color only.
/// Throws when v carries no defect, or when m copies of the defect cannot
/// absorb the Fock source directions of the edges into v.
Dilation one_step_dilation(const OperatorFamily& fam, int v, int m, int depth);

/// Full CK dilation of a single-color TCK family: Wold-decompose, keep the
/// CK part as is, and extend each wandering summand to a backward-path
/// family over its anchor with up to `depth` levels behind the vertex.
/// Compression to the embedded copy is exact on forward monomials.
/// Default certificate degree: depth / 2.
Dilation full_ck_dilation(const OperatorFamily& fam, int depth,
                          int max_degree = -1);

/// Colored full CK dilation sharing one projection family: `depth` rounds of
/// per-color defect absorption (one fresh slot behind each defect vector)
/// followed by isometric forward growth of the new slots. Everything created
/// before the final round is interior, so the per-color interior defects
/// vanish. Sets `partial` when the dimension budget stops a round.
/// `color_order` permutes the per-round color processing order
/// (default: ascending color index).
Dilation colored_full_ck_dilation(const OperatorFamily& fam, int depth,
                                  int max_dimension = 512, int max_degree = -1,
                                  std::vector<int> color_order = {});

/// Max over vertex projections and chained edge monomials of degree up to
/// `max_degree` of || V* f(dilated) V - f(original) ||.
DilationCertificate compression_certificate(const OperatorFamily& original,
                                            const OperatorFamily& dilated,
                                            const Matrix& embedding,
                                            int max_degree);

}  // namespace ck
