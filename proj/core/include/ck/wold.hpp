#pragma once

#include <map>
#include <vector>

#include "ck/family.hpp"
#include "ck/verify.hpp"

// Wold decomposition of a TCK family into multiples of the truncated pi_v
// representations plus an interior-certified full CK part.

namespace ck {

struct WoldDiagnostics {
    double orthogonality_defect = 0.0;   // among generated wandering orbits
    double boundary_leakage = 0.0;       // largest norm of a dropped orbit vector
    double intertwining_defect = 0.0;    // filled in by reconstruct
};

struct WoldDecomposition {
    std::shared_ptr<const Graph> graph;
    int depth = -1;
    std::map<int, int> multiplicities;                    // v in V_r -> alpha_v
    std::map<std::pair<int, int>, Vector> wandering;      // (v, i) -> zeta
    std::map<std::pair<int, int>, Matrix> subspaces;      // (v, i) -> orthonormal columns
                                                          // (one per pi_v basis path)
    std::map<std::pair<int, int>, std::vector<Path>> orbit_paths;  // path per column
    Matrix complement;                                    // orthonormal columns of K
    OperatorFamily complement_family;
    WoldDiagnostics diagnostics;

    int total_multiplicity() const;
};

/// Constructive Wold decomposition. Throws when the family is not TCK or a
/// defect eigenvalue sits ambiguously between zero and one.
WoldDecomposition wold_decompose(const OperatorFamily& fam);

struct Reconstruction {
    OperatorFamily family;
    Matrix intertwiner;     // isometry from the original space to the rebuilt one
    double defect = 0.0;    // max generator intertwining defect
};

/// Rebuilds oplus_v pi_v^(alpha_v) oplus complement with the explicit
/// intertwiner from the decomposition; throws on inconsistent multiplicities.
Reconstruction reconstruct(const WoldDecomposition& w, std::shared_ptr<const Graph> g,
                           int depth);

/// Max over generators of ||W a - rho(a) W|| for the rebuilt family.
double intertwining_defect(const Reconstruction& r, const OperatorFamily& original);

/// The complement subspace and its restricted family (interior-certified
/// full CK part).
std::pair<Matrix, OperatorFamily> full_ck_part(const OperatorFamily& fam);

/// Largest common reducing subspace on which every color restricts to a
/// full CK family; fixed-point intersection over colors in ascending order.
Matrix max_full_ck_subspace(const OperatorFamily& fam);

}  // namespace ck
