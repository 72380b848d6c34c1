#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ck/family.hpp"

// Relation checking, defect analysis, singular-vertex detection and a
// commutant probe for operator families. All residuals are measured after
// compression by the interior projection.

namespace ck {

enum class Classification { INVALID, TCK, CK, FULL_CK };

std::string to_string(Classification c);

struct VertexCheck {
    double tck_slack = 0.0;       // smallest eigenvalue of the compressed defect
    double defect_norm = 0.0;     // ||Pi (P_v - sum S_e S_e*) Pi||
    int defect_rank = 0;          // numerical rank of the compressed defect
    std::vector<double> spectrum; // defect eigenvalues, descending
};

struct ColorCheck {
    int color = 0;
    std::map<int, double> isometry_residual;  // per edge, relation (I)
    std::map<int, VertexCheck> vertices;      // per v in V_r of this color
};

struct RelationReport {
    Classification classification = Classification::INVALID;
    double tolerance = 0.0;
    double projection_residual = 0.0;  // validity of the projection family
    std::vector<ColorCheck> colors;
    std::set<std::pair<int, int>> singular;  // (color, vertex)

    bool is_at_least_tck() const {
        return classification != Classification::INVALID;
    }
};

/// Verifies (I) and (TCK) per color; classification TCK or INVALID.
RelationReport check_tck(const OperatorFamily& fam);

/// Extends check_tck with per-vertex defect norms and ranks; classification
/// FULL_CK (equivalently CK on finite graphs) when every defect vanishes.
RelationReport check_full_ck(const OperatorFamily& fam);

/// Received vertices with positive numerical defect rank, per color.
std::set<std::pair<int, int>> singular_vertex_set(const OperatorFamily& fam);
/// Single-color convenience: (vertex, defect rank) pairs.
std::vector<std::pair<int, int>> singular_vertices(const OperatorFamily& fam);

/// Dimension of {X : XA = AX for all A in the family and its adjoints},
/// solved as a linear system on D^2 unknowns. Probe only; ignores the
/// interior projection.
int commutant_dimension(const OperatorFamily& fam, int dimension_guard = 512);

/// Compressed defect Pi (P_v - sum_{r(e)=v, color} S_e S_e*) Pi.
Matrix vertex_defect(const OperatorFamily& fam, int color, int v);

}  // namespace ck
