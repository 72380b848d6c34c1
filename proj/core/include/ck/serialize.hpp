#pragma once

#include <string>

#include "json.hpp"

#include "ck/dilate.hpp"
#include "ck/family.hpp"
#include "ck/verify.hpp"
#include "ck/wold.hpp"

// Structured text (JSON) formats for graphs, families, reports and the
// outputs of the decomposition/dilation algorithms. Key ordering is stable
// and numeric round-trips are bit-exact.

namespace ck {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

Json graph_to_json(const Graph& g);
std::shared_ptr<const Graph> graph_from_json(const Json& j);

/// Row-major list of [re, im] pairs.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, int rows, int cols);

Json family_to_json(const OperatorFamily& fam);
/// `graph` resolves a file-reference graph entry (the caller loads it);
/// an inline graph in the document wins if both are present and must match.
OperatorFamily family_from_json(const Json& j,
                                std::shared_ptr<const Graph> graph = nullptr);

Json report_to_json(const RelationReport& rep, const Graph& g);
Json wold_to_json(const WoldDecomposition& w);
Json certificate_to_json(const DilationCertificate& c, const Graph& g);

Json load_json(const std::string& path);
void save_json(const std::string& path, const Json& j);

}  // namespace ck
