#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

// Finite colored directed multigraphs, path enumeration, and the
// backward-tail machinery used by the representation builders.

namespace ck {

struct EdgeSpec {
    std::string id;
    std::string src;
    std::string dst;
    std::string color = "0";
};

struct Edge {
    std::string id;
    int src;    // vertex index
    int dst;    // vertex index (the range of the edge)
    int color;  // color index
};

/// Finite directed multigraph with an edge coloring. Vertices, edges and
/// colors are referred to by dense indices internally; string ids are kept
/// for I/O. Immutable after construction.
class Graph {
  public:
    Graph(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges);

    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int num_colors() const { return static_cast<int>(colors_.size()); }

    const std::string& vertex_id(int v) const { return vertices_.at(v); }
    const Edge& edge(int e) const { return edges_.at(e); }
    const std::string& color_id(int c) const { return colors_.at(c); }

    std::optional<int> vertex_index(const std::string& id) const;
    std::optional<int> edge_index(const std::string& id) const;
    std::optional<int> color_index(const std::string& id) const;

    // Edges into / out of a vertex, ordered by edge-id rank.
    const std::vector<int>& in_edges(int v) const { return in_edges_.at(v); }
    const std::vector<int>& out_edges(int v) const { return out_edges_.at(v); }
    const std::vector<int>& color_edges(int c) const { return color_edges_.at(c); }

    /// Rank of an edge in the id-sorted order; used for all deterministic
    /// tie-breaking (path ordering, tail selection).
    int edge_rank(int e) const { return edge_rank_.at(e); }

    /// V_r: vertices receiving at least one edge.
    std::set<int> receivers() const;
    /// Receivers of a single color class.
    std::set<int> receivers(int color) const;

    bool same_structure(const Graph& other) const;

  private:
    std::vector<std::string> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::string> colors_;
    std::map<std::string, int> vertex_index_;
    std::map<std::string, int> edge_index_;
    std::map<std::string, int> color_index_;
    std::vector<int> edge_rank_;
    std::vector<std::vector<int>> in_edges_;
    std::vector<std::vector<int>> out_edges_;
    std::vector<std::vector<int>> color_edges_;
};

/// A finite path. Edges are stored in application order: edges()[0] acts
/// first, so source(. ) = src of edges()[0] and range() = dst of the last
/// edge. Length-0 paths carry their tag vertex. Matches the right-to-left
/// composition convention used throughout.
class Path {
  public:
    static Path at_vertex(const Graph& g, int v);
    static Path of_edge(const Graph& g, int e);
    Path(const Graph& g, std::vector<int> edges);  // throws on broken chaining

    int length() const { return static_cast<int>(edges_.size()); }
    int source() const { return src_; }
    int range() const { return rng_; }
    const std::vector<int>& edges() const { return edges_; }

    /// e applied after this path; requires s(e) = range().
    Path prepended(const Graph& g, int e) const;
    /// First-applied edge stripped; requires length >= 1.
    Path without_first(const Graph& g) const;

    /// this ∘ other (other acts first); defined iff source() = other.range().
    Path composed_with(const Graph& g, const Path& other) const;

    bool operator==(const Path& o) const {
        return src_ == o.src_ && edges_ == o.edges_;
    }

  private:
    Path() = default;
    std::vector<int> edges_;
    int src_ = -1;
    int rng_ = -1;
};

/// Deterministic total order on paths: length-major, then lexicographic on
/// edge-id ranks, with the tag vertex breaking ties among length-0 paths.
struct PathOrder {
    const Graph* g;
    bool operator()(const Path& a, const Path& b) const;
};

/// All paths of length <= depth (optionally restricted to a fixed source
/// vertex), in the deterministic order, with an index map.
class PathBasis {
  public:
    PathBasis(const Graph& g, int depth, std::optional<int> source = std::nullopt);

    const Graph& graph() const { return *g_; }
    int depth() const { return depth_; }
    int size() const { return static_cast<int>(paths_.size()); }
    const Path& path(int i) const { return paths_.at(i); }
    std::optional<int> index_of(const Path& p) const;

  private:
    const Graph* g_;
    int depth_;
    std::vector<Path> paths_;
    std::map<std::pair<int, std::vector<int>>, int> index_;
};

/// One backward tail per vertex: a finite path ending at a vertex with no
/// incoming edges, or an eventually periodic infinite tail (prefix + cycle).
/// Tail edges are listed from the vertex backwards: edge_at(v, 0) is the
/// edge into v.
class TailSelection {
  public:
    static TailSelection select(const Graph& g);

    bool is_finite(int v) const { return tails_.at(v).cycle.empty(); }
    /// Length of a finite tail (0 for a vertex with no incoming edges).
    int finite_length(int v) const;

    /// e_{v,k+1}: the k-th backward edge of mu_v (k >= 0).
    int edge_at(int v, int k) const;
    /// s(mu_{v,i}): the vertex reached after i backward steps.
    int level_vertex(const Graph& g, int v, int i) const;

    const std::vector<int>& prefix(int v) const { return tails_.at(v).prefix; }
    const std::vector<int>& cycle(int v) const { return tails_.at(v).cycle; }

    bool consistent_with(const Graph& g) const;

  private:
    struct Tail {
        std::vector<int> prefix;
        std::vector<int> cycle;
    };
    std::vector<Tail> tails_;
};

/// One reduced symbol lambda * mu_{anchor,level}^{-1}. `depth` is the length
/// of the lambda-part when the symbol is written at the top truncation level
/// of its anchor; it plays the role of the path length in the Fock basis.
struct BackwardSymbol {
    int anchor;  // vertex owning the tail
    int level;   // reduced truncation index i
    Path lambda; // reduced forward part; s(lambda) = s(mu_{anchor,level})
    int depth;

    int range(const Graph& g) const { return lambda.range(); }
    /// Gauge weight exponent |lambda| - |mu|; shifts raise it by one.
    int gauge_exponent() const { return lambda.length() - level; }
};

/// Truncated basis of l^2(Gamma): for each vertex v the space H_{v,i(v)}
/// with i(v) = min(depth, |mu_v|), cut at lambda-length <= depth, every
/// symbol stored in its canonical reduced form (minimal truncation index).
class BackwardBasis {
  public:
    /// `cap_bound` limits the backward truncation level independently of the
    /// forward budget `depth` (default: capped by depth itself).
    BackwardBasis(const Graph& g, const TailSelection& tails, int depth,
                  std::optional<int> anchor = std::nullopt,
                  std::optional<int> cap_bound = std::nullopt);

    const Graph& graph() const { return *g_; }
    const TailSelection& tails() const { return *tails_; }
    int depth() const { return depth_; }
    int size() const { return static_cast<int>(symbols_.size()); }
    const BackwardSymbol& symbol(int i) const { return symbols_.at(i); }
    std::optional<int> index_of(const BackwardSymbol& s) const;

    /// Top truncation level of the anchor's tail, min(depth, |mu_v|).
    int anchor_cap(int v) const { return caps_.at(v); }

    /// Canonical reduced form of (lambda, anchor, level): strips matched
    /// tail edges off the source side of lambda while lowering the level.
    BackwardSymbol reduce(int anchor, int level, Path lambda) const;

  private:
    const Graph* g_;
    const TailSelection* tails_;
    int depth_;
    std::vector<int> caps_;
    std::vector<BackwardSymbol> symbols_;
    std::map<std::tuple<int, int, int, std::vector<int>>, int> index_;

    std::tuple<int, int, int, std::vector<int>> key(const BackwardSymbol& s) const;
};

std::vector<std::string> path_edge_ids(const Graph& g, const Path& p);

}  // namespace ck
