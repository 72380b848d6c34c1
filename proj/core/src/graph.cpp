#include "ck/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ck {

Graph::Graph(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges)
    : vertices_(std::move(vertices)) {
    for (int v = 0; v < num_vertices(); ++v) {
        if (!vertex_index_.emplace(vertices_[v], v).second)
            throw std::invalid_argument("duplicate vertex id: " + vertices_[v]);
    }
    for (const auto& es : edges) {
        auto sv = vertex_index(es.src);
        auto rv = vertex_index(es.dst);
        if (!sv) throw std::invalid_argument("edge " + es.id + ": unknown source vertex " + es.src);
        if (!rv) throw std::invalid_argument("edge " + es.id + ": unknown range vertex " + es.dst);
        int e = static_cast<int>(edges_.size());
        if (!edge_index_.emplace(es.id, e).second)
            throw std::invalid_argument("duplicate edge id: " + es.id);
        auto [cit, fresh] = color_index_.emplace(es.color, 0);
        if (fresh) colors_.push_back(es.color);
        edges_.push_back(Edge{es.id, *sv, *rv, 0});
    }
    // colors and edge ranks follow the sorted id order
    std::sort(colors_.begin(), colors_.end());
    for (int c = 0; c < num_colors(); ++c) color_index_[colors_[c]] = c;
    for (std::size_t i = 0; i < edges_.size(); ++i)
        edges_[i].color = color_index_.at(edges[i].color);

    std::vector<int> order(edges_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return edges_[a].id < edges_[b].id; });
    edge_rank_.resize(edges_.size());
    for (std::size_t r = 0; r < order.size(); ++r) edge_rank_[order[r]] = static_cast<int>(r);

    in_edges_.resize(num_vertices());
    out_edges_.resize(num_vertices());
    color_edges_.resize(num_colors());
    for (int e : order) {
        in_edges_[edges_[e].dst].push_back(e);
        out_edges_[edges_[e].src].push_back(e);
        color_edges_[edges_[e].color].push_back(e);
    }
}

std::optional<int> Graph::vertex_index(const std::string& id) const {
    auto it = vertex_index_.find(id);
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> Graph::edge_index(const std::string& id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> Graph::color_index(const std::string& id) const {
    auto it = color_index_.find(id);
    if (it == color_index_.end()) return std::nullopt;
    return it->second;
}

std::set<int> Graph::receivers() const {
    std::set<int> out;
    for (const auto& e : edges_) out.insert(e.dst);
    return out;
}

std::set<int> Graph::receivers(int color) const {
    std::set<int> out;
    for (int e : color_edges_.at(color)) out.insert(edges_[e].dst);
    return out;
}

bool Graph::same_structure(const Graph& other) const {
    if (vertices_ != other.vertices_) return false;
    if (edges_.size() != other.edges_.size()) return false;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& a = edges_[i];
        const Edge& b = other.edges_[i];
        if (a.id != b.id || a.src != b.src || a.dst != b.dst || a.color != b.color)
            return false;
    }
    return colors_ == other.colors_;
}

// ---------------------------------------------------------------------------

Path Path::at_vertex(const Graph& g, int v) {
    if (v < 0 || v >= g.num_vertices()) throw std::invalid_argument("bad vertex index");
    Path p;
    p.src_ = p.rng_ = v;
    return p;
}

Path Path::of_edge(const Graph& g, int e) {
    if (e < 0 || e >= g.num_edges()) throw std::invalid_argument("bad edge index");
    Path p;
    p.edges_ = {e};
    p.src_ = g.edge(e).src;
    p.rng_ = g.edge(e).dst;
    return p;
}

Path::Path(const Graph& g, std::vector<int> edges) {
    if (edges.empty()) throw std::invalid_argument("empty edge list needs a tag vertex; use at_vertex");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (g.edge(edges[i]).dst != g.edge(edges[i + 1]).src)
            throw std::invalid_argument("path edges do not chain at position " + std::to_string(i));
    }
    src_ = g.edge(edges.front()).src;
    rng_ = g.edge(edges.back()).dst;
    edges_ = std::move(edges);
}

Path Path::prepended(const Graph& g, int e) const {
    if (g.edge(e).src != rng_)
        throw std::invalid_argument("edge does not chain onto path range");
    Path p(*this);
    p.edges_.push_back(e);
    p.rng_ = g.edge(e).dst;
    if (p.edges_.size() == 1) p.src_ = g.edge(e).src;
    return p;
}

Path Path::without_first(const Graph& g) const {
    if (edges_.empty()) throw std::invalid_argument("length-0 path has no first edge");
    if (edges_.size() == 1) return at_vertex(g, rng_);
    return Path(g, std::vector<int>(edges_.begin() + 1, edges_.end()));
}

Path Path::composed_with(const Graph& g, const Path& other) const {
    if (src_ != other.range())
        throw std::invalid_argument("path composition mismatch: s(lhs) != r(rhs)");
    if (other.length() == 0) return *this;
    if (length() == 0) return other;
    std::vector<int> es = other.edges_;
    es.insert(es.end(), edges_.begin(), edges_.end());
    return Path(g, std::move(es));
}

bool PathOrder::operator()(const Path& a, const Path& b) const {
    if (a.length() != b.length()) return a.length() < b.length();
    if (a.length() == 0) return a.source() < b.source();
    const auto& ea = a.edges();
    const auto& eb = b.edges();
    for (std::size_t i = 0; i < ea.size(); ++i) {
        int ra = g->edge_rank(ea[i]);
        int rb = g->edge_rank(eb[i]);
        if (ra != rb) return ra < rb;
    }
    return false;
}

PathBasis::PathBasis(const Graph& g, int depth, std::optional<int> source)
    : g_(&g), depth_(depth) {
    if (depth < 0) throw std::invalid_argument("path depth must be non-negative");
    std::vector<Path> frontier;
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (source && *source != v) continue;
        frontier.push_back(Path::at_vertex(g, v));
    }
    std::vector<Path> all = frontier;
    for (int len = 1; len <= depth; ++len) {
        std::vector<Path> next;
        for (const Path& p : frontier)
            for (int e : g.out_edges(p.range())) next.push_back(p.prepended(g, e));
        all.insert(all.end(), next.begin(), next.end());
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    std::sort(all.begin(), all.end(), PathOrder{&g});
    paths_ = std::move(all);
    for (int i = 0; i < size(); ++i)
        index_[{paths_[i].source(), paths_[i].edges()}] = i;
}

std::optional<int> PathBasis::index_of(const Path& p) const {
    auto it = index_.find({p.source(), p.edges()});
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------

TailSelection TailSelection::select(const Graph& g) {
    TailSelection sel;
    sel.tails_.resize(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); ++v) {
        std::vector<int> walk;            // edges, backward from v
        std::vector<int> visited = {v};   // vertices along the walk
        int cur = v;
        for (;;) {
            const auto& in = g.in_edges(cur);
            if (in.empty()) {
                sel.tails_[v].prefix = walk;  // finite tail ending at a non-receiver
                break;
            }
            int e = in.front();  // smallest edge id
            walk.push_back(e);
            cur = g.edge(e).src;
            auto it = std::find(visited.begin(), visited.end(), cur);
            if (it != visited.end()) {
                // periodic closure at the first revisit
                std::size_t pos = static_cast<std::size_t>(it - visited.begin());
                sel.tails_[v].prefix.assign(walk.begin(), walk.begin() + pos);
                sel.tails_[v].cycle.assign(walk.begin() + pos, walk.end());
                break;
            }
            visited.push_back(cur);
        }
    }
    return sel;
}

int TailSelection::finite_length(int v) const {
    if (!is_finite(v)) throw std::logic_error("tail is infinite");
    return static_cast<int>(tails_.at(v).prefix.size());
}

int TailSelection::edge_at(int v, int k) const {
    const Tail& t = tails_.at(v);
    int np = static_cast<int>(t.prefix.size());
    if (k < np) return t.prefix[k];
    if (t.cycle.empty()) throw std::out_of_range("finite tail exhausted");
    return t.cycle[(k - np) % t.cycle.size()];
}

int TailSelection::level_vertex(const Graph& g, int v, int i) const {
    if (i == 0) return v;
    return g.edge(edge_at(v, i - 1)).src;
}

bool TailSelection::consistent_with(const Graph& g) const {
    if (static_cast<int>(tails_.size()) != g.num_vertices()) return false;
    for (int v = 0; v < g.num_vertices(); ++v) {
        const Tail& t = tails_[v];
        int cur = v;
        for (int e : t.prefix) {
            if (g.edge(e).dst != cur) return false;
            cur = g.edge(e).src;
        }
        if (t.cycle.empty()) {
            if (!g.in_edges(cur).empty()) return false;  // finite tails end at non-receivers
        } else {
            int c = cur;
            for (int e : t.cycle) {
                if (g.edge(e).dst != c) return false;
                c = g.edge(e).src;
            }
            if (c != cur) return false;  // cycle range must equal its source
        }
    }
    return true;
}

// ---------------------------------------------------------------------------

BackwardBasis::BackwardBasis(const Graph& g, const TailSelection& tails, int depth,
                             std::optional<int> anchor, std::optional<int> cap_bound)
    : g_(&g), tails_(&tails), depth_(depth) {
    if (depth < 0) throw std::invalid_argument("backward basis depth must be non-negative");
    if (!tails.consistent_with(g))
        throw std::invalid_argument("tail selection inconsistent with graph");
    int bound = cap_bound ? *cap_bound : depth;
    if (bound < 0)
        throw std::invalid_argument("backward cap bound must be non-negative");
    caps_.resize(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); ++v)
        caps_[v] = tails.is_finite(v) ? std::min(bound, tails.finite_length(v)) : bound;

    // one symbol lambda mu_{v,i}^{-1} per level i <= cap and |lambda| <= depth;
    // symbols reachable from several levels collapse under reduction
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (anchor && *anchor != v) continue;
        for (int level = caps_[v]; level >= 0; --level) {
            PathBasis forward(g, depth, tails.level_vertex(g, v, level));
            for (int i = 0; i < forward.size(); ++i) {
                BackwardSymbol s = reduce(v, level, forward.path(i));
                if (index_.count(key(s))) continue;
                index_[key(s)] = static_cast<int>(symbols_.size());
                symbols_.push_back(std::move(s));
            }
        }
    }
}

BackwardSymbol BackwardBasis::reduce(int anchor, int level, Path lambda) const {
    int d = lambda.length() + (caps_.at(anchor) - level);
    while (level > 0 && lambda.length() > 0 &&
           lambda.edges().front() == tails_->edge_at(anchor, level - 1)) {
        lambda = lambda.without_first(*g_);
        --level;
    }
    return BackwardSymbol{anchor, level, std::move(lambda), d};
}

std::tuple<int, int, int, std::vector<int>> BackwardBasis::key(const BackwardSymbol& s) const {
    return {s.anchor, s.level, s.lambda.source(), s.lambda.edges()};
}

std::optional<int> BackwardBasis::index_of(const BackwardSymbol& s) const {
    auto it = index_.find(key(s));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> path_edge_ids(const Graph& g, const Path& p) {
    std::vector<std::string> out;
    for (int e : p.edges()) out.push_back(g.edge(e).id);
    return out;
}

}  // namespace ck
