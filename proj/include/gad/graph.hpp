#ifndef GAD_GRAPH_HPP
#define GAD_GRAPH_HPP

#include <algorithm>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "gad/errors.hpp"

namespace gad {

struct EdgeData {
    std::string id;
    std::string source;
    std::string range;
};

class Graph;
using GraphPtr = std::shared_ptr<const Graph>;

// Finite directed graph without sources: every vertex receives an edge.
class Graph {
public:
    static GraphPtr create(std::vector<std::string> vertices, std::vector<EdgeData> edges) {
        auto g = std::make_shared<Graph>();
        g->vertices_ = std::move(vertices);
        std::sort(g->vertices_.begin(), g->vertices_.end());
        if (std::adjacent_find(g->vertices_.begin(), g->vertices_.end()) != g->vertices_.end())
            throw Error("duplicate vertex name");
        if (g->vertices_.empty()) throw Error("graph needs at least one vertex");

        std::sort(edges.begin(), edges.end(),
                  [](const EdgeData& a, const EdgeData& b) { return a.id < b.id; });
        for (const auto& e : edges) {
            if (!g->ids_.empty() && g->ids_.back() == e.id)
                throw Error("duplicate edge id: " + e.id);
            g->ids_.push_back(e.id);
            g->src_.push_back(g->vertex_index(e.source));
            g->rng_.push_back(g->vertex_index(e.range));
        }
        g->into_.assign(g->vertices_.size(), {});
        for (std::size_t a = 0; a < g->ids_.size(); ++a) g->into_[g->rng_[a]].push_back(a);
        for (std::size_t v = 0; v < g->vertices_.size(); ++v)
            if (g->into_[v].empty())
                throw Error("vertex " + g->vertices_[v] + " is a source (no incoming edge)");
        return g;
    }

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_edges() const { return ids_.size(); }
    const std::vector<std::string>& vertex_names() const { return vertices_; }
    const std::string& edge_id(std::size_t a) const { return ids_[a]; }
    std::size_t source(std::size_t a) const { return src_[a]; }
    std::size_t range(std::size_t a) const { return rng_[a]; }
    const std::vector<std::size_t>& edges_into(std::size_t v) const { return into_[v]; }

    std::size_t vertex_index(const std::string& name) const {
        auto it = std::lower_bound(vertices_.begin(), vertices_.end(), name);
        if (it == vertices_.end() || *it != name) throw Error("unknown vertex: " + name);
        return static_cast<std::size_t>(it - vertices_.begin());
    }

    std::size_t edge_index(const std::string& id) const {
        auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
        if (it == ids_.end() || *it != id) throw Error("unknown edge: " + id);
        return static_cast<std::size_t>(it - ids_.begin());
    }

private:
    std::vector<std::string> vertices_;  // sorted
    std::vector<std::string> ids_;       // sorted
    std::vector<std::size_t> src_, rng_;
    std::vector<std::vector<std::size_t>> into_;  // per vertex, edges with that range
};

// Finite path alpha_1 ... alpha_n with r(alpha_{i+1}) = s(alpha_i).
// r(path) = r(alpha_1) is the fixed end; d(path) = s(alpha_n) is the end
// where cylinders extend.  A length-0 path is a vertex.
class Path {
public:
    static Path vertex(GraphPtr g, std::size_t v) { return Path(std::move(g), v, {}); }

    static Path edges(GraphPtr g, std::vector<std::size_t> es) {
        if (es.empty()) throw Error("edge path needs at least one edge");
        std::size_t base = g->range(es.front());
        return Path(std::move(g), base, std::move(es));
    }

    static Path parse(const GraphPtr& g, const std::vector<std::string>& ids) {
        std::vector<std::size_t> es;
        es.reserve(ids.size());
        for (const auto& id : ids) es.push_back(g->edge_index(id));
        return edges(g, std::move(es));
    }

    const GraphPtr& graph() const { return graph_; }
    std::size_t length() const { return edges_.size(); }
    const std::vector<std::size_t>& edge_list() const { return edges_; }
    std::size_t r() const { return base_; }
    std::size_t d() const { return edges_.empty() ? base_ : graph_->source(edges_.back()); }

    // this followed by more, glued at d(this) = r(more)
    Path concat(const Path& more) const {
        if (graph_ != more.graph_) throw Error("paths on different graphs");
        if (more.r() != d()) throw Error("paths do not compose");
        std::vector<std::size_t> es = edges_;
        es.insert(es.end(), more.edges_.begin(), more.edges_.end());
        return Path(graph_, base_, std::move(es));
    }

    bool is_prefix_of(const Path& longer) const {
        if (length() > longer.length()) return false;
        if (r() != longer.r()) return false;
        return std::equal(edges_.begin(), edges_.end(), longer.edges_.begin());
    }

    // remainder after a prefix: prefix.concat(result) == *this
    Path strip_prefix(const Path& prefix) const {
        if (!prefix.is_prefix_of(*this)) throw Error("not a prefix");
        std::vector<std::size_t> es(edges_.begin() + static_cast<long>(prefix.length()),
                                    edges_.end());
        return Path(graph_, prefix.d(), std::move(es));
    }

    friend bool operator==(const Path& a, const Path& b) {
        return a.graph_ == b.graph_ && a.base_ == b.base_ && a.edges_ == b.edges_;
    }
    friend bool operator!=(const Path& a, const Path& b) { return !(a == b); }
    friend bool operator<(const Path& a, const Path& b) {
        if (a.base_ != b.base_) return a.base_ < b.base_;
        return a.edges_ < b.edges_;
    }

    std::string str() const {
        if (edges_.empty()) return graph_->vertex_names()[base_];
        std::string s;
        for (std::size_t e : edges_) {
            if (!s.empty()) s += ".";
            s += graph_->edge_id(e);
        }
        return s;
    }

private:
    Path(GraphPtr g, std::size_t base, std::vector<std::size_t> es)
        : graph_(std::move(g)), base_(base), edges_(std::move(es)) {
        if (base_ >= graph_->num_vertices()) throw Error("vertex index out of range");
        std::size_t at = base_;
        for (std::size_t e : edges_) {
            if (graph_->range(e) != at) throw Error("path edges do not chain");
            at = graph_->source(e);
        }
    }

    GraphPtr graph_;
    std::size_t base_;  // r-end vertex
    std::vector<std::size_t> edges_;
};

// All length-k paths with range v, in lexicographic edge order.
inline std::vector<Path> paths_from(const GraphPtr& g, std::size_t v, std::size_t k) {
    std::vector<Path> out = {Path::vertex(g, v)};
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Path> next;
        for (const auto& p : out)
            for (std::size_t e : g->edges_into(p.d()))
                next.push_back(p.concat(Path::edges(g, {e})));
        out = std::move(next);
    }
    return out;
}

// All paths of length at most k with range v.
inline std::vector<Path> paths_up_to(const GraphPtr& g, std::size_t v, std::size_t k) {
    std::vector<Path> out;
    for (std::size_t i = 0; i <= k; ++i) {
        auto level = paths_from(g, v, i);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

}  // namespace gad

#endif
