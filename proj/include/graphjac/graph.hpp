#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "graphjac/errors.hpp"

namespace graphjac {

// Finite oriented multigraph. Loops and parallel edges permitted. Vertex and
// edge ids are opaque strings; the frozen insertion order defines the basis
// order of every matrix downstream, so presentations are reproducible and
// CLI output is diffable.
class Graph {
public:
    struct Edge {
        std::string id;
        std::size_t o, t;
    };

    static Graph build(const std::vector<std::string>& vertices,
                       const std::vector<std::tuple<std::string, std::string, std::string>>& edges) {
        Graph g;
        if (vertices.empty()) throw EmptyVertexSet("graph needs at least one vertex");
        for (const auto& v : vertices) {
            if (g.vindex_.count(v)) throw DuplicateId("duplicate vertex id: " + v);
            g.vindex_[v] = g.vertices_.size();
            g.vertices_.push_back(v);
        }
        for (const auto& [id, o, t] : edges) {
            if (g.eindex_.count(id)) throw DuplicateId("duplicate edge id: " + id);
            auto io = g.vindex_.find(o), it = g.vindex_.find(t);
            if (io == g.vindex_.end()) throw DanglingEndpoint("edge " + id + ": unknown origin " + o);
            if (it == g.vindex_.end()) throw DanglingEndpoint("edge " + id + ": unknown terminus " + t);
            g.eindex_[id] = g.edges_.size();
            g.edges_.push_back(Edge{id, io->second, it->second});
        }
        return g;
    }

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    const std::string& vertex_name(std::size_t i) const { return vertices_[i]; }
    const std::vector<std::string>& vertex_names() const { return vertices_; }
    const Edge& edge(std::size_t e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_vertex(const std::string& name) const { return vindex_.count(name) != 0; }
    std::size_t vertex_index(const std::string& name) const {
        auto it = vindex_.find(name);
        if (it == vindex_.end()) throw DanglingEndpoint("unknown vertex: " + name);
        return it->second;
    }
    std::size_t edge_index(const std::string& id) const {
        auto it = eindex_.find(id);
        if (it == eindex_.end()) throw UnknownEdge("unknown edge: " + id);
        return it->second;
    }

    std::size_t degree(std::size_t v) const {
        std::size_t d = 0;
        for (const Edge& e : edges_) {
            if (e.o == v) ++d;
            if (e.t == v) ++d;
        }
        return d;
    }

    // Components in first-touch order; label[v] in [0, #components).
    std::vector<std::size_t> component_labels() const {
        std::vector<std::size_t> parent(vertices_.size());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const Edge& e : edges_) {
            std::size_t a = find(e.o), b = find(e.t);
            if (a != b) parent[b] = a;
        }
        std::map<std::size_t, std::size_t> relabel;
        std::vector<std::size_t> label(vertices_.size());
        for (std::size_t v = 0; v < vertices_.size(); ++v) {
            std::size_t r = find(v);
            auto it = relabel.find(r);
            if (it == relabel.end()) it = relabel.emplace(r, relabel.size()).first;
            label[v] = it->second;
        }
        return label;
    }

    std::size_t num_components() const {
        auto l = component_labels();
        std::size_t m = 0;
        for (std::size_t x : l) m = std::max(m, x + 1);
        return vertices_.empty() ? 0 : m;
    }

    bool is_connected() const { return num_components() == 1; }

    // Deterministic spanning forest: scan edges in insertion (id) order,
    // keep each edge that joins two components.
    struct Forest {
        std::set<std::size_t> edges;
        std::vector<std::size_t> component;
        std::size_t num_components = 0;
    };

    Forest spanning_forest() const {
        Forest f;
        std::vector<std::size_t> parent(vertices_.size());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            std::size_t a = find(edges_[e].o), b = find(edges_[e].t);
            if (a != b) {
                parent[b] = a;
                f.edges.insert(e);
            }
        }
        f.component = component_labels();
        f.num_components = num_components();
        return f;
    }

    Graph reverse_edges(const std::set<std::string>& subset) const {
        Graph g = *this;
        for (const std::string& id : subset) {
            std::size_t e = edge_index(id);  // UnknownEdge if absent
            std::swap(g.edges_[e].o, g.edges_[e].t);
        }
        return g;
    }

    Graph reverse_all_edges() const {
        Graph g = *this;
        for (Edge& e : g.edges_) std::swap(e.o, e.t);
        return g;
    }

private:
    std::vector<std::string> vertices_;
    std::vector<Edge> edges_;
    std::map<std::string, std::size_t> vindex_, eindex_;
};

// A modulus: a nonempty indexed family i |-> w_i of vertices, repetitions
// allowed (non-reduced). The index order is the declaration order.
class Modulus {
public:
    static Modulus build(const Graph& g, const std::vector<std::string>& vertex_names) {
        if (vertex_names.empty()) throw Error("modulus must be a nonempty family");
        Modulus m;
        for (const auto& name : vertex_names) {
            m.targets_.push_back(g.vertex_index(name));
            m.names_.push_back(name);
        }
        return m;
    }

    std::size_t size() const { return targets_.size(); }
    std::size_t target(std::size_t i) const { return targets_[i]; }
    const std::string& name(std::size_t i) const { return names_[i]; }

    // I(v): indices mapping to vertex v
    std::vector<std::size_t> indices_at(std::size_t v) const {
        std::vector<std::size_t> r;
        for (std::size_t i = 0; i < targets_.size(); ++i)
            if (targets_[i] == v) r.push_back(i);
        return r;
    }

    // support in first-occurrence order
    std::vector<std::size_t> support() const {
        std::vector<std::size_t> s;
        for (std::size_t t : targets_) {
            bool seen = false;
            for (std::size_t x : s)
                if (x == t) seen = true;
            if (!seen) s.push_back(t);
        }
        return s;
    }

    bool is_reduced() const { return support().size() == targets_.size(); }

    // the reduced modulus on the support, in first-occurrence order
    Modulus reduced(const Graph& g) const {
        std::vector<std::string> names;
        for (std::size_t v : support()) names.push_back(g.vertex_name(v));
        return build(g, names);
    }

    std::vector<std::string> names() const { return names_; }

private:
    std::vector<std::size_t> targets_;
    std::vector<std::string> names_;
};

// The extended graph: an auxiliary vertex ⋆ with one edge ⋆ -> w_i per
// modulus index. Base vertices and edges keep their ids, order and
// orientation, so the base complex embeds coordinate-wise.
struct ExtendedGraph {
    Graph graph;
    std::size_t star_vertex = 0;
    std::vector<std::size_t> modulus_edges;  // i -> edge index of e_i
};

inline ExtendedGraph extend_with_modulus(const Graph& g, const Modulus& m,
                                         const std::string& star_id = "⋆") {
    if (g.has_vertex(star_id))
        throw StarCollision("star vertex id '" + star_id + "' collides with a user vertex");
    std::vector<std::string> verts = g.vertex_names();
    verts.push_back(star_id);
    std::vector<std::tuple<std::string, std::string, std::string>> edges;
    for (const auto& e : g.edges())
        edges.emplace_back(e.id, g.vertex_name(e.o), g.vertex_name(e.t));
    for (std::size_t i = 0; i < m.size(); ++i) {
        std::string eid = star_id + "_e" + std::to_string(i + 1);
        edges.emplace_back(eid, star_id, g.vertex_name(m.target(i)));
    }
    ExtendedGraph x;
    x.graph = Graph::build(verts, edges);
    x.star_vertex = g.num_vertices();
    for (std::size_t i = 0; i < m.size(); ++i)
        x.modulus_edges.push_back(g.num_edges() + i);
    return x;
}

}  // namespace graphjac
