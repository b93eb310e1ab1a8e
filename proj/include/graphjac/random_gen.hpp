#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "graphjac/graph.hpp"
#include "graphjac/morphisms.hpp"

namespace graphjac {

// splitmix64: tiny, seed-stable across platforms. std::uniform_int_distribution
// is implementation-defined, so it is avoided; reports must be byte-identical
// for identical seeds.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n)
    std::size_t below(std::size_t n) {
        if (n == 0) throw Error("rng: empty range");
        std::uint64_t lim = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= lim);
        return static_cast<std::size_t>(x % n);
    }

private:
    std::uint64_t state_;
};

// Random connected multigraph: a spanning tree on a random vertex
// permutation, then extra uniform edges (loops and parallels allowed).
inline Graph random_connected_graph(Rng& rng, std::size_t max_vertices, std::size_t max_edges) {
    std::size_t nv = 1 + rng.below(max_vertices);
    std::size_t min_edges = nv > 1 ? nv - 1 : 1;  // a lone vertex keeps a loop
    if (max_edges < min_edges) max_edges = min_edges;
    std::size_t ne = min_edges + rng.below(max_edges - min_edges + 1);

    std::vector<std::string> verts;
    for (std::size_t i = 0; i < nv; ++i) verts.push_back("v" + std::to_string(i + 1));
    std::vector<std::size_t> order(nv);
    for (std::size_t i = 0; i < nv; ++i) order[i] = i;
    for (std::size_t i = nv; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    std::vector<std::tuple<std::string, std::string, std::string>> edges;
    auto add_edge = [&](std::size_t o, std::size_t t) {
        std::string id = "e" + std::to_string(edges.size() + 1);
        edges.emplace_back(id, verts[o], verts[t]);
    };
    for (std::size_t i = 1; i < nv; ++i) {
        std::size_t anchor = order[rng.below(i)];
        if (rng.below(2)) add_edge(anchor, order[i]);
        else add_edge(order[i], anchor);
    }
    while (edges.size() < ne) add_edge(rng.below(nv), rng.below(nv));
    return Graph::build(verts, edges);
}

inline Modulus random_modulus(Rng& rng, const Graph& g, std::size_t max_size) {
    std::size_t s = 1 + rng.below(max_size);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < s; ++i)
        names.push_back(g.vertex_name(rng.below(g.num_vertices())));
    return Modulus::build(g, names);
}

// Random harmonic cover via voltage permutations over a base graph with at
// least one independent cycle. Falls back to a transitive assignment
// (identity on a spanning tree, full cycle on the first chord) when random
// voltages keep producing a disconnected cover.
struct RandomCover {
    Graph base, cover;
    GraphMorphism map;  // cover -> base
};

inline RandomCover random_harmonic_cover(Rng& rng, std::size_t max_base_vertices,
                                         std::size_t degree) {
    Graph base = random_connected_graph(rng, max_base_vertices, max_base_vertices + 3);
    while (betti_one(base) == 0) base = random_connected_graph(rng, max_base_vertices,
                                                               max_base_vertices + 3);
    const std::size_t nv = base.num_vertices(), ne = base.num_edges(), n = degree;

    auto build_cover = [&](const std::vector<std::vector<std::size_t>>& sigma) {
        std::vector<std::string> verts;
        for (std::size_t v = 0; v < nv; ++v)
            for (std::size_t s = 0; s < n; ++s)
                verts.push_back(base.vertex_name(v) + "_" + std::to_string(s));
        std::vector<std::tuple<std::string, std::string, std::string>> edges;
        for (std::size_t e = 0; e < ne; ++e)
            for (std::size_t s = 0; s < n; ++s)
                edges.emplace_back(base.edge(e).id + "_" + std::to_string(s),
                                   base.vertex_name(base.edge(e).o) + "_" + std::to_string(s),
                                   base.vertex_name(base.edge(e).t) + "_" +
                                       std::to_string(sigma[e][s]));
        return Graph::build(verts, edges);
    };

    std::vector<std::vector<std::size_t>> sigma(ne, std::vector<std::size_t>(n));
    Graph cover;
    bool connected = false;
    for (int attempt = 0; attempt < 40 && !connected; ++attempt) {
        for (std::size_t e = 0; e < ne; ++e) {
            for (std::size_t s = 0; s < n; ++s) sigma[e][s] = s;
            for (std::size_t s = n; s > 1; --s) std::swap(sigma[e][s - 1], sigma[e][rng.below(s)]);
        }
        cover = build_cover(sigma);
        connected = cover.is_connected();
    }
    if (!connected) {
        Graph::Forest forest = base.spanning_forest();
        bool cycled = false;
        for (std::size_t e = 0; e < ne; ++e) {
            for (std::size_t s = 0; s < n; ++s) sigma[e][s] = s;
            if (!forest.edges.count(e) && !cycled) {
                for (std::size_t s = 0; s < n; ++s) sigma[e][s] = (s + 1) % n;
                cycled = true;
            }
        }
        cover = build_cover(sigma);
    }

    std::map<std::string, std::string> vmap;
    std::map<std::string, std::pair<bool, std::string>> emap;
    for (std::size_t v = 0; v < nv; ++v)
        for (std::size_t s = 0; s < n; ++s)
            vmap[base.vertex_name(v) + "_" + std::to_string(s)] = base.vertex_name(v);
    for (std::size_t e = 0; e < ne; ++e)
        for (std::size_t s = 0; s < n; ++s)
            emap[base.edge(e).id + "_" + std::to_string(s)] = {true, base.edge(e).id};

    RandomCover rc;
    rc.base = base;
    rc.cover = cover;
    rc.map = make_graph_morphism(cover, base, vmap, emap);
    return rc;
}

// Reduced modulus on the base and its full preimage on the cover.
inline std::pair<Modulus, Modulus> cover_moduli(Rng& rng, const RandomCover& rc) {
    std::size_t nsup = 1 + rng.below(std::min<std::size_t>(2, rc.base.num_vertices()));
    std::vector<std::size_t> picks;
    while (picks.size() < nsup) {
        std::size_t v = rng.below(rc.base.num_vertices());
        bool seen = false;
        for (std::size_t p : picks) seen = seen || p == v;
        if (!seen) picks.push_back(v);
    }
    std::vector<std::string> base_names, cover_names;
    for (std::size_t p : picks) base_names.push_back(rc.base.vertex_name(p));
    for (std::size_t v = 0; v < rc.cover.num_vertices(); ++v) {
        for (std::size_t p : picks)
            if (rc.map.fv(v) == p) cover_names.push_back(rc.cover.vertex_name(v));
    }
    return {Modulus::build(rc.cover, cover_names), Modulus::build(rc.base, base_names)};
}

}  // namespace graphjac
