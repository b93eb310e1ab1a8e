#pragma once

#include <string>
#include <vector>

#include "graphjac/graph.hpp"

namespace fixtures {

using graphjac::Graph;
using graphjac::Modulus;

// the worked triangle: g: w1->w2, h: w2->v, f: v->w1
inline Graph triangle() {
    return Graph::build({"w1", "w2", "v"},
                        {{"g", "w1", "w2"}, {"h", "w2", "v"}, {"f", "v", "w1"}});
}

inline Graph cycle(std::size_t n) {
    std::vector<std::string> v;
    std::vector<std::tuple<std::string, std::string, std::string>> e;
    for (std::size_t i = 0; i < n; ++i) v.push_back("x" + std::to_string(i));
    for (std::size_t i = 0; i < n; ++i)
        e.emplace_back("a" + std::to_string(i), v[i], v[(i + 1) % n]);
    return Graph::build(v, e);
}

inline Graph path(std::size_t n) {
    std::vector<std::string> v;
    std::vector<std::tuple<std::string, std::string, std::string>> e;
    for (std::size_t i = 0; i < n; ++i) v.push_back("p" + std::to_string(i));
    for (std::size_t i = 0; i + 1 < n; ++i)
        e.emplace_back("s" + std::to_string(i), v[i], v[i + 1]);
    return Graph::build(v, e);
}

inline Graph banana(std::size_t k) {
    std::vector<std::tuple<std::string, std::string, std::string>> e;
    for (std::size_t i = 0; i < k; ++i) e.emplace_back("b" + std::to_string(i), "u", "v");
    return Graph::build({"u", "v"}, e);
}

inline Graph loop_graph(std::size_t loops) {
    std::vector<std::tuple<std::string, std::string, std::string>> e;
    for (std::size_t i = 0; i < loops; ++i) e.emplace_back("l" + std::to_string(i), "u", "u");
    return Graph::build({"u"}, e);
}

inline Graph complete4() {
    return Graph::build({"a", "b", "c", "d"},
                        {{"e1", "a", "b"},
                         {"e2", "a", "c"},
                         {"e3", "a", "d"},
                         {"e4", "b", "c"},
                         {"e5", "b", "d"},
                         {"e6", "c", "d"}});
}

// two-vertex cycle: e1: u->v, e2: v->u
inline Graph c2() {
    return Graph::build({"u", "v"}, {{"e1", "u", "v"}, {"e2", "v", "u"}});
}

}  // namespace fixtures
