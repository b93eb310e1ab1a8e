#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphjac/graph.hpp"
#include "graphjac/morphisms.hpp"

namespace graphjac {

using ordered_json = nlohmann::ordered_json;

struct ParseError : Error {
    using Error::Error;
};

// {"vertices":["w1","w2","v"],
//  "edges":[{"id":"g","o":"w1","t":"w2"},...],
//  "modulus":["w1","w2"]}         // optional, ordered, repetitions allowed
struct GraphInput {
    Graph graph;
    std::optional<std::vector<std::string>> modulus_names;
};

inline GraphInput parse_graph_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
        throw ParseError("graph JSON needs 'vertices' and 'edges'");
    std::vector<std::string> verts;
    for (const auto& v : j.at("vertices")) verts.push_back(v.get<std::string>());
    std::vector<std::tuple<std::string, std::string, std::string>> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.contains("id") || !e.contains("o") || !e.contains("t"))
            throw ParseError("edge needs 'id', 'o', 't'");
        edges.emplace_back(e.at("id").get<std::string>(), e.at("o").get<std::string>(),
                           e.at("t").get<std::string>());
    }
    GraphInput in;
    try {
        in.graph = Graph::build(verts, edges);
    } catch (const Error& err) {
        throw ParseError(std::string("invalid graph: ") + err.what());
    }
    if (j.contains("modulus")) {
        std::vector<std::string> names;
        for (const auto& m : j.at("modulus")) names.push_back(m.get<std::string>());
        in.modulus_names = names;
    }
    return in;
}

inline GraphInput load_graph_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open " + path);
    ordered_json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw ParseError(std::string("bad JSON in ") + path + ": " + e.what());
    }
    return parse_graph_json(j);
}

inline ordered_json graph_to_json(const Graph& g,
                                  const std::optional<std::vector<std::string>>& modulus) {
    ordered_json j;
    j["vertices"] = ordered_json::array();
    for (const auto& v : g.vertex_names()) j["vertices"].push_back(v);
    j["edges"] = ordered_json::array();
    for (const auto& e : g.edges()) {
        ordered_json je;
        je["id"] = e.id;
        je["o"] = g.vertex_name(e.o);
        je["t"] = g.vertex_name(e.t);
        j["edges"].push_back(je);
    }
    if (modulus) j["modulus"] = *modulus;
    return j;
}

// {"target": {graph...}, "target_modulus": [...],   // extension, see README
//  "vertex_map":{"a":"u",...},
//  "edge_map":{"e1":{"edge":"f"},"e2":{"vertex":"u"}}}
struct MorphismInput {
    Graph target;
    std::optional<std::vector<std::string>> target_modulus_names;
    std::map<std::string, std::string> vertex_map;
    std::map<std::string, std::pair<bool, std::string>> edge_map;
};

inline MorphismInput parse_morphism_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("vertex_map") || !j.contains("edge_map"))
        throw ParseError("morphism JSON needs 'vertex_map' and 'edge_map'");
    if (!j.contains("target"))
        throw ParseError("morphism JSON needs a 'target' graph");
    MorphismInput in;
    GraphInput tgt = parse_graph_json(j.at("target"));
    in.target = tgt.graph;
    in.target_modulus_names = tgt.modulus_names;
    if (j.contains("target_modulus")) {
        std::vector<std::string> names;
        for (const auto& m : j.at("target_modulus")) names.push_back(m.get<std::string>());
        in.target_modulus_names = names;
    }
    for (auto it = j.at("vertex_map").begin(); it != j.at("vertex_map").end(); ++it)
        in.vertex_map[it.key()] = it.value().get<std::string>();
    for (auto it = j.at("edge_map").begin(); it != j.at("edge_map").end(); ++it) {
        const auto& v = it.value();
        if (v.contains("edge")) in.edge_map[it.key()] = {true, v.at("edge").get<std::string>()};
        else if (v.contains("vertex"))
            in.edge_map[it.key()] = {false, v.at("vertex").get<std::string>()};
        else throw ParseError("edge_map entries need 'edge' or 'vertex'");
    }
    return in;
}

inline MorphismInput load_morphism_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open " + path);
    ordered_json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw ParseError(std::string("bad JSON in ") + path + ": " + e.what());
    }
    return parse_morphism_json(j);
}

}  // namespace graphjac
