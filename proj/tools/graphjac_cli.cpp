// graphjac CLI: exact Jacobian / class / Picard group computations on finite
// multigraphs with modulus, plus machine-verified theorem suites.
//
// exit codes: 0 ok, 2 parse/usage error, 3 not connected, 4 verification failed

#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graphjac/report.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else cur += c;
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::optional<graphjac::Modulus> resolve_modulus(const graphjac::GraphInput& in,
                                                 const std::string& flag) {
    std::vector<std::string> names;
    if (!flag.empty()) names = split_commas(flag);
    else if (in.modulus_names) names = *in.modulus_names;
    if (names.empty()) return std::nullopt;
    return graphjac::Modulus::build(in.graph, names);
}

void emit(const graphjac::Report& rep, bool as_json, double ms) {
    if (as_json) std::cout << rep.to_json().dump(2) << "\n";
    else std::cout << rep.to_text();
    std::cerr << "elapsed_ms " << static_cast<long>(ms) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Jacobians, class groups and Picard groups of graphs with modulus"};
    app.require_subcommand(1);

    std::string input_path, map_path, modulus_flag, suite;
    bool as_json = false;
    std::uint64_t seed = 1;
    std::size_t max_v = 6, count = 10;

    CLI::App* groups = app.add_subcommand("groups", "compute the groups of a graph (+ modulus)");
    groups->add_option("input", input_path, "graph JSON file")->required();
    groups->add_option("--modulus", modulus_flag, "comma list of vertices (repetition allowed)");
    groups->add_flag("--json", as_json, "machine-readable report");

    CLI::App* verify = app.add_subcommand("verify", "run a theorem verification suite");
    verify->add_option("--suite", suite,
                       "abel|abel-m|diagrams|sheaf|sheaf-m|ext-duality|abstract|functoriality")
        ->required();
    verify->add_option("input", input_path, "graph JSON file")->required();
    verify->add_option("map", map_path, "morphism JSON file (functoriality)");
    verify->add_option("--modulus", modulus_flag, "comma list of vertices");
    verify->add_flag("--json", as_json, "machine-readable report");

    CLI::App* random = app.add_subcommand("random", "seeded random property suite");
    random->add_option("--seed", seed, "RNG seed")->required();
    random->add_option("--max-v", max_v, "max vertices (<= 8)");
    random->add_option("--count", count, "number of instances");
    random->add_option("--suite", suite, "suite name")->required();
    random->add_flag("--json", as_json, "machine-readable report");

    CLI11_PARSE(app, argc, argv);
    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    try {
        if (groups->parsed()) {
            graphjac::GraphInput in = graphjac::load_graph_file(input_path);
            graphjac::Report rep = graphjac::run_groups(in.graph, resolve_modulus(in, modulus_flag));
            emit(rep, as_json, elapsed());
            return 0;
        }
        if (verify->parsed()) {
            graphjac::GraphInput in = graphjac::load_graph_file(input_path);
            std::optional<graphjac::GraphMorphism> f;
            std::optional<graphjac::Modulus> m_tgt;
            if (suite == "functoriality") {
                if (map_path.empty())
                    throw graphjac::ParseError("functoriality needs a morphism file");
                graphjac::MorphismInput mi = graphjac::load_morphism_file(map_path);
                f = graphjac::make_graph_morphism(in.graph, mi.target, mi.vertex_map, mi.edge_map);
                if (mi.target_modulus_names)
                    m_tgt = graphjac::Modulus::build(mi.target, *mi.target_modulus_names);
            }
            graphjac::Report rep = graphjac::run_verify(suite, in.graph,
                                                        resolve_modulus(in, modulus_flag), f, m_tgt);
            emit(rep, as_json, elapsed());
            return rep.all_pass() ? 0 : 4;
        }
        if (random->parsed()) {
            graphjac::RandomOptions opt;
            opt.seed = seed;
            opt.max_v = max_v;
            opt.count = count;
            opt.suite = suite;
            graphjac::Report rep = graphjac::run_random(opt);
            emit(rep, as_json, elapsed());
            return rep.all_pass() ? 0 : 4;
        }
    } catch (const graphjac::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const graphjac::NotConnected& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const graphjac::TheoremViolation& e) {
        std::cerr << "theorem violation: " << e.what() << "\n";
        return 4;
    } catch (const graphjac::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
