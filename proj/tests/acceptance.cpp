// Acceptance suite: one line per criterion, exact checks only.
// Exit code 0 iff every criterion passes.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "graphjac/abstract.hpp"
#include "graphjac/genjac.hpp"
#include "graphjac/jacobian.hpp"
#include "graphjac/morphisms.hpp"
#include "graphjac/random_gen.hpp"
#include "graphjac/report.hpp"
#include "graphjac/sheaf.hpp"
#include "oracles.hpp"

using namespace graphjac;

namespace {

int g_failures = 0;

void report(int n, const std::string& what, bool pass, const std::string& detail = "") {
    std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", n, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

struct Instance {
    Graph graph;
    Modulus modulus;
};

std::vector<Graph> base_suite(std::size_t count) {
    Rng rng(20240801);
    std::vector<Graph> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_connected_graph(rng, 6, 10));
    return out;
}

std::vector<Instance> modulus_suite(std::size_t count) {
    Rng rng(20240802);
    std::vector<Instance> out;
    for (std::size_t i = 0; i < count; ++i) {
        Graph g = random_connected_graph(rng, 6, 10);
        Modulus m = random_modulus(rng, g, 4);
        out.push_back(Instance{g, m});
    }
    return out;
}

}  // namespace

int main() {
    const std::vector<Graph> graphs = base_suite(200);
    const std::vector<Instance> instances = modulus_suite(100);

    // 1. matrix-tree consistency, 200 graphs, exact, under 60 s
    {
        auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::string detail;
        for (const Graph& g : graphs) {
            Int jac_order = make_jacobian_context(g).jac.order();
            Int trees(static_cast<unsigned long>(oracles::spanning_tree_count(g)));
            if (jac_order != trees) {
                ok = false;
                detail = "|J| = " + jac_order.get_str() + " vs " + trees.get_str() + " trees";
                break;
            }
        }
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (sec >= 60.0) {
            ok = false;
            detail += " (runtime " + std::to_string(sec) + " s)";
        }
        report(1, "matrix-tree: |J| equals the brute-force spanning-tree count (200 graphs)", ok,
               ok ? std::to_string(sec).substr(0, 5) + " s" : detail);
    }

    // 2. Abel's theorem on the same suite
    {
        bool ok = true;
        std::string detail;
        for (const Graph& g : graphs) {
            try {
                verify_abel(make_jacobian_context(g));
            } catch (const Error& e) {
                ok = false;
                detail = e.what();
                break;
            }
        }
        report(2, "Abel: AJ is an isomorphism Cl0 = J (200 graphs)", ok, detail);
    }

    // 3. generalized Abel on 100 (graph, modulus) pairs
    {
        bool ok = true;
        std::string detail;
        for (const Instance& in : instances) {
            try {
                ModulusContext ctx = make_modulus_context(in.graph, in.modulus);
                verify_abel_m(ctx);  // includes free_rank = |I| - 1
            } catch (const Error& e) {
                ok = false;
                detail = e.what();
                break;
            }
        }
        report(3, "generalized Abel: AJ_m iso and rk J_m = |I|-1 (100 instances)", ok, detail);
    }

    // 4. the worked triangle instance
    {
        bool ok = true;
        std::string detail;
        try {
            Graph t = fixtures::triangle();
            ModulusContext ctx = make_modulus_context(t, Modulus::build(t, {"w1", "w2"}));
            if (ctx.jm.to_string() != "Z") {
                ok = false;
                detail = "J_m = " + ctx.jm.to_string();
            }
            Vec c{Int(2), Int(0), Int(1)};  // the witness 2*w1 + v
            Vec div = ctx.base.complex.lap0 * c;
            if (div != Vec{Int(3), Int(-3), Int(0)}) ok = false;
            Vec amb{Int(-3), Int(0), Int(2), Int(0)};  // 3(w1-w2) + 2 i1 in Cl0_m coordinates
            if (!ctx.cl0m.project(amb).is_zero()) {
                ok = false;
                detail = "relation 3(w1-w2) + 2 i1 does not vanish";
            }
        } catch (const Error& e) {
            ok = false;
            detail = e.what();
        }
        report(4, "triangle with m = w1+w2: J_m = Z and 3(w1-w2) + 2 i1 = 0", ok, detail);
    }

    // 5. diagram towers on both suites
    {
        bool ok = true;
        std::string detail;
        for (const Graph& g : graphs) {
            try {
                verify_diagram_tower(make_jacobian_context(g));
            } catch (const Error& e) {
                ok = false;
                detail = e.what();
                break;
            }
        }
        if (ok) {
            for (const Instance& in : instances) {
                try {
                    generalized_picard(make_modulus_context(in.graph, in.modulus));
                } catch (const Error& e) {
                    ok = false;
                    detail = e.what();
                    break;
                }
            }
        }
        report(5, "diagram towers: iota = chi o zeta o AJ, with and without modulus", ok, detail);
    }

    // 6. duality: perfect J x P pairing and Ha1#/Ha1 = J
    {
        bool ok = true;
        std::string detail;
        std::size_t done = 0;
        for (const Graph& g : graphs) {
            if (done++ >= 60) break;
            try {
                JacobianContext ctx = make_jacobian_context(g);
                if (auto w = pairing_perfection_failure(ctx)) {
                    ok = false;
                    detail = *w;
                    break;
                }
                if (ctx.W.cols() > 0) {
                    DiscriminantGroup d = discriminant_group(ctx.W, ctx.W.transpose() * ctx.W);
                    if (!d.group.isomorphic_invariants(ctx.jac)) {
                        ok = false;
                        detail = "Ha1#/Ha1 = " + d.group.to_string() + " vs J = " +
                                 ctx.jac.to_string();
                        break;
                    }
                    if (auto w = discriminant_autoduality_failure(d)) {
                        ok = false;
                        detail = *w;
                        break;
                    }
                }
            } catch (const Error& e) {
                ok = false;
                detail = e.what();
                break;
            }
        }
        report(6, "duality: J x P pairing perfect, Ha1#/Ha1 = J (60 graphs)", ok, detail);
    }

    // 7. sheaf side: identities and both sign laws
    {
        bool ok = true;
        std::string detail;
        std::size_t done = 0;
        for (const Graph& g : graphs) {
            if (done++ >= 60) break;
            try {
                GraphComplex c = make_complex(g);
                GeometricPicard d = picard_geometric_data(g, c);
                verify_sheaf_identities(g, c, d);
                if (!d.pic.isomorphic_invariants(d.clhat))
                    throw TheoremViolation("H1(Harm) differs from coker box0");
                verify_sign_law(g);
            } catch (const Error& e) {
                ok = false;
                detail = e.what();
                break;
            }
        }
        if (ok) {
            done = 0;
            for (const Instance& in : instances) {
                if (done++ >= 40) break;
                try {
                    ModulusContext ctx = make_modulus_context(in.graph, in.modulus);
                    GeometricPicard d = picard_geometric_data(in.graph, ctx.base.complex);
                    RigidifiedPicard rp =
                        rigidified_picard_data(in.graph, in.modulus, ctx.base.complex, ctx.pm, d);
                    verify_sign_law_m_data(in.graph, ctx.base.complex, rp);
                } catch (const Error& e) {
                    ok = false;
                    detail = e.what();
                    break;
                }
            }
        }
        report(7, "sheaves: diff = box0, H0(Omega) = Ha1, H1(Omega) = Z, both sign laws", ok,
               detail);
    }

    // 8. Ext-class duality with one global sign across the whole suite
    {
        bool ok = true;
        std::string detail;
        int global_eps = 0;
        std::size_t pairs = 0;
        for (const Instance& in : instances) {
            try {
                ModulusContext ctx = make_modulus_context(in.graph, in.modulus);
                ExtDualityReport er = ext_class_vs_aj(ctx);
                pairs += er.pairs_checked;
                if (!er.consistent) {
                    ok = false;
                    detail = er.witness;
                    break;
                }
                if (er.epsilon != 0) {
                    if (global_eps == 0) global_eps = er.epsilon;
                    else if (global_eps != er.epsilon) {
                        ok = false;
                        detail = "sign flips between instances";
                        break;
                    }
                }
            } catch (const Error& e) {
                ok = false;
                detail = e.what();
                break;
            }
        }
        if (ok)
            detail = std::string("epsilon = ") +
                     (global_eps > 0 ? "+1" : global_eps < 0 ? "-1" : "undetermined") +
                     ", pairs = " + std::to_string(pairs);
        report(8, "Ext class of 0 -> Z^I/Z -> P_m -> P -> 0 equals eps*(AJ o rho_*) pairing", ok,
               detail);
    }

    // 9. abstract engine reproduces the direct computation instance-by-instance
    {
        bool ok = true;
        std::string detail;
        for (const Instance& in : instances) {
            try {
                verify_abstract_matches_direct(make_modulus_context(in.graph, in.modulus));
            } catch (const Error& e) {
                ok = false;
                detail = e.what();
                break;
            }
        }
        report(9, "abstract engine: graph instantiation reproduces groups and homs (100x)", ok,
               detail);
    }

    // 10. functoriality fixtures plus 20 random harmonic covers
    {
        bool ok = true;
        std::string detail;
        try {
            // C4 -> C2 cover
            Graph c4 = fixtures::cycle(4), c2 = fixtures::c2();
            std::map<std::string, std::string> vm{{"x0", "u"}, {"x1", "v"}, {"x2", "u"}, {"x3", "v"}};
            std::map<std::string, std::pair<bool, std::string>> em{{"a0", {true, "e1"}},
                                                                   {"a1", {true, "e2"}},
                                                                   {"a2", {true, "e1"}},
                                                                   {"a3", {true, "e2"}}};
            GraphMorphism f = make_graph_morphism(c4, c2, vm, em);
            JacobianContext sj = make_jacobian_context(c4), tj = make_jacobian_context(c2);
            pushforward_cl(f, sj, tj);
            pullback_clhat(f, sj, tj);
            pullback_harmonic(f, sj, tj);
            ModulusContext sm = make_modulus_context(c4, Modulus::build(c4, {"x0", "x2"}));
            ModulusContext tm = make_modulus_context(c2, Modulus::build(c2, {"u"}));
            if (!modulus_functoriality(f, sm, tm, FunctorialityDirection::Pushforward).pass)
                throw TheoremViolation("C4->C2 pushforward");
            if (!modulus_functoriality(f, sm, tm, FunctorialityDirection::Pullback).pass)
                throw TheoremViolation("C4->C2 pullback");

            // B2 -> K2 collapse of parallel edges
            Graph b2 = fixtures::banana(2);
            Graph k2 = Graph::build({"u", "v"}, {{"e", "u", "v"}});
            GraphMorphism h = make_graph_morphism(
                b2, k2, {{"u", "u"}, {"v", "v"}}, {{"b0", {true, "e"}}, {"b1", {true, "e"}}});
            JacobianContext sb = make_jacobian_context(b2), tb = make_jacobian_context(k2);
            pushforward_cl(h, sb, tb);
            if (pullback_clhat(h, sb, tb).degree != 2)
                throw TheoremViolation("B2->K2 degree is not 2");

            Rng rng(20240803);
            for (int i = 0; i < 20; ++i) {
                RandomCover rc = random_harmonic_cover(rng, 4, 2 + rng.below(2));
                auto [ms, mt] = cover_moduli(rng, rc);
                ModulusContext src = make_modulus_context(rc.cover, ms);
                ModulusContext tgt = make_modulus_context(rc.base, mt);
                pushforward_cl(rc.map, src.base, tgt.base);
                pullback_clhat(rc.map, src.base, tgt.base);
                if (!modulus_functoriality(rc.map, src, tgt, FunctorialityDirection::Pushforward)
                         .pass)
                    throw TheoremViolation("random cover pushforward, instance " +
                                           std::to_string(i));
                if (!modulus_functoriality(rc.map, src, tgt, FunctorialityDirection::Pullback)
                         .pass)
                    throw TheoremViolation("random cover pullback, instance " + std::to_string(i));
            }
        } catch (const Error& e) {
            ok = false;
            detail = e.what();
        }
        report(10, "functoriality: C4->C2, B2->K2 and 20 random harmonic covers", ok, detail);
    }

    // 11. determinism: byte-identical JSON reports for identical seeds
    {
        bool ok = true;
        std::string detail;
        try {
            for (const std::string& suite : {std::string("abel-m"), std::string("sheaf-m"),
                                             std::string("functoriality")}) {
                RandomOptions opt;
                opt.seed = 424242;
                opt.max_v = 5;
                opt.count = 4;
                opt.suite = suite;
                std::string a = run_random(opt).to_json().dump(2);
                std::string b = run_random(opt).to_json().dump(2);
                if (a != b) {
                    ok = false;
                    detail = "suite " + suite + " differs between runs";
                    break;
                }
            }
        } catch (const Error& e) {
            ok = false;
            detail = e.what();
        }
        report(11, "determinism: identical seeds give byte-identical JSON reports", ok, detail);
    }

    if (g_failures) std::printf("%d criterion(s) FAILED\n", g_failures);
    else std::printf("all 11 acceptance criteria passed\n");
    return g_failures ? 1 : 0;
}
