#include <doctest.h>

#include "fixtures.hpp"
#include "graphjac/morphisms.hpp"
#include "graphjac/random_gen.hpp"

using namespace graphjac;

namespace {

GraphMorphism identity_morphism(const Graph& g) {
    std::map<std::string, std::string> vm;
    std::map<std::string, std::pair<bool, std::string>> em;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) vm[g.vertex_name(v)] = g.vertex_name(v);
    for (std::size_t e = 0; e < g.num_edges(); ++e) em[g.edge(e).id] = {true, g.edge(e).id};
    return make_graph_morphism(g, g, vm, em);
}

// the double cover C_{2n} -> C_n folding alternately
GraphMorphism cycle_cover(std::size_t n) {
    Graph big = fixtures::cycle(2 * n), small = fixtures::cycle(n);
    std::map<std::string, std::string> vm;
    std::map<std::string, std::pair<bool, std::string>> em;
    for (std::size_t i = 0; i < 2 * n; ++i)
        vm["x" + std::to_string(i)] = "x" + std::to_string(i % n);
    for (std::size_t i = 0; i < 2 * n; ++i)
        em["a" + std::to_string(i)] = {true, "a" + std::to_string(i % n)};
    return make_graph_morphism(big, small, vm, em);
}

// C4 -> C2: x0,x2 -> u; x1,x3 -> v; edges alternate between e1: u->v, e2: v->u
GraphMorphism c4_to_c2() {
    Graph c4 = fixtures::cycle(4), c2 = fixtures::c2();
    std::map<std::string, std::string> vm{{"x0", "u"}, {"x1", "v"}, {"x2", "u"}, {"x3", "v"}};
    std::map<std::string, std::pair<bool, std::string>> em{{"a0", {true, "e1"}},
                                                           {"a1", {true, "e2"}},
                                                           {"a2", {true, "e1"}},
                                                           {"a3", {true, "e2"}}};
    return make_graph_morphism(c4, c2, vm, em);
}

// B2 -> K2 collapsing the two parallel edges onto one
GraphMorphism b2_to_k2() {
    Graph b2 = fixtures::banana(2);
    Graph k2 = Graph::build({"u", "v"}, {{"e", "u", "v"}});
    std::map<std::string, std::string> vm{{"u", "u"}, {"v", "v"}};
    std::map<std::string, std::pair<bool, std::string>> em{{"b0", {true, "e"}},
                                                           {"b1", {true, "e"}}};
    return make_graph_morphism(b2, k2, vm, em);
}

// banana-with-loop -> banana, the loop genuinely collapsed to a vertex
GraphMorphism collapse_fixture() {
    Graph src = Graph::build({"a", "b"}, {{"e", "a", "b"}, {"f", "a", "b"}, {"g", "a", "a"}});
    Graph tgt = fixtures::banana(2);
    std::map<std::string, std::string> vm{{"a", "u"}, {"b", "v"}};
    std::map<std::string, std::pair<bool, std::string>> em{
        {"e", {true, "b0"}}, {"f", {true, "b1"}}, {"g", {false, "u"}}};
    return make_graph_morphism(src, tgt, vm, em);
}

}  // namespace

TEST_CASE("harmonic multiplicities") {
    {
        std::vector<Int> m = harmonic_multiplicities(identity_morphism(fixtures::cycle(3)));
        for (const Int& x : m) CHECK(x == 1);
    }
    {
        std::vector<Int> m = harmonic_multiplicities(c4_to_c2());
        for (const Int& x : m) CHECK(x == 1);
    }
    {
        std::vector<Int> m = harmonic_multiplicities(b2_to_k2());
        for (const Int& x : m) CHECK(x == 2);
    }
    {
        std::vector<Int> m = harmonic_multiplicities(collapse_fixture());
        for (const Int& x : m) CHECK(x == 1);
    }
    {
        // e1 -> e1, e2 -> e1 on the 2-banana is not harmonic (fibres 0 and 2)
        Graph b2 = fixtures::banana(2);
        std::map<std::string, std::string> vm{{"u", "u"}, {"v", "v"}};
        std::map<std::string, std::pair<bool, std::string>> em{{"b0", {true, "b0"}},
                                                               {"b1", {true, "b0"}}};
        GraphMorphism bad = make_graph_morphism(b2, b2, vm, em);
        CHECK_THROWS_AS(harmonic_multiplicities(bad), NotHarmonicAt);
    }
}

TEST_CASE("morphism validation") {
    Graph b2 = fixtures::banana(2);
    Graph k2 = Graph::build({"u", "v"}, {{"e", "u", "v"}});
    std::map<std::string, std::string> vm{{"u", "v"}, {"v", "u"}};  // reverses orientation
    std::map<std::string, std::pair<bool, std::string>> em{{"b0", {true, "e"}},
                                                           {"b1", {true, "e"}}};
    CHECK_THROWS_AS(make_graph_morphism(b2, k2, vm, em), Error);
}

TEST_CASE("pushforward on class groups") {
    {
        GraphMorphism f = c4_to_c2();
        JacobianContext src = make_jacobian_context(f.source);
        JacobianContext tgt = make_jacobian_context(f.target);
        PushforwardResult r = pushforward_cl(f, src, tgt);
        CHECK(src.cl0.order() == 4);
        CHECK(tgt.cl0.order() == 2);
        CHECK(r.cl0.is_surjective());
        CHECK(r.on_jac.is_surjective());
    }
    {
        GraphMorphism f = identity_morphism(fixtures::complete4());
        JacobianContext ctx = make_jacobian_context(f.source);
        PushforwardResult r = pushforward_cl(f, ctx, ctx);
        CHECK(r.cl0.equals(GroupHom::identity(ctx.cl0)));
    }
    {
        GraphMorphism f = b2_to_k2();
        JacobianContext src = make_jacobian_context(f.source);
        JacobianContext tgt = make_jacobian_context(f.target);
        PushforwardResult r = pushforward_cl(f, src, tgt);
        CHECK(tgt.cl0.is_trivial());
        CHECK(r.cl0.is_zero());
    }
}

TEST_CASE("pullback on codivisor class groups") {
    {
        GraphMorphism f = identity_morphism(fixtures::cycle(3));
        JacobianContext ctx = make_jacobian_context(f.source);
        PullbackClhatResult r = pullback_clhat(f, ctx, ctx);
        CHECK(r.degree == 1);
        CHECK(r.clhat.equals(GroupHom::identity(ctx.clhat)));
    }
    {
        GraphMorphism f = c4_to_c2();
        JacobianContext src = make_jacobian_context(f.source);
        JacobianContext tgt = make_jacobian_context(f.target);
        PullbackClhatResult r = pullback_clhat(f, src, tgt);
        CHECK(r.degree == 2);  // the degree part of Clhat/Clhat0 multiplies by 2
    }
    {
        GraphMorphism f = b2_to_k2();
        JacobianContext src = make_jacobian_context(f.source);
        JacobianContext tgt = make_jacobian_context(f.target);
        CHECK(pullback_clhat(f, src, tgt).degree == 2);
    }
}

TEST_CASE("pullback of harmonic forms") {
    {
        GraphMorphism f = c4_to_c2();
        JacobianContext src = make_jacobian_context(f.source);
        JacobianContext tgt = make_jacobian_context(f.target);
        IntMatrix r = pullback_harmonic(f, src, tgt);
        REQUIRE(r.rows() == 1);
        REQUIRE(r.cols() == 1);
        CHECK(int_abs(r(0, 0)) == 1);
        // the pulled-back form is (±1,±1,±1,±1)
        IntMatrix pulled = src.W * r;
        for (std::size_t e = 0; e < 4; ++e) CHECK(int_abs(pulled(e, 0)) == 1);
    }
    {
        GraphMorphism f = b2_to_k2();
        JacobianContext src = make_jacobian_context(f.source);
        JacobianContext tgt = make_jacobian_context(f.target);
        IntMatrix r = pullback_harmonic(f, src, tgt);
        CHECK(r.cols() == 0);  // Ha¹(K2) = 0
    }
    {
        // collapsed edges contribute zero rows
        GraphMorphism f = collapse_fixture();
        IntMatrix pull = edge_pushforward_matrix(f).transpose();
        Vec w{Int(1), Int(-1)};
        Vec pulled = pull * w;
        CHECK(pulled[2] == 0);  // the loop's row
        JacobianContext src = make_jacobian_context(f.source);
        JacobianContext tgt = make_jacobian_context(f.target);
        CHECK_NOTHROW(pullback_harmonic(f, src, tgt));
    }
}

TEST_CASE("multiplicities are multiplicative along the C8 -> C4 -> C2 tower") {
    GraphMorphism f = cycle_cover(4);  // C8 -> C4
    GraphMorphism g = cycle_cover(2);  // C4 -> C2
    GraphMorphism gf = compose_morphisms(g, f);
    std::vector<Int> mf = harmonic_multiplicities(f);
    std::vector<Int> mg = harmonic_multiplicities(g);
    std::vector<Int> mgf = harmonic_multiplicities(gf);
    for (std::size_t v = 0; v < f.source.num_vertices(); ++v)
        CHECK(mgf[v] == mf[v] * mg[f.fv(v)]);
}

TEST_CASE("ambient adjointness of the multiplicity maps") {
    GraphMorphism f = b2_to_k2();
    std::vector<Int> mult = harmonic_multiplicities(f);
    IntMatrix fm = multiplicity_pushforward_matrix(f, mult);
    for (std::size_t v = 0; v < f.source.num_vertices(); ++v)
        for (std::size_t w = 0; w < f.target.num_vertices(); ++w) {
            Vec x(f.source.num_vertices(), Int(0)), y(f.target.num_vertices(), Int(0));
            x[v] = 1;
            y[w] = 1;
            CHECK(dot(fm * x, y) == dot(x, fm.transpose() * y));
        }
}

TEST_CASE("modulus functoriality: identity morphism") {
    Graph c3 = fixtures::cycle(3);
    GraphMorphism f = identity_morphism(c3);
    Modulus m = Modulus::build(c3, {"x0", "x1"});
    ModulusContext ctx = make_modulus_context(c3, m);
    CHECK(modulus_functoriality(f, ctx, ctx, FunctorialityDirection::Pushforward).pass);
    CHECK(modulus_functoriality(f, ctx, ctx, FunctorialityDirection::Pullback).pass);
}

TEST_CASE("modulus functoriality on the C4 -> C2 cover") {
    GraphMorphism f = c4_to_c2();
    Modulus ms = Modulus::build(f.source, {"x0", "x2"});  // φ⁻¹(u)
    Modulus mt = Modulus::build(f.target, {"u"});
    ModulusContext src = make_modulus_context(f.source, ms);
    ModulusContext tgt = make_modulus_context(f.target, mt);
    FunctorialityReport push =
        modulus_functoriality(f, src, tgt, FunctorialityDirection::Pushforward);
    CHECK(push.pass);
    FunctorialityReport pull =
        modulus_functoriality(f, src, tgt, FunctorialityDirection::Pullback);
    CHECK(pull.pass);
}

TEST_CASE("modulus functoriality preconditions") {
    GraphMorphism f = c4_to_c2();
    // S misses x2 although φ(x2) = u ∈ S': pullback precondition fails
    Modulus ms = Modulus::build(f.source, {"x0"});
    Modulus mt = Modulus::build(f.target, {"u"});
    ModulusContext src = make_modulus_context(f.source, ms);
    ModulusContext tgt = make_modulus_context(f.target, mt);
    CHECK_THROWS_AS(modulus_functoriality(f, src, tgt, FunctorialityDirection::Pullback),
                    PreconditionViolated);
    // pushforward needs φ(S) ⊆ S': take S = {x1} with φ(x1) = v ∉ S'
    Modulus ms2 = Modulus::build(f.source, {"x1"});
    ModulusContext src2 = make_modulus_context(f.source, ms2);
    CHECK_THROWS_AS(modulus_functoriality(f, src2, tgt, FunctorialityDirection::Pushforward),
                    PreconditionViolated);
}

TEST_CASE("non-reduced moduli are reduced before functoriality checks") {
    GraphMorphism f = c4_to_c2();
    Modulus msnr = Modulus::build(f.source, {"x0", "x0", "x2"});
    Modulus mtnr = Modulus::build(f.target, {"u", "u"});
    ModulusContext src = make_modulus_context(f.source, msnr);
    ModulusContext tgt = make_modulus_context(f.target, mtnr);
    FunctorialityReport push =
        modulus_functoriality(f, src, tgt, FunctorialityDirection::Pushforward);
    CHECK(push.pass);
    CHECK(push.witness == "checked on the reduced moduli");
    CHECK(modulus_functoriality(f, src, tgt, FunctorialityDirection::Pullback).pass);
}

TEST_CASE("random harmonic covers pass both squares") {
    Rng rng(555);
    for (int i = 0; i < 5; ++i) {
        RandomCover rc = random_harmonic_cover(rng, 4, 2);
        CHECK(rc.cover.is_connected());
        auto [ms, mt] = cover_moduli(rng, rc);
        ModulusContext src = make_modulus_context(rc.cover, ms);
        ModulusContext tgt = make_modulus_context(rc.base, mt);
        CHECK(modulus_functoriality(rc.map, src, tgt, FunctorialityDirection::Pushforward).pass);
        CHECK(modulus_functoriality(rc.map, src, tgt, FunctorialityDirection::Pullback).pass);
    }
}
