#pragma once

#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "graphjac/abstract.hpp"
#include "graphjac/genjac.hpp"
#include "graphjac/jacobian.hpp"
#include "graphjac/json_io.hpp"
#include "graphjac/morphisms.hpp"
#include "graphjac/random_gen.hpp"
#include "graphjac/sheaf.hpp"

namespace graphjac {

struct GroupResult {
    std::string name;
    std::size_t free_rank = 0;
    std::vector<std::string> invariant_factors;
    std::string pretty;

    static GroupResult of(const std::string& name, const FgAbGroup& g) {
        GroupResult r;
        r.name = name;
        r.free_rank = g.free_rank();
        for (const Int& d : g.invariant_factors()) r.invariant_factors.push_back(d.get_str());
        r.pretty = g.to_string();
        return r;
    }
};

struct TheoremResult {
    std::string name;
    bool pass = false;
    std::string info;
};

struct Report {
    std::string command;
    std::vector<GroupResult> groups;
    std::vector<TheoremResult> theorems;
    std::size_t instances = 0;

    bool all_pass() const {
        for (const auto& t : theorems)
            if (!t.pass) return false;
        return true;
    }

    ordered_json to_json() const {
        ordered_json j;
        j["command"] = command;
        j["groups"] = ordered_json::array();
        for (const auto& g : groups) {
            ordered_json jg;
            jg["name"] = g.name;
            jg["free_rank"] = g.free_rank;
            jg["invariant_factors"] = g.invariant_factors;
            jg["pretty"] = g.pretty;
            j["groups"].push_back(jg);
        }
        j["theorems"] = ordered_json::array();
        for (const auto& t : theorems) {
            ordered_json jt;
            jt["name"] = t.name;
            jt["pass"] = t.pass;
            jt["info"] = t.info;
            j["theorems"].push_back(jt);
        }
        if (instances) j["instances"] = instances;
        return j;
    }

    std::string to_text() const {
        std::string s;
        for (const auto& g : groups) s += g.name + " ≅ " + g.pretty + "\n";
        for (const auto& t : theorems)
            s += std::string(t.pass ? "[ok]   " : "[FAIL] ") + t.name +
                 (t.info.empty() ? "" : "  (" + t.info + ")") + "\n";
        if (instances) s += "instances: " + std::to_string(instances) + "\n";
        return s;
    }
};

inline Report run_groups(const Graph& g, const std::optional<Modulus>& m) {
    Report rep;
    rep.command = "groups";
    JacobianContext ctx = make_jacobian_context(g);
    rep.groups.push_back(GroupResult::of("J(Γ)", ctx.jac));
    rep.groups.push_back(GroupResult::of("Cl⁰(Γ)", ctx.cl0));
    rep.groups.push_back(GroupResult::of("P(Γ)", ctx.pic));
    rep.groups.push_back(GroupResult::of("Ĉl⁰(Γ)", ctx.clhat0));
    if (m) {
        ModulusContext mc = make_modulus_context(g, *m);
        rep.groups.push_back(GroupResult::of("J_m(Γ)", mc.jm));
        rep.groups.push_back(GroupResult::of("Cl⁰_m(Γ)", mc.cl0m));
        rep.groups.push_back(GroupResult::of("P_m(Γ)", mc.pm));
        GeometricPicard gp = picard_geometric_data(g, ctx.complex);
        RigidifiedPicard rp = rigidified_picard_data(g, *m, ctx.complex, mc.pm, gp);
        rep.groups.push_back(GroupResult::of("Pic_m(|Γ|)", rp.picm));
    }
    return rep;
}

namespace detail_suites {

inline TheoremResult run_one(const std::string& name, const std::function<std::string()>& body) {
    TheoremResult t;
    t.name = name;
    try {
        t.info = body();
        t.pass = true;
    } catch (const NotConnected&) {
        throw;  // an input property, not a falsified theorem
    } catch (const Error& e) {
        t.pass = false;
        t.info = e.what();
    }
    return t;
}

inline void suite_abel(Report& rep, const Graph& g) {
    rep.theorems.push_back(run_one("abel: AJ is an isomorphism Cl⁰ ≅ J", [&] {
        JacobianContext ctx = make_jacobian_context(g);
        verify_abel(ctx);
        return ctx.jac.to_string();
    }));
}

inline void suite_abel_m(Report& rep, const Graph& g, const Modulus& m) {
    rep.theorems.push_back(
        run_one("abel-m: AJ_m is an isomorphism Cl⁰_m ≅ J_m", [&] {
            ModulusContext ctx = make_modulus_context(g, m);
            verify_abel_m(ctx);
            return ctx.jm.to_string();
        }));
}

inline void suite_diagrams(Report& rep, const Graph& g, const std::optional<Modulus>& m) {
    rep.theorems.push_back(run_one("diagrams: ι⁰ = χ∘ζ∘AJ", [&] {
        JacobianContext ctx = make_jacobian_context(g);
        verify_diagram_tower(ctx);
        return std::string();
    }));
    if (m) {
        rep.theorems.push_back(
            run_one("diagrams: ι_m = χ_m∘ζ_m∘AJ_m", [&] {
                ModulusContext ctx = make_modulus_context(g, *m);
                generalized_picard(ctx);
                return std::string();
            }));
        rep.theorems.push_back(run_one("diagrams: extension sequences", [&] {
            ModulusContext ctx = make_modulus_context(g, *m);
            ExtensionReport er = extension_sequences(ctx);
            if (!er.all_pass()) throw TheoremViolation(er.witness);
            return m->is_reduced() ? std::string() : std::string("with reduction pushout");
        }));
    }
}

inline void suite_sheaf(Report& rep, const Graph& g) {
    rep.theorems.push_back(run_one("sheaf: diff = □0, H⁰/H¹ identities", [&] {
        GraphComplex c = make_complex(g);
        GeometricPicard d = picard_geometric_data(g, c);
        verify_sheaf_identities(g, c, d);
        return std::string();
    }));
    rep.theorems.push_back(run_one("sheaf: δ̄(d♯g) = -q_*(g)", [&] {
        verify_sign_law(g);
        return std::string();
    }));
    rep.theorems.push_back(run_one("sheaf: q_*: P ≅ Pic⁰ and the -δ̄ triangle", [&] {
        JacobianContext ctx = make_jacobian_context(g);
        GeometricPicard d = picard_geometric_data(g, ctx.complex);
        GroupHom qstar = induced_hom(ctx.pic, d.pic, d.sheaves.q.edge_block());
        GroupHom qstar0 = induced_hom(ctx.pic, d.pic0, d.sheaves.q.edge_block());
        if (!qstar0.is_isomorphism())
            throw TheoremViolation("q_* is not an isomorphism P ≅ Pic⁰");
        GroupHom incl = induced_hom(ctx.clhat0, d.clhat,
                                    IntMatrix::identity(g.num_vertices()));
        GroupHom lhs = d.delta_bar.compose_after(incl.compose_after(ctx.chi));
        GroupHom rhs = induced_hom(ctx.pic, d.pic, -d.sheaves.q.edge_block());
        if (!lhs.equals(rhs)) throw TheoremViolation("-δ̄∘χ ≠ q_*");
        return d.pic.to_string();
    }));
}

inline void suite_sheaf_m(Report& rep, const Graph& g, const Modulus& m) {
    rep.theorems.push_back(run_one("sheaf-m: Pic_m ≅ (Z^V⊕Z^I)/(□0,ρᵀ)", [&] {
        ModulusContext ctx = make_modulus_context(g, m);
        GeometricPicard d = picard_geometric_data(g, ctx.base.complex);
        RigidifiedPicard rp = rigidified_picard_data(g, m, ctx.base.complex, ctx.pm, d);
        return rp.picm.to_string();
    }));
    rep.theorems.push_back(run_one("sheaf-m: δ_m(d♯g,k) = class(-g,-k)", [&] {
        ModulusContext ctx = make_modulus_context(g, m);
        GeometricPicard d = picard_geometric_data(g, ctx.base.complex);
        RigidifiedPicard rp = rigidified_picard_data(g, m, ctx.base.complex, ctx.pm, d);
        verify_sign_law_m_data(g, ctx.base.complex, rp);
        return std::string();
    }));
    rep.theorems.push_back(run_one("sheaf-m: -δ̄_m∘χ_m = (q_m)_* and Pic⁰_m ≅ P_m", [&] {
        ModulusContext ctx = make_modulus_context(g, m);
        GeometricPicard d = picard_geometric_data(g, ctx.base.complex);
        RigidifiedPicard rp = rigidified_picard_data(g, m, ctx.base.complex, ctx.pm, d);
        GroupHom incl = induced_hom(ctx.clhat0m, rp.clhatm_pres,
                                    IntMatrix::identity(g.num_vertices() + m.size()));
        GroupHom lhs = rp.delta_bar_m.compose_after(incl.compose_after(ctx.chi_m));
        GroupHom rhs = induced_hom(ctx.pm, rp.picm, -rp.qm_matrix);
        if (!lhs.equals(rhs)) throw TheoremViolation("-δ̄_m∘χ_m ≠ (q_m)_*");
        GroupHom onto0 = induced_hom(ctx.pm, rp.pic0m, rp.qm_matrix);
        if (!onto0.is_isomorphism())
            throw TheoremViolation("(q_m)_* is not an isomorphism P_m ≅ Pic⁰_m");
        return std::string();
    }));
    rep.theorems.push_back(run_one("sheaf-m: H¹(Z_m) ≅ H¹(Γ_m)", [&] {
        ModulusContext ctx = make_modulus_context(g, m);
        const GraphComplex& c = ctx.base.complex;
        const std::size_t V = g.num_vertices(), E = g.num_edges(), I = m.size();
        IntMatrix dzm(E + I, V);
        for (std::size_t v = 0; v < V; ++v) {
            for (std::size_t e = 0; e < E; ++e) dzm(e, v) = c.d(e, v);
            for (std::size_t i : m.indices_at(v)) dzm(E + i, v) = 1;
        }
        FgAbGroup h1zm = subquotient(E + I, IntMatrix::identity(E + I), dzm);
        IntMatrix dm(E + I, V + 1);
        for (std::size_t v = 0; v < V; ++v) {
            for (std::size_t e = 0; e < E; ++e) dm(e, v) = c.d(e, v);
            for (std::size_t i : m.indices_at(v)) dm(E + i, v) = 1;
        }
        for (std::size_t i = 0; i < I; ++i) dm(E + i, V) = -1;
        FgAbGroup h1gm = subquotient(E + I, IntMatrix::identity(E + I), dm);
        if (!induced_hom(h1zm, h1gm, IntMatrix::identity(E + I)).is_isomorphism())
            throw TheoremViolation("mapping fibre H¹ differs from H¹(Γ_m)");
        return std::string();
    }));
    if (m.is_reduced()) {
        rep.theorems.push_back(run_one("sheaf-m: reduced Harm' route agrees", [&] {
            ModulusContext ctx = make_modulus_context(g, m);
            GeometricPicard d = picard_geometric_data(g, ctx.base.complex);
            RigidifiedPicard rp = rigidified_picard_data(g, m, ctx.base.complex, ctx.pm, d);
            FgAbGroup red = reduced_rigidified_picard(g, m, ctx.base.complex, d.sheaves);
            if (!red.isomorphic_invariants(rp.picm))
                throw TheoremViolation("H¹(Harm') differs from the total complex");
            return std::string();
        }));
    }
}

inline void suite_ext_duality(Report& rep, const Graph& g, const Modulus& m) {
    rep.theorems.push_back(run_one("ext-duality: extension sequences", [&] {
        ModulusContext ctx = make_modulus_context(g, m);
        ExtensionReport er = extension_sequences(ctx);
        if (!er.all_pass()) throw TheoremViolation(er.witness);
        return std::string();
    }));
    rep.theorems.push_back(run_one("ext-duality: connecting map = ε·⟨AJ(ρ_*·),·⟩", [&] {
        ModulusContext ctx = make_modulus_context(g, m);
        ExtDualityReport er = ext_class_vs_aj(ctx);
        if (!er.consistent) throw TheoremViolation(er.witness);
        std::string eps = er.epsilon == 0 ? "undetermined" : (er.epsilon > 0 ? "+1" : "-1");
        return "ε = " + eps + ", pairs = " + std::to_string(er.pairs_checked);
    }));
}

inline void suite_abstract(Report& rep, const Graph& g, const Modulus& m) {
    rep.theorems.push_back(run_one("abstract: engine reproduces the direct computation", [&] {
        ModulusContext ctx = make_modulus_context(g, m);
        verify_abstract_matches_direct(ctx);
        return std::string();
    }));
}

inline void suite_functoriality(Report& rep, const GraphMorphism& f,
                                const std::optional<Modulus>& m_src,
                                const std::optional<Modulus>& m_tgt) {
    rep.theorems.push_back(run_one("functoriality: φ_* and AJ naturality", [&] {
        JacobianContext src = make_jacobian_context(f.source);
        JacobianContext tgt = make_jacobian_context(f.target);
        pushforward_cl(f, src, tgt);
        return std::string();
    }));
    rep.theorems.push_back(run_one("functoriality: φ^m on codivisor classes", [&] {
        JacobianContext src = make_jacobian_context(f.source);
        JacobianContext tgt = make_jacobian_context(f.target);
        PullbackClhatResult r = pullback_clhat(f, src, tgt);
        return "degree " + r.degree.get_str();
    }));
    if (m_src && m_tgt) {
        rep.theorems.push_back(run_one("functoriality: modulus pushforward square", [&] {
            ModulusContext src = make_modulus_context(f.source, *m_src);
            ModulusContext tgt = make_modulus_context(f.target, *m_tgt);
            FunctorialityReport r =
                modulus_functoriality(f, src, tgt, FunctorialityDirection::Pushforward);
            if (!r.pass) throw TheoremViolation(r.witness);
            return std::string();
        }));
        rep.theorems.push_back(run_one("functoriality: modulus pullback square", [&] {
            ModulusContext src = make_modulus_context(f.source, *m_src);
            ModulusContext tgt = make_modulus_context(f.target, *m_tgt);
            FunctorialityReport r =
                modulus_functoriality(f, src, tgt, FunctorialityDirection::Pullback);
            if (!r.pass) throw TheoremViolation(r.witness);
            return std::string();
        }));
    }
}

}  // namespace detail_suites

inline Report run_verify(const std::string& suite, const Graph& g,
                         const std::optional<Modulus>& m,
                         const std::optional<GraphMorphism>& f = std::nullopt,
                         const std::optional<Modulus>& m_tgt = std::nullopt) {
    Report rep;
    rep.command = "verify --suite " + suite;
    using namespace detail_suites;
    auto need_m = [&]() -> const Modulus& {
        if (!m) throw ParseError("suite '" + suite + "' needs a modulus");
        return *m;
    };
    if (suite == "abel") suite_abel(rep, g);
    else if (suite == "abel-m") suite_abel_m(rep, g, need_m());
    else if (suite == "diagrams") suite_diagrams(rep, g, m);
    else if (suite == "sheaf") suite_sheaf(rep, g);
    else if (suite == "sheaf-m") suite_sheaf_m(rep, g, need_m());
    else if (suite == "ext-duality") suite_ext_duality(rep, g, need_m());
    else if (suite == "abstract") suite_abstract(rep, g, need_m());
    else if (suite == "functoriality") {
        if (!f) throw ParseError("suite 'functoriality' needs a morphism file");
        suite_functoriality(rep, *f, m, m_tgt);
    } else throw ParseError("unknown suite: " + suite);
    return rep;
}

struct RandomOptions {
    std::uint64_t seed = 1;
    std::size_t max_v = 6;
    std::size_t count = 10;
    std::string suite = "abel";
    std::string dump_path = "failing_instance.json";
};

inline Report run_random(const RandomOptions& opt) {
    Report rep;
    rep.command = "random --seed " + std::to_string(opt.seed) + " --max-v " +
                  std::to_string(opt.max_v) + " --count " + std::to_string(opt.count) +
                  " --suite " + opt.suite;
    if (opt.max_v > 8) throw ParseError("--max-v is capped at 8 (desk scale)");
    Rng rng(opt.seed);
    for (std::size_t i = 0; i < opt.count; ++i) {
        Report inst;
        std::optional<ordered_json> dump;
        if (opt.suite == "functoriality") {
            RandomCover rc = random_harmonic_cover(rng, std::min<std::size_t>(opt.max_v, 4), 2 + rng.below(2));
            auto [ms, mt] = cover_moduli(rng, rc);
            detail_suites::suite_functoriality(inst, rc.map, ms, mt);
            ordered_json j;
            j["cover"] = graph_to_json(rc.cover, ms.names());
            j["base"] = graph_to_json(rc.base, mt.names());
            dump = j;
        } else {
            Graph g = random_connected_graph(rng, opt.max_v, 10);
            Modulus m = random_modulus(rng, g, 4);
            inst = run_verify(opt.suite, g, m);
            dump = graph_to_json(g, m.names());
        }
        for (const auto& t : inst.theorems) {
            if (!t.pass) {
                std::ofstream out(opt.dump_path);
                out << dump->dump(2) << "\n";
                Report fail;
                fail.command = rep.command;
                fail.instances = i + 1;
                fail.theorems.push_back(
                    {t.name, false, t.info + " [instance dumped to " + opt.dump_path + "]"});
                return fail;
            }
        }
        ++rep.instances;
    }
    TheoremResult ok;
    ok.name = opt.suite + " on " + std::to_string(opt.count) + " random instances";
    ok.pass = true;
    rep.theorems.push_back(ok);
    return rep;
}

}  // namespace graphjac
