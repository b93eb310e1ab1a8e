#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphjac/abelian.hpp"
#include "graphjac/complexes.hpp"
#include "graphjac/graph.hpp"

namespace graphjac {

// Sheaf on the geometric realization |Γ|, constant on open edges: stalk
// lattices per vertex and per open edge, with restriction maps
// ξ0_e: F_{o(e)} -> F_e and ξ1_e: F_{t(e)} -> F_e.
struct CellularSheaf {
    Graph graph;
    std::vector<std::size_t> vertex_rank, edge_rank;
    std::vector<IntMatrix> xi0, xi1;

    std::vector<std::size_t> voff, eoff;
    std::size_t vtotal = 0, etotal = 0;
};

inline CellularSheaf make_cellular_sheaf(const Graph& g, std::vector<std::size_t> vrank,
                                         std::vector<std::size_t> erank,
                                         std::vector<IntMatrix> xi0, std::vector<IntMatrix> xi1) {
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
        if (g.degree(v) == 0)
            throw IsolatedVertex("cellular sheaves require no isolated vertices (" +
                                 g.vertex_name(v) + ")");
    CellularSheaf s;
    s.graph = g;
    s.vertex_rank = std::move(vrank);
    s.edge_rank = std::move(erank);
    s.xi0 = std::move(xi0);
    s.xi1 = std::move(xi1);
    if (s.vertex_rank.size() != g.num_vertices() || s.edge_rank.size() != g.num_edges() ||
        s.xi0.size() != g.num_edges() || s.xi1.size() != g.num_edges())
        throw Error("cellular sheaf: size mismatch");
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        if (s.xi0[e].rows() != s.edge_rank[e] || s.xi0[e].cols() != s.vertex_rank[g.edge(e).o] ||
            s.xi1[e].rows() != s.edge_rank[e] || s.xi1[e].cols() != s.vertex_rank[g.edge(e).t])
            throw Error("cellular sheaf: restriction map shape mismatch at edge " + g.edge(e).id);
    }
    s.voff.resize(g.num_vertices());
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        s.voff[v] = s.vtotal;
        s.vtotal += s.vertex_rank[v];
    }
    s.eoff.resize(g.num_edges());
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        s.eoff[e] = s.etotal;
        s.etotal += s.edge_rank[e];
    }
    return s;
}

// Čech differential ⊕_v F_v -> ⊕_e F_e, b_e = ξ1_e(a_{t(e)}) - ξ0_e(a_{o(e)}).
inline IntMatrix cech_matrix(const CellularSheaf& s) {
    IntMatrix d(s.etotal, s.vtotal);
    const Graph& g = s.graph;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        std::size_t o = g.edge(e).o, t = g.edge(e).t;
        for (std::size_t i = 0; i < s.edge_rank[e]; ++i) {
            for (std::size_t j = 0; j < s.vertex_rank[t]; ++j)
                d(s.eoff[e] + i, s.voff[t] + j) += s.xi1[e](i, j);
            for (std::size_t j = 0; j < s.vertex_rank[o]; ++j)
                d(s.eoff[e] + i, s.voff[o] + j) -= s.xi0[e](i, j);
        }
    }
    return d;
}

struct CechCohomology {
    FgAbGroup h0, h1;
};

inline CechCohomology cech_cohomology(const CellularSheaf& s) {
    IntMatrix d = cech_matrix(s);
    CechCohomology c;
    c.h0 = subquotient(s.vtotal, kernel_basis(d), IntMatrix(s.vtotal, 0));
    c.h1 = subquotient(s.etotal, IntMatrix::identity(s.etotal), d);
    return c;
}

// Morphism of cellular sheaves: stalk maps commuting with both restrictions.
struct SheafMap {
    CellularSheaf source, target;
    std::vector<IntMatrix> vmap, emap;

    IntMatrix vertex_block() const {
        IntMatrix m(target.vtotal, source.vtotal);
        for (std::size_t v = 0; v < source.graph.num_vertices(); ++v)
            for (std::size_t i = 0; i < target.vertex_rank[v]; ++i)
                for (std::size_t j = 0; j < source.vertex_rank[v]; ++j)
                    m(target.voff[v] + i, source.voff[v] + j) = vmap[v](i, j);
        return m;
    }

    IntMatrix edge_block() const {
        IntMatrix m(target.etotal, source.etotal);
        for (std::size_t e = 0; e < source.graph.num_edges(); ++e)
            for (std::size_t i = 0; i < target.edge_rank[e]; ++i)
                for (std::size_t j = 0; j < source.edge_rank[e]; ++j)
                    m(target.eoff[e] + i, source.eoff[e] + j) = emap[e](i, j);
        return m;
    }
};

inline SheafMap make_sheaf_map(const CellularSheaf& src, const CellularSheaf& tgt,
                               std::vector<IntMatrix> vmap, std::vector<IntMatrix> emap) {
    SheafMap m;
    m.source = src;
    m.target = tgt;
    m.vmap = std::move(vmap);
    m.emap = std::move(emap);
    const Graph& g = src.graph;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        std::size_t o = g.edge(e).o, t = g.edge(e).t;
        if (tgt.xi0[e] * m.vmap[o] != m.emap[e] * src.xi0[e])
            throw Error("sheaf map: ξ0 square does not commute at edge " + g.edge(e).id);
        if (tgt.xi1[e] * m.vmap[t] != m.emap[e] * src.xi1[e])
            throw Error("sheaf map: ξ1 square does not commute at edge " + g.edge(e).id);
    }
    return m;
}

// Half-edge bookkeeping. Each edge contributes (e,0) at o(e) and (e,1) at
// t(e); loops contribute both at the same vertex.
struct HalfEdges {
    std::vector<std::vector<std::pair<std::size_t, int>>> at;  // per vertex
    std::vector<std::size_t> pos0, pos1;                       // slot of (e,0)/(e,1) in at[]

    static HalfEdges build(const Graph& g) {
        HalfEdges h;
        h.at.resize(g.num_vertices());
        h.pos0.resize(g.num_edges());
        h.pos1.resize(g.num_edges());
        for (std::size_t e = 0; e < g.num_edges(); ++e) {
            h.pos0[e] = h.at[g.edge(e).o].size();
            h.at[g.edge(e).o].emplace_back(e, 0);
            h.pos1[e] = h.at[g.edge(e).t].size();
            h.at[g.edge(e).t].emplace_back(e, 1);
        }
        return h;
    }
};

// The standard sheaves of the theory. Stalk encodings:
//   PL_v   = Z ⊕ Z^{H(v)}   (value at v, slope per half-edge w.r.t. distance from v)
//   PL_e   = Z^2            (a, b) meaning a + b·x along the edge coordinate
//   ξ0_e(a,b•) = (a, b_h),  ξ1_e(a,b•) = (a + b_h, -b_h)
//   Harm_v = { Σ_h b_h = 0 } ⊆ PL_v ;  Ω_v = ker(signed sum) ⊆ Z^{H(v)}, Ω_e = Z
// The incoming derivative along a half-edge is -b_h.
struct StandardSheaves {
    HalfEdges half;
    CellularSheaf pl, harm, omega, const_z, vertex_z;
    std::vector<IntMatrix> harm_basis;   // S_v : PL_v coords of the Harm_v basis
    std::vector<IntMatrix> omega_basis;  // T_v : Z^{H(v)} coords of the Ω_v basis
    SheafMap incl_harm;  // Harm -> PL
    SheafMap diff;       // PL -> ⊕ v_* Z, germ ↦ sum of incoming derivatives
    SheafMap ediff;      // Harm -> Ω, edge derivative
    SheafMap q;          // Z -> Harm

    // value functional of a Harm germ at v, in Harm_v coordinates
    IntMatrix harm_eval_row(std::size_t v) const {
        IntMatrix r(1, harm.vertex_rank[v]);
        for (std::size_t j = 0; j < harm.vertex_rank[v]; ++j) r(0, j) = harm_basis[v](0, j);
        return r;
    }
};

inline StandardSheaves build_standard_sheaves(const Graph& g) {
    StandardSheaves s;
    s.half = HalfEdges::build(g);
    const std::size_t V = g.num_vertices(), E = g.num_edges();

    std::vector<std::size_t> deg(V);
    for (std::size_t v = 0; v < V; ++v) deg[v] = g.degree(v);

    // PL
    {
        std::vector<std::size_t> vr(V), er(E, 2);
        for (std::size_t v = 0; v < V; ++v) vr[v] = 1 + deg[v];
        std::vector<IntMatrix> x0(E), x1(E);
        for (std::size_t e = 0; e < E; ++e) {
            std::size_t o = g.edge(e).o, t = g.edge(e).t;
            IntMatrix m0(2, 1 + deg[o]);
            m0(0, 0) = 1;
            m0(1, 1 + s.half.pos0[e]) = 1;
            IntMatrix m1(2, 1 + deg[t]);
            m1(0, 0) = 1;
            m1(0, 1 + s.half.pos1[e]) = 1;
            m1(1, 1 + s.half.pos1[e]) = -1;
            x0[e] = m0;
            x1[e] = m1;
        }
        s.pl = make_cellular_sheaf(g, vr, er, x0, x1);
    }

    // Harm ⊆ PL
    {
        s.harm_basis.resize(V);
        std::vector<std::size_t> vr(V), er(E, 2);
        for (std::size_t v = 0; v < V; ++v) {
            IntMatrix row(1, 1 + deg[v]);
            for (std::size_t h = 0; h < deg[v]; ++h) row(0, 1 + h) = 1;
            s.harm_basis[v] = kernel_basis(row);
            vr[v] = s.harm_basis[v].cols();
        }
        std::vector<IntMatrix> x0(E), x1(E);
        for (std::size_t e = 0; e < E; ++e) {
            x0[e] = s.pl.xi0[e] * s.harm_basis[g.edge(e).o];
            x1[e] = s.pl.xi1[e] * s.harm_basis[g.edge(e).t];
        }
        s.harm = make_cellular_sheaf(g, vr, er, x0, x1);
    }

    // Ω: kernel of the signed sum (+ on t-halves, - on o-halves)
    {
        s.omega_basis.resize(V);
        std::vector<std::size_t> vr(V), er(E, 1);
        for (std::size_t v = 0; v < V; ++v) {
            IntMatrix row(1, deg[v]);
            for (std::size_t h = 0; h < deg[v]; ++h)
                row(0, h) = s.half.at[v][h].second == 1 ? 1 : -1;
            s.omega_basis[v] = kernel_basis(row);
            vr[v] = s.omega_basis[v].cols();
        }
        std::vector<IntMatrix> x0(E), x1(E);
        for (std::size_t e = 0; e < E; ++e) {
            std::size_t o = g.edge(e).o, t = g.edge(e).t;
            IntMatrix sel0(1, deg[o]);
            sel0(0, s.half.pos0[e]) = 1;
            IntMatrix sel1(1, deg[t]);
            sel1(0, s.half.pos1[e]) = 1;
            x0[e] = sel0 * s.omega_basis[o];
            x1[e] = sel1 * s.omega_basis[t];
        }
        s.omega = make_cellular_sheaf(g, vr, er, x0, x1);
    }

    // constant sheaf and the vertex skyscraper ⊕ v_* Z
    {
        std::vector<IntMatrix> x0(E, IntMatrix::identity(1)), x1(E, IntMatrix::identity(1));
        s.const_z = make_cellular_sheaf(g, std::vector<std::size_t>(V, 1),
                                        std::vector<std::size_t>(E, 1), x0, x1);
        std::vector<IntMatrix> z0(E, IntMatrix(0, 1)), z1(E, IntMatrix(0, 1));
        s.vertex_z = make_cellular_sheaf(g, std::vector<std::size_t>(V, 1),
                                         std::vector<std::size_t>(E, 0), z0, z1);
    }

    // Harm -> PL inclusion
    {
        std::vector<IntMatrix> em(E, IntMatrix::identity(2));
        s.incl_harm = make_sheaf_map(s.harm, s.pl, s.harm_basis, em);
    }

    // diff: sum of incoming derivatives, = -Σ_h b_h
    {
        std::vector<IntMatrix> vm(V), em(E, IntMatrix(0, 2));
        for (std::size_t v = 0; v < V; ++v) {
            IntMatrix m(1, 1 + deg[v]);
            for (std::size_t h = 0; h < deg[v]; ++h) m(0, 1 + h) = -1;
            vm[v] = m;
        }
        s.diff = make_sheaf_map(s.pl, s.vertex_z, vm, em);
    }

    // ediff: Harm -> Ω, slope data (+ on o-halves, - on t-halves)
    {
        std::vector<IntMatrix> vm(V), em(E);
        for (std::size_t v = 0; v < V; ++v) {
            IntMatrix dpl(deg[v], 1 + deg[v]);
            for (std::size_t h = 0; h < deg[v]; ++h)
                dpl(h, 1 + h) = s.half.at[v][h].second == 0 ? 1 : -1;
            IntMatrix img = dpl * s.harm_basis[v];
            SnfSolver t(s.omega_basis[v]);
            IntMatrix x(s.omega.vertex_rank[v], s.harm.vertex_rank[v]);
            for (std::size_t j = 0; j < img.cols(); ++j) {
                std::optional<Vec> c = t.solve(img.col(j));
                if (!c) throw Error("ediff: slope data leaves Ω at " + g.vertex_name(v));
                x.set_col(j, *c);
            }
            vm[v] = x;
        }
        for (std::size_t e = 0; e < E; ++e) {
            IntMatrix m(1, 2);
            m(0, 1) = 1;
            em[e] = m;
        }
        s.ediff = make_sheaf_map(s.harm, s.omega, vm, em);
    }

    // q: constant Z -> Harm
    {
        std::vector<IntMatrix> vm(V), em(E);
        for (std::size_t v = 0; v < V; ++v) {
            Vec one(1 + deg[v], Int(0));
            one[0] = 1;
            std::optional<Vec> c = SnfSolver(s.harm_basis[v]).solve(one);
            if (!c) throw Error("q: constants are not harmonic?");
            vm[v] = IntMatrix::column(*c);
        }
        for (std::size_t e = 0; e < E; ++e) {
            IntMatrix m(2, 1);
            m(0, 0) = 1;
            em[e] = m;
        }
        s.q = make_sheaf_map(s.const_z, s.harm, vm, em);
    }
    return s;
}

// The stalkwise diff surjection ⊕ PL_v -> Z^V (not the Čech differential).
inline IntMatrix diff_stalk_matrix(const StandardSheaves& s) {
    const Graph& g = s.pl.graph;
    IntMatrix m(g.num_vertices(), s.pl.vtotal);
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
        for (std::size_t j = 0; j < s.pl.vertex_rank[v]; ++j)
            m(v, s.pl.voff[v] + j) = s.diff.vmap[v](0, j);
    return m;
}

// Geometric Picard data for a connected graph without isolated vertices.
struct GeometricPicard {
    StandardSheaves sheaves;
    FgAbGroup pic;        // H¹(|Γ|, Harm)
    FgAbGroup pic0;       // ker(Pic -> H¹(Ω))
    FgAbGroup clhat;      // Z^V/□0, the comparison presentation
    GroupHom delta_bar;   // Clhat ≅ Pic
    GroupHom to_h1_omega; // Pic -> H¹(Ω)
    FgAbGroup h0_harm, h0_omega, h1_omega;
    IntMatrix delta_matrix;  // Z^V -> ⊕ Harm_e, the chosen connecting lift
};

inline GeometricPicard picard_geometric_data(const Graph& g, const GraphComplex& c) {
    GeometricPicard r;
    r.sheaves = build_standard_sheaves(g);
    const StandardSheaves& s = r.sheaves;
    const std::size_t V = g.num_vertices();

    CechCohomology ch = cech_cohomology(s.harm);
    r.h0_harm = ch.h0;
    r.pic = ch.h1;
    CechCohomology co = cech_cohomology(s.omega);
    r.h0_omega = co.h0;
    r.h1_omega = co.h1;

    r.clhat = subquotient(V, IntMatrix::identity(V), c.box0);

    // connecting map: c ↦ d_PL(h) for any stalk family h with diff(h) = c
    SnfSolver dsolve(diff_stalk_matrix(s));
    IntMatrix dpl = cech_matrix(s.pl);
    r.delta_matrix = IntMatrix(s.harm.etotal, V);
    for (std::size_t v = 0; v < V; ++v) {
        Vec ev(V, Int(0));
        ev[v] = 1;
        std::optional<Vec> h = dsolve.solve(ev);
        if (!h) throw Error("diff stalk map not surjective");
        r.delta_matrix.set_col(v, dpl * *h);
    }
    r.delta_bar = induced_hom(r.clhat, r.pic, r.delta_matrix);
    if (!r.delta_bar.is_isomorphism())
        throw TheoremViolation("δ̄: Clhat -> Pic(|Γ|) is not an isomorphism");

    r.to_h1_omega = induced_hom(r.pic, r.h1_omega, s.ediff.edge_block());
    r.pic0 = r.to_h1_omega.kernel_group();
    return r;
}

struct PicardGeometricResult {
    FgAbGroup pic;
    GroupHom delta_bar;
    FgAbGroup pic0;
};

inline PicardGeometricResult picard_geometric(const Graph& g) {
    GraphComplex c = make_complex(g);
    GeometricPicard d = picard_geometric_data(g, c);
    return PicardGeometricResult{d.pic, d.delta_bar, d.pic0};
}

// diff induces □0 on global sections; H⁰(Harm) = ker □0; H⁰(Ω) ≅ Ha¹;
// H¹(Ω) ≅ coker d♯. Throws TheoremViolation with the failing clause.
inline void verify_sheaf_identities(const Graph& g, const GraphComplex& c,
                                    const GeometricPicard& d) {
    const StandardSheaves& s = d.sheaves;
    const std::size_t V = g.num_vertices(), E = g.num_edges();

    // global sections of PL, via value coordinates
    IntMatrix sections = kernel_basis(cech_matrix(s.pl));
    IntMatrix value(V, s.pl.vtotal);
    for (std::size_t v = 0; v < V; ++v) value(v, s.pl.voff[v]) = 1;
    IntMatrix val_on_sections = value * sections;
    if (!is_unimodular(val_on_sections))
        throw TheoremViolation("H⁰(PL) is not Z^V via values");
    if (diff_stalk_matrix(s) * sections != c.box0 * val_on_sections)
        throw TheoremViolation("diff on global sections is not □0");

    IntMatrix value_h(V, s.harm.vtotal);
    for (std::size_t v = 0; v < V; ++v) {
        IntMatrix ev = s.harm_eval_row(v);
        for (std::size_t j = 0; j < s.harm.vertex_rank[v]; ++j)
            value_h(v, s.harm.voff[v] + j) = ev(0, j);
    }
    if (!lattice_equal(value_h * kernel_basis(cech_matrix(s.harm)), kernel_basis(c.box0)))
        throw TheoremViolation("H⁰(Harm) != ker □0");

    // H⁰(Ω) ↦ Ha¹ by reading each edge value through ξ0
    IntMatrix komega = kernel_basis(cech_matrix(s.omega));
    IntMatrix ev(E, s.omega.vtotal);
    for (std::size_t e = 0; e < E; ++e) {
        std::size_t o = g.edge(e).o;
        for (std::size_t j = 0; j < s.omega.vertex_rank[o]; ++j)
            ev(e, s.omega.voff[o] + j) = s.omega.xi0[e](0, j);
    }
    if (!lattice_equal(ev * komega, kernel_basis(c.d_adj)))
        throw TheoremViolation("H⁰(Ω) != Ha¹");

    FgAbGroup coker_dadj = subquotient(V, IntMatrix::identity(V), c.d_adj);
    if (!d.h1_omega.isomorphic_invariants(coker_dadj))
        throw TheoremViolation("H¹(Ω) != coker d♯");
    if (g.is_connected()) {
        if (d.h1_omega.free_rank() != 1 || !d.h1_omega.invariant_factors().empty())
            throw TheoremViolation("H¹(Ω) != Z for a connected graph");
        if (d.h0_harm.free_rank() != 1 || !d.h0_harm.invariant_factors().empty())
            throw TheoremViolation("H⁰(Harm) != Z for a connected graph");
    }
}

// δ̄(d♯ ĝ) = -q_*(ĝ) for every standard basis vector ĝ = ê.
inline void verify_sign_law(const Graph& g) {
    GraphComplex c = make_complex(g);
    GeometricPicard d = picard_geometric_data(g, c);
    const StandardSheaves& s = d.sheaves;
    IntMatrix qblk = s.q.edge_block();
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        Vec ghat(g.num_edges(), Int(0));
        ghat[e] = 1;
        Vec lhs = d.delta_matrix * (c.d_adj * ghat);
        Vec rhs = qblk * ghat;
        if (!d.pic.project(vec_add(lhs, rhs)).is_zero())
            throw TheoremViolation("sign law δ̄(d♯ĝ) = -q_*(ĝ) fails at edge " + g.edge(e).id);
    }
}

// Two-term complex of sheaves F -> ⊕_i w_{i*} Z (degree-1 part on vertices).
struct TwoTermSheafComplex {
    CellularSheaf sheaf;
    std::vector<std::size_t> sky_rank;        // per vertex
    std::vector<IntMatrix> differential;      // per vertex: F_v -> Z^{sky_rank}
};

// Total Čech complex of a two-term complex: C⁰ = ⊕F_v,
// C¹ = ⊕F_e ⊕ ⊕Z^{sky}, differential a ↦ (d_F a, eval(a)).
inline IntMatrix total_cech_matrix(const TwoTermSheafComplex& t, std::size_t& out_sky_total) {
    const CellularSheaf& s = t.sheaf;
    std::size_t sky_total = 0;
    std::vector<std::size_t> soff(s.graph.num_vertices());
    for (std::size_t v = 0; v < s.graph.num_vertices(); ++v) {
        soff[v] = sky_total;
        sky_total += t.sky_rank[v];
    }
    IntMatrix top = cech_matrix(s);
    IntMatrix bot(sky_total, s.vtotal);
    for (std::size_t v = 0; v < s.graph.num_vertices(); ++v)
        for (std::size_t i = 0; i < t.sky_rank[v]; ++i)
            for (std::size_t j = 0; j < s.vertex_rank[v]; ++j)
                bot(soff[v] + i, s.voff[v] + j) = t.differential[v](i, j);
    out_sky_total = sky_total;
    return top.vcat(bot);
}

// Everything the rigidified theory produces for (Γ, m).
struct RigidifiedPicard {
    FgAbGroup picm;          // H¹(|Γ|, Harm_m) via the total complex
    FgAbGroup pic0m;         // preimage of Pic⁰ under Pic_m -> Pic
    FgAbGroup clhatm_pres;   // (Z^V ⊕ Z^I)/(□0, ρᵀ)Z^V
    GroupHom delta_bar_m;    // Clhat_m ≅ Pic_m
    IntMatrix delta_matrix_m;  // chosen lift Z^V⊕Z^I -> C¹(Harm_m)
    IntMatrix qm_matrix;       // C¹(Γ_m) -> C¹(Harm_m)
    GroupHom qm_star;          // P_m -> Pic_m (via the presentation of P_m)
};

// Build Pic_m(|Γ|) as H¹ of the Harm_m total complex and verify the
// (Z^V⊕Z^I)/(□0,ρᵀ) presentation; needs the P_m presentation to express
// (q_m)_*. `pm` must be the group C¹(Γ_m)/(j_!Ha¹ + im d_m).
inline RigidifiedPicard rigidified_picard_data(const Graph& g, const Modulus& m,
                                               const GraphComplex& c, const FgAbGroup& pm,
                                               const GeometricPicard& d) {
    RigidifiedPicard r;
    const StandardSheaves& s = d.sheaves;
    const std::size_t V = g.num_vertices(), E = g.num_edges(), I = m.size();

    TwoTermSheafComplex hm;
    hm.sheaf = s.harm;
    hm.sky_rank.assign(V, 0);
    hm.differential.resize(V);
    for (std::size_t v = 0; v < V; ++v) hm.sky_rank[v] = m.indices_at(v).size();
    for (std::size_t v = 0; v < V; ++v) {
        IntMatrix dv(hm.sky_rank[v], s.harm.vertex_rank[v]);
        IntMatrix ev = s.harm_eval_row(v);
        for (std::size_t i = 0; i < hm.sky_rank[v]; ++i)
            for (std::size_t j = 0; j < s.harm.vertex_rank[v]; ++j) dv(i, j) = ev(0, j);
        hm.differential[v] = dv;
    }
    // reindex the sky part from per-vertex blocks to the declared I order
    std::size_t sky_total = 0;
    IntMatrix tot = total_cech_matrix(hm, sky_total);
    std::vector<std::size_t> perm;  // block row -> modulus index
    for (std::size_t v = 0; v < V; ++v)
        for (std::size_t i : m.indices_at(v)) perm.push_back(i);
    IntMatrix dtot(s.harm.etotal + I, s.harm.vtotal);
    for (std::size_t row = 0; row < s.harm.etotal; ++row)
        for (std::size_t jc = 0; jc < s.harm.vtotal; ++jc) dtot(row, jc) = tot(row, jc);
    for (std::size_t b = 0; b < I; ++b)
        for (std::size_t jc = 0; jc < s.harm.vtotal; ++jc)
            dtot(s.harm.etotal + perm[b], jc) = tot(s.harm.etotal + b, jc);

    r.picm = subquotient(s.harm.etotal + I, IntMatrix::identity(s.harm.etotal + I), dtot);

    // presentation (Z^V ⊕ Z^I)/(□0, ρᵀ)
    IntMatrix rel(V + I, V);
    for (std::size_t v = 0; v < V; ++v) {
        for (std::size_t u = 0; u < V; ++u) rel(u, v) = c.box0(u, v);
        for (std::size_t i : m.indices_at(v)) rel(V + i, v) = 1;
    }
    r.clhatm_pres = subquotient(V + I, IntMatrix::identity(V + I), rel);

    // δ_m(a, k) = (d_PL f, eval_I f - k) with diff(f) = a
    SnfSolver dsolve(diff_stalk_matrix(s));
    IntMatrix dpl = cech_matrix(s.pl);
    IntMatrix evalI(I, s.pl.vtotal);
    for (std::size_t i = 0; i < I; ++i) evalI(i, s.pl.voff[m.target(i)]) = 1;
    r.delta_matrix_m = IntMatrix(s.harm.etotal + I, V + I);
    for (std::size_t v = 0; v < V; ++v) {
        Vec ev(V, Int(0));
        ev[v] = 1;
        std::optional<Vec> f = dsolve.solve(ev);
        Vec top = dpl * *f;
        Vec bot = evalI * *f;
        Vec col(s.harm.etotal + I);
        for (std::size_t j = 0; j < top.size(); ++j) col[j] = top[j];
        for (std::size_t j = 0; j < I; ++j) col[s.harm.etotal + j] = bot[j];
        r.delta_matrix_m.set_col(v, col);
    }
    for (std::size_t i = 0; i < I; ++i) {
        Vec col(s.harm.etotal + I, Int(0));
        col[s.harm.etotal + i] = -1;
        r.delta_matrix_m.set_col(V + i, col);
    }
    r.delta_bar_m = induced_hom(r.clhatm_pres, r.picm, r.delta_matrix_m);
    if (!r.delta_bar_m.is_isomorphism())
        throw TheoremViolation("δ̄_m: Clhat_m -> Pic_m(|Γ|) is not an isomorphism");

    // (q_m)_* : C¹(Γ_m) = Z^E ⊕ Z^I -> C¹(Harm_m)
    r.qm_matrix = IntMatrix(s.harm.etotal + I, E + I);
    IntMatrix qblk = s.q.edge_block();
    for (std::size_t e = 0; e < E; ++e)
        for (std::size_t row = 0; row < s.harm.etotal; ++row)
            r.qm_matrix(row, e) = qblk(row, e);
    for (std::size_t i = 0; i < I; ++i) r.qm_matrix(s.harm.etotal + i, E + i) = 1;
    r.qm_star = induced_hom(pm, r.picm, r.qm_matrix);

    // pic0m: kernel of Pic_m -> Pic -> H¹(Ω) pulled back, i.e. preimage of Pic⁰
    IntMatrix forget(s.harm.etotal, s.harm.etotal + I);
    for (std::size_t row = 0; row < s.harm.etotal; ++row) forget(row, row) = 1;
    GroupHom to_omega = induced_hom(
        r.picm, d.h1_omega, d.to_h1_omega.ambient_matrix() * forget);
    r.pic0m = to_omega.kernel_group();
    return r;
}

struct RigidifiedPicardResult {
    FgAbGroup picm;
    GroupHom delta_bar_m;
    FgAbGroup pic0m;
};

// The P_m presentation C¹(Γ_m)/(j_!Ha¹(Γ) + im d_m), built from the base
// complex alone.
inline FgAbGroup pm_presentation(const Graph& g, const Modulus& m, const GraphComplex& c) {
    const std::size_t V = g.num_vertices(), E = g.num_edges(), I = m.size();
    IntMatrix w = kernel_basis(c.d_adj);
    IntMatrix dm(E + I, V + 1);
    for (std::size_t v = 0; v < V; ++v) {
        for (std::size_t e = 0; e < E; ++e) dm(e, v) = c.d(e, v);
        for (std::size_t i = 0; i < I; ++i) dm(E + i, v) = (m.target(i) == v) ? 1 : 0;
    }
    for (std::size_t i = 0; i < I; ++i) dm(E + i, V) = -1;
    return subquotient(E + I, IntMatrix::identity(E + I),
                       w.vcat(IntMatrix(I, w.cols())).hcat(dm));
}

inline RigidifiedPicardResult rigidified_picard(const Graph& g, const Modulus& m);
inline void verify_sign_law_m(const Graph& g, const Modulus& m);

// Modulus sign law: δ_m(d♯g, k) = class of (-g, -k) on all basis vectors.
inline void verify_sign_law_m_data(const Graph& g, const GraphComplex& c,
                                   const RigidifiedPicard& r) {
    const std::size_t V = g.num_vertices(), E = g.num_edges();
    const std::size_t I = r.qm_matrix.cols() - E;
    for (std::size_t e = 0; e < E; ++e) {
        Vec ghat(E, Int(0));
        ghat[e] = 1;
        Vec a = c.d_adj * ghat;
        Vec ak(V + I, Int(0));
        for (std::size_t v = 0; v < V; ++v) ak[v] = a[v];
        Vec lhs = r.delta_matrix_m * ak;
        Vec gk(E + I, Int(0));
        gk[e] = 1;
        Vec rhs = r.qm_matrix * gk;
        if (!r.picm.project(vec_add(lhs, rhs)).is_zero())
            throw TheoremViolation("sign law δ_m(d♯ĝ,0) = class(-ĝ,0) fails at edge " +
                                   g.edge(e).id);
    }
    for (std::size_t i = 0; i < I; ++i) {
        Vec ak(V + I, Int(0));
        ak[V + i] = 1;
        Vec lhs = r.delta_matrix_m * ak;
        Vec gk(E + I, Int(0));
        gk[E + i] = 1;
        Vec rhs = r.qm_matrix * gk;
        if (!r.picm.project(vec_add(lhs, rhs)).is_zero())
            throw TheoremViolation("sign law δ_m(0,î) = class(0,-î) fails at index " +
                                   std::to_string(i));
    }
}

// Reduced-modulus route: Harm' = ker(Harm -> ∏ w_{i*}Z) as a sheaf, H¹ of it,
// and the Z^V/□0(Z^{V∖S}) presentation.
inline FgAbGroup reduced_rigidified_picard(const Graph& g, const Modulus& m,
                                           const GraphComplex& c, const StandardSheaves& s) {
    if (!m.is_reduced()) throw Error("reduced_rigidified_picard needs a reduced modulus");
    const std::size_t V = g.num_vertices(), E = g.num_edges();
    std::vector<bool> in_s(V, false);
    for (std::size_t i = 0; i < m.size(); ++i) in_s[m.target(i)] = true;

    // Harm'-stalks: at w ∈ S impose value = 0 on top of the slope-sum
    std::vector<IntMatrix> basis(V);
    std::vector<std::size_t> vr(V);
    for (std::size_t v = 0; v < V; ++v) {
        std::size_t dg = g.degree(v);
        if (in_s[v]) {
            IntMatrix rows(2, 1 + dg);
            rows(0, 0) = 1;
            for (std::size_t h = 0; h < dg; ++h) rows(1, 1 + h) = 1;
            basis[v] = kernel_basis(rows);
        } else {
            basis[v] = s.harm_basis[v];
        }
        vr[v] = basis[v].cols();
    }
    std::vector<IntMatrix> x0(E), x1(E);
    for (std::size_t e = 0; e < E; ++e) {
        x0[e] = s.pl.xi0[e] * basis[g.edge(e).o];
        x1[e] = s.pl.xi1[e] * basis[g.edge(e).t];
    }
    CellularSheaf hp = make_cellular_sheaf(g, vr, std::vector<std::size_t>(E, 2), x0, x1);
    FgAbGroup picm_red = cech_cohomology(hp).h1;

    // Z^V/□0(Z^{V∖S}) ≅ H¹(Harm') via the connecting map through PL'
    std::vector<std::size_t> outside;
    for (std::size_t v = 0; v < V; ++v)
        if (!in_s[v]) outside.push_back(v);
    FgAbGroup alt = subquotient(V, IntMatrix::identity(V), c.box0.take_cols(outside));

    // PL'-stalks: value 0 at S
    std::vector<IntMatrix> plbasis(V);
    std::size_t ptotal = 0;
    std::vector<std::size_t> poff(V);
    for (std::size_t v = 0; v < V; ++v) {
        std::size_t dg = g.degree(v);
        if (in_s[v]) {
            IntMatrix row(1, 1 + dg);
            row(0, 0) = 1;
            plbasis[v] = kernel_basis(row);
        } else {
            plbasis[v] = IntMatrix::identity(1 + dg);
        }
        poff[v] = ptotal;
        ptotal += plbasis[v].cols();
    }
    IntMatrix diffp(V, ptotal), dplp(s.pl.etotal, ptotal);
    IntMatrix dpl = cech_matrix(s.pl);
    IntMatrix diffstalk = diff_stalk_matrix(s);
    for (std::size_t v = 0; v < V; ++v)
        for (std::size_t j = 0; j < plbasis[v].cols(); ++j) {
            // embed the restricted germ into PL coordinates
            Vec germ(s.pl.vtotal, Int(0));
            for (std::size_t i = 0; i < plbasis[v].rows(); ++i)
                germ[s.pl.voff[v] + i] = plbasis[v](i, j);
            Vec dcol = diffstalk * germ;
            Vec ccol = dpl * germ;
            for (std::size_t i = 0; i < V; ++i) diffp(i, poff[v] + j) = dcol[i];
            for (std::size_t i = 0; i < s.pl.etotal; ++i) dplp(i, poff[v] + j) = ccol[i];
        }
    SnfSolver dsolve(diffp);
    IntMatrix dm(s.pl.etotal, V);
    for (std::size_t v = 0; v < V; ++v) {
        Vec ev(V, Int(0));
        ev[v] = 1;
        std::optional<Vec> h = dsolve.solve(ev);
        if (!h) throw Error("diff on PL' not surjective");
        dm.set_col(v, dplp * *h);
    }
    GroupHom db = induced_hom(alt, picm_red, dm);
    if (!db.is_isomorphism())
        throw TheoremViolation("reduced: Z^V/□0(Z^{V∖S}) -> H¹(Harm') is not an isomorphism");
    return picm_red;
}

// One-call entry point: Pic_m(|Γ|) with δ̄_m and Pic⁰_m, verifying the
// presentation isomorphism, the χ_m triangle, P_m ≅ Pic⁰_m, and (for reduced
// m) the Harm' route.
inline RigidifiedPicardResult rigidified_picard(const Graph& g, const Modulus& m) {
    GraphComplex c = make_complex(g);
    FgAbGroup pm = pm_presentation(g, m, c);
    GeometricPicard d = picard_geometric_data(g, c);
    RigidifiedPicard rp = rigidified_picard_data(g, m, c, pm, d);

    const std::size_t V = g.num_vertices(), E = g.num_edges(), I = m.size();
    // χ_m = (d♯, id): P_m -> Chat0_m, then the q-triangle with -δ̄_m
    IntMatrix imd = image_basis(c.d_adj);
    IntMatrix num(V + I, imd.cols() + I);
    for (std::size_t i = 0; i < V; ++i)
        for (std::size_t j = 0; j < imd.cols(); ++j) num(i, j) = imd(i, j);
    for (std::size_t i = 0; i < I; ++i) num(V + i, imd.cols() + i) = 1;
    IntMatrix rel(V + I, V);
    for (std::size_t v = 0; v < V; ++v) {
        for (std::size_t u = 0; u < V; ++u) rel(u, v) = c.box0(u, v);
        for (std::size_t i : m.indices_at(v)) rel(V + i, v) = 1;
    }
    FgAbGroup clhat0m = subquotient(V + I, num, rel);
    IntMatrix chim(V + I, E + I);
    for (std::size_t v = 0; v < V; ++v)
        for (std::size_t e = 0; e < E; ++e) chim(v, e) = c.d_adj(v, e);
    for (std::size_t i = 0; i < I; ++i) chim(V + i, E + i) = 1;
    GroupHom chi_m = induced_hom(pm, clhat0m, chim);
    GroupHom incl = induced_hom(clhat0m, rp.clhatm_pres, IntMatrix::identity(V + I));
    GroupHom lhs = rp.delta_bar_m.compose_after(incl.compose_after(chi_m));
    GroupHom rhs = induced_hom(pm, rp.picm, -rp.qm_matrix);
    if (!lhs.equals(rhs)) throw TheoremViolation("-δ̄_m∘χ_m ≠ (q_m)_*");
    if (!induced_hom(pm, rp.pic0m, rp.qm_matrix).is_isomorphism())
        throw TheoremViolation("(q_m)_* is not an isomorphism P_m ≅ Pic⁰_m");
    if (m.is_reduced()) {
        FgAbGroup red = reduced_rigidified_picard(g, m, c, d.sheaves);
        if (!red.isomorphic_invariants(rp.picm))
            throw TheoremViolation("reduced Harm' route disagrees with the total complex");
    }
    return RigidifiedPicardResult{rp.picm, rp.delta_bar_m, rp.pic0m};
}

// One-call entry point for the modulus sign law.
inline void verify_sign_law_m(const Graph& g, const Modulus& m) {
    GraphComplex c = make_complex(g);
    FgAbGroup pm = pm_presentation(g, m, c);
    GeometricPicard d = picard_geometric_data(g, c);
    RigidifiedPicard rp = rigidified_picard_data(g, m, c, pm, d);
    verify_sign_law_m_data(g, c, rp);
}

}  // namespace graphjac
