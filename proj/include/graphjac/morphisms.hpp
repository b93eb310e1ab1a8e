#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graphjac/genjac.hpp"
#include "graphjac/sheaf.hpp"

namespace graphjac {

// Morphism of oriented graphs: vertices to vertices, edges to edges or
// collapsed to a vertex. Collapsed edges are kept explicitly (nullopt) so
// pullback matrices stay total, with zero rows for them.
struct GraphMorphism {
    Graph source, target;
    std::vector<std::size_t> vertex_map;
    std::vector<std::optional<std::size_t>> edge_map;

    std::size_t fv(std::size_t v) const { return vertex_map[v]; }
};

inline GraphMorphism make_graph_morphism(
    const Graph& src, const Graph& tgt, const std::map<std::string, std::string>& vmap,
    const std::map<std::string, std::pair<bool, std::string>>& emap /* true = edge image */) {
    GraphMorphism f;
    f.source = src;
    f.target = tgt;
    f.vertex_map.resize(src.num_vertices());
    for (std::size_t v = 0; v < src.num_vertices(); ++v) {
        auto it = vmap.find(src.vertex_name(v));
        if (it == vmap.end()) throw Error("morphism: vertex " + src.vertex_name(v) + " unmapped");
        f.vertex_map[v] = tgt.vertex_index(it->second);
    }
    f.edge_map.resize(src.num_edges());
    for (std::size_t e = 0; e < src.num_edges(); ++e) {
        const auto& ed = src.edge(e);
        auto it = emap.find(ed.id);
        if (it == emap.end()) throw Error("morphism: edge " + ed.id + " unmapped");
        if (it->second.first) {
            std::size_t te = tgt.edge_index(it->second.second);
            if (tgt.edge(te).o != f.vertex_map[ed.o] || tgt.edge(te).t != f.vertex_map[ed.t])
                throw Error("morphism: edge " + ed.id + " does not preserve oriented endpoints");
            f.edge_map[e] = te;
        } else {
            std::size_t tv = tgt.vertex_index(it->second.second);
            if (f.vertex_map[ed.o] != tv || f.vertex_map[ed.t] != tv)
                throw Error("morphism: collapsed edge " + ed.id + " endpoints disagree");
            f.edge_map[e] = std::nullopt;
        }
    }
    return f;
}

// Horizontal multiplicities m(φ,v): the common fibre cardinality of the
// edge maps over origin and terminus stars. NotHarmonicAt on mismatch.
inline std::vector<Int> harmonic_multiplicities(const GraphMorphism& f) {
    const Graph& g = f.source;
    const Graph& h = f.target;
    if (h.num_edges() == 0) throw Error("harmonic_multiplicities: target has no edges");
    std::vector<Int> mult(g.num_vertices());
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        std::size_t vp = f.fv(v);
        std::optional<Int> m;
        bool any_target_edge = false;
        auto check = [&](std::size_t count) {
            if (!m) m = Int(static_cast<long>(count));
            else if (*m != Int(static_cast<long>(count)))
                throw NotHarmonicAt("not harmonic at " + g.vertex_name(v) + ": fibre sizes " +
                                    m->get_str() + " and " + std::to_string(count));
        };
        for (std::size_t ep = 0; ep < h.num_edges(); ++ep) {
            if (h.edge(ep).o == vp) {
                any_target_edge = true;
                std::size_t c = 0;
                for (std::size_t e = 0; e < g.num_edges(); ++e)
                    if (f.edge_map[e] && *f.edge_map[e] == ep && g.edge(e).o == v) ++c;
                check(c);
            }
            if (h.edge(ep).t == vp) {
                any_target_edge = true;
                std::size_t c = 0;
                for (std::size_t e = 0; e < g.num_edges(); ++e)
                    if (f.edge_map[e] && *f.edge_map[e] == ep && g.edge(e).t == v) ++c;
                check(c);
            }
        }
        mult[v] = (any_target_edge && m) ? *m : Int(0);
    }
    return mult;
}

inline IntMatrix vertex_pushforward_matrix(const GraphMorphism& f) {
    IntMatrix m(f.target.num_vertices(), f.source.num_vertices());
    for (std::size_t v = 0; v < f.source.num_vertices(); ++v) m(f.fv(v), v) += 1;
    return m;
}

inline IntMatrix edge_pushforward_matrix(const GraphMorphism& f) {
    IntMatrix m(f.target.num_edges(), f.source.num_edges());
    for (std::size_t e = 0; e < f.source.num_edges(); ++e)
        if (f.edge_map[e]) m(*f.edge_map[e], e) += 1;
    return m;
}

// v ↦ m(φ,v)·φ(v)
inline IntMatrix multiplicity_pushforward_matrix(const GraphMorphism& f,
                                                 const std::vector<Int>& mult) {
    IntMatrix m(f.target.num_vertices(), f.source.num_vertices());
    for (std::size_t v = 0; v < f.source.num_vertices(); ++v) m(f.fv(v), v) += mult[v];
    return m;
}

// φ_*: Cl0(Γ) -> Cl0(Γ'), with the AJ-naturality square verified.
struct PushforwardResult {
    GroupHom cl0;     // Cl0(Γ) -> Cl0(Γ')
    GroupHom on_jac;  // J(Γ) -> J(Γ') induced by ᵀ(φ^*)
};

inline PushforwardResult pushforward_cl(const GraphMorphism& f, const JacobianContext& src,
                                        const JacobianContext& tgt) {
    harmonic_multiplicities(f);  // NotHarmonicAt if not harmonic
    const std::size_t V = f.source.num_vertices(), Vp = f.target.num_vertices();
    IntMatrix m(Vp - 1, V - 1);
    for (std::size_t j = 1; j < V; ++j) {
        std::size_t a = f.fv(j), b = f.fv(0);
        if (a > 0) m(a - 1, j - 1) += 1;
        if (b > 0) m(b - 1, j - 1) -= 1;
    }
    PushforwardResult r;
    try {
        r.cl0 = induced_hom(src.cl0, tgt.cl0, m);
    } catch (const NotWellDefined& e) {
        throw TheoremViolation(std::string("φ_*(Prin) ⊄ Prin': ") + e.what());
    }

    // ᵀ(φ^*) on dual coordinates of the harmonic bases
    IntMatrix pull = edge_pushforward_matrix(f).transpose();
    SnfSolver w(src.W);
    IntMatrix cmat(src.W.cols(), tgt.W.cols());
    for (std::size_t j = 0; j < tgt.W.cols(); ++j) {
        std::optional<Vec> c = w.solve(pull * tgt.W.col(j));
        if (!c) throw TheoremViolation("φ^* does not map Ha¹(Γ') into Ha¹(Γ)");
        cmat.set_col(j, *c);
    }
    r.on_jac = induced_hom(src.jac, tgt.jac, cmat.transpose());
    if (!r.on_jac.compose_after(src.aj).equals(tgt.aj.compose_after(r.cl0)))
        throw TheoremViolation("AJ naturality square fails for φ_*");
    return r;
}

// φ^m-pullback on codivisor class groups, with the degree action on
// Clhat/Clhat0 ≅ Z.
struct PullbackClhatResult {
    GroupHom clhat;   // Clhat(Γ') -> Clhat(Γ)
    GroupHom clhat0;  // restriction to degree zero
    Int degree;       // Σ_{v ∈ φ⁻¹(v')} m(φ,v), constant over v'
};

inline PullbackClhatResult pullback_clhat(const GraphMorphism& f, const JacobianContext& src,
                                          const JacobianContext& tgt) {
    std::vector<Int> mult = harmonic_multiplicities(f);
    IntMatrix pm = multiplicity_pushforward_matrix(f, mult).transpose();
    PullbackClhatResult r;
    try {
        r.clhat = induced_hom(tgt.clhat, src.clhat, pm);
        r.clhat0 = induced_hom(tgt.clhat0, src.clhat0, pm);
    } catch (const NotWellDefined& e) {
        throw TheoremViolation(std::string("φ^m(P̂rin') ⊄ P̂rin: ") + e.what());
    }
    std::optional<Int> deg;
    for (std::size_t vp = 0; vp < f.target.num_vertices(); ++vp) {
        Int s = 0;
        for (std::size_t v = 0; v < f.source.num_vertices(); ++v)
            if (f.fv(v) == vp) s += mult[v];
        if (!deg) deg = s;
        else if (*deg != s)
            throw TheoremViolation("degree of the harmonic morphism is not constant");
    }
    r.degree = deg.value_or(Int(0));
    return r;
}

// Pullback on harmonic 1-forms in the chosen bases: R with W·R = φ^*·W'.
inline IntMatrix pullback_harmonic(const GraphMorphism& f, const JacobianContext& src,
                                   const JacobianContext& tgt) {
    harmonic_multiplicities(f);
    IntMatrix pull = edge_pushforward_matrix(f).transpose();
    SnfSolver w(src.W);
    IntMatrix r(src.W.cols(), tgt.W.cols());
    for (std::size_t j = 0; j < tgt.W.cols(); ++j) {
        std::optional<Vec> c = w.solve(pull * tgt.W.col(j));
        if (!c) throw TheoremViolation("pullback of a harmonic form is not harmonic");
        r.set_col(j, *c);
    }
    return r;
}

inline GraphMorphism compose_morphisms(const GraphMorphism& g, const GraphMorphism& f) {
    // g ∘ f
    GraphMorphism c;
    c.source = f.source;
    c.target = g.target;
    c.vertex_map.resize(f.source.num_vertices());
    for (std::size_t v = 0; v < f.source.num_vertices(); ++v)
        c.vertex_map[v] = g.vertex_map[f.vertex_map[v]];
    c.edge_map.resize(f.source.num_edges());
    for (std::size_t e = 0; e < f.source.num_edges(); ++e)
        c.edge_map[e] = f.edge_map[e] ? g.edge_map[*f.edge_map[e]] : std::nullopt;
    return c;
}

enum class FunctorialityDirection { Pushforward, Pullback };

struct FunctorialityReport {
    FunctorialityDirection direction;
    bool pass = false;
    std::string witness;
};

namespace detail_morphisms {

// index of each support vertex in a reduced modulus
inline std::map<std::size_t, std::size_t> support_index(const Modulus& m) {
    std::map<std::size_t, std::size_t> idx;
    for (std::size_t i = 0; i < m.size(); ++i) idx[m.target(i)] = i;
    return idx;
}

}  // namespace detail_morphisms

// Pushforward case: φ_V⁻¹(S') ⊇ S, φ_*: Cl0_m(Γ) -> Cl0_{m'}(Γ') and the AJ_m
// square through (ker d♯_m)∨.
inline FunctorialityReport modulus_functoriality_pushforward(const GraphMorphism& f,
                                                             const ModulusContext& src,
                                                             const ModulusContext& tgt) {
    FunctorialityReport rep;
    rep.direction = FunctorialityDirection::Pushforward;
    if (!src.modulus.is_reduced() || !tgt.modulus.is_reduced())
        throw PreconditionViolated("modulus functoriality needs reduced moduli");
    std::vector<Int> mult = harmonic_multiplicities(f);
    auto sidx = detail_morphisms::support_index(src.modulus);
    auto sidxp = detail_morphisms::support_index(tgt.modulus);
    for (auto& [w, i] : sidx)
        if (!sidxp.count(f.fv(w)))
            throw PreconditionViolated("φ(S) ⊄ S': vertex " + f.source.vertex_name(w));

    const std::size_t V = f.source.num_vertices(), Vp = f.target.num_vertices();
    const std::size_t I = src.isize(), Ip = tgt.isize();
    IntMatrix m(Vp - 1 + Ip, V - 1 + I);
    for (std::size_t j = 1; j < V; ++j) {
        std::size_t a = f.fv(j), b = f.fv(0);
        if (a > 0) m(a - 1, j - 1) += 1;
        if (b > 0) m(b - 1, j - 1) -= 1;
    }
    for (std::size_t i = 0; i < I; ++i) {
        std::size_t w = src.modulus.target(i);
        m(Vp - 1 + sidxp.at(f.fv(w)), V - 1 + i) = mult[w];
    }
    GroupHom push;
    try {
        push = induced_hom(src.cl0m, tgt.cl0m, m);
    } catch (const NotWellDefined& e) {
        rep.witness = std::string("φ_* not well-defined on Cl0_m: ") + e.what();
        return rep;
    }

    // extended pullback Γ'_{m'}-forms to Γ_m-forms: base edges by φ_E,
    // modulus edges e_i ↦ e'_{index of φ(w_i)}
    const std::size_t E = f.source.num_edges(), Ep = f.target.num_edges();
    IntMatrix pull(E + I, Ep + Ip);
    for (std::size_t e = 0; e < E; ++e)
        if (f.edge_map[e]) pull(e, *f.edge_map[e]) = 1;
    for (std::size_t i = 0; i < I; ++i)
        pull(E + i, Ep + sidxp.at(f.fv(src.modulus.target(i)))) = 1;

    SnfSolver wm(src.Wm);
    IntMatrix cmat(src.Wm.cols(), tgt.Wm.cols());
    for (std::size_t j = 0; j < tgt.Wm.cols(); ++j) {
        std::optional<Vec> c = wm.solve(pull * tgt.Wm.col(j));
        if (!c) throw TheoremViolation("extended φ^* leaves Ha¹(Γ_m)");
        cmat.set_col(j, *c);
    }
    GroupHom on_jm = induced_hom(src.jm, tgt.jm, cmat.transpose());
    if (!on_jm.compose_after(src.aj_m).equals(tgt.aj_m.compose_after(push))) {
        rep.witness = "AJ_m naturality square fails";
        return rep;
    }
    rep.pass = true;
    return rep;
}

// Pullback case: φ_V⁻¹(S') ⊆ S, φ^*: Clhat_{m'} -> Clhat_m, the χ_m square,
// and the sheaf-level δ̄_m / (q_m)_* squares through Pic_m(|Γ|).
inline FunctorialityReport modulus_functoriality_pullback(const GraphMorphism& f,
                                                          const ModulusContext& src,
                                                          const ModulusContext& tgt) {
    FunctorialityReport rep;
    rep.direction = FunctorialityDirection::Pullback;
    if (!src.modulus.is_reduced() || !tgt.modulus.is_reduced())
        throw PreconditionViolated("modulus functoriality needs reduced moduli");
    std::vector<Int> mult = harmonic_multiplicities(f);
    auto sidx = detail_morphisms::support_index(src.modulus);
    auto sidxp = detail_morphisms::support_index(tgt.modulus);
    for (std::size_t v = 0; v < f.source.num_vertices(); ++v)
        if (sidxp.count(f.fv(v)) && !sidx.count(v))
            throw PreconditionViolated("φ⁻¹(S') ⊄ S at " + f.source.vertex_name(v));

    const std::size_t V = f.source.num_vertices(), Vp = f.target.num_vertices();
    const std::size_t E = f.source.num_edges(), Ep = f.target.num_edges();
    const std::size_t I = src.isize(), Ip = tgt.isize();

    // φ^S: Z^{I'} -> Z^I, partial pullback along i ↦ index of φ(w_i)
    IntMatrix phis(I, Ip);
    for (std::size_t i = 0; i < I; ++i) {
        auto it = sidxp.find(f.fv(src.modulus.target(i)));
        if (it != sidxp.end()) phis(i, it->second) = 1;
    }

    IntMatrix pm = multiplicity_pushforward_matrix(f, mult).transpose();
    IntMatrix clm_mat(V + I, Vp + Ip);
    for (std::size_t a = 0; a < V; ++a)
        for (std::size_t b = 0; b < Vp; ++b) clm_mat(a, b) = pm(a, b);
    for (std::size_t a = 0; a < I; ++a)
        for (std::size_t b = 0; b < Ip; ++b) clm_mat(V + a, Vp + b) = phis(a, b);

    // P_m-pullback: edges by φ^1, indices by φ^S
    IntMatrix pmm(E + I, Ep + Ip);
    IntMatrix phi1t = edge_pushforward_matrix(f).transpose();
    for (std::size_t a = 0; a < E; ++a)
        for (std::size_t b = 0; b < Ep; ++b) pmm(a, b) = phi1t(a, b);
    for (std::size_t a = 0; a < I; ++a)
        for (std::size_t b = 0; b < Ip; ++b) pmm(E + a, Ep + b) = phis(a, b);

    GroupHom phat, phat0, pP;
    try {
        phat = induced_hom(tgt.clhatm, src.clhatm, clm_mat);
        phat0 = induced_hom(tgt.clhat0m, src.clhat0m, clm_mat);
        pP = induced_hom(tgt.pm, src.pm, pmm);
    } catch (const NotWellDefined& e) {
        rep.witness = std::string("pullback not well-defined: ") + e.what();
        return rep;
    }

    if (!src.chi_m.compose_after(pP).equals(phat0.compose_after(tgt.chi_m))) {
        rep.witness = "χ_m square fails";
        return rep;
    }

    // sheaf level
    GeometricPicard gp_src = picard_geometric_data(f.source, src.base.complex);
    GeometricPicard gp_tgt = picard_geometric_data(f.target, tgt.base.complex);
    RigidifiedPicard rp_src =
        rigidified_picard_data(f.source, src.modulus, src.base.complex, src.pm, gp_src);
    RigidifiedPicard rp_tgt =
        rigidified_picard_data(f.target, tgt.modulus, tgt.base.complex, tgt.pm, gp_tgt);

    // Čech pullback on C¹(Harm_m): copy germ blocks along mapped edges,
    // zero on collapsed ones, φ^S on the skyscraper part
    const StandardSheaves& ss = gp_src.sheaves;
    const StandardSheaves& st = gp_tgt.sheaves;
    IntMatrix cech(ss.harm.etotal + I, st.harm.etotal + Ip);
    for (std::size_t e = 0; e < E; ++e) {
        if (!f.edge_map[e]) continue;
        std::size_t ep = *f.edge_map[e];
        cech(ss.harm.eoff[e], st.harm.eoff[ep]) = 1;
        cech(ss.harm.eoff[e] + 1, st.harm.eoff[ep] + 1) = 1;
    }
    for (std::size_t a = 0; a < I; ++a)
        for (std::size_t b = 0; b < Ip; ++b)
            cech(ss.harm.etotal + a, st.harm.etotal + b) = phis(a, b);

    GroupHom picPull;
    try {
        picPull = induced_hom(rp_tgt.picm, rp_src.picm, cech);
    } catch (const NotWellDefined& e) {
        rep.witness = std::string("|φ|^* not well-defined on Pic_m: ") + e.what();
        return rep;
    }

    GroupHom phat_pres = induced_hom(rp_tgt.clhatm_pres, rp_src.clhatm_pres, clm_mat);
    if (!picPull.compose_after(rp_tgt.delta_bar_m)
             .equals(rp_src.delta_bar_m.compose_after(phat_pres))) {
        rep.witness = "δ̄_m naturality square fails";
        return rep;
    }
    if (!picPull.compose_after(rp_tgt.qm_star).equals(rp_src.qm_star.compose_after(pP))) {
        rep.witness = "(q_m)_* naturality square fails";
        return rep;
    }
    rep.pass = true;
    return rep;
}

// Non-reduced moduli are first replaced by their reductions (the pushout
// remark makes the general case equivalent); the squares are then checked on
// the reduced instances.
inline FunctorialityReport modulus_functoriality(const GraphMorphism& f, const ModulusContext& src,
                                                 const ModulusContext& tgt,
                                                 FunctorialityDirection dir) {
    bool reduced_src = src.modulus.is_reduced(), reduced_tgt = tgt.modulus.is_reduced();
    if (!reduced_src || !reduced_tgt) {
        ModulusContext rsrc =
            reduced_src ? src : make_modulus_context(src.graph(), src.modulus.reduced(src.graph()));
        ModulusContext rtgt =
            reduced_tgt ? tgt : make_modulus_context(tgt.graph(), tgt.modulus.reduced(tgt.graph()));
        FunctorialityReport rep = dir == FunctorialityDirection::Pushforward
                                      ? modulus_functoriality_pushforward(f, rsrc, rtgt)
                                      : modulus_functoriality_pullback(f, rsrc, rtgt);
        rep.witness = "checked on the reduced moduli" +
                      (rep.witness.empty() ? "" : "; " + rep.witness);
        return rep;
    }
    return dir == FunctorialityDirection::Pushforward
               ? modulus_functoriality_pushforward(f, src, tgt)
               : modulus_functoriality_pullback(f, src, tgt);
}

}  // namespace graphjac
