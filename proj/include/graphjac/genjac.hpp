#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "graphjac/jacobian.hpp"

namespace graphjac {

// The modulus theory, built on the extended graph Γ_m (auxiliary vertex ⋆
// with one edge ⋆ -> w_i per index).
//
//   Cl0_m = (Z[V]_0 ⊕ Z[I]) / ⟨(Δ0 v, I(v))⟩   basis {v - v0} then I
//   J_m   = Z^km / im(Wmᵀ·j_*K)                 Wm a basis of Ha¹(Γ_m)
//   P_m   = C¹(Γ_m) / (j_! Ha¹(Γ) + im d_m)     d_m(f,a) = (df, ρᵀf - a)
//   Chat0_m = (im d♯ ⊕ Z^I) / ⟨(□0 f, ρᵀ f)⟩
struct ModulusContext {
    JacobianContext base;
    Modulus modulus;
    ExtendedGraph extended;
    GraphComplex extended_complex;
    IntMatrix Wm;  // saturated basis of Ha¹(Γ_m)
    FgAbGroup clm, cl0m, jm, pm, clhatm, clhat0m;
    GroupHom aj_m, chi_m, zeta_m, theta_m, iota_m;
    std::shared_ptr<SnfSolver> wmt_solver;  // Wmᵀ

    const Graph& graph() const { return base.complex.graph; }
    std::size_t isize() const { return modulus.size(); }
};

// j_* / j_! both extend by zero over the modulus-edge coordinates.
inline Vec extend_by_zero(const Vec& v, std::size_t extra) {
    Vec r = v;
    r.resize(v.size() + extra, Int(0));
    return r;
}

inline IntMatrix extend_rows_by_zero(const IntMatrix& m, std::size_t extra) {
    return m.vcat(IntMatrix(extra, m.cols()));
}

inline ModulusContext make_modulus_context(const Graph& g, const Modulus& m) {
    ModulusContext ctx;
    ctx.base = make_jacobian_context(g);
    ctx.modulus = m;
    ctx.extended = extend_with_modulus(g, m);
    ctx.extended_complex = make_complex(ctx.extended.graph);
    ctx.Wm = harmonic_one_forms(ctx.extended_complex);

    const std::size_t V = g.num_vertices(), E = g.num_edges(), I = m.size();
    const std::size_t km = ctx.Wm.cols();
    const GraphComplex& c = ctx.base.complex;

    // relation columns (Δ0 v, I(v)) on Z[V]_0 ⊕ Z[I], resp. Z[V] ⊕ Z[I]
    IntMatrix rel0(V - 1 + I, V), rel_full(V + I, V);
    for (std::size_t v = 0; v < V; ++v) {
        for (std::size_t u = 0; u < V; ++u) {
            if (u > 0) rel0(u - 1, v) = c.lap0(u, v);
            rel_full(u, v) = c.lap0(u, v);
        }
        for (std::size_t i : m.indices_at(v)) {
            rel0(V - 1 + i, v) = 1;
            rel_full(V + i, v) = 1;
        }
    }
    ctx.cl0m = subquotient(V - 1 + I, IntMatrix::identity(V - 1 + I), rel0);
    ctx.clm = subquotient(V + I, IntMatrix::identity(V + I), rel_full);

    IntMatrix jstar_k = extend_rows_by_zero(ctx.base.K, I);
    ctx.jm = subquotient(km, IntMatrix::identity(km), ctx.Wm.transpose() * jstar_k);

    // P_m relations: j_! Ha¹(Γ) and the columns of d_m
    IntMatrix dm(E + I, V + 1);
    for (std::size_t v = 0; v < V; ++v) {
        for (std::size_t e = 0; e < E; ++e) dm(e, v) = c.d(e, v);
        for (std::size_t i = 0; i < I; ++i) dm(E + i, v) = (m.target(i) == v) ? 1 : 0;
    }
    for (std::size_t i = 0; i < I; ++i) dm(E + i, V) = -1;
    ctx.pm = subquotient(E + I, IntMatrix::identity(E + I),
                         extend_rows_by_zero(ctx.base.W, I).hcat(dm));

    // codivisor side: relations (□0 f, ρᵀ f)
    IntMatrix relhat(V + I, V);
    for (std::size_t v = 0; v < V; ++v) {
        for (std::size_t u = 0; u < V; ++u) relhat(u, v) = c.box0(u, v);
        for (std::size_t i : m.indices_at(v)) relhat(V + i, v) = 1;
    }
    IntMatrix numhat0(V + I, 0);
    {
        IntMatrix imd = image_basis(c.d_adj);
        IntMatrix top = imd.hcat(IntMatrix(V, I));
        IntMatrix bot = IntMatrix(I, imd.cols()).hcat(IntMatrix::identity(I));
        numhat0 = top.vcat(bot);
    }
    ctx.clhat0m = subquotient(V + I, numhat0, relhat);
    ctx.clhatm = subquotient(V + I, IntMatrix::identity(V + I), relhat);

    ctx.wmt_solver = std::make_shared<SnfSolver>(ctx.Wm.transpose());

    // AJ_m on the basis {v - v0} ∪ I
    IntMatrix ajm(km, V - 1 + I);
    IntMatrix wmt = ctx.Wm.transpose();
    for (std::size_t j = 1; j < V; ++j) {
        Vec d(V, Int(0));
        d[j] = 1;
        d[0] = -1;
        std::optional<Vec> gamma = ctx.base.boundary_solver->solve(d);
        if (!gamma) throw Error("internal: missing path in connected graph");
        ajm.set_col(j - 1, wmt * extend_by_zero(*gamma, I));
    }
    for (std::size_t i = 0; i < I; ++i) {
        Vec ei(E + I, Int(0));
        ei[E + i] = 1;
        ajm.set_col(V - 1 + i, wmt * ei);
    }
    ctx.aj_m = induced_hom(ctx.cl0m, ctx.jm, ajm);

    // χ_m = (d♯, id)
    IntMatrix chim(V + I, E + I);
    for (std::size_t v = 0; v < V; ++v)
        for (std::size_t e = 0; e < E; ++e) chim(v, e) = c.d_adj(v, e);
    for (std::size_t i = 0; i < I; ++i) chim(V + i, E + i) = 1;
    ctx.chi_m = induced_hom(ctx.pm, ctx.clhat0m, chim);

    ctx.theta_m = induced_hom(ctx.pm, ctx.jm, wmt);

    IntMatrix zm(E + I, km);
    for (std::size_t j = 0; j < km; ++j) {
        Vec lam(km, Int(0));
        lam[j] = 1;
        std::optional<Vec> om = ctx.wmt_solver->solve(lam);
        if (!om) throw Error("internal: Wmᵀ not surjective");
        zm.set_col(j, *om);
    }
    ctx.zeta_m = induced_hom(ctx.jm, ctx.pm, zm);

    IntMatrix im(V + I, V - 1 + I);
    for (std::size_t j = 1; j < V; ++j) {
        im(j, j - 1) = 1;
        im(0, j - 1) = -1;
    }
    for (std::size_t i = 0; i < I; ++i) im(V + i, V - 1 + i) = 1;
    ctx.iota_m = induced_hom(ctx.cl0m, ctx.clhat0m, im);

    return ctx;
}

inline FgAbGroup ray_class_group0(const Graph& g, const Modulus& m) {
    return make_modulus_context(g, m).cl0m;
}

inline FgAbGroup generalized_jacobian(const Graph& g, const Modulus& m) {
    return make_modulus_context(g, m).jm;
}

// AJ_m(D, n) with D a degree-zero divisor on Γ and n ∈ Z[I].
inline GroupElement abel_jacobi_m(const ModulusContext& ctx, const Vec& divisor, const Vec& n) {
    const std::size_t V = ctx.graph().num_vertices(), E = ctx.graph().num_edges();
    const std::size_t I = ctx.isize();
    if (divisor.size() != V || n.size() != I) throw Error("abel_jacobi_m: bad input lengths");
    Int deg = 0;
    for (const Int& x : divisor) deg += x;
    if (deg != 0) throw NonZeroDegree("abel_jacobi_m: divisor has degree " + deg.get_str());
    std::optional<Vec> gamma = ctx.base.boundary_solver->solve(divisor);
    if (!gamma) throw Error("internal: degree-zero divisor is not a boundary");
    Vec chain = extend_by_zero(*gamma, I);
    for (std::size_t i = 0; i < I; ++i) chain[E + i] = n[i];
    return ctx.jm.project(ctx.Wm.transpose() * chain);
}

// Abel's theorem for the generalized Jacobian, plus the free-rank count.
inline GroupHom verify_abel_m(const ModulusContext& ctx) {
    if (ctx.jm.free_rank() != ctx.isize() - 1)
        throw TheoremViolation("J_m free rank " + std::to_string(ctx.jm.free_rank()) +
                               " != |I|-1 = " + std::to_string(ctx.isize() - 1));
    if (!ctx.aj_m.is_isomorphism())
        throw TheoremViolation("generalized Abel: AJ_m is not an isomorphism");
    return ctx.aj_m;
}

struct GeneralizedPicard {
    FgAbGroup pm;
    GroupHom chi_m, zeta_m;
};

// P_m with χ_m and ζ_m; asserts the ι_m = χ_m∘ζ_m∘AJ_m tower.
inline GeneralizedPicard generalized_picard(const ModulusContext& ctx) {
    if (!ctx.chi_m.is_isomorphism()) throw TheoremViolation("χ_m is not an isomorphism");
    if (!ctx.zeta_m.is_isomorphism()) throw TheoremViolation("ζ_m is not an isomorphism");
    if (!ctx.zeta_m.compose_after(ctx.theta_m).equals(GroupHom::identity(ctx.pm)))
        throw TheoremViolation("ζ_m∘θ_m ≠ id");
    GroupHom comp = ctx.chi_m.compose_after(ctx.zeta_m.compose_after(ctx.aj_m));
    if (!comp.equals(ctx.iota_m)) throw TheoremViolation("diagram: ι_m ≠ χ_m∘ζ_m∘AJ_m");
    return GeneralizedPicard{ctx.pm, ctx.chi_m, ctx.zeta_m};
}

struct ExtensionReport {
    bool jm_sequence = false;       // 0 -> Z -> Z[I] -> J_m -> J -> 0
    bool pm_sequence = false;       // 0 -> Z^I/Z -> P_m -> P -> 0
    bool reduced_presentations = true;  // alternative presentations agree (reduced m only)
    bool reduced_checked = false;
    bool pushout = true;            // non-reduced m only: pushout from the reduction
    std::string witness;

    bool all_pass() const {
        return jm_sequence && pm_sequence && reduced_presentations && pushout;
    }
};

inline bool verify_reduction_pushout(const Graph& g, const Modulus& m);

inline ExtensionReport extension_sequences(const ModulusContext& ctx) {
    ExtensionReport rep;
    const std::size_t V = ctx.graph().num_vertices(), E = ctx.graph().num_edges();
    const std::size_t I = ctx.isize();
    const std::size_t km = ctx.Wm.cols();

    // (a) 0 -> Z --(1 ↦ Σi)--> Z[I] --(i ↦ ε_i)--> J_m --ᵀj_!--> J -> 0
    {
        FgAbGroup z = FgAbGroup::free_group(1);
        FgAbGroup zi = FgAbGroup::free_group(I);
        IntMatrix diag(I, 1);
        for (std::size_t i = 0; i < I; ++i) diag(i, 0) = 1;
        GroupHom z_to_zi = induced_hom(z, zi, diag);

        IntMatrix eps(km, I);
        for (std::size_t i = 0; i < I; ++i) {
            Vec ei(E + I, Int(0));
            ei[E + i] = 1;
            eps.set_col(i, ctx.Wm.transpose() * ei);
        }
        GroupHom zi_to_jm = induced_hom(zi, ctx.jm, eps);

        // ᵀj_! on dual coordinates: column j solves Wm c = j_!(W_j)
        SnfSolver wm_solver(ctx.Wm);
        IntMatrix cmat(km, ctx.base.W.cols());
        for (std::size_t j = 0; j < ctx.base.W.cols(); ++j) {
            std::optional<Vec> cj = wm_solver.solve(extend_by_zero(ctx.base.W.col(j), I));
            if (!cj) throw Error("internal: j_! Ha¹(Γ) not inside Ha¹(Γ_m)");
            cmat.set_col(j, *cj);
        }
        GroupHom jm_to_j = induced_hom(ctx.jm, ctx.base.jac, cmat.transpose());

        bool ok = z_to_zi.is_injective();
        auto w1 = exactness_failure(z_to_zi, zi_to_jm);
        auto w2 = exactness_failure(zi_to_jm, jm_to_j);
        bool surj = jm_to_j.is_surjective();
        rep.jm_sequence = ok && !w1 && !w2 && surj;
        if (!rep.jm_sequence)
            rep.witness += "[J_m sequence: " + w1.value_or(w2.value_or(surj ? "ends fail" : "not surjective")) + "]";
    }

    // (b) 0 -> Z^I/Z -> P_m --j^*--> P -> 0
    {
        IntMatrix ones(I, 1);
        for (std::size_t i = 0; i < I; ++i) ones(i, 0) = 1;
        FgAbGroup zi_mod_z = subquotient(I, IntMatrix::identity(I), ones);
        IntMatrix incl(E + I, I);
        for (std::size_t i = 0; i < I; ++i) incl(E + i, i) = 1;
        GroupHom k_to_pm = induced_hom(zi_mod_z, ctx.pm, incl);
        IntMatrix proj(E, E + I);
        for (std::size_t e = 0; e < E; ++e) proj(e, e) = 1;
        GroupHom pm_to_p = induced_hom(ctx.pm, ctx.base.pic, proj);

        bool inj = k_to_pm.is_injective();
        auto w = exactness_failure(k_to_pm, pm_to_p);
        bool surj = pm_to_p.is_surjective();
        rep.pm_sequence = inj && !w && surj;
        if (!rep.pm_sequence)
            rep.witness += "[P_m sequence: " + w.value_or(inj ? "not surjective" : "not injective") + "]";
    }

    // reduced presentations: Cl0_m ≅ Z[V]_0/Δ0(Z[V∖S]) and
    // Chat_m ≅ Z^V/□0(Z^{V∖S}), via D ↦ (D,0) and f ↦ (f,0)
    if (ctx.modulus.is_reduced()) {
        rep.reduced_checked = true;
        std::vector<bool> in_s(V, false);
        for (std::size_t i = 0; i < I; ++i) in_s[ctx.modulus.target(i)] = true;
        std::vector<std::size_t> outside;
        for (std::size_t v = 0; v < V; ++v)
            if (!in_s[v]) outside.push_back(v);

        IntMatrix rel_alt0 = ctx.base.complex.lap0.drop_row(0).take_cols(outside);
        FgAbGroup cl0_alt = subquotient(V - 1, IntMatrix::identity(V - 1), rel_alt0);
        IntMatrix emb0(V - 1 + I, V - 1);
        for (std::size_t j = 0; j < V - 1; ++j) emb0(j, j) = 1;
        bool ok0 = induced_hom(cl0_alt, ctx.cl0m, emb0).is_isomorphism();

        IntMatrix rel_alth = ctx.base.complex.box0.take_cols(outside);
        FgAbGroup clhat_alt = subquotient(V, IntMatrix::identity(V), rel_alth);
        IntMatrix embh(V + I, V);
        for (std::size_t j = 0; j < V; ++j) embh(j, j) = 1;
        bool okh = induced_hom(clhat_alt, ctx.clhatm, embh).is_isomorphism();

        rep.reduced_presentations = ok0 && okh;
        if (!rep.reduced_presentations) rep.witness += "[reduced presentation fails]";
    } else {
        rep.pushout = verify_reduction_pushout(ctx.graph(), ctx.modulus);
        if (!rep.pushout) rep.witness += "[reduction pushout fails]";
    }
    return rep;
}

// The non-reduced ray class group is the pushout of the reduced one along
// Z[S] -> Z[I]. Builds the pushout presentation explicitly and checks that
// the induced map to Cl0_m is an isomorphism.
inline bool verify_reduction_pushout(const Graph& g, const Modulus& m) {
    std::vector<std::size_t> supp = m.support();
    std::vector<std::string> names;
    for (std::size_t v : supp) names.push_back(g.vertex_name(v));
    Modulus m0 = Modulus::build(g, names);
    ModulusContext full = make_modulus_context(g, m);
    ModulusContext red = make_modulus_context(g, m0);

    const std::size_t V = g.num_vertices(), I = m.size(), S = supp.size();
    const std::size_t g0 = V - 1 + S;  // generators of Cl0_{m0} presentation

    // pushout of Z[S] -> Cl0_{m0} and Z[S] -> Z[I]: generators of Cl0_{m0}
    // followed by Z[I]; relations: Cl0_{m0} relations and (s-class, -I(s))
    IntMatrix rel0 = red.cl0m.relations_ambient();  // (g0) x V
    IntMatrix relA = rel0.vcat(IntMatrix(I, rel0.cols()));
    IntMatrix relB(g0 + I, S);
    for (std::size_t s = 0; s < S; ++s) {
        relB(V - 1 + s, s) = 1;  // the class of index s in Cl0_{m0} coordinates
        for (std::size_t i : m.indices_at(supp[s])) relB(g0 + i, s) = -1;
    }
    FgAbGroup push = subquotient(g0 + I, IntMatrix::identity(g0 + I), relA.hcat(relB));

    // induced map to Cl0_m: Cl0_{m0}-part by (D,a) ↦ (D, Σ_{ρ(i)=s} i),
    // Z[I]-part by inclusion
    IntMatrix pm(V - 1 + I, g0 + I);
    for (std::size_t j = 0; j < V - 1; ++j) pm(j, j) = 1;
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t i : m.indices_at(supp[s])) pm(V - 1 + i, V - 1 + s) = 1;
    for (std::size_t i = 0; i < I; ++i) pm(V - 1 + i, g0 + i) = 1;
    return induced_hom(push, full.cl0m, pm).is_isomorphism();
}

struct ExtDualityReport {
    int epsilon = 0;  // +1 / -1; 0 = undetermined (all comparisons degenerate)
    std::size_t pairs_checked = 0;
    bool consistent = true;
    std::string witness;
};

// Thm "Ext class = ±AJ∘ρ_*": the connecting homomorphism of
// 0 -> Z^I/Z -> P_m -> P -> 0, computed by the n·x̃ recipe, equals
// ⟨AJ(ρ_* −), −⟩ up to one global sign.
inline ExtDualityReport ext_class_vs_aj(const ModulusContext& ctx) {
    ExtDualityReport rep;
    const std::size_t V = ctx.graph().num_vertices(), E = ctx.graph().num_edges();
    const std::size_t I = ctx.isize();
    if (I < 2) return rep;  // Z[I]_0 = 0: vacuous

    for (std::size_t s = 1; s < I; ++s) {
        // D = i_s - i_0 ∈ Z[I]_0
        Vec dI(I, Int(0));
        dI[s] = 1;
        dI[0] = -1;
        Vec rhoD(V, Int(0));
        rhoD[ctx.modulus.target(s)] += 1;
        rhoD[ctx.modulus.target(0)] -= 1;
        GroupElement ajrd = abel_jacobi(ctx.base, rhoD);

        for (std::size_t e = 0; e < E; ++e) {
            Vec omega(E, Int(0));
            omega[e] = 1;
            GroupElement x = ctx.base.pic.project(omega);
            Int n = ctx.base.pic.element_order(x);
            // n·ω = W·a + d·f ; the lift class n·x̃ is (0, -ρᵀf) in Z^I/Z
            std::optional<Vec> af = ctx.base.wd_solver->solve(vec_scale(n, omega));
            if (!af) throw Error("ext_class_vs_aj: decomposition failed");
            const std::size_t k = ctx.base.W.cols();
            Vec f((*af).begin() + k, (*af).end());
            Int gd = 0;
            for (std::size_t i = 0; i < I; ++i) gd -= f[ctx.modulus.target(i)] * dI[i];
            Rat lhs = mod_one(Rat(gd, n));
            Rat rhs = duality_pairing(ctx.base, ajrd, x);
            Rat neg_rhs = mod_one(-rhs);
            ++rep.pairs_checked;
            if (lhs == rhs && lhs == neg_rhs) continue;  // degenerate (0 or 1/2)
            int eps = 0;
            if (lhs == rhs) eps = 1;
            else if (lhs == neg_rhs) eps = -1;
            else {
                rep.consistent = false;
                rep.witness = "ext class " + graphjac::to_string(lhs) + " vs pairing " +
                              graphjac::to_string(rhs) + " at edge " +
                              ctx.graph().edge(e).id;
                return rep;
            }
            if (rep.epsilon == 0) rep.epsilon = eps;
            else if (rep.epsilon != eps) {
                rep.consistent = false;
                rep.witness = "sign flips at edge " + ctx.graph().edge(e).id;
                return rep;
            }
        }
    }
    return rep;
}

}  // namespace graphjac
