#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "graphjac/genjac.hpp"

namespace graphjac {

// Minimal algebraic setup: a 2-term complex C0 <-∂- C1 with symmetric
// bilinear forms and formal adjoints, plus an auxiliary lattice L with
// ρ: L -> C0 and its formal adjoint. All the class/Jacobian/Picard groups
// and the Abel-Jacobi map exist at this level of generality; the graph
// theory is the instantiation with standard orthonormal bases.
struct AbstractSystem {
    std::size_t c0_rank = 0, c1_rank = 0, l_rank = 0;
    IntMatrix boundary;          // ∂  : C1 -> C0
    IntMatrix adjoint_boundary;  // ∂♯ : C0 -> C1
    IntMatrix rho;               // ρ  : L  -> C0
    IntMatrix rho_adj;           // ρ♯ : C0 -> L
    IntMatrix gram0, gram1, gramL;

    static AbstractSystem build(IntMatrix boundary, IntMatrix adjoint_boundary, IntMatrix rho,
                                IntMatrix rho_adj, IntMatrix gram0, IntMatrix gram1,
                                IntMatrix gramL) {
        AbstractSystem s;
        s.c0_rank = boundary.rows();
        s.c1_rank = boundary.cols();
        s.l_rank = rho.cols();
        s.boundary = std::move(boundary);
        s.adjoint_boundary = std::move(adjoint_boundary);
        s.rho = std::move(rho);
        s.rho_adj = std::move(rho_adj);
        s.gram0 = std::move(gram0);
        s.gram1 = std::move(gram1);
        s.gramL = std::move(gramL);
        if (s.gram0 != s.gram0.transpose() || s.gram1 != s.gram1.transpose() ||
            s.gramL != s.gramL.transpose())
            throw AdjointnessViolated("gram matrices must be symmetric");
        // ⟨x, ∂y⟩0 = ⟨∂♯x, y⟩1  ⟺  G0·∂ = ᵀ∂♯·G1
        if (s.gram0 * s.boundary != s.adjoint_boundary.transpose() * s.gram1)
            throw AdjointnessViolated("∂♯ is not a formal adjoint of ∂");
        // ⟨ρl, x⟩0 = ⟨l, ρ♯x⟩L  ⟺  ᵀρ·G0 = GL·ρ♯
        if (s.rho.transpose() * s.gram0 != s.gramL * s.rho_adj)
            throw AdjointnessViolated("ρ♯ is not a formal adjoint of ρ");
        return s;
    }
};

// Output of the abstract engine. The commuting diagram through the lift X is
// verified at construction; isomorphy of AJ_L and ζ_L is asserted only for
// instantiations where the ι maps are isomorphisms (see
// verify_abstract_matches_direct).
struct AbstractEngine {
    FgAbGroup clL0, clhatL0, jL, pL, pbarL;
    GroupHom ajL, chiL, zetaL, iotaL;
    GroupHom cl_to_p;   // the lift X with χ_L∘X = ι_L
    GroupHom p_to_pbar; // P̄_L -> P̄̄_L
    IntMatrix Wt;       // basis of ker d_L♯ ⊆ C¹ ⊕ M
    IntMatrix Kt;       // basis of ker ∂ ⊆ C1
};

inline AbstractEngine abstract_engine(const AbstractSystem& s) {
    AbstractEngine e;
    const std::size_t c0 = s.c0_rank, c1 = s.c1_rank, l = s.l_rank;
    IntMatrix d = s.boundary.transpose();          // C⁰ -> C¹
    IntMatrix d_adj = s.adjoint_boundary.transpose();  // C¹ -> C⁰
    IntMatrix r = s.rho.transpose();               // C⁰ -> M
    IntMatrix r_adj = s.rho_adj.transpose();       // M  -> C⁰
    IntMatrix box0 = d_adj * d;

    e.Kt = kernel_basis(s.boundary);
    IntMatrix w1 = kernel_basis(d_adj);                  // ker d♯ ⊆ C¹
    e.Wt = kernel_basis(d_adj.hcat(r_adj));              // ker d_L♯ ⊆ C¹ ⊕ M
    IntMatrix ktL = kernel_basis(s.boundary.hcat(s.rho));  // ker ∂_L ⊆ C1 ⊕ L

    // C̄l⁰_L = (im ∂ ⊕ L)/(Δ0, ρ♯)C0
    IntMatrix im_b = image_basis(s.boundary);
    IntMatrix num_cl = im_b.hcat(IntMatrix(c0, l)).vcat(
        IntMatrix(l, im_b.cols()).hcat(IntMatrix::identity(l)));
    IntMatrix rel_cl = (s.boundary * s.adjoint_boundary).vcat(s.rho_adj);
    e.clL0 = subquotient(c0 + l, num_cl, rel_cl);

    // Ĉ̄l⁰_L = (im d♯ ⊕ M)/(□0, r)C⁰
    IntMatrix im_dadj = image_basis(d_adj);
    IntMatrix num_clh = im_dadj.hcat(IntMatrix(c0, l)).vcat(
        IntMatrix(l, im_dadj.cols()).hcat(IntMatrix::identity(l)));
    IntMatrix rel_clh = box0.vcat(r);
    e.clhatL0 = subquotient(c0 + l, num_clh, rel_clh);

    // J̄_L = (ker d_L♯)∨ / α̃(ker ∂)
    const std::size_t kw = e.Wt.cols();
    IntMatrix jrel = e.Wt.transpose() * e.Kt.vcat(IntMatrix(l, e.Kt.cols()));
    e.jL = subquotient(kw, IntMatrix::identity(kw), jrel);

    // P̄_L = (C¹ ⊕ M)/((ker d♯) ⊕ 0 + im d_L)
    IntMatrix dl = d.vcat(r);
    e.pL = subquotient(c1 + l, IntMatrix::identity(c1 + l),
                       w1.vcat(IntMatrix(l, w1.cols())).hcat(dl));

    // P̄̄_L = (ker ∂_L)∨ / α̃'(ker d♯)
    const std::size_t kk = ktL.cols();
    IntMatrix pbrel = ktL.transpose() * w1.vcat(IntMatrix(l, w1.cols()));
    e.pbarL = subquotient(kk, IntMatrix::identity(kk), pbrel);

    // AJ_L: class of (∂x, l) ↦ class of (y,m) ↦ ⟨⟨x,y⟩⟩1 + ⟨⟨l,m⟩⟩L
    SnfSolver bsolver(s.boundary);
    std::vector<Vec> aj_images;
    for (std::size_t j = 0; j < e.clL0.num_generators(); ++j) {
        Vec gen = e.clL0.generator_ambient(j);
        Vec b(gen.begin(), gen.begin() + c0);
        Vec lpart(gen.begin() + c0, gen.end());
        std::optional<Vec> x = bsolver.solve(b);
        if (!x) throw Error("abstract_engine: generator not of the form (∂x, l)");
        Vec xl = *x;
        xl.insert(xl.end(), lpart.begin(), lpart.end());
        aj_images.push_back(e.Wt.transpose() * xl);
    }
    e.ajL = hom_from_generator_images(e.clL0, e.jL, aj_images);

    // χ_L = (d♯, id): P̄_L -> Ĉ̄l⁰_L, an isomorphism for every system
    IntMatrix chim = d_adj.hcat(IntMatrix(c0, l)).vcat(
        IntMatrix(l, c1).hcat(IntMatrix::identity(l)));
    e.chiL = induced_hom(e.pL, e.clhatL0, chim);
    if (!e.chiL.is_isomorphism()) throw TheoremViolation("abstract engine: χ_L not an isomorphism");

    // lift X: class of (∂x, l) ↦ class of ι1(x, l) = (G1 x, GL l) in P̄_L
    std::vector<Vec> x_images;
    for (std::size_t j = 0; j < e.clL0.num_generators(); ++j) {
        Vec gen = e.clL0.generator_ambient(j);
        Vec b(gen.begin(), gen.begin() + c0);
        Vec lpart(gen.begin() + c0, gen.end());
        std::optional<Vec> x = bsolver.solve(b);
        Vec g1x = s.gram1 * *x;
        Vec gll = s.gramL * lpart;
        g1x.insert(g1x.end(), gll.begin(), gll.end());
        x_images.push_back(g1x);
    }
    e.cl_to_p = hom_from_generator_images(e.clL0, e.pL, x_images);

    // ι0 ⊕ ιL
    IntMatrix iom = s.gram0.hcat(IntMatrix(c0, l)).vcat(IntMatrix(l, c0).hcat(s.gramL));
    e.iotaL = induced_hom(e.clL0, e.clhatL0, iom);

    // ζ_L: J̄_L -> P̄̄_L via ᵀ(ι1 ⊕ ιL); column j solves Wt c = G̃·ktL_j
    IntMatrix gtilde = s.gram1.hcat(IntMatrix(c1, l)).vcat(IntMatrix(l, c1).hcat(s.gramL));
    SnfSolver wt_solver(e.Wt);
    IntMatrix zc(kw, kk);
    for (std::size_t j = 0; j < kk; ++j) {
        std::optional<Vec> c = wt_solver.solve(gtilde * ktL.col(j));
        if (!c) throw Error("abstract_engine: ι1(ker ∂_L) escapes ker d_L♯");
        zc.set_col(j, *c);
    }
    e.zetaL = induced_hom(e.jL, e.pbarL, zc.transpose());

    e.p_to_pbar = induced_hom(e.pL, e.pbarL, ktL.transpose());

    // the engine diagram: χ_L∘X = ι and ζ_L∘AJ_L = q∘X
    if (!e.chiL.compose_after(e.cl_to_p).equals(e.iotaL))
        throw TheoremViolation("abstract engine: χ_L∘X ≠ ι0⊕ιL");
    if (!e.zetaL.compose_after(e.ajL).equals(e.p_to_pbar.compose_after(e.cl_to_p)))
        throw TheoremViolation("abstract engine: ζ_L∘AJ_L ≠ q∘X");
    return e;
}

// The graph instantiation: standard orthonormal bases on C0, C1, L = Z[I].
inline AbstractSystem graph_abstract_system(const GraphComplex& c, const Modulus& m) {
    const std::size_t V = c.graph.num_vertices(), I = m.size();
    IntMatrix rho(V, I), rho_adj(I, V);
    for (std::size_t i = 0; i < I; ++i) {
        rho(m.target(i), i) = 1;
        rho_adj(i, m.target(i)) = 1;
    }
    return AbstractSystem::build(c.boundary, c.adjoint_boundary, rho, rho_adj,
                                 IntMatrix::identity(V),
                                 IntMatrix::identity(c.graph.num_edges()),
                                 IntMatrix::identity(I));
}

// The §3.9 equivalence: the engine run on the graph system reproduces every
// group and hom of the direct ModulusContext, through explicit base-change
// isomorphisms.
inline void verify_abstract_matches_direct(const ModulusContext& ctx) {
    const Graph& g = ctx.graph();
    const std::size_t V = g.num_vertices(), E = g.num_edges(), I = ctx.isize();
    AbstractEngine e = abstract_engine(graph_abstract_system(ctx.base.complex, ctx.modulus));

    if (!e.clL0.isomorphic_invariants(ctx.cl0m) || !e.jL.isomorphic_invariants(ctx.jm) ||
        !e.pL.isomorphic_invariants(ctx.pm) || !e.clhatL0.isomorphic_invariants(ctx.clhat0m))
        throw TheoremViolation("abstract engine groups differ from the direct computation");

    // Cl side: ambient Z^{V-1}⊕Z^I -> Z^V⊕Z^I by (v - v0)-expansion
    IntMatrix f(V + I, V - 1 + I);
    for (std::size_t j = 1; j < V; ++j) {
        f(j, j - 1) = 1;
        f(0, j - 1) = -1;
    }
    for (std::size_t i = 0; i < I; ++i) f(V + i, V - 1 + i) = 1;
    GroupHom iso_cl = induced_hom(ctx.cl0m, e.clL0, f);
    if (!iso_cl.is_isomorphism()) throw TheoremViolation("abstract engine: Cl transport fails");

    // J side: Wm and Wt are bases of the same kernel lattice
    SnfSolver wm(ctx.Wm);
    IntMatrix cmat(ctx.Wm.cols(), e.Wt.cols());
    for (std::size_t j = 0; j < e.Wt.cols(); ++j) {
        std::optional<Vec> c = wm.solve(e.Wt.col(j));
        if (!c) throw TheoremViolation("abstract engine: ker d_L♯ != Ha¹(Γ_m)");
        cmat.set_col(j, *c);
    }
    GroupHom iso_j = induced_hom(ctx.jm, e.jL, cmat.transpose());
    if (!iso_j.is_isomorphism()) throw TheoremViolation("abstract engine: J transport fails");

    // P side: identical ambient and relation lattices
    GroupHom iso_p = induced_hom(ctx.pm, e.pL, IntMatrix::identity(E + I));
    if (!iso_p.is_isomorphism()) throw TheoremViolation("abstract engine: P transport fails");

    GroupHom iso_clh = induced_hom(ctx.clhat0m, e.clhatL0, IntMatrix::identity(V + I));
    if (!iso_clh.is_isomorphism()) throw TheoremViolation("abstract engine: Chat transport fails");

    // hom-by-hom agreement through the transports
    if (!e.ajL.compose_after(iso_cl).equals(iso_j.compose_after(ctx.aj_m)))
        throw TheoremViolation("abstract engine: AJ_L disagrees with AJ_m");
    if (!e.chiL.compose_after(iso_p).equals(iso_clh.compose_after(ctx.chi_m)))
        throw TheoremViolation("abstract engine: χ_L disagrees with χ_m");
    if (!e.iotaL.compose_after(iso_cl).equals(iso_clh.compose_after(ctx.iota_m)))
        throw TheoremViolation("abstract engine: ι_L disagrees with ι_m");
    // ζ through P̄̄: the direct ζ_m lands in P_m, compare after pushing to P̄̄_L
    GroupHom lhs = e.zetaL.compose_after(iso_j);
    GroupHom rhs = e.p_to_pbar.compose_after(iso_p.compose_after(ctx.zeta_m));
    if (!lhs.equals(rhs))
        throw TheoremViolation("abstract engine: ζ_L disagrees with ζ_m");
}

}  // namespace graphjac
