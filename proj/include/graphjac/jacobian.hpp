#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "graphjac/abelian.hpp"
#include "graphjac/complexes.hpp"

namespace graphjac {

// Rational Gaussian elimination, used only for exact Q/Z
// pairing values (discriminant pairings). Returns x with m*x = b over Q.
inline std::vector<Rat> rational_solve(const IntMatrix& m, const std::vector<Rat>& b) {
    const std::size_t n = m.rows();
    if (m.cols() != n || b.size() != n) throw Error("rational_solve: need square system");
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = Rat(m(i, j));
        a[i][n] = b[i];
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) throw Error("rational_solve: singular matrix");
        std::swap(a[c], a[p]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c] == 0) continue;
            Rat f = a[i][c] / a[c][c];
            for (std::size_t j = c; j <= n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    std::vector<Rat> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = a[i][n] / a[i][i];
        x[i].canonicalize();
    }
    return x;
}

// The empty-modulus theory of a finite connected graph: Cl, Cl0, J, P, Chat0
// and the maps between them, all as verified subquotient presentations.
//
//   Cl0  = Z[V]_0 / Δ0 Z[V]        on the basis {v - v0}, v0 the first vertex
//   J    = Z^k / im(Wᵀ·K)          on the dual basis of W (k = rank Ha¹)
//   P    = Z^E / (d C⁰ + Ha¹)
//   Chat0 = im d♯ / □0 Z^V
struct JacobianContext {
    GraphComplex complex;
    IntMatrix W;  // saturated basis of Ha¹ = ker d♯
    IntMatrix K;  // saturated basis of H₁ = ker ∂
    FgAbGroup cl, cl0, jac, pic, clhat, clhat0;
    GroupHom aj, chi, zeta, theta, iota0;
    std::shared_ptr<SnfSolver> boundary_solver;  // for γ with ∂γ = D
    std::shared_ptr<SnfSolver> wd_solver;        // [W | d] for pairing decompositions
    std::shared_ptr<SnfSolver> wt_solver;        // Wᵀ for ζ-style lifts

    const Graph& graph() const { return complex.graph; }
};

inline JacobianContext make_jacobian_context(const Graph& g) {
    if (!g.is_connected()) throw NotConnected("graph is not connected");
    JacobianContext ctx;
    ctx.complex = make_complex(g);
    const GraphComplex& c = ctx.complex;
    const std::size_t V = g.num_vertices(), E = g.num_edges();
    ctx.W = harmonic_one_forms(c);
    ctx.K = cycle_space(c);
    const std::size_t k = ctx.W.cols();

    ctx.cl = subquotient(V, IntMatrix::identity(V), c.lap0);
    ctx.cl0 = subquotient(V - 1, IntMatrix::identity(V - 1), c.lap0.drop_row(0));
    ctx.jac = subquotient(k, IntMatrix::identity(k), ctx.W.transpose() * ctx.K);
    ctx.pic = subquotient(E, IntMatrix::identity(E), c.d.hcat(ctx.W));
    ctx.clhat = subquotient(V, IntMatrix::identity(V), c.box0);
    ctx.clhat0 = subquotient(V, image_basis(c.d_adj), c.box0);

    ctx.boundary_solver = std::make_shared<SnfSolver>(c.boundary);
    ctx.wd_solver = std::make_shared<SnfSolver>(ctx.W.hcat(c.d));
    ctx.wt_solver = std::make_shared<SnfSolver>(ctx.W.transpose());

    // AJ on the basis {v - v0}: solve ∂γ = v - v0, take ω ↦ ω(γ).
    IntMatrix ajm(k, V - 1);
    IntMatrix wt = ctx.W.transpose();
    for (std::size_t j = 1; j < V; ++j) {
        Vec d(V, Int(0));
        d[j] = 1;
        d[0] = -1;
        std::optional<Vec> gamma = ctx.boundary_solver->solve(d);
        if (!gamma) throw Error("internal: no path found in a connected graph");
        ajm.set_col(j - 1, wt * *gamma);
    }
    ctx.aj = induced_hom(ctx.cl0, ctx.jac, ajm);

    ctx.chi = induced_hom(ctx.pic, ctx.clhat0, c.d_adj);
    ctx.theta = induced_hom(ctx.pic, ctx.jac, wt);

    // ζ = θ⁻¹ in the finite case: solve Wᵀω = λ on the dual basis.
    IntMatrix zm(E, k);
    for (std::size_t j = 0; j < k; ++j) {
        Vec lam(k, Int(0));
        lam[j] = 1;
        std::optional<Vec> om = ctx.wt_solver->solve(lam);
        if (!om) throw Error("internal: Wᵀ not surjective on a saturated basis");
        zm.set_col(j, *om);
    }
    ctx.zeta = induced_hom(ctx.jac, ctx.pic, zm);

    IntMatrix im(V, V - 1);
    for (std::size_t j = 1; j < V; ++j) {
        im(j, j - 1) = 1;
        im(0, j - 1) = -1;
    }
    ctx.iota0 = induced_hom(ctx.cl0, ctx.clhat0, im);

    // sanity: the four groups are finite of a common order
    Int n = ctx.jac.order();
    if (n == 0 || ctx.cl0.order() != n || ctx.pic.order() != n || ctx.clhat0.order() != n)
        throw TheoremViolation("jacobian context: group orders disagree on " +
                               std::to_string(V) + " vertices");
    return ctx;
}

inline FgAbGroup jacobian_group(const Graph& g) { return make_jacobian_context(g).jac; }

inline GroupElement abel_jacobi(const JacobianContext& ctx, const Vec& divisor) {
    if (divisor.size() != ctx.graph().num_vertices()) throw Error("abel_jacobi: bad divisor length");
    Int deg = 0;
    for (const Int& x : divisor) deg += x;
    if (deg != 0) throw NonZeroDegree("abel_jacobi: divisor has degree " + deg.get_str());
    std::optional<Vec> gamma = ctx.boundary_solver->solve(divisor);
    if (!gamma) throw Error("internal: degree-zero divisor is not a boundary");
    return ctx.jac.project(ctx.W.transpose() * *gamma);
}

// Abel's theorem: AJ is an isomorphism Cl0 ≅ J.
inline GroupHom verify_abel(const JacobianContext& ctx) {
    if (!ctx.aj.is_isomorphism())
        throw TheoremViolation("Abel: AJ is not an isomorphism on " +
                               std::to_string(ctx.graph().num_vertices()) + " vertices");
    return ctx.aj;
}

struct PicardMaps {
    GroupHom chi;          // P ≅ Chat0, induced by d♯
    GroupHom zeta;         // J ≅ P
    IntMatrix theta_tilde; // Wᵀ : C¹ -> Ha¹∨
};

inline PicardMaps picard_maps(const JacobianContext& ctx) {
    if (!ctx.chi.is_isomorphism()) throw TheoremViolation("picard_maps: χ not an isomorphism");
    if (!ctx.zeta.is_isomorphism()) throw TheoremViolation("picard_maps: ζ not an isomorphism");
    if (!ctx.zeta.compose_after(ctx.theta).equals(GroupHom::identity(ctx.pic)))
        throw TheoremViolation("picard_maps: ζ∘θ ≠ id, ζ is not θ⁻¹");
    return PicardMaps{ctx.chi, ctx.zeta, ctx.W.transpose()};
}

// Commutativity ι0 = χ∘ζ∘AJ (the finite-graph diagram tower).
inline void verify_diagram_tower(const JacobianContext& ctx) {
    GroupHom comp = ctx.chi.compose_after(ctx.zeta.compose_after(ctx.aj));
    if (!comp.equals(ctx.iota0))
        throw TheoremViolation("diagram: ι0 ≠ χ∘ζ∘AJ on " +
                               std::to_string(ctx.graph().num_vertices()) + " vertices");
    verify_abel(ctx);
    picard_maps(ctx);
}

// ⟨j, p⟩ = λ(a)/n mod 1, where λ represents j on the dual basis of W, ω
// represents p, and n·ω = W·a + d·f is solved exactly (n = ord p).
inline Rat duality_pairing(const JacobianContext& ctx, const GroupElement& j,
                           const GroupElement& p) {
    Vec lambda = ctx.jac.representative(j);
    Vec omega = ctx.pic.representative(p);
    Int n = ctx.pic.element_order(p);
    if (n == 0) throw Error("duality_pairing: infinite order in a finite group");
    std::optional<Vec> af = ctx.wd_solver->solve(vec_scale(n, omega));
    if (!af) throw Error("duality_pairing: n·ω not in W + dC⁰");
    Int la = 0;
    for (std::size_t i = 0; i < lambda.size(); ++i) la += lambda[i] * (*af)[i];
    return mod_one(Rat(la, n));
}

// Perfection of the J × P pairing: trivial kernel on both sides, checked by
// exact congruences on generators.
inline std::optional<std::string> pairing_perfection_failure(const JacobianContext& ctx) {
    const std::size_t a = ctx.jac.num_generators(), b = ctx.pic.num_generators();
    Int l = 1;
    for (const Int& d : ctx.jac.invariant_factors()) l = int_lcm(l, d);
    for (const Int& d : ctx.pic.invariant_factors()) l = int_lcm(l, d);
    // A(i,j) = l * ⟨g_i, h_j⟩ as an integer mod l
    IntMatrix A(a, b);
    for (std::size_t i = 0; i < a; ++i) {
        GroupElement gi = ctx.jac.project(ctx.jac.generator_ambient(i));
        for (std::size_t j = 0; j < b; ++j) {
            GroupElement hj = ctx.pic.project(ctx.pic.generator_ambient(j));
            Rat q = duality_pairing(ctx, gi, hj) * Rat(l);
            q.canonicalize();
            if (q.get_den() != 1) throw Error("pairing denominator does not divide the exponent");
            A(i, j) = q.get_num();
        }
    }
    // left kernel: x with Aᵀx ≡ 0 (mod l) must die in J
    {
        IntMatrix blk = A.transpose().hcat(IntMatrix::identity(b) * l);
        IntMatrix ker = kernel_basis(blk);
        for (std::size_t j = 0; j < ker.cols(); ++j) {
            Vec x(a);
            for (std::size_t i = 0; i < a; ++i) x[i] = ker(i, j);
            if (!ctx.jac.from_gen_coords(x).is_zero())
                return "left kernel of the J×P pairing contains " + graphjac::to_string(x);
        }
    }
    // right kernel
    {
        IntMatrix blk = A.hcat(IntMatrix::identity(a) * l);
        IntMatrix ker = kernel_basis(blk);
        for (std::size_t j = 0; j < ker.cols(); ++j) {
            Vec x(b);
            for (std::size_t i = 0; i < b; ++i) x[i] = ker(i, j);
            if (!ctx.pic.from_gen_coords(x).is_zero())
                return "right kernel of the J×P pairing contains " + graphjac::to_string(x);
        }
    }
    return std::nullopt;
}

// Discriminant group L#/L of a lattice with positive definite Gram matrix,
// with its Q/Z-valued pairing. Ambient coordinates for the group are Z^r via
// x ↦ gram·x, so the group is Z^r / gram·Z^r.
struct DiscriminantGroup {
    FgAbGroup group;
    IntMatrix gram;

    Rat pair(const Vec& u, const Vec& w) const {
        std::vector<Rat> rhs(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) rhs[i] = Rat(w[i]);
        std::vector<Rat> z = rational_solve(gram, rhs);
        Rat s(0);
        for (std::size_t i = 0; i < u.size(); ++i) s += Rat(u[i]) * z[i];
        return mod_one(s);
    }

    // pairing values on the standard generators e_i
    std::vector<std::vector<Rat>> pairing_table() const {
        const std::size_t r = gram.rows();
        std::vector<std::vector<Rat>> t(r, std::vector<Rat>(r));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                Vec u(r, Int(0)), w(r, Int(0));
                u[i] = 1;
                w[j] = 1;
                t[i][j] = pair(u, w);
            }
        return t;
    }
};

inline DiscriminantGroup discriminant_group(const IntMatrix& lattice_basis,
                                            const IntMatrix& gram) {
    const std::size_t r = gram.rows();
    if (gram.cols() != r) throw Error("discriminant_group: gram must be square");
    if (lattice_basis.cols() != r) throw Error("discriminant_group: basis/gram size mismatch");
    if (gram != gram.transpose()) throw NotPositiveDefinite("gram matrix is not symmetric");
    for (std::size_t k = 1; k <= r; ++k) {
        IntMatrix lead(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) lead(i, j) = gram(i, j);
        if (determinant(lead) <= 0)
            throw NotPositiveDefinite("leading principal minor " + std::to_string(k) +
                                      " is not positive");
    }
    DiscriminantGroup d;
    d.gram = gram;
    d.group = subquotient(r, IntMatrix::identity(r), gram);
    if (d.group.order() != determinant(gram))
        throw Error("discriminant_group: |L#/L| != det(gram)");
    return d;
}

// Autoduality check: the discriminant pairing on Ha¹#/Ha¹ ≅ J has trivial
// left kernel.
inline std::optional<std::string> discriminant_autoduality_failure(const DiscriminantGroup& d) {
    const std::size_t r = d.gram.rows();
    Int l = 1;
    for (const Int& f : d.group.invariant_factors()) l = int_lcm(l, f);
    IntMatrix A(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            Vec u(r, Int(0)), w(r, Int(0));
            u[i] = 1;
            w[j] = 1;
            Rat q = d.pair(u, w) * Rat(l);
            q.canonicalize();
            if (q.get_den() != 1) return "pairing value with bad denominator";
            A(i, j) = q.get_num();
        }
    IntMatrix blk = A.transpose().hcat(IntMatrix::identity(r) * l);
    IntMatrix ker = kernel_basis(blk);
    for (std::size_t j = 0; j < ker.cols(); ++j) {
        Vec x(r);
        for (std::size_t i = 0; i < r; ++i) x[i] = ker(i, j);
        if (!d.group.from_gen_coords(x).is_zero())
            return "discriminant pairing has nontrivial left kernel at " + graphjac::to_string(x);
    }
    return std::nullopt;
}

// Universal property of Cl for harmonic maps: given h : V -> A with
// h∘Δ0 = 0, the unique hom Cl(Γ) -> A with v ↦ h(v).
inline GroupHom universal_factorization(const JacobianContext& ctx,
                                        const std::vector<GroupElement>& h,
                                        const FgAbGroup& a) {
    const Graph& g = ctx.graph();
    const std::size_t V = g.num_vertices();
    if (h.size() != V) throw Error("universal_factorization: need one value per vertex");
    for (std::size_t v = 0; v < V; ++v) {
        GroupElement acc = a.zero();
        for (std::size_t u = 0; u < V; ++u)
            acc = a.add(acc, a.scale(ctx.complex.lap0(u, v), h[u]));
        if (!acc.is_zero())
            throw NotHarmonic("map is not harmonic at vertex " + g.vertex_name(v));
    }
    IntMatrix m(a.ambient_rank(), V);
    for (std::size_t v = 0; v < V; ++v) m.set_col(v, a.representative(h[v]));
    GroupHom hom = induced_hom(ctx.cl, a, m);
    for (std::size_t v = 0; v < V; ++v) {
        Vec ev(V, Int(0));
        ev[v] = 1;
        if (hom.apply(ctx.cl.project(ev)) != h[v])
            throw Error("universal_factorization: factorization misses a vertex value");
    }
    return hom;
}

}  // namespace graphjac
