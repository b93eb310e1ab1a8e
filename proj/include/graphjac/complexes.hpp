#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "graphjac/graph.hpp"
#include "graphjac/snf.hpp"

namespace graphjac {

// Chain/cochain complexes of a finite graph in the standard bases.
//
//   boundary ∂ : Z[E] -> Z[V],  column e = t(e) - o(e)
//   adjoint  ∂♯: Z[V] -> Z[E],  column v = Σ_{t(e)=v} e - Σ_{o(e)=v} e
//   d = ᵀ∂, d♯ = ᵀ(∂♯), Δ0 = ∂∂♯, Δ1 = ∂♯∂, □p = ᵀΔp
//
// In these bases ∂ and d♯ coincide as matrices, as do ∂♯ and d (the ι maps
// are identities on a finite graph).
struct GraphComplex {
    Graph graph;
    IntMatrix boundary;          // |V| x |E|
    IntMatrix adjoint_boundary;  // |E| x |V|
    IntMatrix d;                 // |E| x |V|
    IntMatrix d_adj;             // |V| x |E|
    IntMatrix lap0, lap1;        // Δ0, Δ1
    IntMatrix box0, box1;        // □0, □1
};

inline GraphComplex make_complex(const Graph& g) {
    GraphComplex c;
    c.graph = g;
    const std::size_t V = g.num_vertices(), E = g.num_edges();
    c.boundary = IntMatrix(V, E);
    for (std::size_t e = 0; e < E; ++e) {
        c.boundary(g.edge(e).t, e) += 1;
        c.boundary(g.edge(e).o, e) -= 1;
    }
    c.adjoint_boundary = c.boundary.transpose();
    c.d = c.boundary.transpose();
    c.d_adj = c.adjoint_boundary.transpose();
    c.lap0 = c.boundary * c.adjoint_boundary;
    c.lap1 = c.adjoint_boundary * c.boundary;
    c.box0 = c.lap0.transpose();
    c.box1 = c.lap1.transpose();
    return c;
}

// Saturated basis of Ha¹(Γ) = ker d♯ ⊆ Z^E.
inline IntMatrix harmonic_one_forms(const GraphComplex& c) { return kernel_basis(c.d_adj); }

// Saturated basis of H₁(Γ) = ker ∂ ⊆ Z[E].
inline IntMatrix cycle_space(const GraphComplex& c) { return kernel_basis(c.boundary); }

inline std::size_t betti_one(const Graph& g) {
    return g.num_edges() - g.num_vertices() + g.num_components();
}

// E' ⊆ E with C₁ = im ∂♯ ⊕ Z[E']: the complement is the non-forest edges
// (loops are never forest edges, so they land in E' as required). Verified
// by unimodularity of [im ∂♯ basis | unit vectors of E'].
inline std::set<std::size_t> image_complement(const GraphComplex& c) {
    const Graph& g = c.graph;
    Graph::Forest f = g.spanning_forest();
    std::set<std::size_t> eprime;
    for (std::size_t e = 0; e < g.num_edges(); ++e)
        if (!f.edges.count(e)) eprime.insert(e);
    IntMatrix img = image_basis(c.adjoint_boundary);
    IntMatrix units(g.num_edges(), eprime.size());
    std::size_t j = 0;
    for (std::size_t e : eprime) units(e, j++) = 1;
    if (!is_unimodular(img.hcat(units)))
        throw Error("image_complement: completion is not a basis");
    return eprime;
}

// Verifier for the standard integral Hodge identities on a finite graph.
struct HodgeReport {
    bool kernels_match = false;          // ker □0 = ker d, ker □1 = ker d♯
    bool orth_codivisor = false;         // (d♯C¹)⊥ = H⁰ and H⁰⊥ = d♯C¹
    bool orth_harmonic = false;          // (dC⁰)⊥ = Ha¹ and Ha¹⊥ = dC⁰
    bool cokernel_connected = true;      // im d♯ = C⁰(Γ)⁰, coker d♯ ≅ Z (connected only)
    bool cokernel_checked = false;
    std::string witness;

    bool all_pass() const {
        return kernels_match && orth_codivisor && orth_harmonic &&
               (!cokernel_checked || cokernel_connected);
    }
};

inline HodgeReport hodge_checks(const GraphComplex& c) {
    HodgeReport r;
    const Graph& g = c.graph;
    const std::size_t V = g.num_vertices();

    IntMatrix ker_d = kernel_basis(c.d);
    IntMatrix ker_box0 = kernel_basis(c.box0);
    IntMatrix ker_dadj = kernel_basis(c.d_adj);
    IntMatrix ker_box1 = kernel_basis(c.box1);
    r.kernels_match = lattice_equal(ker_d, ker_box0) && lattice_equal(ker_dadj, ker_box1);
    if (!r.kernels_match) r.witness += "[kernels differ]";

    IntMatrix im_dadj = image_basis(c.d_adj);
    r.orth_codivisor = lattice_equal(kernel_basis(im_dadj.transpose()), ker_d) &&
                       lattice_equal(kernel_basis(image_basis(ker_d).transpose()), im_dadj);
    if (!r.orth_codivisor) r.witness += "[codivisor orthogonality fails]";

    IntMatrix im_d = image_basis(c.d);
    r.orth_harmonic = lattice_equal(kernel_basis(im_d.transpose()), ker_dadj) &&
                      lattice_equal(kernel_basis(image_basis(ker_dadj).transpose()), im_d);
    if (!r.orth_harmonic) r.witness += "[harmonic orthogonality fails]";

    if (g.is_connected()) {
        r.cokernel_checked = true;
        // degree-zero lattice has basis {e_v - e_v0}
        IntMatrix deg0(V, V > 0 ? V - 1 : 0);
        for (std::size_t v = 1; v < V; ++v) {
            deg0(v, v - 1) = 1;
            deg0(0, v - 1) = -1;
        }
        bool image_ok = lattice_equal(im_dadj, deg0);
        SnfResult s = snf(c.d_adj);
        std::size_t rank = 0;
        bool factors_one = true;
        for (std::size_t i = 0; i < std::min(s.d.rows(), s.d.cols()); ++i)
            if (s.d(i, i) != 0) {
                ++rank;
                if (s.d(i, i) != 1) factors_one = false;
            }
        bool coker_z = factors_one && (V - rank == 1);
        r.cokernel_connected = image_ok && coker_z;
        if (!r.cokernel_connected) r.witness += "[coker d♯ is not Z]";
    }
    return r;
}

}  // namespace graphjac
