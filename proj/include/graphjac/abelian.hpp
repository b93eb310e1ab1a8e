#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "graphjac/snf.hpp"

namespace graphjac {

class FgAbGroup;
class GroupHom;

// Element of an FgAbGroup in normal-form coordinates. Equality of normal
// forms is equality in the group.
class GroupElement {
public:
    const Vec& free_coords() const { return free_; }
    const Vec& torsion_coords() const { return torsion_; }
    bool is_zero() const { return is_zero_vec(free_) && is_zero_vec(torsion_); }

    bool operator==(const GroupElement& o) const {
        return parent_ == o.parent_ && free_ == o.free_ && torsion_ == o.torsion_;
    }
    bool operator!=(const GroupElement& o) const { return !(*this == o); }

private:
    friend class FgAbGroup;
    friend class GroupHom;
    std::shared_ptr<const struct FgAbGroupImpl> parent_;
    Vec free_, torsion_;
};

struct FgAbGroupImpl {
    std::size_t ambient_rank = 0;
    IntMatrix numerator;       // ambient x g, canonical basis of the sublattice A
    IntMatrix relations_amb;   // ambient x r, generators of B <= A
    IntMatrix rel_in_gen;      // g x r, relations in numerator coordinates
    std::unique_ptr<SnfSolver> num_solver;
    detail::SnfFull rel_snf;   // of rel_in_gen
    std::size_t free_rank = 0;
    std::vector<Int> invariant_factors;     // the diagonal entries >= 2
    std::vector<std::size_t> torsion_pos;   // their positions in z-coordinates
    bool numerator_is_identity = false;
};

// Finitely generated abelian group presented as a subquotient A/B of an
// ambient lattice Z^n. Immutable after construction; cheap to copy (shared
// state). This realizes every group in the theory: Cl, Cl0, J, P, their
// modulus versions, Pic(|Gr|), discriminant groups L#/L, ...
class FgAbGroup {
public:
    FgAbGroup() = default;

    // A = column span of `numerator`, B = column span of `denominator`.
    // Throws NotASubgroup unless B <= A.
    static FgAbGroup subquotient(std::size_t ambient_rank, const IntMatrix& numerator,
                                 const IntMatrix& denominator) {
        if (numerator.rows() != ambient_rank || denominator.rows() != ambient_rank)
            throw Error("subquotient: ambient rank mismatch");
        auto impl = std::make_shared<FgAbGroupImpl>();
        impl->ambient_rank = ambient_rank;
        impl->numerator = image_basis(numerator);
        impl->numerator_is_identity = impl->numerator == IntMatrix::identity(ambient_rank);
        impl->relations_amb = denominator;
        impl->num_solver = std::make_unique<SnfSolver>(impl->numerator);

        const std::size_t g = impl->numerator.cols();
        impl->rel_in_gen = IntMatrix(g, denominator.cols());
        for (std::size_t j = 0; j < denominator.cols(); ++j) {
            std::optional<Vec> x = impl->numerator_is_identity
                                       ? std::optional<Vec>(denominator.col(j))
                                       : impl->num_solver->solve(denominator.col(j));
            if (!x)
                throw NotASubgroup("subquotient: denominator column " + std::to_string(j) +
                                   " outside the numerator span");
            impl->rel_in_gen.set_col(j, *x);
        }
        impl->rel_snf = detail::snf_full(impl->rel_in_gen);
        impl->free_rank = g - impl->rel_snf.rank;
        for (std::size_t i = 0; i < impl->rel_snf.rank; ++i) {
            const Int& d = impl->rel_snf.d(i, i);
            if (d >= 2) {
                impl->invariant_factors.push_back(d);
                impl->torsion_pos.push_back(i);
            }
        }
        FgAbGroup grp;
        grp.p_ = std::move(impl);
        return grp;
    }

    // Z^n
    static FgAbGroup free_group(std::size_t n) {
        return subquotient(n, IntMatrix::identity(n), IntMatrix(n, 0));
    }

    bool valid() const { return p_ != nullptr; }
    std::size_t ambient_rank() const { return p_->ambient_rank; }
    std::size_t free_rank() const { return p_->free_rank; }
    const std::vector<Int>& invariant_factors() const { return p_->invariant_factors; }
    std::size_t num_generators() const { return p_->numerator.cols(); }
    Vec generator_ambient(std::size_t j) const { return p_->numerator.col(j); }
    const IntMatrix& numerator() const { return p_->numerator; }
    const IntMatrix& relations_ambient() const { return p_->relations_amb; }
    const IntMatrix& relations_in_generators() const { return p_->rel_in_gen; }

    bool is_trivial() const { return p_->free_rank == 0 && p_->invariant_factors.empty(); }
    bool is_finite() const { return p_->free_rank == 0; }

    // group order; 0 means infinite
    Int order() const {
        if (!is_finite()) return 0;
        Int n = 1;
        for (const Int& d : p_->invariant_factors) n *= d;
        return n;
    }

    bool same_group(const FgAbGroup& o) const { return p_ == o.p_; }

    // identical abstract invariants (free rank + invariant factors)
    bool isomorphic_invariants(const FgAbGroup& o) const {
        return p_->free_rank == o.p_->free_rank &&
               p_->invariant_factors == o.p_->invariant_factors;
    }

    GroupElement zero() const {
        GroupElement e;
        e.parent_ = p_;
        e.free_.assign(p_->free_rank, Int(0));
        e.torsion_.assign(p_->invariant_factors.size(), Int(0));
        return e;
    }

    GroupElement project(const Vec& ambient) const {
        if (ambient.size() != p_->ambient_rank) throw Error("project: bad vector length");
        std::optional<Vec> x = p_->numerator_is_identity
                                   ? std::optional<Vec>(ambient)
                                   : p_->num_solver->solve(ambient);
        if (!x) throw NotInSubgroup("project: vector outside the numerator span");
        return from_gen_coords(*x);
    }

    GroupElement from_gen_coords(const Vec& x) const {
        Vec z = p_->rel_snf.u * x;
        GroupElement e = zero();
        for (std::size_t k = 0; k < p_->torsion_pos.size(); ++k) {
            Int c;
            mpz_fdiv_r(c.get_mpz_t(), z[p_->torsion_pos[k]].get_mpz_t(),
                       p_->invariant_factors[k].get_mpz_t());
            e.torsion_[k] = c;
        }
        const std::size_t g = p_->numerator.cols();
        for (std::size_t k = p_->rel_snf.rank; k < g; ++k)
            e.free_[k - p_->rel_snf.rank] = z[k];
        return e;
    }

    // Standard ambient lift of the normal form.
    Vec representative(const GroupElement& e) const {
        check_parent(e);
        const std::size_t g = p_->numerator.cols();
        Vec z(g, Int(0));
        for (std::size_t k = 0; k < p_->torsion_pos.size(); ++k)
            z[p_->torsion_pos[k]] = e.torsion_[k];
        for (std::size_t k = p_->rel_snf.rank; k < g; ++k)
            z[k] = e.free_[k - p_->rel_snf.rank];
        return p_->numerator * (p_->rel_snf.u_inv * z);
    }

    GroupElement add(const GroupElement& a, const GroupElement& b) const {
        check_parent(a);
        check_parent(b);
        GroupElement e = zero();
        for (std::size_t k = 0; k < e.free_.size(); ++k) e.free_[k] = a.free_[k] + b.free_[k];
        for (std::size_t k = 0; k < e.torsion_.size(); ++k) {
            Int c = a.torsion_[k] + b.torsion_[k];
            mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), p_->invariant_factors[k].get_mpz_t());
            e.torsion_[k] = c;
        }
        return e;
    }

    GroupElement scale(const Int& c, const GroupElement& a) const {
        check_parent(a);
        GroupElement e = zero();
        for (std::size_t k = 0; k < e.free_.size(); ++k) e.free_[k] = c * a.free_[k];
        for (std::size_t k = 0; k < e.torsion_.size(); ++k) {
            Int t = c * a.torsion_[k];
            mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), p_->invariant_factors[k].get_mpz_t());
            e.torsion_[k] = t;
        }
        return e;
    }

    GroupElement neg(const GroupElement& a) const { return scale(Int(-1), a); }

    // order of an element; 0 means infinite
    Int element_order(const GroupElement& e) const {
        check_parent(e);
        if (!is_zero_vec(e.free_)) return 0;
        Int n = 1;
        for (std::size_t k = 0; k < e.torsion_.size(); ++k) {
            const Int& d = p_->invariant_factors[k];
            Int g = int_gcd(d, e.torsion_[k]);
            n = int_lcm(n, div_exact(d, g));
        }
        return n;
    }

    // "Z^r (+) Z/d1 (+) ..." with the free part first
    std::string to_string() const {
        if (is_trivial()) return "0";
        std::string s;
        if (p_->free_rank == 1) s = "Z";
        else if (p_->free_rank > 1) s = "Z^" + std::to_string(p_->free_rank);
        for (const Int& d : p_->invariant_factors) {
            if (!s.empty()) s += " ⊕ ";
            s += "Z/" + d.get_str();
        }
        return s;
    }

    const std::shared_ptr<const FgAbGroupImpl>& impl() const { return p_; }

private:
    void check_parent(const GroupElement& e) const {
        if (e.parent_ != p_) throw Error("element belongs to a different group");
    }

    std::shared_ptr<const FgAbGroupImpl> p_;
};

inline FgAbGroup subquotient(std::size_t ambient_rank, const IntMatrix& numerator,
                             const IntMatrix& denominator) {
    return FgAbGroup::subquotient(ambient_rank, numerator, denominator);
}

// Homomorphism between subquotient presentations, carried by a matrix on the
// ambient lattices. Well-definedness (numerator -> numerator, relations ->
// relations) is verified at construction.
class GroupHom {
public:
    GroupHom() = default;

    const FgAbGroup& source() const { return src_; }
    const FgAbGroup& target() const { return tgt_; }
    const IntMatrix& ambient_matrix() const { return m_; }

    GroupElement apply(const GroupElement& e) const {
        return tgt_.project(m_ * src_.representative(e));
    }

    // images of the source generators, in target generator coordinates
    const IntMatrix& generator_images() const { return gen_images_; }

    bool equals(const GroupHom& o) const {
        if (!src_.same_group(o.src_) || !tgt_.same_group(o.tgt_)) return false;
        for (std::size_t j = 0; j < src_.num_generators(); ++j)
            if (tgt_.from_gen_coords(gen_images_.col(j)) !=
                tgt_.from_gen_coords(o.gen_images_.col(j)))
                return false;
        return true;
    }

    bool is_zero() const {
        for (std::size_t j = 0; j < src_.num_generators(); ++j)
            if (!tgt_.from_gen_coords(gen_images_.col(j)).is_zero()) return false;
        return true;
    }

    GroupHom compose_after(const GroupHom& first) const {
        // this ∘ first
        if (!first.tgt_.same_group(src_)) throw Error("compose: middle groups differ");
        return induced(first.src_, tgt_, m_ * first.m_);
    }

    bool is_surjective() const {
        IntMatrix blk = gen_images_.hcat(tgt_.relations_in_generators());
        detail::SnfFull f = detail::snf_full(blk);
        if (f.rank != tgt_.num_generators()) return false;
        for (std::size_t i = 0; i < f.rank; ++i)
            if (f.d(i, i) != 1) return false;
        return true;
    }

    bool is_injective() const {
        IntMatrix kx = kernel_gen_lattice();
        for (std::size_t j = 0; j < kx.cols(); ++j)
            if (!src_.from_gen_coords(kx.col(j)).is_zero()) return false;
        return true;
    }

    bool is_isomorphism() const { return is_injective() && is_surjective(); }

    // The kernel as a subgroup of the source (same ambient).
    FgAbGroup kernel_group() const {
        IntMatrix kx = kernel_gen_lattice();
        IntMatrix num = (src_.numerator() * kx).hcat(src_.relations_ambient());
        return FgAbGroup::subquotient(src_.ambient_rank(), num, src_.relations_ambient());
    }

    static GroupHom induced(const FgAbGroup& src, const FgAbGroup& dst,
                            const IntMatrix& ambient_matrix) {
        if (ambient_matrix.rows() != dst.ambient_rank() ||
            ambient_matrix.cols() != src.ambient_rank())
            throw Error("induced_hom: ambient matrix shape mismatch");
        GroupHom h;
        h.src_ = src;
        h.tgt_ = dst;
        h.m_ = ambient_matrix;
        h.gen_images_ = IntMatrix(dst.num_generators(), src.num_generators());
        SnfSolver tgt_num(dst.numerator());
        for (std::size_t j = 0; j < src.num_generators(); ++j) {
            Vec img = ambient_matrix * src.generator_ambient(j);
            std::optional<Vec> x = tgt_num.solve(img);
            if (!x)
                throw NotWellDefined("induced_hom: image of generator " + std::to_string(j) +
                                     " = " + graphjac::to_string(img) +
                                     " lies outside the target numerator");
            h.gen_images_.set_col(j, *x);
        }
        const IntMatrix& rel = src.relations_ambient();
        for (std::size_t j = 0; j < rel.cols(); ++j) {
            GroupElement e = dst.project(ambient_matrix * rel.col(j));
            if (!e.is_zero())
                throw NotWellDefined("induced_hom: relation column " + std::to_string(j) + " = " +
                                     graphjac::to_string(rel.col(j)) +
                                     " maps outside the target relations");
        }
        return h;
    }

    static GroupHom identity(const FgAbGroup& g) {
        return induced(g, g, IntMatrix::identity(g.ambient_rank()));
    }

    static GroupHom zero(const FgAbGroup& src, const FgAbGroup& dst) {
        return induced(src, dst, IntMatrix(dst.ambient_rank(), src.ambient_rank()));
    }

private:
    // Lattice of generator-coordinate vectors x whose class dies in the
    // target: solutions of gen_images*x = rel_t*y.
    IntMatrix kernel_gen_lattice() const {
        IntMatrix blk = gen_images_.hcat(-tgt_.relations_in_generators());
        IntMatrix k = kernel_basis(blk);
        IntMatrix kx(src_.num_generators(), k.cols());
        for (std::size_t i = 0; i < src_.num_generators(); ++i)
            for (std::size_t j = 0; j < k.cols(); ++j) kx(i, j) = k(i, j);
        return kx;
    }

    FgAbGroup src_, tgt_;
    IntMatrix m_;
    IntMatrix gen_images_;
};

inline GroupHom induced_hom(const FgAbGroup& src, const FgAbGroup& dst,
                            const IntMatrix& ambient_matrix) {
    return GroupHom::induced(src, dst, ambient_matrix);
}

// Build a hom from prescribed images of the source generators (ambient
// vectors of the target). Requires the source numerator to be a saturated
// sublattice, which holds for every group this library constructs.
inline GroupHom hom_from_generator_images(const FgAbGroup& src, const FgAbGroup& dst,
                                          const std::vector<Vec>& images) {
    if (images.size() != src.num_generators())
        throw Error("hom_from_generator_images: wrong number of images");
    const IntMatrix& n = src.numerator();
    IntMatrix img = IntMatrix::from_cols(dst.ambient_rank(), images);
    IntMatrix u;
    if (src.num_generators() == src.ambient_rank()) {
        u = n;  // full-rank numerator: extension is the numerator itself
    } else {
        u = n.hcat(saturation_complement(n));
        img = img.hcat(IntMatrix(dst.ambient_rank(), u.cols() - n.cols()));
    }
    IntMatrix m = img * inverse_unimodular(u);
    return GroupHom::induced(src, dst, m);
}

// Exactness of A --f--> B --g--> C at B. Returns an explanation on failure.
inline std::optional<std::string> exactness_failure(const GroupHom& f, const GroupHom& g) {
    if (!f.target().same_group(g.source())) throw Error("exactness_failure: groups mismatch");
    if (!g.compose_after(f).is_zero()) return "composite g∘f is nonzero";
    const FgAbGroup& b = f.target();
    // ker g in B-generator coordinates
    IntMatrix blk = g.generator_images().hcat(-g.target().relations_in_generators());
    IntMatrix k = kernel_basis(blk);
    IntMatrix span = f.generator_images().hcat(b.relations_in_generators());
    SnfSolver s(span);
    for (std::size_t j = 0; j < k.cols(); ++j) {
        Vec x(b.num_generators());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = k(i, j);
        if (!s.solve(x))
            return "kernel element " + graphjac::to_string(x) +
                   " (generator coordinates) is not in the image";
    }
    return std::nullopt;
}

}  // namespace graphjac
