#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nchodge/scalar.hpp"

namespace nchodge {

template <class S>
struct AlgebraElement {
    std::vector<S> coeffs;
    friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;
};

/// Coordinates in the complement of the scalar line, length dim - 1.
template <class S>
struct ReducedElement {
    std::vector<S> coeffs;
    friend bool operator==(const ReducedElement&, const ReducedElement&) = default;
};

/// Flat rank-3 table: e_i * e_j = sum_k c[i][j][k] e_k.
template <class S>
class StructureConstants {
public:
    StructureConstants() = default;
    explicit StructureConstants(std::size_t dim) : dim_(dim), c_(dim * dim * dim, from_int<S>(0)) {}

    std::size_t dim() const { return dim_; }
    S& operator()(std::size_t i, std::size_t j, std::size_t k) { return c_[(i * dim_ + j) * dim_ + k]; }
    const S& operator()(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * dim_ + j) * dim_ + k]; }

    template <class T>
    StructureConstants<T> cast() const {
        StructureConstants<T> out(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                for (std::size_t k = 0; k < dim_; ++k) out(i, j, k) = convert_scalar<T>((*this)(i, j, k));
        return out;
    }

private:
    std::size_t dim_ = 0;
    std::vector<S> c_;
};

/// Finite-dimensional unital associative algebra.
///
/// The user supplies a basis, structure constants and the coordinates of the
/// unit. Internally the algebra is rewritten in a canonical basis whose first
/// vector is the unit: the unit replaces the first input basis vector on which
/// it has a nonzero coordinate (the pivot), the other input vectors keep their
/// relative order. The complement of the scalar line is spanned by canonical
/// vectors 1..dim-1, and `reduce` simply drops coordinate 0.
///
/// All element-level operations below work in canonical coordinates; use
/// `to_canonical` / `to_input` to move between bases.
template <class S>
class Algebra {
public:
    /// Validates shape, unit law and associativity (exact in exact modes,
    /// tolerance 1e-12 in float mode). Throws nchodge::Error with codes
    /// algebra.ShapeMismatch, algebra.UnitViolation, algebra.AssociativityViolation.
    static Algebra make(std::size_t dim, std::vector<std::string> basis_labels,
                        const StructureConstants<S>& structure_constants, std::vector<S> unit);

    std::size_t dim() const { return dim_; }
    std::size_t reduced_dim() const { return dim_ - 1; }
    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    /// Labels of the canonical basis; index 0 is the unit.
    const std::vector<std::string>& basis_labels() const { return labels_; }
    const std::vector<std::string>& input_labels() const { return input_labels_; }
    std::size_t unit_pivot() const { return pivot_; }

    /// Canonical structure constants.
    const StructureConstants<S>& structure_constants() const { return canonical_; }
    const StructureConstants<S>& input_structure_constants() const { return input_; }
    const std::vector<S>& input_unit() const { return input_unit_; }

    /// Product of canonical basis vectors as a dense canonical coordinate row.
    const std::vector<S>& basis_product(std::size_t a, std::size_t b) const { return products_[a * dim_ + b]; }

    AlgebraElement<S> unit() const;
    AlgebraElement<S> basis_element(std::size_t i) const;

    AlgebraElement<S> multiply(const AlgebraElement<S>& x, const AlgebraElement<S>& y) const;
    ReducedElement<S> reduce(const AlgebraElement<S>& x) const;
    /// Section of the quotient map: places the reduced coordinates on canonical vectors 1..dim-1.
    AlgebraElement<S> lift(const ReducedElement<S>& r) const;

    AlgebraElement<S> to_canonical(const std::vector<S>& input_coords) const;
    std::vector<S> to_input(const AlgebraElement<S>& x) const;

    ScalarMode mode() const { return ScalarTraits<S>::mode; }

    template <class T>
    Algebra<T> cast() const {
        auto a = Algebra<T>::make(dim_, input_labels_, input_.template cast<T>(), cast_vector<T>(input_unit_));
        a.set_name(name_);
        return a;
    }

private:
    template <class T>
    static std::vector<T> cast_vector(const std::vector<S>& v) {
        std::vector<T> out;
        out.reserve(v.size());
        for (const auto& x : v) out.push_back(convert_scalar<T>(x));
        return out;
    }

    void check_dim(const std::vector<S>& v, const char* what) const;

    std::size_t dim_ = 0;
    std::size_t pivot_ = 0;
    std::string name_;
    std::vector<std::string> input_labels_;
    std::vector<std::string> labels_;
    StructureConstants<S> input_;
    StructureConstants<S> canonical_;
    std::vector<S> input_unit_;
    std::vector<std::vector<S>> products_;
};

/// Validation helpers, exposed for tests. They return true when the law holds
/// and otherwise fill the witness.
template <class S>
bool check_associativity(const StructureConstants<S>& c, std::size_t witness[4], double tol = 0.0);

template <class S>
bool check_unit(const StructureConstants<S>& c, const std::vector<S>& unit, std::size_t& witness, double tol = 0.0);

/// Shipped example algebras.
namespace algebras {

/// C[x]/(x^2), basis {1, x}.
template <class S>
Algebra<S> dual_numbers();
/// C + C with idempotent basis {e1, e2}; unit e1 + e2.
template <class S>
Algebra<S> c_plus_c();
/// 2x2 matrices with matrix-unit basis {E11, E12, E21, E22}.
template <class S>
Algebra<S> matrices_2x2();
/// Group algebra of Z/3, basis {1, g, g^2}.
template <class S>
Algebra<S> group_z3();
/// One-dimensional algebra C.
template <class S>
Algebra<S> scalars();

/// Looks up "dual_numbers", "c_plus_c", "m2", "group_z3", "scalars".
template <class S>
Algebra<S> by_name(const std::string& name);

std::vector<std::string> names();

}  // namespace algebras

}  // namespace nchodge
