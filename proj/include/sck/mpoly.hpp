#pragma once

// Small commutative polynomial utilities over Scalar: dense univariate
// polynomials (gcd, squarefree part, exact root isolation at desk scale),
// homogeneous binary forms, and Sylvester resultants with polynomial
// entries.  These support pencil rank loci and plane-curve intersections.

#include <optional>
#include <vector>

#include "sck/scalar.hpp"

namespace sck {

/// Dense univariate polynomial, low degree first, no trailing zeros.
class UPoly {
public:
    explicit UPoly(FieldPtr field) : field_(std::move(field)) {}
    UPoly(FieldPtr field, std::vector<Scalar> coeffs);
    static UPoly constant(const FieldPtr& field, const Scalar& c);
    static UPoly x(const FieldPtr& field);

    const FieldPtr& field() const { return field_; }
    const std::vector<Scalar>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    Scalar coeff(std::size_t i) const;
    Scalar lead() const;

    UPoly operator+(const UPoly& o) const;
    UPoly operator-(const UPoly& o) const;
    UPoly operator-() const;
    UPoly operator*(const UPoly& o) const;
    UPoly operator*(const Scalar& c) const;

    Scalar eval(const Scalar& t) const;
    UPoly derivative() const;
    UPoly monic() const;

    /// Quotient and remainder; divisor must be nonzero.
    std::pair<UPoly, UPoly> divrem(const UPoly& d) const;
    static UPoly gcd(UPoly a, UPoly b);  // monic
    UPoly squarefree_part() const;

    /// Lift coefficients into an extension field.
    UPoly lift(const FieldPtr& f) const;

private:
    FieldPtr field_;
    std::vector<Scalar> c_;
    void trim();
};

struct RootIsolation {
    std::vector<std::pair<Scalar, FieldPtr>> roots;  // distinct roots found
    bool complete;  // false when an irreducible factor of degree > 2 remains
};

/// Distinct roots of p: exhaustive over finite fields; over Q / towers,
/// rational candidates by divisor search plus quadratic-formula roots, with
/// completeness reported honestly.
RootIsolation isolate_roots(const UPoly& p);

/// Homogeneous binary form of a fixed degree in (t0, t1); coefficient of
/// t0^i t1^{deg-i} at index i.  The zero form keeps its degree tag.
class BinForm {
public:
    BinForm(FieldPtr field, unsigned degree);
    BinForm(FieldPtr field, unsigned degree, std::vector<Scalar> coeffs);
    static BinForm constant(const FieldPtr& field, const Scalar& c);

    const FieldPtr& field() const { return field_; }
    unsigned degree() const { return deg_; }
    const Scalar& coeff(unsigned i) const { return c_[i]; }
    bool is_zero() const;

    BinForm operator+(const BinForm& o) const;
    BinForm operator-(const BinForm& o) const;
    BinForm operator*(const BinForm& o) const;
    BinForm operator*(const Scalar& s) const;

    Scalar eval(const Scalar& t0, const Scalar& t1) const;

    /// Dehomogenization p(x) = B(x, 1); the multiplicity of the projective
    /// root (1:0) is degree() - p.degree().
    UPoly dehomogenize() const;
    /// Number of distinct projective roots over the algebraic closure
    /// (degree of the squarefree part, plus the root at infinity).
    unsigned distinct_projective_roots() const;

private:
    FieldPtr field_;
    unsigned deg_;
    std::vector<Scalar> c_;
};

/// Greatest common divisor of binary forms (via dehomogenization plus the
/// shared power of t1), monic-normalized; both zero is an error.
BinForm binform_gcd(const BinForm& a, const BinForm& b);

struct ProjRoot {
    Scalar t0, t1;  // normalized: first nonzero coordinate is 1
    FieldPtr field;
};

/// Distinct projective roots of a nonzero binary form, with completeness.
struct ProjRootIsolation {
    std::vector<ProjRoot> roots;
    bool complete;
};
ProjRootIsolation binform_roots(const BinForm& b);

/// Element of a finite field by index: digits of `index` base p are the
/// coordinates in the power basis of the generator.
Scalar field_element(const FieldPtr& f, std::uint64_t index);

/// Resultant with respect to the main variable of two polynomials whose
/// coefficients are themselves univariate polynomials (in a second
/// variable): Sylvester determinant by Laplace expansion.  Degrees are the
/// actual main-variable degrees.
UPoly resultant_upoly(const std::vector<UPoly>& a, const std::vector<UPoly>& b,
                      const FieldPtr& field);

}  // namespace sck
