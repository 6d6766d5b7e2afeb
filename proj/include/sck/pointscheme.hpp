#pragma once

// Point schemes for quadratic algebras on 3 generators with 3 relations:
// multilinearize the relations into a 3x3 matrix M(a) with entries linear
// in a, take det M(a) as the point-scheme cubic, and classify the plane
// cubic into components (lines, conics, irreducible cubics with a
// nodal/cuspidal/smooth tag).

#include <vector>

#include "sck/freealg.hpp"
#include "sck/quadform.hpp"

namespace sck {

/// The relations r = sum_ij c^{(r)}_ij x_i x_j seen as bilinear forms: the
/// matrix M(a) has entries M(a)_{rj} = sum_i c^{(r)}_ij a_i, so that
/// (row r of M(a)) . b = relation r evaluated at (a, b).
struct MultilinearSystem {
    FieldPtr field;
    std::vector<DenseMatrix> c;  // three tensors c[r][i][j]

    /// Coefficient of a_i in entry (r, j) of M(a).
    const Scalar& entry_coeff(unsigned r, unsigned j, unsigned i) const { return c[r][i][j]; }
    DenseMatrix matrix_at(const std::vector<Scalar>& a) const;
    Scalar relation_value(unsigned r, const std::vector<Scalar>& a,
                          const std::vector<Scalar>& b) const;
};

/// Requires exactly 3 generators and 3 independent relations; the defining
/// identity is verified on the full bilinear basis.
MultilinearSystem multilinearize(const QuadraticPresentation& p);

struct PointSchemeCubic {
    bool identically_zero = false;
    SkewPoly cubic;  // commutative in a1,a2,a3; lex-first coefficient is 1
};

PointSchemeCubic point_scheme_cubic(const MultilinearSystem& sys);

enum class ComponentType { Line, SmoothConic, IrreducibleCubic };
enum class CubicSingularity { Smooth, Nodal, Cuspidal };

struct CubicComponent {
    ComponentType type;
    unsigned multiplicity;
    SkewPoly form;  // defined over classification.field
    CubicSingularity singularity = CubicSingularity::Smooth;  // cubics only
};

struct PlaneCubicClassification {
    bool identically_zero = false;
    FieldPtr field;  // smallest tower containing every component
    std::vector<CubicComponent> components;
};

/// Factor a plane cubic over the quadratic tower: linear factors by exact
/// root finding on restricted lines, conic irreducibility by the rank of its
/// symmetric matrix, and nodal vs cuspidal for singular irreducible cubics
/// by the rank of the quadratic part at the (unique, rational) singular
/// point.  Characteristic 2 and 3 are rejected.
PlaneCubicClassification classify_plane_cubic(const SkewPoly& f);

}  // namespace sck
