#pragma once

// Quadratic algebras A = T(V)/<W> presented by a space of degree-2
// relations on generators x1..xn: truncated dimension counting, and the
// Koszul orthogonal W-perp that links A back to a quotient of S.

#include <cstdint>
#include <string>
#include <vector>

#include "sck/skewpoly.hpp"

namespace sck {

/// A relation space W inside the n^2-dimensional degree-2 component of the
/// free algebra.  Each basis element is a coefficient vector over ordered
/// words x_i x_j, index i*n + j (0-based).
class QuadraticPresentation {
public:
    QuadraticPresentation(unsigned n, FieldPtr field, std::vector<std::vector<Scalar>> w_basis);

    unsigned n() const { return n_; }
    const FieldPtr& field() const { return field_; }
    const std::vector<std::vector<Scalar>>& w_basis() const { return w_; }
    std::size_t dim_w() const { return w_.size(); }

    /// Parse one relation like "x1*x2 + (1/2)*x2*x1 - x3^2" into a degree-2
    /// coefficient vector.
    static std::vector<Scalar> parse_relation(std::string_view text, unsigned n,
                                              const FieldPtr& field);
    static std::string relation_str(const std::vector<Scalar>& coeffs, unsigned n);

private:
    unsigned n_;
    FieldPtr field_;
    std::vector<std::vector<Scalar>> w_;  // reduced, independent
};

/// dim A_d for d = 0..dmax, computed from the word-space ideal components.
std::vector<std::uint64_t> algebra_dims(const QuadraticPresentation& p, unsigned dmax);

struct KoszulPair {
    std::vector<std::vector<Scalar>> w_perp;  // basis, coefficient vectors over words
    bool compatible;                          // U (mu-commutators) contained in W-perp
    std::vector<SkewPoly> q_part;             // basis of the image of W-perp in S_2
};

/// The orthogonal complement of W under the pairing <x_i* x_j*, x_k x_l> =
/// delta_ik delta_jl, tested against the mu-commutation space U; when U is
/// inside W-perp, the images of W-perp in S_2 span the dual quadric system.
KoszulPair koszul_orthogonal(const QuadraticPresentation& p, const MuPtr& mu);

}  // namespace sck
