#pragma once

// Noncommutative quadratic forms: the tau correspondence with mu-symmetric
// matrices, the D1..D8 functions and the mu-rank classifier for n=3,
// factorization Q = L1*L2 for general n, and commutative symmetric rank.

#include <optional>
#include <vector>

#include "sck/linalg.hpp"
#include "sck/skewpoly.hpp"

namespace sck {

/// n x n matrix with M_ij = mu_ij * M_ji.
class MuSymMatrix {
public:
    MuSymMatrix(MuPtr mu, DenseMatrix entries);
    static MuSymMatrix zero(MuPtr mu);
    /// Fill in the lower triangle from the upper one: M_ji = mu_ji * M_ij.
    static MuSymMatrix from_upper(MuPtr mu, const DenseMatrix& upper);

    unsigned n() const { return static_cast<unsigned>(m_.size()); }
    const MuPtr& mu() const { return mu_; }
    const Scalar& at(unsigned i, unsigned j) const { return m_[i][j]; }
    const DenseMatrix& entries() const { return m_; }

    MuSymMatrix operator+(const MuSymMatrix& o) const;
    MuSymMatrix operator*(const Scalar& c) const;
    bool is_zero() const;

private:
    MuPtr mu_;
    DenseMatrix m_;
};

/// tau(M) = z^T M z reduced to the PBW basis of S_2.
SkewPoly tau(const MuSymMatrix& m);

/// Inverse of tau: M_ii = c_ii, M_ij = c_ij / 2, M_ji = mu_ji c_ij / 2.
MuSymMatrix matrix_of_form(const SkewPoly& q);

/// A linear form sum a_i z_i, kept as its coefficient vector.
struct LinearForm {
    std::vector<Scalar> coeffs;

    bool is_zero() const;
    SkewPoly to_poly(const MuPtr& mu) const;
    std::string str() const;
};

struct Factorization {
    LinearForm l1, l2;    // canonical: first nonzero coefficient of l1 is 1
    FieldPtr field;       // possibly an extension of the input field
    bool is_square;       // l2 proportional to l1
};

/// D-value analysis for n = 3 (see mu_rank3).
struct MuRankAnalysis {
    Scalar scale;                  // Q was divided by this before analysis
    std::vector<Scalar> d16;       // D1..D6
    Scalar d7;
    std::vector<Scalar> d8_values; // one per sign choice of (X, Y)
    FieldPtr field;                // field containing X and Y
    int rank = -1;                 // filled by mu_rank3
};

/// The 2x2 mu-minors D1..D6, D7, and every D8 value over the sign choices
/// of X, Y with X^2 = d^2 - mu12*ab, Y^2 = e^2 - mu13*ac.
MuRankAnalysis mu_minors(const MuSymMatrix& m);

/// mu-rank of a quadratic form on three generators: 0 iff Q = 0; 1 iff
/// D1..D6 all vanish; 2 iff some D_i is nonzero and (1-a)D7 + aD8 = 0 for
/// some root choice (after scaling the z1^2 coefficient a into {0,1});
/// 3 otherwise.
MuRankAnalysis mu_rank3(const SkewPoly& q);

/// All factorizations Q = L1*L2 up to scalar (at most two), each verified
/// by multiplication; factors may live in a quadratic extension.
std::vector<Factorization> factor_quadratic(const SkewPoly& q);

/// Rank of a symmetric matrix over the exact field (mu == 1 setting).
std::size_t symmetric_rank(const DenseMatrix& m);

}  // namespace sck
