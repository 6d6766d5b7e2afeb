#pragma once

// The quantum polynomial ring S on z_1..z_n with z_j z_i = mu_ij z_i z_j
// (j > i), its PBW monomial basis, and truncated two-sided ideal dimensions.
// The commutative polynomial ring is the mu == 1 specialization.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sck/linalg.hpp"
#include "sck/scalar.hpp"

namespace sck {

/// Commutation parameters: mu_ii = 1, mu_ij * mu_ji = 1, all nonzero.
class MuParams {
public:
    MuParams(unsigned n, std::vector<std::vector<Scalar>> entries);
    static MuParams ones(unsigned n, const FieldPtr& field);

    unsigned n() const { return n_; }
    const FieldPtr& field() const { return field_; }
    /// mu_ij, 0-based indices.
    const Scalar& mu(unsigned i, unsigned j) const { return entries_[i][j]; }
    bool is_commutative() const;
    bool operator==(const MuParams& o) const;

private:
    unsigned n_;
    FieldPtr field_;
    std::vector<std::vector<Scalar>> entries_;
};

using MuPtr = std::shared_ptr<const MuParams>;

/// Exponent vector of a PBW basis monomial z_1^{e_1}...z_n^{e_n}.
using Mono = std::vector<unsigned>;

inline unsigned mono_degree(const Mono& m) {
    unsigned d = 0;
    for (auto e : m) d += e;
    return d;
}

/// Graded-lex order: by degree, then lexicographic on exponents.
struct MonoOrder {
    bool operator()(const Mono& a, const Mono& b) const {
        unsigned da = mono_degree(a), db = mono_degree(b);
        if (da != db) return da < db;
        return a < b;
    }
};

/// dim S_d = C(n+d-1, d).
std::uint64_t graded_dim(unsigned n, unsigned d);

/// All degree-d monomials in n variables, in MonoOrder.
std::vector<Mono> monomials_of_degree(unsigned n, unsigned d);

/// Index lookup for the monomials of one degree.
class DegreeBasis {
public:
    DegreeBasis(unsigned n, unsigned d);
    std::size_t size() const { return list_.size(); }
    const Mono& mono(std::size_t i) const { return list_[i]; }
    std::size_t index(const Mono& m) const;

private:
    std::vector<Mono> list_;
    std::map<Mono, std::size_t> index_;
};

/// An element of S: finite map from PBW monomials to nonzero coefficients.
class SkewPoly {
public:
    explicit SkewPoly(MuPtr mu);
    static SkewPoly zero(MuPtr mu) { return SkewPoly(std::move(mu)); }
    static SkewPoly generator(MuPtr mu, unsigned i);  // z_{i+1}, 0-based i
    static SkewPoly monomial(MuPtr mu, Mono m, Scalar c);
    static SkewPoly constant(MuPtr mu, Scalar c);

    const MuPtr& mu() const { return mu_; }
    unsigned n() const { return mu_->n(); }
    const std::map<Mono, Scalar, MonoOrder>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    /// Degree if homogeneous, -1 for zero; throws for inhomogeneous queries
    /// via require_homogeneous.
    bool is_homogeneous(unsigned* degree_out = nullptr) const;
    unsigned require_homogeneous(const char* what) const;

    void add_term(const Mono& m, const Scalar& c);
    Scalar coeff(const Mono& m) const;

    SkewPoly operator+(const SkewPoly& o) const;
    SkewPoly operator-(const SkewPoly& o) const;
    SkewPoly operator-() const;
    SkewPoly operator*(const SkewPoly& o) const;
    SkewPoly operator*(const Scalar& c) const;
    SkewPoly& operator+=(const SkewPoly& o) { return *this = *this + o; }
    SkewPoly& operator-=(const SkewPoly& o) { return *this = *this - o; }
    bool operator==(const SkewPoly& o) const;

    /// Coefficients over a degree basis (poly must be homogeneous of that
    /// degree or zero).
    SparseRow to_row(const DegreeBasis& basis) const;
    static SkewPoly from_row(MuPtr mu, const DegreeBasis& basis, const SparseRow& row);

    std::string str() const;

private:
    MuPtr mu_;
    std::map<Mono, Scalar, MonoOrder> terms_;
};

/// Sort a free word of generator indices (0-based) into the PBW basis; the
/// result is one scaled monomial.
SkewPoly normal_form_word(const std::vector<unsigned>& word, MuPtr mu);

/// Parse "3/2*z1^2*z3 - z2*z4" style syntax.
SkewPoly parse_skew_poly(std::string_view text, MuPtr mu);

struct IdealDims {
    unsigned degree;
    std::uint64_t ideal_dim;
    std::uint64_t quotient_dim;
};

/// Degree components of the two-sided ideal generated by homogeneous gens,
/// with the complementary quotient dimensions, for d = 0..dmax.
std::vector<IdealDims> ideal_component_dims(const std::vector<SkewPoly>& gens, unsigned dmax);

struct FinitenessVerdict {
    bool proved_finite;
    unsigned degree;  // first degree with quotient 0 when proved; else dmax
};

FinitenessVerdict is_finite_dimensional_quotient(const std::vector<SkewPoly>& gens,
                                                 unsigned dmax);

}  // namespace sck
