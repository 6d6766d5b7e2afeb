#pragma once

// Graded (skew) Clifford algebras A(mu, M_1..M_n): relation construction,
// elimination of the degree-2 generators y_k, the associated quadric
// system in S, and the computable regularity criteria (normalizing
// sequence + base-point-free + Hilbert function).

#include <cstdint>
#include <string>
#include <vector>

#include "sck/freealg.hpp"
#include "sck/quadform.hpp"

namespace sck {

struct GSCASpec {
    MuPtr mu;
    std::vector<MuSymMatrix> matrices;  // M_1..M_n, mu-symmetric

    void validate() const;
    bool matrices_independent() const;
};

/// The defining relations x_i x_j + mu_ij x_j x_i = sum_k (M_k)_ij y_k,
/// one per unordered pair (i <= j).
struct GSCAPresentation {
    struct Relation {
        unsigned i, j;                  // 0-based, i <= j
        std::vector<Scalar> y_coeffs;   // (M_k)_ij for k = 0..n-1
    };
    MuPtr mu;
    std::vector<Relation> relations;

    std::string relation_str(const Relation& r) const;
};

GSCAPresentation build_relations(const GSCASpec& spec);

/// Result of solving the defining relations for y_1..y_n.
struct Elimination {
    QuadraticPresentation presentation;        // the n(n-1)/2 relations on x's
    std::vector<std::vector<Scalar>> y_exprs;  // y_k as coefficients over x-words
};

/// Solve for the y_k by exact row reduction; requires M_1..M_n linearly
/// independent (throws otherwise).
Elimination eliminate_y(const GSCASpec& spec);

/// q_k = tau(M_k).
std::vector<SkewPoly> associated_quadrics(const GSCASpec& spec);

/// For each j, whether q_j is normal in S/<q_1..q_{j-1}>, decided by
/// comparing the left and right multiplication spans in degree 3.  Degree 3
/// suffices because S and its quotients are generated in degree 1: x*q = q*x'
/// for all degree-1 x determines normality in every degree.
std::vector<bool> check_normalizing(const std::vector<SkewPoly>& qs);

FinitenessVerdict check_base_point_free(const std::vector<SkewPoly>& qs, unsigned dmax);

struct RegularityReport {
    enum class Verdict { Regular, NotRegular, Inconclusive };

    std::vector<bool> normalizing;
    FinitenessVerdict bpf{false, 0};
    bool hilbert_ok = false;
    std::vector<std::uint64_t> dims;   // dim A_d through hilbert_dmax
    unsigned dmax = 0;                 // bound used for base-point-freeness
    unsigned hilbert_dmax = 0;         // bound used for the dimension check
    Verdict verdict = Verdict::Inconclusive;
    std::string reason;

    static const char* verdict_name(Verdict v);
};

/// The computable side of the regularity criteria: normalizing quadric
/// system + base-point-free + Hilbert dimensions C(n+d-1, d).
RegularityReport check_regularity(const GSCASpec& spec, unsigned dmax = 12,
                                  unsigned hilbert_dmax = 5);

}  // namespace sck
