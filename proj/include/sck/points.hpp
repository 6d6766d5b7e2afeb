#pragma once

// Point-module counting: 2*r2 + r1 for commutative symmetric spans and
// 2*f2 + f1 for mu-symmetric spans, with three explicit completeness
// levels (exact pencil enumeration, certified candidate lists, finite
// field scans), plus the planar cubic-divisor construction for webs of
// quadrics and exact intersection of plane cubics.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sck/mpoly.hpp"
#include "sck/quadform.hpp"

namespace sck {

/// Projectivized span of mu-symmetric matrices: member(t) = sum t_k M_k.
struct SpanFamily {
    MuPtr mu;
    std::vector<MuSymMatrix> basis;

    void validate() const;  // independent basis, matching mu
    unsigned dim() const { return static_cast<unsigned>(basis.size()); }
    MuSymMatrix member(const std::vector<Scalar>& t) const;
    /// Same family with scalars mapped into another field (an extension,
    /// or a finite field via reduction of the rationals).
    SpanFamily mapped(const FieldPtr& f) const;
};

enum class CountMode { Commutative, Skew };
enum class Completeness { ExactPencil, CertifiedCandidates, ScanEvidence };

struct PointWitness {
    std::vector<Scalar> t;  // parameter point, first nonzero coordinate 1
    FieldPtr field;
    unsigned value;  // symmetric rank (commutative) or factorization count (skew)
};

struct PointCountReport {
    CountMode mode = CountMode::Commutative;
    Completeness completeness = Completeness::CertifiedCandidates;
    unsigned first = 0;   // r1 or f1
    unsigned second = 0;  // r2 or f2
    bool finite = true;   // false when the rank<=2 locus is the whole pencil
    std::vector<PointWitness> witnesses;
    std::string scan_fields;  // ScanEvidence: fields enumerated/searched
    bool anomaly = false;
    std::string anomaly_note;

    std::uint64_t total() const { return 2ull * second + first; }
};

struct CountOptions {
    std::vector<std::vector<Scalar>> candidates;  // CertifiedCandidates
    std::uint64_t p = 0;                          // ScanEvidence: odd prime
    unsigned e = 1;                               // ScanEvidence: F_{p^e}
};

PointCountReport count_point_modules(const SpanFamily& family, CountMode mode,
                                     Completeness strategy,
                                     const CountOptions& opts = {});

/// One isolated rank<=2 member of a pencil.
struct PencilMember {
    Scalar t0, t1;  // first nonzero coordinate 1
    FieldPtr field;
    unsigned rank;
};

struct PencilLocus {
    bool all_of_pencil = false;
    unsigned distinct_count = 0;        // exact count over the closure
    std::vector<PencilMember> members;  // the isolated roots
    bool members_complete = true;       // false if some root resisted isolation
};

/// Rank <= 2 members of the pencil t0*Ma + t1*Mb: all 3x3 minors vanishing
/// (commutative) or the mu-rank <= 2 criterion (skew, n = 3).  The distinct
/// count is exact over the algebraic closure even when a root cannot be
/// written in a quadratic tower.
PencilLocus pencil_rank_le2_members(const MuSymMatrix& ma, const MuSymMatrix& mb);

/// Exhaustive enumeration of P^{m-1}(F_{p^e}); factorizations are searched
/// in extensions up to F_{p^{4e}}.
PointCountReport scan_parameter_space(const SpanFamily& family, CountMode mode,
                                      std::uint64_t p, unsigned e);

/// Reduce a net of quadrics in 4 variables modulo a linear form and return
/// det(t1*A1 + t2*A2 + t3*A3), the plane cubic parametrizing rank <= 2
/// members (commutative only).
SkewPoly planar_rank2_divisor(const SpanFamily& net, const LinearForm& plane);

struct PlanePoint {
    std::vector<Scalar> coords;  // 3 homogeneous coordinates, first nonzero is 1
    FieldPtr field;
};

struct CubicIntersection {
    bool infinite = false;  // common component
    std::vector<PlanePoint> points;
    bool complete = true;  // false when a resultant root resisted isolation
};

/// Distinct intersection points of two plane cubics (commutative polynomials
/// in 3 variables) via resultants and back-substitution; at most 9 when the
/// curves share no component.
CubicIntersection intersect_plane_cubics(const SkewPoly& f1, const SkewPoly& f2);

/// m - r1 <= r2 <= 2(m - r1) + 1.
bool verify_sv_bounds(std::uint64_t m, std::uint64_t r1, std::uint64_t r2);

}  // namespace sck
