#pragma once

// Exact scalar arithmetic for the whole library: rationals, towers of
// quadratic extensions of Q (adjoined square roots, including i), and
// finite fields F_{p^m} with p odd.  No floating point anywhere.

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sck {

class MathError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class FieldKind { Rationals, SqrtTower, Finite };

class Field;
class Scalar;
using FieldPtr = std::shared_ptr<const Field>;

/// A field context.  Immutable; extension operations return a new context
/// whose `base()` chain reaches the old one, so elements can be lifted.
class Field : public std::enable_shared_from_this<Field> {
public:
    static FieldPtr rationals();
    /// F_{p^m}, p an odd prime.  The modulus polynomial is the canonical
    /// irreducible for (p, m): least monic irreducible when the coefficient
    /// vector (c_0, ..., c_{m-1}) is read as a base-p integer.
    static FieldPtr finite(std::uint64_t p, unsigned m = 1);

    FieldKind kind() const { return kind_; }
    std::uint64_t characteristic() const { return p_; }
    unsigned ext_degree() const { return m_; }
    unsigned tower_levels() const { return static_cast<unsigned>(radicands_.size()); }
    std::uint64_t order() const;  // finite only

    Scalar zero() const;
    Scalar one() const;
    Scalar integer(long v) const;
    Scalar rational(const mpq_class& q) const;
    /// k-th adjoined square root s_k, 1-based (SqrtTower only).
    Scalar tower_root(unsigned k) const;
    /// Generator g of F_{p^m}, m > 1.
    Scalar generator() const;
    /// Radicand of s_k as an element of this field.
    Scalar radicand(unsigned k) const;

    /// Parse a scalar literal: "3/4", "-2", "s1", "(1+2*s1)/3", "g^2+1".
    Scalar parse(std::string_view text) const;

    bool same(const Field& other) const;
    /// True if `other` embeds canonically into this field (tower prefix,
    /// or a finite field along this field's extension chain).
    bool extends(const Field& other) const;
    Scalar lift(const Scalar& x) const;

    /// Square root inside this field, if one exists.  Deterministic choice.
    std::optional<Scalar> sqrt_in_field(const Scalar& x) const;

    /// Square root of x, extending the field if necessary.  Over a tower the
    /// number of adjunctions is capped; overflow is a reported error.
    static std::pair<Scalar, FieldPtr> sqrt_adjoin(const Scalar& x, unsigned tower_cap = 6);

    /// Least common field two elements can be lifted into; throws if the
    /// contexts are unrelated.
    static FieldPtr common(const FieldPtr& a, const FieldPtr& b);

    std::string describe() const;

private:
    friend class Scalar;
    Field() = default;

    FieldKind kind_ = FieldKind::Rationals;
    std::uint64_t p_ = 0;  // characteristic (0 for Q / tower)
    unsigned m_ = 1;       // extension degree over F_p
    // SqrtTower: radicand j (0-based) has 2^j rational coordinates over the
    // level-j basis; s_{j+1}^2 equals it.
    std::vector<std::vector<mpq_class>> radicands_;
    // Finite: monic modulus x^m + modpoly_[m-1] x^{m-1} + ... + modpoly_[0].
    std::vector<std::uint64_t> modpoly_;
    FieldPtr base_;                        // field this one was extended from
    std::vector<std::uint64_t> gen_image_; // image of base generator (finite, base m>1)

    // tower arithmetic on raw coordinate spans
    void tw_mul(unsigned level, const mpq_class* a, const mpq_class* b, mpq_class* out) const;
    void tw_inv(unsigned level, const mpq_class* a, mpq_class* out) const;
    bool tw_sqrt(unsigned level, const mpq_class* a, mpq_class* out) const;

    // finite arithmetic
    std::vector<std::uint64_t> ff_mul(const std::vector<std::uint64_t>& a,
                                      const std::vector<std::uint64_t>& b) const;
    std::vector<std::uint64_t> ff_inv(const std::vector<std::uint64_t>& a) const;
    std::uint64_t ff_index(const std::vector<std::uint64_t>& a) const;
    std::vector<std::uint64_t> ff_element(std::uint64_t index) const;

    static FieldPtr finite_square_ext(const FieldPtr& f);
    FieldPtr tower_extend(const Scalar& radicand) const;
};

/// An exact field element.  Value semantics; elements carry their context.
class Scalar {
public:
    Scalar();  // 0 over Q

    const FieldPtr& field() const { return field_; }

    bool is_zero() const;
    bool is_one() const;

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    Scalar inverse() const;
    Scalar pow(long e) const;

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    /// Canonical total order (for deterministic pivoting and dedup), not an
    /// arithmetic order.
    int cmp(const Scalar& o) const;
    bool operator<(const Scalar& o) const { return cmp(o) < 0; }

    /// If this element actually lies in Q, return it.
    std::optional<mpq_class> as_rational() const;

    std::string str() const;

private:
    friend class Field;
    FieldPtr field_;
    std::vector<mpq_class> q_;         // rationals / tower coordinates (size 2^levels)
    std::vector<std::uint64_t> z_;     // finite coordinates (size m)

    static void promote(Scalar& a, Scalar& b);
};

inline Scalar operator*(long v, const Scalar& s) { return s.field()->integer(v) * s; }

}  // namespace sck
