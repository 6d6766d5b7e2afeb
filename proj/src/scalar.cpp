#include "sck/scalar.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace sck {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
    if (a % p == 0) throw MathError("division by zero in F_p");
    return powmod(a, p - 2, p);
}

// --- F_p[x] helpers for modulus selection (coefficients as uint64 mod p) ---

using PolyP = std::vector<std::uint64_t>;  // c[i] coeff of x^i, no trailing zeros

void poly_trim(PolyP& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

PolyP poly_mulmod(const PolyP& a, const PolyP& b, const PolyP& mod, std::uint64_t p) {
    // mod is monic of degree m given as full coeff vector incl. leading 1
    std::size_t m = mod.size() - 1;
    std::vector<std::uint64_t> prod(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (b[j]) prod[i + j] = (prod[i + j] + mulmod(a[i], b[j], p)) % p;
    }
    for (std::size_t d = prod.size(); d-- > m;) {
        std::uint64_t c = prod[d];
        if (!c) continue;
        prod[d] = 0;
        for (std::size_t k = 0; k < m; ++k)
            prod[d - m + k] = (prod[d - m + k] + mulmod(c, (p - mod[k] % p) % p, p)) % p;
    }
    prod.resize(m);
    return prod;
}

PolyP poly_powmod(PolyP a, mpz_class e, const PolyP& mod, std::uint64_t p) {
    std::size_t m = mod.size() - 1;
    PolyP r(m, 0);
    r[0] = 1;
    a.resize(m);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = poly_mulmod(r, a, mod, p);
        a = poly_mulmod(a, a, mod, p);
        e >>= 1;
    }
    return r;
}

PolyP poly_gcd(PolyP a, PolyP b, std::uint64_t p) {
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        // a mod b
        std::uint64_t lead_inv = invmod(b.back(), p);
        while (a.size() >= b.size() && !a.empty()) {
            std::uint64_t f = mulmod(a.back(), lead_inv, p);
            std::size_t off = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i)
                a[off + i] = (a[off + i] + mulmod(f, p - b[i] % p, p)) % p;
            poly_trim(a);
        }
        std::swap(a, b);
    }
    return a;
}

bool is_irreducible(const PolyP& f /* full monic coeffs */, std::uint64_t p) {
    std::size_t m = f.size() - 1;
    // x^{p^m} == x mod f, and gcd(x^{p^{m/q}} - x, f) == 1 for prime q | m
    PolyP x{0, 1};
    mpz_class pm = 1;
    for (std::size_t i = 0; i < m; ++i) pm *= static_cast<unsigned long>(p);
    PolyP xq = poly_powmod(x, pm, f, p);
    PolyP diff = xq;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    poly_trim(diff);
    if (!diff.empty()) return false;
    for (std::size_t q = 2; q <= m; ++q) {
        if (m % q != 0) continue;
        bool prime = true;
        for (std::size_t r = 2; r * r <= q; ++r)
            if (q % r == 0) prime = false;
        if (!prime) continue;
        mpz_class e = 1;
        for (std::size_t i = 0; i < m / q; ++i) e *= static_cast<unsigned long>(p);
        PolyP xe = poly_powmod(x, e, f, p);
        xe.resize(std::max<std::size_t>(xe.size(), 2), 0);
        xe[1] = (xe[1] + p - 1) % p;
        poly_trim(xe);
        PolyP g = poly_gcd(xe, f, p);
        if (g.size() > 1) return false;
    }
    return true;
}

std::vector<std::uint64_t> canonical_modpoly(std::uint64_t p, unsigned m) {
    // least monic irreducible of degree m, coefficient vector read as a
    // base-p integer (c_0 least significant)
    std::vector<std::uint64_t> c(m, 0);
    for (;;) {
        PolyP f(c.begin(), c.end());
        f.push_back(1);
        if (is_irreducible(f, p)) return c;
        // increment
        unsigned i = 0;
        while (i < m) {
            if (++c[i] < p) break;
            c[i++] = 0;
        }
        if (i == m) throw MathError("no irreducible polynomial found");
    }
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool rational_sqrt(const mpq_class& x, mpq_class& out) {
    if (sgn(x) < 0) return false;
    if (sgn(x) == 0) {
        out = 0;
        return true;
    }
    const mpz_class& num = x.get_num();
    const mpz_class& den = x.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return false;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    out = mpq_class(rn, rd);
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Field construction

FieldPtr Field::rationals() {
    static FieldPtr q = [] {
        auto f = std::shared_ptr<Field>(new Field());
        f->kind_ = FieldKind::Rationals;
        return FieldPtr(f);
    }();
    return q;
}

FieldPtr Field::finite(std::uint64_t p, unsigned m) {
    if (p == 2) throw MathError("characteristic 2 is not supported");
    if (!is_prime_u64(p)) throw MathError("finite field characteristic must be prime");
    if (m == 0) throw MathError("extension degree must be positive");
    if (p >= (1ull << 31)) throw MathError("prime too large");
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = FieldKind::Finite;
    f->p_ = p;
    f->m_ = m;
    if (m > 1) f->modpoly_ = canonical_modpoly(p, m);
    return f;
}

std::uint64_t Field::order() const {
    if (kind_ != FieldKind::Finite) throw MathError("order(): not a finite field");
    std::uint64_t q = 1;
    for (unsigned i = 0; i < m_; ++i) {
        if (q > (1ull << 62) / p_) throw MathError("field order overflow");
        q *= p_;
    }
    return q;
}

// ---------------------------------------------------------------------------
// Element constructors

Scalar Field::zero() const {
    Scalar s;
    s.field_ = shared_from_this();
    if (kind_ == FieldKind::Finite)
        s.z_.assign(m_, 0);
    else
        s.q_.assign(std::size_t(1) << tower_levels(), mpq_class(0));
    return s;
}

Scalar Field::one() const { return integer(1); }

Scalar Field::integer(long v) const {
    Scalar s = zero();
    if (kind_ == FieldKind::Finite) {
        long r = v % static_cast<long>(p_);
        if (r < 0) r += static_cast<long>(p_);
        s.z_[0] = static_cast<std::uint64_t>(r);
    } else {
        s.q_[0] = v;
    }
    return s;
}

Scalar Field::rational(const mpq_class& q) const {
    Scalar s = zero();
    if (kind_ == FieldKind::Finite) {
        mpz_class num = q.get_num() % static_cast<long>(p_);
        if (num < 0) num += static_cast<long>(p_);
        mpz_class den = q.get_den() % static_cast<long>(p_);
        std::uint64_t d = den.get_ui();
        if (d == 0) throw MathError("rational with denominator divisible by p");
        s.z_[0] = mulmod(num.get_ui(), invmod(d, p_), p_);
    } else {
        s.q_[0] = q;
        s.q_[0].canonicalize();
    }
    return s;
}

Scalar Field::tower_root(unsigned k) const {
    if (kind_ != FieldKind::SqrtTower || k == 0 || k > tower_levels())
        throw MathError("tower_root: no such adjoined root");
    Scalar s = zero();
    s.q_[std::size_t(1) << (k - 1)] = 1;
    return s;
}

Scalar Field::generator() const {
    if (kind_ != FieldKind::Finite || m_ < 2) throw MathError("generator: not an extension field");
    Scalar s = zero();
    s.z_[1] = 1;
    return s;
}

Scalar Field::radicand(unsigned k) const {
    if (kind_ != FieldKind::SqrtTower || k == 0 || k > tower_levels())
        throw MathError("radicand: no such adjoined root");
    Scalar s = zero();
    std::copy(radicands_[k - 1].begin(), radicands_[k - 1].end(), s.q_.begin());
    return s;
}

// ---------------------------------------------------------------------------
// Structure / lifting

bool Field::same(const Field& o) const {
    if (kind_ != o.kind_ || p_ != o.p_ || m_ != o.m_) return false;
    if (kind_ == FieldKind::Finite) return modpoly_ == o.modpoly_;
    return radicands_ == o.radicands_;
}

bool Field::extends(const Field& o) const {
    if (same(o)) return true;
    switch (kind_) {
        case FieldKind::Rationals:
            return false;
        case FieldKind::SqrtTower: {
            if (o.kind_ == FieldKind::Rationals) return true;
            if (o.kind_ != FieldKind::SqrtTower) return false;
            if (o.radicands_.size() > radicands_.size()) return false;
            return std::equal(o.radicands_.begin(), o.radicands_.end(), radicands_.begin());
        }
        case FieldKind::Finite: {
            if (o.kind_ != FieldKind::Finite || o.p_ != p_) return false;
            // walk the extension chain
            const Field* f = this;
            while (f) {
                if (f->same(o)) return true;
                f = f->base_.get();
            }
            return false;
        }
    }
    return false;
}

Scalar Field::lift(const Scalar& x) const {
    const Field& xf = *x.field();
    if (same(xf)) {
        Scalar y = x;
        y.field_ = shared_from_this();
        return y;
    }
    if (!extends(xf)) throw MathError("lift: incompatible field contexts");
    if (kind_ != FieldKind::Finite) {
        Scalar y = zero();
        std::copy(x.q_.begin(), x.q_.end(), y.q_.begin());
        return y;
    }
    // finite: lift along the chain one step at a time
    if (base_ && base_->extends(xf)) {
        Scalar mid = base_->lift(x);
        // evaluate mid's coordinates at gen_image
        Scalar acc = zero();
        Scalar img = zero();
        img.z_ = gen_image_;
        if (base_->m_ == 1) {
            acc.z_[0] = mid.z_[0];
            return acc;
        }
        Scalar pw = one();
        for (unsigned i = 0; i < base_->m_; ++i) {
            Scalar term = pw;
            // multiply by the F_p coordinate
            for (auto& c : term.z_) c = mulmod(c, mid.z_[i], p_);
            acc = acc + term;
            pw = pw * img;
        }
        return acc;
    }
    throw MathError("lift: field not on this extension chain");
}

FieldPtr Field::common(const FieldPtr& a, const FieldPtr& b) {
    if (a->extends(*b)) return a;
    if (b->extends(*a)) return b;
    throw MathError("cross-context arithmetic between unrelated fields");
}

// ---------------------------------------------------------------------------
// Tower coordinate arithmetic

void Field::tw_mul(unsigned level, const mpq_class* a, const mpq_class* b, mpq_class* out) const {
    if (level == 0) {
        out[0] = a[0] * b[0];
        return;
    }
    std::size_t h = std::size_t(1) << (level - 1);
    std::vector<mpq_class> ll(h), hh(h), lh(h), hl(h), hr(h);
    tw_mul(level - 1, a, b, ll.data());
    tw_mul(level - 1, a + h, b + h, hh.data());
    tw_mul(level - 1, a, b + h, lh.data());
    tw_mul(level - 1, a + h, b, hl.data());
    // hh * radicand
    std::vector<mpq_class> rad(h, mpq_class(0));
    const auto& r = radicands_[level - 1];
    std::copy(r.begin(), r.end(), rad.begin());
    tw_mul(level - 1, hh.data(), rad.data(), hr.data());
    for (std::size_t i = 0; i < h; ++i) {
        out[i] = ll[i] + hr[i];
        out[h + i] = lh[i] + hl[i];
    }
}

void Field::tw_inv(unsigned level, const mpq_class* a, mpq_class* out) const {
    if (level == 0) {
        if (sgn(a[0]) == 0) throw MathError("division by zero");
        out[0] = 1 / a[0];
        return;
    }
    std::size_t h = std::size_t(1) << (level - 1);
    // (u + v s)^-1 = (u - v s) / (u^2 - v^2 r)
    std::vector<mpq_class> u2(h), v2(h), v2r(h), n(h), ninv(h);
    tw_mul(level - 1, a, a, u2.data());
    tw_mul(level - 1, a + h, a + h, v2.data());
    std::vector<mpq_class> rad(h, mpq_class(0));
    const auto& r = radicands_[level - 1];
    std::copy(r.begin(), r.end(), rad.begin());
    tw_mul(level - 1, v2.data(), rad.data(), v2r.data());
    bool zero = true;
    for (std::size_t i = 0; i < h; ++i) {
        n[i] = u2[i] - v2r[i];
        if (sgn(n[i]) != 0) zero = false;
    }
    if (zero) throw MathError("zero divisor in tower (redundant adjunction?)");
    tw_inv(level - 1, n.data(), ninv.data());
    std::vector<mpq_class> lo(h), hi(h), negv(h);
    tw_mul(level - 1, a, ninv.data(), lo.data());
    for (std::size_t i = 0; i < h; ++i) negv[i] = -a[h + i];
    tw_mul(level - 1, negv.data(), ninv.data(), hi.data());
    for (std::size_t i = 0; i < h; ++i) {
        out[i] = lo[i];
        out[h + i] = hi[i];
    }
}

bool Field::tw_sqrt(unsigned level, const mpq_class* a, mpq_class* out) const {
    if (level == 0) {
        mpq_class r;
        if (!rational_sqrt(a[0], r)) return false;
        out[0] = r;
        return true;
    }
    std::size_t h = std::size_t(1) << (level - 1);
    const mpq_class* u = a;
    const mpq_class* v = a + h;
    bool vzero = true;
    for (std::size_t i = 0; i < h; ++i)
        if (sgn(v[i]) != 0) vzero = false;
    std::vector<mpq_class> rad(h, mpq_class(0));
    const auto& rr = radicands_[level - 1];
    std::copy(rr.begin(), rr.end(), rad.begin());
    if (vzero) {
        // sqrt(u): either sqrt in the lower level, or sqrt(u/r)*s
        if (tw_sqrt(level - 1, u, out)) {
            std::fill(out + h, out + 2 * h, mpq_class(0));
            return true;
        }
        std::vector<mpq_class> rinv(h), ur(h);
        tw_inv(level - 1, rad.data(), rinv.data());
        tw_mul(level - 1, u, rinv.data(), ur.data());
        if (tw_sqrt(level - 1, ur.data(), out + h)) {
            std::fill(out, out + h, mpq_class(0));
            return true;
        }
        return false;
    }
    // want (x + y s)^2 = u + v s: x^2 + y^2 r = u, 2xy = v
    // x^2 = (u ± w)/2 with w = sqrt(u^2 - v^2 r)
    std::vector<mpq_class> u2(h), v2(h), v2r(h), disc(h), w(h);
    tw_mul(level - 1, u, u, u2.data());
    tw_mul(level - 1, v, v, v2.data());
    tw_mul(level - 1, v2.data(), rad.data(), v2r.data());
    for (std::size_t i = 0; i < h; ++i) disc[i] = u2[i] - v2r[i];
    if (!tw_sqrt(level - 1, disc.data(), w.data())) return false;
    for (int sign = 0; sign < 2; ++sign) {
        std::vector<mpq_class> x2(h), x(h);
        for (std::size_t i = 0; i < h; ++i)
            x2[i] = (u[i] + (sign ? -w[i] : w[i])) / 2;
        bool x2zero = true;
        for (std::size_t i = 0; i < h; ++i)
            if (sgn(x2[i]) != 0) x2zero = false;
        if (x2zero) continue;  // would force x = 0, handled by vzero path
        if (!tw_sqrt(level - 1, x2.data(), x.data())) continue;
        // y = v / (2x)
        std::vector<mpq_class> twox(h), txinv(h), y(h);
        for (std::size_t i = 0; i < h; ++i) twox[i] = 2 * x[i];
        tw_inv(level - 1, twox.data(), txinv.data());
        std::vector<mpq_class> vv(v, v + h);
        tw_mul(level - 1, vv.data(), txinv.data(), y.data());
        std::copy(x.begin(), x.end(), out);
        std::copy(y.begin(), y.end(), out + h);
        return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Finite field coordinate arithmetic

std::vector<std::uint64_t> Field::ff_mul(const std::vector<std::uint64_t>& a,
                                         const std::vector<std::uint64_t>& b) const {
    if (m_ == 1) return {mulmod(a[0], b[0], p_)};
    std::vector<std::uint64_t> prod(2 * m_ - 1, 0);
    for (unsigned i = 0; i < m_; ++i) {
        if (!a[i]) continue;
        for (unsigned j = 0; j < m_; ++j)
            if (b[j]) prod[i + j] = (prod[i + j] + mulmod(a[i], b[j], p_)) % p_;
    }
    for (unsigned d = 2 * m_ - 2; d >= m_; --d) {
        std::uint64_t c = prod[d];
        if (c) {
            prod[d] = 0;
            for (unsigned k = 0; k < m_; ++k)
                prod[d - m_ + k] = (prod[d - m_ + k] + mulmod(c, (p_ - modpoly_[k] % p_) % p_, p_)) % p_;
        }
        if (d == m_) break;
    }
    prod.resize(m_);
    return prod;
}

std::vector<std::uint64_t> Field::ff_inv(const std::vector<std::uint64_t>& a) const {
    if (m_ == 1) return {invmod(a[0], p_)};
    // extended Euclid in F_p[x] against the modulus
    PolyP r0(modpoly_.begin(), modpoly_.end());
    r0.push_back(1);
    PolyP r1(a.begin(), a.end());
    poly_trim(r1);
    if (r1.empty()) throw MathError("division by zero in finite field");
    PolyP s0{}, s1{1};
    while (!r1.empty()) {
        // divide r0 by r1
        PolyP q;
        PolyP rem = r0;
        std::uint64_t lead_inv = invmod(r1.back(), p_);
        if (rem.size() >= r1.size()) q.assign(rem.size() - r1.size() + 1, 0);
        while (rem.size() >= r1.size() && !rem.empty()) {
            std::uint64_t f = mulmod(rem.back(), lead_inv, p_);
            std::size_t off = rem.size() - r1.size();
            q[off] = f;
            for (std::size_t i = 0; i < r1.size(); ++i)
                rem[off + i] = (rem[off + i] + mulmod(f, p_ - r1[i] % p_, p_)) % p_;
            poly_trim(rem);
        }
        // s = s0 - q*s1
        PolyP qs(q.size() + s1.size(), 0);
        for (std::size_t i = 0; i < q.size(); ++i)
            if (q[i])
                for (std::size_t j = 0; j < s1.size(); ++j)
                    if (s1[j]) qs[i + j] = (qs[i + j] + mulmod(q[i], s1[j], p_)) % p_;
        PolyP s(std::max(s0.size(), qs.size()), 0);
        for (std::size_t i = 0; i < s.size(); ++i) {
            std::uint64_t v0 = i < s0.size() ? s0[i] : 0;
            std::uint64_t v1 = i < qs.size() ? qs[i] : 0;
            s[i] = (v0 + p_ - v1) % p_;
        }
        poly_trim(s);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s;
    }
    if (r0.size() != 1) throw MathError("ff_inv: element not invertible");
    std::uint64_t c = invmod(r0[0], p_);
    std::vector<std::uint64_t> out(m_, 0);
    for (std::size_t i = 0; i < s0.size() && i < m_; ++i) out[i] = mulmod(s0[i], c, p_);
    return out;
}

std::uint64_t Field::ff_index(const std::vector<std::uint64_t>& a) const {
    std::uint64_t idx = 0;
    for (unsigned i = m_; i-- > 0;) idx = idx * p_ + a[i];
    return idx;
}

std::vector<std::uint64_t> Field::ff_element(std::uint64_t index) const {
    std::vector<std::uint64_t> a(m_, 0);
    for (unsigned i = 0; i < m_; ++i) {
        a[i] = index % p_;
        index /= p_;
    }
    return a;
}

// ---------------------------------------------------------------------------
// Square roots and extensions

std::optional<Scalar> Field::sqrt_in_field(const Scalar& x) const {
    Scalar v = lift(x);
    if (kind_ != FieldKind::Finite) {
        Scalar out = zero();
        if (!tw_sqrt(tower_levels(), v.q_.data(), out.q_.data())) return std::nullopt;
        // canonical representative: negate if the first nonzero coordinate is negative
        for (auto& c : out.q_) {
            if (sgn(c) == 0) continue;
            if (sgn(c) < 0)
                for (auto& d : out.q_) d = -d;
            break;
        }
        return out;
    }
    // finite: Euler criterion then deterministic search (desk-scale orders)
    if (v.is_zero()) return this->zero();
    std::uint64_t q = order();
    if (q > 4'000'000) throw MathError("finite field too large for square root search");
    // Euler: x^((q-1)/2) == 1
    Scalar e = one();
    {
        std::uint64_t ee = (q - 1) / 2;
        Scalar base = v;
        while (ee) {
            if (ee & 1) e = e * base;
            base = base * base;
            ee >>= 1;
        }
    }
    if (!(e == one())) return std::nullopt;
    for (std::uint64_t i = 1; i < q; ++i) {
        Scalar r = zero();
        r.z_ = ff_element(i);
        if (r * r == v) return r;  // least index wins: canonical
    }
    return std::nullopt;
}

FieldPtr Field::tower_extend(const Scalar& rad) const {
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = FieldKind::SqrtTower;
    f->radicands_ = radicands_;
    std::vector<mpq_class> r = rad.q_;
    r.resize(std::size_t(1) << tower_levels(), mpq_class(0));
    f->radicands_.push_back(std::move(r));
    f->base_ = shared_from_this();
    return f;
}

FieldPtr Field::finite_square_ext(const FieldPtr& f) {
    std::uint64_t p = f->p_;
    unsigned m2 = f->m_ * 2;
    auto g = std::shared_ptr<Field>(new Field());
    g->kind_ = FieldKind::Finite;
    g->p_ = p;
    g->m_ = m2;
    g->modpoly_ = canonical_modpoly(p, m2);
    g->base_ = f;
    if (f->m_ > 1) {
        // image of the base generator: least root of the base modulus here
        std::uint64_t q2 = g->order();
        if (q2 > 4'000'000) throw MathError("finite field extension too large");
        bool found = false;
        for (std::uint64_t i = 0; i < q2 && !found; ++i) {
            auto cand = g->ff_element(i);
            // evaluate base modpoly at cand
            std::vector<std::uint64_t> acc(m2, 0);
            acc[0] = f->modpoly_[0] % p;
            std::vector<std::uint64_t> pw(m2, 0);
            pw[0] = 1;
            for (unsigned k = 1; k <= f->m_; ++k) {
                pw = g->ff_mul(pw, cand);
                std::uint64_t coef = (k == f->m_) ? 1 : f->modpoly_[k] % p;
                if (coef)
                    for (unsigned t = 0; t < m2; ++t)
                        acc[t] = (acc[t] + mulmod(coef, pw[t], p)) % p;
            }
            if (std::all_of(acc.begin(), acc.end(), [](std::uint64_t c) { return c == 0; })) {
                g->gen_image_ = cand;
                found = true;
            }
        }
        if (!found) throw MathError("no root of base modulus in extension");  // cannot happen
    }
    return g;
}

std::pair<Scalar, FieldPtr> Field::sqrt_adjoin(const Scalar& x, unsigned tower_cap) {
    const FieldPtr& f = x.field();
    if (auto r = f->sqrt_in_field(x)) return {*r, f};
    if (f->kind_ == FieldKind::Finite) {
        FieldPtr g = finite_square_ext(f);
        Scalar lifted = g->lift(x);
        auto r = g->sqrt_in_field(lifted);
        if (!r) throw MathError("sqrt_adjoin: no root in quadratic extension");  // cannot happen
        return {*r, g};
    }
    if (f->tower_levels() >= tower_cap)
        throw MathError("sqrt_adjoin: tower extension cap exceeded (" + std::to_string(tower_cap) + ")");
    // rational radicands: strip the largest square divisor so branches that
    // need sqrt(8) and sqrt(2) share one adjunction
    if (auto q = x.as_rational()) {
        mpz_class nd = q->get_num() * q->get_den();
        mpz_class s = 1;
        bool neg = nd < 0;
        if (neg) nd = -nd;
        for (mpz_class d = 2; d * d <= nd && d < 1000; ++d) {
            while (nd % (d * d) == 0) {
                nd /= d * d;
                s *= d;
            }
        }
        if (mpz_perfect_square_p(nd.get_mpz_t())) {
            mpz_class r;
            mpz_sqrt(r.get_mpz_t(), nd.get_mpz_t());
            s *= r;
            nd = 1;
        }
        mpq_class radicand(neg ? -nd : nd);
        FieldPtr g = f->tower_extend(f->rational(radicand));
        Scalar root = g->tower_root(g->tower_levels());
        return {root * g->rational(mpq_class(s, q->get_den())), g};
    }
    FieldPtr g = f->tower_extend(x);
    return {g->tower_root(g->tower_levels()), g};
}

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar() {
    field_ = Field::rationals();
    q_.assign(1, mpq_class(0));
}

void Scalar::promote(Scalar& a, Scalar& b) {
    if (a.field_->same(*b.field_)) return;
    FieldPtr c = Field::common(a.field_, b.field_);
    a = c->lift(a);
    b = c->lift(b);
}

bool Scalar::is_zero() const {
    if (field_->kind() == FieldKind::Finite)
        return std::all_of(z_.begin(), z_.end(), [](std::uint64_t c) { return c == 0; });
    return std::all_of(q_.begin(), q_.end(), [](const mpq_class& c) { return sgn(c) == 0; });
}

bool Scalar::is_one() const { return *this == field_->one(); }

Scalar Scalar::operator-() const {
    Scalar r = *this;
    if (field_->kind() == FieldKind::Finite) {
        for (auto& c : r.z_) c = c ? field_->characteristic() - c : 0;
    } else {
        for (auto& c : r.q_) c = -c;
    }
    return r;
}

Scalar Scalar::operator+(const Scalar& o) const {
    Scalar a = *this, b = o;
    promote(a, b);
    if (a.field_->kind() == FieldKind::Finite) {
        std::uint64_t p = a.field_->characteristic();
        for (std::size_t i = 0; i < a.z_.size(); ++i) a.z_[i] = (a.z_[i] + b.z_[i]) % p;
    } else {
        for (std::size_t i = 0; i < a.q_.size(); ++i) a.q_[i] += b.q_[i];
    }
    return a;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    Scalar a = *this, b = o;
    promote(a, b);
    if (a.field_->kind() == FieldKind::Finite) {
        a.z_ = a.field_->ff_mul(a.z_, b.z_);
        return a;
    }
    Scalar r = a.field_->zero();
    a.field_->tw_mul(a.field_->tower_levels(), a.q_.data(), b.q_.data(), r.q_.data());
    return r;
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw MathError("inverse of zero");
    if (field_->kind() == FieldKind::Finite) {
        Scalar r = *this;
        r.z_ = field_->ff_inv(z_);
        return r;
    }
    Scalar r = field_->zero();
    field_->tw_inv(field_->tower_levels(), q_.data(), r.q_.data());
    return r;
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

Scalar Scalar::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Scalar r = field_->one();
    Scalar b = *this;
    unsigned long u = static_cast<unsigned long>(e);
    while (u) {
        if (u & 1) r = r * b;
        b = b * b;
        u >>= 1;
    }
    return r;
}

bool Scalar::operator==(const Scalar& o) const {
    Scalar a = *this, b = o;
    promote(a, b);
    if (a.field_->kind() == FieldKind::Finite) return a.z_ == b.z_;
    return a.q_ == b.q_;
}

int Scalar::cmp(const Scalar& o) const {
    Scalar a = *this, b = o;
    promote(a, b);
    if (a.field_->kind() == FieldKind::Finite) {
        if (a.z_ < b.z_) return -1;
        if (b.z_ < a.z_) return 1;
        return 0;
    }
    for (std::size_t i = 0; i < a.q_.size(); ++i) {
        int c = ::cmp(a.q_[i], b.q_[i]);
        if (c) return c;
    }
    return 0;
}

std::optional<mpq_class> Scalar::as_rational() const {
    if (field_->kind() == FieldKind::Finite) return std::nullopt;
    for (std::size_t i = 1; i < q_.size(); ++i)
        if (sgn(q_[i]) != 0) return std::nullopt;
    return q_[0];
}

// ---------------------------------------------------------------------------
// Printing

std::string Scalar::str() const {
    if (field_->kind() == FieldKind::Finite) {
        // polynomial in g, low degree first omitted-zero form
        std::ostringstream os;
        bool first = true;
        for (unsigned i = field_->ext_degree(); i-- > 0;) {
            if (!z_[i]) continue;
            if (!first) os << "+";
            first = false;
            if (i == 0 || z_[i] != 1) os << z_[i];
            if (i >= 1) {
                if (z_[i] != 1) os << "*";
                os << "g";
                if (i > 1) os << "^" << i;
            }
        }
        if (first) os << "0";
        return os.str();
    }
    // tower coordinates over basis of products of roots
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < q_.size(); ++i) {
        if (sgn(q_[i]) == 0) continue;
        std::string basis;
        for (unsigned k = 0; k < field_->tower_levels(); ++k)
            if (i & (std::size_t(1) << k)) {
                if (!basis.empty()) basis += "*";
                basis += "s" + std::to_string(k + 1);
            }
        mpq_class c = q_[i];
        if (first) {
            if (sgn(c) < 0) os << "-";
        } else {
            os << (sgn(c) < 0 ? " - " : " + ");
        }
        first = false;
        mpq_class a = abs(c);
        if (basis.empty()) {
            os << a.get_str();
        } else if (a == 1) {
            os << basis;
        } else {
            os << a.get_str() << "*" << basis;
        }
    }
    if (first) os << "0";
    return os.str();
}

std::string Field::describe() const {
    switch (kind_) {
        case FieldKind::Rationals:
            return "Q";
        case FieldKind::SqrtTower: {
            std::string s = "Q(";
            for (unsigned k = 1; k <= tower_levels(); ++k) {
                if (k > 1) s += ", ";
                s += "s" + std::to_string(k) + "=sqrt(" + radicand(k).str() + ")";
            }
            return s + ")";
        }
        case FieldKind::Finite: {
            if (m_ == 1) return "F_" + std::to_string(p_);
            std::string s = "F_" + std::to_string(p_) + "^" + std::to_string(m_) + " (x^" +
                            std::to_string(m_);
            for (unsigned i = m_; i-- > 0;)
                if (modpoly_[i]) s += "+" + std::to_string(modpoly_[i]) + (i ? "*x^" + std::to_string(i) : "");
            return s + ")";
        }
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Parsing (shared recursive-descent scalar expression parser)

namespace {

struct ScalarParser {
    std::string_view s;
    std::size_t pos = 0;
    const Field* field;

    void skip() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError("scalar parse error at position " + std::to_string(pos) + ": " + msg);
    }

    Scalar expr() {
        Scalar v = term();
        for (;;) {
            skip();
            if (eat('+'))
                v = v + term();
            else if (eat('-'))
                v = v - term();
            else
                return v;
        }
    }
    Scalar term() {
        Scalar v = factor();
        for (;;) {
            skip();
            if (eat('*'))
                v = v * factor();
            else if (eat('/'))
                v = v / factor();
            else
                return v;
        }
    }
    Scalar factor() {
        skip();
        if (eat('-')) return -factor();
        if (eat('+')) return factor();
        Scalar v = atom();
        skip();
        if (eat('^')) {
            skip();
            bool neg = eat('-');
            std::size_t start = pos;
            while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == start) fail("expected integer exponent");
            long e = std::stol(std::string(s.substr(start, pos - start)));
            v = v.pow(neg ? -e : e);
        }
        return v;
    }
    Scalar atom() {
        skip();
        if (eat('(')) {
            Scalar v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (pos >= s.size()) fail("unexpected end of input");
        char c = s[pos];
        if (isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            mpz_class n(std::string(s.substr(start, pos - start)), 10);
            return field->rational(mpq_class(n));
        }
        if (c == 's') {
            ++pos;
            std::size_t start = pos;
            while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == start) fail("expected root index after 's'");
            unsigned k = static_cast<unsigned>(std::stoul(std::string(s.substr(start, pos - start))));
            return field->tower_root(k);
        }
        if (c == 'g') {
            ++pos;
            return field->generator();
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

Scalar Field::parse(std::string_view text) const {
    ScalarParser p{text, 0, this};
    Scalar v = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    return v;
}

}  // namespace sck
