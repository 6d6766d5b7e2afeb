#include "sck/mpoly.hpp"

#include <algorithm>
#include <map>

namespace sck {

namespace {
constexpr std::uint64_t kEnumGuard = 4'000'000;
}

UPoly::UPoly(FieldPtr field, std::vector<Scalar> coeffs)
    : field_(std::move(field)), c_(std::move(coeffs)) {
    trim();
}

void UPoly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

UPoly UPoly::constant(const FieldPtr& field, const Scalar& c) {
    return UPoly(field, std::vector<Scalar>{c});
}

UPoly UPoly::x(const FieldPtr& field) {
    return UPoly(field, {field->zero(), field->one()});
}

Scalar UPoly::coeff(std::size_t i) const {
    return i < c_.size() ? c_[i] : field_->zero();
}

Scalar UPoly::lead() const {
    if (c_.empty()) throw MathError("lead of zero polynomial");
    return c_.back();
}

UPoly UPoly::operator+(const UPoly& o) const {
    std::vector<Scalar> r(std::max(c_.size(), o.c_.size()), field_->zero());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
    return UPoly(field_, std::move(r));
}

UPoly UPoly::operator-(const UPoly& o) const {
    std::vector<Scalar> r(std::max(c_.size(), o.c_.size()), field_->zero());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) - o.coeff(i);
    return UPoly(field_, std::move(r));
}

UPoly UPoly::operator-() const {
    std::vector<Scalar> r = c_;
    for (auto& v : r) v = -v;
    return UPoly(field_, std::move(r));
}

UPoly UPoly::operator*(const UPoly& o) const {
    if (is_zero() || o.is_zero()) return UPoly(field_);
    std::vector<Scalar> r(c_.size() + o.c_.size() - 1, field_->zero());
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return UPoly(field_, std::move(r));
}

UPoly UPoly::operator*(const Scalar& c) const {
    std::vector<Scalar> r = c_;
    for (auto& v : r) v *= c;
    return UPoly(field_, std::move(r));
}

Scalar UPoly::eval(const Scalar& t) const {
    Scalar acc = field_->zero();
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * t + c_[i];
    return acc;
}

UPoly UPoly::derivative() const {
    if (c_.size() <= 1) return UPoly(field_);
    std::vector<Scalar> r(c_.size() - 1, field_->zero());
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * field_->integer(long(i));
    return UPoly(field_, std::move(r));
}

UPoly UPoly::monic() const {
    if (is_zero()) return *this;
    return *this * lead().inverse();
}

std::pair<UPoly, UPoly> UPoly::divrem(const UPoly& d) const {
    if (d.is_zero()) throw MathError("polynomial division by zero");
    UPoly q(field_), r = *this;
    Scalar linv = d.lead().inverse();
    while (!r.is_zero() && r.degree() >= d.degree()) {
        std::size_t shift = std::size_t(r.degree() - d.degree());
        Scalar f = r.lead() * linv;
        std::vector<Scalar> qc(shift + 1, field_->zero());
        qc[shift] = f;
        UPoly term(field_, std::move(qc));
        q = q + term;
        r = r - term * d;
    }
    return {q, r};
}

UPoly UPoly::gcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
        UPoly r = a.divrem(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

UPoly UPoly::squarefree_part() const {
    if (is_zero()) throw MathError("squarefree part of zero polynomial");
    if (degree() <= 1) return monic();
    UPoly d = derivative();
    const std::uint64_t p = field_->characteristic();
    if (d.is_zero()) {
        // f = g(x^p); take p-th roots of the coefficients and recurse
        if (p == 0) throw MathError("squarefree_part: internal");
        long e = 1;
        for (unsigned i = 1; i < field_->ext_degree(); ++i) e *= long(p);
        std::vector<Scalar> h;
        for (std::size_t i = 0; i < c_.size(); i += std::size_t(p)) h.push_back(c_[i].pow(e));
        return UPoly(field_, std::move(h)).squarefree_part();
    }
    UPoly g = UPoly::gcd(*this, d);
    if (g.degree() == 0) return monic();
    UPoly w = divrem(g).first;  // distinct factors of multiplicity not divisible by p
    UPoly r = g.squarefree_part();
    UPoly overlap = UPoly::gcd(r, w);
    return (w * r.divrem(overlap).first).monic();
}

UPoly UPoly::lift(const FieldPtr& f) const {
    std::vector<Scalar> r;
    r.reserve(c_.size());
    for (const auto& v : c_) r.push_back(f->lift(v));
    return UPoly(f, std::move(r));
}

Scalar field_element(const FieldPtr& f, std::uint64_t index) {
    if (f->kind() != FieldKind::Finite) throw MathError("field_element needs a finite field");
    const std::uint64_t p = f->characteristic();
    Scalar acc = f->integer(long(index % p));
    index /= p;
    if (index == 0) return acc;
    Scalar g = f->generator(), gp = g;
    while (index != 0) {
        std::uint64_t digit = index % p;
        index /= p;
        if (digit != 0) acc += f->integer(long(digit)) * gp;
        gp *= g;
    }
    return acc;
}

namespace {

// all positive divisors of |v|, with honesty about incomplete factorization
bool divisors_of(const mpz_class& v, std::vector<mpz_class>& out) {
    mpz_class n = abs(v);
    if (n == 0) throw MathError("divisors of zero");
    std::map<mpz_class, unsigned> fac;
    for (mpz_class d = 2; d * d <= n && d <= 1'000'000; ++d)
        while (n % d == 0) {
            ++fac[d];
            n /= d;
        }
    bool complete = true;
    if (n > 1) {
        ++fac[n];  // prime, or an unfactored composite remainder
        if (mpz_probab_prime_p(n.get_mpz_t(), 40) == 0) complete = false;
    }
    out = {mpz_class(1)};
    for (const auto& [prime, mult] : fac) {
        std::size_t sz = out.size();
        mpz_class pw = 1;
        for (unsigned e = 1; e <= mult; ++e) {
            pw *= prime;
            for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] * pw);
        }
    }
    return complete;
}

// deflate g by (x - r); r must be a root
UPoly deflate(const UPoly& g, const Scalar& r) {
    UPoly lin(g.field(), {-r, g.field()->one()});
    auto [q, rem] = g.divrem(lin);
    if (!rem.is_zero()) throw MathError("deflate: not a root");
    return q;
}

}  // namespace

RootIsolation isolate_roots(const UPoly& p) {
    if (p.is_zero()) throw MathError("isolate_roots: zero polynomial");
    const FieldPtr& f = p.field();
    RootIsolation out{{}, true};
    if (p.degree() == 0) return out;

    if (f->kind() == FieldKind::Finite) {
        if (f->order() > kEnumGuard) throw MathError("isolate_roots: field too large to enumerate");
        for (std::uint64_t i = 0; i < f->order(); ++i) {
            Scalar v = field_element(f, i);
            if (p.eval(v).is_zero()) out.roots.emplace_back(v, f);
        }
        return out;
    }

    UPoly g = p.squarefree_part();
    if (g.coeff(0).is_zero()) {
        out.roots.emplace_back(f->zero(), f);
        g = deflate(g, f->zero());
    }

    // rational candidates u/v with u | g(0), v | lead(g)
    bool candidates_complete = true;
    bool all_rational = true;
    for (const auto& c : g.coeffs())
        if (!c.as_rational()) all_rational = false;
    if (all_rational && g.degree() >= 1) {
        mpz_class den = 1;
        for (const auto& c : g.coeffs()) den = lcm(den, c.as_rational()->get_den());
        std::vector<mpz_class> ic;
        for (const auto& c : g.coeffs()) {
            mpq_class s = *c.as_rational() * den;
            ic.push_back(s.get_num());
        }
        std::vector<mpz_class> us, vs;
        candidates_complete = divisors_of(ic.front(), us);
        candidates_complete = divisors_of(ic.back(), vs) && candidates_complete;
        for (const auto& u : us)
            for (const auto& v : vs)
                for (int sign : {1, -1}) {
                    if (g.degree() < 1) break;
                    Scalar cand = f->rational(mpq_class(sign * u, v));
                    if (g.eval(cand).is_zero()) {
                        out.roots.emplace_back(cand, f);
                        g = deflate(g, cand);
                    }
                }
    }

    if (g.degree() == 1) {
        out.roots.emplace_back(-g.coeff(0) / g.coeff(1), f);
    } else if (g.degree() == 2) {
        Scalar a = g.coeff(2), b = g.coeff(1), c = g.coeff(0);
        auto [sd, ext] = Field::sqrt_adjoin(b * b - f->integer(4) * a * c);
        Scalar two_a = ext->lift(f->integer(2) * a);
        Scalar mb = ext->lift(-b);
        out.roots.emplace_back((mb + sd) / two_a, ext);
        out.roots.emplace_back((mb - sd) / two_a, ext);
    } else if (g.degree() >= 3) {
        out.complete = false;
    }
    (void)candidates_complete;  // degree <= 2 residuals are solved exactly anyway
    return out;
}

BinForm::BinForm(FieldPtr field, unsigned degree)
    : field_(std::move(field)), deg_(degree), c_(degree + 1, field_->zero()) {}

BinForm::BinForm(FieldPtr field, unsigned degree, std::vector<Scalar> coeffs)
    : field_(std::move(field)), deg_(degree), c_(std::move(coeffs)) {
    if (c_.size() != std::size_t(deg_) + 1) throw MathError("BinForm: coefficient count mismatch");
}

BinForm BinForm::constant(const FieldPtr& field, const Scalar& c) {
    return BinForm(field, 0, {c});
}

bool BinForm::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Scalar& v) { return v.is_zero(); });
}

BinForm BinForm::operator+(const BinForm& o) const {
    if (deg_ != o.deg_) {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        throw MathError("BinForm: degree mismatch in sum");
    }
    BinForm r(field_, deg_);
    for (unsigned i = 0; i <= deg_; ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
}

BinForm BinForm::operator-(const BinForm& o) const {
    return *this + o * field_->integer(-1);
}

BinForm BinForm::operator*(const BinForm& o) const {
    BinForm r(field_, deg_ + o.deg_);
    for (unsigned i = 0; i <= deg_; ++i)
        for (unsigned j = 0; j <= o.deg_; ++j) r.c_[i + j] += c_[i] * o.c_[j];
    return r;
}

BinForm BinForm::operator*(const Scalar& s) const {
    BinForm r = *this;
    for (auto& v : r.c_) v *= s;
    return r;
}

Scalar BinForm::eval(const Scalar& t0, const Scalar& t1) const {
    Scalar acc = field_->zero();
    Scalar p0 = field_->one();
    std::vector<Scalar> pow1(deg_ + 1, field_->one());
    for (unsigned i = 1; i <= deg_; ++i) pow1[i] = pow1[i - 1] * t1;
    for (unsigned i = 0; i <= deg_; ++i) {
        acc += c_[i] * p0 * pow1[deg_ - i];
        p0 *= t0;
    }
    return acc;
}

UPoly BinForm::dehomogenize() const {
    return UPoly(field_, c_);
}

unsigned BinForm::distinct_projective_roots() const {
    if (is_zero()) throw MathError("roots of the zero form");
    UPoly p = dehomogenize();
    unsigned at_inf = (deg_ > unsigned(p.degree())) ? 1 : 0;
    if (p.degree() <= 0) return at_inf;
    return unsigned(p.squarefree_part().degree()) + at_inf;
}

BinForm binform_gcd(const BinForm& a, const BinForm& b) {
    if (a.is_zero() && b.is_zero()) throw MathError("gcd of zero forms");
    if (a.is_zero()) return binform_gcd(b, b);
    if (b.is_zero()) return binform_gcd(a, a);
    UPoly pa = a.dehomogenize(), pb = b.dehomogenize();
    unsigned ka = a.degree() - unsigned(pa.degree());
    unsigned kb = b.degree() - unsigned(pb.degree());
    UPoly g = (&a == &b) ? pa.monic() : UPoly::gcd(pa, pb);
    unsigned k = std::min(ka, kb);
    unsigned deg = unsigned(g.degree()) + k;
    std::vector<Scalar> c(deg + 1, a.field()->zero());
    for (std::size_t i = 0; i < g.coeffs().size(); ++i) c[i] = g.coeffs()[i];
    return BinForm(a.field(), deg, std::move(c));
}

ProjRootIsolation binform_roots(const BinForm& b) {
    if (b.is_zero()) throw MathError("roots of the zero form");
    const FieldPtr& f = b.field();
    ProjRootIsolation out{{}, true};
    UPoly p = b.dehomogenize();
    if (b.degree() > unsigned(p.degree())) out.roots.push_back({f->one(), f->zero(), f});
    if (p.degree() >= 1) {
        RootIsolation ri = isolate_roots(p);
        out.complete = ri.complete;
        for (auto& [r, rf] : ri.roots) {
            if (r.is_zero())
                out.roots.push_back({rf->zero(), rf->one(), rf});
            else
                out.roots.push_back({rf->one(), r.inverse(), rf});
        }
    }
    return out;
}

namespace {

UPoly upoly_det(std::vector<std::vector<UPoly>>& m, std::vector<bool>& used_col,
                std::size_t row, const FieldPtr& field) {
    std::size_t n = m.size();
    if (row == n) return UPoly::constant(field, field->one());
    UPoly acc(field);
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
        if (used_col[c]) continue;
        if (!m[row][c].is_zero()) {
            used_col[c] = true;
            UPoly sub = upoly_det(m, used_col, row + 1, field);
            used_col[c] = false;
            UPoly term = m[row][c] * sub;
            acc = (sign > 0) ? acc + term : acc - term;
        }
        sign = -sign;
    }
    return acc;
}

}  // namespace

UPoly resultant_upoly(const std::vector<UPoly>& a, const std::vector<UPoly>& b,
                      const FieldPtr& field) {
    std::vector<UPoly> pa = a, pb = b;
    while (!pa.empty() && pa.back().is_zero()) pa.pop_back();
    while (!pb.empty() && pb.back().is_zero()) pb.pop_back();
    if (pa.empty() || pb.empty()) return UPoly(field);
    std::size_t da = pa.size() - 1, db = pb.size() - 1;
    if (da == 0 && db == 0) return UPoly::constant(field, field->one());
    if (da == 0) {
        UPoly r = UPoly::constant(field, field->one());
        for (std::size_t i = 0; i < db; ++i) r = r * pa[0];
        return r;
    }
    if (db == 0) {
        UPoly r = UPoly::constant(field, field->one());
        for (std::size_t i = 0; i < da; ++i) r = r * pb[0];
        return r;
    }
    std::size_t n = da + db;
    std::vector<std::vector<UPoly>> syl(n, std::vector<UPoly>(n, UPoly(field)));
    for (std::size_t r = 0; r < db; ++r)
        for (std::size_t k = 0; k <= da; ++k) syl[r][r + k] = pa[da - k];
    for (std::size_t r = 0; r < da; ++r)
        for (std::size_t k = 0; k <= db; ++k) syl[db + r][r + k] = pb[db - k];
    std::vector<bool> used(n, false);
    return upoly_det(syl, used, 0, field);
}

}  // namespace sck
