#include "sck/points.hpp"

#include <algorithm>
#include <set>

namespace sck {

namespace {

Scalar map_into(const Scalar& s, const FieldPtr& f) {
    if (f->extends(*s.field())) return f->lift(s);
    if (f->kind() == FieldKind::Finite) {
        auto q = s.as_rational();
        if (!q) throw MathError("cannot reduce a non-rational scalar into a finite field");
        return f->rational(*q);
    }
    throw MathError("scalar does not map into the requested field");
}

MuPtr map_mu(const MuPtr& mu, const FieldPtr& f) {
    if (f->same(*mu->field())) return mu;
    unsigned n = mu->n();
    std::vector<std::vector<Scalar>> e(n, std::vector<Scalar>(n, f->one()));
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) e[i][j] = map_into(mu->mu(i, j), f);
    return std::make_shared<MuParams>(n, std::move(e));
}

MuSymMatrix map_matrix(const MuSymMatrix& m, const MuPtr& tmu, const FieldPtr& f) {
    unsigned n = m.n();
    DenseMatrix e(n, std::vector<Scalar>(n, f->zero()));
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) e[i][j] = map_into(m.at(i, j), f);
    return MuSymMatrix(tmu, std::move(e));
}

/// t0 * Ma + t1 * Mb over the field of (t0, t1).
MuSymMatrix member_at(const MuSymMatrix& ma, const MuSymMatrix& mb, const Scalar& t0,
                      const Scalar& t1, const FieldPtr& f) {
    MuPtr tmu = map_mu(ma.mu(), f);
    return map_matrix(ma, tmu, f) * t0 + map_matrix(mb, tmu, f) * t1;
}

std::vector<Scalar> normalize_point(std::vector<Scalar> t) {
    for (const auto& v : t)
        if (!v.is_zero()) {
            Scalar inv = v.inverse();
            for (auto& w : t) w *= inv;
            break;
        }
    return t;
}

bool is_small_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

}  // namespace

void SpanFamily::validate() const {
    if (!mu) throw MathError("family has no mu parameters");
    if (basis.empty()) throw MathError("family needs a nonempty basis");
    unsigned n = mu->n();
    DenseMatrix flat;
    for (const auto& m : basis) {
        if (m.n() != n || !(*m.mu() == *mu)) throw MathError("family basis mu mismatch");
        std::vector<Scalar> row;
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j) row.push_back(m.at(i, j));
        flat.push_back(std::move(row));
    }
    if (matrix_rank(std::move(flat)) != basis.size())
        throw MathError("family basis is linearly dependent");
}

MuSymMatrix SpanFamily::member(const std::vector<Scalar>& t) const {
    if (t.size() != basis.size()) throw MathError("parameter arity mismatch");
    FieldPtr target = mu->field();
    for (const auto& v : t) target = Field::common(target, v.field());
    MuPtr tmu = map_mu(mu, target);
    MuSymMatrix acc = MuSymMatrix::zero(tmu);
    for (std::size_t k = 0; k < t.size(); ++k)
        acc = acc + map_matrix(basis[k], tmu, target) * map_into(t[k], target);
    return acc;
}

SpanFamily SpanFamily::mapped(const FieldPtr& f) const {
    MuPtr tmu = map_mu(mu, f);
    SpanFamily out{tmu, {}};
    for (const auto& m : basis) out.basis.push_back(map_matrix(m, tmu, f));
    return out;
}

namespace {

// entry forms of the pencil t0*Ma + t1*Mb
BinForm entry_form(const MuSymMatrix& ma, const MuSymMatrix& mb, unsigned i, unsigned j) {
    return BinForm(ma.mu()->field(), 1, {mb.at(i, j), ma.at(i, j)});
}

BinForm det3_forms(const std::vector<std::vector<BinForm>>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

std::optional<BinForm> gcd_accumulate(std::optional<BinForm> acc, const BinForm& next) {
    if (next.is_zero()) return acc;
    if (!acc) return binform_gcd(next, next);
    return binform_gcd(*acc, next);
}

PencilLocus commutative_pencil_locus(const MuSymMatrix& ma, const MuSymMatrix& mb) {
    unsigned n = ma.n();
    PencilLocus out;
    if (n < 3) {
        out.all_of_pencil = true;
        return out;
    }
    std::optional<BinForm> g;
    std::vector<unsigned> ridx, cidx;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (unsigned(__builtin_popcount(mask)) != 3) continue;
        ridx.clear();
        for (unsigned i = 0; i < n; ++i)
            if (mask & (1u << i)) ridx.push_back(i);
        for (unsigned mask2 = 0; mask2 < (1u << n); ++mask2) {
            if (unsigned(__builtin_popcount(mask2)) != 3) continue;
            cidx.clear();
            for (unsigned i = 0; i < n; ++i)
                if (mask2 & (1u << i)) cidx.push_back(i);
            std::vector<std::vector<BinForm>> minor;
            for (unsigned r = 0; r < 3; ++r) {
                std::vector<BinForm> row;
                for (unsigned c = 0; c < 3; ++c)
                    row.push_back(entry_form(ma, mb, ridx[r], cidx[c]));
                minor.push_back(std::move(row));
            }
            g = gcd_accumulate(std::move(g), det3_forms(minor));
        }
    }
    if (!g) {
        out.all_of_pencil = true;
        return out;
    }
    out.distinct_count = g->distinct_projective_roots();
    ProjRootIsolation pr = binform_roots(*g);
    out.members_complete = pr.complete;
    for (const auto& r : pr.roots) {
        MuSymMatrix m = member_at(ma, mb, r.t0, r.t1, r.field);
        unsigned rank = unsigned(symmetric_rank(m.entries()));
        out.members.push_back({r.t0, r.t1, r.field, rank});
    }
    return out;
}

PencilLocus skew_pencil_locus(const MuSymMatrix& ma, const MuSymMatrix& mb) {
    const MuPtr& mu = ma.mu();
    const FieldPtr& f = mu->field();
    PencilLocus out;

    BinForm a = entry_form(ma, mb, 0, 0), b = entry_form(ma, mb, 1, 1),
            c = entry_form(ma, mb, 2, 2), d = entry_form(ma, mb, 0, 1),
            e = entry_form(ma, mb, 0, 2), ff = entry_form(ma, mb, 1, 2);
    const Scalar m12 = mu->mu(0, 1), m13 = mu->mu(0, 2), m23 = mu->mu(1, 2);
    const Scalar m21 = mu->mu(1, 0), m31 = mu->mu(2, 0);
    Scalar one = f->one(), two = f->integer(2), four = f->integer(4);

    std::vector<BinForm> d16 = {
        d * d * four - a * b * ((one + m12) * (one + m12)),
        e * e * four - a * c * ((one + m13) * (one + m13)),
        ff * ff * four - b * c * ((one + m23) * (one + m23)),
        d * e * (two * (one + m23)) - a * ff * ((one + m12) * (one + m13)),
        e * ff * (two * (one + m12)) - c * d * ((one + m13) * (one + m23)),
        d * ff * (two * (one + m13)) - b * e * ((one + m12) * (one + m23))};
    bool all16_zero = std::all_of(d16.begin(), d16.end(),
                                  [](const BinForm& v) { return v.is_zero(); });
    if (all16_zero) {
        out.all_of_pencil = true;  // every member has mu-rank <= 1
        return out;
    }
    std::optional<BinForm> g16;
    for (const auto& v : d16) g16 = gcd_accumulate(std::move(g16), v);

    BinForm d7 = (c * d * d * m23 - d * e * ff * two + b * e * e) *
                 (c * d * d * (m13 * m21) - d * e * ff * two + b * e * e * (m12 * m23 * m31));

    auto rank_at = [&](const Scalar& t0, const Scalar& t1, const FieldPtr& rf) {
        return unsigned(mu_rank3(tau(member_at(ma, mb, t0, t1, rf))).rank);
    };

    if (a.is_zero()) {
        if (d7.is_zero()) {
            out.all_of_pencil = true;
            return out;
        }
        BinForm locus = d7 * *g16;  // rank-2 condition union rank-1 condition
        out.distinct_count = locus.distinct_projective_roots();
        ProjRootIsolation pr = binform_roots(locus);
        out.members_complete = pr.complete;
        for (const auto& r : pr.roots)
            out.members.push_back({r.t0, r.t1, r.field, rank_at(r.t0, r.t1, r.field)});
        return out;
    }

    // a != 0 generically: the sign-product of the D8 values is the polynomial
    // P8 = U^2 - W^2 X^2 Y^2, with X^2 = d^2 - mu12 ab, Y^2 = e^2 - mu13 ac
    Scalar alpha = m21 + m23 * m31, beta = m21 - m23 * m31;
    BinForm x2 = d * d - a * b * m12;
    BinForm y2 = e * e - a * c * m13;
    BinForm k = d * e * alpha - a * ff * two;
    BinForm u = k * k + x2 * y2 * (alpha * alpha) - (x2 * (e * e) + (d * d) * y2) * (beta * beta);
    BinForm w = k * (two * alpha) - d * e * (two * beta * beta);
    BinForm p8 = u * u - w * w * x2 * y2;
    if (p8.is_zero()) {
        out.all_of_pencil = true;
        return out;
    }

    // the unique root of the linear form a, handled by the a = 0 criterion
    Scalar a0 = a.coeff(0), a1 = a.coeff(1);  // a = a1 t0 + a0 t1
    std::vector<Scalar> ar = normalize_point({a0, -a1});
    bool ar_in_p8 = p8.eval(ar[0], ar[1]).is_zero();
    unsigned ar_rank = rank_at(ar[0], ar[1], f);
    bool ar_in_locus = ar_rank <= 2;  // member is nonzero, so rank >= 1

    out.distinct_count =
        p8.distinct_projective_roots() - (ar_in_p8 ? 1 : 0) + (ar_in_locus ? 1 : 0);
    ProjRootIsolation pr = binform_roots(p8);
    out.members_complete = pr.complete;
    for (const auto& r : pr.roots) {
        if (a.eval(r.t0, r.t1).is_zero()) continue;
        out.members.push_back({r.t0, r.t1, r.field, rank_at(r.t0, r.t1, r.field)});
    }
    if (ar_in_locus) out.members.push_back({ar[0], ar[1], f, ar_rank});
    return out;
}

}  // namespace

PencilLocus pencil_rank_le2_members(const MuSymMatrix& ma, const MuSymMatrix& mb) {
    if (!(*ma.mu() == *mb.mu())) throw MathError("pencil members built against different mu");
    if (ma.mu()->is_commutative()) return commutative_pencil_locus(ma, mb);
    if (ma.n() == 3) return skew_pencil_locus(ma, mb);
    throw MathError("pencil rank locus: supported modes are commutative, or skew with n = 3");
}

namespace {

unsigned skew_factor_count(const MuSymMatrix& m) {
    return unsigned(factor_quadratic(tau(m)).size());
}

void apply_witness(PointCountReport& rep, const std::vector<Scalar>& t, const FieldPtr& f,
                   unsigned value) {
    if (value == 1) ++rep.first;
    if (value == 2) ++rep.second;
    if (value == 1 || value == 2) rep.witnesses.push_back({t, f, value});
}

void check_commutative_r1(PointCountReport& rep) {
    if (rep.mode == CountMode::Commutative && rep.finite && rep.first > 1) {
        rep.anomaly = true;
        rep.anomaly_note = "r1 = " + std::to_string(rep.first) +
                           " exceeds 1, violating the expected bound for finite counts";
    }
}

}  // namespace

PointCountReport count_point_modules(const SpanFamily& family, CountMode mode,
                                     Completeness strategy, const CountOptions& opts) {
    family.validate();
    if (mode == CountMode::Commutative && !family.mu->is_commutative())
        throw MathError("commutative counting requested for a non-commutative family");

    if (strategy == Completeness::ScanEvidence)
        return scan_parameter_space(family, mode, opts.p, opts.e);

    PointCountReport rep;
    rep.mode = mode;
    rep.completeness = strategy;

    if (strategy == Completeness::CertifiedCandidates) {
        std::set<std::string> seen;
        for (const auto& cand : opts.candidates) {
            std::vector<Scalar> t = normalize_point(cand);
            std::string key;
            for (const auto& v : t) key += v.str() + "|";
            if (!seen.insert(key).second) continue;
            MuSymMatrix m = family.member(t);
            unsigned value = (mode == CountMode::Commutative)
                                 ? unsigned(symmetric_rank(m.entries()))
                                 : skew_factor_count(m);
            apply_witness(rep, t, m.mu()->field(), value);
        }
        check_commutative_r1(rep);
        return rep;
    }

    // ExactPencil
    if (family.dim() != 2) throw MathError("exact pencil enumeration needs exactly 2 basis matrices");
    PencilLocus locus = pencil_rank_le2_members(family.basis[0], family.basis[1]);
    rep.completeness = Completeness::ExactPencil;
    if (locus.all_of_pencil) {
        rep.finite = false;
        return rep;
    }
    for (const auto& mem : locus.members) {
        MuSymMatrix m = member_at(family.basis[0], family.basis[1], mem.t0, mem.t1, mem.field);
        unsigned value = (mode == CountMode::Commutative) ? mem.rank : skew_factor_count(m);
        apply_witness(rep, {mem.t0, mem.t1}, mem.field, value);
    }
    if (!locus.members_complete) {
        rep.anomaly = true;
        rep.anomaly_note = "some pencil roots are not expressible in a quadratic tower; " +
                           std::to_string(locus.distinct_count) +
                           " distinct rank<=2 members exist but only " +
                           std::to_string(locus.members.size()) + " were isolated";
    }
    check_commutative_r1(rep);
    return rep;
}

PointCountReport scan_parameter_space(const SpanFamily& family, CountMode mode,
                                      std::uint64_t p, unsigned e) {
    family.validate();
    if (!is_small_prime(p) || p == 2) throw MathError("scan needs an odd prime p");
    if (e == 0) throw MathError("scan needs e >= 1");
    FieldPtr fq = Field::finite(p, e);
    std::uint64_t q = fq->order();
    unsigned m = family.dim();

    // |P^{m-1}(F_q)| = (q^m - 1)/(q - 1)
    std::uint64_t npoints = 0, qpow = 1;
    for (unsigned i = 0; i < m; ++i) {
        npoints += qpow;
        if (qpow > (std::uint64_t(2) << 60) / q) throw MathError("scan parameter space too large");
        qpow *= q;
    }
    if (npoints > 10'000'000) throw MathError("scan guard exceeded: more than 10^7 points");

    SpanFamily fam = family.mapped(fq);
    PointCountReport rep;
    rep.mode = mode;
    rep.completeness = Completeness::ScanEvidence;
    rep.scan_fields = fq->describe();
    if (mode == CountMode::Skew)
        rep.scan_fields += " with factor search up to degree-" + std::to_string(4 * e) +
                           " extensions";

    for (unsigned lead = 0; lead < m; ++lead) {
        std::uint64_t tail = m - 1 - lead, combos = 1;
        for (std::uint64_t i = 0; i < tail; ++i) combos *= q;
        for (std::uint64_t idx = 0; idx < combos; ++idx) {
            std::vector<Scalar> t(m, fq->zero());
            t[lead] = fq->one();
            std::uint64_t rest = idx;
            for (std::uint64_t j = 0; j < tail; ++j) {
                t[lead + 1 + j] = field_element(fq, rest % q);
                rest /= q;
            }
            MuSymMatrix mat = fam.basis[0] * t[0];
            for (unsigned k = 1; k < m; ++k) mat = mat + fam.basis[k] * t[k];
            unsigned value = (mode == CountMode::Commutative)
                                 ? unsigned(symmetric_rank(mat.entries()))
                                 : skew_factor_count(mat);
            apply_witness(rep, t, fq, value);
        }
    }
    check_commutative_r1(rep);
    return rep;
}

SkewPoly planar_rank2_divisor(const SpanFamily& net, const LinearForm& plane) {
    net.validate();
    if (!net.mu->is_commutative()) throw MathError("planar divisor needs a commutative net");
    if (net.mu->n() != 4 || net.dim() != 3)
        throw MathError("planar divisor needs a net of 3 quadrics in 4 variables");
    if (plane.coeffs.size() != 4) throw MathError("linear form arity mismatch");
    if (plane.is_zero()) throw MathError("linear form is zero");
    const FieldPtr& f = net.mu->field();

    unsigned pivot = 0;
    while (plane.coeffs[pivot].is_zero()) ++pivot;
    std::vector<unsigned> rest;
    for (unsigned j = 0; j < 4; ++j)
        if (j != pivot) rest.push_back(j);

    // substitution z_pivot = -(sum over rest of l_j z_j) / l_pivot
    DenseMatrix sub(4, std::vector<Scalar>(3, f->zero()));
    for (unsigned c = 0; c < 3; ++c) {
        sub[rest[c]][c] = f->one();
        sub[pivot][c] = -plane.coeffs[rest[c]] / plane.coeffs[pivot];
    }

    MuPtr tmu = std::make_shared<MuParams>(MuParams::ones(3, f));
    std::vector<DenseMatrix> reduced;
    for (const auto& mtx : net.basis) {
        DenseMatrix a(3, std::vector<Scalar>(3, f->zero()));
        for (unsigned i = 0; i < 3; ++i)
            for (unsigned j = 0; j < 3; ++j) {
                Scalar acc = f->zero();
                for (unsigned r = 0; r < 4; ++r)
                    for (unsigned c = 0; c < 4; ++c)
                        acc += sub[r][i] * mtx.at(r, c) * sub[c][j];
                a[i][j] = acc;
            }
        reduced.push_back(std::move(a));
    }

    // det of N(t) with N_ij = sum_k A_k[i][j] t_k, a cubic in t1,t2,t3
    auto entry = [&](unsigned i, unsigned j) {
        SkewPoly s(tmu);
        for (unsigned k = 0; k < 3; ++k) {
            Mono mono(3, 0);
            mono[k] = 1;
            s.add_term(mono, reduced[k][i][j]);
        }
        return s;
    };
    SkewPoly n00 = entry(0, 0), n01 = entry(0, 1), n02 = entry(0, 2);
    SkewPoly n11 = entry(1, 1), n12 = entry(1, 2), n22 = entry(2, 2);
    SkewPoly n10 = entry(1, 0), n20 = entry(2, 0), n21 = entry(2, 1);
    return n00 * (n11 * n22 - n12 * n21) - n01 * (n10 * n22 - n12 * n20) +
           n02 * (n10 * n21 - n11 * n20);
}

namespace {

// coefficients of z3^k in F(z1, 1, z3) as polynomials in z1
std::vector<UPoly> slice_affine(const SkewPoly& f) {
    const FieldPtr& fld = f.mu()->field();
    std::vector<std::vector<Scalar>> c(4, std::vector<Scalar>(4, fld->zero()));
    for (const auto& [mono, v] : f.terms()) c[mono[2]][mono[0]] += v;
    std::vector<UPoly> out;
    for (unsigned k = 0; k < 4; ++k) out.emplace_back(fld, c[k]);
    return out;
}

// restriction to z2 = 0 as a binary form in (z1, z3)
BinForm slice_line(const SkewPoly& f) {
    const FieldPtr& fld = f.mu()->field();
    BinForm out(fld, 3);
    std::vector<Scalar> c(4, fld->zero());
    for (const auto& [mono, v] : f.terms())
        if (mono[1] == 0) c[mono[0]] += v;
    return BinForm(fld, 3, std::move(c));
}

PlanePoint make_point(const Scalar& x, const Scalar& y, const Scalar& z, const FieldPtr& f) {
    std::vector<Scalar> coords = normalize_point({x, y, z});
    return {std::move(coords), f};
}

}  // namespace

CubicIntersection intersect_plane_cubics(const SkewPoly& f1, const SkewPoly& f2) {
    if (!f1.mu()->is_commutative() || f1.n() != 3)
        throw MathError("cubic intersection needs commutative polynomials in 3 variables");
    if (!(*f1.mu() == *f2.mu())) throw MathError("cubics built against different rings");
    if (f1.is_zero() || f2.is_zero()) throw MathError("cubic intersection: zero curve");
    if (f1.require_homogeneous("intersect") != 3 || f2.require_homogeneous("intersect") != 3)
        throw MathError("cubic intersection needs homogeneous cubics");
    const FieldPtr& fld = f1.mu()->field();
    CubicIntersection out;

    // affine chart z2 = 1, projecting along z3 onto (z1 : z2)
    std::vector<UPoly> a = slice_affine(f1), b = slice_affine(f2);
    bool a_const = a[1].is_zero() && a[2].is_zero() && a[3].is_zero();
    bool b_const = b[1].is_zero() && b[2].is_zero() && b[3].is_zero();
    if (a_const && b_const) {
        // both curves are cones over (0:0:1); a shared ruling line is a
        // common component
        if (!a[0].is_zero() && !b[0].is_zero() && UPoly::gcd(a[0], b[0]).degree() >= 1) {
            out.infinite = true;
            return out;
        }
        if (a[0].is_zero() || b[0].is_zero()) {
            out.infinite = true;  // one curve contains every ruling line
            return out;
        }
    } else {
        UPoly res = resultant_upoly(a, b, fld);
        if (res.is_zero()) {
            out.infinite = true;
            return out;
        }
        if (res.degree() >= 1) {
            RootIsolation ri = isolate_roots(res);
            out.complete = out.complete && ri.complete;
            for (const auto& [root, rf] : ri.roots) {
                std::vector<Scalar> g1c, g2c;
                for (unsigned k = 0; k < 4; ++k) {
                    g1c.push_back(a[k].lift(rf).eval(root));
                    g2c.push_back(b[k].lift(rf).eval(root));
                }
                UPoly g1(rf, g1c), g2(rf, g2c);
                if (g1.is_zero() && g2.is_zero()) {
                    out.infinite = true;  // common ruling line through (0:0:1)
                    return out;
                }
                UPoly h = g1.is_zero() ? g2.monic() : (g2.is_zero() ? g1.monic() : UPoly::gcd(g1, g2));
                if (h.degree() < 1) continue;  // collapse towards (0:0:1), handled below
                RootIsolation rz = isolate_roots(h);
                out.complete = out.complete && rz.complete;
                for (const auto& [zr, zf] : rz.roots)
                    out.points.push_back(
                        make_point(zf->lift(rf->lift(root)), zf->one(), zr, zf));
            }
        }
    }

    // the line z2 = 0 (includes (0:0:1) and every (1:0:*) point)
    BinForm r1 = slice_line(f1), r2 = slice_line(f2);
    if (r1.is_zero() && r2.is_zero()) {
        out.infinite = true;
        return out;
    }
    std::optional<BinForm> on_line;
    if (r1.is_zero())
        on_line = r2;
    else if (r2.is_zero())
        on_line = r1;
    else {
        BinForm g = binform_gcd(r1, r2);
        if (g.degree() >= 1) on_line = g;
    }
    if (on_line) {
        ProjRootIsolation pr = binform_roots(*on_line);
        out.complete = out.complete && pr.complete;
        for (const auto& r : pr.roots)
            out.points.push_back(make_point(r.t0, r.field->zero(), r.t1, r.field));
    }

    if (out.complete && out.points.size() > 9)
        throw MathError("cubic intersection: more than 9 points without a common component");
    return out;
}

bool verify_sv_bounds(std::uint64_t m, std::uint64_t r1, std::uint64_t r2) {
    long long lo = static_cast<long long>(m) - static_cast<long long>(r1);
    long long v = static_cast<long long>(r2);
    return v >= lo && v <= 2 * lo + 1;
}

}  // namespace sck
