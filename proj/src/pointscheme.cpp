#include "sck/pointscheme.hpp"

#include <algorithm>
#include <optional>

#include "sck/mpoly.hpp"

namespace sck {

namespace {

MuPtr ones3(const FieldPtr& f) { return std::make_shared<const MuParams>(MuParams::ones(3, f)); }

SkewPoly lift_poly(const SkewPoly& f, const FieldPtr& target) {
    if (f.mu()->field()->same(*target)) return f;
    SkewPoly out(ones3(target));
    for (const auto& [m, c] : f.terms()) out.add_term(m, target->lift(c));
    return out;
}

Scalar eval_poly(const SkewPoly& f, const std::vector<Scalar>& pt, const FieldPtr& field) {
    Scalar acc = field->zero();
    for (const auto& [m, c] : f.terms()) {
        Scalar t = field->lift(c);
        for (unsigned v = 0; v < 3; ++v)
            if (m[v]) t *= pt[v].pow(static_cast<long>(m[v]));
        acc += t;
    }
    return acc;
}

SkewPoly linear_poly(const MuPtr& mu, const std::vector<Scalar>& coeffs) {
    SkewPoly out(mu);
    for (unsigned v = 0; v < 3; ++v)
        if (!coeffs[v].is_zero()) out.add_term(Mono{v == 0, v == 1, v == 2}, coeffs[v]);
    return out;
}

/// Exact quotient f / (l0*a1 + l1*a2 + l2*a3), or nullopt if it does not divide.
std::optional<SkewPoly> divide_by_linear(const SkewPoly& f, const std::vector<Scalar>& l) {
    const MuPtr& mu = f.mu();
    unsigned v = 0;
    while (v < 3 && l[v].is_zero()) ++v;
    if (v == 3) throw MathError("divide_by_linear: zero divisor");
    SkewPoly lpoly = linear_poly(mu, l);
    SkewPoly r = f, q = SkewPoly::zero(mu);
    while (!r.is_zero()) {
        const Mono* best = nullptr;
        const Scalar* bc = nullptr;
        for (const auto& [m, c] : r.terms())
            if (!best || m[v] > (*best)[v]) {
                best = &m;
                bc = &c;
            }
        if ((*best)[v] == 0) return std::nullopt;
        Mono m2 = *best;
        m2[v] -= 1;
        SkewPoly t = SkewPoly::monomial(mu, m2, *bc / l[v]);
        q += t;
        r -= lpoly * t;
    }
    return q;
}

/// Restriction to the line a3 = 0, a binary form in (a1, a2).
BinForm restrict_a3(const SkewPoly& f, const FieldPtr& field) {
    unsigned d = f.require_homogeneous("plane curve");
    std::vector<Scalar> c(d + 1, field->zero());
    for (const auto& [m, s] : f.terms())
        if (m[2] == 0) c[m[0]] += s;
    return BinForm(field, d, std::move(c));
}

long binomial(unsigned n, unsigned k) {
    long r = 1;
    for (unsigned i = 0; i < k; ++i) r = r * static_cast<long>(n - i) / static_cast<long>(i + 1);
    return r;
}

/// For a candidate linear factor L = alpha*a1 + beta*a2 + gamma*a3 with
/// (alpha, beta) fixed, parametrize the line V(L) as s*P0 + t*P(gamma) with
/// P0 = (-beta, alpha, 0) and P(gamma) = (-gamma, 0, alpha) (or (0, -gamma,
/// beta) when alpha = 0), and return the coefficients of f on the line as
/// polynomials in gamma: entry u is the coefficient of s^u t^{d-u}.
std::vector<UPoly> line_gamma_polys(const SkewPoly& f, const Scalar& alpha, const Scalar& beta,
                                    const FieldPtr& field) {
    unsigned d = f.require_homogeneous("plane curve");
    std::vector<std::vector<Scalar>> acc(d + 1, std::vector<Scalar>(d + 1, field->zero()));
    Scalar neg_beta = -field->lift(beta);
    Scalar al = field->lift(alpha);
    bool alpha_zero = al.is_zero();
    Scalar be = field->lift(beta);
    for (const auto& [m, c] : f.terms()) {
        Scalar cl = field->lift(c);
        unsigned i = m[0], j = m[1], k = m[2];
        if (!alpha_zero) {
            // a1 = -s*beta - t*gamma, a2 = s*alpha, a3 = t*alpha
            for (unsigned mm = 0; mm <= i; ++mm) {
                unsigned u = (i - mm) + j;
                Scalar s = cl * field->integer(binomial(i, mm)) *
                           neg_beta.pow(static_cast<long>(i - mm)) *
                           al.pow(static_cast<long>(j + k));
                if (mm % 2) s = -s;
                acc[u][mm] += s;
            }
        } else {
            // a1 = -s*beta, a2 = -t*gamma, a3 = t*beta
            Scalar s = cl * neg_beta.pow(static_cast<long>(i)) * be.pow(static_cast<long>(k));
            if (j % 2) s = -s;
            acc[i][j] += s;
        }
    }
    std::vector<UPoly> out;
    out.reserve(d + 1);
    for (auto& row : acc) out.emplace_back(field, std::move(row));
    return out;
}

struct LineFactor {
    std::vector<Scalar> coeffs;  // first nonzero coefficient is 1
    FieldPtr field;
};

std::vector<Scalar> normalize_line(std::vector<Scalar> l) {
    unsigned v = 0;
    while (v < 3 && l[v].is_zero()) ++v;
    Scalar inv = l[v].inverse();
    for (auto& c : l) c *= inv;
    return l;
}

/// One pass of linear-factor extraction.  On success the factor is recorded
/// and `current` is replaced by the quotient (possibly over an extension).
bool extract_linear_factor(SkewPoly& current, FieldPtr& field, std::vector<LineFactor>& found) {
    BinForm r = restrict_a3(current, field);
    if (r.is_zero()) {
        // a3 divides
        std::vector<Scalar> l{field->zero(), field->zero(), field->one()};
        auto q = divide_by_linear(current, l);
        if (!q) throw MathError("plane cubic: division by a3 failed unexpectedly");
        found.push_back({l, field});
        current = *q;
        return true;
    }
    auto roots = binform_roots(r);
    for (const auto& root : roots.roots) {
        // direction (t0, t1, 0) on the curve: alpha*t0 + beta*t1 = 0
        const FieldPtr& fr = root.field;
        Scalar alpha = fr->lift(root.t1);
        Scalar beta = -fr->lift(root.t0);
        SkewPoly fl = lift_poly(current, fr);
        auto gpolys = line_gamma_polys(fl, alpha, beta, fr);
        UPoly g(fr);
        for (const auto& p : gpolys) {
            if (p.is_zero()) continue;
            g = g.is_zero() ? p : UPoly::gcd(g, p);
            if (g.degree() == 0) break;
        }
        if (g.is_zero()) throw MathError("plane cubic: vanishing line pencil");
        if (g.degree() < 1) continue;
        auto iso = isolate_roots(g);
        for (const auto& [gamma, fg] : iso.roots) {
            SkewPoly fg_poly = lift_poly(current, fg);
            std::vector<Scalar> l{fg->lift(alpha), fg->lift(beta), gamma};
            auto q = divide_by_linear(fg_poly, l);
            if (!q) continue;
            found.push_back({normalize_line(l), fg});
            current = *q;
            field = fg;
            return true;
        }
    }
    return false;
}

/// Coefficients of a3^k in g(a1, 1, a3) as polynomials in a1.
std::vector<UPoly> slice_affine2(const SkewPoly& g, const FieldPtr& field) {
    unsigned d = g.require_homogeneous("partial derivative");
    std::vector<std::vector<Scalar>> acc(d + 1);
    for (auto& row : acc) row.assign(d + 1, field->zero());
    for (const auto& [m, c] : g.terms()) acc[m[2]][m[0]] += c;
    std::vector<UPoly> out;
    out.reserve(d + 1);
    for (auto& row : acc) out.emplace_back(field, std::move(row));
    while (out.size() > 1 && out.back().is_zero()) out.pop_back();
    return out;
}

/// Restriction to a2 = 0 as a binary form in (a1, a3).
BinForm slice_line2(const SkewPoly& g, const FieldPtr& field) {
    unsigned d = g.require_homogeneous("partial derivative");
    std::vector<Scalar> c(d + 1, field->zero());
    for (const auto& [m, s] : g.terms())
        if (m[1] == 0) c[m[0]] += s;
    return BinForm(field, d, std::move(c));
}

struct CandPoint {
    std::vector<Scalar> coords;
    FieldPtr field;
};

std::vector<Scalar> normalize_coords(std::vector<Scalar> v) {
    unsigned i = 0;
    while (i < v.size() && v[i].is_zero()) ++i;
    Scalar inv = v[i].inverse();
    for (auto& c : v) c *= inv;
    return v;
}

/// Candidate common zeros of two plane conics via a resultant in the chart
/// a2 = 1 plus the line a2 = 0.  Returns nullopt when this chart/pair is
/// degenerate (shared component along the projection); `complete` is cleared
/// when some resultant root resisted isolation.
std::optional<std::vector<CandPoint>> conic_common_zeros(const SkewPoly& g1, const SkewPoly& g2,
                                                         const FieldPtr& field, bool& complete) {
    auto a = slice_affine2(g1, field);
    auto b = slice_affine2(g2, field);
    std::vector<CandPoint> out;
    if (a.size() == 1 && b.size() == 1) return std::nullopt;  // both a3-free: chart useless
    UPoly res = resultant_upoly(a, b, field);
    if (res.is_zero()) return std::nullopt;
    auto iso = isolate_roots(res);
    if (!iso.complete) complete = false;
    for (const auto& [x, fx] : iso.roots) {
        std::vector<Scalar> u1c, u2c;
        for (const auto& p : a) u1c.push_back(p.lift(fx).eval(x));
        for (const auto& p : b) u2c.push_back(p.lift(fx).eval(x));
        UPoly u1(fx, u1c), u2(fx, u2c);
        if (u1.is_zero() && u2.is_zero()) return std::nullopt;
        UPoly g = u1.is_zero() ? u2 : (u2.is_zero() ? u1 : UPoly::gcd(u1, u2));
        if (g.degree() < 1) continue;
        auto riso = isolate_roots(g);
        if (!riso.complete) complete = false;
        for (const auto& [z, fz] : riso.roots)
            out.push_back({normalize_coords({fz->lift(x), fz->one(), z}), fz});
    }
    BinForm r1 = slice_line2(g1, field), r2 = slice_line2(g2, field);
    if (r1.is_zero() && r2.is_zero()) return std::nullopt;
    BinForm gb = r1.is_zero() ? r2 : (r2.is_zero() ? r1 : binform_gcd(r1, r2));
    if (!gb.is_zero() && gb.distinct_projective_roots() > 0) {
        auto pr = binform_roots(gb);
        if (!pr.complete) complete = false;
        for (const auto& root : pr.roots)
            out.push_back({{root.t0, root.field->zero(), root.t1}, root.field});
    }
    return out;
}

SkewPoly partial(const SkewPoly& f, unsigned v, const FieldPtr& field) {
    SkewPoly out(f.mu());
    for (const auto& [m, c] : f.terms()) {
        if (m[v] == 0) continue;
        Mono m2 = m;
        m2[v] -= 1;
        out.add_term(m2, c * field->integer(static_cast<long>(m[v])));
    }
    return out;
}

SkewPoly substitute(const SkewPoly& f, const std::vector<std::vector<Scalar>>& t) {
    const MuPtr& mu = f.mu();
    std::vector<SkewPoly> sub;
    for (unsigned i = 0; i < 3; ++i) {
        std::vector<Scalar> row{t[i][0], t[i][1], t[i][2]};
        sub.push_back(linear_poly(mu, row));
    }
    SkewPoly out(mu);
    for (const auto& [m, c] : f.terms()) {
        SkewPoly term = SkewPoly::constant(mu, c);
        for (unsigned v = 0; v < 3; ++v)
            for (unsigned e = 0; e < m[v]; ++e) term = term * sub[v];
        out += term;
    }
    return out;
}

/// Singularity type of an irreducible plane cubic: locate the (at most one,
/// rational) singular point by intersecting partial derivatives, then read
/// the rank of the quadratic part there.
CubicSingularity cubic_singularity(const SkewPoly& f, FieldPtr& field) {
    std::vector<SkewPoly> parts;
    for (unsigned v = 0; v < 3; ++v) {
        SkewPoly p = partial(f, v, field);
        if (p.is_zero()) throw MathError("irreducible cubic with a vanishing partial derivative");
        parts.push_back(p);
    }
    bool complete = true;
    std::optional<std::vector<CandPoint>> cands;
    const unsigned pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto& pr : pairs) {
        cands = conic_common_zeros(parts[pr[0]], parts[pr[1]], field, complete);
        if (cands) break;
    }
    if (!cands) throw MathError("singular locus analysis failed: all partial pairs degenerate");

    std::optional<CandPoint> sing;
    for (const auto& cp : *cands) {
        bool all_zero = true;
        for (const auto& p : parts)
            if (!eval_poly(p, cp.coords, cp.field).is_zero()) {
                all_zero = false;
                break;
            }
        if (!all_zero) continue;
        if (sing) {
            FieldPtr cf = Field::common(sing->field, cp.field);
            bool same_pt = true;
            for (unsigned i = 0; i < 3; ++i)
                if (cf->lift(sing->coords[i]) != cf->lift(cp.coords[i])) {
                    same_pt = false;
                    break;
                }
            if (!same_pt) throw MathError("irreducible cubic with two singular points");
            continue;
        }
        sing = cp;
    }
    if (!sing) {
        if (!complete && field->kind() == FieldKind::SqrtTower)
            throw MathError("smoothness could not be certified over this tower");
        return CubicSingularity::Smooth;
    }

    // Move the singular point to (0:0:1) and read the quadratic part.
    FieldPtr fs = sing->field;
    SkewPoly fl = lift_poly(f, fs);
    unsigned piv = 0;
    while (sing->coords[piv].is_zero()) ++piv;
    std::vector<std::vector<Scalar>> t(3, std::vector<Scalar>(3, fs->zero()));
    unsigned col = 0;
    for (unsigned i = 0; i < 3; ++i) {
        if (i == piv) continue;
        t[i][col++] = fs->one();
    }
    for (unsigned i = 0; i < 3; ++i) t[i][2] = sing->coords[i];
    SkewPoly g = substitute(fl, t);
    if (!g.coeff(Mono{0, 0, 3}).is_zero() || !g.coeff(Mono{1, 0, 2}).is_zero() ||
        !g.coeff(Mono{0, 1, 2}).is_zero())
        throw MathError("singular point verification failed after coordinate change");
    Scalar q20 = g.coeff(Mono{2, 0, 1});
    Scalar q11 = g.coeff(Mono{1, 1, 1});
    Scalar q02 = g.coeff(Mono{0, 2, 1});
    field = fs;
    Scalar four = fs->integer(4);
    Scalar det2 = q20 * q02 - q11 * q11 / four;
    if (!det2.is_zero()) return CubicSingularity::Nodal;
    if (q20.is_zero() && q11.is_zero() && q02.is_zero())
        throw MathError("triple point on an irreducible cubic");
    return CubicSingularity::Cuspidal;
}

}  // namespace

DenseMatrix MultilinearSystem::matrix_at(const std::vector<Scalar>& a) const {
    DenseMatrix m(3, std::vector<Scalar>(3, field->zero()));
    for (unsigned r = 0; r < 3; ++r)
        for (unsigned j = 0; j < 3; ++j)
            for (unsigned i = 0; i < 3; ++i) m[r][j] += c[r][i][j] * a[i];
    return m;
}

Scalar MultilinearSystem::relation_value(unsigned r, const std::vector<Scalar>& a,
                                         const std::vector<Scalar>& b) const {
    Scalar acc = field->zero();
    for (unsigned i = 0; i < 3; ++i)
        for (unsigned j = 0; j < 3; ++j) acc += c[r][i][j] * a[i] * b[j];
    return acc;
}

MultilinearSystem multilinearize(const QuadraticPresentation& p) {
    if (p.n() != 3 || p.dim_w() != 3)
        throw MathError("multilinearize needs 3 generators and 3 independent relations");
    MultilinearSystem sys;
    sys.field = p.field();
    for (unsigned r = 0; r < 3; ++r) {
        DenseMatrix t(3, std::vector<Scalar>(3, sys.field->zero()));
        for (unsigned i = 0; i < 3; ++i)
            for (unsigned j = 0; j < 3; ++j) t[i][j] = p.w_basis()[r][i * 3 + j];
        sys.c.push_back(std::move(t));
    }
    // Defining identity on the bilinear basis: (row r of M(e_i)) . e_j must
    // equal the coefficient of x_i x_j in relation r.
    for (unsigned i = 0; i < 3; ++i) {
        std::vector<Scalar> a(3, sys.field->zero());
        a[i] = sys.field->one();
        DenseMatrix m = sys.matrix_at(a);
        for (unsigned r = 0; r < 3; ++r)
            for (unsigned j = 0; j < 3; ++j)
                if (m[r][j] != sys.c[r][i][j])
                    throw MathError("multilinearize: identity check failed");
    }
    return sys;
}

PointSchemeCubic point_scheme_cubic(const MultilinearSystem& sys) {
    MuPtr mu = ones3(sys.field);
    std::vector<std::vector<SkewPoly>> e(3, std::vector<SkewPoly>(3, SkewPoly::zero(mu)));
    for (unsigned r = 0; r < 3; ++r)
        for (unsigned j = 0; j < 3; ++j) {
            std::vector<Scalar> coeffs;
            for (unsigned i = 0; i < 3; ++i) coeffs.push_back(sys.c[r][i][j]);
            e[r][j] = linear_poly(mu, coeffs);
        }
    SkewPoly det = e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) -
                   e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0]) +
                   e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
    if (det.is_zero()) return PointSchemeCubic{true, det};
    return PointSchemeCubic{false, det * det.terms().begin()->second.inverse()};
}

PlaneCubicClassification classify_plane_cubic(const SkewPoly& f) {
    FieldPtr field = f.mu()->field();
    if (field->characteristic() == 2 || field->characteristic() == 3)
        throw MathError("plane cubic classification needs characteristic != 2, 3");
    if (f.n() != 3 || !f.mu()->is_commutative())
        throw MathError("plane cubic classification needs a commutative form in 3 variables");
    PlaneCubicClassification out;
    out.field = field;
    if (f.is_zero()) {
        out.identically_zero = true;
        return out;
    }
    if (f.require_homogeneous("plane cubic") != 3)
        throw MathError("plane cubic classification needs a homogeneous cubic");

    SkewPoly current = f;
    std::vector<LineFactor> lines;
    while (true) {
        unsigned d = current.require_homogeneous("plane cubic factor");
        if (d == 0) break;
        if (d == 1) {
            std::vector<Scalar> l(3, field->zero());
            for (const auto& [m, c] : current.terms())
                for (unsigned v = 0; v < 3; ++v)
                    if (m[v]) l[v] = c;
            lines.push_back({normalize_line(l), field});
            current = SkewPoly::constant(ones3(field), field->one());
            break;
        }
        if (!extract_linear_factor(current, field, lines)) break;
    }

    // Group the linear factors over the final field.
    std::vector<std::pair<std::vector<Scalar>, unsigned>> grouped;
    for (const auto& lf : lines) {
        std::vector<Scalar> l;
        for (const auto& c : lf.coeffs) l.push_back(field->lift(c));
        bool merged = false;
        for (auto& [gl, mult] : grouped) {
            if (gl == l) {
                ++mult;
                merged = true;
                break;
            }
        }
        if (!merged) grouped.emplace_back(std::move(l), 1u);
    }

    SkewPoly residual = lift_poly(current, field);
    unsigned rdeg = residual.is_zero() ? 0 : residual.require_homogeneous("residual factor");

    CubicSingularity sing = CubicSingularity::Smooth;
    if (rdeg == 3) sing = cubic_singularity(residual, field);

    MuPtr mu = ones3(field);
    for (const auto& [l, mult] : grouped) {
        std::vector<Scalar> ll;
        for (const auto& c : l) ll.push_back(field->lift(c));
        out.components.push_back({ComponentType::Line, mult, linear_poly(mu, ll)});
    }
    if (rdeg == 2) {
        MuSymMatrix m = matrix_of_form(lift_poly(residual, field));
        if (symmetric_rank(m.entries()) != 3)
            throw MathError("degenerate conic residual escaped linear factor extraction");
        out.components.push_back({ComponentType::SmoothConic, 1, lift_poly(residual, field)});
    } else if (rdeg == 3) {
        out.components.push_back(
            {ComponentType::IrreducibleCubic, 1, lift_poly(residual, field), sing});
    }
    out.field = field;
    return out;
}

}  // namespace sck
