#include "sck/quadform.hpp"

#include <algorithm>
#include <sstream>

namespace sck {

namespace {

Mono unit2(unsigned n, unsigned i, unsigned j) {
    Mono m(n, 0);
    ++m[i];
    ++m[j];
    return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// MuSymMatrix

MuSymMatrix::MuSymMatrix(MuPtr mu, DenseMatrix entries) : mu_(std::move(mu)), m_(std::move(entries)) {
    unsigned n = mu_->n();
    if (m_.size() != n) throw MathError("matrix has wrong shape");
    for (unsigned i = 0; i < n; ++i) {
        if (m_[i].size() != n) throw MathError("matrix has wrong shape");
        for (unsigned j = 0; j < n; ++j)
            if (m_[i][j] != mu_->mu(i, j) * m_[j][i])
                throw MathError("matrix is not mu-symmetric");
    }
}

MuSymMatrix MuSymMatrix::zero(MuPtr mu) {
    unsigned n = mu->n();
    DenseMatrix m(n, std::vector<Scalar>(n, mu->field()->zero()));
    return MuSymMatrix(std::move(mu), std::move(m));
}

MuSymMatrix MuSymMatrix::from_upper(MuPtr mu, const DenseMatrix& upper) {
    unsigned n = mu->n();
    DenseMatrix m(n, std::vector<Scalar>(n, mu->field()->zero()));
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = i; j < n; ++j) {
            m[i][j] = upper[i][j];
            if (i != j) m[j][i] = mu->mu(j, i) * upper[i][j];
        }
    return MuSymMatrix(std::move(mu), std::move(m));
}

MuSymMatrix MuSymMatrix::operator+(const MuSymMatrix& o) const {
    DenseMatrix m = m_;
    for (unsigned i = 0; i < n(); ++i)
        for (unsigned j = 0; j < n(); ++j) m[i][j] += o.m_[i][j];
    return MuSymMatrix(mu_, std::move(m));
}

MuSymMatrix MuSymMatrix::operator*(const Scalar& c) const {
    DenseMatrix m = m_;
    for (auto& row : m)
        for (auto& v : row) v *= c;
    return MuSymMatrix(mu_, std::move(m));
}

bool MuSymMatrix::is_zero() const {
    for (const auto& row : m_)
        for (const auto& v : row)
            if (!v.is_zero()) return false;
    return true;
}

// ---------------------------------------------------------------------------
// tau and its inverse

SkewPoly tau(const MuSymMatrix& m) {
    unsigned n = m.n();
    SkewPoly q(m.mu());
    for (unsigned i = 0; i < n; ++i) {
        q.add_term(unit2(n, i, i), m.at(i, i));
        for (unsigned j = i + 1; j < n; ++j) {
            // M_ij z_i z_j + M_ji z_j z_i reduces to 2 M_ij z_i z_j
            q.add_term(unit2(n, i, j), m.at(i, j) + m.mu()->mu(i, j) * m.at(j, i));
        }
    }
    return q;
}

MuSymMatrix matrix_of_form(const SkewPoly& q) {
    if (!q.is_zero()) {
        unsigned d = q.require_homogeneous("matrix_of_form");
        if (d != 2) throw MathError("matrix_of_form: not a quadratic form");
    }
    const MuPtr& mu = q.mu();
    unsigned n = q.n();
    const FieldPtr& field = mu->field();
    Scalar half = field->integer(2).inverse();
    DenseMatrix m(n, std::vector<Scalar>(n, field->zero()));
    for (unsigned i = 0; i < n; ++i) {
        m[i][i] = q.coeff(unit2(n, i, i));
        for (unsigned j = i + 1; j < n; ++j) {
            Scalar c = q.coeff(unit2(n, i, j));
            m[i][j] = c * half;
            m[j][i] = mu->mu(j, i) * c * half;
        }
    }
    return MuSymMatrix(mu, std::move(m));
}

// ---------------------------------------------------------------------------
// LinearForm

bool LinearForm::is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const Scalar& c) { return c.is_zero(); });
}

SkewPoly LinearForm::to_poly(const MuPtr& mu) const {
    SkewPoly p(mu);
    Mono m(mu->n(), 0);
    for (unsigned i = 0; i < mu->n(); ++i) {
        m[i] = 1;
        p.add_term(m, coeffs[i]);
        m[i] = 0;
    }
    return p;
}

std::string LinearForm::str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i].is_zero()) continue;
        std::string cs = coeffs[i].str();
        bool neg = cs.size() > 1 && cs[0] == '-' && cs.find_first_of("+- ", 1) == std::string::npos;
        if (first) {
            first = false;
            if (neg) {
                os << "-";
                cs = cs.substr(1);
            }
        } else if (neg) {
            os << " - ";
            cs = cs.substr(1);
        } else {
            os << " + ";
        }
        std::string var = "z" + std::to_string(i + 1);
        bool simple = cs.find_first_of("+- */^") == std::string::npos;
        if (cs == "1")
            os << var;
        else if (simple)
            os << cs << "*" << var;
        else
            os << "(" << cs << ")*" << var;
    }
    if (first) os << "0";
    return os.str();
}

// ---------------------------------------------------------------------------
// D-values and the n=3 rank classifier

MuRankAnalysis mu_minors(const MuSymMatrix& m) {
    if (m.n() != 3) throw MathError("mu_minors: n must be 3");
    const MuPtr& mup = m.mu();
    const FieldPtr& field = mup->field();
    const Scalar &a = m.at(0, 0), &b = m.at(1, 1), &c = m.at(2, 2);
    const Scalar &d = m.at(0, 1), &e = m.at(0, 2), &f = m.at(1, 2);
    const Scalar &m12 = mup->mu(0, 1), &m13 = mup->mu(0, 2), &m23 = mup->mu(1, 2);
    const Scalar &m21 = mup->mu(1, 0), &m31 = mup->mu(2, 0);
    Scalar one = field->one(), two = field->integer(2), four = field->integer(4);

    MuRankAnalysis out;
    out.scale = one;
    Scalar p12 = one + m12, p13 = one + m13, p23 = one + m23;
    out.d16 = {
        four * d * d - p12 * p12 * a * b,
        four * e * e - p13 * p13 * a * c,
        four * f * f - p23 * p23 * b * c,
        two * p23 * d * e - p12 * p13 * a * f,
        two * p12 * e * f - p13 * p23 * c * d,
        two * p13 * d * f - p12 * p23 * b * e,
    };
    out.d7 = (m23 * c * d * d - two * d * e * f + b * e * e) *
             (m13 * m21 * c * d * d - two * d * e * f + m12 * m23 * m31 * b * e * e);

    auto [x, f1] = Field::sqrt_adjoin(d * d - m12 * a * b);
    auto [y, f2] = Field::sqrt_adjoin(f1->lift(e * e - m13 * a * c));
    out.field = f2;
    for (int sx = 0; sx < 2; ++sx)
        for (int sy = 0; sy < 2; ++sy) {
            Scalar xx = sx ? -x : x;
            Scalar yy = sy ? -y : y;
            Scalar d8 = m21 * (d + xx) * (e - yy) + m23 * m31 * (d - xx) * (e + yy) - two * a * f;
            out.d8_values.push_back(d8);
        }
    return out;
}

MuRankAnalysis mu_rank3(const SkewPoly& q) {
    if (q.n() != 3) throw MathError("mu_rank3: n must be 3");
    if (q.is_zero()) {
        MuRankAnalysis out;
        out.scale = q.mu()->field()->one();
        out.field = q.mu()->field();
        out.rank = 0;
        return out;
    }
    MuSymMatrix m = matrix_of_form(q);
    Scalar a = m.at(0, 0);
    Scalar scale = a.is_zero() ? q.mu()->field()->one() : a;
    MuSymMatrix norm = m * scale.inverse();
    MuRankAnalysis out = mu_minors(norm);
    out.scale = scale;
    bool minors_zero = std::all_of(out.d16.begin(), out.d16.end(),
                                   [](const Scalar& v) { return v.is_zero(); });
    if (minors_zero) {
        out.rank = 1;
        return out;
    }
    bool rank2;
    if (a.is_zero()) {
        rank2 = out.d7.is_zero();
    } else {
        rank2 = std::any_of(out.d8_values.begin(), out.d8_values.end(),
                            [](const Scalar& v) { return v.is_zero(); });
    }
    out.rank = rank2 ? 2 : 3;
    return out;
}

// ---------------------------------------------------------------------------
// Factorization

namespace {

// roots of a2 t^2 + a1 t + a0 = 0, with the field each root lives in;
// all-zero coefficients mean "unconstrained" and are handled by the caller
std::vector<std::pair<Scalar, FieldPtr>> quadratic_roots(const Scalar& a2, const Scalar& a1,
                                                         const Scalar& a0, const FieldPtr& f) {
    std::vector<std::pair<Scalar, FieldPtr>> roots;
    if (a2.is_zero()) {
        if (a1.is_zero()) return roots;  // a0 != 0: no solution
        roots.emplace_back(-(a0 / a1), f);
        return roots;
    }
    Scalar disc = a1 * a1 - 4 * (a2 * a0);
    auto [s, g] = Field::sqrt_adjoin(disc);
    Scalar den = (2 * a2);
    Scalar r1 = (s - a1) / den;
    roots.emplace_back(r1, g);
    if (!s.is_zero()) roots.emplace_back((-s - a1) / den, g);
    return roots;
}

bool scalars_equal(const Scalar& a, const Scalar& b) {
    try {
        return a == b;
    } catch (const MathError&) {
        return false;  // unrelated contexts cannot hold equal named roots
    }
}

}  // namespace

std::vector<Factorization> factor_quadratic(const SkewPoly& q) {
    std::vector<Factorization> results;
    if (q.is_zero()) return results;
    unsigned deg = q.require_homogeneous("factor_quadratic");
    if (deg != 2) throw MathError("factor_quadratic: not a quadratic form");
    const MuPtr& mu = q.mu();
    unsigned n = q.n();
    const FieldPtr& base = mu->field();

    auto c = [&](unsigned i, unsigned j) { return q.coeff(unit2(n, i, j)); };

    auto try_record = [&](const std::vector<Scalar>& a, const std::vector<Scalar>& b,
                          const FieldPtr& fld) {
        // verify every coefficient equation by direct multiplication
        for (unsigned i = 0; i < n; ++i) {
            if (!scalars_equal(a[i] * b[i], c(i, i))) return;
            for (unsigned j = i + 1; j < n; ++j)
                if (!scalars_equal(a[i] * b[j] + mu->mu(i, j) * (a[j] * b[i]), c(i, j))) return;
        }
        LinearForm l2{b};
        if (l2.is_zero()) return;
        Factorization fac{LinearForm{a}, std::move(l2), fld, false};
        // squareness: l2 proportional to l1
        {
            std::optional<Scalar> lambda;
            bool prop = true;
            for (unsigned i = 0; i < n && prop; ++i) {
                if (fac.l1.coeffs[i].is_zero()) {
                    if (!fac.l2.coeffs[i].is_zero()) prop = false;
                } else if (!lambda) {
                    lambda = fac.l2.coeffs[i] / fac.l1.coeffs[i];
                } else if (!scalars_equal(fac.l2.coeffs[i], *lambda * fac.l1.coeffs[i])) {
                    prop = false;
                }
            }
            fac.is_square = prop;
        }
        for (const auto& r : results) {
            bool same = true;
            for (unsigned i = 0; i < n && same; ++i)
                same = scalars_equal(r.l1.coeffs[i], fac.l1.coeffs[i]) &&
                       scalars_equal(r.l2.coeffs[i], fac.l2.coeffs[i]);
            if (same) return;
        }
        results.push_back(std::move(fac));
    };

    for (unsigned i0 = 0; i0 < n; ++i0) {
        bool feasible = true;
        for (unsigned i = 0; i < i0 && feasible; ++i)
            for (unsigned j = i; j < i0 && feasible; ++j)
                if (!c(i, j).is_zero()) feasible = false;
        if (!feasible) continue;

        // a_i = 0 for i < i0, a_{i0} = 1; then b is determined up to the
        // choice of a_j for j > i0, and each a_j satisfies the univariate
        // quadratic coming from the z_j^2 coefficient
        std::vector<Scalar> b_known(n, base->zero());
        b_known[i0] = c(i0, i0);
        for (unsigned i = 0; i < i0; ++i) b_known[i] = c(i, i0) / mu->mu(i, i0);

        struct Node {
            FieldPtr fld;
            std::vector<Scalar> a;  // values for indices i0+1..j-1
        };
        std::vector<Node> frontier{{base, {}}};
        for (unsigned j = i0 + 1; j < n; ++j) {
            std::vector<Node> next;
            for (const auto& node : frontier) {
                Scalar a2 = mu->mu(i0, j) * c(i0, i0);
                Scalar a1 = -c(i0, j);
                Scalar a0 = c(j, j);
                std::vector<std::pair<Scalar, FieldPtr>> cands;
                if (!a2.is_zero() || !a1.is_zero() || !a0.is_zero()) {
                    // lift coefficients into the branch field before solving
                    cands = quadratic_roots(node.fld->lift(a2), node.fld->lift(a1),
                                            node.fld->lift(a0), node.fld);
                } else {
                    // z_j^2 equation vacuous; pin a_j from a cross term with a
                    // known nonzero partner, else default to 0
                    std::optional<Scalar> pin;
                    for (unsigned i = 0; i < i0 && !pin; ++i)
                        if (!b_known[i].is_zero()) pin = c(i, j) / (mu->mu(i, j) * b_known[i]);
                    for (unsigned jp = i0 + 1; jp < j && !pin; ++jp) {
                        // b_j = 0 here, so c_{jp,j} = mu_{jp,j} a_j b_{jp}
                        Scalar bjp = node.fld->lift(c(i0, jp)) -
                                     node.fld->lift(mu->mu(i0, jp) * c(i0, i0)) *
                                         node.a[jp - i0 - 1];
                        if (!bjp.is_zero())
                            pin = node.fld->lift(c(jp, j)) / (node.fld->lift(mu->mu(jp, j)) * bjp);
                    }
                    cands.emplace_back(pin ? node.fld->lift(*pin) : node.fld->zero(), node.fld);
                }
                for (auto& [val, fld] : cands) {
                    Node nn{fld, {}};
                    nn.a.reserve(node.a.size() + 1);
                    for (const auto& v : node.a) nn.a.push_back(fld->lift(v));
                    nn.a.push_back(fld->lift(val));
                    next.push_back(std::move(nn));
                }
            }
            frontier = std::move(next);
        }
        for (const auto& node : frontier) {
            std::vector<Scalar> a(n, node.fld->zero());
            std::vector<Scalar> b(n, node.fld->zero());
            a[i0] = node.fld->one();
            for (unsigned i = 0; i <= i0; ++i) b[i] = node.fld->lift(b_known[i]);
            for (unsigned j = i0 + 1; j < n; ++j) {
                a[j] = node.a[j - i0 - 1];
                b[j] = node.fld->lift(c(i0, j)) -
                       node.fld->lift(mu->mu(i0, j) * c(i0, i0)) * a[j];
            }
            try_record(a, b, node.fld);
        }
    }
    if (results.size() > 2)
        throw MathError("factor_quadratic: more than two distinct factorizations");
    return results;
}

std::size_t symmetric_rank(const DenseMatrix& m) { return matrix_rank(m); }

}  // namespace sck
