#include "sck/freealg.hpp"

#include <algorithm>
#include <sstream>

namespace sck {

QuadraticPresentation::QuadraticPresentation(unsigned n, FieldPtr field,
                                             std::vector<std::vector<Scalar>> w_basis)
    : n_(n), field_(std::move(field)) {
    std::size_t dim = std::size_t(n) * n;
    RowSpace space;
    for (auto& rel : w_basis) {
        if (rel.size() != dim) throw MathError("relation has wrong arity");
        SparseRow row;
        for (std::size_t j = 0; j < dim; ++j)
            if (!rel[j].is_zero()) row[j] = rel[j];
        space.insert(std::move(row));
    }
    // store the reduced basis: deterministic and duplicate-free
    for (const auto& [piv, row] : space.rows()) {
        std::vector<Scalar> v(dim, field_->zero());
        for (const auto& [j, c] : row) v[j] = c;
        w_.push_back(std::move(v));
    }
}

std::vector<Scalar> QuadraticPresentation::parse_relation(std::string_view text, unsigned n,
                                                          const FieldPtr& field) {
    // grammar mirrors the SkewPoly parser, but products do not commute and
    // the result must be homogeneous of degree 2
    struct P {
        std::string_view s;
        std::size_t pos = 0;
        unsigned n;
        const FieldPtr& field;

        // free poly of degree <= 2: (constant, linear[n], quad[n*n])
        struct FP {
            Scalar c;
            std::vector<Scalar> lin, quad;
        };
        FP make() const {
            return {field->zero(), std::vector<Scalar>(n, field->zero()),
                    std::vector<Scalar>(std::size_t(n) * n, field->zero())};
        }
        FP scal(const Scalar& v) const {
            FP f = make();
            f.c = v;
            return f;
        }
        FP add(FP a, const FP& b) const {
            a.c += b.c;
            for (unsigned i = 0; i < n; ++i) a.lin[i] += b.lin[i];
            for (std::size_t i = 0; i < a.quad.size(); ++i) a.quad[i] += b.quad[i];
            return a;
        }
        FP neg(FP a) const {
            a.c = -a.c;
            for (auto& v : a.lin) v = -v;
            for (auto& v : a.quad) v = -v;
            return a;
        }
        FP mul(const FP& a, const FP& b) const {
            FP r = make();
            r.c = a.c * b.c;
            for (unsigned i = 0; i < n; ++i) r.lin[i] = a.c * b.lin[i] + a.lin[i] * b.c;
            for (unsigned i = 0; i < n; ++i)
                for (unsigned j = 0; j < n; ++j) {
                    Scalar q = a.lin[i] * b.lin[j];
                    r.quad[std::size_t(i) * n + j] =
                        a.c * b.quad[std::size_t(i) * n + j] +
                        a.quad[std::size_t(i) * n + j] * b.c + q;
                }
            bool a_high = std::any_of(a.quad.begin(), a.quad.end(),
                                      [](const Scalar& v) { return !v.is_zero(); });
            bool b_high = std::any_of(b.quad.begin(), b.quad.end(),
                                      [](const Scalar& v) { return !v.is_zero(); });
            bool a_lin = std::any_of(a.lin.begin(), a.lin.end(),
                                     [](const Scalar& v) { return !v.is_zero(); });
            bool b_lin = std::any_of(b.lin.begin(), b.lin.end(),
                                     [](const Scalar& v) { return !v.is_zero(); });
            if ((a_high && (b_lin || b_high)) || (b_high && a_lin))
                throw ParseError("relation degree exceeds 2");
            return r;
        }

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
        [[noreturn]] void fail(const std::string& m) {
            throw ParseError("relation parse error at position " + std::to_string(pos) + ": " + m);
        }
        FP expr() {
            FP v = eat('-') ? neg(term()) : (eat('+'), term());
            for (;;) {
                if (eat('+'))
                    v = add(v, term());
                else if (eat('-'))
                    v = add(v, neg(term()));
                else
                    return v;
            }
        }
        FP term() {
            FP v = factor();
            for (;;) {
                skip();
                if (eat('*'))
                    v = mul(v, factor());
                else if (pos < s.size() && (s[pos] == 'x' || s[pos] == '('))
                    v = mul(v, factor());
                else
                    return v;
            }
        }
        FP factor() {
            skip();
            if (pos >= s.size()) fail("unexpected end of input");
            if (s[pos] == 'x') {
                ++pos;
                std::size_t st = pos;
                while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                if (pos == st) fail("expected index after 'x'");
                unsigned idx =
                    static_cast<unsigned>(std::stoul(std::string(s.substr(st, pos - st))));
                if (idx == 0 || idx > n) fail("generator index out of range");
                FP v = make();
                v.lin[idx - 1] = field->one();
                if (eat('^')) {
                    skip();
                    std::size_t es = pos;
                    while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                    if (pos == es) fail("expected exponent");
                    unsigned e =
                        static_cast<unsigned>(std::stoul(std::string(s.substr(es, pos - es))));
                    FP r = scal(field->one());
                    for (unsigned k = 0; k < e; ++k) r = mul(r, v);
                    v = r;
                }
                return v;
            }
            if (s[pos] == '(') {
                std::size_t st = pos;
                int depth = 0;
                while (pos < s.size()) {
                    if (s[pos] == '(') ++depth;
                    if (s[pos] == ')' && --depth == 0) {
                        ++pos;
                        break;
                    }
                    ++pos;
                }
                if (depth != 0) fail("unbalanced parentheses");
                std::string inner(s.substr(st + 1, pos - st - 2));
                // parenthesized scalar (relations never nest x-products)
                return scal(field->parse(inner));
            }
            std::size_t st = pos;
            while (pos < s.size() && (isdigit(static_cast<unsigned char>(s[pos])) ||
                                      s[pos] == '/' || s[pos] == 's' || s[pos] == 'g' ||
                                      s[pos] == '^'))
                ++pos;
            if (pos == st) fail(std::string("unexpected character '") + s[pos] + "'");
            return scal(field->parse(std::string(s.substr(st, pos - st))));
        }
    };
    P parser{text, 0, n, field};
    auto fp = parser.expr();
    parser.skip();
    if (parser.pos != text.size()) parser.fail("trailing input");
    if (!fp.c.is_zero() ||
        std::any_of(fp.lin.begin(), fp.lin.end(), [](const Scalar& v) { return !v.is_zero(); }))
        throw ParseError("relation is not homogeneous of degree 2");
    return fp.quad;
}

std::string QuadraticPresentation::relation_str(const std::vector<Scalar>& coeffs, unsigned n) {
    std::ostringstream os;
    bool first = true;
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) {
            const Scalar& c = coeffs[std::size_t(i) * n + j];
            if (c.is_zero()) continue;
            std::string cs = c.str();
            bool neg = cs.size() > 1 && cs[0] == '-' &&
                       cs.find_first_of("+- ", 1) == std::string::npos;
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
            std::string word = (i == j) ? "x" + std::to_string(i + 1) + "^2"
                                        : "x" + std::to_string(i + 1) + "*x" + std::to_string(j + 1);
            bool simple = cs.find_first_of("+- */^") == std::string::npos;
            if (cs == "1")
                os << word;
            else if (simple)
                os << cs << "*" << word;
            else
                os << "(" << cs << ")*" << word;
        }
    if (first) os << "0";
    return os.str();
}

// ---------------------------------------------------------------------------
// Dimension counting.  Words of degree d are indexed big-endian base n.
// I_2 = W; I_d = I_{d-1}*V + (basis of A_{d-2}) * W, using that
// I_{d-2}*W is already inside I_{d-1}*V.

std::vector<std::uint64_t> algebra_dims(const QuadraticPresentation& p, unsigned dmax) {
    unsigned n = p.n();
    std::vector<std::uint64_t> dims{1};
    if (dmax == 0) return dims;
    dims.push_back(n);

    RowSpace prev;  // I_{d-1}
    std::vector<std::size_t> prev_quot_words;  // word indices spanning A_{d-1}
    // degree 1: no relations
    std::size_t prev_dim = n;
    for (std::size_t w = 0; w < n; ++w) prev_quot_words.push_back(w);
    std::vector<std::size_t> prev2_quot_words{0};  // degree 0: empty word

    for (unsigned d = 2; d <= dmax; ++d) {
        std::size_t full = 1;
        for (unsigned k = 0; k < d; ++k) full *= n;
        RowSpace cur;
        // I_{d-1} * V
        for (const auto& [piv, row] : prev.rows()) {
            for (unsigned j = 0; j < n; ++j) {
                SparseRow shifted;
                for (const auto& [idx, c] : row) shifted[idx * n + j] = c;
                cur.insert(std::move(shifted));
            }
        }
        // A_{d-2} representatives * W
        for (std::size_t u : prev2_quot_words) {
            for (const auto& w : p.w_basis()) {
                SparseRow row;
                for (std::size_t k = 0; k < w.size(); ++k)
                    if (!w[k].is_zero()) row[u * n * n + k] = w[k];
                cur.insert(std::move(row));
            }
        }
        dims.push_back(full - cur.rank());
        // quotient word representatives: non-pivot indices
        std::vector<std::size_t> quot;
        {
            const auto& rows = cur.rows();
            auto it = rows.begin();
            for (std::size_t wdx = 0; wdx < full; ++wdx) {
                while (it != rows.end() && it->first < wdx) ++it;
                if (it != rows.end() && it->first == wdx) continue;
                quot.push_back(wdx);
            }
        }
        prev2_quot_words = std::move(prev_quot_words);
        prev_quot_words = std::move(quot);
        prev = std::move(cur);
        prev_dim = dims.back();
    }
    (void)prev_dim;
    return dims;
}

KoszulPair koszul_orthogonal(const QuadraticPresentation& p, const MuPtr& mu) {
    unsigned n = p.n();
    if (mu->n() != n) throw MathError("mu arity mismatch");
    const FieldPtr& field = p.field();
    std::size_t dim = std::size_t(n) * n;

    KoszulPair out;
    DenseMatrix m;
    for (const auto& w : p.w_basis()) m.push_back(w);
    if (m.empty()) {
        for (std::size_t k = 0; k < dim; ++k) {
            std::vector<Scalar> v(dim, field->zero());
            v[k] = field->one();
            out.w_perp.push_back(std::move(v));
        }
    } else {
        out.w_perp = nullspace(std::move(m), field);
    }

    // U = span{ x_j x_i - mu_ij x_i x_j : i < j }, the relations of S in the
    // dual generators
    RowSpace perp_space;
    for (const auto& v : out.w_perp) {
        SparseRow row;
        for (std::size_t k = 0; k < dim; ++k)
            if (!v[k].is_zero()) row[k] = v[k];
        perp_space.insert(std::move(row));
    }
    out.compatible = true;
    for (unsigned i = 0; i < n && out.compatible; ++i)
        for (unsigned j = i + 1; j < n && out.compatible; ++j) {
            SparseRow u;
            u[std::size_t(j) * n + i] = field->one();
            u[std::size_t(i) * n + j] = -mu->mu(i, j);
            if (!perp_space.contains(std::move(u))) out.compatible = false;
        }
    if (!out.compatible) return out;

    // image of W-perp in S_2: reduce each word x_i x_j to the PBW basis
    DegreeBasis basis(n, 2);
    RowSpace image;
    std::vector<SkewPoly> q_part;
    for (const auto& v : out.w_perp) {
        SkewPoly q(mu);
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j) {
                const Scalar& c = v[std::size_t(i) * n + j];
                if (c.is_zero()) continue;
                q += normal_form_word({i, j}, mu) * c;
            }
        if (q.is_zero()) continue;
        if (image.insert(q.to_row(basis))) q_part.push_back(std::move(q));
    }
    out.q_part = std::move(q_part);
    return out;
}

}  // namespace sck
