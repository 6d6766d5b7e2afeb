#include "sck/skewpoly.hpp"

#include <algorithm>
#include <sstream>

namespace sck {

// ---------------------------------------------------------------------------
// MuParams

MuParams::MuParams(unsigned n, std::vector<std::vector<Scalar>> entries)
    : n_(n), entries_(std::move(entries)) {
    if (n == 0 || entries_.size() != n) throw MathError("mu matrix has wrong shape");
    field_ = entries_[0][0].field();
    for (unsigned i = 0; i < n; ++i) {
        if (entries_[i].size() != n) throw MathError("mu matrix has wrong shape");
        if (!entries_[i][i].is_one()) throw MathError("mu_ii must be 1");
        for (unsigned j = 0; j < n; ++j) {
            if (entries_[i][j].is_zero()) throw MathError("mu entries must be nonzero");
            if (!(entries_[i][j] * entries_[j][i]).is_one())
                throw MathError("mu_ij * mu_ji must be 1");
        }
    }
}

MuParams MuParams::ones(unsigned n, const FieldPtr& field) {
    std::vector<std::vector<Scalar>> e(n, std::vector<Scalar>(n, field->one()));
    return MuParams(n, std::move(e));
}

bool MuParams::is_commutative() const {
    for (unsigned i = 0; i < n_; ++i)
        for (unsigned j = 0; j < n_; ++j)
            if (!entries_[i][j].is_one()) return false;
    return true;
}

bool MuParams::operator==(const MuParams& o) const {
    if (n_ != o.n_) return false;
    for (unsigned i = 0; i < n_; ++i)
        for (unsigned j = 0; j < n_; ++j)
            if (entries_[i][j] != o.entries_[i][j]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Monomial combinatorics

std::uint64_t graded_dim(unsigned n, unsigned d) {
    // C(n+d-1, d)
    std::uint64_t num = 1, den = 1;
    for (unsigned i = 1; i <= d; ++i) {
        num *= n + d - i;
        den *= i;
    }
    return num / den;
}

std::vector<Mono> monomials_of_degree(unsigned n, unsigned d) {
    std::vector<Mono> out;
    Mono cur(n, 0);
    // lexicographic from the largest: e1 descending
    std::function<void(unsigned, unsigned)> rec = [&](unsigned idx, unsigned rem) {
        if (idx + 1 == n) {
            cur[idx] = rem;
            out.push_back(cur);
            return;
        }
        for (unsigned e = rem + 1; e-- > 0;) {
            cur[idx] = e;
            rec(idx + 1, rem - e);
        }
    };
    rec(0, d);
    std::sort(out.begin(), out.end());  // plain lex within a single degree
    return out;
}

DegreeBasis::DegreeBasis(unsigned n, unsigned d) : list_(monomials_of_degree(n, d)) {
    for (std::size_t i = 0; i < list_.size(); ++i) index_[list_[i]] = i;
}

std::size_t DegreeBasis::index(const Mono& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) throw MathError("monomial not in this degree component");
    return it->second;
}

// ---------------------------------------------------------------------------
// SkewPoly

SkewPoly::SkewPoly(MuPtr mu) : mu_(std::move(mu)) {
    if (!mu_) throw MathError("SkewPoly needs mu parameters");
}

SkewPoly SkewPoly::generator(MuPtr mu, unsigned i) {
    if (i >= mu->n()) throw MathError("generator index out of range");
    Mono m(mu->n(), 0);
    m[i] = 1;
    return monomial(std::move(mu), m, mu->field()->one());
}

SkewPoly SkewPoly::monomial(MuPtr mu, Mono m, Scalar c) {
    SkewPoly p(std::move(mu));
    if (m.size() != p.n()) throw MathError("monomial has wrong arity");
    if (!c.is_zero()) p.terms_.emplace(std::move(m), std::move(c));
    return p;
}

SkewPoly SkewPoly::constant(MuPtr mu, Scalar c) {
    Mono m(mu->n(), 0);
    return monomial(std::move(mu), std::move(m), std::move(c));
}

bool SkewPoly::is_homogeneous(unsigned* degree_out) const {
    if (terms_.empty()) return true;
    unsigned d = mono_degree(terms_.begin()->first);
    for (const auto& [m, c] : terms_)
        if (mono_degree(m) != d) return false;
    if (degree_out) *degree_out = d;
    return true;
}

unsigned SkewPoly::require_homogeneous(const char* what) const {
    unsigned d = 0;
    if (!is_homogeneous(&d)) throw MathError(std::string(what) + ": inhomogeneous polynomial");
    return d;
}

void SkewPoly::add_term(const Mono& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Scalar SkewPoly::coeff(const Mono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? mu_->field()->zero() : it->second;
}

SkewPoly SkewPoly::operator+(const SkewPoly& o) const {
    if (!(*mu_ == *o.mu_)) throw MathError("mu parameter mismatch");
    SkewPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

SkewPoly SkewPoly::operator-() const {
    SkewPoly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

SkewPoly SkewPoly::operator-(const SkewPoly& o) const { return *this + (-o); }

SkewPoly SkewPoly::operator*(const Scalar& c) const {
    SkewPoly r(mu_);
    if (c.is_zero()) return r;
    for (const auto& [m, v] : terms_) {
        Scalar t = v * c;
        if (!t.is_zero()) r.terms_.emplace(m, std::move(t));
    }
    return r;
}

SkewPoly SkewPoly::operator*(const SkewPoly& o) const {
    if (!(*mu_ == *o.mu_)) throw MathError("mu parameter mismatch");
    unsigned n = this->n();
    SkewPoly r(mu_);
    const FieldPtr& field = mu_->field();
    for (const auto& [a, ca] : terms_) {
        for (const auto& [b, cb] : o.terms_) {
            // z^a z^b = (prod_{i<j} mu_ij^{a_j b_i}) z^{a+b}
            Scalar f = field->one();
            for (unsigned i = 0; i < n; ++i) {
                if (!b[i]) continue;
                for (unsigned j = i + 1; j < n; ++j)
                    if (a[j]) f *= mu_->mu(i, j).pow(static_cast<long>(a[j]) * b[i]);
            }
            Mono m(n);
            for (unsigned i = 0; i < n; ++i) m[i] = a[i] + b[i];
            r.add_term(m, ca * cb * f);
        }
    }
    return r;
}

bool SkewPoly::operator==(const SkewPoly& o) const {
    return (*this - o).is_zero();
}

SparseRow SkewPoly::to_row(const DegreeBasis& basis) const {
    SparseRow row;
    for (const auto& [m, c] : terms_) row[basis.index(m)] = c;
    return row;
}

SkewPoly SkewPoly::from_row(MuPtr mu, const DegreeBasis& basis, const SparseRow& row) {
    SkewPoly p(std::move(mu));
    for (const auto& [j, c] : row) p.add_term(basis.mono(j), c);
    return p;
}

std::string SkewPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // print highest monomial first for readability
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        std::string cs = c.str();
        bool neg = cs.size() > 1 && cs[0] == '-' && cs.find_first_of("+- ", 1) == std::string::npos;
        if (first) {
            first = false;
            if (neg) {
                os << "-";
                cs = cs.substr(1);
            }
        } else {
            if (neg) {
                os << " - ";
                cs = cs.substr(1);
            } else {
                os << " + ";
            }
        }
        std::string mono;
        for (unsigned i = 0; i < m.size(); ++i) {
            if (!m[i]) continue;
            if (!mono.empty()) mono += "*";
            mono += "z" + std::to_string(i + 1);
            if (m[i] > 1) mono += "^" + std::to_string(m[i]);
        }
        bool unit = cs == "1";
        bool simple = cs.find_first_of("+- */^") == std::string::npos;
        if (mono.empty()) {
            os << cs;
        } else if (unit) {
            os << mono;
        } else if (simple) {
            os << cs << "*" << mono;
        } else {
            os << "(" << cs << ")*" << mono;
        }
    }
    return os.str();
}

SkewPoly normal_form_word(const std::vector<unsigned>& word, MuPtr mu) {
    SkewPoly p = SkewPoly::constant(mu, mu->field()->one());
    for (unsigned i : word) p = p * SkewPoly::generator(mu, i);
    return p;
}

// ---------------------------------------------------------------------------
// Parser: expr of +/- terms; term = product of factors; factor = scalar atom,
// parenthesized scalar expression, or z<i>[^e].

namespace {

struct PolyParser {
    std::string_view s;
    std::size_t pos = 0;
    MuPtr mu;

    void skip() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool peek(char c) {
        skip();
        return pos < s.size() && s[pos] == c;
    }
    bool eat(char c) {
        if (peek(c)) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError("polynomial parse error at position " + std::to_string(pos) + ": " + msg);
    }

    SkewPoly expr() {
        SkewPoly v = eat('-') ? -term() : (eat('+'), term());
        for (;;) {
            if (eat('+'))
                v += term();
            else if (eat('-'))
                v -= term();
            else
                return v;
        }
    }
    SkewPoly term() {
        SkewPoly v = factor();
        for (;;) {
            skip();
            if (eat('*')) {
                v = v * factor();
            } else if (pos < s.size() && (s[pos] == 'z' || s[pos] == '(')) {
                v = v * factor();  // implicit product like "2z1" or "(1/2)z1"
            } else {
                return v;
            }
        }
    }
    SkewPoly factor() {
        skip();
        if (pos >= s.size()) fail("unexpected end of input");
        if (s[pos] == 'z') {
            ++pos;
            std::size_t start = pos;
            while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == start) fail("expected variable index after 'z'");
            unsigned idx = static_cast<unsigned>(std::stoul(std::string(s.substr(start, pos - start))));
            if (idx == 0 || idx > mu->n()) fail("variable index out of range");
            SkewPoly v = SkewPoly::generator(mu, idx - 1);
            if (eat('^')) {
                std::size_t es = pos;
                skip();
                es = pos;
                while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                if (pos == es) fail("expected exponent");
                unsigned e = static_cast<unsigned>(std::stoul(std::string(s.substr(es, pos - es))));
                SkewPoly r = SkewPoly::constant(mu, mu->field()->one());
                for (unsigned k = 0; k < e; ++k) r = r * v;
                v = r;
            }
            return v;
        }
        // scalar atom or parenthesized scalar expression: find its extent and
        // delegate to the field parser
        if (s[pos] == '(') {
            std::size_t start = pos;
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
            std::string inner(s.substr(start + 1, pos - start - 2));
            return SkewPoly::constant(mu, mu->field()->parse(inner));
        }
        std::size_t start = pos;
        while (pos < s.size() && (isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/' ||
                                  s[pos] == 's' || s[pos] == 'g' || s[pos] == '^'))
            ++pos;
        if (pos == start) fail(std::string("unexpected character '") + s[pos] + "'");
        return SkewPoly::constant(mu, mu->field()->parse(std::string(s.substr(start, pos - start))));
    }
};

}  // namespace

SkewPoly parse_skew_poly(std::string_view text, MuPtr mu) {
    PolyParser p{text, 0, std::move(mu)};
    SkewPoly v = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    return v;
}

// ---------------------------------------------------------------------------
// Ideal components

namespace {

// left: z_i * z^e = (prod_{j<i} mu_ji^{e_j}) z^{e+delta_i}
// right: z^e * z_i = (prod_{j>i} mu_ij^{e_j}) z^{e+delta_i}
SparseRow shift_row(const SparseRow& row, const DegreeBasis& from, const DegreeBasis& to,
                    unsigned i, bool left, const MuParams& mu) {
    SparseRow out;
    unsigned n = mu.n();
    for (const auto& [idx, c] : row) {
        Mono m = from.mono(idx);
        Scalar g = mu.field()->one();
        if (left) {
            for (unsigned j = 0; j < i; ++j)
                if (m[j]) g *= mu.mu(j, i).pow(m[j]);
        } else {
            for (unsigned j = i + 1; j < n; ++j)
                if (m[j]) g *= mu.mu(i, j).pow(m[j]);
        }
        m[i] += 1;
        std::size_t ni = to.index(m);
        Scalar add = c * g;
        auto it = out.find(ni);
        if (it == out.end())
            out.emplace(ni, add);
        else {
            it->second += add;
            if (it->second.is_zero()) out.erase(it);
        }
    }
    return out;
}

}  // namespace

std::vector<IdealDims> ideal_component_dims(const std::vector<SkewPoly>& gens, unsigned dmax) {
    if (gens.empty()) throw MathError("ideal_component_dims: no generators");
    const MuParams& mu = *gens[0].mu();
    unsigned n = mu.n();
    std::vector<std::vector<SkewPoly>> by_degree(dmax + 1);
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        unsigned d = g.require_homogeneous("ideal_component_dims");
        if (d > dmax) throw MathError("generator degree exceeds dmax");
        by_degree[d].push_back(g);
    }

    std::vector<IdealDims> out;
    out.push_back({0, 0, 1});
    std::vector<SkewPoly> prev_basis;  // basis of I_{d-1} as polynomials
    bool quotient_hit_zero = false;
    for (unsigned d = 1; d <= dmax; ++d) {
        std::uint64_t full = graded_dim(n, d);
        if (quotient_hit_zero) {
            out.push_back({d, full, 0});
            continue;
        }
        DegreeBasis basis(n, d);
        DegreeBasis lower(n, d - 1);
        RowSpace space;
        std::vector<SkewPoly> cur_basis;
        auto try_insert = [&](SparseRow row) {
            if (space.insert(std::move(row))) return true;
            return false;
        };
        for (const auto& g : prev_basis) {
            SparseRow r = g.to_row(lower);
            for (unsigned i = 0; i < n; ++i) {
                try_insert(shift_row(r, lower, basis, i, true, mu));
                try_insert(shift_row(r, lower, basis, i, false, mu));
            }
        }
        for (const auto& g : by_degree[d]) try_insert(g.to_row(basis));
        std::uint64_t rank = space.rank();
        out.push_back({d, rank, full - rank});
        if (full == rank) quotient_hit_zero = true;
        cur_basis.reserve(rank);
        for (const auto& [p, r] : space.rows())
            cur_basis.push_back(SkewPoly::from_row(gens[0].mu(), basis, r));
        prev_basis = std::move(cur_basis);
    }
    return out;
}

FinitenessVerdict is_finite_dimensional_quotient(const std::vector<SkewPoly>& gens,
                                                 unsigned dmax) {
    auto dims = ideal_component_dims(gens, dmax);
    for (const auto& d : dims)
        if (d.degree > 0 && d.quotient_dim == 0) return {true, d.degree};
    return {false, dmax};
}

}  // namespace sck
