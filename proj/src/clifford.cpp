#include "sck/clifford.hpp"

#include <algorithm>
#include <sstream>

namespace sck {

void GSCASpec::validate() const {
    if (!mu) throw MathError("spec has no mu parameters");
    unsigned n = mu->n();
    if (matrices.size() != n) throw MathError("spec needs exactly n matrices");
    for (const auto& m : matrices) {
        if (m.n() != n) throw MathError("matrix arity mismatch");
        if (!(*m.mu() == *mu)) throw MathError("matrix built against different mu");
    }
}

bool GSCASpec::matrices_independent() const {
    unsigned n = mu->n();
    DenseMatrix flat;
    for (const auto& m : matrices) {
        std::vector<Scalar> row;
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j) row.push_back(m.at(i, j));
        flat.push_back(std::move(row));
    }
    return matrix_rank(std::move(flat)) == matrices.size();
}

GSCAPresentation build_relations(const GSCASpec& spec) {
    spec.validate();
    unsigned n = spec.mu->n();
    GSCAPresentation out;
    out.mu = spec.mu;
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = i; j < n; ++j) {
            GSCAPresentation::Relation r{i, j, {}};
            for (unsigned k = 0; k < n; ++k) r.y_coeffs.push_back(spec.matrices[k].at(i, j));
            out.relations.push_back(std::move(r));
        }
    return out;
}

std::string GSCAPresentation::relation_str(const Relation& r) const {
    std::ostringstream os;
    if (r.i == r.j) {
        os << "2*x" << r.i + 1 << "^2";
    } else {
        os << "x" << r.i + 1 << "*x" << r.j + 1;
        Scalar m = mu->mu(r.i, r.j);
        std::string ms = m.str();
        if (ms == "1")
            os << " + ";
        else if (ms == "-1")
            os << " - ";
        else
            os << " + (" << ms << ")*";
        os << "x" << r.j + 1 << "*x" << r.i + 1;
    }
    os << " =";
    bool any = false;
    for (unsigned k = 0; k < r.y_coeffs.size(); ++k) {
        if (r.y_coeffs[k].is_zero()) continue;
        std::string cs = r.y_coeffs[k].str();
        os << (any ? " + " : " ");
        any = true;
        if (cs == "1")
            os << "y" << k + 1;
        else
            os << "(" << cs << ")*y" << k + 1;
    }
    if (!any) os << " 0";
    return os.str();
}

Elimination eliminate_y(const GSCASpec& spec) {
    spec.validate();
    unsigned n = spec.mu->n();
    const FieldPtr& field = spec.mu->field();
    if (!spec.matrices_independent())
        throw MathError("eliminate_y: matrices are linearly dependent, y's not eliminable");

    // augmented system [C | F]: row per pair (i <= j); C columns are the y
    // coefficients (M_k)_ij, F columns are the free x-word coefficients of
    // x_i x_j + mu_ij x_j x_i
    std::size_t words = std::size_t(n) * n;
    GSCAPresentation pres = build_relations(spec);
    DenseMatrix aug;
    for (const auto& r : pres.relations) {
        std::vector<Scalar> row(n + words, field->zero());
        for (unsigned k = 0; k < n; ++k) row[k] = r.y_coeffs[k];
        if (r.i == r.j) {
            row[n + std::size_t(r.i) * n + r.i] = field->integer(2);
        } else {
            row[n + std::size_t(r.i) * n + r.j] = field->one();
            row[n + std::size_t(r.j) * n + r.i] = spec.mu->mu(r.i, r.j);
        }
        aug.push_back(std::move(row));
    }
    // eliminate with pivots restricted to the y columns, so the y rows stay
    // free of relation admixture
    std::vector<bool> used(aug.size(), false);
    std::vector<std::size_t> pivot_row(n);
    for (unsigned k = 0; k < n; ++k) {
        std::size_t sel = aug.size();
        for (std::size_t r = 0; r < aug.size(); ++r)
            if (!used[r] && !aug[r][k].is_zero()) {
                sel = r;
                break;
            }
        if (sel == aug.size()) throw MathError("eliminate_y: internal pivot failure");
        used[sel] = true;
        pivot_row[k] = sel;
        Scalar inv = aug[sel][k].inverse();
        for (auto& v : aug[sel]) v *= inv;
        for (std::size_t r = 0; r < aug.size(); ++r) {
            if (r == sel || aug[r][k].is_zero()) continue;
            Scalar f = aug[r][k];
            for (std::size_t c = 0; c < aug[r].size(); ++c) aug[r][c] -= f * aug[sel][c];
        }
    }

    Elimination out{QuadraticPresentation(n, field, {}), {}};
    std::vector<std::vector<Scalar>> y(n);
    std::vector<std::vector<Scalar>> w;
    for (unsigned k = 0; k < n; ++k)
        y[k].assign(aug[pivot_row[k]].begin() + n, aug[pivot_row[k]].end());
    for (std::size_t r = 0; r < aug.size(); ++r) {
        if (used[r]) continue;
        std::vector<Scalar> rel(aug[r].begin() + n, aug[r].end());
        if (std::any_of(rel.begin(), rel.end(), [](const Scalar& c) { return !c.is_zero(); }))
            w.push_back(std::move(rel));
    }
    out.presentation = QuadraticPresentation(n, field, std::move(w));
    out.y_exprs = std::move(y);
    return out;
}

std::vector<SkewPoly> associated_quadrics(const GSCASpec& spec) {
    spec.validate();
    std::vector<SkewPoly> qs;
    qs.reserve(spec.matrices.size());
    for (const auto& m : spec.matrices) qs.push_back(tau(m));
    return qs;
}

std::vector<bool> check_normalizing(const std::vector<SkewPoly>& qs) {
    std::vector<bool> out;
    if (qs.empty()) return out;
    const MuPtr& mu = qs[0].mu();
    unsigned n = mu->n();
    DegreeBasis deg3(n, 3);
    for (std::size_t j = 0; j < qs.size(); ++j) {
        qs[j].require_homogeneous("check_normalizing");
        // degree-3 component of <q_1..q_{j-1}>
        RowSpace ideal;
        for (std::size_t t = 0; t < j; ++t) {
            for (unsigned i = 0; i < n; ++i) {
                SkewPoly zi = SkewPoly::generator(mu, i);
                ideal.insert((zi * qs[t]).to_row(deg3));
                ideal.insert((qs[t] * zi).to_row(deg3));
            }
        }
        RowSpace left = ideal, right = ideal, both = ideal;
        for (unsigned i = 0; i < n; ++i) {
            SkewPoly zi = SkewPoly::generator(mu, i);
            left.insert((qs[j] * zi).to_row(deg3));
            right.insert((zi * qs[j]).to_row(deg3));
            both.insert((qs[j] * zi).to_row(deg3));
            both.insert((zi * qs[j]).to_row(deg3));
        }
        out.push_back(left.rank() == both.rank() && right.rank() == both.rank());
    }
    return out;
}

FinitenessVerdict check_base_point_free(const std::vector<SkewPoly>& qs, unsigned dmax) {
    return is_finite_dimensional_quotient(qs, dmax);
}

const char* RegularityReport::verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Regular:
            return "Regular";
        case Verdict::NotRegular:
            return "NotRegular";
        case Verdict::Inconclusive:
            return "Inconclusive";
    }
    return "?";
}

RegularityReport check_regularity(const GSCASpec& spec, unsigned dmax, unsigned hilbert_dmax) {
    spec.validate();
    unsigned n = spec.mu->n();
    RegularityReport rep;
    rep.dmax = dmax;
    rep.hilbert_dmax = hilbert_dmax;

    auto qs = associated_quadrics(spec);
    rep.normalizing = check_normalizing(qs);
    bool all_normal = std::all_of(rep.normalizing.begin(), rep.normalizing.end(),
                                  [](bool b) { return b; });

    rep.bpf = check_base_point_free(qs, dmax);

    Elimination elim = eliminate_y(spec);
    rep.dims = algebra_dims(elim.presentation, hilbert_dmax);
    rep.hilbert_ok = true;
    for (unsigned d = 0; d <= hilbert_dmax; ++d)
        if (rep.dims[d] != graded_dim(n, d)) rep.hilbert_ok = false;

    if (!all_normal) {
        rep.verdict = RegularityReport::Verdict::NotRegular;
        rep.reason = "quadric system is not normalizing";
    } else if (!rep.hilbert_ok) {
        rep.verdict = RegularityReport::Verdict::NotRegular;
        rep.reason = "Hilbert dimensions deviate from the polynomial pattern";
    } else if (!rep.bpf.proved_finite) {
        rep.verdict = RegularityReport::Verdict::Inconclusive;
        rep.reason = "base-point-freeness undecided up to degree " + std::to_string(dmax);
    } else {
        rep.verdict = RegularityReport::Verdict::Regular;
        rep.reason = "normalizing, base point free (quotient vanishes at degree " +
                     std::to_string(rep.bpf.degree) + "), Hilbert dimensions match";
    }
    return rep;
}

}  // namespace sck
