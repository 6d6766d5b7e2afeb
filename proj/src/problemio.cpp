#include "sck/problemio.hpp"

namespace sck {

const char* const kToolVersion = "gsca 1.0.0";

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const json& need(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(path + "." + key, "missing required key");
    return *it;
}

std::string need_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw SchemaError(path, "expected a string");
    return j.get<std::string>();
}

unsigned need_unsigned(const json& j, const std::string& path) {
    if (!j.is_number_unsigned()) throw SchemaError(path, "expected a non-negative integer");
    return j.get<unsigned>();
}

Scalar parse_scalar(const FieldPtr& field, const json& j, const std::string& path) {
    try {
        return field->parse(need_string(j, path));
    } catch (const ParseError& e) {
        throw SchemaError(path, e.what());
    }
}

FieldPtr parse_field(const json& j, const std::string& path) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "Q" || s == "rationals") return Field::rationals();
        throw SchemaError(path, "unknown field name '" + s + "' (use \"Q\" or an object)");
    }
    if (!j.is_object()) throw SchemaError(path, "expected \"Q\" or an object");
    if (j.contains("p")) {
        std::uint64_t p = need(j, "p", path).get<std::uint64_t>();
        unsigned e = j.contains("e") ? need_unsigned(j.at("e"), path + ".e") : 1;
        return Field::finite(p, e);
    }
    if (j.contains("sqrt")) {
        const json& rads = j.at("sqrt");
        if (!rads.is_array()) throw SchemaError(path + ".sqrt", "expected an array of scalars");
        FieldPtr f = Field::rationals();
        for (std::size_t k = 0; k < rads.size(); ++k) {
            Scalar rad = parse_scalar(f, rads[k], path + ".sqrt[" + std::to_string(k) + "]");
            f = Field::sqrt_adjoin(rad).second;
        }
        return f;
    }
    throw SchemaError(path, "field object needs \"p\" (finite) or \"sqrt\" (tower)");
}

DenseMatrix parse_matrix(const FieldPtr& field, const json& j, unsigned n,
                         const std::string& path) {
    if (!j.is_array() || j.size() != n) throw SchemaError(path, "expected an array of n rows");
    DenseMatrix m;
    for (unsigned i = 0; i < n; ++i) {
        const json& row = j[i];
        std::string rp = path + "[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != n) throw SchemaError(rp, "expected n entries");
        std::vector<Scalar> r;
        for (unsigned k = 0; k < n; ++k)
            r.push_back(parse_scalar(field, row[k], rp + "[" + std::to_string(k) + "]"));
        m.push_back(std::move(r));
    }
    return m;
}

SkewPoly parse_form(const MuPtr& mu, const json& j, const std::string& path) {
    try {
        return parse_skew_poly(need_string(j, path), mu);
    } catch (const ParseError& e) {
        throw SchemaError(path, e.what());
    }
}

std::string mode_name(CountMode m) {
    return m == CountMode::Commutative ? "commutative" : "skew";
}

std::string completeness_name(Completeness c) {
    switch (c) {
        case Completeness::ExactPencil: return "exact-pencil";
        case Completeness::CertifiedCandidates: return "certified-candidates";
        default: return "scan-evidence";
    }
}

std::string component_type_name(ComponentType t) {
    switch (t) {
        case ComponentType::Line: return "line";
        case ComponentType::SmoothConic: return "smooth conic";
        default: return "irreducible cubic";
    }
}

std::string singularity_name(CubicSingularity s) {
    switch (s) {
        case CubicSingularity::Nodal: return "nodal";
        case CubicSingularity::Cuspidal: return "cuspidal";
        default: return "smooth";
    }
}

ordered_json preamble(const Problem& p) {
    ordered_json r;
    r["version"] = kToolVersion;
    r["field"] = p.field->describe();
    r["n"] = p.n;
    return r;
}

GSCASpec require_spec(const Problem& p) {
    if (p.matrices.empty())
        throw SchemaError("matrices", "this command needs \"matrices\" or \"forms\"");
    return GSCASpec{p.mu, p.matrices};
}

const QuadraticPresentation& require_presentation(const Problem& p) {
    if (!p.presentation)
        throw SchemaError("presentation", "this command needs a \"presentation\" relation list");
    return *p.presentation;
}

const SkewPoly& require_q(const Problem& p) {
    if (!p.q) throw SchemaError("q", "this command needs a quadratic form \"q\"");
    return *p.q;
}

ordered_json scalar_list(const std::vector<Scalar>& v) {
    ordered_json a = ordered_json::array();
    for (const auto& s : v) a.push_back(s.str());
    return a;
}

ordered_json count_report(const Problem& p, const PointCountReport& rep,
                          const std::string& strategy) {
    ordered_json r = preamble(p);
    r["mode"] = mode_name(rep.mode);
    r["strategy"] = strategy;
    r["completeness"] = completeness_name(rep.completeness);
    r["finite"] = rep.finite;
    r["first"] = rep.first;
    r["second"] = rep.second;
    r["total"] = rep.total();
    ordered_json ws = ordered_json::array();
    for (const auto& w : rep.witnesses) {
        ordered_json e;
        e["t"] = scalar_list(w.t);
        e["field"] = w.field->describe();
        e["value"] = w.value;
        ws.push_back(std::move(e));
    }
    r["witnesses"] = std::move(ws);
    if (!rep.scan_fields.empty()) r["scan_fields"] = rep.scan_fields;
    r["anomaly"] = rep.anomaly;
    if (rep.anomaly) r["anomaly_note"] = rep.anomaly_note;
    return r;
}

}  // namespace

Problem parse_problem(const json& j) {
    if (!j.is_object()) throw SchemaError("$", "problem file must be a JSON object");
    Problem p;
    p.field = parse_field(need(j, "field", "$"), "$.field");
    p.n = need_unsigned(need(j, "n", "$"), "$.n");
    if (p.n == 0) throw SchemaError("$.n", "n must be positive");

    if (j.contains("mu")) {
        DenseMatrix e = parse_matrix(p.field, j.at("mu"), p.n, "$.mu");
        try {
            p.mu = std::make_shared<MuParams>(p.n, std::move(e));
        } catch (const MathError& err) {
            throw SchemaError("$.mu", err.what());
        }
    } else {
        p.mu = std::make_shared<MuParams>(MuParams::ones(p.n, p.field));
    }

    if (j.contains("matrices")) {
        const json& ms = j.at("matrices");
        if (!ms.is_array()) throw SchemaError("$.matrices", "expected an array of matrices");
        for (std::size_t k = 0; k < ms.size(); ++k) {
            std::string path = "$.matrices[" + std::to_string(k) + "]";
            p.matrices.emplace_back(p.mu, parse_matrix(p.field, ms[k], p.n, path));
        }
    }
    if (j.contains("forms")) {
        const json& fs = j.at("forms");
        if (!fs.is_array()) throw SchemaError("$.forms", "expected an array of forms");
        for (std::size_t k = 0; k < fs.size(); ++k)
            p.matrices.push_back(
                matrix_of_form(parse_form(p.mu, fs[k], "$.forms[" + std::to_string(k) + "]")));
    }

    if (j.contains("presentation")) {
        const json& rels = j.at("presentation");
        if (!rels.is_array()) throw SchemaError("$.presentation", "expected an array of relations");
        std::vector<std::vector<Scalar>> w;
        for (std::size_t k = 0; k < rels.size(); ++k) {
            std::string path = "$.presentation[" + std::to_string(k) + "]";
            try {
                w.push_back(QuadraticPresentation::parse_relation(need_string(rels[k], path), p.n,
                                                                  p.field));
            } catch (const ParseError& e) {
                throw SchemaError(path, e.what());
            }
        }
        p.presentation.emplace(p.n, p.field, std::move(w));
    }

    if (j.contains("q")) p.q = parse_form(p.mu, j.at("q"), "$.q");
    if (j.contains("dmax")) p.dmax = need_unsigned(j.at("dmax"), "$.dmax");
    if (j.contains("hilbert_dmax"))
        p.hilbert_dmax = need_unsigned(j.at("hilbert_dmax"), "$.hilbert_dmax");
    if (j.contains("strategy")) p.strategy = need_string(j.at("strategy"), "$.strategy");

    if (j.contains("candidates")) {
        const json& cs = j.at("candidates");
        if (!cs.is_array()) throw SchemaError("$.candidates", "expected an array of vectors");
        for (std::size_t k = 0; k < cs.size(); ++k) {
            std::string path = "$.candidates[" + std::to_string(k) + "]";
            const json& cv = cs[k];
            if (!cv.is_array()) throw SchemaError(path, "expected an array of scalars");
            std::vector<Scalar> v;
            for (std::size_t i = 0; i < cv.size(); ++i)
                v.push_back(parse_scalar(p.field, cv[i], path + "[" + std::to_string(i) + "]"));
            p.candidates.push_back(std::move(v));
        }
    }

    if (j.contains("scan")) {
        const json& s = j.at("scan");
        if (!s.is_object()) throw SchemaError("$.scan", "expected {\"p\": ..., \"e\": ...}");
        p.scan_p = need(s, "p", "$.scan").get<std::uint64_t>();
        if (s.contains("e")) p.scan_e = need_unsigned(s.at("e"), "$.scan.e");
    }
    return p;
}

nlohmann::ordered_json run_command(const std::string& command, const Problem& p, int& exit_code) {
    exit_code = 0;

    if (command == "build") {
        GSCASpec spec = require_spec(p);
        auto pres = build_relations(spec);
        auto elim = eliminate_y(spec);
        ordered_json r = preamble(p);
        ordered_json rels = ordered_json::array();
        for (const auto& rel : pres.relations) rels.push_back(pres.relation_str(rel));
        r["relations"] = std::move(rels);
        ordered_json erels = ordered_json::array();
        for (const auto& w : elim.presentation.w_basis())
            erels.push_back(QuadraticPresentation::relation_str(w, p.n));
        r["eliminated_relations"] = std::move(erels);
        ordered_json ys = ordered_json::array();
        for (const auto& y : elim.y_exprs) ys.push_back(QuadraticPresentation::relation_str(y, p.n));
        r["y_exprs"] = std::move(ys);
        return r;
    }

    if (command == "check-regular") {
        GSCASpec spec = require_spec(p);
        RegularityReport rep = check_regularity(spec, p.dmax, p.hilbert_dmax);
        ordered_json r = preamble(p);
        r["dmax"] = rep.dmax;
        r["hilbert_dmax"] = rep.hilbert_dmax;
        r["normalizing"] = rep.normalizing;
        r["bpf"] = {{"proved_finite", rep.bpf.proved_finite}, {"degree", rep.bpf.degree}};
        r["hilbert_ok"] = rep.hilbert_ok;
        r["dims"] = rep.dims;
        r["verdict"] = RegularityReport::verdict_name(rep.verdict);
        r["reason"] = rep.reason;
        if (rep.verdict == RegularityReport::Verdict::NotRegular) exit_code = 2;
        if (rep.verdict == RegularityReport::Verdict::Inconclusive) exit_code = 3;
        return r;
    }

    if (command == "mu-rank") {
        MuRankAnalysis a = mu_rank3(require_q(p));
        ordered_json r = preamble(p);
        r["q"] = require_q(p).str();
        r["rank"] = a.rank;
        r["scale"] = a.scale.str();
        r["d16"] = scalar_list(a.d16);
        r["d7"] = a.d7.str();
        r["d8_values"] = scalar_list(a.d8_values);
        r["d_field"] = a.field->describe();
        return r;
    }

    if (command == "factor") {
        auto facs = factor_quadratic(require_q(p));
        ordered_json r = preamble(p);
        r["q"] = require_q(p).str();
        r["count"] = facs.size();
        ordered_json fl = ordered_json::array();
        for (const auto& f : facs) {
            ordered_json e;
            e["l1"] = f.l1.str();
            e["l2"] = f.l2.str();
            e["field"] = f.field->describe();
            e["is_square"] = f.is_square;
            fl.push_back(std::move(e));
        }
        r["factorizations"] = std::move(fl);
        return r;
    }

    if (command == "count-points" || command == "scan") {
        SpanFamily fam{p.mu, require_spec(p).matrices};
        CountMode mode = p.mu->is_commutative() ? CountMode::Commutative : CountMode::Skew;
        std::string strategy = command == "scan" ? "scan" : p.strategy;
        Completeness c;
        if (strategy == "pencil")
            c = Completeness::ExactPencil;
        else if (strategy == "candidates")
            c = Completeness::CertifiedCandidates;
        else if (strategy == "scan")
            c = Completeness::ScanEvidence;
        else
            throw SchemaError("$.strategy", "expected pencil, candidates or scan");
        CountOptions opts;
        opts.candidates = p.candidates;
        opts.p = p.scan_p;
        opts.e = p.scan_e;
        if (c == Completeness::ScanEvidence && opts.p == 0)
            throw SchemaError("$.scan", "scan strategy needs {\"p\": ..., \"e\": ...}");
        return count_report(p, count_point_modules(fam, mode, c, opts), strategy);
    }

    if (command == "point-scheme") {
        auto sys = multilinearize(require_presentation(p));
        auto ps = point_scheme_cubic(sys);
        ordered_json r = preamble(p);
        r["identically_zero"] = ps.identically_zero;
        r["cubic"] = ps.identically_zero ? "0" : ps.cubic.str();
        ordered_json comps = ordered_json::array();
        ordered_json types = ordered_json::array();
        if (!ps.identically_zero) {
            auto cls = classify_plane_cubic(ps.cubic);
            for (const auto& comp : cls.components) {
                ordered_json e;
                e["type"] = component_type_name(comp.type);
                e["multiplicity"] = comp.multiplicity;
                e["form"] = comp.form.str();
                if (comp.type == ComponentType::IrreducibleCubic)
                    e["singularity"] = singularity_name(comp.singularity);
                comps.push_back(std::move(e));
                types.push_back(component_type_name(comp.type));
            }
            r["classification_field"] = cls.field->describe();
        }
        r["components"] = std::move(comps);
        r["types"] = std::move(types);
        return r;
    }

    if (command == "hilbert") {
        auto dims = algebra_dims(require_presentation(p), p.hilbert_dmax);
        ordered_json r = preamble(p);
        r["hilbert_dmax"] = p.hilbert_dmax;
        r["dims"] = dims;
        return r;
    }

    throw SchemaError("command", "unknown command '" + command + "'");
}

}  // namespace sck
