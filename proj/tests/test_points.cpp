#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "sck/points.hpp"

using namespace sck;

namespace {

MuPtr make_mu(unsigned n, const FieldPtr& field,
              const std::map<std::pair<unsigned, unsigned>, Scalar>& upper) {
    std::vector<std::vector<Scalar>> e(n, std::vector<Scalar>(n, field->one()));
    for (const auto& [ij, v] : upper) {
        auto [i, j] = ij;
        e[i][j] = v;
        e[j][i] = v.inverse();
    }
    return std::make_shared<MuParams>(n, std::move(e));
}

MuPtr commutative(unsigned n, const FieldPtr& field) {
    return std::make_shared<MuParams>(MuParams::ones(n, field));
}

MuSymMatrix diag(const MuPtr& mu, const std::vector<long>& d) {
    const FieldPtr& f = mu->field();
    DenseMatrix m(d.size(), std::vector<Scalar>(d.size(), f->zero()));
    for (std::size_t i = 0; i < d.size(); ++i) m[i][i] = f->integer(d[i]);
    return MuSymMatrix(mu, std::move(m));
}

MuSymMatrix of_form(const MuPtr& mu, const char* text) {
    return matrix_of_form(parse_skew_poly(text, mu));
}

std::vector<Scalar> pt(const FieldPtr& f, const std::vector<long>& v) {
    std::vector<Scalar> t;
    for (long x : v) t.push_back(f->integer(x));
    return t;
}

// the four CaV quadric matrices over Q(i)
SpanFamily cav_family(FieldPtr* field_out = nullptr) {
    auto [i, f] = Field::sqrt_adjoin(Field::rationals()->integer(-1));
    if (field_out) *field_out = f;
    auto mu = make_mu(4, f,
                      {{{0, 1}, f->one()},
                       {{0, 2}, -i},
                       {{0, 3}, i},
                       {{1, 2}, f->one()},
                       {{1, 3}, f->integer(-1)},
                       {{2, 3}, f->integer(-1)}});
    SpanFamily fam{mu, {}};
    for (const char* s : {"z1*z2", "z3^2", "z1^2 - z2*z4", "z2^2 + z4^2 - z2*z3"})
        fam.basis.push_back(matrix_of_form(parse_skew_poly(s, mu)));
    return fam;
}

// SV web: a^2-b^2, a^2-c^2, a^2-d^2, a^2-e^2 with e = a+b+c+d
SpanFamily sv_web(const FieldPtr& f) {
    auto mu = commutative(4, f);
    SpanFamily fam{mu, {}};
    for (const char* s : {"z1^2 - z2^2", "z1^2 - z3^2", "z1^2 - z4^2"})
        fam.basis.push_back(of_form(mu, s));
    // a^2 - (a+b+c+d)^2
    fam.basis.push_back(of_form(
        mu, "-z2^2 - z3^2 - z4^2 - 2*z1*z2 - 2*z1*z3 - 2*z1*z4 - 2*z2*z3 - 2*z2*z4 - 2*z3*z4"));
    return fam;
}

bool has_member(const PencilLocus& loc, long t0, long t1, unsigned rank) {
    for (const auto& m : loc.members) {
        Scalar a = m.field->integer(t0), b = m.field->integer(t1);
        if (m.t0 == a && m.t1 == b && m.rank == rank) return true;
    }
    return false;
}

bool has_plane_point(const CubicIntersection& in, const std::vector<long>& v) {
    for (const auto& p : in.points) {
        bool all = true;
        for (unsigned k = 0; k < 3; ++k)
            if (p.coords[k] != p.field->integer(v[k])) all = false;
        if (all) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("family membership and validation") {
    auto q = Field::rationals();
    auto mu = commutative(4, q);
    SpanFamily fam{mu, {diag(mu, {1, 1, 0, 0}), diag(mu, {0, 0, 1, 1})}};
    fam.validate();
    MuSymMatrix m = fam.member(pt(q, {2, 3}));
    CHECK(m.at(0, 0) == q->integer(2));
    CHECK(m.at(3, 3) == q->integer(3));

    SpanFamily dep{mu, {diag(mu, {1, 0, 0, 0}), diag(mu, {2, 0, 0, 0})}};
    CHECK_THROWS_AS(dep.validate(), MathError);
}

TEST_CASE("pencil of complementary diagonal blocks") {
    auto q = Field::rationals();
    auto mu = commutative(4, q);
    MuSymMatrix ma = diag(mu, {1, 1, 0, 0}), mb = diag(mu, {0, 0, 1, 1});
    PencilLocus loc = pencil_rank_le2_members(ma, mb);
    CHECK(!loc.all_of_pencil);
    CHECK(loc.distinct_count == 2);
    CHECK(loc.members_complete);
    REQUIRE(loc.members.size() == 2);
    CHECK(has_member(loc, 1, 0, 2));
    CHECK(has_member(loc, 0, 1, 2));

    SpanFamily fam{mu, {ma, mb}};
    auto rep = count_point_modules(fam, CountMode::Commutative, Completeness::ExactPencil);
    CHECK(rep.first == 0);
    CHECK(rep.second == 2);
    CHECK(rep.total() == 4);
    CHECK(rep.finite);
    CHECK(!rep.anomaly);
}

TEST_CASE("a pencil inside V(ab) is rank <= 2 throughout") {
    auto q = Field::rationals();
    auto mu = commutative(4, q);
    SpanFamily fam{mu, {of_form(mu, "z1*z2"), of_form(mu, "z1^2")}};
    PencilLocus loc = pencil_rank_le2_members(fam.basis[0], fam.basis[1]);
    CHECK(loc.all_of_pencil);
    auto rep = count_point_modules(fam, CountMode::Commutative, Completeness::ExactPencil);
    CHECK(!rep.finite);
}

TEST_CASE("random pencils have at most three rank <= 2 members") {
    auto q = Field::rationals();
    auto mu = commutative(4, q);
    std::mt19937 rng(71);
    std::uniform_int_distribution<long> c(-2, 2);
    int checked = 0;
    while (checked < 200) {
        DenseMatrix u1(4, std::vector<Scalar>(4, q->zero()));
        DenseMatrix u2(4, std::vector<Scalar>(4, q->zero()));
        for (unsigned i = 0; i < 4; ++i)
            for (unsigned j = i; j < 4; ++j) {
                u1[i][j] = q->integer(c(rng));
                u2[i][j] = q->integer(c(rng));
            }
        MuSymMatrix ma = MuSymMatrix::from_upper(mu, u1), mb = MuSymMatrix::from_upper(mu, u2);
        SpanFamily fam{mu, {ma, mb}};
        try {
            fam.validate();
        } catch (const MathError&) {
            continue;
        }
        ++checked;
        PencilLocus loc = pencil_rank_le2_members(ma, mb);
        bool ok = loc.all_of_pencil || loc.distinct_count <= 3;
        CHECK(ok);
    }
}

TEST_CASE("exact pencil agrees with finite field scans on rational members") {
    std::mt19937 rng(72);
    std::uniform_int_distribution<long> c(0, 6);
    for (std::uint64_t p : {5ull, 7ull}) {
        auto fp = Field::finite(p);
        auto mu = commutative(4, fp);
        int done = 0;
        while (done < 25) {
            DenseMatrix u1(4, std::vector<Scalar>(4, fp->zero()));
            DenseMatrix u2(4, std::vector<Scalar>(4, fp->zero()));
            for (unsigned i = 0; i < 4; ++i)
                for (unsigned j = i; j < 4; ++j) {
                    u1[i][j] = fp->integer(c(rng));
                    u2[i][j] = fp->integer(c(rng));
                }
            MuSymMatrix ma = MuSymMatrix::from_upper(mu, u1), mb = MuSymMatrix::from_upper(mu, u2);
            SpanFamily fam{mu, {ma, mb}};
            try {
                fam.validate();
            } catch (const MathError&) {
                continue;
            }
            PencilLocus loc = pencil_rank_le2_members(ma, mb);
            if (loc.all_of_pencil) continue;
            ++done;
            auto exact = count_point_modules(fam, CountMode::Commutative, Completeness::ExactPencil);
            auto scan = scan_parameter_space(fam, CountMode::Commutative, p, 1);
            CHECK(exact.first == scan.first);
            CHECK(exact.second == scan.second);
        }
    }
}

TEST_CASE("scan of the SV net over F7") {
    auto f7 = Field::finite(7);
    auto mu = commutative(4, f7);
    SpanFamily net{mu, {of_form(mu, "z1^2 - z2^2"), of_form(mu, "z1^2 - z3^2"),
                        of_form(mu, "z1^2 - z4^2")}};
    auto rep = scan_parameter_space(net, CountMode::Commutative, 7, 1);
    CHECK(rep.first == 0);
    CHECK(rep.second == 6);
    CHECK(rep.completeness == Completeness::ScanEvidence);
    CHECK(!rep.anomaly);
    // every witness re-verifies
    for (const auto& w : rep.witnesses) {
        MuSymMatrix m = net.mapped(w.field).member(w.t);
        CHECK(unsigned(symmetric_rank(m.entries())) == w.value);
    }
}

TEST_CASE("scan of two squares over F5 flags the rank-one pair") {
    auto f5 = Field::finite(5);
    auto mu = commutative(4, f5);
    SpanFamily fam{mu, {of_form(mu, "z1^2"), of_form(mu, "z2^2")}};
    auto rep = scan_parameter_space(fam, CountMode::Commutative, 5, 1);
    CHECK(rep.first == 2);   // t = (1,0) and (0,1)
    CHECK(rep.second == 4);  // the remaining four points of P^1(F_5)
    CHECK(rep.anomaly);      // two rank-one members signal an everywhere-degenerate pencil
}

TEST_CASE("CaV candidates give five point modules") {
    FieldPtr f;
    SpanFamily fam = cav_family(&f);
    CountOptions opts;
    opts.candidates = {pt(f, {1, 0, 0, 0}), pt(f, {0, 1, 0, 0}), pt(f, {0, 1, 0, 4})};
    auto rep = count_point_modules(fam, CountMode::Skew, Completeness::CertifiedCandidates, opts);
    CHECK(rep.first == 1);
    CHECK(rep.second == 2);
    CHECK(rep.total() == 5);
    CHECK(rep.completeness == Completeness::CertifiedCandidates);
    // witnesses re-verify through factor_quadratic
    for (const auto& w : rep.witnesses) {
        MuSymMatrix m = fam.member(w.t);
        CHECK(unsigned(factor_quadratic(tau(m)).size()) == w.value);
    }
}

TEST_CASE("SV web candidates give twenty points") {
    auto q = Field::rationals();
    SpanFamily web = sv_web(q);
    web.validate();
    CountOptions opts;
    opts.candidates = {pt(q, {1, 0, 0, 0}),  pt(q, {0, 1, 0, 0}),  pt(q, {0, 0, 1, 0}),
                       pt(q, {-1, 1, 0, 0}), pt(q, {-1, 0, 1, 0}), pt(q, {0, -1, 1, 0}),
                       pt(q, {0, 0, 0, 1}),  pt(q, {-1, 0, 0, 1}), pt(q, {0, -1, 0, 1}),
                       pt(q, {0, 0, -1, 1})};
    auto rep = count_point_modules(web, CountMode::Commutative, Completeness::CertifiedCandidates,
                                   opts);
    CHECK(rep.first == 0);
    CHECK(rep.second == 10);
    CHECK(rep.total() == 20);
    CHECK(!rep.anomaly);
    CHECK(verify_sv_bounds(6, rep.first, rep.second));
}

TEST_CASE("skew pencil rank locus for a diagonal-plus-pair pencil") {
    auto q = Field::rationals();
    auto mu = make_mu(3, q,
                      {{{0, 1}, q->integer(2)},
                       {{0, 2}, q->integer(3)},
                       {{1, 2}, q->integer(5)}});
    MuSymMatrix ma = diag(mu, {1, 0, 0}), mb = diag(mu, {0, 1, 1});
    PencilLocus loc = pencil_rank_le2_members(ma, mb);
    CHECK(!loc.all_of_pencil);
    CHECK(loc.distinct_count == 2);
    CHECK(loc.members_complete);
    CHECK(has_member(loc, 1, 0, 1));
    CHECK(has_member(loc, 0, 1, 2));
    for (const auto& m : loc.members) {
        MuSymMatrix mat = ma * m.field->lift(m.t0) + mb * m.field->lift(m.t1);
        CHECK(unsigned(mu_rank3(tau(mat)).rank) == m.rank);
    }

    SpanFamily fam{mu, {ma, mb}};
    auto rep = count_point_modules(fam, CountMode::Skew, Completeness::ExactPencil);
    CHECK(rep.first == 1);
    CHECK(rep.second == 1);
    CHECK(rep.total() == 3);
}

TEST_CASE("skew pencil with zero z1^2 coefficient uses the degenerate branch") {
    auto q = Field::rationals();
    auto mu = make_mu(3, q, {{{0, 1}, q->integer(2)}});
    MuSymMatrix ma = of_form(mu, "z1*z2"), mb = of_form(mu, "z3^2");
    PencilLocus loc = pencil_rank_le2_members(ma, mb);
    CHECK(!loc.all_of_pencil);
    CHECK(loc.distinct_count == 2);
    CHECK(has_member(loc, 1, 0, 2));
    CHECK(has_member(loc, 0, 1, 1));
}

TEST_CASE("skew exact pencil agrees with a skew scan") {
    // keep 1 + mu_ij * mu_jk away from 0 mod 7: such coincidences collapse a
    // cross-term constraint and the two-factorization bound itself degenerates
    auto f7 = Field::finite(7);
    auto mu = make_mu(3, f7, {{{0, 1}, f7->integer(2)}, {{1, 2}, f7->integer(2)}});
    MuSymMatrix ma = diag(mu, {1, 0, 0}), mb = diag(mu, {0, 1, 1});
    SpanFamily fam{mu, {ma, mb}};
    auto exact = count_point_modules(fam, CountMode::Skew, Completeness::ExactPencil);
    auto scan = scan_parameter_space(fam, CountMode::Skew, 7, 1);
    CHECK(exact.first == scan.first);
    CHECK(exact.second == scan.second);
}

TEST_CASE("planar divisor of simple nets") {
    auto q = Field::rationals();
    auto mu = commutative(4, q);
    LinearForm d4{{q->zero(), q->zero(), q->zero(), q->one()}};

    SpanFamily squares{mu, {of_form(mu, "z1^2"), of_form(mu, "z2^2"), of_form(mu, "z3^2")}};
    SkewPoly cubic = planar_rank2_divisor(squares, d4);
    auto tmu = commutative(3, q);
    CHECK(cubic == parse_skew_poly("z1*z2*z3", tmu));

    SpanFamily crosses{mu, {of_form(mu, "z1*z2"), of_form(mu, "z1*z3"), of_form(mu, "z2*z3")}};
    SkewPoly cubic2 = planar_rank2_divisor(crosses, d4);
    CHECK(cubic2 == parse_skew_poly("1/4*z1*z2*z3", tmu));

    CHECK_THROWS_AS(planar_rank2_divisor(squares, LinearForm{{q->zero(), q->zero(), q->zero(), q->zero()}}),
                    MathError);
}

TEST_CASE("SV divisors and their six intersection points") {
    auto q = Field::rationals();
    auto mu = commutative(4, q);
    SpanFamily net{mu, {of_form(mu, "z1^2 - z2^2"), of_form(mu, "z1^2 - z3^2"),
                        of_form(mu, "z1^2 - z4^2")}};
    // the two linear factors of a^2 - e^2 with e = a+b+c+d
    LinearForm minus{{q->zero(), q->one(), q->one(), q->one()}};          // e - a = b+c+d
    LinearForm plus{{q->integer(2), q->one(), q->one(), q->one()}};       // e + a
    SkewPoly fa = planar_rank2_divisor(net, minus);
    SkewPoly fb = planar_rank2_divisor(net, plus);
    auto tmu = commutative(3, q);
    CHECK(fa == parse_skew_poly(
                    "z1^2*z2 + z1^2*z3 + z1*z2^2 + 3*z1*z2*z3 + z1*z3^2 + z2^2*z3 + z2*z3^2", tmu));

    CubicIntersection in = intersect_plane_cubics(fa, fb);
    CHECK(!in.infinite);
    CHECK(in.complete);
    CHECK(in.points.size() == 6);
    CHECK(verify_sv_bounds(in.points.size(), 0, 10));
}

TEST_CASE("cubic intersections: cones, triangles, common components") {
    auto q = Field::rationals();
    auto tmu = commutative(3, q);

    auto single = intersect_plane_cubics(parse_skew_poly("z1^3", tmu),
                                         parse_skew_poly("z2^3", tmu));
    CHECK(!single.infinite);
    REQUIRE(single.points.size() == 1);
    CHECK(has_plane_point(single, {0, 0, 1}));

    auto triangle = intersect_plane_cubics(
        parse_skew_poly("z1*z2*z3", tmu),
        parse_skew_poly("z1^2*z2 + z1^2*z3 + z1*z2^2 + 2*z1*z2*z3 + z1*z3^2 + z2^2*z3 + z2*z3^2",
                        tmu));
    CHECK(!triangle.infinite);
    CHECK(triangle.complete);
    CHECK(triangle.points.size() == 6);
    CHECK(has_plane_point(triangle, {0, 0, 1}));
    CHECK(has_plane_point(triangle, {0, 1, 0}));
    CHECK(has_plane_point(triangle, {1, 0, 0}));
    CHECK(has_plane_point(triangle, {0, 1, -1}));
    CHECK(has_plane_point(triangle, {1, 0, -1}));
    CHECK(has_plane_point(triangle, {1, -1, 0}));

    // cross-check the triangle count against a brute-force F_11 scan
    auto f11 = Field::finite(11);
    auto fmu = commutative(3, f11);
    SkewPoly g1 = parse_skew_poly("z1*z2*z3", fmu);
    SkewPoly g2 = parse_skew_poly(
        "z1^2*z2 + z1^2*z3 + z1*z2^2 + 2*z1*z2*z3 + z1*z3^2 + z2^2*z3 + z2*z3^2", fmu);
    auto eval3 = [&](const SkewPoly& g, const Scalar& x, const Scalar& y, const Scalar& z) {
        Scalar acc = f11->zero();
        for (const auto& [mono, c] : g.terms())
            acc += c * x.pow(mono[0]) * y.pow(mono[1]) * z.pow(mono[2]);
        return acc;
    };
    int hits = 0;
    for (int lead = 0; lead < 3; ++lead)
        for (std::uint64_t i = 0; i < (lead < 2 ? 11u : 1u); ++i)
            for (std::uint64_t j = 0; j < (lead < 1 ? 11u : 1u); ++j) {
                std::vector<Scalar> v(3, f11->zero());
                v[lead] = f11->one();
                if (lead == 0) {
                    v[1] = field_element(f11, j);
                    v[2] = field_element(f11, i);
                } else if (lead == 1) {
                    v[2] = field_element(f11, i);
                }
                if (eval3(g1, v[0], v[1], v[2]).is_zero() &&
                    eval3(g2, v[0], v[1], v[2]).is_zero())
                    ++hits;
            }
    CHECK(hits == 6);

    auto shared = intersect_plane_cubics(parse_skew_poly("z1*z2*z3", tmu),
                                         parse_skew_poly("z1*z2^2 + z1*z3^2", tmu));
    CHECK(shared.infinite);
}

TEST_CASE("sv bound checks") {
    CHECK(verify_sv_bounds(6, 0, 10));
    CHECK(verify_sv_bounds(1, 1, 0));
    CHECK(!verify_sv_bounds(2, 0, 6));
}

TEST_CASE("scan guards and argument validation") {
    auto q = Field::rationals();
    auto mu = commutative(4, q);
    SpanFamily fam{mu, {of_form(mu, "z1^2"), of_form(mu, "z2^2"), of_form(mu, "z3^2"),
                        of_form(mu, "z4^2")}};
    CHECK_THROWS_AS(scan_parameter_space(fam, CountMode::Commutative, 9, 1), MathError);
    CHECK_THROWS_AS(scan_parameter_space(fam, CountMode::Commutative, 101, 2), MathError);
    CHECK_THROWS_AS(
        count_point_modules(fam, CountMode::Commutative, Completeness::ExactPencil), MathError);
}
