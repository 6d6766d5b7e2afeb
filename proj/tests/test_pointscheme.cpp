#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "sck/clifford.hpp"
#include "sck/pointscheme.hpp"

using namespace sck;

namespace {

MuPtr commutative(unsigned n, const FieldPtr& field) {
    return std::make_shared<MuParams>(MuParams::ones(n, field));
}

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

GSCASpec nvz_spec(const FieldPtr& q, const Scalar& mu12, const Scalar& mu13, const Scalar& mu23) {
    auto mu = make_mu(3, q, {{{0, 1}, mu12}, {{0, 2}, mu13}, {{1, 2}, mu23}});
    DenseMatrix m1(3, std::vector<Scalar>(3, q->zero()));
    m1[0][0] = q->integer(2);
    DenseMatrix m2(3, std::vector<Scalar>(3, q->zero()));
    m2[1][1] = q->integer(2);
    DenseMatrix m3(3, std::vector<Scalar>(3, q->zero()));
    m3[0][1] = q->one();
    m3[1][0] = mu.get()->mu(1, 0);
    m3[2][2] = q->integer(2);
    return GSCASpec{mu, {MuSymMatrix(mu, m1), MuSymMatrix(mu, m2), MuSymMatrix(mu, m3)}};
}

QuadraticPresentation presentation(const FieldPtr& f, std::initializer_list<const char*> rels) {
    std::vector<std::vector<Scalar>> w;
    for (const char* r : rels) w.push_back(QuadraticPresentation::parse_relation(r, 3, f));
    return QuadraticPresentation(3, f, std::move(w));
}

Scalar eval3(const SkewPoly& f, const std::vector<Scalar>& pt, const FieldPtr& field) {
    Scalar acc = field->zero();
    for (const auto& [m, c] : f.terms()) {
        Scalar t = field->lift(c);
        for (unsigned v = 0; v < 3; ++v)
            if (m[v]) t *= pt[v].pow(static_cast<long>(m[v]));
        acc += t;
    }
    return acc;
}

SkewPoly lift3(const SkewPoly& f, const FieldPtr& target) {
    SkewPoly out(commutative(3, target));
    for (const auto& [m, c] : f.terms()) out.add_term(m, target->lift(c));
    return out;
}

// components re-multiply to f up to one overall scalar
bool remultiplies(const PlaneCubicClassification& cls, const SkewPoly& f) {
    SkewPoly prod = SkewPoly::constant(commutative(3, cls.field), cls.field->one());
    for (const auto& comp : cls.components)
        for (unsigned m = 0; m < comp.multiplicity; ++m) prod = prod * comp.form;
    SkewPoly fl = lift3(f, cls.field);
    if (prod.is_zero() != fl.is_zero()) return false;
    if (prod.is_zero()) return true;
    Scalar cp = prod.terms().begin()->second;
    Scalar cf = fl.terms().begin()->second;
    return prod * cf == fl * cp;
}

unsigned count_type(const PlaneCubicClassification& cls, ComponentType t) {
    unsigned k = 0;
    for (const auto& c : cls.components)
        if (c.type == t) k += c.multiplicity;
    return k;
}

}  // namespace

TEST_CASE("multilinearized matrix of the three-generator elimination") {
    auto q = Field::rationals();
    auto elim = eliminate_y(nvz_spec(q, q->one(), q->integer(2), q->rational(mpq_class(1, 2))));
    auto sys = multilinearize(elim.presentation);

    // M(a) = [[a2, a1, -a3], [2*a3, 0, a1], [0, a3/2, a2]] at a = (5, 7, 11)
    std::vector<Scalar> a{q->integer(5), q->integer(7), q->integer(11)};
    auto m = sys.matrix_at(a);
    CHECK(m[0][0] == q->integer(7));
    CHECK(m[0][1] == q->integer(5));
    CHECK(m[0][2] == q->integer(-11));
    CHECK(m[1][0] == q->integer(22));
    CHECK(m[1][1] == q->zero());
    CHECK(m[1][2] == q->integer(5));
    CHECK(m[2][0] == q->zero());
    CHECK(m[2][1] == q->rational(mpq_class(11, 2)));
    CHECK(m[2][2] == q->integer(7));

    // row r of M(a) against b recovers the bilinear value of relation r
    std::mt19937 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<Scalar> av, bv;
        for (int k = 0; k < 3; ++k) {
            av.push_back(q->integer(static_cast<long>(rng() % 19) - 9));
            bv.push_back(q->integer(static_cast<long>(rng() % 19) - 9));
        }
        auto ma = sys.matrix_at(av);
        for (unsigned r = 0; r < 3; ++r) {
            Scalar dot = q->zero();
            for (unsigned j = 0; j < 3; ++j) dot += ma[r][j] * bv[j];
            CHECK(dot == sys.relation_value(r, av, bv));
        }
    }
}

TEST_CASE("point scheme cubic of the three-generator family") {
    auto q = Field::rationals();
    auto elim = eliminate_y(nvz_spec(q, q->one(), q->integer(2), q->rational(mpq_class(1, 2))));
    auto ps = point_scheme_cubic(multilinearize(elim.presentation));
    REQUIRE(!ps.identically_zero);
    auto mu = commutative(3, q);
    CHECK(ps.cubic == parse_skew_poly("z3^3 + 5/2*z1*z2*z3", mu));

    auto cls = classify_plane_cubic(ps.cubic);
    REQUIRE(cls.components.size() == 2);
    CHECK(count_type(cls, ComponentType::Line) == 1);
    CHECK(count_type(cls, ComponentType::SmoothConic) == 1);
    CHECK(cls.components[0].form == parse_skew_poly("z3", mu));
    CHECK(cls.components[1].form == parse_skew_poly("z3^2 + 5/2*z1*z2", mu));
    CHECK(remultiplies(cls, ps.cubic));
}

TEST_CASE("commuting relations give an identically zero determinant") {
    auto q = Field::rationals();
    auto p = presentation(
        q, {"x1*x2 - x2*x1", "x1*x3 - x3*x1", "x2*x3 - x3*x2"});
    auto ps = point_scheme_cubic(multilinearize(p));
    CHECK(ps.identically_zero);
    CHECK(ps.cubic.is_zero());
}

TEST_CASE("determinant vanishes exactly on the singular parameter points") {
    auto f7 = Field::finite(7);
    auto p = presentation(
        f7, {"x1*x2 + 3*x2*x1 - x3^2", "x1*x3 + 2*x3*x1", "x2*x3 + 4*x3*x2"});
    auto sys = multilinearize(p);
    auto ps = point_scheme_cubic(sys);
    REQUIRE(!ps.identically_zero);
    CHECK(ps.cubic.terms().begin()->second.is_one());

    std::mt19937 rng(11);
    unsigned singular_seen = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Scalar> a;
        for (int k = 0; k < 3; ++k) a.push_back(f7->integer(static_cast<long>(rng() % 7)));
        bool det_zero = eval3(ps.cubic, a, f7).is_zero();
        bool has_nullvector = !nullspace(sys.matrix_at(a), f7).empty();
        CHECK(det_zero == has_nullvector);
        if (det_zero) ++singular_seen;
    }
    CHECK(singular_seen > 0);
}

TEST_CASE("quantum plane regression over Q(i)") {
    auto [i, f] = Field::sqrt_adjoin(Field::rationals()->integer(-1));
    (void)i;
    auto p = presentation(
        f, {"x2^2 - x1^2", "x3*x2 + (s1)*x2*x3", "x2*x1 - x1*x2 - (s1)*x3^2"});
    auto ps = point_scheme_cubic(multilinearize(p));
    REQUIRE(!ps.identically_zero);
    auto mu = commutative(3, f);
    CHECK(ps.cubic == parse_skew_poly("z2^3 - z1^2*z2 + z1*z3^2", mu));

    auto cls = classify_plane_cubic(ps.cubic);
    REQUIRE(cls.components.size() == 1);
    CHECK(cls.components[0].type == ComponentType::IrreducibleCubic);
    CHECK(cls.components[0].singularity == CubicSingularity::Smooth);
    CHECK(remultiplies(cls, ps.cubic));
}

TEST_CASE("random admissible parameters always give a conic plus a line") {
    auto q = Field::rationals();
    std::mt19937 rng(23);
    auto small = [&](bool nonzero) {
        long v;
        do {
            v = static_cast<long>(rng() % 9) - 4;
        } while (nonzero && v == 0);
        return q->integer(v);
    };
    unsigned done = 0;
    while (done < 20) {
        Scalar mu13 = small(true);
        Scalar mu23 = mu13.inverse();
        Scalar mu12 = small(false);
        if ((mu13 + mu12 * mu23).is_zero()) continue;
        auto elim = eliminate_y(nvz_spec(q, mu12, mu13, mu23));
        auto ps = point_scheme_cubic(multilinearize(elim.presentation));
        REQUIRE(!ps.identically_zero);
        auto cls = classify_plane_cubic(ps.cubic);
        REQUIRE(cls.components.size() == 2);
        CHECK(count_type(cls, ComponentType::Line) == 1);
        CHECK(count_type(cls, ComponentType::SmoothConic) == 1);
        CHECK(remultiplies(cls, ps.cubic));
        ++done;
    }
}

TEST_CASE("triple line and line arrangements") {
    auto q = Field::rationals();
    auto mu = commutative(3, q);

    auto triple = classify_plane_cubic(parse_skew_poly("z3^3", mu));
    REQUIRE(triple.components.size() == 1);
    CHECK(triple.components[0].type == ComponentType::Line);
    CHECK(triple.components[0].multiplicity == 3);
    CHECK(remultiplies(triple, parse_skew_poly("z3^3", mu)));

    auto dbl = classify_plane_cubic(parse_skew_poly("z1^2*z2", mu));
    REQUIRE(dbl.components.size() == 2);
    CHECK(count_type(dbl, ComponentType::Line) == 3);
    bool saw_double = false;
    for (const auto& c : dbl.components)
        if (c.multiplicity == 2) saw_double = true;
    CHECK(saw_double);
    CHECK(remultiplies(dbl, parse_skew_poly("z1^2*z2", mu)));

    // three concurrent lines needing a quadratic extension: (z1^2 + z2^2) * z3
    auto split = classify_plane_cubic(parse_skew_poly("z1^2*z3 + z2^2*z3", mu));
    REQUIRE(split.components.size() == 3);
    CHECK(count_type(split, ComponentType::Line) == 3);
    CHECK(split.field->tower_levels() == 1);
    CHECK(remultiplies(split, parse_skew_poly("z1^2*z3 + z2^2*z3", mu)));
}

TEST_CASE("nodal, cuspidal and smooth irreducible cubics") {
    auto q = Field::rationals();
    auto mu = commutative(3, q);

    auto nodal = classify_plane_cubic(parse_skew_poly("z1^3 + z2^3 + z1*z2*z3", mu));
    REQUIRE(nodal.components.size() == 1);
    CHECK(nodal.components[0].type == ComponentType::IrreducibleCubic);
    CHECK(nodal.components[0].singularity == CubicSingularity::Nodal);

    auto cusp = classify_plane_cubic(parse_skew_poly("z2^3 + z1^2*z3", mu));
    REQUIRE(cusp.components.size() == 1);
    CHECK(cusp.components[0].singularity == CubicSingularity::Cuspidal);

    auto smooth = classify_plane_cubic(parse_skew_poly("z1^3 + z2^3 + z3^3", mu));
    REQUIRE(smooth.components.size() == 1);
    CHECK(smooth.components[0].singularity == CubicSingularity::Smooth);

    auto f7 = Field::finite(7);
    auto mu7 = commutative(3, f7);
    auto nodal7 = classify_plane_cubic(parse_skew_poly("z1^3 + z2^3 + z1*z2*z3", mu7));
    REQUIRE(nodal7.components.size() == 1);
    CHECK(nodal7.components[0].singularity == CubicSingularity::Nodal);
}

TEST_CASE("smooth conic times a transverse line") {
    auto q = Field::rationals();
    auto mu = commutative(3, q);
    SkewPoly f = parse_skew_poly("z1*z2 - z3^2", mu) * parse_skew_poly("z1 + z2 + z3", mu);
    auto cls = classify_plane_cubic(f);
    REQUIRE(cls.components.size() == 2);
    CHECK(count_type(cls, ComponentType::Line) == 1);
    CHECK(count_type(cls, ComponentType::SmoothConic) == 1);
    CHECK(remultiplies(cls, f));
}

TEST_CASE("degenerate and rejected inputs") {
    auto q = Field::rationals();
    auto mu = commutative(3, q);

    auto zero = classify_plane_cubic(SkewPoly::zero(mu));
    CHECK(zero.identically_zero);
    CHECK(zero.components.empty());

    CHECK_THROWS_AS(classify_plane_cubic(parse_skew_poly("z1^4", mu)), MathError);

    auto mu3 = commutative(3, Field::finite(3));
    CHECK_THROWS_AS(classify_plane_cubic(parse_skew_poly("z1^3 + z2^3 + z3^3", mu3)), MathError);

    auto p2 = QuadraticPresentation(
        2, q, {QuadraticPresentation::parse_relation("x1*x2 + x2*x1", 2, q)});
    CHECK_THROWS_AS(multilinearize(p2), MathError);
}
