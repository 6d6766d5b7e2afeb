#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sck/freealg.hpp"

using namespace sck;

namespace {

QuadraticPresentation commutator_presentation(unsigned n, const FieldPtr& field) {
    std::vector<std::vector<Scalar>> w;
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = i + 1; j < n; ++j) {
            std::vector<Scalar> rel(std::size_t(n) * n, field->zero());
            rel[std::size_t(i) * n + j] = field->one();
            rel[std::size_t(j) * n + i] = -field->one();
            w.push_back(std::move(rel));
        }
    return QuadraticPresentation(n, field, std::move(w));
}

bool same_span(const std::vector<SkewPoly>& a, const std::vector<SkewPoly>& b, unsigned n) {
    DegreeBasis basis(n, 2);
    RowSpace sa, sb;
    for (const auto& p : a) sa.insert(p.to_row(basis));
    for (const auto& p : b) sb.insert(p.to_row(basis));
    if (sa.rank() != sb.rank()) return false;
    for (const auto& p : a)
        if (!sb.contains(p.to_row(basis))) return false;
    return true;
}

}  // namespace

TEST_CASE("polynomial ring dimensions") {
    auto q = Field::rationals();
    auto dims = algebra_dims(commutator_presentation(3, q), 4);
    CHECK(dims == std::vector<std::uint64_t>{1, 3, 6, 10, 15});
}

TEST_CASE("free algebra dimensions") {
    auto q = Field::rationals();
    QuadraticPresentation p(2, q, {});
    auto dims = algebra_dims(p, 3);
    CHECK(dims == std::vector<std::uint64_t>{1, 2, 4, 8});
}

TEST_CASE("three-generator algebra with twisted relations has polynomial growth") {
    // relations x2^2 = x1^2, x3*x2 = -i*x2*x3, x2*x1 - x1*x2 = i*x3^2
    auto [i, f] = Field::sqrt_adjoin(Field::rationals()->integer(-1));
    std::vector<std::vector<Scalar>> w{
        QuadraticPresentation::parse_relation("x2^2 - x1^2", 3, f),
        QuadraticPresentation::parse_relation("x3*x2 + (s1)*x2*x3", 3, f),
        QuadraticPresentation::parse_relation("x2*x1 - x1*x2 - (s1)*x3^2", 3, f),
    };
    QuadraticPresentation p(3, f, std::move(w));
    auto dims = algebra_dims(p, 5);
    CHECK(dims == std::vector<std::uint64_t>{1, 3, 6, 10, 15, 21});
}

TEST_CASE("full relation space kills everything") {
    auto q = Field::rationals();
    std::vector<std::vector<Scalar>> w;
    for (unsigned k = 0; k < 4; ++k) {
        std::vector<Scalar> rel(4, q->zero());
        rel[k] = q->one();
        w.push_back(std::move(rel));
    }
    QuadraticPresentation p(2, q, std::move(w));
    auto dims = algebra_dims(p, 3);
    CHECK(dims == std::vector<std::uint64_t>{1, 2, 0, 0});
    auto mu = std::make_shared<MuParams>(MuParams::ones(2, q));
    auto kp = koszul_orthogonal(p, mu);
    CHECK(kp.w_perp.empty());
}

TEST_CASE("orthogonal complement has complementary dimension") {
    auto q = Field::rationals();
    std::mt19937 rng(21);
    std::uniform_int_distribution<long> coef(-3, 3);
    std::uniform_int_distribution<int> cnt(0, 5);
    for (int t = 0; t < 30; ++t) {
        unsigned n = 3;
        std::vector<std::vector<Scalar>> w;
        int k = cnt(rng);
        for (int r = 0; r < k; ++r) {
            std::vector<Scalar> rel(std::size_t(n) * n, q->zero());
            for (auto& c : rel) c = q->integer(coef(rng));
            w.push_back(std::move(rel));
        }
        QuadraticPresentation p(n, q, std::move(w));
        auto mu = std::make_shared<MuParams>(MuParams::ones(n, q));
        auto kp = koszul_orthogonal(p, mu);
        CHECK(p.dim_w() + kp.w_perp.size() == std::size_t(n) * n);
    }
}

TEST_CASE("dual quadric system of a two-generator Clifford presentation") {
    auto q = Field::rationals();
    Scalar lam = q->integer(2);
    std::vector<std::vector<Scalar>> w{
        QuadraticPresentation::parse_relation("x1*x2 + x2*x1 - 2*x1^2", 2, q)};
    QuadraticPresentation p(2, q, std::move(w));
    auto mu = std::make_shared<MuParams>(MuParams::ones(2, q));
    auto kp = koszul_orthogonal(p, mu);
    REQUIRE(kp.compatible);
    CHECK(kp.w_perp.size() == 3);
    CHECK(kp.q_part.size() == 2);
    // span must equal {2z1^2 + 2*lam*z1z2, z2^2}
    std::vector<SkewPoly> expect{
        parse_skew_poly("2*z1^2 + 4*z1*z2", mu),
        parse_skew_poly("z2^2", mu),
    };
    CHECK(same_span(kp.q_part, expect, 2));
    (void)lam;
}

TEST_CASE("incompatible commutation space is reported") {
    // commutators are not orthogonal to themselves, so the polynomial ring
    // presentation is not dual to a quotient of the commutative S
    auto q = Field::rationals();
    auto p = commutator_presentation(2, q);
    auto mu = std::make_shared<MuParams>(MuParams::ones(2, q));
    auto kp = koszul_orthogonal(p, mu);
    CHECK(!kp.compatible);
}

TEST_CASE("relation parser") {
    auto q = Field::rationals();
    auto rel = QuadraticPresentation::parse_relation("x1*x2 + (1/2)*x2*x1 - x3^2", 3, q);
    CHECK(rel[0 * 3 + 1] == q->one());
    CHECK(rel[1 * 3 + 0] == q->rational(mpq_class(1, 2)));
    CHECK(rel[2 * 3 + 2] == q->integer(-1));
    std::string s = QuadraticPresentation::relation_str(rel, 3);
    CHECK(QuadraticPresentation::parse_relation(s, 3, q) == rel);
    CHECK_THROWS_AS(QuadraticPresentation::parse_relation("x1 + x2", 3, q), ParseError);
    CHECK_THROWS_AS(QuadraticPresentation::parse_relation("x1*x2*x3", 3, q), ParseError);
}
