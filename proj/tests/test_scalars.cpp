#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sck/scalar.hpp"

using namespace sck;

namespace {

Scalar random_element(const FieldPtr& f, std::mt19937& rng) {
    if (f->kind() == FieldKind::Finite) {
        std::uniform_int_distribution<long> d(0, static_cast<long>(f->characteristic()) - 1);
        Scalar s = f->zero();
        Scalar g = f->ext_degree() > 1 ? f->generator() : f->one();
        Scalar pw = f->one();
        for (unsigned i = 0; i < f->ext_degree(); ++i) {
            s += f->integer(d(rng)) * pw;
            pw = pw * g;
        }
        return s;
    }
    std::uniform_int_distribution<long> num(-20, 20);
    std::uniform_int_distribution<long> den(1, 9);
    Scalar s = f->rational(mpq_class(num(rng), den(rng)));
    for (unsigned k = 1; k <= f->tower_levels(); ++k)
        s += f->rational(mpq_class(num(rng), den(rng))) * f->tower_root(k);
    return s;
}

void check_axioms(const FieldPtr& f, int trials, unsigned seed) {
    std::mt19937 rng(seed);
    for (int t = 0; t < trials; ++t) {
        Scalar a = random_element(f, rng);
        Scalar b = random_element(f, rng);
        Scalar c = random_element(f, rng);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + f->zero() == a);
        CHECK(a * f->one() == a);
        CHECK((a - a).is_zero());
        if (!a.is_zero()) {
            CHECK((a * a.inverse()).is_one());
            CHECK(a / a == f->one());
        }
    }
}

}  // namespace

TEST_CASE("rational field axioms") {
    check_axioms(Field::rationals(), 350, 1);
}

TEST_CASE("prime field matches integer arithmetic mod p") {
    auto f = Field::finite(101);
    std::mt19937 rng(2);
    std::uniform_int_distribution<long> d(-5000, 5000);
    for (int t = 0; t < 1000; ++t) {
        long a = d(rng), b = d(rng);
        CHECK(f->integer(a) + f->integer(b) == f->integer(a + b));
        CHECK(f->integer(a) * f->integer(b) == f->integer(a * b));
        CHECK(f->integer(a) - f->integer(b) == f->integer(a - b));
    }
    check_axioms(f, 300, 3);
}

TEST_CASE("extension field axioms") {
    check_axioms(Field::finite(5, 2), 300, 4);
    check_axioms(Field::finite(3, 4), 300, 5);
    check_axioms(Field::finite(7, 3), 200, 6);
}

TEST_CASE("modulus is canonical and generator satisfies it") {
    auto f = Field::finite(3, 2);
    // x^2 + 1 is the least irreducible over F_3 when (c0, c1) is read base 3
    Scalar g = f->generator();
    CHECK((g * g + f->one()).is_zero());
    auto f5 = Field::finite(5, 2);
    Scalar h = f5->generator();
    // x^2 + 2 over F_5
    CHECK((h * h + f5->integer(2)).is_zero());
}

TEST_CASE("square roots without extension") {
    auto q = Field::rationals();
    auto [r, f] = Field::sqrt_adjoin(q->integer(4));
    CHECK(f->same(*q));
    CHECK(r == q->integer(2));
    auto [r2, f2] = Field::sqrt_adjoin(q->rational(mpq_class(9, 16)));
    CHECK(f2->same(*q));
    CHECK(r2 == q->rational(mpq_class(3, 4)));
}

TEST_CASE("adjoining i") {
    auto q = Field::rationals();
    auto [i, f] = Field::sqrt_adjoin(q->integer(-1));
    CHECK(f->tower_levels() == 1);
    CHECK((i * i + f->one()).is_zero());
    CHECK(f->sqrt_in_field(f->integer(-1)).has_value());
}

TEST_CASE("adjoining sqrt(2)") {
    auto q = Field::rationals();
    auto [s, f] = Field::sqrt_adjoin(q->integer(2));
    CHECK((s * s - f->integer(2)).is_zero());
    check_axioms(f, 200, 7);
    // sqrt of 8 now lands in the same field: 2*s
    auto r = f->sqrt_in_field(f->integer(8));
    REQUIRE(r.has_value());
    CHECK(*r == 2 * s);
    // sqrt of 3 does not
    CHECK(!f->sqrt_in_field(f->integer(3)).has_value());
}

TEST_CASE("stacked adjunctions") {
    auto q = Field::rationals();
    auto [s1, f1] = Field::sqrt_adjoin(q->integer(2));
    auto [s2, f2] = Field::sqrt_adjoin(f1->integer(3));
    CHECK(f2->tower_levels() == 2);
    Scalar a = f2->lift(s1) + s2;  // sqrt2 + sqrt3
    Scalar sq = a * a;             // 5 + 2 sqrt6
    CHECK(sq - f2->integer(5) == 2 * (f2->lift(s1) * s2));
    // sqrt(5 + 2 sqrt6) = sqrt2 + sqrt3, already in the field
    auto r = f2->sqrt_in_field(sq);
    REQUIRE(r.has_value());
    CHECK((*r == a || *r == -a));
    check_axioms(f2, 120, 8);
}

TEST_CASE("tower cap is enforced") {
    auto f = Field::rationals();
    Scalar dummy = f->zero();
    FieldPtr cur = f;
    for (long p : {2L, 3L, 5L}) {
        auto [r, g] = Field::sqrt_adjoin(cur->integer(p), 3);
        cur = g;
        dummy = r;
    }
    CHECK(cur->tower_levels() == 3);
    CHECK_THROWS_AS(Field::sqrt_adjoin(cur->integer(7), 3), MathError);
}

TEST_CASE("canonical zero recognition") {
    auto q = Field::rationals();
    auto [s, f] = Field::sqrt_adjoin(q->integer(2));
    CHECK((s * s - f->integer(2)).is_zero());
    CHECK((q->rational(mpq_class(1, 3)) + q->rational(mpq_class(2, 3)) - q->one()).is_zero());
    auto [i, fi] = Field::sqrt_adjoin(q->integer(-1));
    CHECK((i * i + fi->one()).is_zero());
}

TEST_CASE("finite field square roots") {
    auto f = Field::finite(7);
    auto r = f->sqrt_in_field(f->integer(2));
    REQUIRE(r.has_value());
    CHECK((*r) * (*r) == f->integer(2));
    CHECK(!f->sqrt_in_field(f->integer(3)).has_value());
    // extension doubles the degree and the root squares back
    auto [s, g] = Field::sqrt_adjoin(f->integer(3));
    CHECK(g->ext_degree() == 2);
    CHECK(s * s == g->lift(f->integer(3)));
    // sqrt is deterministic
    auto r2 = f->sqrt_in_field(f->integer(2));
    CHECK(*r == *r2);
}

TEST_CASE("finite extension chains lift consistently") {
    auto f = Field::finite(3, 2);
    // pick a non-square so adjoining really extends
    Scalar ns = f->generator() + f->one();
    REQUIRE(!f->sqrt_in_field(ns).has_value());
    auto [s, g] = Field::sqrt_adjoin(ns);
    CHECK(g->ext_degree() == 4);
    CHECK(s * s == g->lift(ns));
    // lifting is a homomorphism
    std::mt19937 rng(9);
    for (int t = 0; t < 50; ++t) {
        Scalar a = random_element(f, rng), b = random_element(f, rng);
        CHECK(g->lift(a * b) == g->lift(a) * g->lift(b));
        CHECK(g->lift(a + b) == g->lift(a) + g->lift(b));
    }
}

TEST_CASE("mixed-context arithmetic promotes automatically") {
    auto q = Field::rationals();
    auto [s, f] = Field::sqrt_adjoin(q->integer(2));
    Scalar sum = q->integer(1) + s;
    CHECK(sum.field()->same(*f));
    CHECK(sum * sum == f->integer(3) + 2 * s);
    auto fin1 = Field::finite(5);
    auto fin2 = Field::finite(5, 2);
    CHECK_THROWS_AS(fin1->one() + q->one(), MathError);
    // F_5 and F_25 built independently are unrelated unless chained
    bool ok = !fin2->extends(*fin1) || fin2->lift(fin1->one()) == fin2->one();
    CHECK(ok);
}

TEST_CASE("parser round trips") {
    auto q = Field::rationals();
    CHECK(q->parse("3/4") == q->rational(mpq_class(3, 4)));
    CHECK(q->parse("-2") == q->integer(-2));
    CHECK(q->parse("2^10") == q->integer(1024));
    CHECK(q->parse("1/2 + 1/3") == q->rational(mpq_class(5, 6)));
    auto [s, f] = Field::sqrt_adjoin(q->integer(2));
    CHECK(f->parse("(1+2*s1)/3") == (f->one() + 2 * s) / f->integer(3));
    CHECK(f->parse("s1^2") == f->integer(2));
    auto g = Field::finite(5, 2);
    CHECK(g->parse("g^2+1") == g->generator() * g->generator() + g->one());
    CHECK_THROWS_AS(q->parse("3//4"), ParseError);
    CHECK_THROWS_AS(q->parse("s1"), MathError);
}

TEST_CASE("string output is stable") {
    auto q = Field::rationals();
    CHECK(q->integer(-7).str() == "-7");
    CHECK(q->rational(mpq_class(3, 4)).str() == "3/4");
    auto [s, f] = Field::sqrt_adjoin(q->integer(2));
    CHECK((f->one() + s).str() == "1 + s1");
    CHECK((-s).str() == "-s1");
    CHECK(f->parse((f->integer(2) - 3 * s).str()) == f->integer(2) - 3 * s);
}

TEST_CASE("as_rational and cmp") {
    auto q = Field::rationals();
    auto [s, f] = Field::sqrt_adjoin(q->integer(2));
    CHECK(f->integer(5).as_rational().value() == 5);
    CHECK(!s.as_rational().has_value());
    CHECK(q->integer(1).cmp(q->integer(2)) < 0);
    CHECK(q->integer(2).cmp(q->integer(2)) == 0);
    std::mt19937 rng(10);
    for (int t = 0; t < 100; ++t) {
        Scalar a = random_element(f, rng), b = random_element(f, rng);
        CHECK(a.cmp(b) == -b.cmp(a));
        if (a.cmp(b) == 0) CHECK(a == b);
    }
}

TEST_CASE("division by zero and bad fields throw") {
    auto q = Field::rationals();
    CHECK_THROWS_AS(q->one() / q->zero(), MathError);
    CHECK_THROWS_AS(q->zero().inverse(), MathError);
    CHECK_THROWS_AS(Field::finite(2), MathError);
    CHECK_THROWS_AS(Field::finite(4), MathError);
    auto f = Field::finite(3);
    CHECK_THROWS_AS(f->zero().inverse(), MathError);
    CHECK_THROWS_AS(f->rational(mpq_class(1, 3)), MathError);
}
