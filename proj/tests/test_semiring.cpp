#include "doctest.h"

#include "alambda/semiring.hpp"
#include "support/gen.hpp"

using namespace alambda;
using testgen::Rng;

TEST_CASE("addition per semiring") {
    CHECK(Coeff::from_long(Semiring::Nat, 2).add(Coeff::from_long(Semiring::Nat, 3)) ==
          Coeff::from_long(Semiring::Nat, 5));
    CHECK(Coeff::one(Semiring::Bool).add(Coeff::one(Semiring::Bool)) ==
          Coeff::one(Semiring::Bool));
    CHECK(Coeff::from_fraction(1, 2).add(Coeff::from_fraction(1, 2)) ==
          Coeff::one(Semiring::NonnegRat));
}

TEST_CASE("multiplication per semiring") {
    CHECK(Coeff::from_long(Semiring::Nat, 2).mul(Coeff::from_long(Semiring::Nat, 3)) ==
          Coeff::from_long(Semiring::Nat, 6));
    for (Semiring s : {Semiring::Nat, Semiring::NonnegRat, Semiring::Bool, Semiring::Int}) {
        Coeff a = Coeff::from_long(s, 1);
        CHECK(Coeff::one(s).mul(a) == a);
    }
    CHECK(Coeff::from_fraction(1, 2).mul(Coeff::from_fraction(2, 3)) ==
          Coeff::from_fraction(1, 3));
}

TEST_CASE("mixed semirings are a usage error") {
    CHECK_THROWS_AS(Coeff::one(Semiring::Nat).add(Coeff::one(Semiring::Bool)),
                    UsageError);
    CHECK_THROWS_AS(Coeff::one(Semiring::Int).mul(Coeff::one(Semiring::Nat)),
                    UsageError);
}

TEST_CASE("literals") {
    CHECK(Coeff::parse("5", Semiring::Nat).str() == "5");
    CHECK(Coeff::parse("-3", Semiring::Int).str() == "-3");
    CHECK_THROWS_AS(Coeff::parse("-3", Semiring::Nat), ParseError);
    CHECK(Coeff::parse("2/4", Semiring::NonnegRat) == Coeff::from_fraction(1, 2));
    CHECK(Coeff::parse("2/4", Semiring::NonnegRat).str() == "1/2"); // lowest terms
    CHECK_THROWS_AS(Coeff::parse("1/2", Semiring::Nat), ParseError);
    CHECK(Coeff::parse("T", Semiring::Bool).is_one());
    CHECK(Coeff::parse("F", Semiring::Bool).is_zero());
    CHECK_THROWS_AS(Coeff::parse("T", Semiring::Nat), ParseError);
    CHECK_THROWS_AS(Coeff::parse("1/0", Semiring::NonnegRat), ParseError);
    // arbitrary precision round trip
    std::string big = "123456789012345678901234567890123456789";
    CHECK(Coeff::parse(big, Semiring::Nat).str() == big);
}

TEST_CASE("positivity probe finds (1, -1) over int") {
    std::vector<std::pair<Coeff, Coeff>> samples{
        {Coeff::from_long(Semiring::Int, 2), Coeff::from_long(Semiring::Int, 3)},
        {Coeff::from_long(Semiring::Int, 1), Coeff::from_long(Semiring::Int, -1)},
    };
    auto v = positivity_probe(Semiring::Int, samples);
    auto* cex = std::get_if<PositivityCounterexample>(&v);
    REQUIRE(cex != nullptr);
    CHECK(cex->a == Coeff::from_long(Semiring::Int, 1));
    CHECK(cex->b == Coeff::from_long(Semiring::Int, -1));
}

TEST_CASE("positivity probe passes on bool exhaustively") {
    std::vector<std::pair<Coeff, Coeff>> samples;
    for (long a = 0; a <= 1; ++a)
        for (long b = 0; b <= 1; ++b)
            samples.emplace_back(Coeff::from_long(Semiring::Bool, a),
                                 Coeff::from_long(Semiring::Bool, b));
    CHECK(std::holds_alternative<std::monostate>(
        positivity_probe(Semiring::Bool, samples)));
}

TEST_CASE("bool laws, exhaustively") {
    Semiring B = Semiring::Bool;
    std::vector<Coeff> all{Coeff::zero(B), Coeff::one(B)};
    for (const Coeff& a : all)
        for (const Coeff& b : all) {
            CHECK(a.add(b) == b.add(a));
            CHECK(a.mul(b) == b.mul(a));
            if (a.add(b).is_zero()) {
                CHECK(a.is_zero());
                CHECK(b.is_zero());
            }
            for (const Coeff& c : all) {
                CHECK(a.add(b.add(c)) == a.add(b).add(c));
                CHECK(a.mul(b.add(c)) == a.mul(b).add(a.mul(c)));
            }
        }
    for (const Coeff& a : all) {
        CHECK(a.add(Coeff::zero(B)) == a);
        CHECK(a.mul(Coeff::one(B)) == a);
        CHECK(a.mul(Coeff::zero(B)).is_zero());
    }
}

TEST_CASE("semiring laws on random samples") {
    for (Semiring s : {Semiring::Nat, Semiring::NonnegRat, Semiring::Int}) {
        Rng rng(42 + static_cast<int>(s));
        for (int i = 0; i < 1000; ++i) {
            Coeff a = testgen::random_coeff(rng, s);
            Coeff b = testgen::random_coeff(rng, s);
            Coeff c = testgen::random_coeff(rng, s);
            CHECK(a.add(b) == b.add(a));
            CHECK(a.add(b.add(c)) == a.add(b).add(c));
            CHECK(a.mul(b.add(c)) == a.mul(b).add(a.mul(c)));
            CHECK(a.add(Coeff::zero(s)) == a);
            CHECK(a.mul(Coeff::one(s)) == a);
            if (is_positive(s) && a.add(b).is_zero()) {
                CHECK(a.is_zero());
                CHECK(b.is_zero());
            }
        }
    }
}

TEST_CASE("equality is exact and agrees with normalized fractions") {
    CHECK(Coeff::from_fraction(2, 6) == Coeff::from_fraction(1, 3));
    CHECK(Coeff::from_fraction(1, 3) != Coeff::from_fraction(1, 2));
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        Coeff a = testgen::random_coeff(rng, Semiring::NonnegRat);
        CHECK(a == a);
        Coeff b = testgen::random_coeff(rng, Semiring::NonnegRat);
        CHECK((a == b) == (b == a));
    }
}
