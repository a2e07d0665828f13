#include "doctest.h"

#include "alambda/algebra.hpp"
#include "support/gen.hpp"

using namespace alambda;
using testgen::Rng;

namespace {
const Semiring N = Semiring::Nat;

AlgebraicTerm canon(const char* text, Semiring ring = N) {
    return canonicalize(parse(text, ring), ring);
}
} // namespace

TEST_CASE("canonicalize: the linearity axioms in action") {
    CHECK(canon("λx.0").is_zero());
    CHECK(canon("(0)y").is_zero());

    // a sum in function position distributes, the argument stays whole
    auto t = canonicalize(rapp(rsum(rlam(rbound(0)), rlam(rvar("y"))), rvar("z")), N);
    CHECK(t.support_size() == 2);
    CHECK(t == canon("(λx.x)z + (λx.y)z"));

    CHECK(canon("2.x + 3.x") ==
          AlgebraicTerm::singleton(svar("x"), Coeff::from_long(N, 5)));

    auto u = canon("(y+z)(y+z)");
    CHECK(u.support_size() == 2);
    CHECK(u == canon("(y)(y+z) + (z)(y+z)"));
    CHECK(print(u) == "(y)(y + z) + (z)(y + z)");
}

TEST_CASE("embed and as_pure") {
    for (const char* s : {"y", "λx.(x)x", "(λx.x)y"}) {
        PurePtr m = parse_pure(s);
        AlgebraicTerm e = embed(m, N);
        CHECK(e.support_size() == 1);
        CHECK(e.entries()[0].second.is_one());
        CHECK(e == canonicalize(from_pure(m), N));
        auto back = as_pure(e);
        REQUIRE(back.has_value());
        CHECK(equal(*back, m));
    }
    CHECK(!as_pure(canon("y + z")).has_value());
    AlgebraicTerm half = AlgebraicTerm::singleton(svar("y"), Coeff::from_fraction(1, 2));
    CHECK(!as_pure(half).has_value());
    // coefficient 1 but a non-singleton argument deep inside
    CHECK(!as_pure(canon("(x)(y+z)")).has_value());
}

TEST_CASE("module operations") {
    auto y = embed(parse_pure("y"), N);
    CHECK(y.plus(y) == AlgebraicTerm::singleton(svar("y"), Coeff::from_long(N, 2)));
    CHECK(canon("y+z").scaled(Coeff::zero(N)).is_zero());
    auto h = Coeff::from_fraction(1, 2);
    auto yz = canon("y+z", Semiring::NonnegRat).scaled(h);
    CHECK(yz.coeff_of(svar("y")) == h);
    CHECK(yz.coeff_of(svar("z")) == h);
    CHECK_THROWS_AS(y.plus(canon("y", Semiring::Bool)), UsageError);
}

TEST_CASE("support") {
    CHECK(support(AlgebraicTerm(N)).empty());
    auto sup = support(canon("y+z"));
    REQUIRE(sup.size() == 2);
    CHECK(equal(sup[0], svar("y")));
    CHECK(equal(sup[1], svar("z")));
    auto sup2 = support(canon("(y+z)(y+z)"));
    REQUIRE(sup2.size() == 2);
    CHECK(print(sup2[0]) == "(y)(y + z)");
    CHECK(print(sup2[1]) == "(z)(y + z)");
}

TEST_CASE("substitution distributes and re-canonicalizes") {
    auto body = canon("(x)x");
    auto repl = canon("y+z");
    CHECK(subst(body, "x", repl) == canon("(y+z)(y+z)"));

    CHECK(subst(canon("y"), "x", repl) == canon("y"));
    CHECK(subst(canon("x"), "x", AlgebraicTerm(N)).is_zero());
}

TEST_CASE("substitution commutes with embedding on pure terms") {
    Rng rng(2024);
    for (int i = 0; i < 300; ++i) {
        PurePtr m = testgen::random_pure(rng, 8);
        PurePtr p = testgen::random_pure(rng, 6);
        std::string x = testgen::free_names()[rng.below(3)];
        CHECK(embed(subst_free(m, x, p), N) == subst(embed(m, N), x, embed(p, N)));
    }
}

TEST_CASE("extraction of pure terms from combinations") {
    auto ls = lambda_support(canon("(λx.(x)x)(y+z)"));
    REQUIRE(ls.size() == 2);
    CHECK(print(ls[0]) == "(λx.(x)x)y");
    CHECK(print(ls[1]) == "(λx.(x)x)z");

    auto ls2 = lambda_support(canon("(y+z)(y+z)"));
    REQUIRE(ls2.size() == 4);
    bool has_yz = false;
    for (auto& m : ls2) has_yz = has_yz || equal(m, parse_pure("(y)z"));
    CHECK(has_yz);

    // an empty combination admits no choice
    CHECK(lambda_support(canon("(x)0")).empty());

    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        PurePtr m = testgen::random_pure(rng, 8);
        auto only = lambda_support(embed(m, N));
        REQUIRE(only.size() == 1);
        CHECK(equal(only[0], m));
    }
}

TEST_CASE("canonicalize is stable under readback") {
    for (Semiring ring : {Semiring::Nat, Semiring::NonnegRat, Semiring::Bool,
                          Semiring::Int}) {
        Rng rng(31 + static_cast<int>(ring));
        for (int i = 0; i < 250; ++i) {
            AlgebraicTerm s = testgen::random_alg(rng, ring, 10);
            CHECK(canonicalize(readback(s), ring) == s);
            for (const auto& [u, c] : s.entries()) CHECK(!c.is_zero());
        }
    }
}

TEST_CASE("rewrites by the axioms never change the canonical form") {
    Rng rng(123);
    for (int axiom = 0; axiom < testgen::kNumRewrites; ++axiom) {
        for (int i = 0; i < 100; ++i) {
            RawPtr host = testgen::random_raw(rng, N, 8);
            auto positions = testgen::positions_of(host);
            auto [pos, depth] = positions[rng.below(positions.size())];
            auto [lhs, rhs] = testgen::make_rewrite(rng, N, axiom, depth);
            RawPtr a = testgen::replace_at(host, pos, 0, lhs);
            RawPtr b = testgen::replace_at(host, pos, 0, rhs);
            CAPTURE(axiom);
            CHECK(canonicalize(a, N) == canonicalize(b, N));
        }
    }
}

TEST_CASE("module laws hold on canonical forms") {
    Rng rng(321);
    for (int i = 0; i < 200; ++i) {
        auto a = testgen::random_alg(rng, N, 8);
        auto b = testgen::random_alg(rng, N, 8);
        auto c = testgen::random_alg(rng, N, 8);
        Coeff k = testgen::random_coeff(rng, N);
        CHECK(a.plus(b) == b.plus(a));
        CHECK(a.plus(b.plus(c)) == a.plus(b).plus(c));
        CHECK(a.plus(AlgebraicTerm(N)) == a);
        CHECK(a.plus(b).scaled(k) == a.scaled(k).plus(b.scaled(k)));
        CHECK(a.scaled(Coeff::one(N)) == a);
    }
}

TEST_CASE("support is empty exactly for the zero term") {
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        auto s = testgen::random_alg(rng, N, 8);
        CHECK(support(s).empty() == s.is_zero());
    }
}
