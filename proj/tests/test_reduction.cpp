#include "doctest.h"

#include "alambda/reduction.hpp"
#include "support/gen.hpp"

using namespace alambda;
using testgen::Rng;

namespace {
const Semiring N = Semiring::Nat;

AlgebraicTerm canon(const char* text, Semiring ring = N) {
    return canonicalize(parse(text, ring), ring);
}
} // namespace

TEST_CASE("beta_reducts, leftmost-outermost first") {
    auto r1 = beta_reducts(parse_pure("(λx.x)y"));
    REQUIRE(r1.size() == 1);
    CHECK(equal(r1[0].second, parse_pure("y")));

    CHECK(beta_reducts(parse_pure("λx.x")).empty());

    auto r2 = beta_reducts(parse_pure("(λx.(x)x)((λy.y)z)"));
    REQUIRE(r2.size() == 2);
    CHECK(equal(r2[0].second, parse_pure("((λy.y)z)((λy.y)z)"))); // outer first
    CHECK(equal(r2[1].second, parse_pure("(λx.(x)x)z")));
}

TEST_CASE("beta_reaches") {
    auto t1 = beta_reaches(parse_pure("(λx.x)y"), parse_pure("y"), 10);
    REQUIRE(t1.has_value());
    CHECK(t1->steps.size() == 1);
    CHECK(validate(*t1));

    auto t2 = beta_reaches(parse_pure("y"), parse_pure("y"), 0);
    REQUIRE(t2.has_value());
    CHECK(t2->steps.empty());

    auto t3 = beta_reaches(parse_pure("(λx.(x)x)y"), parse_pure("(y)y"), 10);
    REQUIRE(t3.has_value());
    CHECK(t3->steps.size() == 1);

    // unreachable target within a finite graph: budget verdict, not a crash
    CHECK(!beta_reaches(parse_pure("(λx.x)y"), parse_pure("z"), 50).has_value());
    // divergent term, budget exhausts
    CHECK(!beta_reaches(parse_pure("(λx.(x)x)λx.(x)x"), parse_pure("y"), 30)
               .has_value());
}

TEST_CASE("simple_reducts: the running example") {
    auto sigma = canon("(λx.(x)x)(y+z)");
    REQUIRE(sigma.support_size() == 1);
    auto rs = simple_reducts(sigma.entries()[0].first, N);
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].second == canon("(y+z)(y+z)"));

    CHECK(simple_reducts(svar("x"), N).empty());

    auto lam = canon("λx.(λy.y)x");
    auto rs2 = simple_reducts(lam.entries()[0].first, N);
    REQUIRE(rs2.size() == 1);
    CHECK(rs2[0].second == embed(parse_pure("λx.x"), N));
}

TEST_CASE("alg_reducts with split policies") {
    // half split over rat+: M = 1/2.M + 1/2.M ~> 1/2.M' + 1/2.M
    Semiring Q = Semiring::NonnegRat;
    auto m = embed(parse_pure("(λx.x)y", Q), Q);
    auto rs = alg_reducts(m, SplitPolicy{SplitPolicy::Name::Half});
    REQUIRE(rs.size() == 2); // full and half
    Coeff h = Coeff::from_fraction(1, 2);
    auto expect_half = embed(parse_pure("y"), Q).scaled(h).plus(m.scaled(h));
    CHECK(rs[1].second == expect_half);
    CHECK(rs[1].first.split == h);
    CHECK(rs[1].first.residual == h);

    CHECK(alg_reducts(AlgebraicTerm(N), {}).empty());

    // unit splits over nat
    auto two = embed(parse_pure("(λx.x)y"), N).scaled(Coeff::from_long(N, 2));
    auto rs2 = alg_reducts(two, SplitPolicy{SplitPolicy::Name::Unit});
    REQUIRE(rs2.size() == 2);
    CHECK(rs2[0].second == embed(parse_pure("y"), N).scaled(Coeff::from_long(N, 2)));
    auto one_each = embed(parse_pure("y"), N).plus(embed(parse_pure("(λx.x)y"), N));
    CHECK(rs2[1].second == one_each);
}

TEST_CASE("unit splits fall back to the full split beyond the cap") {
    Coeff huge = Coeff::parse("123456789012345678901234567890", N);
    auto big = embed(parse_pure("(λx.x)y"), N).scaled(huge);
    auto rs = alg_reducts(big, SplitPolicy{SplitPolicy::Name::Unit});
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].first.split == huge);
    CHECK(rs[0].first.residual.is_zero());
}

TEST_CASE("trace steps revalidate from scratch") {
    Rng rng(404);
    for (int i = 0; i < 100; ++i) {
        AlgebraicTerm cur = testgen::random_alg(rng, N, 8);
        AlgTrace trace{cur, {}};
        for (int k = 0; k < 4; ++k) {
            auto rs = alg_reducts(cur, SplitPolicy{SplitPolicy::Name::Unit});
            if (rs.empty()) break;
            auto& [step, result] = rs[rng.below(rs.size())];
            trace.steps.push_back(
                {step, *apply_step(step.selected, *step.inner, N), result});
            cur = result;
        }
        CHECK(validate(trace));
        if (!trace.steps.empty()) {
            // tampering breaks replay
            AlgTrace bad = trace;
            bad.steps.back().result = bad.steps.back().result.plus(
                AlgebraicTerm::singleton(svar("x"), Coeff::one(N)));
            CHECK(!validate(bad));
        }
    }
}

TEST_CASE("the one-step relations agree through the embedding") {
    Rng rng(2718);
    for (int i = 0; i < 200; ++i) {
        PurePtr m = testgen::random_pure(rng, 9);
        auto betas = beta_reducts(m);
        auto algs = alg_reducts(embed(m, N), {});
        REQUIRE(betas.size() == algs.size());
        // same multiset of results, not necessarily the same order
        for (auto& [pos, r] : betas) {
            bool found = false;
            for (auto& [step, s] : algs) found = found || s == embed(r, N);
            CHECK(found);
        }
        for (auto& [step, s] : algs) CHECK(as_pure(s).has_value());
    }
}

TEST_CASE("contracting under a binder lifts the argument's indices") {
    // the argument (x)x references the enclosing binder and lands under λz
    auto m = parse_pure("λx.(λy.λz.y)(x)x");
    auto rs = beta_reducts(m);
    REQUIRE(rs.size() == 1);
    CHECK(equal(rs[0].second, parse_pure("λx.λz.(x)x")));
    CHECK(!equal(rs[0].second, parse_pure("λx.λz.(z)z"))); // the capture reading

    auto as = alg_reducts(embed(m, N), {});
    REQUIRE(as.size() == 1);
    CHECK(as[0].second == embed(rs[0].second, N));

    // same shape through parallel reduction
    CHECK(equal(parallel_reduce(m), parse_pure("λx.λz.(x)x")));
}

TEST_CASE("parallel reduction") {
    CHECK(equal(parallel_reduce(parse_pure("(λx.x)y")), parse_pure("y")));
    auto omega = parse_pure("(λx.(x)x)λx.(x)x");
    CHECK(equal(parallel_reduce(omega), omega));
    Rng rng(5050);
    for (int i = 0; i < 300; ++i) {
        PurePtr m = testgen::random_pure(rng, 8);
        CHECK(parallel_reduce(embed(m, N)) == embed(parallel_reduce(m), N));
    }
}

TEST_CASE("is_normal") {
    CHECK(is_normal(embed(parse_pure("λx.x"), N)));
    CHECK(!is_normal(embed(parse_pure("(λx.x)y"), N)));
    CHECK(is_normal(canon("y+z")));
    CHECK_THROWS_AS(is_normal(canon("y", Semiring::Int)), UsageError);
    // agreement with reduct enumeration under every policy
    Rng rng(66);
    for (int i = 0; i < 150; ++i) {
        auto s = testgen::random_alg(rng, N, 8);
        bool normal = is_normal(s);
        CHECK(normal == alg_reducts(s, {}).empty());
        CHECK(normal == alg_reducts(s, SplitPolicy{SplitPolicy::Name::Unit}).empty());
    }
}

TEST_CASE("joinable") {
    auto a = embed(parse_pure("(λx.x)y"), N);
    auto b = embed(parse_pure("y"), N);
    auto j1 = joinable(a, b, 100, {});
    REQUIRE(j1.has_value());
    CHECK(j1->meet == b);
    CHECK(validate(j1->left));
    CHECK(validate(j1->right));

    auto j2 = joinable(a, a, 100, {});
    REQUIRE(j2.has_value());
    CHECK(j2->left.steps.empty());
    CHECK(j2->right.steps.empty());

    auto m = embed(parse_pure("(λx.(x)x)((λy.y)z)"), N);
    auto rs = alg_reducts(m, {});
    REQUIRE(rs.size() == 2);
    auto j3 = joinable(rs[0].second, rs[1].second, 200, {});
    REQUIRE(j3.has_value());
    CHECK(j3->meet == embed(parse_pure("(z)z"), N));
}

TEST_CASE("local joinability of one-step reducts (small sample)") {
    Rng rng(9001);
    SplitPolicy unit{SplitPolicy::Name::Unit};
    int checked = 0;
    for (int i = 0; i < 40; ++i) {
        auto s = testgen::random_redexy_alg(rng, N, 8);
        auto rs = alg_reducts(s, unit);
        for (std::size_t a = 0; a < rs.size(); ++a)
            for (std::size_t b = a + 1; b < rs.size(); ++b) {
                auto j = joinable(rs[a].second, rs[b].second, 200, unit);
                CHECK(j.has_value());
                ++checked;
            }
    }
    CHECK(checked > 0);
}
