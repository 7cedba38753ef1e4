#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pslab/sample_family.hpp"
#include "support/gen.hpp"

using namespace pslab;
using testgen::Rng;
using testgen::Tuple;
using testgen::TupleFn;

namespace {

Dist<long> dist_of(std::vector<std::pair<long, Rational>> entries) {
    return Dist<long>::from_weights(entries);
}

SampleFamily<long> family_of(std::vector<std::pair<Rational, long>> points) {
    return SampleFamily<long>(std::move(points));
}

} // namespace

TEST_CASE("rational arithmetic is exact and canonical") {
    Rational half(1, 2);
    Rational third(1, 3);
    CHECK((half + third).str() == "5/6");
    CHECK((half * third).str() == "1/6");
    CHECK((half - half).str() == "0");
    CHECK(Rational(2, 4).str() == "1/2");
    CHECK(Rational(-1, 2).str() == "-1/2");
    CHECK(Rational(Integer(3), Integer(-6)).str() == "-1/2"); // denominator normalised positive
    CHECK(Rational::parse("7/14").value() == half);
    CHECK(Rational::parse("-3").value().str() == "-3");
    CHECK_FALSE(Rational::parse("1/0").has_value());
    CHECK_FALSE(Rational::parse("x").has_value());
    CHECK_THROWS_AS(Rational(Integer(1), Integer(0)), std::domain_error);
    CHECK(half < Rational(2, 3));
}

TEST_CASE("dist invariants: positive support-only weights summing to one") {
    CHECK_THROWS_AS(dist_of({{0, Rational(1, 2)}}), std::invalid_argument);
    CHECK_THROWS_AS(dist_of({{0, Rational(1, 2)}, {1, Rational(-1, 2)}, {2, Rational(1)}}),
                    std::invalid_argument);
    // zero-weight entries are dropped, duplicates aggregated
    Dist<long> d = dist_of({{0, Rational(0)}, {1, Rational(1, 2)}, {1, Rational(1, 2)}});
    CHECK(d.support_size() == 1);
    CHECK(d.at(1) == Rational(1));
    CHECK(d.at(0) == Rational(0));
}

TEST_CASE("pushforward") {
    auto mod2 = [](const long& x) { return x % 2; };
    SUBCASE("identity on support") {
        Dist<long> d = dist_of({{0, Rational(1, 2)}, {1, Rational(1, 2)}});
        CHECK(pushforward(d, mod2) == d);
    }
    SUBCASE("weights summed per preimage") {
        Dist<long> d = dist_of({{0, Rational(1, 3)}, {1, Rational(1, 3)}, {2, Rational(1, 3)}});
        CHECK(pushforward(d, mod2) == dist_of({{0, Rational(2, 3)}, {1, Rational(1, 3)}}));
    }
    SUBCASE("point mass") {
        Dist<long> d = Dist<long>::point(5);
        CHECK(pushforward(d, [](const long& x) { return x * 10; }) == Dist<long>::point(50));
    }
}

TEST_CASE("distribution_of") {
    SUBCASE("duplicate collapse") {
        SampleFamily<std::string> s({{Rational(1, 2), "a"}, {Rational(1, 2), "a"}});
        CHECK(distribution_of(s) == Dist<std::string>::point("a"));
    }
    SUBCASE("two distinct states keep their weights") {
        State s0 = parse_state_literal("{X:0}");
        State s1 = parse_state_literal("{X:1}");
        RandomState sigma = parse_random_state_literal("1/2 {X:0} + 1/2 {X:1}");
        Dist<State> d = distribution_of(sigma);
        CHECK(d.at(s0) == Rational(1, 2));
        CHECK(d.at(s1) == Rational(1, 2));
    }
    SUBCASE("duplicates summed") {
        auto s = family_of({{Rational(1, 4), 1}, {Rational(1, 4), 1}, {Rational(1, 2), 2}});
        CHECK(distribution_of(s) == dist_of({{1, Rational(1, 2)}, {2, Rational(1, 2)}}));
    }
}

TEST_CASE("condition") {
    auto identity = [](const long& x) { return x; };
    SUBCASE("full conditioning") {
        auto s = family_of({{Rational(1, 2), 0}, {Rational(1, 2), 1}});
        auto conditioned = condition(s, identity, 0L);
        CHECK(conditioned == family_of({{Rational(1), 0}}));
    }
    SUBCASE("renormalisation by the kept mass") {
        using P = std::pair<long, long>;
        SampleFamily<P> s({{Rational(1, 4), P{0, 0}}, {Rational(1, 4), P{0, 1}},
                           {Rational(1, 2), P{1, 0}}});
        auto conditioned = condition(s, [](const P& p) { return p.first; }, 0L);
        SampleFamily<P> expected({{Rational(1, 2), P{0, 0}}, {Rational(1, 2), P{0, 1}}});
        CHECK(conditioned == expected);
    }
    SUBCASE("conditioning on a sure event is the identity") {
        auto s = family_of({{Rational(1, 3), 7}, {Rational(2, 3), 9}});
        auto conditioned = condition(s, [](const long&) { return 0; }, 0);
        CHECK(conditioned == s);
    }
    SUBCASE("null event") {
        auto s = family_of({{Rational(1), 0}});
        CHECK_THROWS_AS(condition(s, identity, 3L), NullEventError);
    }
}

TEST_CASE("independent") {
    using P = std::pair<long, long>;
    auto fst = [](const P& p) { return p.first; };
    auto snd = [](const P& p) { return p.second; };
    SUBCASE("product distribution") {
        std::vector<SampleFamily<P>::Point> pts;
        for (long x : {0, 1}) {
            for (long y : {0, 1}) pts.emplace_back(Rational(1, 4), P{x, y});
        }
        CHECK(independent(SampleFamily<P>(std::move(pts)), fst, snd));
    }
    SUBCASE("perfectly correlated components") {
        SampleFamily<P> s({{Rational(1, 2), P{0, 0}}, {Rational(1, 2), P{1, 1}}});
        CHECK_FALSE(independent(s, fst, snd));
    }
    SUBCASE("constants are independent of everything") {
        SampleFamily<P> s({{Rational(1, 2), P{0, 0}}, {Rational(1, 2), P{1, 1}}});
        CHECK(independent(s, fst, [](const P&) { return 42; }));
    }
}

TEST_CASE("cond_independent") {
    using P = std::pair<long, long>;
    auto fst = [](const P& p) { return p.first; };
    auto snd = [](const P& p) { return p.second; };
    SUBCASE("constant condition reduces to plain independence") {
        SampleFamily<P> s({{Rational(1, 2), P{0, 0}}, {Rational(1, 2), P{1, 1}}});
        auto constant = [](const P&) { return 0; };
        CHECK(cond_independent(s, fst, snd, constant) == independent(s, fst, snd));
    }
    SUBCASE("point-mass cells are independent of everything") {
        SampleFamily<P> s({{Rational(1, 2), P{0, 0}}, {Rational(1, 2), P{1, 1}}});
        CHECK(cond_independent(s, fst, snd, fst));
    }
    SUBCASE("conditioning on the parity forces correlation") {
        std::vector<SampleFamily<P>::Point> pts;
        for (long x : {0, 1}) {
            for (long y : {0, 1}) pts.emplace_back(Rational(1, 4), P{x, y});
        }
        SampleFamily<P> s(std::move(pts));
        auto parity = [](const P& p) { return (p.first + p.second) % 2; };
        CHECK(independent(s, fst, snd));
        CHECK_FALSE(cond_independent(s, fst, snd, parity));
    }
}

TEST_CASE("refine") {
    SUBCASE("point split in two") {
        SampleFamily<std::string> s({{Rational(1), "s"}});
        auto refined = refine(s, [](std::size_t) { return 2ul; });
        SampleFamily<std::string> expected({{Rational(1, 2), "s"}, {Rational(1, 2), "s"}});
        CHECK(refined == expected);
    }
    SUBCASE("per-point split counts divide the weight") {
        auto s = family_of({{Rational(1, 2), 10}, {Rational(1, 2), 11}});
        auto refined = refine(s, [](std::size_t i) { return static_cast<unsigned long>(i + 1); });
        CHECK(refined == family_of({{Rational(1, 2), 10}, {Rational(1, 4), 11}, {Rational(1, 4), 11}}));
    }
    SUBCASE("unit split is the identity morphism") {
        auto s = family_of({{Rational(1, 4), 0}, {Rational(3, 4), 5}});
        CHECK(refine(s, [](std::size_t) { return 1ul; }) == s);
    }
    SUBCASE("zero split count rejected") {
        auto s = family_of({{Rational(1), 0}});
        CHECK_THROWS_AS(refine(s, [](std::size_t) { return 0ul; }), std::invalid_argument);
    }
}

// Post-composition preserves independence: if f and g are independent then
// so are f and h.g, for every h.
TEST_CASE("independence is preserved by post-composition") {
    Rng rng(20240811);
    int premise_hits = 0;
    for (int trial = 0; trial < 1200; ++trial) {
        auto s = testgen::random_tuple_family(rng);
        TupleFn f(rng, 3), g(rng, 3);
        if (!independent(s, f, g)) continue;
        ++premise_hits;
        for (long table = 0; table < 4; ++table) {
            // h as a random unary function on g's outputs
            std::array<long, 3> h{rng.range(0, 1), rng.range(0, 1), rng.range(0, 1)};
            auto hg = [&](const Tuple& t) { return h[static_cast<std::size_t>(g(t))]; };
            CHECK(independent(s, f, hg));
        }
    }
    CHECK(premise_hits > 50); // the premise must actually fire
}

// Independence coincides with its conditioning characterisation.
TEST_CASE("independence agrees with the conditioning characterisation") {
    Rng rng(911);
    int disagreements = 0;
    int positives = 0;
    for (int trial = 0; trial < 1200; ++trial) {
        auto s = testgen::random_tuple_family(rng);
        TupleFn f(rng, 2), g(rng, 2);
        bool by_product = independent(s, f, g);
        bool by_conditioning = testgen::independent_via_conditioning(s, f, g);
        if (by_product != by_conditioning) ++disagreements;
        if (by_product) ++positives;
    }
    CHECK(disagreements == 0);
    CHECK(positives > 100);
}

// Conditional independence given h plus independence from h implies joint
// independence from (g, h).
TEST_CASE("conditional independence composes into joint independence") {
    Rng rng(77);
    int premise_hits = 0;
    for (int trial = 0; trial < 1500; ++trial) {
        auto s = testgen::random_tuple_family(rng);
        TupleFn f(rng, 2), g(rng, 2), h(rng, 2);
        if (!cond_independent(s, f, g, h)) continue;
        if (!independent(s, f, h)) continue;
        ++premise_hits;
        auto pair_gh = [&](const Tuple& t) { return std::make_pair(g(t), h(t)); };
        CHECK(independent(s, f, pair_gh));
    }
    CHECK(premise_hits > 50);
}

TEST_CASE("independence is symmetric") {
    Rng rng(4242);
    for (int trial = 0; trial < 500; ++trial) {
        auto s = testgen::random_tuple_family(rng);
        TupleFn f(rng, 2), g(rng, 2);
        CHECK(independent(s, f, g) == independent(s, g, f));
    }
}

TEST_CASE("condition preserves total mass and positivity") {
    Rng rng(555);
    for (int trial = 0; trial < 400; ++trial) {
        auto s = testgen::random_tuple_family(rng);
        TupleFn g(rng, 2);
        Dist<long> pg = distribution_of(s.map(g));
        for (const auto& [b, w] : pg.entries()) {
            auto conditioned = condition(s, g, b);
            Rational total;
            for (const auto& [weight, value] : conditioned.points()) {
                CHECK(weight.is_positive());
                total += weight;
            }
            CHECK(total.is_one());
        }
    }
}

TEST_CASE("refinement does not change the distribution") {
    Rng rng(321);
    for (int trial = 0; trial < 400; ++trial) {
        auto s = testgen::random_tuple_family(rng);
        auto refined = refine(s, [&rng](std::size_t) {
            return static_cast<unsigned long>(rng.range(1, 3));
        });
        CHECK(distribution_of(refined) == distribution_of(s));
    }
}

TEST_CASE("sample family rejects invalid weights") {
    CHECK_THROWS_AS(family_of({{Rational(1, 2), 0}}), std::invalid_argument);
    CHECK_THROWS_AS(family_of({{Rational(0), 0}, {Rational(1), 1}}), std::invalid_argument);
    CHECK_THROWS_AS(family_of({{Rational(-1, 2), 0}, {Rational(3, 2), 1}}), std::invalid_argument);
    CHECK_THROWS_AS(SampleFamily<long>({}), std::invalid_argument);
}
