#include "relic/enumerate.hpp"
#include "relic/modelcheck.hpp"
#include "relic/reduction.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace relic;
using relic::testing::random_sentence;

TEST_CASE("applying reductions") {
    SECTION("arc deletion produces loopless relations") {
        ReductionSpec r = reduction_strip_loops();
        enumerate_structures(Signature::binomial(2), 3, [&](const Structure& a) {
            Structure img = apply_reduction(a, r);
            for (int v = 1; v <= 3; ++v) REQUIRE_FALSE(img.get(0, {v, v}));
        });
    }

    SECTION("symmetrizing a tournament gives the empty graph") {
        Structure t(Signature::digraph(), 3);
        t.set(0, {1, 2});
        t.set(0, {2, 3});
        t.set(0, {3, 1});
        Structure img = apply_reduction(t, reduction_symmetrize());
        CHECK(edge_count(img) == 0);
    }

    SECTION("the identity map") {
        ReductionSpec id;
        id.source = Signature::graph();
        id.target = Signature::graph();
        id.defs["E"] = {{"a", "b"}, atom("E", {"a", "b"})};
        Structure g = cycle_graph(5);
        CHECK(apply_reduction(g, id) == g);
    }

    SECTION("signature mismatch") {
        CHECK_THROWS(apply_reduction(clique_graph(3), reduction_strip_loops()));
    }
}

TEST_CASE("translation and change of variables") {
    SECTION("symmetrization of an edge sentence") {
        auto f = exists("x", exists("y", atom("E", {"x", "y"})));
        auto g = translate(f, reduction_symmetrize());
        CHECK(render(g) == "(exists x (exists y (and (A x y) (A y x))))");
    }

    SECTION("exact probability identity on the pushforward") {
        Rng rng(61);
        auto src = DistributionSpec::binomial(Signature::binomial(2), 3, {Rational(1, 2)});
        ReductionSpec r = reduction_strip_loops();
        auto push = pushforward_law(src, r);
        CompiledSet dummy; // keep sentence list alive per iteration
        for (int t = 0; t < 20; ++t) {
            FormulaPtr f = random_sentence(rng, *r.target, 2, 2);
            Rational lhs = prob_exact(translate(f, r), src);
            Rational rhs = 0;
            CompiledSet cs = compile({f});
            for (const auto& [st, mass] : push) {
                EvalSession s(st, cs);
                if (s.eval_root(0)) rhs += mass;
            }
            REQUIRE(lhs == rhs);
        }
    }
}

TEST_CASE("pushforward laws are exact") {
    auto base = DistributionSpec::binomial(Signature::binomial(2), 3, {Rational(1, 2)});
    CHECK(law_tv(pushforward_law(base, reduction_strip_loops()),
                 exact_law(DistributionSpec::digraph(3, Rational(1, 2)))) == 0);
    CHECK(law_tv(pushforward_law(DistributionSpec::digraph(3, Rational(1, 2)),
                                 reduction_symmetrize()),
                 exact_law(DistributionSpec::graph(3, Rational(1, 4)))) == 0);

    SECTION("complement swaps the edge probability") {
        auto push =
            pushforward_law(DistributionSpec::graph(3, Rational(1, 3)), reduction_complement());
        CHECK(law_tv(push, exact_law(DistributionSpec::graph(3, Rational(2, 3)))) == 0);
    }

    SECTION("coarser hyperedge orbits raise the exponent") {
        auto push = pushforward_law(
            DistributionSpec::h_hypergraph(PermGroup::cyclic(3), 3, Rational(1, 2)),
            reduction_hk_hypergraph(PermGroup::symmetric(3)));
        CHECK(law_tv(push, exact_law(DistributionSpec::h_hypergraph(PermGroup::symmetric(3), 3,
                                                                    Rational(1, 4)))) == 0);
    }

    SECTION("conjugate subgroups give the same law after relabeling") {
        // H generated by the swap (0 1), conjugated by g = (0 2)
        PermGroup h(3, {{1, 0, 2}});
        Perm g{2, 1, 0};
        PermGroup hg = h.conjugate(g);
        auto push = pushforward_law(DistributionSpec::h_hypergraph(hg, 3, Rational(1, 3)),
                                    reduction_position_relabel(g));
        CHECK(law_tv(push, exact_law(DistributionSpec::h_hypergraph(h, 3, Rational(1, 3)))) ==
              0);
    }
}

TEST_CASE("reduction composition is a preorder witness") {
    ReductionSpec strip = reduction_strip_loops();
    ReductionSpec sym = reduction_symmetrize();
    ReductionSpec comp = compose(sym, strip);
    Rng rng(67);

    enumerate_structures(Signature::binomial(2), 3, [&](const Structure& a) {
        Structure two_step = apply_reduction(apply_reduction(a, strip), sym);
        Structure one_step = apply_reduction(a, comp);
        REQUIRE(two_step == one_step);
    });

    for (int t = 0; t < 10; ++t) {
        FormulaPtr f = random_sentence(rng, *Signature::graph(), 2, 2);
        FormulaPtr twice = translate(translate(f, sym), strip);
        FormulaPtr once = translate(f, comp);
        enumerate_structures(Signature::binomial(2), 2, [&](const Structure& a) {
            REQUIRE(eval(a, twice) == eval(a, once));
        });
    }
}

TEST_CASE("loopless transform") {
    SECTION("one new symbol per partition") {
        auto t2 = loopless_transform(Signature::binomial(2));
        CHECK(t2.loopless_sig->size() == 2);
        auto t3 = loopless_transform(Signature::binomial(3));
        CHECK(t3.loopless_sig->size() == 5);
    }

    SECTION("round trip preserves the structure and all sentences") {
        auto t = loopless_transform(Signature::binomial(2));
        Rng rng(71);
        std::vector<FormulaPtr> sentences;
        for (int i = 0; i < 5; ++i)
            sentences.push_back(random_sentence(rng, *Signature::binomial(2), 2, 2));
        enumerate_structures(Signature::binomial(2), 3, [&](const Structure& a) {
            Structure forth = apply_reduction(a, t.forward);
            Structure back = apply_reduction(forth, t.backward);
            REQUIRE(back == a);
            for (const auto& f : sentences) {
                FormulaPtr through = translate(translate(f, t.backward), t.forward);
                REQUIRE(eval(a, through) == eval(a, f));
            }
        });
    }

    SECTION("images are loopless") {
        auto t = loopless_transform(Signature::binomial(2));
        enumerate_structures(Signature::binomial(2), 2, [&](const Structure& a) {
            Structure img = apply_reduction(a, t.forward);
            // every symbol in the image is false on constant tuples
            for (std::size_t s = 0; s < img.signature()->size(); ++s) {
                int arity = img.signature()->at(s).arity;
                for (int v = 1; v <= 2; ++v) {
                    std::vector<int> diag(arity, v);
                    if (arity >= 2) REQUIRE_FALSE(img.get(s, diag));
                }
            }
        });
    }
}

TEST_CASE("parameter solvers") {
    SECTION("degenerate case pins p at one half") {
        auto sol = solve_oberschelp(1, 2, 1);
        CHECK(sol.r == 1);
        CHECK(sol.p == 0.5);
        CHECK(sol.residual == 0.0);
    }

    SECTION("bisected case reproduces its equation") {
        auto sol = solve_oberschelp(2, 3, 1);
        CHECK(sol.r == 2);
        CHECK(sol.p > 0.0);
        CHECK(sol.p < 0.5);
        double sfact = 2;
        double lhs = std::pow(1.0 - sol.p * std::pow(1.0 - sol.p, sfact - 1.0), sol.r);
        CHECK(std::fabs(lhs - 2.0 / 3.0) <= 1e-12);
    }

    SECTION("a larger instance also closes the loop") {
        auto sol = solve_oberschelp(3, 5, 2);
        double sfact = 6;
        double lhs = std::pow(1.0 - sol.p * std::pow(1.0 - sol.p, sfact - 1.0), sol.r);
        CHECK(std::fabs(lhs - 3.0 / 4.0) <= 1e-12);
    }

    SECTION("probability shift along one extra coordinate") {
        double p = napr_shift(1.0, 1.0, 10);
        CHECK(std::fabs(p - 0.010480742) < 1e-8);
        // residual to c/n^{alpha+1} shrinks like n^{-2 alpha - 1}
        CHECK(std::fabs(p - 0.01) < 1.0 / std::pow(10.0, 2.9));
        CHECK_THROWS(napr_shift(20.0, 0.1, 2));
    }

    SECTION("logarithmic shift root") {
        double c = lnn_shift(2.0, 50);
        double lhs = 1.0 - std::pow(c * std::pow(50.0, -2.0), 1.0 / 50.0);
        double target = 2.0 * std::log(50.0) / 50.0;
        CHECK(std::fabs(lhs - target) <= 1e-12);
    }
}
