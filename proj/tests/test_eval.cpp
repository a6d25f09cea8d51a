#include "relic/eval.hpp"
#include "relic/gadget_sentences.hpp"
#include "relic/modelcheck.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace relic;
using relic::testing::random_graph;
using relic::testing::random_sentence;
using relic::testing::relabel;

TEST_CASE("basic satisfaction") {
    auto some_edge = exists("x", exists("y", atom("E", {"x", "y"})));
    CHECK(eval(clique_graph(3), some_edge));
    CHECK(eval(make_graph(3), empty_graph_sentence()));
    CHECK_FALSE(eval(clique_graph(3), empty_graph_sentence()));

    SECTION("sentences only") {
        CHECK_THROWS(eval(clique_graph(3), atom("E", {"x", "y"})));
    }
    SECTION("signature mismatch") {
        CHECK_THROWS(eval(Structure(Signature::digraph(), 3), some_edge));
    }
}

TEST_CASE("compiled evaluator agrees with the reference evaluator") {
    Rng rng(29);
    int checked = 0;
    while (checked < 500) {
        int n = 2 + static_cast<int>(rng.below(4));
        Structure g = random_graph(rng, n);
        FormulaPtr f = random_sentence(rng, *Signature::graph(), 3, 3);
        CompiledSet cs = compile({f});
        EvalSession s(g, cs);
        REQUIRE(s.eval_root(0) == eval_naive(g, f));
        ++checked;
    }
}

TEST_CASE("evaluation is isomorphism invariant") {
    Rng rng(31);
    for (int t = 0; t < 40; ++t) {
        int n = 2 + static_cast<int>(rng.below(4));
        Structure g = random_graph(rng, n);
        Structure h = relabel(g, rng.permutation(n));
        FormulaPtr f = random_sentence(rng, *Signature::graph(), 3, 3);
        CHECK(eval(g, f) == eval(h, f));
    }
}

TEST_CASE("model counting identities") {
    auto sig = Signature::graph();
    Rng rng(37);
    for (int n = 2; n <= 4; ++n) {
        std::uint64_t total = 1ull << (n * (n - 1) / 2);
        for (int t = 0; t < 3; ++t) {
            FormulaPtr f = random_sentence(rng, *sig, 2, 2);
            FormulaPtr g = random_sentence(rng, *sig, 2, 2);
            auto cf = count_models(sig, n, f);
            CHECK(count_models(sig, n, lnot(f)) == total - cf);
            CHECK(count_models(sig, n, lor({f, g})) + count_models(sig, n, land({f, g})) ==
                  cf + count_models(sig, n, g));
        }
    }
    CHECK(count_models(sig, 5, empty_graph_sentence()) == 1);
}

TEST_CASE("exact probabilities") {
    auto some_edge = exists("x", exists("y", atom("E", {"x", "y"})));

    SECTION("one minus the no-edge mass") {
        auto p = prob_exact(some_edge, DistributionSpec::graph(3, Rational(1, 2)));
        CHECK(p == Rational(7, 8));
        auto q = prob_exact(some_edge, DistributionSpec::graph(2, Rational(1, 3)));
        CHECK(q == Rational(1, 3));
    }

    SECTION("triangle probability on [4] against direct enumeration") {
        auto triangle = has_clique(3);
        auto p = prob_exact(triangle, DistributionSpec::graph(4, Rational(1, 2)));
        int with_triangle = 0;
        enumerate_structures(Signature::graph(), 4, [&](const Structure& st) {
            bool has = false;
            for (int a = 0; a < 4 && !has; ++a)
                for (int b = a + 1; b < 4 && !has; ++b)
                    for (int c = b + 1; c < 4 && !has; ++c)
                        if (has_edge(st, a, b) && has_edge(st, b, c) && has_edge(st, a, c))
                            has = true;
            if (has) ++with_triangle;
        });
        CHECK(p == Rational(with_triangle, 64));
    }

    SECTION("partition sums to one") {
        Rng rng(41);
        for (int t = 0; t < 10; ++t) {
            FormulaPtr f = random_sentence(rng, *Signature::graph(), 2, 2);
            auto spec = DistributionSpec::graph(3, Rational(1, 3));
            CHECK(prob_exact(f, spec) + prob_exact(lnot(f), spec) == Rational(1));
        }
    }

    SECTION("monte carlo tracks exact values") {
        auto spec = DistributionSpec::graph(4, Rational(1, 2));
        double exact = to_double(prob_exact(has_clique(3), spec));
        double mc = prob_mc(has_clique(3), spec, 20000, 12345);
        CHECK(std::fabs(mc - exact) < 0.02);
    }
}

TEST_CASE("conditional probabilities") {
    SECTION("maximal pair given the product recognizer on [4]") {
        auto p = conditional_prob(max_clique(2), kskt_recognizer(), Signature::graph(), 4);
        CHECK(p == Rational(3, 4));
    }

    SECTION("conditioning tautologies") {
        CHECK(conditional_prob(empty_graph_sentence(), empty_graph_sentence(),
                               Signature::graph(), 4) == Rational(1));
        auto phi1 = phi_expansion();
        CHECK(conditional_prob(phi1, phi1, Signature::graph(), 6) == Rational(1));
    }

    SECTION("empty event") {
        auto contradiction = land({empty_graph_sentence(), has_clique(2)});
        CHECK_THROWS_AS(
            conditional_prob(empty_graph_sentence(), contradiction, Signature::graph(), 3),
            std::domain_error);
    }
}

TEST_CASE("relation tables from formulas with parameters") {
    // common-neighbour relation on the 4-cycle
    Structure c4 = cycle_graph(4);
    auto common = exists("z", land({atom("E", {"a", "z"}), atom("E", {"z", "b"})}));
    auto bits = eval_relation(c4, common, {"a", "b"});
    auto get = [&](int a, int b) {
        std::uint64_t idx = static_cast<std::uint64_t>(a) * 4 + b;
        return ((bits[idx >> 6] >> (idx & 63)) & 1) != 0;
    };
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            bool expect = (a + b) % 2 == 0; // same bipartition class
            CHECK(get(a, b) == expect);
        }
}
