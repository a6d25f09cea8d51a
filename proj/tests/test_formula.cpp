#include "relic/enumerate.hpp"
#include "relic/eval.hpp"
#include "relic/formula.hpp"
#include "relic/gadget_sentences.hpp"
#include "relic/reduction.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace relic;
using relic::testing::random_sentence;

TEST_CASE("parser") {
    const Signature& gs = *Signature::graph();

    SECTION("basic shapes") {
        auto f = parse("(forall x (not (E x x)))", gs);
        REQUIRE(f->kind == FKind::Forall);
        CHECK(f->sym == "x");
        CHECK(quantifier_depth(f) == 1);
    }

    SECTION("errors carry positions") {
        CHECK_THROWS_AS(parse("(E x)", gs), ParseError);          // arity mismatch
        CHECK_THROWS_AS(parse("(R x y)", gs), ParseError);        // unknown symbol
        CHECK_THROWS_AS(parse("(and)", gs), ParseError);          // empty operands
        CHECK_THROWS_AS(parse("(forall x (E x y)", gs), ParseError); // unbalanced
        try {
            parse("(E x)", gs);
        } catch (const ParseError& e) {
            CHECK(e.position == 1);
        }
    }

    SECTION("render round trip over the gadget library") {
        std::vector<FormulaPtr> lib = {
            phi_expansion(),   phi_ladder(),        phi_product_d(3), kskt_recognizer(),
            phi_exactly(2),    clique_partition(3, 1), isolated_clique(2),
            max_clique(3),     extension_axiom(2),  psi_cycle(4),     empty_graph_sentence()};
        for (const auto& f : lib) {
            FormulaPtr back = parse(render(f), gs);
            REQUIRE(*back == *f);
        }
    }

    SECTION("render round trip on random sentences") {
        Rng rng(7);
        for (int t = 0; t < 50; ++t) {
            FormulaPtr f = random_sentence(rng, gs);
            REQUIRE(*parse(render(f), gs) == *f);
        }
    }
}

TEST_CASE("depth and free variables") {
    CHECK(quantifier_depth(atom("E", {"x", "y"})) == 0);
    CHECK(quantifier_depth(exists("x", exists("y", atom("E", {"x", "y"})))) == 2);
    // fixed desugaring of unique existence adds one universal layer
    CHECK(quantifier_depth(exists1("x", atom("E", {"x", "x"}))) == 2);

    auto f = exists("x", land({atom("E", {"x", "y"}), eq("z", "x")}));
    auto fv = free_vars(f);
    CHECK(fv == std::set<std::string>{"y", "z"});
}

TEST_CASE("predicate substitution") {
    const Signature& gs = *Signature::graph();

    SECTION("arc-deletion example") {
        auto f = exists("x", exists("y", atom("A", {"x", "y"})));
        std::map<std::string, PredicateDef> defs;
        defs["A"] = {{"a", "b"}, land({atom("P", {"a", "b"}), neq("a", "b")})};
        auto g = substitute_predicates(f, defs);
        CHECK(render(g) == "(exists x (exists y (and (P x y) (not (= x y)))))");
    }

    SECTION("identity map leaves the formula unchanged") {
        auto f = forall("x", exists("y", land({atom("E", {"x", "y"}), neq("x", "y")})));
        std::map<std::string, PredicateDef> defs;
        defs["E"] = {{"a", "b"}, atom("E", {"a", "b"})};
        CHECK(*substitute_predicates(f, defs) == *f);
    }

    SECTION("capture is avoided") {
        // the definition binds x; substituting at argument position x must
        // rename the inner x, otherwise E(x,x) makes the premise vacuous
        std::map<std::string, PredicateDef> defs;
        defs["E"] = {{"a", "b"}, exists("x", land({atom("E", {"a", "x"}), atom("E", {"x", "b"})}))};
        auto f = forall("x", forall("y", implies(atom("E", {"x", "y"}), eq("x", "y"))));
        auto g = substitute_predicates(f, defs);
        // on the triangle every pair has a common neighbour, so the premise
        // fires and the conclusion fails; a captured x would instead produce
        // the irreflexive atom E(x,x) and the sentence would go vacuously true
        CHECK_FALSE(eval(clique_graph(3), g));
        CHECK(eval(make_graph(3), g));
    }

    SECTION("missing symbol and wrong parameter count are errors") {
        auto f = exists("x", atom("E", {"x", "x"}));
        CHECK_THROWS(substitute_predicates(f, {}));
        std::map<std::string, PredicateDef> bad;
        bad["E"] = {{"a"}, atom("E", {"a", "a"})};
        CHECK_THROWS(substitute_predicates(f, bad));
    }

    SECTION("free variables preserved; depth growth bounded") {
        Rng rng(11);
        auto digraph_sig = Signature::digraph();
        for (int t = 0; t < 200; ++t) {
            FormulaPtr f = random_sentence(rng, *digraph_sig, 2, 2);
            std::map<std::string, PredicateDef> defs;
            FormulaPtr body = random_sentence(rng, *Signature::binomial(2), 1, 2);
            // turn the random sentence into a binary definition by exposing
            // two parameters
            defs["A"] = {{"pa", "pb"},
                         land({atom("P", {"pa", "pb"}), lor({body, eq("pa", "pa")})})};
            FormulaPtr g = substitute_predicates(f, defs);
            CHECK(free_vars(g) == free_vars(f));
            int bound = quantifier_depth(f) + quantifier_depth(defs["A"].body) + 2;
            CHECK(quantifier_depth(g) <= bound);
        }
    }
}

TEST_CASE("semantic substitution lemma for the digraph reductions") {
    // eval(A, translate(f)) == eval(apply_reduction(A), f), exhaustively
    Rng rng(13);

    SECTION("arc deletion over all binary structures on [3]") {
        ReductionSpec r = reduction_strip_loops();
        std::vector<FormulaPtr> sentences;
        for (int t = 0; t < 5; ++t) sentences.push_back(random_sentence(rng, *r.target, 2, 2));
        std::vector<FormulaPtr> translated;
        for (const auto& f : sentences) translated.push_back(translate(f, r));
        enumerate_structures(Signature::binomial(2), 3, [&](const Structure& a) {
            Structure image = apply_reduction(a, r);
            for (std::size_t i = 0; i < sentences.size(); ++i)
                REQUIRE(eval(a, translated[i]) == eval(image, sentences[i]));
        });
    }

    SECTION("symmetrization over all loopless digraphs on [3]") {
        ReductionSpec r = reduction_symmetrize();
        std::vector<FormulaPtr> sentences;
        for (int t = 0; t < 5; ++t) sentences.push_back(random_sentence(rng, *r.target, 2, 2));
        std::vector<FormulaPtr> translated;
        for (const auto& f : sentences) translated.push_back(translate(f, r));
        enumerate_structures(Signature::digraph(), 3, [&](const Structure& a) {
            Structure image = apply_reduction(a, r);
            for (std::size_t i = 0; i < sentences.size(); ++i)
                REQUIRE(eval(a, translated[i]) == eval(image, sentences[i]));
        });
    }
}
