#include "relic/gadget_sentences.hpp"
#include "relic/iso.hpp"
#include "relic/modelcheck.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

using namespace relic;

namespace {

std::vector<int> degree_multiset(const Structure& g) {
    std::vector<int> degs;
    for (int v = 0; v < g.n(); ++v) degs.push_back(degree(g, v));
    std::sort(degs.begin(), degs.end());
    return degs;
}

bool is_matching_with(const Structure& g, int k) {
    for (int v = 0; v < g.n(); ++v)
        if (degree(g, v) > 1) return false;
    return edge_count(g) == k;
}

} // namespace

TEST_CASE("graph builders") {
    CHECK(path_graph(3).n() == 4);
    CHECK(star_graph(4).n() == 5);
    CHECK(edge_count(clique_graph(5)) == 10);
    CHECK(l_graph(2).n() == 24);
    CHECK(l_graph(3).n() == 54);
    CHECK_THROWS(l_graph(1));
    CHECK(kd_lm_graph(3, 2).n() == 72);
    CHECK(ks_kt_graph(4, 5).n() == 20);

    SECTION("expansion of the one-vertex loop") {
        Structure g = gd_expansion({0});
        CHECK(g.n() == 6);
        CHECK(degree_multiset(g) == std::vector<int>{1, 1, 2, 2, 3, 3});
    }
}

TEST_CASE("matching sentences") {
    // phi_exactly(k) recognizes exactly the k-edge matchings, checked
    // against a structural oracle over every graph on [4]
    CompiledSet cs = compile({phi_exactly(0), phi_exactly(1), phi_exactly(2)});
    enumerate_structures(Signature::graph(), 4, [&](const Structure& st) {
        EvalSession s(st, cs);
        for (int k = 0; k <= 2; ++k)
            REQUIRE(s.eval_root(k) == is_matching_with(st, k));
    });
}

TEST_CASE("cycle sentences") {
    CHECK(eval(cycle_graph(5), psi_cycle(5)));
    CHECK_FALSE(eval(cycle_graph(5), psi_cycle(3)));
    CHECK(eval(clique_graph(4), psi_cycle(3)));
    CHECK(eval(clique_graph(4), psi_cycle(4)));
    CHECK_FALSE(eval(path_graph(5), psi_cycle(3)));
    CHECK_FALSE(eval(cycle_graph(3), cycle_word_sentence("0")));
    CHECK(eval(cycle_graph(3), cycle_word_sentence("1")));
}

TEST_CASE("clique partition counts") {
    CHECK(count_models(Signature::graph(), 3, clique_partition(3, 1)) == 1);
    CHECK(count_models(Signature::graph(), 4, clique_partition(3, 1)) == 4);
    CHECK(count_models(Signature::graph(), 3, clique_partition(3, 0)) == 1);
    CHECK(count_models(Signature::graph(), 4, clique_partition(3, 0)) == 0);
    // two isolated vertices would mean two 1-cliques
    CHECK(count_models(Signature::graph(), 5, clique_partition(3, 1)) == 0);
}

TEST_CASE("isolated cliques") {
    Structure g = make_graph(5, {{0, 1}, {1, 2}, {0, 2}, {3, 4}});
    CHECK(eval(g, isolated_clique(3)));
    CHECK(eval(g, isolated_clique(2)));
    CHECK_FALSE(eval(g, isolated_clique(1)));
    CHECK_FALSE(eval(clique_graph(4), isolated_clique(3)));
}

TEST_CASE("product-of-cliques recognizer") {
    auto phi = kskt_recognizer();
    SECTION("models on [4] are the complete graph and the three 4-cycles") {
        Structure c4 = cycle_graph(4);
        int models = 0;
        CompiledSet cs = compile({phi});
        enumerate_structures(Signature::graph(), 4, [&](const Structure& st) {
            EvalSession s(st, cs);
            bool is_model = s.eval_root(0);
            if (is_model) ++models;
            bool expected = edge_count(st) == 6 || (edge_count(st) == 4 && isomorphic(st, c4));
            REQUIRE(is_model == expected);
        });
        CHECK(models == 4);
    }
    SECTION("products of cliques satisfy it") {
        CHECK(eval(ks_kt_graph(2, 3), phi));
        CHECK(eval(ks_kt_graph(3, 3), phi));
        CHECK_FALSE(eval(path_graph(3), phi));
    }
}

TEST_CASE("maximal clique sentence") {
    CHECK(eval(path_graph(2), max_clique(2)));
    CHECK_FALSE(eval(path_graph(2), max_clique(3)));
    CHECK(eval(clique_graph(4), max_clique(4)));
    CHECK_FALSE(eval(clique_graph(4), max_clique(3)));
    Structure mixed = make_graph(5, {{0, 1}, {1, 2}, {0, 2}, {3, 4}});
    CHECK(eval(mixed, max_clique(3)));
    CHECK(eval(mixed, max_clique(2)));
}

TEST_CASE("extension axioms") {
    CHECK_FALSE(eval(clique_graph(3), extension_axiom(1)));    // no non-neighbour
    CHECK_FALSE(eval(make_graph(4), extension_axiom(1)));      // no neighbour
    Structure g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 2}});
    CHECK(eval(g, extension_axiom(1)) == [&] {
        for (int x = 0; x < 5; ++x) {
            bool has_nbr = false, has_non = false;
            for (int y = 0; y < 5; ++y) {
                if (y == x) continue;
                (has_edge(g, x, y) ? has_nbr : has_non) = true;
            }
            if (!has_nbr || !has_non) return false;
        }
        return true;
    }());
}

TEST_CASE("expansion family") {
    auto phi1 = phi_expansion();

    SECTION("recognizer and sentence agree on every graph on [6]") {
        CompiledSet cs = compile({phi1});
        std::optional<EvalSession> session;
        enumerate_structures(Signature::graph(), 6, [&](const Structure& st) {
            if (!session)
                session.emplace(st, cs);
            else
                session->reset(st);
            REQUIRE(session->eval_root(0) == expansion_recognize(st));
        });
    }

    SECTION("counts at small sizes") {
        CHECK(count_models_with(Signature::graph(), 6, expansion_recognize) == 720);
        for (int n = 1; n <= 5; ++n)
            CHECK(count_models_with(Signature::graph(), n, expansion_recognize) == 0);
    }

    SECTION("every model on [6] is a relabeled expansion of the loop") {
        Structure base = gd_expansion({0});
        enumerate_structures(Signature::graph(), 6, [&](const Structure& st) {
            if (expansion_recognize(st)) REQUIRE(isomorphic(st, base));
        });
    }

    SECTION("expansions of every 1- and 2-vertex functional digraph are models") {
        std::vector<Perm> deltas = {{0}, {0, 1}, {1, 0}};
        for (const auto& d : deltas) {
            Structure g = gd_expansion(d);
            CHECK(eval(g, phi1));
            CHECK(expansion_recognize(g));
        }
    }
}

TEST_CASE("ladder family") {
    auto phiL = phi_ladder();
    CompiledSet cs = compile({phiL});

    SECTION("ladders satisfy the sentence and are rigid") {
        for (int m : {2, 3}) {
            Structure lm = l_graph(m);
            EvalSession s(lm, cs);
            CHECK(s.eval_root(0));
            CHECK(automorphism_count(lm) == 1);
        }
    }

    SECTION("single edge toggles falsify it") {
        Structure l2 = l_graph(2);
        Rng rng(83);
        for (int t = 0; t < 12; ++t) {
            int u = static_cast<int>(rng.below(24));
            int v = static_cast<int>(rng.below(24));
            while (v == u) v = static_cast<int>(rng.below(24));
            Structure toggled = l2;
            toggled.set(0, {u + 1, v + 1}, !has_edge(l2, u, v));
            EvalSession s(toggled, cs);
            REQUIRE_FALSE(s.eval_root(0));
        }
    }
}

TEST_CASE("clique-product family") {
    SECTION("distinct clique sizes are mutually exclusive on small graphs") {
        auto both = land({phi_product_d(3), phi_product_d(4)});
        for (int n = 1; n <= 6; ++n)
            CHECK(count_models(Signature::graph(), n, both) == 0);
    }

    SECTION("automorphism counts of the products") {
        CHECK(automorphism_count(kd_lm_graph(3, 2)) == 6);
        CHECK(automorphism_count(kd_lm_graph(4, 2)) == 24);
    }
}
