#include "relic/enumerate.hpp"
#include "relic/iso.hpp"
#include "relic/structure.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace relic;
using relic::testing::random_graph;

TEST_CASE("tuple codec") {
    CHECK(encode_tuple({1}, 5) == 0);
    CHECK(encode_tuple({2, 3}, 4) == 6);
    CHECK_THROWS(encode_tuple({0, 1}, 4));
    CHECK_THROWS(encode_tuple({1, 5}, 4));

    SECTION("decode inverts encode on the full tuple space") {
        for (int n = 1; n <= 6; ++n)
            for (int arity = 1; arity <= 3; ++arity) {
                std::uint64_t total = ipow(n, arity);
                for (std::uint64_t idx = 0; idx < total; ++idx) {
                    auto t = decode_tuple(idx, n, arity);
                    REQUIRE(encode_tuple(t, n) == idx);
                }
            }
    }

    SECTION("round trip on random tuples") {
        Rng rng(99);
        for (int t = 0; t < 1000; ++t) {
            int n = 2 + static_cast<int>(rng.below(8));
            int arity = 1 + static_cast<int>(rng.below(4));
            std::vector<int> tuple(arity);
            for (int& c : tuple) c = 1 + static_cast<int>(rng.below(n));
            REQUIRE(decode_tuple(encode_tuple(tuple, n), n, arity) == tuple);
        }
    }
}

TEST_CASE("structure axioms and enumeration") {
    SECTION("graph tags are checked") {
        Structure g(Signature::graph(), 3);
        g.set_index(0, encode_tuple({1, 2}, 3), true); // one direction only
        CHECK_THROWS(g.validate_axioms());
        Structure ok = make_graph(3, {{0, 1}});
        CHECK_NOTHROW(ok.validate_axioms());
        CHECK_THROWS(make_graph(3, {{1, 1}}));
    }

    SECTION("enumeration counts") {
        int graphs3 = 0, graphs6 = 0, binary2 = 0;
        enumerate_structures(Signature::graph(), 3, [&](const Structure&) { ++graphs3; });
        CHECK(graphs3 == 8);
        enumerate_structures(Signature::binomial(2), 2, [&](const Structure&) { ++binary2; });
        CHECK(binary2 == 16);
        enumerate_structures(Signature::graph(), 6, [&](const Structure&) { ++graphs6; });
        CHECK(graphs6 == 32768);
    }

    SECTION("each structure appears exactly once") {
        std::set<std::vector<std::uint64_t>> seen;
        enumerate_structures(Signature::graph(), 4,
                             [&](const Structure& st) { seen.insert(st.table(0)); });
        CHECK(seen.size() == 64);
    }

    SECTION("budget refusal carries the exact count") {
        try {
            enumerate_structures(Signature::graph(), 10, [](const Structure&) {}, 1u << 20);
            FAIL("expected budget refusal");
        } catch (const BudgetExceeded& e) {
            CHECK(e.exact_count == BigInt(1) << 45);
        }
    }
}

TEST_CASE("isomorphism") {
    SECTION("triangle relabelings") {
        Structure k3 = clique_graph(3);
        Structure k3b = make_graph(3, {{2, 1}, {1, 0}, {0, 2}});
        CHECK(isomorphic(k3, k3b));
        CHECK_FALSE(isomorphic(path_graph(2), k3));
    }

    SECTION("labelled copies of C_4 on [4]") {
        Structure c4 = cycle_graph(4);
        int copies = 0;
        enumerate_structures(Signature::graph(), 4, [&](const Structure& st) {
            if (edge_count(st) == 4 && isomorphic(st, c4)) ++copies;
        });
        CHECK(copies == 3);
    }

    SECTION("signature mismatch is an error") {
        CHECK_THROWS(isomorphic(clique_graph(3), Structure(Signature::digraph(), 3)));
    }

    SECTION("equivalence relation on sampled graphs") {
        Rng rng(5);
        std::vector<Structure> gs;
        for (int i = 0; i < 12; ++i) gs.push_back(random_graph(rng, 5));
        for (const auto& g : gs) CHECK(isomorphic(g, g));
        for (std::size_t i = 0; i < gs.size(); ++i)
            for (std::size_t j = 0; j < gs.size(); ++j) {
                bool ij = isomorphic(gs[i], gs[j]);
                CHECK(ij == isomorphic(gs[j], gs[i]));
                if (!ij) continue;
                for (std::size_t k = 0; k < gs.size(); ++k)
                    if (isomorphic(gs[j], gs[k])) CHECK(isomorphic(gs[i], gs[k]));
            }
    }
}

TEST_CASE("automorphisms") {
    CHECK(automorphism_count(clique_graph(4)) == 24);
    CHECK(automorphism_count(cycle_graph(4)) == 8);
    CHECK(automorphism_count(cycle_graph(5)) == 10);
    CHECK(automorphism_count(path_graph(3)) == 2);

    SECTION("count divides n!; labelled copies times count equals n!") {
        Rng rng(17);
        for (int t = 0; t < 6; ++t) {
            Structure g = random_graph(rng, 4);
            std::uint64_t aut = automorphism_count(g);
            CHECK(24 % aut == 0);
            int copies = 0;
            enumerate_structures(Signature::graph(), 4, [&](const Structure& st) {
                if (isomorphic(st, g)) ++copies;
            });
            CHECK(copies * aut == 24);
        }
    }
}

TEST_CASE("cartesian product") {
    Rng rng(3);

    SECTION("unit element") {
        Structure h = random_graph(rng, 4);
        CHECK(isomorphic(cartesian_product(clique_graph(1), h), h));
    }

    SECTION("sizes and the 4-cycle") {
        CHECK(cartesian_product(clique_graph(3), clique_graph(5)).n() == 15);
        CHECK(isomorphic(cartesian_product(clique_graph(2), clique_graph(2)), cycle_graph(4)));
    }

    SECTION("associativity up to isomorphism") {
        for (int t = 0; t < 5; ++t) {
            Structure a = random_graph(rng, 2 + static_cast<int>(rng.below(2)));
            Structure b = random_graph(rng, 2 + static_cast<int>(rng.below(2)));
            Structure c = random_graph(rng, 2 + static_cast<int>(rng.below(2)));
            Structure left = cartesian_product(cartesian_product(a, b), c);
            Structure right = cartesian_product(a, cartesian_product(b, c));
            CHECK(isomorphic(left, right));
        }
    }

    SECTION("non-graph input is rejected") {
        CHECK_THROWS(cartesian_product(Structure(Signature::digraph(), 2), clique_graph(2)));
    }
}
