#pragma once

#include "relic/eval.hpp"
#include "relic/formula.hpp"
#include "relic/perm.hpp"
#include "relic/structure.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace relic {

// ---------------------------------------------------------------------------
// Graph families
// ---------------------------------------------------------------------------

// digraph on [m] with all in- and out-degrees 1, given as a permutation
// (arc u -> sigma(u)); the loop digraph on one vertex is delta_digraph({0})
inline Structure delta_digraph(const Perm& sigma) {
    int m = static_cast<int>(sigma.size());
    // self-arcs are loops, so these live over a loop-tolerant binary signature
    static auto sig =
        std::make_shared<const Signature>(std::vector<RelSymbol>{{"A", 2, false, false}});
    Structure out(sig, m);
    for (int u = 0; u < m; ++u) out.set0(0, {u, sigma[u]});
    return out;
}

// Expansion of a functional digraph into a simple graph on 6m vertices: every
// arc (u,v) becomes a 5-vertex gadget w1..w5 with edges u-w1, w1-w3, w3-v,
// w1-w2, w3-w4, w4-w5. Cores are vertices 0..m-1, then gadget blocks in arc
// order.
inline Structure gd_expansion(const Perm& sigma) {
    int m = static_cast<int>(sigma.size());
    Structure g = make_graph(6 * m);
    for (int u = 0; u < m; ++u) {
        int v = sigma[u];
        int w1 = m + 5 * u, w2 = w1 + 1, w3 = w1 + 2, w4 = w1 + 3, w5 = w1 + 4;
        add_edge(g, u, w1);
        add_edge(g, w1, w3);
        add_edge(g, w3, v);
        add_edge(g, w1, w2);
        add_edge(g, w3, w4);
        add_edge(g, w4, w5);
    }
    return g;
}

// Ladder-like asymmetric graph on 6m^2 vertices: a chain u_1..u_{6m}; for
// each row j in [m-1], a path v_{i,j} (6j+1 <= i <= 6m) hanging off the
// chain, and one leaf w_{i,j} per v. Layout: chain first, then v rows, then
// w leaves, row-major.
inline Structure l_graph(int m) {
    if (m < 2) throw std::invalid_argument("l_graph: m >= 2 required");
    int chain = 6 * m;
    int per_rows = 3 * m * (m - 1); // total v count (= total w count)
    Structure g = make_graph(chain + 2 * per_rows);
    auto u = [&](int i) { return i - 1; }; // i in 1..6m
    std::map<std::pair<int, int>, int> vid, wid;
    int next = chain;
    for (int j = 1; j <= m - 1; ++j)
        for (int i = 6 * j + 1; i <= 6 * m; ++i) vid[{i, j}] = next++;
    for (int j = 1; j <= m - 1; ++j)
        for (int i = 6 * j + 1; i <= 6 * m; ++i) wid[{i, j}] = next++;

    for (int i = 2; i <= 6 * m; ++i) add_edge(g, u(i - 1), u(i));
    for (int j = 1; j <= m - 1; ++j)
        for (int i = 6 * j + 1; i <= 6 * m; ++i) {
            add_edge(g, u(i), vid[{i, j}]);
            add_edge(g, vid[{i, j}], wid[{i, j}]);
            if (i >= 6 * j + 2) add_edge(g, vid[{i - 1, j}], vid[{i, j}]);
        }
    return g;
}

inline Structure kd_lm_graph(int d, int m) {
    if (d < 3) throw std::invalid_argument("kd_lm_graph: d >= 3 required");
    return cartesian_product(clique_graph(d), l_graph(m));
}

inline Structure ks_kt_graph(int s, int t) {
    return cartesian_product(clique_graph(s), clique_graph(t));
}

// ---------------------------------------------------------------------------
// Formula catalog (all over the graph signature {E})
// ---------------------------------------------------------------------------

namespace gadget_detail {

inline std::string var(const std::string& base, int i) { return base + std::to_string(i); }

inline std::vector<FormulaPtr> pairwise_distinct(const std::vector<std::string>& vs) {
    std::vector<FormulaPtr> out;
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j) out.push_back(neq(vs[i], vs[j]));
    return out;
}

} // namespace gadget_detail

// at least k neighbours: exists q1..qk distinct, all adjacent to x
inline FormulaPtr deg_geq(const std::string& x, int k) {
    using gadget_detail::var;
    if (k < 1) throw std::invalid_argument("deg_geq: k >= 1");
    std::vector<std::string> qs;
    for (int i = 1; i <= k; ++i) qs.push_back(var("q", i));
    std::vector<FormulaPtr> conj = gadget_detail::pairwise_distinct(qs);
    for (const auto& q : qs) conj.push_back(atom("E", {x, q}));
    FormulaPtr body = land(conj);
    for (int i = k; i >= 1; --i) body = exists(qs[i - 1], body);
    return body;
}

inline FormulaPtr deg_exact(const std::string& x, int k) {
    if (k == 0) return lnot(deg_geq(x, 1));
    return land({deg_geq(x, k), lnot(deg_geq(x, k + 1))});
}

// the whole graph is a matching with at least k edges (isolated vertices allowed)
inline FormulaPtr phi_geq(int k) {
    using gadget_detail::var;
    FormulaPtr matching = forall(
        "ma", forall("mb", forall("mc", implies(land({atom("E", {"ma", "mb"}),
                                                      atom("E", {"ma", "mc"})}),
                                                eq("mb", "mc")))));
    if (k == 0) return matching;
    std::vector<std::string> vs;
    for (int i = 1; i <= k; ++i) {
        vs.push_back(var("ex", i));
        vs.push_back(var("ey", i));
    }
    std::vector<FormulaPtr> conj = gadget_detail::pairwise_distinct(vs);
    for (int i = 0; i < k; ++i) conj.push_back(atom("E", {vs[2 * i], vs[2 * i + 1]}));
    FormulaPtr body = land(conj);
    for (int i = static_cast<int>(vs.size()); i >= 1; --i) body = exists(vs[i - 1], body);
    return land({matching, body});
}

// the graph is exactly k disjoint edges plus isolated vertices
inline FormulaPtr phi_exactly(int k) { return land({phi_geq(k), lnot(phi_geq(k + 1))}); }

// contains a cycle of length l
inline FormulaPtr psi_cycle(int l) {
    using gadget_detail::var;
    if (l < 3) throw std::invalid_argument("psi_cycle: l >= 3");
    std::vector<std::string> vs;
    for (int i = 1; i <= l; ++i) vs.push_back(var("c", i));
    std::vector<FormulaPtr> conj = gadget_detail::pairwise_distinct(vs);
    for (int i = 0; i < l; ++i) conj.push_back(atom("E", {vs[i], vs[(i + 1) % l]}));
    FormulaPtr body = land(conj);
    for (int i = l; i >= 1; --i) body = exists(vs[i - 1], body);
    return body;
}

// conjunction of psi_l / not psi_l per the 0/1 word (positions are lengths 3..w+2)
inline FormulaPtr cycle_word_sentence(const std::string& word) {
    std::vector<FormulaPtr> conj;
    for (std::size_t i = 0; i < word.size(); ++i) {
        FormulaPtr c = psi_cycle(static_cast<int>(i) + 3);
        conj.push_back(word[i] == '1' ? c : lnot(c));
    }
    return land(conj);
}

// disjoint union of d-cliques and at most one r-clique (0 <= r < d)
inline FormulaPtr clique_partition(int d, int r) {
    if (!(0 <= r && r < d)) throw std::invalid_argument("clique_partition: 0 <= r < d");
    std::vector<FormulaPtr> conj;
    conj.push_back(forall(
        "pa", forall("pb", forall("pc", implies(land({atom("E", {"pa", "pb"}),
                                                      atom("E", {"pa", "pc"}), neq("pb", "pc")}),
                                                atom("E", {"pb", "pc"}))))));
    if (r == 0) {
        conj.push_back(forall("pv", deg_exact("pv", d - 1)));
    } else {
        conj.push_back(forall("pv", lor({deg_exact("pv", d - 1), deg_exact("pv", r - 1)})));
        conj.push_back(forall(
            "pu", forall("pw", implies(land({deg_exact("pu", r - 1), deg_exact("pw", r - 1)}),
                                       lor({eq("pu", "pw"), atom("E", {"pu", "pw"})})))));
    }
    return land(conj);
}

// contains an isolated r-clique (a component that is K_r)
inline FormulaPtr isolated_clique(int r) {
    using gadget_detail::var;
    if (r < 1) throw std::invalid_argument("isolated_clique: r >= 1");
    std::vector<std::string> vs;
    for (int i = 1; i <= r; ++i) vs.push_back(var("k", i));
    std::vector<FormulaPtr> conj = gadget_detail::pairwise_distinct(vs);
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) conj.push_back(atom("E", {vs[i], vs[j]}));
    for (int i = 0; i < r; ++i) {
        std::vector<FormulaPtr> allowed;
        for (int j = 0; j < r; ++j) allowed.push_back(eq("kz", vs[j]));
        conj.push_back(forall("kz", implies(atom("E", {vs[i], "kz"}), lor(allowed))));
    }
    FormulaPtr body = land(conj);
    for (int i = r; i >= 1; --i) body = exists(vs[i - 1], body);
    return body;
}

// contains a clique on k vertices
inline FormulaPtr has_clique(int k) {
    using gadget_detail::var;
    if (k < 1) throw std::invalid_argument("has_clique: k >= 1");
    if (k == 1) return exists("k1", eq("k1", "k1"));
    std::vector<std::string> vs;
    for (int i = 1; i <= k; ++i) vs.push_back(var("k", i));
    std::vector<FormulaPtr> conj = gadget_detail::pairwise_distinct(vs);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) conj.push_back(atom("E", {vs[i], vs[j]}));
    FormulaPtr body = land(conj);
    for (int i = k; i >= 1; --i) body = exists(vs[i - 1], body);
    return body;
}

// contains an inclusion-maximal clique of size d
inline FormulaPtr max_clique(int d) {
    using gadget_detail::var;
    if (d < 1) throw std::invalid_argument("max_clique: d >= 1");
    std::vector<std::string> vs;
    for (int i = 1; i <= d; ++i) vs.push_back(var("k", i));
    std::vector<FormulaPtr> conj = gadget_detail::pairwise_distinct(vs);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) conj.push_back(atom("E", {vs[i], vs[j]}));
    std::vector<FormulaPtr> ext;
    for (int i = 0; i < d; ++i) ext.push_back(atom("E", {"ky", vs[i]}));
    conj.push_back(lnot(exists("ky", land(ext))));
    FormulaPtr body = land(conj);
    for (int i = d; i >= 1; --i) body = exists(vs[i - 1], body);
    return body;
}

// being isomorphic to K_s x K_t for some s,t >= 1: every neighbourhood splits
// into two disjoint cliques; non-adjacent pairs share exactly two mutually
// non-adjacent neighbours; non-adjacent neighbour pairs of a vertex have a
// unique second common neighbour
inline FormulaPtr kskt_recognizer() {
    FormulaPtr e_vx = atom("E", {"v", "x"});
    FormulaPtr e_vy = atom("E", {"v", "y"});
    FormulaPtr e_vz = atom("E", {"v", "z"});
    FormulaPtr cond_a1 = forall(
        "v", forall("x", forall("y", forall("z", implies(land({e_vx, e_vy, e_vz,
                                                               atom("E", {"x", "y"}),
                                                               atom("E", {"y", "z"}), neq("x", "z")}),
                                                         atom("E", {"x", "z"}))))));
    FormulaPtr cond_a2 = forall(
        "v",
        forall("x", forall("y", forall("z", implies(land({e_vx, e_vy, e_vz, neq("x", "y"),
                                                          neq("y", "z"), neq("x", "z")}),
                                                    lor({atom("E", {"x", "y"}),
                                                         atom("E", {"y", "z"}),
                                                         atom("E", {"x", "z"})}))))));
    FormulaPtr two_common = exists(
        "x", exists("y", land({neq("x", "y"), atom("E", {"u", "x"}), atom("E", {"v", "x"}),
                               atom("E", {"u", "y"}), atom("E", {"v", "y"}),
                               lnot(atom("E", {"x", "y"})),
                               forall("z", implies(land({atom("E", {"u", "z"}),
                                                         atom("E", {"v", "z"})}),
                                                   lor({eq("z", "x"), eq("z", "y")})))})));
    FormulaPtr cond_b =
        forall("u", forall("v", implies(land({neq("u", "v"), lnot(atom("E", {"u", "v"}))}),
                                        two_common)));
    FormulaPtr cond_c = forall(
        "v", forall("x", forall("y", implies(land({e_vx, e_vy, neq("x", "y"),
                                                   lnot(atom("E", {"x", "y"}))}),
                                             exists1("u", land({neq("u", "v"),
                                                                atom("E", {"u", "x"}),
                                                                atom("E", {"u", "y"})}))))));
    return land({cond_a1, cond_a2, cond_b, cond_c});
}

// every pair of k-sets extends: for each choice of k distinct vertices and
// each adjacency pattern, some fresh vertex realizes the pattern
inline FormulaPtr extension_axiom(int k) {
    using gadget_detail::var;
    if (k < 1) throw std::invalid_argument("extension_axiom: k >= 1");
    std::vector<std::string> vs;
    for (int i = 1; i <= k; ++i) vs.push_back(var("x", i));
    std::vector<FormulaPtr> conj;
    for (int mask = 0; mask < (1 << k); ++mask) {
        std::vector<FormulaPtr> want;
        for (int i = 0; i < k; ++i) {
            want.push_back(neq("y", vs[i]));
            FormulaPtr e = atom("E", {"y", vs[i]});
            want.push_back((mask >> i) & 1 ? e : lnot(e));
        }
        FormulaPtr inner = exists("y", land(want));
        std::vector<FormulaPtr> guard = gadget_detail::pairwise_distinct(vs);
        FormulaPtr clause = guard.empty() ? inner : implies(land(guard), inner);
        for (int i = k; i >= 1; --i) clause = forall(vs[i - 1], clause);
        conj.push_back(clause);
    }
    return land(conj);
}

inline FormulaPtr empty_graph_sentence() {
    return forall("x", forall("y", lnot(atom("E", {"x", "y"}))));
}

} // namespace relic
