#pragma once

#include "relic/gadgets.hpp"

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace relic {

// ---------------------------------------------------------------------------
// Expansion-family sentence: graphs assembled from 5-vertex arc gadgets over
// a functional digraph core. Vertices fall into six degree-profile types.
// ---------------------------------------------------------------------------

// x has degree j and its neighbours have degrees profile[0..j-1]
inline FormulaPtr type_formula(const std::string& x, const std::vector<int>& profile) {
    using gadget_detail::var;
    int j = static_cast<int>(profile.size());
    std::vector<FormulaPtr> conj{deg_exact(x, j)};
    std::vector<std::string> qs;
    for (int i = 1; i <= j; ++i) qs.push_back(var("t", i));
    std::vector<FormulaPtr> inner = gadget_detail::pairwise_distinct(qs);
    for (int i = 0; i < j; ++i) {
        inner.push_back(atom("E", {x, qs[i]}));
        inner.push_back(deg_exact(qs[i], profile[i]));
    }
    FormulaPtr body = land(inner);
    for (int i = j; i >= 1; --i) body = exists(qs[i - 1], body);
    conj.push_back(body);
    return land(conj);
}

// the six admissible degree profiles
inline const std::vector<std::vector<int>>& expansion_profiles() {
    static const std::vector<std::vector<int>> profiles = {
        {2}, {3}, {1, 3}, {3, 3}, {1, 2, 3}, {2, 2, 3}};
    return profiles;
}

inline FormulaPtr phi_expansion() {
    auto t = [](const std::vector<int>& p) { return type_formula("x", p); };
    const auto& pr = expansion_profiles();
    FormulaPtr t2 = t(pr[0]), t3 = t(pr[1]), t13 = t(pr[2]), t33 = t(pr[3]), t123 = t(pr[4]),
               t223 = t(pr[5]);
    std::vector<FormulaPtr> clauses;
    clauses.push_back(forall("x", lor({t2, t3, t13, t33, t123, t223})));
    clauses.push_back(forall(
        "x", implies(t123, exists("y", land({type_formula("y", pr[5]), atom("E", {"x", "y"})})))));
    clauses.push_back(forall(
        "x", implies(t223, exists("y", land({type_formula("y", pr[4]), atom("E", {"x", "y"})})))));
    clauses.push_back(forall(
        "x", implies(lor({t223, t123}),
                     exists1("y", land({type_formula("y", pr[3]), atom("E", {"x", "y"})})))));
    clauses.push_back(forall(
        "x", implies(t33, exists("y", exists("z", land({type_formula("y", pr[4]),
                                                        type_formula("z", pr[5]),
                                                        atom("E", {"x", "y"}),
                                                        atom("E", {"x", "z"})}))))));
    return land(clauses);
}

// Structural recognizer for the same class; mirrors the sentence clause by
// clause on degree profiles, so exhaustive counts can skip the evaluator.
inline bool expansion_recognize(const Structure& g) {
    int n = g.n();
    std::vector<int> deg(n, 0);
    std::vector<std::vector<int>> nbr(n);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (v != u && has_edge(g, u, v)) {
                nbr[u].push_back(v);
                ++deg[u];
            }
    // type ids: 0..5 matching expansion_profiles(), -1 otherwise
    std::vector<int> type(n, -1);
    for (int u = 0; u < n; ++u) {
        std::vector<int> profile;
        for (int v : nbr[u]) profile.push_back(deg[v]);
        std::sort(profile.begin(), profile.end());
        const auto& known = expansion_profiles();
        for (std::size_t k = 0; k < known.size(); ++k)
            if (profile == known[k]) type[u] = static_cast<int>(k);
        if (type[u] < 0) return false;
    }
    auto count_nbr_of_type = [&](int u, int t) {
        int c = 0;
        for (int v : nbr[u])
            if (type[v] == t) ++c;
        return c;
    };
    for (int u = 0; u < n; ++u) {
        if (type[u] == 4 && count_nbr_of_type(u, 5) < 1) return false;
        if (type[u] == 5 && count_nbr_of_type(u, 4) < 1) return false;
        if ((type[u] == 4 || type[u] == 5) && count_nbr_of_type(u, 3) != 1) return false;
        if (type[u] == 3 && (count_nbr_of_type(u, 4) < 1 || count_nbr_of_type(u, 5) < 1))
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Ladder-family sentence. The pattern clauses walk the chain with reused
// variables (the chain has degree <= 2 inside its class, so continuations
// are unique), which keeps every subformula within the evaluator's width
// budget while expressing the same constraints on models of the whole
// conjunction.
// ---------------------------------------------------------------------------

namespace ladder_detail {

inline FormulaPtr w_pred(const std::string& x) {
    return land({deg_exact(x, 1),
                 exists("lw", land({atom("E", {x, "lw"}), deg_geq("lw", 3)}))});
}
inline FormulaPtr v_pred(const std::string& x) {
    return exists1("lv", land({atom("E", {x, "lv"}), w_pred("lv")}));
}
inline FormulaPtr u_pred(const std::string& x) {
    return land({lnot(w_pred(x)),
                 lnot(exists("lu", land({atom("E", {x, "lu"}), w_pred("lu")})))});
}

// at least k neighbours satisfying a unary guard
inline FormulaPtr guarded_deg_geq(const std::string& x, int k,
                                  const std::function<FormulaPtr(const std::string&)>& guard,
                                  const std::string& prefix) {
    std::vector<std::string> qs;
    for (int i = 1; i <= k; ++i) qs.push_back(prefix + std::to_string(i));
    std::vector<FormulaPtr> conj = gadget_detail::pairwise_distinct(qs);
    for (const auto& q : qs) {
        conj.push_back(atom("E", {x, q}));
        conj.push_back(guard(q));
    }
    FormulaPtr body = land(conj);
    for (int i = k; i >= 1; --i) body = exists(qs[i - 1], body);
    return body;
}

// perfect matching between {q : psi1(q)} and {q : psi2(q)}
inline FormulaPtr matching(const std::function<FormulaPtr(const std::string&)>& psi1,
                           const std::function<FormulaPtr(const std::string&)>& psi2) {
    FormulaPtr disjoint = forall("mq", lnot(land({psi1("mq"), psi2("mq")})));
    FormulaPtr left = forall(
        "mq", implies(psi1("mq"), exists1("mr", land({atom("E", {"mq", "mr"}), psi2("mr")}))));
    FormulaPtr right = forall(
        "mq", implies(psi2("mq"), exists1("mr", land({atom("E", {"mq", "mr"}), psi1("mr")}))));
    return land({disjoint, left, right});
}

inline FormulaPtr v_matching(const std::string& y, const std::string& yp) {
    auto psi1 = [&](const std::string& q) { return land({v_pred(q), atom("E", {q, y})}); };
    auto psi2 = [&](const std::string& q) { return land({v_pred(q), atom("E", {q, yp})}); };
    return matching(psi1, psi2);
}

// the bipartite graph between the V-neighbourhoods of y and y' is a matching
// plus one unmatched vertex on the y' side
inline FormulaPtr v_almost_matching(const std::string& y, const std::string& yp) {
    auto psi1 = [&](const std::string& q) { return land({v_pred(q), atom("E", {q, y})}); };
    auto psi2 = [&](const std::string& q) {
        return land({v_pred(q), atom("E", {q, yp}), neq(q, "ls")});
    };
    FormulaPtr unmatched = forall(
        "lz", implies(land({v_pred("lz"), atom("E", {y, "lz"})}), lnot(atom("E", {"lz", "ls"}))));
    return exists("ls", land({v_pred("ls"), atom("E", {yp, "ls"}), unmatched,
                              matching(psi1, psi2)}));
}

inline FormulaPtr a_step(const std::string& a, const std::string& b) {
    return lor({v_almost_matching(a, b), v_almost_matching(b, a)});
}
inline FormulaPtr u_step(const std::string& a, const std::string& b) {
    return land({u_pred(a), u_pred(b), atom("E", {a, b})});
}

// StepKind per position of a walk built with reused variables
enum class Step { Any, Match, Almost, AlmostFwd };

// exists a non-backtracking chain of U-vertices of the given length starting
// with the step (a,b), whose steps satisfy the per-position constraints;
// end_pred, when set, constrains the final vertex
inline FormulaPtr walk_chain(const std::string& a, const std::string& b,
                             const std::vector<Step>& steps,
                             const std::function<FormulaPtr(const std::string&)>& end_pred = {}) {
    int k = static_cast<int>(steps.size());
    // vertices c0=a, c1=b, c2..ck fresh
    std::vector<std::string> vs{a, b};
    for (int i = 2; i <= k; ++i) vs.push_back("lc" + std::to_string(i));
    auto step_formula = [&](int pos) -> FormulaPtr { // step between vs[pos-1], vs[pos]
        switch (steps[pos - 1]) {
        case Step::Any:
            return nullptr;
        case Step::Match:
            return v_matching(vs[pos - 1], vs[pos]);
        case Step::Almost:
            return a_step(vs[pos - 1], vs[pos]);
        case Step::AlmostFwd:
            return v_almost_matching(vs[pos - 1], vs[pos]);
        }
        return nullptr;
    };
    // innermost to outermost
    FormulaPtr body = end_pred ? end_pred(vs[k]) : nullptr;
    for (int pos = k; pos >= 2; --pos) {
        std::vector<FormulaPtr> conj{u_step(vs[pos - 1], vs[pos]), neq(vs[pos], vs[pos - 2])};
        if (FormulaPtr sf = step_formula(pos)) conj.push_back(sf);
        if (body) conj.push_back(body);
        body = exists(vs[pos], land(conj));
    }
    std::vector<FormulaPtr> first;
    if (FormulaPtr sf = step_formula(1)) first.push_back(sf);
    if (body) first.push_back(body);
    if (first.empty()) first.push_back(u_step(a, b));
    return land(first);
}

inline FormulaPtr u_start(const std::string& x) { return land({u_pred(x), deg_exact(x, 1)}); }
inline FormulaPtr u_end(const std::string& x) {
    return land({u_pred(x), deg_geq(x, 2),
                 exists1("le", land({u_pred("le"), atom("E", {x, "le"})}))});
}

} // namespace ladder_detail

// recognizes the ladder family up to isomorphism
inline FormulaPtr phi_ladder() {
    using namespace ladder_detail;
    std::vector<FormulaPtr> clauses;
    // Types
    clauses.push_back(forall("x", lor({w_pred("x"), v_pred("x"), u_pred("x")})));
    // UDeg: inside the U class, degrees are 1 or 2, with exactly two of degree 1
    auto u_guard = [](const std::string& q) { return u_pred(q); };
    FormulaPtr udeg1 = land({guarded_deg_geq("x", 1, u_guard, "ud"),
                             lnot(guarded_deg_geq("x", 3, u_guard, "ud"))});
    clauses.push_back(forall("x", implies(u_pred("x"), udeg1)));
    auto u_deg_one = [&](const std::string& x) {
        auto g = [](const std::string& q) { return u_pred(q); };
        return land({u_pred(x), guarded_deg_geq(x, 1, g, "ue"),
                     lnot(guarded_deg_geq(x, 2, g, "ue"))});
    };
    clauses.push_back(exists(
        "ea", exists("eb", land({neq("ea", "eb"), u_deg_one("ea"), u_deg_one("eb"),
                                 forall("ec", implies(u_deg_one("ec"),
                                                      lor({eq("ec", "ea"), eq("ec", "eb")})))}))));
    // VDeg: inside the V class, degrees are 1 or 2
    auto v_guard = [](const std::string& q) { return v_pred(q); };
    clauses.push_back(forall(
        "x", implies(v_pred("x"), land({guarded_deg_geq("x", 1, v_guard, "vd"),
                                        lnot(guarded_deg_geq("x", 3, v_guard, "vd"))}))));
    // VUEdges: every V-vertex has exactly one U-neighbour
    clauses.push_back(forall(
        "x", implies(v_pred("x"),
                     exists1("vu", land({u_pred("vu"), atom("E", {"x", "vu"})})))));
    // VUSquare: V-adjacency projects to U-adjacency
    clauses.push_back(forall(
        "x", forall("y", implies(land({v_pred("x"), v_pred("y"), atom("E", {"x", "y"})}),
                                 exists("sa", exists("sb", land({u_pred("sa"), u_pred("sb"),
                                                                 atom("E", {"x", "sa"}),
                                                                 atom("E", {"y", "sb"}),
                                                                 atom("E", {"sa", "sb"})})))))));
    // Pattern 1: along any 6-step chain, five matching steps and one almost step
    {
        std::vector<FormulaPtr> one_of;
        for (int i = 1; i <= 6; ++i) {
            std::vector<Step> steps(6, Step::Match);
            steps[i - 1] = Step::Almost;
            one_of.push_back(walk_chain("wa", "wb", steps));
        }
        FormulaPtr exists6 = walk_chain("wa", "wb", std::vector<Step>(6, Step::Any));
        clauses.push_back(forall(
            "wa", forall("wb", implies(land({u_step("wa", "wb"), exists6}), lor(one_of)))));
    }
    // Pattern 2: chains from the degree-1 end reach their almost step at
    // position 6; chains into the other end carry it at position 1
    {
        std::vector<Step> at6(6, Step::Any);
        at6[5] = Step::AlmostFwd;
        FormulaPtr exists6 = walk_chain("wa", "wb", std::vector<Step>(6, Step::Any));
        clauses.push_back(forall(
            "wa", forall("wb", implies(land({u_step("wa", "wb"), u_start("wa"), exists6}),
                                       walk_chain("wa", "wb", at6)))));
        FormulaPtr reach_end =
            walk_chain("wa", "wb", std::vector<Step>(6, Step::Any), ladder_detail::u_end);
        clauses.push_back(forall(
            "wa", forall("wb", implies(land({u_step("wa", "wb"), reach_end}),
                                       v_almost_matching("wa", "wb")))));
        clauses.push_back(exists("so", u_start("so")));
        clauses.push_back(exists("eo", u_end("eo")));
    }
    // Pattern 3: almost steps recur with period 6
    {
        std::vector<Step> at7(7, Step::Any);
        at7[6] = Step::AlmostFwd;
        FormulaPtr exists7 = walk_chain("wa", "wb", std::vector<Step>(7, Step::Any));
        clauses.push_back(forall(
            "wa",
            forall("wb", implies(land({u_step("wa", "wb"), v_almost_matching("wa", "wb"),
                                       exists7}),
                                 walk_chain("wa", "wb", at7)))));
    }
    return land(clauses);
}

// ---------------------------------------------------------------------------
// Clique-product family: models are K_d x L for a ladder L. Equality becomes
// triangle-equivalence, adjacency becomes class matching, plus a commuting
// condition on 4-cycles of classes.
// ---------------------------------------------------------------------------

inline FormulaPtr triangle_pred(const std::string& x, const std::string& y) {
    return lor({eq(x, y), exists("tt", land({atom("E", {x, y}), atom("E", {y, "tt"}),
                                             atom("E", {"tt", x})}))});
}

// the edges between the triangle classes of y and y' form a perfect matching
inline FormulaPtr tedge_pred(const std::string& y, const std::string& yp) {
    auto psi1 = [&](const std::string& q) { return triangle_pred(q, y); };
    auto psi2 = [&](const std::string& q) { return triangle_pred(q, yp); };
    return ladder_detail::matching(psi1, psi2);
}

inline FormulaPtr phi_product() {
    FormulaPtr tequiv = land(
        {forall("x", forall("y", forall("z", implies(land({triangle_pred("x", "y"),
                                                           triangle_pred("y", "z")}),
                                                     triangle_pred("x", "z"))))),
         forall("x", exists("y", exists("z", land({atom("E", {"x", "y"}), atom("E", {"y", "z"}),
                                                   atom("E", {"z", "x"})}))))});
    FormulaPtr no_edges = forall(
        "p", forall("q", implies(land({triangle_pred("p", "y"), triangle_pred("q", "z")}),
                                 lnot(atom("E", {"p", "q"})))));
    FormulaPtr tgraph = forall(
        "y", forall("z", implies(lnot(triangle_pred("y", "z")),
                                 lor({no_edges, tedge_pred("y", "z")}))));
    // ladder sentence transported along the quotient: equality becomes
    // triangle-equivalence, adjacency becomes class matching (including the
    // equalities introduced by desugaring)
    FormulaPtr ladder = desugar(phi_ladder());
    FormulaPtr quotient_eq;
    {
        // route through placeholder predicates, then substitute
        FormulaPtr staged = replace_atoms(ladder, [](const Formula& at) -> FormulaPtr {
            if (at.kind == FKind::Eq) return atom("QEQ", {at.vars[0], at.vars[1]});
            if (at.kind == FKind::Atom && at.sym == "E")
                return atom("QADJ", {at.vars[0], at.vars[1]});
            return nullptr;
        });
        std::map<std::string, PredicateDef> defs;
        defs["QEQ"] = {{"qa", "qb"}, triangle_pred("qa", "qb")};
        defs["QADJ"] = {{"qa", "qb"}, tedge_pred("qa", "qb")};
        quotient_eq = substitute_predicates(staged, defs);
    }
    // matchings across any 4-cycle of classes commute
    FormulaPtr tcommute = forall(
        "w0",
        forall("w1",
               forall("w2",
                      forall("w3",
                             implies(land({atom("E", {"w0", "w1"}), atom("E", {"w0", "w2"}),
                                           atom("E", {"w1", "w3"}),
                                           lnot(triangle_pred("w0", "w1")),
                                           lnot(triangle_pred("w0", "w2")),
                                           lnot(triangle_pred("w1", "w2")),
                                           lnot(triangle_pred("w1", "w3")),
                                           lnot(triangle_pred("w0", "w3")),
                                           tedge_pred("w2", "w3")}),
                                     atom("E", {"w2", "w3"}))))));
    return land({tequiv, tgraph, quotient_eq, tcommute});
}

inline FormulaPtr phi_product_d(int d) {
    if (d < 3) throw std::invalid_argument("phi_product_d: d >= 3");
    return land({phi_product(), has_clique(d), lnot(has_clique(d + 1))});
}

} // namespace relic
