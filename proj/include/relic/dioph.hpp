#pragma once

#include "relic/gadgets.hpp"

#include <cctype>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace relic {

// ---------------------------------------------------------------------------
// Polynomial equations over the integers compiled to graph sentences whose
// finite models encode positive solutions of an occurrence/operation system.
// ---------------------------------------------------------------------------

struct Monomial {
    long long coeff = 0;
    std::map<std::string, int> powers; // variable -> exponent (empty = constant)
};

struct Polynomial {
    std::vector<Monomial> monomials; // textual order, used for reproducible indices

    // grammar: term (('+'|'-') term)*, term = [int]['*']? var('^'int)? ('*' var('^'int))*
    static Polynomial parse(const std::string& text) {
        Polynomial p;
        std::size_t i = 0;
        auto skip = [&] {
            while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        };
        auto read_int = [&]() -> long long {
            std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            if (i == start) throw std::invalid_argument("polynomial: expected integer");
            return std::stoll(text.substr(start, i - start));
        };
        auto read_var = [&]() -> std::string {
            std::size_t start = i;
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
                ++i;
            if (i == start) throw std::invalid_argument("polynomial: expected variable");
            return text.substr(start, i - start);
        };
        bool first = true;
        while (true) {
            skip();
            if (i >= text.size()) break;
            long long sign = 1;
            if (text[i] == '+') {
                ++i;
            } else if (text[i] == '-') {
                sign = -1;
                ++i;
            } else if (!first) {
                throw std::invalid_argument("polynomial: expected + or -");
            }
            first = false;
            skip();
            Monomial m;
            m.coeff = sign;
            bool saw_factor = false;
            if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                m.coeff *= read_int();
                saw_factor = true;
            }
            while (true) {
                skip();
                if (i < text.size() && text[i] == '*') {
                    ++i;
                    skip();
                }
                if (i >= text.size() || !std::isalpha(static_cast<unsigned char>(text[i]))) break;
                std::string v = read_var();
                int e = 1;
                skip();
                if (i < text.size() && text[i] == '^') {
                    ++i;
                    skip();
                    e = static_cast<int>(read_int());
                }
                m.powers[v] += e;
                saw_factor = true;
            }
            if (!saw_factor) throw std::invalid_argument("polynomial: empty term");
            p.monomials.push_back(std::move(m));
        }
        if (p.monomials.empty()) throw std::invalid_argument("polynomial: empty input");
        return p;
    }

    std::vector<std::string> variables() const {
        std::vector<std::string> out;
        for (const auto& m : monomials)
            for (const auto& [v, e] : m.powers)
                if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
        return out;
    }

    long long evaluate(const std::map<std::string, long long>& assign) const {
        long long acc = 0;
        for (const auto& m : monomials) {
            long long term = m.coeff;
            for (const auto& [v, e] : m.powers)
                for (int k = 0; k < e; ++k) term *= assign.at(v);
            acc += term;
        }
        return acc;
    }

    // substitute every variable x by the difference of two fresh positive
    // variables xp - xm and expand
    Polynomial difference_substituted() const {
        Polynomial out;
        std::map<std::map<std::string, int>, long long> acc;
        for (const auto& m : monomials) {
            // expand the product of (xp - xm) factors
            std::vector<std::map<std::string, int>> partial_powers{{}};
            std::vector<long long> partial_coeffs{m.coeff};
            for (const auto& [v, e] : m.powers) {
                for (int k = 0; k < e; ++k) {
                    std::vector<std::map<std::string, int>> np;
                    std::vector<long long> nc;
                    for (std::size_t t = 0; t < partial_powers.size(); ++t) {
                        auto a = partial_powers[t];
                        a[v + "_p"] += 1;
                        np.push_back(a);
                        nc.push_back(partial_coeffs[t]);
                        auto b = partial_powers[t];
                        b[v + "_m"] += 1;
                        np.push_back(b);
                        nc.push_back(-partial_coeffs[t]);
                    }
                    partial_powers = std::move(np);
                    partial_coeffs = std::move(nc);
                }
            }
            for (std::size_t t = 0; t < partial_powers.size(); ++t)
                acc[partial_powers[t]] += partial_coeffs[t];
        }
        for (const auto& [pw, c] : acc) {
            if (c == 0) continue;
            Monomial m;
            m.coeff = c;
            m.powers = pw;
            out.monomials.push_back(std::move(m));
        }
        if (out.monomials.empty()) { // identically zero
            Monomial zero;
            zero.coeff = 0;
            out.monomials.push_back(zero);
        }
        return out;
    }
};

struct DiophEquation {
    enum class Kind { Copy, Sum, Prod } kind;
    int d = 0, i = 0, j = 0; // Copy: t_d = t_i; Sum/Prod: t_d = t_i (+|*) t_j
};

// Occurrence/operation system: variables t_1..t_N; the first `occurrences`
// of them stand for variable occurrences (plus unit occurrences when a
// constant term needs the number one), the rest are operation results. All
// copies precede the operations; every operation introduces a fresh
// variable; the final equation is t_q = t_p.
struct DiophSystem {
    int total_vars = 0;
    int occurrences = 0;
    std::vector<DiophEquation> copies;
    std::vector<DiophEquation> ops;
    int q = 0, p = 0;
    std::vector<std::string> labels; // 1-based label per variable

    bool satisfied(const std::vector<long long>& t) const { // t is 1-based padded
        auto val = [&](int k) { return t[k]; };
        for (const auto& e : copies)
            if (val(e.d) != val(e.i)) return false;
        for (const auto& e : ops) {
            long long expect =
                e.kind == DiophEquation::Kind::Sum ? val(e.i) + val(e.j) : val(e.i) * val(e.j);
            if (val(e.d) != expect) return false;
        }
        return val(q) == val(p);
    }
};

enum class DiophDomain { Integers, Positives };

struct DiophCompilation {
    DiophSystem system;
    FormulaPtr psi; // models encode positive solutions
    FormulaPtr phi; // empty-or-psi
};

namespace detail_dioph {

struct SystemBuilder {
    DiophSystem sys;
    std::map<std::string, std::vector<int>> occurrences_of;
    int unit_first = 0; // first unit occurrence, 0 if none yet

    int fresh(const std::string& label) {
        sys.labels.push_back(label);
        return ++sys.total_vars;
    }

    int occurrence(const std::string& var) {
        int t = fresh(var);
        occurrences_of[var].push_back(t);
        return t;
    }

    int unit_occurrence() {
        int t = occurrence("$one");
        if (!unit_first) unit_first = t;
        return t;
    }

    int sum(int i, int j) {
        int d = fresh("+");
        sys.ops.push_back({DiophEquation::Kind::Sum, d, i, j});
        return d;
    }
    int prod(int i, int j) {
        int d = fresh("*");
        sys.ops.push_back({DiophEquation::Kind::Prod, d, i, j});
        return d;
    }

    // one monomial: coeff copies of the variable-power product, summed
    int monomial(const Monomial& m) {
        if (m.coeff < 1) throw std::logic_error("monomial with nonpositive coefficient");
        std::vector<int> copies;
        for (long long c = 0; c < m.coeff; ++c) {
            std::vector<int> factors;
            for (const auto& [v, e] : m.powers)
                for (int k = 0; k < e; ++k) factors.push_back(occurrence(v));
            if (factors.empty()) factors.push_back(unit_occurrence());
            int acc = factors[0];
            for (std::size_t k = 1; k < factors.size(); ++k) acc = prod(acc, factors[k]);
            copies.push_back(acc);
        }
        int acc = copies[0];
        for (std::size_t k = 1; k < copies.size(); ++k) acc = sum(acc, copies[k]);
        return acc;
    }

    int side(const std::vector<Monomial>& ms) {
        std::vector<int> vals;
        for (const auto& m : ms) vals.push_back(monomial(m));
        int acc = vals[0];
        for (std::size_t k = 1; k < vals.size(); ++k) acc = sum(acc, vals[k]);
        return acc;
    }

    void finish(int q, int p) {
        // occurrence copy equations
        for (const auto& [v, occ] : occurrences_of)
            for (std::size_t k = 1; k < occ.size(); ++k)
                sys.copies.push_back({DiophEquation::Kind::Copy, occ[k], occ[0], 0});
        // pin the unit variable to 1: u*u = u over the positives
        if (unit_first) {
            int second = occurrences_of["$one"].size() >= 2 ? occurrences_of["$one"][1] : 0;
            if (!second) {
                second = unit_occurrence();
                sys.copies.push_back({DiophEquation::Kind::Copy, second, unit_first, 0});
            }
            int w = prod(unit_first, second);
            sys.copies.push_back({DiophEquation::Kind::Copy, w, unit_first, 0});
        }
        sys.occurrences = 0;
        for (const auto& [v, occ] : occurrences_of) sys.occurrences += static_cast<int>(occ.size());
        sys.q = q;
        sys.p = p;
    }
};

} // namespace detail_dioph

// --- sentence pieces over the graph signature --------------------------------

// v has at least k neighbours of degree 1
inline FormulaPtr leaf_nbrs_geq(const std::string& v, int k) {
    std::vector<std::string> qs;
    for (int i = 1; i <= k; ++i) qs.push_back("f" + std::to_string(i));
    std::vector<FormulaPtr> conj = gadget_detail::pairwise_distinct(qs);
    for (const auto& q : qs) {
        conj.push_back(atom("E", {v, q}));
        conj.push_back(deg_exact(q, 1));
    }
    FormulaPtr body = land(conj);
    for (int i = k; i >= 1; --i) body = exists(qs[i - 1], body);
    return body;
}

// v has exactly 2i+1 neighbours of degree 1
inline FormulaPtr leaf_type(const std::string& v, int i) {
    return land({leaf_nbrs_geq(v, 2 * i + 1), lnot(leaf_nbrs_geq(v, 2 * i + 2))});
}

inline FormulaPtr dioph_psi(const DiophSystem& sys) {
    int n_types = sys.total_vars;
    std::vector<FormulaPtr> clauses;
    // every vertex has a neighbour; every vertex of degree >= 2 carries a type
    {
        std::vector<FormulaPtr> types;
        for (int i = 1; i <= n_types; ++i) types.push_back(leaf_type("v", i));
        clauses.push_back(
            forall("v", land({deg_geq("v", 1), implies(deg_geq("v", 2), lor(types))})));
    }
    auto equal_clause = [&](int i, int j) {
        return land({forall("v", implies(leaf_type("v", i),
                                         exists1("u", land({leaf_type("u", j),
                                                            atom("E", {"u", "v"})})))),
                     forall("v", implies(leaf_type("v", j),
                                         exists1("u", land({leaf_type("u", i),
                                                            atom("E", {"u", "v"})}))))});
    };
    for (const auto& e : sys.copies) clauses.push_back(equal_clause(e.d, e.i));
    for (const auto& e : sys.ops) {
        if (e.kind == DiophEquation::Kind::Sum) {
            FormulaPtr side_ij = lor({leaf_type("u", e.i), leaf_type("u", e.j)});
            clauses.push_back(land(
                {forall("v", implies(leaf_type("v", e.d),
                                     exists1("u", land({side_ij, atom("E", {"u", "v"})})))),
                 forall("u", implies(side_ij, exists1("v", land({leaf_type("v", e.d),
                                                                 atom("E", {"v", "u"})}))))}));
        } else {
            // bijection between the d-class and pairs (i-class, j-class):
            // each d-vertex is adjacent to exactly one such pair, and every
            // pair has exactly one common d-neighbour
            FormulaPtr pairs_unique = forall(
                "v",
                implies(leaf_type("v", e.d),
                        exists("u", exists("w", land({leaf_type("u", e.i), leaf_type("w", e.j),
                                                      atom("E", {"u", "v"}), atom("E", {"w", "v"}),
                                                      forall("u2",
                                                             forall("w2",
                                                                    implies(land({leaf_type("u2", e.i),
                                                                                  leaf_type("w2", e.j),
                                                                                  atom("E", {"u2", "v"}),
                                                                                  atom("E", {"w2", "v"})}),
                                                                            land({eq("u2", "u"),
                                                                                  eq("w2", "w")}))))})))));
            FormulaPtr pair_covered = forall(
                "u", forall("w", implies(land({leaf_type("u", e.i), leaf_type("w", e.j)}),
                                         exists1("v", land({leaf_type("v", e.d),
                                                            atom("E", {"u", "v"}),
                                                            atom("E", {"w", "v"})})))));
            clauses.push_back(land({pairs_unique, pair_covered}));
        }
    }
    clauses.push_back(equal_clause(sys.q, sys.p));
    // every type class is inhabited, so models decode to positive solutions
    for (int i = 1; i <= n_types; ++i)
        clauses.push_back(exists("v", leaf_type("v", i)));
    return land(clauses);
}

inline DiophCompilation compile_diophantine(const Polynomial& input,
                                            DiophDomain domain = DiophDomain::Integers) {
    Polynomial poly = domain == DiophDomain::Integers ? input.difference_substituted() : input;
    std::vector<Monomial> qside, rside;
    for (const auto& m : poly.monomials) {
        if (m.coeff > 0) qside.push_back(m);
        if (m.coeff < 0) {
            Monomial neg = m;
            neg.coeff = -neg.coeff;
            rside.push_back(neg);
        }
    }
    if (qside.empty() || rside.empty())
        throw std::invalid_argument(
            "polynomial has monomials of one sign only; the equation has no positive split");
    detail_dioph::SystemBuilder b;
    int q = b.side(qside);
    int p = b.side(rside);
    b.finish(q, p);
    DiophCompilation out;
    out.system = std::move(b.sys);
    out.psi = dioph_psi(out.system);
    out.phi = lor({empty_graph_sentence(), out.psi});
    return out;
}

inline DiophCompilation compile_diophantine(const std::string& text,
                                            DiophDomain domain = DiophDomain::Integers) {
    return compile_diophantine(Polynomial::parse(text), domain);
}

// --- witness graphs -----------------------------------------------------------

// Builds the graph encoding a full positive assignment of the system: one
// class of t_i vertices per variable, 2i+1 private leaves per class vertex,
// matchings for copies and the final equation, the sum/product wirings for
// operations.
inline Structure dioph_witness(const DiophSystem& sys, const std::vector<long long>& assign1) {
    if (static_cast<int>(assign1.size()) != sys.total_vars)
        throw std::invalid_argument("witness: assignment length must equal variable count");
    std::vector<long long> padded(sys.total_vars + 1, 0);
    for (int i = 1; i <= sys.total_vars; ++i) {
        if (assign1[i - 1] < 1)
            throw std::invalid_argument("witness: assignment must be positive");
        padded[i] = assign1[i - 1];
    }
    if (!sys.satisfied(padded))
        throw std::invalid_argument("witness: assignment violates an equation");

    std::vector<std::vector<int>> cls(sys.total_vars + 1);
    int next = 0;
    for (int i = 1; i <= sys.total_vars; ++i)
        for (long long k = 0; k < padded[i]; ++k) cls[i].push_back(next++);
    int leaves_start = next;
    int total_leaves = 0;
    for (int i = 1; i <= sys.total_vars; ++i)
        total_leaves += static_cast<int>(padded[i]) * (2 * i + 1);
    Structure g = make_graph(leaves_start + total_leaves);

    int leaf = leaves_start;
    for (int i = 1; i <= sys.total_vars; ++i)
        for (int v : cls[i])
            for (int k = 0; k < 2 * i + 1; ++k) add_edge(g, v, leaf++);

    auto add_matching = [&](int a, int b) {
        // reuse an existing perfect matching if the two classes are already wired
        int existing = 0;
        for (int u : cls[a])
            for (int v : cls[b])
                if (has_edge(g, u, v)) ++existing;
        if (existing == static_cast<int>(cls[a].size()) && cls[a].size() == cls[b].size()) {
            bool perfect = true;
            for (int u : cls[a]) {
                int c = 0;
                for (int v : cls[b])
                    if (has_edge(g, u, v)) ++c;
                if (c != 1) perfect = false;
            }
            if (perfect) return;
        }
        if (existing != 0) throw std::logic_error("witness: conflicting edges between classes");
        for (std::size_t k = 0; k < cls[a].size(); ++k) add_edge(g, cls[a][k], cls[b][k]);
    };

    for (const auto& e : sys.copies) add_matching(e.d, e.i);
    for (const auto& e : sys.ops) {
        if (e.kind == DiophEquation::Kind::Sum) {
            std::size_t k = 0;
            for (int u : cls[e.i]) add_edge(g, cls[e.d][k++], u);
            for (int u : cls[e.j]) add_edge(g, cls[e.d][k++], u);
        } else {
            std::size_t k = 0;
            for (int u : cls[e.i])
                for (int w : cls[e.j]) {
                    add_edge(g, cls[e.d][k], u);
                    add_edge(g, cls[e.d][k], w);
                    ++k;
                }
        }
    }
    add_matching(sys.q, sys.p);
    return g;
}

// witness plus k isolated edges
inline Structure with_isolated_edges(const Structure& g, int k) {
    Structure out = make_graph(g.n() + 2 * k);
    for (int u = 0; u < g.n(); ++u)
        for (int v = u + 1; v < g.n(); ++v)
            if (has_edge(g, u, v)) add_edge(out, u, v);
    for (int i = 0; i < k; ++i) add_edge(out, g.n() + 2 * i, g.n() + 2 * i + 1);
    return out;
}

} // namespace relic
