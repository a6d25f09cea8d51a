#pragma once

#include "relic/dist.hpp"
#include "relic/eval.hpp"
#include "relic/formula.hpp"
#include "relic/perm.hpp"
#include "relic/rational.hpp"
#include "relic/structure.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace relic {

// Map from target relation symbols to defining formulas over the source
// signature: the image structure satisfies P(x...) iff the source satisfies
// the formula for P at x... .
struct ReductionSpec {
    SignaturePtr source;
    SignaturePtr target;
    std::map<std::string, PredicateDef> defs;

    void validate() const {
        for (const auto& sym : target->symbols()) {
            auto it = defs.find(sym.name);
            if (it == defs.end())
                throw std::invalid_argument("reduction misses target symbol " + sym.name);
            if (static_cast<int>(it->second.params.size()) != sym.arity)
                throw std::invalid_argument("parameter count mismatch for " + sym.name);
            for (const auto& v : free_vars(it->second.body))
                if (std::find(it->second.params.begin(), it->second.params.end(), v) ==
                    it->second.params.end())
                    throw std::invalid_argument("stray free variable in definition of " +
                                                sym.name);
        }
    }
};

inline Structure apply_reduction(const Structure& a, const ReductionSpec& r) {
    if (!(*a.signature() == *r.source))
        throw std::invalid_argument("apply_reduction: structure is not over the source signature");
    r.validate();
    Structure out(r.target, a.n());
    for (std::size_t s = 0; s < r.target->size(); ++s) {
        const auto& sym = r.target->at(s);
        const PredicateDef& def = r.defs.at(sym.name);
        auto bits = eval_relation(a, def.body, def.params);
        std::uint64_t total = out.table_bits(s);
        for (std::uint64_t idx = 0; idx < total; ++idx)
            if ((bits[idx >> 6] >> (idx & 63)) & 1u) out.set_index(s, idx, true);
    }
    return out;
}

// Sentence over the target pulled back to the source signature.
inline FormulaPtr translate(const FormulaPtr& phi, const ReductionSpec& r) {
    r.validate();
    return substitute_predicates(phi, r.defs);
}

// Syntactic composition: first `inner` (source -> mid), then `outer`
// (mid -> target); the result's definitions are outer's pulled back by inner.
inline ReductionSpec compose(const ReductionSpec& outer, const ReductionSpec& inner) {
    if (!(*outer.source == *inner.target))
        throw std::invalid_argument("compose: signature mismatch");
    ReductionSpec r;
    r.source = inner.source;
    r.target = outer.target;
    for (const auto& [name, def] : outer.defs) {
        PredicateDef nd;
        nd.params = def.params;
        nd.body = substitute_predicates(def.body, inner.defs);
        r.defs[name] = nd;
    }
    return r;
}

// Image law with masses aggregated over preimages; exact rationals.
inline std::vector<std::pair<Structure, Rational>>
pushforward_law(const DistributionSpec& spec, const ReductionSpec& r,
                std::uint64_t budget = (1u << 22)) {
    auto law = exact_law(spec, budget);
    std::map<Structure, Rational> agg;
    for (const auto& [st, mass] : law) agg[apply_reduction(st, r)] += mass;
    return {agg.begin(), agg.end()};
}

// Exact total variation distance between two laws on the same space.
inline Rational law_tv(const std::vector<std::pair<Structure, Rational>>& a,
                       const std::vector<std::pair<Structure, Rational>>& b) {
    std::map<Structure, Rational> diff;
    for (const auto& [st, m] : a) diff[st] += m;
    for (const auto& [st, m] : b) diff[st] -= m;
    Rational acc = 0;
    for (const auto& [st, d] : diff) acc += d < 0 ? Rational(-d) : d;
    return acc / 2;
}

// --- loopless transform -----------------------------------------------------
//
// For each symbol of arity a, one new symbol per set-partition of [a] with
// arity = number of blocks; forward evaluates the old symbol on the pattern
// tuple, backward reassembles the old symbol from the partition matching the
// tuple's equality pattern.

inline std::vector<std::vector<std::vector<int>>> set_partitions(int a) {
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<int> block_of(a, 0);
    struct Rec {
        int a;
        std::vector<int>& block_of;
        std::vector<std::vector<std::vector<int>>>& out;
        void go(int i, int nblocks) {
            if (i == a) {
                std::vector<std::vector<int>> part(nblocks);
                for (int j = 0; j < a; ++j) part[block_of[j]].push_back(j);
                out.push_back(part);
                return;
            }
            for (int b = 0; b <= nblocks; ++b) {
                block_of[i] = b;
                go(i + 1, std::max(nblocks, b + 1));
            }
        }
    };
    Rec rec{a, block_of, out};
    rec.go(0, 0);
    return out;
}

inline std::string partition_suffix(const std::vector<std::vector<int>>& part) {
    std::string s;
    for (const auto& block : part) {
        if (!s.empty()) s += "_";
        for (int v : block) s += std::to_string(v + 1);
    }
    return s;
}

struct LooplessTransform {
    SignaturePtr loopless_sig;
    ReductionSpec forward;  // original -> loopless
    ReductionSpec backward; // loopless -> original
};

inline LooplessTransform loopless_transform(const SignaturePtr& sig) {
    std::vector<RelSymbol> new_syms;
    struct Entry {
        std::string base;
        int arity;
        std::vector<std::vector<int>> part;
        std::string name;
    };
    std::vector<Entry> entries;
    for (const auto& sym : sig->symbols()) {
        for (const auto& part : set_partitions(sym.arity)) {
            Entry e{sym.name, sym.arity, part,
                    sym.name + "_B" + partition_suffix(part)};
            new_syms.push_back({e.name, static_cast<int>(part.size()), false, false});
            entries.push_back(std::move(e));
        }
    }
    LooplessTransform t;
    t.loopless_sig = std::make_shared<const Signature>(new_syms);

    // forward: P_B(x_1..x_t) := P(x_{beta(1)},..,x_{beta(a)}) ^ all x_j distinct
    t.forward.source = sig;
    t.forward.target = t.loopless_sig;
    for (const auto& e : entries) {
        int t_blocks = static_cast<int>(e.part.size());
        std::vector<std::string> params;
        for (int j = 0; j < t_blocks; ++j) params.push_back("x" + std::to_string(j + 1));
        std::vector<int> beta(e.arity); // original slot -> block index
        for (int b = 0; b < t_blocks; ++b)
            for (int slot : e.part[b]) beta[slot] = b;
        std::vector<std::string> args;
        for (int slot = 0; slot < e.arity; ++slot) args.push_back(params[beta[slot]]);
        std::vector<FormulaPtr> conj{atom(e.base, args)};
        for (int j1 = 0; j1 < t_blocks; ++j1)
            for (int j2 = j1 + 1; j2 < t_blocks; ++j2) conj.push_back(neq(params[j1], params[j2]));
        t.forward.defs[e.name] = {params, land(conj)};
    }

    // backward: P(x_1..x_a) := disjunction over partitions B of
    //   (tuple's equality pattern is exactly B) ^ P_B(block representatives)
    t.backward.source = t.loopless_sig;
    t.backward.target = sig;
    for (const auto& sym : sig->symbols()) {
        std::vector<std::string> params;
        for (int j = 0; j < sym.arity; ++j) params.push_back("x" + std::to_string(j + 1));
        std::vector<FormulaPtr> disj;
        for (const auto& e : entries) {
            if (e.base != sym.name) continue;
            std::vector<FormulaPtr> conj;
            std::vector<std::string> reps;
            for (const auto& block : e.part) {
                reps.push_back(params[block[0]]);
                for (std::size_t j = 1; j < block.size(); ++j)
                    conj.push_back(eq(params[block[0]], params[block[j]]));
            }
            for (std::size_t b1 = 0; b1 < e.part.size(); ++b1)
                for (std::size_t b2 = b1 + 1; b2 < e.part.size(); ++b2)
                    conj.push_back(neq(params[e.part[b1][0]], params[e.part[b2][0]]));
            conj.push_back(atom(e.name, reps));
            disj.push_back(land(conj));
        }
        t.backward.defs[sym.name] = {params, lor(disj)};
    }
    return t;
}

// --- built-in named reductions ----------------------------------------------

// deletes loops from a raw binary relation: A(x,y) := P(x,y) ^ x != y
inline ReductionSpec reduction_strip_loops() {
    ReductionSpec r;
    r.source = Signature::binomial(2);
    r.target = Signature::digraph();
    r.defs["A"] = {{"x", "y"}, land({atom("P", {"x", "y"}), neq("x", "y")})};
    return r;
}

// undirected edge from a pair of opposite arcs: E(x,y) := A(x,y) ^ A(y,x)
inline ReductionSpec reduction_symmetrize() {
    ReductionSpec r;
    r.source = Signature::digraph();
    r.target = Signature::graph();
    r.defs["E"] = {{"x", "y"}, land({atom("A", {"x", "y"}), atom("A", {"y", "x"})})};
    return r;
}

// graph complement on distinct pairs
inline ReductionSpec reduction_complement() {
    ReductionSpec r;
    r.source = Signature::graph();
    r.target = Signature::graph();
    r.defs["E"] = {{"x", "y"}, land({lnot(atom("E", {"x", "y"})), neq("x", "y")})};
    return r;
}

// H-hyperedge as the conjunction of its K-hyperedge orbit:
//   P_H(x_1..x_d) := AND_{g in H} P_K(x_{g^{-1}(1)},..,x_{g^{-1}(d)})
inline ReductionSpec reduction_hk_hypergraph(const PermGroup& h) {
    int d = h.degree();
    ReductionSpec r;
    r.source = Signature::binomial(d);
    r.target = Signature::binomial(d);
    std::vector<std::string> params;
    for (int i = 0; i < d; ++i) params.push_back("x" + std::to_string(i + 1));
    std::vector<FormulaPtr> conj;
    for (const auto& g : h.elements()) {
        Perm ginv = perm_inverse(g);
        std::vector<std::string> args(d);
        for (int i = 0; i < d; ++i) args[i] = params[ginv[i]];
        conj.push_back(atom("P", args));
    }
    r.defs["P"] = {params, land(conj)};
    return r;
}

// relabeling of tuple positions by a fixed permutation (conjugation witness)
inline ReductionSpec reduction_position_relabel(const Perm& g) {
    int d = static_cast<int>(g.size());
    ReductionSpec r;
    r.source = Signature::binomial(d);
    r.target = Signature::binomial(d);
    std::vector<std::string> params;
    for (int i = 0; i < d; ++i) params.push_back("x" + std::to_string(i + 1));
    Perm ginv = perm_inverse(g);
    std::vector<std::string> args(d);
    for (int i = 0; i < d; ++i) args[i] = params[ginv[i]];
    r.defs["P"] = {params, atom("P", args)};
    return r;
}

// --- parameter solvers --------------------------------------------------

struct OberschelpSolution {
    int r = 0;
    double p = 0.0;
    double residual = 0.0;
};

// Solves (1 - p(1-p)^{s!-1})^r = (m-i)/(m-i+1): fix p = 1/2, take the least
// r with LHS <= RHS, then (unless already equal) bisect p in (0, 1/2).
inline OberschelpSolution solve_oberschelp(int s, int m, int i, double tol = 1e-12,
                                           int max_iter = 200) {
    if (s < 1 || m < 2 || i < 1 || i >= m)
        throw std::invalid_argument("oberschelp: need s >= 1 and 1 <= i < m");
    double rhs = static_cast<double>(m - i) / static_cast<double>(m - i + 1);
    double sfact = 1;
    for (int k = 2; k <= s; ++k) sfact *= k;
    auto lhs = [&](double p, int r) {
        return std::pow(1.0 - p * std::pow(1.0 - p, sfact - 1.0), r);
    };
    int r = 1;
    while (lhs(0.5, r) > rhs) {
        ++r;
        if (r > 4096) throw std::runtime_error("oberschelp: no bracket for r");
    }
    OberschelpSolution sol;
    sol.r = r;
    if (lhs(0.5, r) == rhs) {
        sol.p = 0.5;
        sol.residual = 0.0;
        return sol;
    }
    double lo = 0.0, hi = 0.5; // lhs(0)=1 > rhs, lhs(0.5) < rhs
    for (int it = 0; it < max_iter; ++it) {
        double mid = (lo + hi) / 2;
        if (lhs(mid, r) > rhs)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < tol) break;
    }
    sol.p = (lo + hi) / 2;
    sol.residual = std::fabs(lhs(sol.p, r) - rhs);
    return sol;
}

// p' = 1 - (1 - c n^{-alpha})^{1/n}
inline double napr_shift(double c, double alpha, int n) {
    double x = c * std::pow(n, -alpha);
    if (x < 0 || x >= 1) throw std::invalid_argument("napr_shift: c n^-alpha outside [0,1)");
    return 1.0 - std::pow(1.0 - x, 1.0 / n);
}

// solves 1 - (c / n^alpha)^{1/n} = alpha ln n / n for c in (0, 2)
inline double lnn_shift(double alpha, int n, double tol = 1e-12, int max_iter = 200) {
    double target = alpha * std::log(static_cast<double>(n)) / n;
    auto f = [&](double c) { return 1.0 - std::pow(c * std::pow(n, -alpha), 1.0 / n); };
    double lo = 1e-300, hi = 2.0;
    if ((f(lo) - target) * (f(hi) - target) > 0)
        throw std::runtime_error("lnn_shift: no root in (0,2)");
    for (int it = 0; it < max_iter; ++it) {
        double mid = (lo + hi) / 2;
        if ((f(mid) - target) * (f(lo) - target) <= 0)
            hi = mid;
        else
            lo = mid;
        if (hi - lo < tol) break;
    }
    return (lo + hi) / 2;
}

} // namespace relic
