#pragma once

#include "relic/formula.hpp"
#include "relic/rng.hpp"
#include "relic/structure.hpp"

#include <string>
#include <vector>

namespace relic::testing {

inline Structure random_graph(Rng& rng, int n, double p = 0.5) {
    Structure g = make_graph(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.bernoulli(p)) add_edge(g, u, v);
    return g;
}

inline Structure relabel(const Structure& g, const std::vector<int>& perm) {
    Structure out(g.signature(), g.n());
    const auto& sig = *g.signature();
    for (std::size_t s = 0; s < sig.size(); ++s) {
        int a = sig.at(s).arity;
        std::uint64_t total = g.table_bits(s);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            if (!g.get_index(s, idx)) continue;
            auto t = decode_tuple(idx, g.n(), a);
            std::vector<int> mt(a);
            for (int i = 0; i < a; ++i) mt[i] = perm[t[i] - 1] + 1;
            out.set_index(s, encode_tuple(mt, g.n()), true);
        }
    }
    return out;
}

// random sentence over a signature: quantifier prefix over `vars` variables,
// then a random boolean combination of atoms/equalities
inline FormulaPtr random_sentence(Rng& rng, const Signature& sig, int max_depth = 3,
                                  int vars = 3) {
    std::vector<std::string> names;
    for (int i = 0; i < vars; ++i) names.push_back("v" + std::to_string(i));

    struct Gen {
        Rng& rng;
        const Signature& sig;
        const std::vector<std::string>& names;

        FormulaPtr atom_like() {
            if (rng.below(4) == 0) {
                std::string a = names[rng.below(names.size())];
                std::string b = names[rng.below(names.size())];
                return eq(a, b);
            }
            const auto& sym = sig.at(rng.below(sig.size()));
            std::vector<std::string> args;
            for (int i = 0; i < sym.arity; ++i) args.push_back(names[rng.below(names.size())]);
            return atom(sym.name, args);
        }

        FormulaPtr body(int depth) {
            if (depth == 0) return atom_like();
            switch (rng.below(6)) {
            case 0:
                return lnot(body(depth - 1));
            case 1:
                return land({body(depth - 1), body(depth - 1)});
            case 2:
                return lor({body(depth - 1), body(depth - 1)});
            case 3:
                return implies(body(depth - 1), body(depth - 1));
            case 4:
                return iff(body(depth - 1), body(depth - 1));
            default:
                return atom_like();
            }
        }
    };
    Gen gen{rng, sig, names};
    FormulaPtr f = gen.body(max_depth);
    // close the sentence: quantify every variable, random quantifier kinds
    for (int i = vars - 1; i >= 0; --i) {
        switch (rng.below(3)) {
        case 0:
            f = exists(names[i], f);
            break;
        case 1:
            f = forall(names[i], f);
            break;
        default:
            f = exists1(names[i], f);
            break;
        }
    }
    return f;
}

} // namespace relic::testing
