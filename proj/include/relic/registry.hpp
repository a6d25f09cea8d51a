#pragma once

#include "relic/dioph.hpp"
#include "relic/gadget_sentences.hpp"
#include "relic/gadgets.hpp"
#include "relic/reduction.hpp"

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace relic {

// Named gadget addressing used by the CLI and experiment configs:
// "name" or "name:arg1,arg2".

inline std::pair<std::string, std::vector<int>> parse_gadget_id(const std::string& id) {
    auto colon = id.find(':');
    std::string name = id.substr(0, colon == std::string::npos ? id.size() : colon);
    std::vector<int> args;
    if (colon != std::string::npos) {
        std::stringstream ss(id.substr(colon + 1));
        std::string tok;
        while (std::getline(ss, tok, ',')) args.push_back(std::stoi(tok));
    }
    return {name, args};
}

inline Structure build_gadget(const std::string& id) {
    auto [name, a] = parse_gadget_id(id);
    auto need = [&](std::size_t k) {
        if (a.size() != k)
            throw std::invalid_argument("gadget " + name + " expects " + std::to_string(k) +
                                        " argument(s)");
    };
    if (name == "path") {
        need(1);
        return path_graph(a[0]);
    }
    if (name == "star") {
        need(1);
        return star_graph(a[0]);
    }
    if (name == "clique") {
        need(1);
        return clique_graph(a[0]);
    }
    if (name == "cycle") {
        need(1);
        return cycle_graph(a[0]);
    }
    if (name == "L") {
        need(1);
        return l_graph(a[0]);
    }
    if (name == "KdLm") {
        need(2);
        return kd_lm_graph(a[0], a[1]);
    }
    if (name == "KsKt") {
        need(2);
        return ks_kt_graph(a[0], a[1]);
    }
    if (name == "delta-digraph") { // permutation as 0-based images
        if (a.empty()) throw std::invalid_argument("delta-digraph needs a permutation");
        return delta_digraph(Perm(a.begin(), a.end()));
    }
    if (name == "gd-expansion") {
        if (a.empty()) throw std::invalid_argument("gd-expansion needs a permutation");
        return gd_expansion(Perm(a.begin(), a.end()));
    }
    throw std::invalid_argument("unknown gadget structure: " + name);
}

inline FormulaPtr build_gadget_formula(const std::string& id) {
    auto [name, a] = parse_gadget_id(id);
    auto need = [&](std::size_t k) {
        if (a.size() != k)
            throw std::invalid_argument("formula " + name + " expects " + std::to_string(k) +
                                        " argument(s)");
    };
    if (name == "phi1") return phi_expansion();
    if (name == "phiL") return phi_ladder();
    if (name == "phi2") return phi_product();
    if (name == "phi2d") {
        need(1);
        return phi_product_d(a[0]);
    }
    if (name == "matching-geq") {
        need(1);
        return phi_geq(a[0]);
    }
    if (name == "matching-exactly") {
        need(1);
        return phi_exactly(a[0]);
    }
    if (name == "cycle") {
        need(1);
        return psi_cycle(a[0]);
    }
    if (name == "clique-partition") {
        need(2);
        return clique_partition(a[0], a[1]);
    }
    if (name == "isolated-clique") {
        need(1);
        return isolated_clique(a[0]);
    }
    if (name == "kskt") return kskt_recognizer();
    if (name == "max-clique") {
        need(1);
        return max_clique(a[0]);
    }
    if (name == "has-clique") {
        need(1);
        return has_clique(a[0]);
    }
    if (name == "extension") {
        need(1);
        return extension_axiom(a[0]);
    }
    if (name == "empty") return empty_graph_sentence();
    throw std::invalid_argument("unknown gadget formula: " + name);
}

// named reductions addressable from configs
inline ReductionSpec build_named_reduction(const std::string& id) {
    auto [name, a] = parse_gadget_id(id);
    if (name == "digraph-strip-loops") return reduction_strip_loops();
    if (name == "undirected-from-digraph") return reduction_symmetrize();
    if (name == "complement") return reduction_complement();
    if (name == "hk-hypergraph") {
        // args: d, then which subgroup of S_d acts upstairs: 0 = trivial,
        // 1 = cyclic, 2 = symmetric
        if (a.size() != 1)
            throw std::invalid_argument("hk-hypergraph:<d> uses the full symmetric group");
        return reduction_hk_hypergraph(PermGroup::symmetric(a[0]));
    }
    throw std::invalid_argument("unknown named reduction: " + name);
}

} // namespace relic
