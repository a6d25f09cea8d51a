#pragma once

#include "relic/analytics.hpp"
#include "relic/dist.hpp"
#include "relic/reduction.hpp"
#include "relic/structure.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace relic {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Structure files:
//   {"n": int, "signature": [{"name","arity","symmetric"?,"irreflexive"?}],
//    "relations": {name: [[1-based tuple], ...]}}    (tuples sorted by index)
// graph shorthand: {"n": int, "edges": [[u,v], ...]}
// ---------------------------------------------------------------------------

inline json signature_to_json(const Signature& sig) {
    json arr = json::array();
    for (const auto& s : sig.symbols()) {
        json e{{"name", s.name}, {"arity", s.arity}};
        if (s.symmetric) e["symmetric"] = true;
        if (s.irreflexive) e["irreflexive"] = true;
        arr.push_back(e);
    }
    return arr;
}

inline SignaturePtr signature_from_json(const json& arr) {
    std::vector<RelSymbol> syms;
    for (const auto& e : arr) {
        RelSymbol s;
        s.name = e.at("name").get<std::string>();
        s.arity = e.at("arity").get<int>();
        s.symmetric = e.value("symmetric", false);
        s.irreflexive = e.value("irreflexive", false);
        syms.push_back(s);
    }
    return std::make_shared<const Signature>(syms);
}

inline json structure_to_json(const Structure& st) {
    json rel = json::object();
    for (std::size_t s = 0; s < st.signature()->size(); ++s) {
        const auto& sym = st.signature()->at(s);
        json tuples = json::array();
        std::uint64_t total = st.table_bits(s);
        for (std::uint64_t idx = 0; idx < total; ++idx)
            if (st.get_index(s, idx)) tuples.push_back(decode_tuple(idx, st.n(), sym.arity));
        rel[sym.name] = tuples;
    }
    return json{{"n", st.n()}, {"signature", signature_to_json(*st.signature())},
                {"relations", rel}};
}

inline Structure structure_from_json(const json& j) {
    if (j.contains("edges")) {
        Structure g = make_graph(j.at("n").get<int>());
        for (const auto& e : j.at("edges")) {
            int u = e.at(0).get<int>(), v = e.at(1).get<int>();
            g.set(0, {u, v});
        }
        g.validate_axioms();
        return g;
    }
    SignaturePtr sig = signature_from_json(j.at("signature"));
    Structure st(sig, j.at("n").get<int>());
    const auto& rel = j.at("relations");
    for (std::size_t s = 0; s < sig->size(); ++s) {
        const auto& sym = sig->at(s);
        if (!rel.contains(sym.name)) continue;
        for (const auto& t : rel.at(sym.name)) {
            std::vector<int> tuple = t.get<std::vector<int>>();
            if (static_cast<int>(tuple.size()) != sym.arity)
                throw std::invalid_argument("tuple arity mismatch for " + sym.name);
            st.set_index(s, encode_tuple(tuple, st.n()), true);
        }
    }
    st.validate_axioms();
    return st;
}

inline json rational_to_json(const Rational& r) {
    return json{{"num", numerator(r).str()}, {"den", denominator(r).str()}};
}

inline json prob_value_to_json(const ProbValue& v) {
    json j;
    if (v.exact) {
        j["method"] = "exact";
        j["value"] = to_double(v.value_exact);
        j["numerator"] = numerator(v.value_exact).str();
        j["denominator"] = denominator(v.value_exact).str();
    } else {
        j["method"] = "mc";
        j["value"] = v.value_mc;
        j["samples"] = v.samples;
        j["seed"] = v.seed;
    }
    return j;
}

// ---------------------------------------------------------------------------
// DistributionSpec files: {"kind": ..., "n": ..., parameters...}
// ---------------------------------------------------------------------------

inline json dist_to_json(const DistributionSpec& d) {
    json j{{"n", d.n}};
    switch (d.kind) {
    case DistKind::Graph:
        j["kind"] = "graph";
        j["p"] = rational_str(d.probs[0]);
        break;
    case DistKind::DigraphNoLoops:
        j["kind"] = "digraph-no-loops";
        j["p"] = rational_str(d.probs[0]);
        break;
    case DistKind::LoopGraph:
        j["kind"] = "loop-graph";
        j["p"] = rational_str(d.probs[0]);
        break;
    case DistKind::LoopGraphSplit:
        j["kind"] = "loop-graph-split";
        j["p"] = rational_str(d.probs[0]);
        j["q"] = rational_str(d.probs[1]);
        break;
    case DistKind::BinomialStructure: {
        j["kind"] = "binomial-structure";
        j["signature"] = signature_to_json(*d.sig);
        json ps = json::array();
        for (const auto& p : d.probs) ps.push_back(rational_str(p));
        j["p"] = ps;
        break;
    }
    case DistKind::HHypergraph: {
        j["kind"] = "h-hypergraph";
        j["p"] = rational_str(d.probs[0]);
        j["degree"] = d.group->degree();
        json gens = json::array();
        for (const auto& g : d.group->generators()) gens.push_back(g);
        j["generators"] = gens;
        break;
    }
    case DistKind::Conditional:
        j["kind"] = "conditional";
        j["signature"] = signature_to_json(*d.sig);
        j["sentence"] = render(d.condition);
        break;
    case DistKind::BernoulliCoded:
        j["kind"] = d.name;
        j["p"] = rational_str(d.probs[0]);
        j["bits"] = d.coder_bits;
        break;
    }
    return j;
}

inline DistributionSpec dist_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    int n = j.at("n").get<int>();
    auto p_of = [&](const char* key) { return parse_rational(j.at(key).get<std::string>()); };
    if (kind == "graph") return DistributionSpec::graph(n, p_of("p"));
    if (kind == "digraph-no-loops") return DistributionSpec::digraph(n, p_of("p"));
    if (kind == "loop-graph") return DistributionSpec::loop_graph(n, p_of("p"));
    if (kind == "loop-graph-split")
        return DistributionSpec::loop_graph_split(n, p_of("p"), p_of("q"));
    if (kind == "binomial-structure") {
        SignaturePtr sig = signature_from_json(j.at("signature"));
        std::vector<Rational> ps;
        for (const auto& s : j.at("p")) ps.push_back(parse_rational(s.get<std::string>()));
        return DistributionSpec::binomial(sig, n, ps);
    }
    if (kind == "h-hypergraph") {
        int degree = j.at("degree").get<int>();
        std::vector<Perm> gens;
        for (const auto& g : j.at("generators")) gens.push_back(g.get<Perm>());
        return DistributionSpec::h_hypergraph(PermGroup(degree, gens), n, p_of("p"));
    }
    if (kind == "conditional") {
        SignaturePtr sig = signature_from_json(j.at("signature"));
        FormulaPtr sentence = parse(j.at("sentence").get<std::string>(), *sig);
        return DistributionSpec::conditional(sig, n, sentence);
    }
    throw std::invalid_argument("unknown distribution kind: " + kind);
}

// ---------------------------------------------------------------------------
// ReductionSpec files:
//   {"source": sig, "target": sig, "defs": {P: {"params": [...], "formula": str}}}
// ---------------------------------------------------------------------------

inline json reduction_to_json(const ReductionSpec& r) {
    json defs = json::object();
    for (const auto& [name, def] : r.defs)
        defs[name] = json{{"params", def.params}, {"formula", render(def.body)}};
    return json{{"source", signature_to_json(*r.source)},
                {"target", signature_to_json(*r.target)},
                {"defs", defs}};
}

inline ReductionSpec reduction_from_json(const json& j) {
    ReductionSpec r;
    r.source = signature_from_json(j.at("source"));
    r.target = signature_from_json(j.at("target"));
    for (const auto& [name, d] : j.at("defs").items()) {
        PredicateDef def;
        def.params = d.at("params").get<std::vector<std::string>>();
        def.body = parse(d.at("formula").get<std::string>(), *r.source);
        r.defs[name] = def;
    }
    r.validate();
    return r;
}

// ---------------------------------------------------------------------------
// ProbSeq CSV: n,value,method,numerator,denominator,samples,seed
// ---------------------------------------------------------------------------

inline std::string probseq_to_csv(const ProbSeq& seq) {
    std::ostringstream os;
    os << "n,value,method,numerator,denominator,samples,seed\n";
    for (const auto& [n, v] : seq.entries) {
        os << n << ',' << v.as_double() << ',';
        if (v.exact)
            os << "exact," << numerator(v.value_exact).str() << ','
               << denominator(v.value_exact).str() << ",,";
        else
            os << "mc,,," << v.samples << ',' << v.seed;
        os << '\n';
    }
    return os.str();
}

inline ProbSeq probseq_from_csv(std::istream& in) {
    ProbSeq seq;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty csv");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cols.push_back(cell);
        while (cols.size() < 7) cols.push_back("");
        int n = std::stoi(cols[0]);
        ProbValue v;
        if (cols[2] == "exact") {
            v.exact = true;
            v.value_exact = Rational(BigInt(cols[3]), BigInt(cols[4]));
        } else {
            v.exact = false;
            v.value_mc = std::stod(cols[1]);
            v.samples = cols[5].empty() ? 0 : std::stoull(cols[5]);
            v.seed = cols[6].empty() ? 0 : std::stoull(cols[6]);
        }
        seq.add(n, v);
    }
    return seq;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace relic
