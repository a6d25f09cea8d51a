#pragma once

#include "relic/enumerate.hpp"
#include "relic/eval.hpp"
#include "relic/perm.hpp"
#include "relic/rational.hpp"
#include "relic/rng.hpp"
#include "relic/structure.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace relic {

enum class DistKind {
    BinomialStructure, // independent tuples, one probability per symbol
    Graph,             // G(n,p)
    DigraphNoLoops,    // directed, no loops
    LoopGraph,         // undirected with loops allowed, single probability
    LoopGraphSplit,    // undirected loopless edges with prob p, loop predicate L with prob q
    HHypergraph,       // orbits of injective d-tuples under a subgroup of S_d
    Conditional,       // uniform over models of a sentence (with signature tags as base axioms)
    BernoulliCoded,    // structure = coder(s independent Bernoulli bits)
};

struct DistributionSpec {
    DistKind kind;
    int n = 0;
    SignaturePtr sig;
    std::vector<Rational> probs; // per symbol (or the single slot probability)
    std::shared_ptr<PermGroup> group;
    FormulaPtr condition;
    int coder_bits = 0;
    std::function<Structure(const std::vector<bool>&)> coder;
    std::string name; // id used in reports

    static DistributionSpec graph(int n, Rational p) {
        DistributionSpec d;
        d.kind = DistKind::Graph;
        d.n = n;
        d.sig = Signature::graph();
        d.probs = {std::move(p)};
        d.name = "graph";
        return d;
    }
    static DistributionSpec digraph(int n, Rational p) {
        DistributionSpec d;
        d.kind = DistKind::DigraphNoLoops;
        d.n = n;
        d.sig = Signature::digraph();
        d.probs = {std::move(p)};
        d.name = "digraph-no-loops";
        return d;
    }
    static DistributionSpec loop_graph(int n, Rational p) {
        DistributionSpec d;
        d.kind = DistKind::LoopGraph;
        d.n = n;
        d.sig = std::make_shared<const Signature>(std::vector<RelSymbol>{{"E", 2, true, false}});
        d.probs = {std::move(p)};
        d.name = "loop-graph";
        return d;
    }
    static DistributionSpec loop_graph_split(int n, Rational p, Rational q) {
        DistributionSpec d;
        d.kind = DistKind::LoopGraphSplit;
        d.n = n;
        d.sig = std::make_shared<const Signature>(
            std::vector<RelSymbol>{{"E", 2, true, true}, {"L", 1, false, false}});
        d.probs = {std::move(p), std::move(q)};
        d.name = "loop-graph-split";
        return d;
    }
    static DistributionSpec binomial(SignaturePtr sig, int n, std::vector<Rational> probs) {
        DistributionSpec d;
        d.kind = DistKind::BinomialStructure;
        d.n = n;
        d.sig = std::move(sig);
        if (probs.size() != d.sig->size())
            throw std::invalid_argument("one probability per relation symbol required");
        d.probs = std::move(probs);
        d.name = "binomial-structure";
        return d;
    }
    static DistributionSpec h_hypergraph(PermGroup group, int n, Rational p) {
        DistributionSpec d;
        d.kind = DistKind::HHypergraph;
        d.n = n;
        d.sig = std::make_shared<const Signature>(
            std::vector<RelSymbol>{{"P", group.degree(), false, false}});
        d.probs = {std::move(p)};
        d.group = std::make_shared<PermGroup>(std::move(group));
        d.name = "h-hypergraph";
        return d;
    }
    static DistributionSpec conditional(SignaturePtr sig, int n, FormulaPtr sentence) {
        DistributionSpec d;
        d.kind = DistKind::Conditional;
        d.n = n;
        d.sig = std::move(sig);
        d.condition = std::move(sentence);
        d.name = "conditional";
        return d;
    }
    static DistributionSpec bernoulli_coded(SignaturePtr sig, int n, int bits,
                                            std::function<Structure(const std::vector<bool>&)> c,
                                            Rational p, std::string coder_name) {
        DistributionSpec d;
        d.kind = DistKind::BernoulliCoded;
        d.n = n;
        d.sig = std::move(sig);
        d.probs = {std::move(p)};
        d.coder_bits = bits;
        d.coder = std::move(c);
        d.name = "bernoulli-coded:" + coder_name;
        return d;
    }

    void validate() const {
        for (const auto& p : probs)
            if (p < 0 || p > 1) throw std::invalid_argument("probability outside [0,1]");
        if (n < 1) throw std::invalid_argument("domain size must be >= 1");
        if (kind == DistKind::HHypergraph && n < group->degree())
            throw std::invalid_argument("h-hypergraph needs n >= tuple arity");
    }
};

namespace detail_dist {

inline double slot_prob(const DistributionSpec& spec, std::size_t symbol) {
    const Rational& r = spec.probs.size() == 1 ? spec.probs[0] : spec.probs[symbol];
    return to_double(r);
}

} // namespace detail_dist

// One draw, a deterministic function of (spec, rng state).
inline Structure sample(const DistributionSpec& spec, Rng& rng) {
    spec.validate();
    switch (spec.kind) {
    case DistKind::BinomialStructure:
    case DistKind::Graph:
    case DistKind::DigraphNoLoops:
    case DistKind::LoopGraph:
    case DistKind::LoopGraphSplit: {
        Structure st(spec.sig, spec.n);
        SlotMap sm(*spec.sig, spec.n);
        for (const auto& slot : sm.slots()) {
            if (rng.bernoulli(detail_dist::slot_prob(spec, slot.symbol))) {
                st.set_index(slot.symbol, slot.index, true);
                if (slot.mirror != slot.index) st.set_index(slot.symbol, slot.mirror, true);
            }
        }
        return st;
    }
    case DistKind::HHypergraph: {
        Structure st(spec.sig, spec.n);
        double p = to_double(spec.probs[0]);
        auto orbits = tuple_orbits(*spec.group, spec.n);
        for (const auto& orbit : orbits)
            if (rng.bernoulli(p))
                for (const auto& t : orbit) st.set0_tuple(t);
        return st;
    }
    case DistKind::BernoulliCoded: {
        std::vector<bool> bits(spec.coder_bits);
        double p = to_double(spec.probs[0]);
        for (int i = 0; i < spec.coder_bits; ++i) bits[i] = rng.bernoulli(p);
        return spec.coder(bits);
    }
    case DistKind::Conditional:
        throw std::invalid_argument("conditional sampling goes through ConditionalSampler");
    }
    throw std::logic_error("sample: unreachable");
}

inline Structure sample(const DistributionSpec& spec, std::uint64_t seed) {
    Rng rng = Rng::stream(seed, 0);
    return sample(spec, rng);
}

// Full support with exact rational masses (sums to 1).
inline std::vector<std::pair<Structure, Rational>> exact_law(const DistributionSpec& spec,
                                                             std::uint64_t budget = (1u << 22)) {
    spec.validate();
    switch (spec.kind) {
    case DistKind::BinomialStructure:
    case DistKind::Graph:
    case DistKind::DigraphNoLoops:
    case DistKind::LoopGraph:
    case DistKind::LoopGraphSplit: {
        SlotMap sm(*spec.sig, spec.n);
        if (sm.bit_count() >= 63 || (1ull << sm.bit_count()) > budget)
            throw BudgetExceeded(structure_count(*spec.sig, spec.n));
        std::uint64_t total = 1ull << sm.bit_count();
        std::vector<std::pair<Structure, Rational>> out;
        out.reserve(total);
        for (std::uint64_t i = 0; i < total; ++i) {
            Structure st(spec.sig, spec.n);
            Rational mass = 1;
            for (std::size_t j = 0; j < sm.bit_count(); ++j) {
                const auto& slot = sm.slots()[j];
                const Rational& p =
                    spec.probs.size() == 1 ? spec.probs[0] : spec.probs[slot.symbol];
                if ((i >> j) & 1) {
                    mass *= p;
                    st.set_index(slot.symbol, slot.index, true);
                    if (slot.mirror != slot.index) st.set_index(slot.symbol, slot.mirror, true);
                } else {
                    mass *= Rational(1) - p;
                }
            }
            out.emplace_back(std::move(st), std::move(mass));
        }
        return out;
    }
    case DistKind::HHypergraph: {
        auto orbits = tuple_orbits(*spec.group, spec.n);
        std::size_t k = orbits.size();
        if (k >= 22 || (1ull << k) > budget) throw BudgetExceeded(BigInt(1) << k);
        const Rational& p = spec.probs[0];
        std::vector<std::pair<Structure, Rational>> out;
        for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
            Structure st(spec.sig, spec.n);
            Rational mass = 1;
            for (std::size_t j = 0; j < k; ++j) {
                if ((mask >> j) & 1) {
                    mass *= p;
                    for (const auto& t : orbits[j]) st.set0_tuple(t);
                } else {
                    mass *= Rational(1) - p;
                }
            }
            out.emplace_back(std::move(st), std::move(mass));
        }
        return out;
    }
    case DistKind::BernoulliCoded: {
        if (spec.coder_bits >= 22 || (1ull << spec.coder_bits) > budget)
            throw BudgetExceeded(BigInt(1) << spec.coder_bits);
        const Rational& p = spec.probs[0];
        std::map<Structure, Rational> agg;
        std::vector<bool> bits(spec.coder_bits);
        for (std::uint64_t mask = 0; mask < (1ull << spec.coder_bits); ++mask) {
            Rational mass = 1;
            for (int j = 0; j < spec.coder_bits; ++j) {
                bits[j] = (mask >> j) & 1;
                mass *= bits[j] ? p : Rational(1) - p;
            }
            agg[spec.coder(bits)] += mass;
        }
        return {agg.begin(), agg.end()};
    }
    case DistKind::Conditional: {
        std::vector<std::pair<Structure, Rational>> out;
        CompiledSet cs = compile({spec.condition});
        std::vector<Structure> models;
        enumerate_structures(spec.sig, spec.n, [&](const Structure& st) {
            EvalSession s(st, cs);
            if (s.eval_root(0)) models.push_back(st);
        }, budget);
        if (models.empty()) throw std::domain_error("conditioning on an empty event");
        Rational mass(1, static_cast<long>(models.size()));
        for (auto& m : models) out.emplace_back(std::move(m), mass);
        return out;
    }
    }
    throw std::logic_error("exact_law: unreachable");
}

// Uniform sampling from the models of a sentence on [n]. Exact enumeration
// when the base space is small, rejection from the uniform base otherwise.
class ConditionalSampler {
public:
    enum class Method { Auto, ExactEnumeration, Rejection };

    ConditionalSampler(SignaturePtr sig, int n, FormulaPtr sentence,
                       Method method = Method::Auto, std::uint64_t max_tries = 1u << 20)
        : sig_(std::move(sig)), n_(n), sentence_(std::move(sentence)), max_tries_(max_tries),
          compiled_(compile({sentence_})) {
        SlotMap sm(*sig_, n_);
        bits_ = sm.bit_count();
        bool small = bits_ <= 20;
        method_ = method == Method::Auto
                      ? (small ? Method::ExactEnumeration : Method::Rejection)
                      : method;
        if (method_ == Method::ExactEnumeration) {
            enumerate_structures(sig_, n_, [&](const Structure& st) {
                EvalSession s(st, compiled_);
                if (s.eval_root(0)) models_.push_back(st);
            });
            if (models_.empty())
                throw std::domain_error("sentence has no models on this domain size");
        }
    }

    const std::vector<Structure>& models() const { return models_; }
    Method method() const { return method_; }

    // number of base draws consumed by the last call (1 for exact mode)
    std::uint64_t last_tries() const { return last_tries_; }

    Structure draw(Rng& rng) {
        if (method_ == Method::ExactEnumeration) {
            last_tries_ = 1;
            return models_[rng.below(models_.size())];
        }
        SlotMap sm(*sig_, n_);
        for (std::uint64_t t = 1; t <= max_tries_; ++t) {
            Structure st(sig_, n_);
            for (const auto& slot : sm.slots()) {
                if (rng.bernoulli(0.5)) {
                    st.set_index(slot.symbol, slot.index, true);
                    if (slot.mirror != slot.index) st.set_index(slot.symbol, slot.mirror, true);
                }
            }
            EvalSession s(st, compiled_);
            if (s.eval_root(0)) {
                last_tries_ = t;
                return st;
            }
        }
        throw std::runtime_error("rejection sampling exhausted max tries");
    }

private:
    SignaturePtr sig_;
    int n_;
    FormulaPtr sentence_;
    std::uint64_t max_tries_;
    CompiledSet compiled_;
    Method method_;
    std::vector<Structure> models_;
    std::size_t bits_ = 0;
    std::uint64_t last_tries_ = 1;
};

struct PermDraw {
    Perm perm;
    std::vector<int> cycle_counts; // Y_i = number of i-cycles, i = 1..m
};

inline PermDraw sample_permutation(int m, Rng& rng) {
    if (m < 1) throw std::invalid_argument("sample_permutation: m >= 1");
    PermDraw d;
    d.perm = rng.permutation(m);
    d.cycle_counts = cycle_type(d.perm);
    return d;
}

inline PermDraw sample_permutation(int m, std::uint64_t seed) {
    Rng rng = Rng::stream(seed, 0);
    return sample_permutation(m, rng);
}

} // namespace relic
