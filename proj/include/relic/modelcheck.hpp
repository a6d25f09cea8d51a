#pragma once

#include "relic/dist.hpp"
#include "relic/enumerate.hpp"
#include "relic/eval.hpp"
#include "relic/parallel.hpp"
#include "relic/rational.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace relic {

// Probability with its computation method attached.
struct ProbValue {
    bool exact = true;
    Rational value_exact;
    double value_mc = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;

    double as_double() const { return exact ? to_double(value_exact) : value_mc; }

    static ProbValue from_rational(Rational r) {
        ProbValue p;
        p.exact = true;
        p.value_exact = std::move(r);
        return p;
    }
    static ProbValue from_mc(double est, std::uint64_t samples, std::uint64_t seed) {
        ProbValue p;
        p.exact = false;
        p.value_mc = est;
        p.samples = samples;
        p.seed = seed;
        return p;
    }
};

// Exact number of labelled structures on [n] satisfying the sentence.
inline std::uint64_t count_models(const SignaturePtr& sig, int n, const FormulaPtr& sentence,
                                  std::uint64_t budget = (1ull << 26), int jobs = 1) {
    SlotMap sm(*sig, n);
    if (sm.bit_count() >= 63 || (1ull << sm.bit_count()) > budget)
        throw BudgetExceeded(structure_count(*sig, n));
    std::uint64_t total = 1ull << sm.bit_count();
    CompiledSet cs = compile({sentence});
    std::vector<std::uint64_t> partial(256, 0);
    parallel_chunks(total, jobs, [&](std::uint64_t chunk, std::uint64_t b, std::uint64_t e) {
        std::uint64_t count = 0;
        Structure st(sig, n);
        EvalSession session(st, cs);
        SlotMap local(*sig, n);
        for (std::uint64_t i = b; i < e; ++i) {
            local.apply(st, i, {});
            session.reset(st);
            if (session.eval_root(0)) ++count;
        }
        partial[chunk % partial.size()] += count;
    });
    std::uint64_t sum = 0;
    for (auto c : partial) sum += c;
    return sum;
}

// Same scan driven by a structural recognizer instead of the evaluator
// (used for gadget sentences whose models have a cheap characterization).
inline std::uint64_t count_models_with(const SignaturePtr& sig, int n,
                                       const std::function<bool(const Structure&)>& recognize,
                                       std::uint64_t budget = (1ull << 26), int jobs = 1) {
    SlotMap sm(*sig, n);
    if (sm.bit_count() >= 63 || (1ull << sm.bit_count()) > budget)
        throw BudgetExceeded(structure_count(*sig, n));
    std::uint64_t total = 1ull << sm.bit_count();
    std::vector<std::uint64_t> partial(256, 0);
    parallel_chunks(total, jobs, [&](std::uint64_t chunk, std::uint64_t b, std::uint64_t e) {
        std::uint64_t count = 0;
        Structure st(sig, n);
        SlotMap local(*sig, n);
        for (std::uint64_t i = b; i < e; ++i) {
            local.apply(st, i, {});
            if (recognize(st)) ++count;
        }
        partial[chunk % partial.size()] += count;
    });
    std::uint64_t sum = 0;
    for (auto c : partial) sum += c;
    return sum;
}

// Exact probability: sum of law masses on models of the sentence.
inline Rational prob_exact(const FormulaPtr& sentence, const DistributionSpec& spec,
                           std::uint64_t budget = (1u << 22)) {
    auto law = exact_law(spec, budget);
    CompiledSet cs = compile({sentence});
    Rational acc = 0;
    for (const auto& [st, mass] : law) {
        EvalSession s(st, cs);
        if (s.eval_root(0)) acc += mass;
    }
    return acc;
}

// Monte Carlo estimate; sample k is drawn from the stream (seed, k), so the
// result does not depend on how samples are scheduled across jobs.
inline double prob_mc(const FormulaPtr& sentence, const DistributionSpec& spec,
                      std::uint64_t samples, std::uint64_t seed, int jobs = 1) {
    CompiledSet cs = compile({sentence});
    std::vector<std::uint64_t> partial(256, 0);
    parallel_chunks(samples, jobs, [&](std::uint64_t chunk, std::uint64_t b, std::uint64_t e) {
        std::uint64_t hits = 0;
        std::optional<EvalSession> session;
        for (std::uint64_t k = b; k < e; ++k) {
            Rng rng = Rng::stream(seed, k);
            Structure st = sample(spec, rng);
            if (!session)
                session.emplace(st, cs);
            else
                session->reset(st);
            if (session->eval_root(0)) ++hits;
        }
        partial[chunk % partial.size()] += hits;
    });
    std::uint64_t hits = 0;
    for (auto h : partial) hits += h;
    return static_cast<double>(hits) / static_cast<double>(samples);
}

inline ProbValue prob(const FormulaPtr& sentence, const DistributionSpec& spec, bool exact,
                      std::uint64_t samples = 0, std::uint64_t seed = 0, int jobs = 1,
                      std::uint64_t budget = (1u << 22)) {
    if (exact) return ProbValue::from_rational(prob_exact(sentence, spec, budget));
    return ProbValue::from_mc(prob_mc(sentence, spec, samples, seed, jobs), samples, seed);
}

// Pr(psi | phi) over uniformly random structures on [n] with the signature's
// declared axioms: count(phi ^ psi) / count(phi).
inline Rational conditional_prob(const FormulaPtr& psi, const FormulaPtr& phi,
                                 const SignaturePtr& sig, int n,
                                 std::uint64_t budget = (1ull << 26), int jobs = 1) {
    SlotMap sm(*sig, n);
    if (sm.bit_count() >= 63 || (1ull << sm.bit_count()) > budget)
        throw BudgetExceeded(structure_count(*sig, n));
    std::uint64_t total = 1ull << sm.bit_count();
    CompiledSet cs = compile({phi, psi});
    std::uint64_t denom = 0, numer = 0;
    Structure st(sig, n);
    EvalSession session(st, cs);
    SlotMap local(*sig, n);
    (void)jobs;
    for (std::uint64_t i = 0; i < total; ++i) {
        local.apply(st, i, {});
        session.reset(st);
        if (!session.eval_root(0)) continue;
        ++denom;
        if (session.eval_root(1)) ++numer;
    }
    if (denom == 0) throw std::domain_error("conditioning on an empty event");
    return Rational(BigInt(numer), BigInt(denom));
}

} // namespace relic
