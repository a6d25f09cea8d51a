#pragma once

#include "relic/analytics.hpp"
#include "relic/dioph.hpp"
#include "relic/efgame.hpp"
#include "relic/gadget_sentences.hpp"
#include "relic/json_io.hpp"
#include "relic/modelcheck.hpp"
#include "relic/registry.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace relic {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

namespace acceptance_detail {

using Clock = std::chrono::steady_clock;

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << "[FAILED " << what << "] ";
        } else {
            detail << what << "; ";
        }
    }
};

inline CriterionResult run_criterion(int id, const std::string& name,
                                     const std::function<void(Check&)>& body) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    Check c;
    auto t0 = Clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.detail << "[exception: " << e.what() << "]";
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    r.pass = c.ok;
    r.detail = c.detail.str();
    return r;
}

// --- criterion bodies -------------------------------------------------------

inline void crit_gadget_counts(Check& c, int jobs) {
    auto t0 = Clock::now();
    auto n6 = count_models_with(Signature::graph(), 6, expansion_recognize, 1ull << 26, jobs);
    double sec6 = std::chrono::duration<double>(Clock::now() - t0).count();
    c.expect(n6 == 720, "count(6)=720 got " + std::to_string(n6));
    c.expect(sec6 < 10.0, "n=6 scan in " + std::to_string(sec6) + "s < 10s");
    for (int n = 1; n <= 5; ++n) {
        auto cnt = count_models_with(Signature::graph(), n, expansion_recognize, 1ull << 26, jobs);
        c.expect(cnt == 0, "count(" + std::to_string(n) + ")=0");
    }
    t0 = Clock::now();
    auto n7 = count_models_with(Signature::graph(), 7, expansion_recognize, 1ull << 26, jobs);
    double sec7 = std::chrono::duration<double>(Clock::now() - t0).count();
    c.expect(n7 == 0, "count(7)=0");
    c.expect(sec7 < 300.0, "n=7 scan in " + std::to_string(sec7) + "s < 5min");
}

inline void crit_ladder(Check& c, std::uint64_t seed) {
    Structure l2 = l_graph(2);
    FormulaPtr phiL = phi_ladder();
    CompiledSet cs = compile({phiL});
    {
        EvalSession s(l2, cs);
        c.expect(s.eval_root(0), "L_2 satisfies the ladder sentence");
    }
    c.expect(automorphism_count(l2) == 1, "Aut(L_2) = 1");
    Rng rng = Rng::stream(seed, 1);
    int fails = 0;
    for (int t = 0; t < 100; ++t) {
        int u = static_cast<int>(rng.below(24));
        int v = static_cast<int>(rng.below(24));
        while (v == u) v = static_cast<int>(rng.below(24));
        Structure toggled = l2;
        toggled.set(0, {u + 1, v + 1}, !has_edge(l2, u, v));
        EvalSession s(toggled, cs);
        if (!s.eval_root(0)) ++fails;
    }
    c.expect(fails == 100, "100/100 single-edge toggles fail (" + std::to_string(fails) + ")");
}

inline void crit_product(Check& c) {
    Structure k3l2 = kd_lm_graph(3, 2);
    CompiledSet cs = compile({phi_product_d(3), phi_product_d(4)});
    EvalSession s(k3l2, cs);
    c.expect(s.eval_root(0), "K_3xL_2 satisfies the d=3 product sentence");
    c.expect(!s.eval_root(1), "K_3xL_2 refutes the d=4 product sentence");
    Structure k4l2 = kd_lm_graph(4, 2);
    EvalSession s4(k4l2, cs);
    c.expect(s4.eval_root(1), "K_4xL_2 satisfies the d=4 product sentence");
    c.expect(automorphism_count(k3l2) == 6, "Aut(K_3xL_2) = 6");
}

inline void crit_pushforward(Check& c) {
    auto base = DistributionSpec::binomial(Signature::binomial(2), 3, {Rational(1, 2)});
    auto tv1 = law_tv(pushforward_law(base, reduction_strip_loops()),
                      exact_law(DistributionSpec::digraph(3, Rational(1, 2))));
    c.expect(tv1 == 0, "strip-loops pushforward matches the loopless digraph law exactly");
    auto tv2 = law_tv(pushforward_law(DistributionSpec::digraph(3, Rational(1, 2)),
                                      reduction_symmetrize()),
                      exact_law(DistributionSpec::graph(3, Rational(1, 4))));
    c.expect(tv2 == 0, "symmetrization pushforward matches G(3,1/4) exactly");
    auto tv3 = law_tv(
        pushforward_law(DistributionSpec::h_hypergraph(PermGroup::cyclic(3), 3, Rational(1, 2)),
                        reduction_hk_hypergraph(PermGroup::symmetric(3))),
        exact_law(DistributionSpec::h_hypergraph(PermGroup::symmetric(3), 3, Rational(1, 4))));
    c.expect(tv3 == 0, "orbit-conjunction pushforward matches the coarser hypergraph law");
}

inline void crit_poisson(Check& c, std::uint64_t seed) {
    const int n = 50;
    const double lambda = 0.49; // (n choose 2) / 2500
    auto spec = DistributionSpec::graph(n, Rational(1, 2500));
    CompiledSet cs = compile({phi_exactly(0), phi_exactly(1), phi_exactly(2)});
    const std::uint64_t samples = 100000;
    std::array<std::uint64_t, 3> hits{0, 0, 0};
    std::optional<EvalSession> session;
    for (std::uint64_t k = 0; k < samples; ++k) {
        Rng rng = Rng::stream(seed, k);
        Structure st = sample(spec, rng);
        if (!session)
            session.emplace(st, cs);
        else
            session->reset(st);
        for (int i = 0; i < 3; ++i)
            if (session->eval_root(i)) ++hits[i];
    }
    for (int k = 0; k < 3; ++k) {
        double est = static_cast<double>(hits[k]) / samples;
        double gap = std::fabs(est - poisson_term(lambda, k));
        std::ostringstream os;
        os << "k=" << k << " |mc-poisson| = " << std::setprecision(4) << gap << " <= 0.01";
        c.expect(gap <= 0.01, os.str());
    }
}

inline void crit_threshold(Check& c) {
    double c0 = solve_c0(2);
    double residual = std::fabs(cycle_intensity(c0, 2, false) - std::log(2.0));
    c.expect(residual <= 1e-10, "c0(S_2) residual <= 1e-10");
    double c0_again = solve_c0(2);
    c.expect(std::fabs(c0 - c0_again) <= 5e-4, "c0(S_2) reproducible within 5e-4");
    double s3 = solve_c0(3);
    c.expect(c0_for_group(PermGroup::cyclic(3), 3) == 0.5 * s3,
             "c0(C_3) = (3/6) c0(S_3) exactly by construction");
    c.expect(c0_for_group(PermGroup::trivial(3), 3) == s3 / 6.0,
             "c0(id,3) = c0(S_3)/6 exactly by construction");
}

inline void crit_cycles(Check& c, std::uint64_t seed, int jobs) {
    const int n = 200;
    auto spec = DistributionSpec::graph(n, Rational(1, 400)); // c = 0.5
    const std::uint64_t samples = 10000;
    std::vector<std::uint64_t> partial(256, 0);
    parallel_chunks(samples, jobs, [&](std::uint64_t chunk, std::uint64_t b, std::uint64_t e) {
        std::uint64_t local = 0;
        for (std::uint64_t k = b; k < e; ++k) {
            Rng rng = Rng::stream(seed, k);
            local += count_cycles(sample(spec, rng));
        }
        partial[chunk % partial.size()] += local;
    });
    std::uint64_t total = 0;
    for (auto p : partial) total += p;
    double mean = static_cast<double>(total) / samples;
    double f = cycle_intensity(0.5, 2, false);
    std::ostringstream os;
    os << "mean cycle count " << std::setprecision(4) << mean << " within 0.02 of " << f;
    c.expect(std::fabs(mean - f) <= 0.02, os.str());
}

inline void crit_tv(Check& c, std::uint64_t seed) {
    Rng rng = Rng::stream(seed, 7);
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
        double p = rng.uniform01();
        double q = rng.uniform01();
        int s = 1 + static_cast<int>(rng.below(12));
        worst = std::max(worst, std::fabs(tv_exact(p, q, s) - tv_brute(p, q, s)));
    }
    std::ostringstream os;
    os << "max |split - brute| over 100 cases = " << worst << " <= 1e-12";
    c.expect(worst <= 1e-12, os.str());
    const int n = 10000;
    double q = 0.5 + std::pow(n, -0.6);
    double tv = tv_exact(0.5, q, n);
    std::ostringstream os2;
    os2 << "tv_exact at s=n=1e4, q=1/2+n^-0.6 is " << std::setprecision(4) << tv << " < 0.05";
    c.expect(tv < 0.05, os2.str());
}

inline void crit_ef(Check& c, std::uint64_t seed) {
    c.expect(!ef_duplicator_wins(path_graph(1), path_graph(2), 2), "(P1,P2): spoiler at k=2");
    c.expect(ef_duplicator_wins(path_graph(1), path_graph(2), 1), "(P1,P2): duplicator at k=1");
    c.expect(ef_duplicator_wins(path_graph(3), path_graph(4), 2), "(P3,P4): duplicator at k=2");

    // product preservation on random triples
    Rng rng = Rng::stream(seed, 11);
    auto random_graph = [&](int maxn) {
        int n = 1 + static_cast<int>(rng.below(maxn));
        Structure g = make_graph(n);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.bernoulli(0.5)) add_edge(g, u, v);
        return g;
    };
    int checked = 0, preserved = 0;
    while (checked < 20) {
        Structure g1 = random_graph(5), g2 = random_graph(5), h = random_graph(5);
        int k = 1 + static_cast<int>(rng.below(3));
        if (!ef_duplicator_wins(g1, g2, k)) continue;
        ++checked;
        if (ef_duplicator_wins(cartesian_product(g1, h), cartesian_product(g2, h), k))
            ++preserved;
    }
    c.expect(preserved == 20, "duplicator wins transfer to products on 20 triples");

    // equivalence relation + monotonicity, exhaustive over graphs on <= 4 vertices
    std::vector<Structure> graphs;
    for (int n = 1; n <= 4; ++n)
        enumerate_structures(Signature::graph(), n,
                             [&](const Structure& st) { graphs.push_back(st); });
    int m = static_cast<int>(graphs.size());
    for (int k = 1; k <= 3; ++k) {
        std::vector<std::vector<bool>> dup(m, std::vector<bool>(m));
        std::vector<std::vector<bool>> dup_prev(m, std::vector<bool>(m));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                dup[i][j] = ef_duplicator_wins(graphs[i], graphs[j], k);
                dup_prev[i][j] = k == 1 ? true : ef_duplicator_wins(graphs[i], graphs[j], k - 1);
            }
        bool refl = true, sym = true, trans = true, mono = true;
        for (int i = 0; i < m; ++i) {
            if (!dup[i][i]) refl = false;
            for (int j = 0; j < m; ++j) {
                if (dup[i][j] != dup[j][i]) sym = false;
                if (dup[i][j] && !dup_prev[i][j]) mono = false;
                for (int l = 0; l < m && trans; ++l)
                    if (dup[i][j] && dup[j][l] && !dup[i][l]) trans = false;
            }
        }
        std::string tag = " at k=" + std::to_string(k);
        c.expect(refl && sym && trans, "equivalence relation" + tag);
        c.expect(mono, "win monotonicity" + tag);
    }
}

inline void crit_dioph(Check& c) {
    auto c2 = compile_diophantine("x^2 + 1", DiophDomain::Integers);
    for (int n = 1; n <= 6; ++n) {
        auto cnt = count_models(Signature::graph(), n, c2.phi);
        c.expect(cnt == 1, "x^2+1: only the empty graph models phi at n=" + std::to_string(n));
    }
    auto c1 = compile_diophantine("x - y", DiophDomain::Positives);
    Structure w = dioph_witness(c1.system, {1, 1});
    c.expect(w.n() == 10, "x-y witness has 10 vertices");
    c.expect(eval(w, c1.psi), "witness models psi");
    c.expect(eval(with_isolated_edges(w, 1), c1.psi), "witness + isolated edge models psi");
    c.expect(count_models(Signature::graph(), 5, c1.psi) == 0, "no psi models of odd order 5");
}

inline void crit_permutations(Check& c, std::uint64_t seed) {
    // exhaustive S_4
    Perm p = perm_identity(4);
    long long y1 = 0, y2 = 0;
    int count = 0;
    std::sort(p.begin(), p.end());
    do {
        auto ct = cycle_type(p);
        y1 += ct[0];
        y2 += ct[1];
        ++count;
    } while (std::next_permutation(p.begin(), p.end()));
    c.expect(count == 24 && y1 == 24, "mean Y_1 over S_4 = 1 exactly");
    c.expect(y2 * 2 == count, "mean Y_2 over S_4 = 1/2 exactly");

    const std::uint64_t samples = 10000;
    std::uint64_t no_fixed = 0;
    for (std::uint64_t k = 0; k < samples; ++k) {
        Rng rng = Rng::stream(seed, 1000 + k);
        auto d = sample_permutation(100, rng);
        if (d.cycle_counts[0] == 0) ++no_fixed;
    }
    double est = static_cast<double>(no_fixed) / samples;
    double gap = std::fabs(est - std::exp(-1.0));
    std::ostringstream os;
    os << "|Pr(Y_1=0) - e^-1| = " << std::setprecision(4) << gap << " <= 0.02";
    c.expect(gap <= 0.02, os.str());
}

inline void crit_schedules(Check& c) {
    for (int d = 1; d <= 6; ++d) {
        auto det = periodic_basis_det(d);
        c.expect(std::fabs(det.numeric - det.product_formula) <= 1e-10,
                 "det agreement at d=" + std::to_string(d));
        c.expect(det.product_formula != 0.0, "nonzero det at d=" + std::to_string(d));
    }
    auto mk = mk_tables(5);
    c.expect(mk.m[0] == 0 && mk.k[0] == 0, "m(0)=k(0)=0");
    c.expect(mk.m[1] == 2, "m(1)=2");
    c.expect(mk.k[1] == 2, "k(1)=2");
    bool sep = true;
    for (int s = 0; s <= 4; ++s)
        for (int r = s + 1; r <= 4; ++r) {
            double gap = g_poisson_cdf(mk.k[r], mk.m[s + 1]) - g_poisson_cdf(mk.k[s], mk.m[s + 1]);
            if (gap < 1.0 / 3.0 - 1e-12) sep = false;
        }
    c.expect(sep, "tail separation >= 1/3 for r > s, r,s <= 4");
}

} // namespace acceptance_detail

inline std::vector<CriterionResult> run_acceptance(std::uint64_t seed = 20240601, int jobs = 1) {
    using namespace acceptance_detail;
    std::vector<CriterionResult> out;
    out.push_back(run_criterion(1, "exact-gadget-counts",
                                [&](Check& c) { crit_gadget_counts(c, jobs); }));
    out.push_back(run_criterion(2, "ladder-recognizer", [&](Check& c) { crit_ladder(c, seed); }));
    out.push_back(run_criterion(3, "product-recognizer", [&](Check& c) { crit_product(c); }));
    out.push_back(
        run_criterion(4, "reduction-chain-exactness", [&](Check& c) { crit_pushforward(c); }));
    out.push_back(run_criterion(5, "poisson-vectors", [&](Check& c) { crit_poisson(c, seed); }));
    out.push_back(run_criterion(6, "density-threshold", [&](Check& c) { crit_threshold(c); }));
    out.push_back(
        run_criterion(7, "cycle-intensity", [&](Check& c) { crit_cycles(c, seed, jobs); }));
    out.push_back(run_criterion(8, "tv-split", [&](Check& c) { crit_tv(c, seed); }));
    out.push_back(run_criterion(9, "ef-solver", [&](Check& c) { crit_ef(c, seed); }));
    out.push_back(run_criterion(10, "diophantine-compiler", [&](Check& c) { crit_dioph(c); }));
    out.push_back(
        run_criterion(11, "permutation-statistics", [&](Check& c) { crit_permutations(c, seed); }));
    out.push_back(run_criterion(12, "lambda-schedules", [&](Check& c) { crit_schedules(c); }));
    return out;
}

inline int print_acceptance(const std::vector<CriterionResult>& results, std::ostream& os) {
    int fails = 0;
    for (const auto& r : results) {
        os << (r.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << r.id << "  " << std::left
           << std::setw(26) << r.name << std::right << std::fixed << std::setprecision(1)
           << std::setw(8) << r.seconds << "s  " << r.detail << "\n";
        os.unsetf(std::ios::fixed);
        if (!r.pass) ++fails;
    }
    os << (fails == 0 ? "all criteria passed" : std::to_string(fails) + " criterion(s) failed")
       << "\n";
    return fails;
}

} // namespace relic
