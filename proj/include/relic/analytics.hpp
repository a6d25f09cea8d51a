#pragma once

#include "relic/modelcheck.hpp"
#include "relic/perm.hpp"
#include "relic/rational.hpp"
#include "relic/structure.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace relic {

// lambda^k e^-lambda / k!
inline double poisson_term(double lambda, int k) {
    if (lambda < 0) throw std::invalid_argument("poisson_term: lambda >= 0");
    if (lambda == 0) return k == 0 ? 1.0 : 0.0;
    return std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
}

inline double binomial_pmf(std::uint64_t n, std::uint64_t k, double p) {
    if (p <= 0) return k == 0 ? 1.0 : 0.0;
    if (p >= 1) return k == n ? 1.0 : 0.0;
    double lc = std::lgamma(static_cast<double>(n) + 1) -
                std::lgamma(static_cast<double>(k) + 1) -
                std::lgamma(static_cast<double>(n - k) + 1);
    return std::exp(lc + k * std::log(p) + (n - k) * std::log1p(-p));
}

// determinant of (i^j/j! e^-i), 0 <= i,j <= d-1, computed directly and by the
// superfactorial product formula; both are returned for cross-checking
struct BasisDet {
    double numeric;
    double product_formula;
};

inline BasisDet periodic_basis_det(int d) {
    if (d < 1 || d > 12) throw std::invalid_argument("periodic_basis_det: 1 <= d <= 12");
    std::vector<std::vector<long double>> m(d, std::vector<long double>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            long double fact = 1;
            for (int t = 2; t <= j; ++t) fact *= t;
            m[i][j] = std::pow(static_cast<long double>(i), j) / fact * std::exp(-(long double)i);
        }
    long double det = 1;
    for (int col = 0; col < d; ++col) {
        int pivot = -1;
        for (int r = col; r < d; ++r)
            if (pivot < 0 || std::fabs((double)m[r][col]) > std::fabs((double)m[pivot][col]))
                pivot = r;
        if (std::fabs((double)m[pivot][col]) < 1e-300) return {0.0, 0.0};
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (int r = col + 1; r < d; ++r) {
            long double f = m[r][col] / m[col][col];
            for (int c = col; c < d; ++c) m[r][c] -= f * m[col][c];
        }
    }
    long double prod = 1;
    for (int i = 0; i < d; ++i)
        for (int i2 = i + 1; i2 < d; ++i2) prod *= (i2 - i);
    for (int i = 0; i < d; ++i) prod *= std::exp(-(long double)i);
    for (int j = 0; j < d; ++j) {
        long double fact = 1;
        for (int t = 2; t <= j; ++t) fact *= t;
        prod /= fact;
    }
    return {static_cast<double>(det), static_cast<double>(prod)};
}

// --- intensity schedules ------------------------------------------------------

// truncated Poisson tail weight g_k(lambda) = (sum_{i<=k} lambda^i/i!) e^-lambda;
// strictly decreasing in lambda, increasing in k
inline double g_poisson_cdf(int k, double lambda) {
    double acc = 0, term = 1;
    for (int i = 0; i <= k; ++i) {
        if (i > 0) term *= lambda / i;
        acc += term;
    }
    return acc * std::exp(-lambda);
}

struct MkTables {
    std::vector<int> m; // m[r]
    std::vector<int> k; // k[r]
};

// m(r) = least M with g_{k(r-1)}(M) <= 1/3; k(r) = least K with g_K(m(r)) >= 2/3
inline MkTables mk_tables(int r_max) {
    if (r_max < 0 || r_max > 8) throw std::invalid_argument("mk_tables: 0 <= r_max <= 8");
    MkTables t;
    t.m.push_back(0);
    t.k.push_back(0);
    for (int r = 1; r <= r_max; ++r) {
        int prev_k = t.k[r - 1];
        int m = 0;
        while (g_poisson_cdf(prev_k, m) > 1.0 / 3.0) ++m;
        int k = 0;
        while (g_poisson_cdf(k, m) < 2.0 / 3.0) ++k;
        t.m.push_back(m);
        t.k.push_back(k);
    }
    return t;
}

inline int dyadic_valuation(int n) {
    int r = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++r;
    }
    return r;
}

enum class ScheduleKind { ModD, DyadicInverse, MOfR };

struct LambdaValue {
    double lambda = 0.0;
    bool defined = true; // false at odd n for the dyadic-inverse schedule
};

struct LambdaSchedule {
    ScheduleKind kind;
    int d = 0;             // ModD period
    MkTables tables;       // MOfR

    static LambdaSchedule mod_d(int d) { return {ScheduleKind::ModD, d, {}}; }
    static LambdaSchedule dyadic_inverse() { return {ScheduleKind::DyadicInverse, 0, {}}; }
    static LambdaSchedule m_of_r(int r_max = 8) {
        return {ScheduleKind::MOfR, 0, mk_tables(r_max)};
    }

    LambdaValue at(int n) const {
        if (n < 1) throw std::invalid_argument("lambda schedule: n >= 1");
        switch (kind) {
        case ScheduleKind::ModD:
            return {static_cast<double>(n % d), true};
        case ScheduleKind::DyadicInverse: {
            int r = dyadic_valuation(n);
            if (r == 0) return {0.0, false};
            return {1.0 / r, true};
        }
        case ScheduleKind::MOfR: {
            int r = dyadic_valuation(n);
            if (r >= static_cast<int>(tables.m.size()))
                throw std::invalid_argument("lambda schedule: r beyond table budget");
            return {static_cast<double>(tables.m[r]), true};
        }
        }
        return {};
    }
};

// --- cycle intensity and the density threshold --------------------------------

inline double factorial_d(int k) {
    double f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// limit intensity of the total cycle count: f(c) = sum_{k>=2} x^k/(2k)
//   = (1/2) ln(1/(1-x)) - x/2, x = c/(d-2)! (unoriented) or d(d-1)c (oriented)
inline double cycle_intensity(double c, int d, bool oriented) {
    if (d < 2) throw std::invalid_argument("cycle_intensity: d >= 2");
    double x = oriented ? d * (d - 1) * c : c / factorial_d(d - 2);
    if (!(x >= 0 && x < 1)) throw std::domain_error("cycle_intensity: argument outside [0,1)");
    return 0.5 * std::log(1.0 / (1.0 - x)) - x / 2.0;
}

// unique positive c with (1/2)ln(1/(1-c/(d-2)!)) - c/(2(d-2)!) = ln 2
inline double solve_c0(int d, double tol = 1e-10, int max_iter = 200) {
    double cap = factorial_d(d - 2);
    auto f = [&](double c) { return cycle_intensity(c, d, false) - std::log(2.0); };
    double lo = 0.0, hi = cap * (1.0 - 1e-12);
    if (f(hi) < 0) throw std::runtime_error("solve_c0: no root below the domain cap");
    for (int it = 0; it < max_iter; ++it) {
        double mid = (lo + hi) / 2;
        if (f(mid) < 0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < tol) break;
    }
    return (lo + hi) / 2;
}

inline double c0_for_group(const PermGroup& h, int d) {
    return static_cast<double>(h.order()) / factorial_d(d) * solve_c0(d);
}

// --- exact cycle counting -------------------------------------------------

// number of simple cycles (as subgraphs) of an undirected graph; cycles are
// enumerated per component anchored at their smallest vertex
inline std::uint64_t count_cycles(const Structure& g, int cyclomatic_budget = 24) {
    int n = g.n();
    std::vector<std::vector<int>> adj(n);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (v != u && has_edge(g, u, v)) adj[u].push_back(v);

    // component budgets
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<int> stack{s};
        comp[s] = ncomp;
        int vcount = 0, ecount = 0;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            ++vcount;
            for (int v : adj[u]) {
                ++ecount;
                if (comp[v] < 0) {
                    comp[v] = ncomp;
                    stack.push_back(v);
                }
            }
        }
        ecount /= 2;
        if (ecount - vcount + 1 > cyclomatic_budget)
            throw std::runtime_error("count_cycles: component cyclomatic budget exceeded");
        ++ncomp;
    }

    std::uint64_t total = 0;
    std::vector<bool> on_path(n, false);
    // anchored DFS: paths start at the anchor, use only larger vertices, and
    // close back to the anchor; each cycle is found twice (two directions)
    struct Rec {
        const std::vector<std::vector<int>>& adj;
        std::vector<bool>& on_path;
        std::uint64_t found = 0;
        int anchor = 0;

        void go(int u, int depth) {
            on_path[u] = true;
            for (int v : adj[u]) {
                if (v == anchor) {
                    if (depth >= 3) ++found;
                } else if (v > anchor && !on_path[v]) {
                    go(v, depth + 1);
                }
            }
            on_path[u] = false;
        }
    };
    for (int s = 0; s < n; ++s) {
        if (adj[s].size() < 2) continue;
        Rec rec{adj, on_path};
        rec.anchor = s;
        rec.go(s, 1);
        total += rec.found / 2;
    }
    return total;
}

// density-based cycle test for oriented d-uniform hypergraphs: W spans
// |W|/(d-1) hyperedges and no proper subset reaches that density
inline bool hypergraph_cycle_check(const std::vector<int>& w_set, const Structure& hyper,
                                   int d) {
    int k = static_cast<int>(w_set.size());
    if (k > 24) throw std::invalid_argument("hypergraph_cycle_check: |W| <= 24");
    if (k % (d - 1) != 0) return false;
    auto induced_edges = [&](std::uint32_t mask) {
        // count present tuples with every component inside the masked subset
        std::vector<int> members;
        for (int i = 0; i < k; ++i)
            if ((mask >> i) & 1) members.push_back(w_set[i]);
        std::uint64_t count = 0;
        std::vector<int> tup(d, 0);
        std::uint64_t total = 1;
        for (int i = 0; i < d; ++i) total *= members.size();
        for (std::uint64_t code = 0; code < total; ++code) {
            std::uint64_t c = code;
            for (int i = d - 1; i >= 0; --i) {
                tup[i] = members[c % members.size()];
                c /= members.size();
            }
            bool inj = true;
            for (int i = 0; i < d && inj; ++i)
                for (int j = i + 1; j < d; ++j)
                    if (tup[i] == tup[j]) inj = false;
            if (inj && hyper.get0(0, tup)) ++count;
        }
        return count;
    };
    std::uint32_t full = (k >= 32 ? 0xFFFFFFFFu : ((1u << k) - 1));
    if (induced_edges(full) * (d - 1) != static_cast<std::uint64_t>(k)) return false;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        int size = __builtin_popcount(mask);
        if (size == 0) continue;
        if (induced_edges(mask) * (d - 1) >= static_cast<std::uint64_t>(size)) return false;
    }
    return true;
}

// --- total variation between product Bernoulli laws -------------------------

// exact TV via the sign-split index k0; equals the half L1 sum over the cube
inline double tv_exact(double p, double q, std::uint64_t s) {
    if (s < 1) throw std::invalid_argument("tv_exact: s >= 1");
    if (p < 0 || p > 1 || q < 0 || q > 1) throw std::invalid_argument("tv_exact: p,q in [0,1]");
    if (p == q) return 0.0;
    if (p > q) std::swap(p, q); // now p < q
    if (p == 0.0 && q == 1.0) return 1.0;
    if (p == 0.0) return 1.0 - std::pow(1.0 - q, static_cast<double>(s));
    if (q == 1.0) return 1.0 - std::pow(p, static_cast<double>(s));
    double num = std::log1p(-p) - std::log1p(-q);
    double den = std::log(q) + std::log1p(-p) - std::log(p) - std::log1p(-q);
    auto k0 = static_cast<std::uint64_t>(std::floor(s * num / den));
    double acc = 0;
    for (std::uint64_t k = k0 + 1; k <= s; ++k)
        acc += binomial_pmf(s, k, q) - binomial_pmf(s, k, p);
    return acc;
}

inline double tv_condition(double p, double q, std::uint64_t s) {
    double pmin = std::min(std::min(p, q), std::min(1 - p, 1 - q));
    if (pmin <= 0) return std::numeric_limits<double>::infinity();
    return std::sqrt(static_cast<double>(s) / pmin) * std::fabs(p - q);
}

// brute-force oracle over all 2^s outcomes
inline double tv_brute(double p, double q, int s) {
    if (s > 22) throw std::invalid_argument("tv_brute: s <= 22");
    double acc = 0;
    for (std::uint64_t mask = 0; mask < (1ull << s); ++mask) {
        int ones = __builtin_popcountll(mask);
        double mp = std::pow(p, ones) * std::pow(1 - p, s - ones);
        double mq = std::pow(q, ones) * std::pow(1 - q, s - ones);
        acc += std::fabs(mp - mq);
    }
    return acc / 2;
}

// --- limiting cycle-word products ---------------------------------------------

// product over lengths l = 3..w+2 of Poisson(1/(2l)) presence/absence masses
inline double cycle_word_limit(const std::string& word) {
    if (word.empty()) throw std::invalid_argument("cycle_word_limit: word length >= 1");
    double acc = 1;
    for (std::size_t i = 0; i < word.size(); ++i) {
        double l = static_cast<double>(i) + 3;
        double absent = std::exp(-1.0 / (2 * l));
        acc *= word[i] == '1' ? 1.0 - absent : absent;
    }
    return acc;
}

inline double limit_gap_bound(int w) { return std::exp(1.5) / std::sqrt(w + 2.0); }

inline double extension_axiom_bound(int n, int k) {
    if (!(n > k && k >= 1)) throw std::invalid_argument("extension_axiom_bound: n > k >= 1");
    return std::pow(static_cast<double>(n), k) * std::pow(1.0 - std::pow(2.0, -k), n - k);
}

// --- probability sequences -----------------------------------------------------

// partial map n -> probability; exact entries never silently overwrite
struct ProbSeq {
    std::string sentence_id;
    std::string distribution_id;
    std::map<int, ProbValue> entries;

    void add(int n, ProbValue v) {
        auto it = entries.find(n);
        if (it != entries.end()) {
            if (it->second.exact && v.exact && it->second.value_exact != v.value_exact)
                throw std::runtime_error("ProbSeq: conflicting exact values at n=" +
                                         std::to_string(n));
            if (it->second.exact) return; // keep the exact entry
        }
        entries[n] = std::move(v);
    }
};

enum class SeqLaw { ZeroOne, Convergence, NonConvergent, Inconclusive };

inline const char* seq_law_name(SeqLaw l) {
    switch (l) {
    case SeqLaw::ZeroOne:
        return "zero-one";
    case SeqLaw::Convergence:
        return "convergence";
    case SeqLaw::NonConvergent:
        return "non-convergent";
    default:
        return "inconclusive";
    }
}

struct SeqAnalysis {
    double limsup_distance = 0.0; // to {0,1} in one-sequence mode, |x-y| in pair mode
    double oscillation = 0.0;
    SeqLaw law = SeqLaw::Inconclusive;
};

// Finite-window stand-in for tail behaviour: the window maximum replaces the
// limsup, cluster separation by more than 3 eps marks non-convergence.
inline SeqAnalysis seq_analyze(const ProbSeq& x, const ProbSeq* y, int window_lo, int window_hi,
                               double eps) {
    std::vector<double> vals;
    double pair_dist = 0.0;
    for (const auto& [n, v] : x.entries) {
        if (n < window_lo || n > window_hi) continue;
        vals.push_back(v.as_double());
        if (y) {
            auto it = y->entries.find(n);
            if (it != y->entries.end())
                pair_dist = std::max(pair_dist, std::fabs(v.as_double() -
                                                          it->second.as_double()));
        }
    }
    if (vals.empty()) throw std::invalid_argument("seq_analyze: empty window");
    SeqAnalysis out;
    double lo = vals[0], hi = vals[0], dist01 = 0.0;
    for (double v : vals) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        dist01 = std::max(dist01, std::min(v, 1.0 - v));
    }
    out.oscillation = hi - lo;
    out.limsup_distance = y ? pair_dist : dist01;

    std::vector<double> sorted = vals;
    std::sort(sorted.begin(), sorted.end());
    bool clustered = false;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i + 1] - sorted[i] > 3 * eps) clustered = true;
    if (clustered)
        out.law = SeqLaw::NonConvergent;
    else if (dist01 <= eps)
        out.law = SeqLaw::ZeroOne;
    else if (out.oscillation <= eps)
        out.law = SeqLaw::Convergence;
    else
        out.law = SeqLaw::Inconclusive;
    return out;
}

} // namespace relic
