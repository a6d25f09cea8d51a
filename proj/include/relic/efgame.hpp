#pragma once

#include "relic/iso.hpp"
#include "relic/structure.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace relic {

// ---------------------------------------------------------------------------
// k-round vertex-matching game deciding quantifier-depth-k equivalence.
// Positions are memoized on the order-canonicalized partial map plus the
// number of rounds left (play order is irrelevant to the continuation).
// ---------------------------------------------------------------------------

struct SpoilerMove {
    bool in_first = true; // which structure Spoiler picks from
    int vertex = -1;
    // duplicator reply -> continuation; missing reply means the partial map
    // is already broken after it
    std::map<int, std::shared_ptr<SpoilerMove>> replies;
};

struct EfResult {
    bool duplicator_wins = true;
    std::shared_ptr<SpoilerMove> certificate; // set for Spoiler wins on request
};

class EfGame {
public:
    EfGame(const Structure& g, const Structure& h) : g_(g), h_(h) {
        if (!(*g.signature() == *h.signature()))
            throw std::invalid_argument("ef game: signature mismatch");
    }

    bool duplicator_wins(int rounds, std::uint64_t budget = 50'000'000) {
        budget_ = budget;
        spent_ = 0;
        return wins({}, rounds);
    }

    EfResult solve(int rounds, bool want_certificate, std::uint64_t budget = 50'000'000) {
        EfResult r;
        r.duplicator_wins = duplicator_wins(rounds, budget);
        if (!r.duplicator_wins && want_certificate) r.certificate = build_cert({}, rounds);
        return r;
    }

private:
    using Pairs = std::vector<std::pair<int, int>>;

    const Structure& g_;
    const Structure& h_;
    std::map<std::pair<Pairs, int>, bool> memo_;
    std::uint64_t budget_ = 0, spent_ = 0;

    static Pairs extend(const Pairs& pairs, int x, int y) {
        Pairs p = pairs;
        p.push_back({x, y});
        std::sort(p.begin(), p.end());
        p.erase(std::unique(p.begin(), p.end()), p.end());
        return p;
    }

    bool partial_iso(const Pairs& pairs) const {
        if (pairs.empty()) return true;
        for (std::size_t i = 0; i < pairs.size(); ++i)
            for (std::size_t j = 0; j < pairs.size(); ++j) {
                if ((pairs[i].first == pairs[j].first) != (pairs[i].second == pairs[j].second))
                    return false;
            }
        const auto& sig = *g_.signature();
        int k = static_cast<int>(pairs.size());
        for (std::size_t s = 0; s < sig.size(); ++s) {
            int a = sig.at(s).arity;
            // all a-tuples over the matched vertices
            std::vector<int> idx(a, 0);
            while (true) {
                std::vector<int> tg(a), th(a);
                for (int t = 0; t < a; ++t) {
                    tg[t] = pairs[idx[t]].first;
                    th[t] = pairs[idx[t]].second;
                }
                if (g_.get0(s, tg) != h_.get0(s, th)) return false;
                int t = a - 1;
                while (t >= 0 && ++idx[t] == k) idx[t--] = 0;
                if (t < 0) break;
            }
        }
        return true;
    }

    bool wins(const Pairs& pairs, int r) {
        if (!partial_iso(pairs)) return false;
        if (r == 0) return true;
        auto key = std::make_pair(pairs, r);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        if (++spent_ > budget_) throw std::runtime_error("ef game: position budget exceeded");

        bool dup = true;
        for (int x = 0; x < g_.n() && dup; ++x) { // Spoiler in G
            bool reply = false;
            for (int y = 0; y < h_.n() && !reply; ++y)
                if (wins(extend(pairs, x, y), r - 1)) reply = true;
            if (!reply) dup = false;
        }
        for (int y = 0; y < h_.n() && dup; ++y) { // Spoiler in H
            bool reply = false;
            for (int x = 0; x < g_.n() && !reply; ++x)
                if (wins(extend(pairs, x, y), r - 1)) reply = true;
            if (!reply) dup = false;
        }
        memo_[key] = dup;
        return dup;
    }

    std::shared_ptr<SpoilerMove> build_cert(const Pairs& pairs, int r) {
        // pick a winning Spoiler move and record the refutation of each reply
        for (int x = 0; x < g_.n(); ++x) {
            bool all_lose = true;
            for (int y = 0; y < h_.n() && all_lose; ++y)
                if (wins(extend(pairs, x, y), r - 1)) all_lose = false;
            if (!all_lose) continue;
            auto mv = std::make_shared<SpoilerMove>();
            mv->in_first = true;
            mv->vertex = x;
            for (int y = 0; y < h_.n(); ++y) {
                Pairs next = extend(pairs, x, y);
                if (partial_iso(next) && r - 1 > 0) mv->replies[y] = build_cert(next, r - 1);
            }
            return mv;
        }
        for (int y = 0; y < h_.n(); ++y) {
            bool all_lose = true;
            for (int x = 0; x < g_.n() && all_lose; ++x)
                if (wins(extend(pairs, x, y), r - 1)) all_lose = false;
            if (!all_lose) continue;
            auto mv = std::make_shared<SpoilerMove>();
            mv->in_first = false;
            mv->vertex = y;
            for (int x = 0; x < g_.n(); ++x) {
                Pairs next = extend(pairs, x, y);
                if (partial_iso(next) && r - 1 > 0) mv->replies[x] = build_cert(next, r - 1);
            }
            return mv;
        }
        throw std::logic_error("ef certificate requested at a duplicator-won position");
    }
};

inline bool ef_duplicator_wins(const Structure& g, const Structure& h, int rounds) {
    EfGame game(g, h);
    return game.duplicator_wins(rounds);
}

// ---------------------------------------------------------------------------
// Hanf census: multiset of rooted r-ball isomorphism types.
// ---------------------------------------------------------------------------

inline Structure rooted_ball(const Structure& g, int center, int r) {
    int n = g.n();
    std::vector<int> dist(n, -1);
    std::vector<int> queue{center};
    dist[center] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int u = queue[qi];
        if (dist[u] == r) continue;
        for (int v = 0; v < n; ++v)
            if (v != u && has_edge(g, u, v) && dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
    }
    std::vector<int> members;
    for (int v = 0; v < n; ++v)
        if (dist[v] >= 0) members.push_back(v);
    // ball graph plus a unary root marker
    auto sig = std::make_shared<const Signature>(
        std::vector<RelSymbol>{{"E", 2, true, true}, {"Root", 1, false, false}});
    Structure ball(sig, static_cast<int>(members.size()));
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (members[i] == center) ball.set0(1, {static_cast<int>(i)});
        for (std::size_t j = i + 1; j < members.size(); ++j)
            if (has_edge(g, members[i], members[j])) {
                ball.set0(0, {static_cast<int>(i), static_cast<int>(j)});
                ball.set0(0, {static_cast<int>(j), static_cast<int>(i)});
            }
    }
    return ball;
}

struct HanfCensus {
    std::vector<Structure> types;
    std::vector<int> counts;

    int find(const Structure& ball) const {
        for (std::size_t i = 0; i < types.size(); ++i)
            if (types[i].n() == ball.n() && isomorphic(types[i], ball))
                return static_cast<int>(i);
        return -1;
    }
};

inline HanfCensus hanf_census(const Structure& g, int r) {
    HanfCensus census;
    for (int v = 0; v < g.n(); ++v) {
        Structure ball = rooted_ball(g, v, r);
        int t = census.find(ball);
        if (t < 0) {
            census.types.push_back(std::move(ball));
            census.counts.push_back(1);
        } else {
            census.counts[t]++;
        }
    }
    return census;
}

// threshold comparison of ball-type counts; a sufficient condition for
// k-equivalence once the caller picks radius and threshold
inline bool hanf_check(const Structure& g, const Structure& h, int r, int s) {
    HanfCensus cg = hanf_census(g, r);
    HanfCensus ch = hanf_census(h, r);
    for (std::size_t t = 0; t < cg.types.size(); ++t) {
        int other = ch.find(cg.types[t]);
        int hcount = other < 0 ? 0 : ch.counts[other];
        if (std::min(s, cg.counts[t]) != std::min(s, hcount)) return false;
    }
    for (std::size_t t = 0; t < ch.types.size(); ++t) {
        int other = cg.find(ch.types[t]);
        int gcount = other < 0 ? 0 : cg.counts[other];
        if (std::min(s, ch.counts[t]) != std::min(s, gcount)) return false;
    }
    return true;
}

} // namespace relic
