#pragma once

#include "relic/rng.hpp"
#include "relic/structure.hpp"

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace relic {

namespace detail_iso {

// One round of color refinement. Multisets of incident-tuple signatures are
// folded with a commutative hash: collisions only coarsen the partition,
// which keeps the pruning sound.
inline void refine_round(const Structure& g, std::vector<std::uint64_t>& colors) {
    int n = g.n();
    std::vector<std::uint64_t> acc(n);
    for (int v = 0; v < n; ++v) acc[v] = Rng::mix(colors[v] ^ 0x1234567ULL);
    const auto& sig = *g.signature();
    std::vector<int> tup;
    for (std::size_t s = 0; s < sig.size(); ++s) {
        int a = sig.at(s).arity;
        std::uint64_t total = g.table_bits(s);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            if (!g.get_index(s, idx)) continue;
            tup = decode_tuple(idx, n, a);
            std::uint64_t h = Rng::mix(s * 131 + 7);
            for (int p = 0; p < a; ++p) h = Rng::mix(h ^ colors[tup[p] - 1]);
            for (int p = 0; p < a; ++p)
                acc[tup[p] - 1] += Rng::mix(h ^ static_cast<std::uint64_t>(p));
        }
    }
    colors = std::move(acc);
}

inline int distinct_count(std::vector<std::uint64_t> v) {
    std::sort(v.begin(), v.end());
    return static_cast<int>(std::unique(v.begin(), v.end()) - v.begin());
}

inline std::vector<std::uint64_t> refine(const Structure& g,
                                         const std::vector<std::pair<int, int>>& pins,
                                         bool pin_first) {
    std::vector<std::uint64_t> colors(g.n(), 0);
    for (std::size_t i = 0; i < pins.size(); ++i) {
        int v = pin_first ? pins[i].first : pins[i].second;
        colors[v] = Rng::mix(0xABCD + i);
    }
    int prev = distinct_count(colors);
    for (int round = 0; round < g.n(); ++round) {
        refine_round(g, colors);
        int cur = distinct_count(colors);
        if (cur == prev) break;
        prev = cur;
    }
    return colors;
}

// pairwise consistency of a new pair (u,v) against mapped pairs, binary and
// unary symbols only; higher arities are verified at the leaves
inline bool consistent_pair(const Structure& g, const Structure& h, int u, int v,
                            const std::vector<std::pair<int, int>>& mapped) {
    const auto& sig = *g.signature();
    for (std::size_t s = 0; s < sig.size(); ++s) {
        int a = sig.at(s).arity;
        if (a == 1) {
            if (g.get0(s, {u}) != h.get0(s, {v})) return false;
        } else if (a == 2) {
            if (g.get0(s, {u, u}) != h.get0(s, {v, v})) return false;
            for (auto [x, y] : mapped) {
                if (g.get0(s, {u, x}) != h.get0(s, {v, y})) return false;
                if (g.get0(s, {x, u}) != h.get0(s, {y, v})) return false;
            }
        }
    }
    return true;
}

inline bool full_check(const Structure& g, const Structure& h, const std::vector<int>& map) {
    const auto& sig = *g.signature();
    int n = g.n();
    for (std::size_t s = 0; s < sig.size(); ++s) {
        int a = sig.at(s).arity;
        if (a <= 2) continue;
        std::uint64_t total = g.table_bits(s);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            auto t = decode_tuple(idx, n, a);
            std::vector<int> mt(a);
            for (int p = 0; p < a; ++p) mt[p] = map[t[p] - 1] + 1;
            if (g.get_index(s, idx) != h.get(s, mt)) return false;
        }
    }
    return true;
}

struct IsoSearch {
    const Structure& g;
    const Structure& h;
    std::vector<std::uint64_t> gcol, hcol;
    std::vector<std::pair<int, int>> mapped;
    std::vector<int> gdone, hdone; // 0/1 flags

    IsoSearch(const Structure& g_, const Structure& h_,
              const std::vector<std::pair<int, int>>& pins)
        : g(g_), h(h_) {
        gcol = refine(g, pins, true);
        hcol = refine(h, pins, false);
        gdone.assign(g.n(), 0);
        hdone.assign(h.n(), 0);
        for (auto [a, b] : pins) {
            mapped.push_back({a, b});
            gdone[a] = hdone[b] = 1;
        }
    }

    bool color_classes_match() const {
        auto a = gcol;
        auto b = hcol;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        return a == b;
    }

    bool search() {
        int u = -1;
        for (int i = 0; i < g.n(); ++i)
            if (!gdone[i]) {
                u = i;
                break;
            }
        if (u < 0) {
            std::vector<int> map(g.n());
            for (auto [a, b] : mapped) map[a] = b;
            return full_check(g, h, map);
        }
        for (int v = 0; v < h.n(); ++v) {
            if (hdone[v] || hcol[v] != gcol[u]) continue;
            if (!consistent_pair(g, h, u, v, mapped)) continue;
            mapped.push_back({u, v});
            gdone[u] = hdone[v] = 1;
            if (search()) return true;
            mapped.pop_back();
            gdone[u] = hdone[v] = 0;
        }
        return false;
    }
};

inline bool exists_iso(const Structure& g, const Structure& h,
                       const std::vector<std::pair<int, int>>& pins) {
    IsoSearch s(g, h, pins);
    if (!s.color_classes_match()) return false;
    return s.search();
}

} // namespace detail_iso

inline constexpr int kIsoVertexBudget = 128;

inline bool isomorphic(const Structure& g, const Structure& h) {
    if (!(*g.signature() == *h.signature()))
        throw std::invalid_argument("isomorphic: signature mismatch");
    if (g.n() != h.n()) return false;
    if (g.n() > kIsoVertexBudget) throw std::invalid_argument("isomorphic: vertex budget exceeded");
    for (std::size_t s = 0; s < g.signature()->size(); ++s) {
        std::uint64_t pg = 0, ph = 0;
        for (std::uint64_t w : g.table(s)) pg += __builtin_popcountll(w);
        for (std::uint64_t w : h.table(s)) ph += __builtin_popcountll(w);
        if (pg != ph) return false;
    }
    return detail_iso::exists_iso(g, h, {});
}

// |Aut(G)| by orbit-stabilizer over a pinned prefix: at each level the count
// factors into (orbit size of the next vertex) x (stabilizer count).
inline std::uint64_t automorphism_count(const Structure& g) {
    if (g.n() > kIsoVertexBudget)
        throw std::invalid_argument("automorphism_count: vertex budget exceeded");
    std::vector<std::pair<int, int>> pins;
    std::uint64_t total = 1;
    for (int u = 0; u < g.n(); ++u) {
        auto colors = detail_iso::refine(g, pins, true);
        std::uint64_t orbit = 0;
        for (int v = 0; v < g.n(); ++v) {
            bool pinned = false;
            for (auto [a, b] : pins)
                if (b == v) pinned = true;
            if (pinned || colors[v] != colors[u]) continue;
            if (v == u || detail_iso::exists_iso(g, g, [&] {
                    auto p = pins;
                    p.push_back({u, v});
                    return p;
                }()))
                ++orbit;
        }
        total *= orbit;
        pins.push_back({u, u});
    }
    return total;
}

} // namespace relic
