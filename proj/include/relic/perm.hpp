#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace relic {

using Perm = std::vector<int>; // p[i] = image of i, 0-based

inline Perm perm_identity(int d) {
    Perm p(d);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

inline Perm perm_compose(const Perm& a, const Perm& b) { // (a*b)(i) = a(b(i))
    Perm c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
    return c;
}

inline Perm perm_inverse(const Perm& p) {
    Perm inv(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = static_cast<int>(i);
    return inv;
}

// cycle type: counts[i-1] = number of cycles of length i
inline std::vector<int> cycle_type(const Perm& p) {
    int d = static_cast<int>(p.size());
    std::vector<int> counts(d, 0);
    std::vector<bool> seen(d, false);
    for (int i = 0; i < d; ++i) {
        if (seen[i]) continue;
        int len = 0, j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = p[j];
            ++len;
        }
        counts[len - 1]++;
    }
    return counts;
}

// Subgroup of S_d given by generators; elements are closed lazily on demand.
class PermGroup {
public:
    PermGroup(int degree, std::vector<Perm> generators)
        : degree_(degree), gens_(std::move(generators)) {
        for (const auto& g : gens_)
            if (static_cast<int>(g.size()) != degree)
                throw std::invalid_argument("generator degree mismatch");
    }

    int degree() const { return degree_; }
    const std::vector<Perm>& generators() const { return gens_; }

    const std::vector<Perm>& elements() const {
        if (elements_.empty()) close();
        return elements_;
    }
    std::size_t order() const { return elements().size(); }

    bool contains(const Perm& p) const {
        const auto& els = elements();
        return std::find(els.begin(), els.end(), p) != els.end();
    }

    static PermGroup symmetric(int d) {
        std::vector<Perm> gens;
        if (d >= 2) {
            Perm t = perm_identity(d);
            std::swap(t[0], t[1]);
            gens.push_back(t);
            Perm c(d);
            for (int i = 0; i < d; ++i) c[i] = (i + 1) % d;
            gens.push_back(c);
        }
        return PermGroup(d, gens);
    }

    static PermGroup trivial(int d) { return PermGroup(d, {}); }

    static PermGroup cyclic(int d) {
        Perm c(d);
        for (int i = 0; i < d; ++i) c[i] = (i + 1) % d;
        return PermGroup(d, {c});
    }

    PermGroup conjugate(const Perm& g) const {
        Perm ginv = perm_inverse(g);
        std::vector<Perm> gens;
        for (const auto& h : gens_) gens.push_back(perm_compose(perm_compose(g, h), ginv));
        return PermGroup(degree_, gens);
    }

private:
    void close() const {
        std::set<Perm> seen;
        std::vector<Perm> frontier{perm_identity(degree_)};
        seen.insert(frontier[0]);
        while (!frontier.empty()) {
            std::vector<Perm> next;
            for (const auto& e : frontier)
                for (const auto& g : gens_) {
                    Perm p = perm_compose(g, e);
                    if (seen.insert(p).second) next.push_back(p);
                }
            frontier = std::move(next);
        }
        elements_.assign(seen.begin(), seen.end());
    }

    int degree_;
    std::vector<Perm> gens_;
    mutable std::vector<Perm> elements_;
};

// Action of g on a d-tuple: component i of the image is component g^{-1}(i).
inline std::vector<int> act_on_tuple(const Perm& g, const std::vector<int>& tuple) {
    Perm ginv = perm_inverse(g);
    std::vector<int> out(tuple.size());
    for (std::size_t i = 0; i < tuple.size(); ++i) out[i] = tuple[ginv[i]];
    return out;
}

// Orbits of the group action on injective d-tuples over [n] (0-based values).
// Each orbit is sorted; orbits are ordered by their least (representative) tuple.
inline std::vector<std::vector<std::vector<int>>> tuple_orbits(const PermGroup& group, int n) {
    int d = group.degree();
    if (n < d) throw std::invalid_argument("tuple_orbits: n < tuple arity");
    std::vector<std::vector<std::vector<int>>> orbits;
    std::set<std::vector<int>> seen;
    std::vector<int> tuple(d);
    std::vector<bool> used(n, false);

    // iterate injective tuples in lexicographic order
    struct Rec {
        int n, d;
        const PermGroup& group;
        std::vector<int>& tuple;
        std::vector<bool>& used;
        std::set<std::vector<int>>& seen;
        std::vector<std::vector<std::vector<int>>>& orbits;

        void go(int pos) {
            if (pos == d) {
                if (seen.count(tuple)) return;
                std::set<std::vector<int>> orbit;
                for (const auto& g : group.elements()) orbit.insert(act_on_tuple(g, tuple));
                for (const auto& t : orbit) seen.insert(t);
                orbits.emplace_back(orbit.begin(), orbit.end());
                return;
            }
            for (int v = 0; v < n; ++v) {
                if (used[v]) continue;
                used[v] = true;
                tuple[pos] = v;
                go(pos + 1);
                used[v] = false;
            }
        }
    };
    Rec rec{n, d, group, tuple, used, seen, orbits};
    rec.go(0);
    return orbits;
}

} // namespace relic
