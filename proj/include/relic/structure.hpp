#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace relic {

// Relation symbol. Graph-style axioms (symmetric / irreflexive) are tags
// checked when a structure is built, not separate types.
struct RelSymbol {
    std::string name;
    int arity = 0;
    bool symmetric = false;
    bool irreflexive = false;

    bool operator==(const RelSymbol& o) const {
        return name == o.name && arity == o.arity && symmetric == o.symmetric &&
               irreflexive == o.irreflexive;
    }
};

class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<RelSymbol> symbols) : symbols_(std::move(symbols)) {
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            if (symbols_[i].arity < 1)
                throw std::invalid_argument("symbol arity must be >= 1: " + symbols_[i].name);
            for (std::size_t j = 0; j < i; ++j)
                if (symbols_[j].name == symbols_[i].name)
                    throw std::invalid_argument("duplicate symbol name: " + symbols_[i].name);
        }
    }

    const std::vector<RelSymbol>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }
    const RelSymbol& at(std::size_t i) const { return symbols_[i]; }

    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < symbols_.size(); ++i)
            if (symbols_[i].name == name) return static_cast<int>(i);
        return -1;
    }

    int require(const std::string& name) const {
        int i = index_of(name);
        if (i < 0) throw std::invalid_argument("unknown relation symbol: " + name);
        return i;
    }

    bool operator==(const Signature& o) const { return symbols_ == o.symbols_; }

    // undirected simple graph: one binary symbol E, symmetric + irreflexive
    static std::shared_ptr<const Signature> graph() {
        static auto sig = std::make_shared<const Signature>(
            std::vector<RelSymbol>{{"E", 2, true, true}});
        return sig;
    }

    // directed graph without loops: one binary symbol A, irreflexive
    static std::shared_ptr<const Signature> digraph() {
        static auto sig = std::make_shared<const Signature>(
            std::vector<RelSymbol>{{"A", 2, false, true}});
        return sig;
    }

    // binomial relational structure with a single predicate P of given arity
    static std::shared_ptr<const Signature> binomial(int arity) {
        return std::make_shared<const Signature>(std::vector<RelSymbol>{{"P", arity}});
    }

private:
    std::vector<RelSymbol> symbols_;
};

using SignaturePtr = std::shared_ptr<const Signature>;

inline std::uint64_t ipow(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Positional big-endian tuple codec over [1..n]; component t_1 is most
// significant. decode is the exact inverse.
inline std::uint64_t encode_tuple(const std::vector<int>& t, int n) {
    if (t.empty()) throw std::invalid_argument("encode_tuple: arity must be >= 1");
    std::uint64_t idx = 0;
    for (int v : t) {
        if (v < 1 || v > n) throw std::out_of_range("encode_tuple: component out of [1..n]");
        idx = idx * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(v - 1);
    }
    return idx;
}

inline std::vector<int> decode_tuple(std::uint64_t idx, int n, int arity) {
    std::vector<int> t(arity);
    for (int i = arity - 1; i >= 0; --i) {
        t[i] = static_cast<int>(idx % static_cast<std::uint64_t>(n)) + 1;
        idx /= static_cast<std::uint64_t>(n);
    }
    return t;
}

// Finite relational structure on domain [n], one bit table per symbol.
// Immutable by convention once built (mutators exist for construction and
// the enumeration loop, which reuses one buffer).
class Structure {
public:
    Structure() = default;
    Structure(SignaturePtr sig, int n) : sig_(std::move(sig)), n_(n) {
        if (n < 1) throw std::invalid_argument("structure domain size must be >= 1");
        tables_.resize(sig_->size());
        for (std::size_t s = 0; s < sig_->size(); ++s) {
            std::uint64_t bits = ipow(static_cast<std::uint64_t>(n), sig_->at(s).arity);
            tables_[s].assign((bits + 63) / 64, 0);
        }
    }

    const SignaturePtr& signature() const { return sig_; }
    int n() const { return n_; }

    std::uint64_t table_bits(std::size_t s) const {
        return ipow(static_cast<std::uint64_t>(n_), sig_->at(s).arity);
    }
    const std::vector<std::uint64_t>& table(std::size_t s) const { return tables_[s]; }

    bool get_index(std::size_t s, std::uint64_t idx) const {
        return (tables_[s][idx >> 6] >> (idx & 63)) & 1u;
    }
    void set_index(std::size_t s, std::uint64_t idx, bool v) {
        if (v)
            tables_[s][idx >> 6] |= (1ULL << (idx & 63));
        else
            tables_[s][idx >> 6] &= ~(1ULL << (idx & 63));
    }

    // 0-based tuple access used by the evaluator
    bool get0(std::size_t s, const std::vector<int>& t0) const {
        std::uint64_t idx = 0;
        for (int v : t0) idx = idx * static_cast<std::uint64_t>(n_) + static_cast<std::uint64_t>(v);
        return get_index(s, idx);
    }
    void set0(std::size_t s, const std::vector<int>& t0, bool v = true) {
        std::uint64_t idx = 0;
        for (int c : t0) idx = idx * static_cast<std::uint64_t>(n_) + static_cast<std::uint64_t>(c);
        set_index(s, idx, v);
    }
    // first symbol convenience for single-relation structures
    void set0_tuple(const std::vector<int>& t0) { set0(0, t0, true); }

    bool get(std::size_t s, const std::vector<int>& tuple1) const {
        return get_index(s, encode_tuple(tuple1, n_));
    }
    void set(std::size_t s, const std::vector<int>& tuple1, bool v = true) {
        set_index(s, encode_tuple(tuple1, n_), v);
        const RelSymbol& sym = sig_->at(s);
        if (sym.symmetric && sym.arity == 2 && tuple1[0] != tuple1[1])
            set_index(s, encode_tuple({tuple1[1], tuple1[0]}, n_), v);
    }

    // checks the declared symmetric/irreflexive tags on every table
    void validate_axioms() const {
        for (std::size_t s = 0; s < sig_->size(); ++s) {
            const RelSymbol& sym = sig_->at(s);
            if (!sym.symmetric && !sym.irreflexive) continue;
            if (sym.arity != 2)
                throw std::invalid_argument("graph tags only apply to binary symbols: " + sym.name);
            for (int u = 0; u < n_; ++u) {
                if (sym.irreflexive && get0(s, {u, u}))
                    throw std::invalid_argument("irreflexive violation in " + sym.name);
                if (sym.symmetric)
                    for (int v = 0; v < n_; ++v)
                        if (get0(s, {u, v}) != get0(s, {v, u}))
                            throw std::invalid_argument("symmetry violation in " + sym.name);
            }
        }
    }

    bool operator==(const Structure& o) const {
        return n_ == o.n_ && *sig_ == *o.sig_ && tables_ == o.tables_;
    }
    bool operator<(const Structure& o) const {
        if (n_ != o.n_) return n_ < o.n_;
        return tables_ < o.tables_;
    }

private:
    SignaturePtr sig_;
    int n_ = 0;
    std::vector<std::vector<std::uint64_t>> tables_;
};

// --- graph helpers (symbol E, vertices 0-based in code, 1-based in files) ---

inline Structure make_graph(int n, const std::vector<std::pair<int, int>>& edges0 = {}) {
    Structure g(Signature::graph(), n);
    for (auto [u, v] : edges0) {
        if (u == v) throw std::invalid_argument("loop edge in simple graph");
        g.set(0, {u + 1, v + 1});
    }
    return g;
}

inline void add_edge(Structure& g, int u0, int v0) { g.set(0, {u0 + 1, v0 + 1}); }
inline bool has_edge(const Structure& g, int u0, int v0) { return g.get0(0, {u0, v0}); }

inline int degree(const Structure& g, int u0) {
    int d = 0;
    for (int v = 0; v < g.n(); ++v)
        if (v != u0 && has_edge(g, u0, v)) ++d;
    return d;
}

inline int edge_count(const Structure& g) {
    int m = 0;
    for (int u = 0; u < g.n(); ++u)
        for (int v = u + 1; v < g.n(); ++v)
            if (has_edge(g, u, v)) ++m;
    return m;
}

inline Structure clique_graph(int d) {
    Structure g = make_graph(d);
    for (int u = 0; u < d; ++u)
        for (int v = u + 1; v < d; ++v) add_edge(g, u, v);
    return g;
}

// path with m edges on m+1 vertices
inline Structure path_graph(int m) {
    Structure g = make_graph(m + 1);
    for (int i = 0; i < m; ++i) add_edge(g, i, i + 1);
    return g;
}

inline Structure cycle_graph(int m) {
    if (m < 3) throw std::invalid_argument("cycle needs >= 3 vertices");
    Structure g = make_graph(m);
    for (int i = 0; i < m; ++i) add_edge(g, i, (i + 1) % m);
    return g;
}

inline Structure star_graph(int r) {
    Structure g = make_graph(r + 1);
    for (int i = 1; i <= r; ++i) add_edge(g, 0, i);
    return g;
}

// Cartesian product of two graphs; vertex (u,v) -> u*|H|+v.
inline Structure cartesian_product(const Structure& g, const Structure& h) {
    if (g.signature()->index_of("E") != 0 || h.signature()->index_of("E") != 0)
        throw std::invalid_argument("cartesian_product expects graph structures");
    int ng = g.n(), nh = h.n();
    Structure p = make_graph(ng * nh);
    auto id = [nh](int u, int v) { return u * nh + v; };
    for (int u = 0; u < ng; ++u)
        for (int v = 0; v < nh; ++v) {
            for (int u2 = u + 1; u2 < ng; ++u2)
                if (has_edge(g, u, u2)) add_edge(p, id(u, v), id(u2, v));
            for (int v2 = v + 1; v2 < nh; ++v2)
                if (has_edge(h, v, v2)) add_edge(p, id(u, v), id(u, v2));
        }
    return p;
}

} // namespace relic
