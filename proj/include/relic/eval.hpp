#pragma once

#include "relic/formula.hpp"
#include "relic/structure.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace relic {

// ---------------------------------------------------------------------------
// Compiled sentences.
//
// Subformulas are canonicalized (free variables renamed by first occurrence)
// and hash-consed, so a syntactically repeated piece such as a matching
// predicate applied to many argument pairs is evaluated once per structure.
// Three rewrites keep evaluation tractable on the larger gadget graphs:
//   * implies/iff are normalized to and/or/not,
//   * exists-chains of interchangeable variables with identical constraints
//     become counting nodes ("at least k witnesses"),
//   * conjuncts are hoisted to the outermost quantifier that binds them.
// Nodes of width <= 4 get bit-packed assignment tables, built lazily once a
// node is hit often enough; wider quantifier bodies are folded pointwise.
// ---------------------------------------------------------------------------

enum class CKind : std::uint8_t { Atom, Eq, Not, And, Or, Exists, Forall, AtLeast };

constexpr int kMatWidth = 4;      // max node width with a materialized table
constexpr int kMaxWidth = 16;     // hard cap on free variables of a subformula
constexpr int kMatThreshold = 48; // pointwise hits before a table is built

struct CompiledSet {
    struct Inst {
        int node = -1;
        // child position -> parent position, or -1 for the quantified slot
        std::array<std::int8_t, kMaxWidth> map{};
        std::int8_t nmap = 0;
    };
    struct Node {
        CKind kind;
        std::int8_t width = 0;
        // quantifier/counting node whose body is wider than the table cap;
        // always evaluated pointwise so sibling conjuncts can prune first
        bool fused = false;
        std::string sym;                  // Atom only
        std::vector<std::int8_t> pattern; // Atom/Eq: argument slot -> position
        int at_least = 0;                 // AtLeast only
        std::vector<Inst> children;
        int refs = 0; // parent instance count (roots add one)
    };
    std::vector<Node> nodes;
    std::vector<int> roots;

    std::uint64_t table_size(int node, int n) const {
        return ipow(static_cast<std::uint64_t>(n), nodes[node].width);
    }
};

namespace detail_eval {

// flatten and/or trees, drop double negation, lower implies/iff
inline FormulaPtr normalize(const FormulaPtr& f) {
    switch (f->kind) {
    case FKind::Atom:
    case FKind::Eq:
        return f;
    case FKind::Not: {
        FormulaPtr c = normalize(f->children[0]);
        if (c->kind == FKind::Not) return c->children[0];
        return mk(FKind::Not, "", {}, {c});
    }
    case FKind::Implies:
        return normalize(lor({lnot(f->children[0]), f->children[1]}));
    case FKind::Iff: {
        FormulaPtr a = f->children[0], b = f->children[1];
        return normalize(lor({land({a, b}), land({lnot(a), lnot(b)})}));
    }
    case FKind::And:
    case FKind::Or: {
        std::vector<FormulaPtr> out;
        for (const auto& c : f->children) {
            FormulaPtr fc = normalize(c);
            if (fc->kind == f->kind)
                for (const auto& g : fc->children) out.push_back(g);
            else
                out.push_back(fc);
        }
        return mk(f->kind, "", {}, std::move(out));
    }
    default: {
        std::vector<FormulaPtr> ch;
        for (const auto& c : f->children) ch.push_back(normalize(c));
        return mk(f->kind, f->sym, f->vars, std::move(ch));
    }
    }
}

// exists v1..vk (pairwise-distinct ^ same constraint on each v) -> AtLeast k
struct PigeonMatch {
    FormulaPtr gamma;
    std::string var;
    int k = 0;
};

inline std::optional<PigeonMatch> match_at_least(const FormulaPtr& f) {
    std::vector<std::string> vars;
    FormulaPtr cur = f;
    while (cur->kind == FKind::Exists) {
        vars.push_back(cur->sym);
        cur = cur->children[0];
    }
    int k = static_cast<int>(vars.size());
    if (k < 2 || cur->kind != FKind::And) return std::nullopt;
    std::set<std::string> vset(vars.begin(), vars.end());
    if (static_cast<int>(vset.size()) != k) return std::nullopt;

    std::set<std::pair<std::string, std::string>> pairs;
    std::map<std::string, std::vector<FormulaPtr>> bucket;
    for (const auto& c : cur->children) {
        if (c->kind == FKind::Not && c->children[0]->kind == FKind::Eq) {
            const auto& vs = c->children[0]->vars;
            if (vset.count(vs[0]) && vset.count(vs[1]) && vs[0] != vs[1]) {
                pairs.insert({std::min(vs[0], vs[1]), std::max(vs[0], vs[1])});
                continue;
            }
        }
        auto fv = free_vars(c);
        std::vector<std::string> mine;
        for (const auto& v : vars)
            if (fv.count(v)) mine.push_back(v);
        if (mine.size() != 1) return std::nullopt;
        bucket[mine[0]].push_back(c);
    }
    if (pairs.size() != static_cast<std::size_t>(k) * (k - 1) / 2) return std::nullopt;
    std::string probe;
    for (const auto& v : vars) {
        if (bucket[v].empty()) return std::nullopt;
        FormulaPtr g = bucket[v].size() == 1 ? bucket[v][0] : land(bucket[v]);
        std::set<std::string> taken;
        collect_all_names(g, taken);
        taken.insert("$c");
        FreshNames names(taken);
        std::string r = render(subst_vars(g, {{v, "$c"}}, names));
        if (probe.empty())
            probe = r;
        else if (probe != r)
            return std::nullopt;
    }
    FormulaPtr g0 = bucket[vars[0]].size() == 1 ? bucket[vars[0]][0] : land(bucket[vars[0]]);
    return PigeonMatch{g0, vars[0], k};
}

struct Compiler {
    CompiledSet out;
    std::unordered_map<std::string, int> interned;

    int intern(const std::string& key, CompiledSet::Node&& node) {
        auto it = interned.find(key);
        if (it != interned.end()) return it->second;
        int id = static_cast<int>(out.nodes.size());
        out.nodes.push_back(std::move(node));
        interned.emplace(key, id);
        return id;
    }

    // map child canonical args into the parent's first-occurrence order
    static std::int8_t place(std::vector<std::string>& order, const std::string& name) {
        auto it = std::find(order.begin(), order.end(), name);
        if (it != order.end()) return static_cast<std::int8_t>(it - order.begin());
        order.push_back(name);
        if (static_cast<int>(order.size()) > kMaxWidth)
            throw std::invalid_argument("subformula exceeds the free-variable width cap");
        return static_cast<std::int8_t>(order.size() - 1);
    }

    // returns (node id, free vars in canonical first-occurrence order)
    std::pair<int, std::vector<std::string>> build(const FormulaPtr& f) {
        switch (f->kind) {
        case FKind::Atom:
        case FKind::Eq: {
            std::vector<std::string> order;
            std::vector<std::int8_t> pattern;
            for (const auto& v : f->vars) pattern.push_back(place(order, v));
            CompiledSet::Node node;
            node.kind = f->kind == FKind::Atom ? CKind::Atom : CKind::Eq;
            node.width = static_cast<std::int8_t>(order.size());
            node.sym = f->sym;
            node.pattern = pattern;
            std::string key = (f->kind == FKind::Atom ? "A:" + f->sym : "=") + ":";
            for (auto p : pattern) key += std::to_string(int(p)) + ",";
            return {intern(key, std::move(node)), order};
        }
        case FKind::Not: {
            auto [cid, cargs] = build(f->children[0]);
            CompiledSet::Node node;
            node.kind = CKind::Not;
            node.width = static_cast<std::int8_t>(cargs.size());
            CompiledSet::Inst inst;
            inst.node = cid;
            inst.nmap = static_cast<std::int8_t>(cargs.size());
            for (std::size_t j = 0; j < cargs.size(); ++j)
                inst.map[j] = static_cast<std::int8_t>(j);
            node.children.push_back(inst);
            return {intern("N:" + std::to_string(cid), std::move(node)), cargs};
        }
        case FKind::And:
        case FKind::Or: {
            // build children first, then move lazily-evaluated (fused) ones
            // behind their cheap siblings so block fills can prune
            std::vector<std::pair<int, std::vector<std::string>>> built;
            for (const auto& c : f->children) built.push_back(build(c));
            std::stable_partition(built.begin(), built.end(),
                                  [&](const auto& b) { return !out.nodes[b.first].fused; });
            std::vector<std::string> order;
            CompiledSet::Node node;
            node.kind = f->kind == FKind::And ? CKind::And : CKind::Or;
            std::string key = f->kind == FKind::And ? "&:" : "|:";
            for (const auto& [cid, cargs] : built) {
                CompiledSet::Inst inst;
                inst.node = cid;
                inst.nmap = static_cast<std::int8_t>(cargs.size());
                key += "(" + std::to_string(cid) + "|";
                for (std::size_t j = 0; j < cargs.size(); ++j) {
                    inst.map[j] = place(order, cargs[j]);
                    key += std::to_string(int(inst.map[j])) + ",";
                }
                key += ")";
                node.children.push_back(inst);
            }
            node.width = static_cast<std::int8_t>(order.size());
            return {intern(key, std::move(node)), order};
        }
        case FKind::Exists:
        case FKind::Forall: {
            if (f->kind == FKind::Exists) {
                if (auto pm = match_at_least(f)) {
                    auto [gid, gargs] = build(pm->gamma);
                    int qpos = static_cast<int>(
                        std::find(gargs.begin(), gargs.end(), pm->var) - gargs.begin());
                    std::vector<std::string> order;
                    CompiledSet::Inst inst;
                    inst.node = gid;
                    inst.nmap = static_cast<std::int8_t>(gargs.size());
                    for (std::size_t j = 0; j < gargs.size(); ++j)
                        inst.map[j] = static_cast<int>(j) == qpos ? -1 : place(order, gargs[j]);
                    CompiledSet::Node node;
                    node.kind = CKind::AtLeast;
                    node.at_least = pm->k;
                    node.width = static_cast<std::int8_t>(order.size());
                    node.fused = out.nodes[gid].width > kMatWidth || out.nodes[gid].fused;
                    node.children.push_back(inst);
                    std::string key = "P:" + std::to_string(gid) + ":" + std::to_string(qpos) +
                                      ":" + std::to_string(pm->k);
                    return {intern(key, std::move(node)), order};
                }
            }
            // hoist parts that do not mention the bound variable
            FormulaPtr body = f->children[0];
            const std::string& v = f->sym;
            FKind carrier = f->kind == FKind::Exists ? FKind::And : FKind::Or;
            if (body->kind == carrier) {
                std::vector<FormulaPtr> in, outp;
                for (const auto& c : body->children)
                    (free_vars(c).count(v) ? in : outp).push_back(c);
                if (!outp.empty()) {
                    if (in.empty()) return build(mk(carrier, "", {}, outp));
                    FormulaPtr inner =
                        mk(f->kind, v, {}, {in.size() == 1 ? in[0] : mk(carrier, "", {}, in)});
                    outp.push_back(inner);
                    return build(mk(carrier, "", {}, outp));
                }
            }
            auto [cid, cargs] = build(body);
            auto it = std::find(cargs.begin(), cargs.end(), v);
            if (it == cargs.end()) return {cid, cargs}; // vacuous (domain is nonempty)
            int qpos = static_cast<int>(it - cargs.begin());
            std::vector<std::string> order;
            CompiledSet::Inst inst;
            inst.node = cid;
            inst.nmap = static_cast<std::int8_t>(cargs.size());
            for (std::size_t j = 0; j < cargs.size(); ++j)
                inst.map[j] = static_cast<int>(j) == qpos ? -1 : place(order, cargs[j]);
            CompiledSet::Node node;
            node.kind = f->kind == FKind::Exists ? CKind::Exists : CKind::Forall;
            node.width = static_cast<std::int8_t>(order.size());
            node.fused = out.nodes[cid].width > kMatWidth || out.nodes[cid].fused;
            node.children.push_back(inst);
            std::string key = (f->kind == FKind::Exists ? "E:" : "F:") + std::to_string(cid) +
                              ":" + std::to_string(qpos);
            return {intern(key, std::move(node)), order};
        }
        case FKind::ExistsUnique:
            throw std::logic_error("compile: sugar must be removed before compilation");
        default:
            throw std::logic_error("compile: unreachable");
        }
    }
};

} // namespace detail_eval

struct CompileResult {
    CompiledSet set;
    // canonical first-occurrence order of the free variables of each root
    std::vector<std::vector<std::string>> root_args;
};

inline CompileResult compile_full(const std::vector<FormulaPtr>& sentences,
                                  bool allow_free = false) {
    detail_eval::Compiler c;
    CompileResult res;
    for (const auto& f : sentences) {
        if (!allow_free && !free_vars(f).empty())
            throw std::invalid_argument("free variables present in sentence: " + render(f));
        FormulaPtr d = detail_eval::normalize(desugar(f));
        auto [id, args] = c.build(d);
        c.out.roots.push_back(id);
        res.root_args.push_back(args);
    }
    for (const auto& node : c.out.nodes)
        for (const auto& inst : node.children) c.out.nodes[inst.node].refs++;
    for (int r : c.out.roots) c.out.nodes[r].refs++;
    res.set = std::move(c.out);
    return res;
}

inline CompiledSet compile(const std::vector<FormulaPtr>& sentences) {
    return compile_full(sentences).set;
}

// ---------------------------------------------------------------------------
// Per-structure evaluation session. Tables are shared between the roots of
// one compiled set, so related sentences reuse each other's work; tables are
// freed once every referencing parent has consumed them.
// ---------------------------------------------------------------------------

class EvalSession {
public:
    EvalSession(const Structure& st, const CompiledSet& cs) : cs_(&cs) { reset(st); }

    void reset(const Structure& st) {
        st_ = &st;
        n_ = st.n();
        if (n_ > 256) throw std::invalid_argument("eval: domain size cap is 256");
        states_.assign(cs_->nodes.size(), {});
        uses_left_.resize(cs_->nodes.size());
        sym_.assign(cs_->nodes.size(), -1);
        for (std::size_t i = 0; i < cs_->nodes.size(); ++i) {
            uses_left_[i] = cs_->nodes[i].refs;
            if (cs_->nodes[i].kind == CKind::Atom) {
                int s = st.signature()->index_of(cs_->nodes[i].sym);
                if (s < 0)
                    throw std::invalid_argument("eval: structure lacks symbol " +
                                                cs_->nodes[i].sym);
                sym_[i] = s;
            }
        }
    }

    bool eval_root(int root_index) {
        int id = cs_->roots[root_index];
        if (cs_->nodes[id].width != 0)
            throw std::invalid_argument("eval_root: root has free variables");
        static const int env[1] = {0};
        bool r = point(id, env);
        release(id);
        return r;
    }

    // full table of a root compiled with free variables (canonical arg order)
    std::vector<std::uint64_t> relation_bits(int root_index) {
        int id = cs_->roots[root_index];
        materialize(id);
        auto bits = states_[id].bits;
        release(id);
        return bits;
    }

private:
    struct NodeState {
        std::vector<std::uint64_t> bits;
        bool ready = false;
        std::uint32_t hits = 0;
    };

    const Structure* st_ = nullptr;
    const CompiledSet* cs_;
    int n_ = 0;
    std::vector<NodeState> states_;
    std::vector<int> uses_left_;
    std::vector<int> sym_;

    std::uint64_t env_index(const CompiledSet::Node& node, const int* env) const {
        std::uint64_t idx = 0;
        for (int p = 0; p < node.width; ++p)
            idx = idx * static_cast<std::uint64_t>(n_) + static_cast<std::uint64_t>(env[p]);
        return idx;
    }

    static bool bit(const std::vector<std::uint64_t>& bits, std::uint64_t idx) {
        return (bits[idx >> 6] >> (idx & 63)) & 1u;
    }
    static void set_bit(std::vector<std::uint64_t>& bits, std::uint64_t idx) {
        bits[idx >> 6] |= 1ULL << (idx & 63);
    }

    void release(int id) {
        if (--uses_left_[id] > 0) return;
        NodeState& ns = states_[id];
        if (cs_->nodes[id].width >= 3 && ns.ready) {
            ns.bits.clear();
            ns.bits.shrink_to_fit();
            ns.ready = false;
            ns.hits = 0;
        }
    }

    bool point_inst(const CompiledSet::Inst& inst, const int* env, int qval) {
        int cenv[kMaxWidth];
        for (int j = 0; j < inst.nmap; ++j)
            cenv[j] = inst.map[j] < 0 ? qval : env[inst.map[j]];
        return point(inst.node, cenv);
    }

    bool point(int id, const int* env) {
        const CompiledSet::Node& node = cs_->nodes[id];
        NodeState& ns = states_[id];
        if (ns.ready) return bit(ns.bits, env_index(node, env));
        if (node.width <= kMatWidth && !node.fused &&
            (node.width == 0 || ++ns.hits >= kMatThreshold)) {
            materialize(id);
            return bit(ns.bits, env_index(node, env));
        }
        if (node.width == 0 && node.fused) { // cache sentence-level results
            bool r = point_raw(id, env);
            ns.bits.assign(1, r ? 1 : 0);
            ns.ready = true;
            return r;
        }
        return point_raw(id, env);
    }

    bool point_raw(int id, const int* env) {
        const CompiledSet::Node& node = cs_->nodes[id];
        switch (node.kind) {
        case CKind::Atom: {
            std::uint64_t idx = 0;
            for (auto p : node.pattern)
                idx = idx * static_cast<std::uint64_t>(n_) + static_cast<std::uint64_t>(env[p]);
            return st_->get_index(sym_[id], idx);
        }
        case CKind::Eq:
            return node.pattern.size() < 2 || env[node.pattern[0]] == env[node.pattern[1]];
        case CKind::Not:
            return !point_inst(node.children[0], env, -1);
        case CKind::And:
            for (const auto& c : node.children)
                if (!point_inst(c, env, -1)) return false;
            return true;
        case CKind::Or:
            for (const auto& c : node.children)
                if (point_inst(c, env, -1)) return true;
            return false;
        case CKind::Exists:
            for (int v = 0; v < n_; ++v)
                if (point_inst(node.children[0], env, v)) return true;
            return false;
        case CKind::Forall:
            for (int v = 0; v < n_; ++v)
                if (!point_inst(node.children[0], env, v)) return false;
            return true;
        case CKind::AtLeast: {
            int count = 0;
            for (int v = 0; v < n_; ++v)
                if (point_inst(node.children[0], env, v) && ++count >= node.at_least)
                    return true;
            return false;
        }
        }
        return false;
    }

    void materialize(int id) {
        NodeState& ns = states_[id];
        if (ns.ready) return;
        const CompiledSet::Node& node = cs_->nodes[id];
        std::uint64_t size = cs_->table_size(id, n_);
        ns.bits.assign((size + 63) / 64, 0);

        switch (node.kind) {
        case CKind::Atom: {
            // aligned fast path: slots in canonical order covering all args
            bool identity = node.pattern.size() == static_cast<std::size_t>(node.width);
            for (std::size_t i = 0; identity && i < node.pattern.size(); ++i)
                if (node.pattern[i] != static_cast<std::int8_t>(i)) identity = false;
            if (identity) {
                ns.bits = st_->table(sym_[id]);
            } else {
                int env[kMaxWidth] = {0};
                for (std::uint64_t idx = 0; idx < size; ++idx) {
                    std::uint64_t t = 0;
                    for (auto p : node.pattern)
                        t = t * static_cast<std::uint64_t>(n_) +
                            static_cast<std::uint64_t>(env[p]);
                    if (st_->get_index(sym_[id], t)) set_bit(ns.bits, idx);
                    bump(env, node.width);
                }
            }
            break;
        }
        case CKind::Eq: {
            if (node.pattern.size() < 2 || node.pattern[0] == node.pattern[1]) {
                fill_all(ns.bits, size);
            } else {
                for (int v = 0; v < n_; ++v)
                    set_bit(ns.bits, static_cast<std::uint64_t>(v) * n_ + v);
            }
            break;
        }
        case CKind::Not: {
            const auto& inst = node.children[0];
            if (!cs_->nodes[inst.node].fused) materialize(inst.node);
            bool identity = states_[inst.node].ready;
            for (int j = 0; j < inst.nmap; ++j)
                if (inst.map[j] != j) identity = false;
            if (identity) {
                const auto& src = states_[inst.node].bits;
                for (std::size_t k = 0; k < ns.bits.size(); ++k) ns.bits[k] = ~src[k];
                trim(ns.bits, size);
            } else {
                int env[kMaxWidth] = {0};
                for (std::uint64_t idx = 0; idx < size; ++idx) {
                    if (!point_inst(inst, env, -1)) set_bit(ns.bits, idx);
                    bump(env, node.width);
                }
            }
            break;
        }
        case CKind::And:
        case CKind::Or:
            for (const auto& c : node.children) {
                const auto& cn = cs_->nodes[c.node];
                if (cn.width <= kMatWidth && !cn.fused) materialize(c.node);
            }
            fill_connective(node, ns, size);
            break;
        case CKind::Exists:
        case CKind::Forall: {
            const auto& inst = node.children[0];
            const auto& body = cs_->nodes[inst.node];
            bool is_all = node.kind == CKind::Forall;
            if (body.width <= kMatWidth && !body.fused) {
                materialize(inst.node);
                fold_from_table(id, node, ns, inst, is_all);
            } else {
                int env[kMaxWidth] = {0};
                for (std::uint64_t idx = 0; idx < size; ++idx) {
                    bool acc = is_all;
                    for (int v = 0; v < n_; ++v) {
                        bool b = point_inst(inst, env, v);
                        if (is_all ? !b : b) {
                            acc = !is_all;
                            break;
                        }
                    }
                    if (acc) set_bit(ns.bits, idx);
                    bump(env, node.width);
                }
            }
            break;
        }
        case CKind::AtLeast: {
            const auto& inst = node.children[0];
            const auto& gammaNode = cs_->nodes[inst.node];
            if (gammaNode.width <= kMatWidth && !gammaNode.fused) materialize(inst.node);
            int env[kMaxWidth] = {0};
            for (std::uint64_t idx = 0; idx < size; ++idx) {
                int count = 0;
                for (int v = 0; v < n_ && count < node.at_least; ++v)
                    if (point_inst(inst, env, v)) ++count;
                if (count >= node.at_least) set_bit(ns.bits, idx);
                bump(env, node.width);
            }
            break;
        }
        }
        ns.ready = true;
        for (const auto& c : node.children) release(c.node);
    }

    void bump(int* env, int width) const {
        for (int p = width - 1; p >= 0; --p) {
            if (++env[p] < n_) return;
            env[p] = 0;
        }
    }

    void fill_all(std::vector<std::uint64_t>& bits, std::uint64_t size) {
        std::fill(bits.begin(), bits.end(), ~0ULL);
        trim(bits, size);
    }
    static void trim(std::vector<std::uint64_t>& bits, std::uint64_t size) {
        int tail = static_cast<int>(size & 63);
        if (tail && !bits.empty()) bits.back() &= (1ULL << tail) - 1;
    }

    // and/or fill over blocks of n bits along the node's last position
    void fill_connective(const CompiledSet::Node& node, NodeState& ns, std::uint64_t size) {
        bool is_and = node.kind == CKind::And;
        int w = node.width;
        if (w == 0) {
            if (point_raw_id(node)) set_bit(ns.bits, 0);
            return;
        }
        std::uint64_t outer = size / static_cast<std::uint64_t>(n_);
        int env[kMaxWidth] = {0};
        std::size_t bwords = (n_ + 63) / 64;
        std::vector<std::uint64_t> block(bwords), cblock(bwords);
        std::vector<std::uint64_t> full(bwords);
        fill_block(full, true);
        auto is_zero = [&](const std::vector<std::uint64_t>& b) {
            for (auto wd : b)
                if (wd) return false;
            return true;
        };
        for (std::uint64_t o = 0; o < outer; ++o) {
            bool decided = false, decided_value = false;
            fill_block(block, is_and);
            for (const auto& inst : node.children) {
                bool uses_last = false;
                for (int j = 0; j < inst.nmap; ++j)
                    if (inst.map[j] == w - 1) uses_last = true;
                if (!uses_last) {
                    bool b = point_inst(inst, env, -1);
                    if (b != is_and) { // absorbing element
                        decided = true;
                        decided_value = !is_and;
                        break;
                    }
                } else {
                    load_child_block(inst, env, w, cblock);
                    if (is_and)
                        for (std::size_t k = 0; k < bwords; ++k) block[k] &= cblock[k];
                    else
                        for (std::size_t k = 0; k < bwords; ++k) block[k] |= cblock[k];
                    // dead block: later (often pricier) siblings cannot revive it
                    if (is_and ? is_zero(block) : block == full) {
                        decided = true;
                        decided_value = !is_and;
                        break;
                    }
                }
            }
            std::uint64_t base = o * static_cast<std::uint64_t>(n_);
            if (decided) {
                if (decided_value)
                    for (int v = 0; v < n_; ++v) set_bit(ns.bits, base + v);
            } else {
                for (std::size_t k = 0; k < bwords; ++k) {
                    std::uint64_t wbits = block[k];
                    while (wbits) {
                        int b = __builtin_ctzll(wbits);
                        wbits &= wbits - 1;
                        set_bit(ns.bits, base + (k << 6) + b);
                    }
                }
            }
            bump(env, w - 1);
        }
    }

    bool point_raw_id(const CompiledSet::Node& node) {
        static const int env[1] = {0};
        if (node.kind == CKind::And) {
            for (const auto& c : node.children)
                if (!point_inst(c, env, -1)) return false;
            return true;
        }
        for (const auto& c : node.children)
            if (point_inst(c, env, -1)) return true;
        return false;
    }

    // child's truth values along the parent's last position
    void load_child_block(const CompiledSet::Inst& inst, const int* env, int w,
                          std::vector<std::uint64_t>& dst) {
        const NodeState& cstate = states_[inst.node];
        if (cstate.ready && inst.nmap > 0 && inst.map[inst.nmap - 1] == w - 1) {
            bool unique = true;
            for (int j = 0; j + 1 < inst.nmap; ++j)
                if (inst.map[j] == w - 1) unique = false;
            if (unique) {
                std::uint64_t base = 0;
                for (int j = 0; j + 1 < inst.nmap; ++j)
                    base = base * static_cast<std::uint64_t>(n_) +
                           static_cast<std::uint64_t>(env[inst.map[j]]);
                base *= static_cast<std::uint64_t>(n_);
                copy_bits(cstate.bits, base, dst, n_);
                return;
            }
        }
        std::fill(dst.begin(), dst.end(), 0);
        int cenv[kMaxWidth];
        for (int j = 0; j < inst.nmap; ++j)
            cenv[j] = inst.map[j] == w - 1 ? 0 : (inst.map[j] < 0 ? 0 : env[inst.map[j]]);
        for (int v = 0; v < n_; ++v) {
            for (int j = 0; j < inst.nmap; ++j)
                if (inst.map[j] == w - 1) cenv[j] = v;
            if (point(inst.node, cenv)) dst[v >> 6] |= 1ULL << (v & 63);
        }
    }

    static void copy_bits(const std::vector<std::uint64_t>& src, std::uint64_t offset,
                          std::vector<std::uint64_t>& dst, int count) {
        int words = (count + 63) / 64;
        std::uint64_t wi = offset >> 6;
        int shift = static_cast<int>(offset & 63);
        for (int k = 0; k < words; ++k) {
            std::uint64_t lo = src[wi + k] >> shift;
            std::uint64_t hi =
                (shift && wi + k + 1 < src.size()) ? src[wi + k + 1] << (64 - shift) : 0;
            dst[k] = lo | hi;
        }
        int tail = count & 63;
        if (tail) dst[words - 1] &= (1ULL << tail) - 1;
    }

    // quantifier fold over a materialized body table
    void fold_from_table(int id, const CompiledSet::Node& node, NodeState& ns,
                         const CompiledSet::Inst& inst, bool is_all) {
        const auto& body = cs_->nodes[inst.node];
        const NodeState& bs = states_[inst.node];
        std::uint64_t bsize = cs_->table_size(inst.node, n_);
        std::uint64_t size = cs_->table_size(id, n_);
        int bw = body.width;
        std::uint64_t pstride[kMaxWidth] = {0};
        std::uint64_t stride = 1;
        for (int p = node.width - 1; p >= 0; --p) {
            for (int j = 0; j < bw; ++j)
                if (inst.map[j] == p) pstride[j] = stride;
            stride *= static_cast<std::uint64_t>(n_);
        }
        if (is_all) fill_all(ns.bits, size);
        int benv[kMaxWidth] = {0};
        std::uint64_t pidx = 0;
        for (std::uint64_t bidx = 0; bidx < bsize; ++bidx) {
            bool b = bit(bs.bits, bidx);
            if (is_all ? !b : b) {
                if (is_all)
                    ns.bits[pidx >> 6] &= ~(1ULL << (pidx & 63));
                else
                    ns.bits[pidx >> 6] |= 1ULL << (pidx & 63);
            }
            for (int j = bw - 1; j >= 0; --j) {
                pidx += pstride[j];
                if (++benv[j] < n_) break;
                benv[j] = 0;
                pidx -= pstride[j] * static_cast<std::uint64_t>(n_);
            }
        }
    }

    void fill_block(std::vector<std::uint64_t>& block, bool v) {
        std::fill(block.begin(), block.end(), v ? ~0ULL : 0ULL);
        if (v) {
            int tail = n_ & 63;
            if (tail) block[(n_ - 1) >> 6] &= (1ULL << tail) - 1;
        }
    }
};

// --- convenience single-shot API ---

inline bool eval(const Structure& st, const FormulaPtr& sentence) {
    CompiledSet cs = compile({sentence});
    EvalSession s(st, cs);
    return s.eval_root(0);
}

// Reference evaluator: direct recursion over the raw syntax tree. Test oracle.
inline bool eval_naive(const Structure& st, const FormulaPtr& f,
                       std::map<std::string, int>& env) {
    switch (f->kind) {
    case FKind::Atom: {
        int s = st.signature()->require(f->sym);
        std::vector<int> t;
        for (const auto& v : f->vars) {
            auto it = env.find(v);
            if (it == env.end()) throw std::invalid_argument("unbound variable " + v);
            t.push_back(it->second);
        }
        return st.get0(s, t);
    }
    case FKind::Eq:
        return env.at(f->vars[0]) == env.at(f->vars[1]);
    case FKind::Not:
        return !eval_naive(st, f->children[0], env);
    case FKind::And:
        for (const auto& c : f->children)
            if (!eval_naive(st, c, env)) return false;
        return true;
    case FKind::Or:
        for (const auto& c : f->children)
            if (eval_naive(st, c, env)) return true;
        return false;
    case FKind::Implies:
        return !eval_naive(st, f->children[0], env) || eval_naive(st, f->children[1], env);
    case FKind::Iff:
        return eval_naive(st, f->children[0], env) == eval_naive(st, f->children[1], env);
    case FKind::Exists:
    case FKind::Forall: {
        bool is_all = f->kind == FKind::Forall;
        bool had = env.count(f->sym) > 0;
        int saved = had ? env[f->sym] : -1;
        bool result = is_all;
        for (int v = 0; v < st.n(); ++v) {
            env[f->sym] = v;
            bool b = eval_naive(st, f->children[0], env);
            if (is_all ? !b : b) {
                result = !is_all;
                break;
            }
        }
        if (had)
            env[f->sym] = saved;
        else
            env.erase(f->sym);
        return result;
    }
    case FKind::ExistsUnique: {
        FormulaPtr d = desugar(f);
        return eval_naive(st, d, env);
    }
    }
    return false;
}

inline bool eval_naive(const Structure& st, const FormulaPtr& sentence) {
    std::map<std::string, int> env;
    return eval_naive(st, sentence, env);
}

// Relation defined by a formula with designated parameters, as a bit table
// indexed by the big-endian tuple of parameter values.
inline std::vector<std::uint64_t> eval_relation(const Structure& st, const FormulaPtr& f,
                                                const std::vector<std::string>& params) {
    auto fv = free_vars(f);
    for (const auto& v : fv)
        if (std::find(params.begin(), params.end(), v) == params.end())
            throw std::invalid_argument("relation formula has stray free variable " + v);
    int w = static_cast<int>(params.size());
    int n = st.n();
    std::uint64_t size = ipow(static_cast<std::uint64_t>(n), w);
    std::vector<std::uint64_t> out((size + 63) / 64, 0);

    CompileResult cr = compile_full({f}, true);
    EvalSession session(st, cr.set);
    auto canonical = session.relation_bits(0);
    const auto& order = cr.root_args[0];
    int cw = static_cast<int>(order.size());
    std::vector<int> canon_param(cw, -1); // canonical position -> param index
    for (int c = 0; c < cw; ++c) {
        auto it = std::find(params.begin(), params.end(), order[c]);
        canon_param[c] = static_cast<int>(it - params.begin());
    }
    std::vector<int> env(w, 0);
    for (std::uint64_t idx = 0; idx < size; ++idx) {
        std::uint64_t t = idx;
        for (int i = w - 1; i >= 0; --i) {
            env[i] = static_cast<int>(t % n);
            t /= n;
        }
        std::uint64_t cidx = 0;
        for (int c = 0; c < cw; ++c)
            cidx = cidx * static_cast<std::uint64_t>(n) +
                   static_cast<std::uint64_t>(env[canon_param[c]]);
        if ((canonical[cidx >> 6] >> (cidx & 63)) & 1u) out[idx >> 6] |= 1ULL << (idx & 63);
    }
    return out;
}

} // namespace relic
