#pragma once

#include "relic/structure.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace relic {

enum class FKind {
    Atom,    // sym(vars...)
    Eq,      // vars[0] = vars[1]
    Not,     // children[0]
    And,     // children...
    Or,      // children...
    Implies, // children[0] -> children[1]
    Iff,     // children[0] <-> children[1]
    Exists,  // var, children[0]
    Forall,  // var, children[0]
    ExistsUnique,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    FKind kind;
    std::string sym;               // Atom: relation name; quantifiers: bound variable
    std::vector<std::string> vars; // Atom / Eq arguments
    std::vector<FormulaPtr> children;

    bool operator==(const Formula& o) const {
        if (kind != o.kind || sym != o.sym || vars != o.vars ||
            children.size() != o.children.size())
            return false;
        for (std::size_t i = 0; i < children.size(); ++i)
            if (!(*children[i] == *o.children[i])) return false;
        return true;
    }
};

inline FormulaPtr mk(FKind k, std::string sym, std::vector<std::string> vars,
                     std::vector<FormulaPtr> ch) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->sym = std::move(sym);
    f->vars = std::move(vars);
    f->children = std::move(ch);
    return f;
}

inline FormulaPtr atom(std::string sym, std::vector<std::string> vars) {
    return mk(FKind::Atom, std::move(sym), std::move(vars), {});
}
inline FormulaPtr eq(std::string a, std::string b) {
    return mk(FKind::Eq, "", {std::move(a), std::move(b)}, {});
}
inline FormulaPtr lnot(FormulaPtr f) { return mk(FKind::Not, "", {}, {std::move(f)}); }
inline FormulaPtr land(std::vector<FormulaPtr> ch) {
    if (ch.empty()) throw std::invalid_argument("and needs at least one operand");
    if (ch.size() == 1) return ch[0];
    return mk(FKind::And, "", {}, std::move(ch));
}
inline FormulaPtr lor(std::vector<FormulaPtr> ch) {
    if (ch.empty()) throw std::invalid_argument("or needs at least one operand");
    if (ch.size() == 1) return ch[0];
    return mk(FKind::Or, "", {}, std::move(ch));
}
inline FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
    return mk(FKind::Implies, "", {}, {std::move(a), std::move(b)});
}
inline FormulaPtr iff(FormulaPtr a, FormulaPtr b) {
    return mk(FKind::Iff, "", {}, {std::move(a), std::move(b)});
}
inline FormulaPtr exists(std::string v, FormulaPtr f) {
    return mk(FKind::Exists, std::move(v), {}, {std::move(f)});
}
inline FormulaPtr forall(std::string v, FormulaPtr f) {
    return mk(FKind::Forall, std::move(v), {}, {std::move(f)});
}
inline FormulaPtr exists1(std::string v, FormulaPtr f) {
    return mk(FKind::ExistsUnique, std::move(v), {}, {std::move(f)});
}
inline FormulaPtr neq(std::string a, std::string b) { return lnot(eq(std::move(a), std::move(b))); }

// --- traversal ---

inline void collect_free_vars(const FormulaPtr& f, std::set<std::string>& bound,
                              std::set<std::string>& out) {
    switch (f->kind) {
    case FKind::Atom:
    case FKind::Eq:
        for (const auto& v : f->vars)
            if (!bound.count(v)) out.insert(v);
        break;
    case FKind::Exists:
    case FKind::Forall:
    case FKind::ExistsUnique: {
        bool was = bound.count(f->sym) > 0;
        bound.insert(f->sym);
        collect_free_vars(f->children[0], bound, out);
        if (!was) bound.erase(f->sym);
        break;
    }
    default:
        for (const auto& c : f->children) collect_free_vars(c, bound, out);
    }
}

inline std::set<std::string> free_vars(const FormulaPtr& f) {
    std::set<std::string> bound, out;
    collect_free_vars(f, bound, out);
    return out;
}

inline void collect_all_names(const FormulaPtr& f, std::set<std::string>& out) {
    for (const auto& v : f->vars) out.insert(v);
    if (!f->sym.empty() && f->kind != FKind::Atom) out.insert(f->sym);
    for (const auto& c : f->children) collect_all_names(c, out);
}

class FreshNames {
public:
    explicit FreshNames(const std::set<std::string>& taken) : taken_(taken) {}
    std::string fresh(const std::string& base) {
        std::string cand;
        do {
            cand = base + "_" + std::to_string(++counter_);
        } while (taken_.count(cand));
        taken_.insert(cand);
        return cand;
    }
    void reserve(const std::string& s) { taken_.insert(s); }

private:
    std::set<std::string> taken_;
    unsigned counter_ = 0;
};

// Capture-avoiding simultaneous variable substitution.
inline FormulaPtr subst_vars(const FormulaPtr& f, const std::map<std::string, std::string>& sub,
                             FreshNames& names) {
    switch (f->kind) {
    case FKind::Atom:
    case FKind::Eq: {
        std::vector<std::string> vs = f->vars;
        for (auto& v : vs) {
            auto it = sub.find(v);
            if (it != sub.end()) v = it->second;
        }
        return mk(f->kind, f->sym, std::move(vs), {});
    }
    case FKind::Exists:
    case FKind::Forall:
    case FKind::ExistsUnique: {
        std::map<std::string, std::string> inner = sub;
        inner.erase(f->sym);
        bool capture = false;
        for (const auto& [from, to] : inner)
            if (to == f->sym) capture = true;
        std::string bvar = f->sym;
        if (capture) {
            bvar = names.fresh(f->sym);
            inner[f->sym] = bvar;
        }
        if (inner.empty()) return f;
        return mk(f->kind, bvar, {}, {subst_vars(f->children[0], inner, names)});
    }
    default: {
        std::vector<FormulaPtr> ch;
        ch.reserve(f->children.size());
        for (const auto& c : f->children) ch.push_back(subst_vars(c, sub, names));
        return mk(f->kind, f->sym, f->vars, std::move(ch));
    }
    }
}

inline FormulaPtr rename_var(const FormulaPtr& f, const std::string& from, const std::string& to,
                             FreshNames& names) {
    return subst_vars(f, {{from, to}}, names);
}

// Fixed desugaring: exists1 x phi  =>  exists x (phi ^ forall y (phi[x:=y] -> y=x)).
inline FormulaPtr desugar(const FormulaPtr& f, FreshNames& names) {
    switch (f->kind) {
    case FKind::Atom:
    case FKind::Eq:
        return f;
    case FKind::ExistsUnique: {
        FormulaPtr body = desugar(f->children[0], names);
        std::string y = names.fresh(f->sym);
        FormulaPtr copy = rename_var(body, f->sym, y, names);
        return exists(f->sym,
                      land({body, forall(y, implies(copy, eq(y, f->sym)))}));
    }
    default: {
        std::vector<FormulaPtr> ch;
        ch.reserve(f->children.size());
        for (const auto& c : f->children) ch.push_back(desugar(c, names));
        if (ch == f->children) return f;
        return mk(f->kind, f->sym, f->vars, std::move(ch));
    }
    }
}

inline FormulaPtr desugar(const FormulaPtr& f) {
    std::set<std::string> taken;
    collect_all_names(f, taken);
    FreshNames names(taken);
    return desugar(f, names);
}

inline int quantifier_depth(const FormulaPtr& f0) {
    FormulaPtr f = desugar(f0);
    struct Rec {
        static int depth(const FormulaPtr& f) {
            switch (f->kind) {
            case FKind::Atom:
            case FKind::Eq:
                return 0;
            case FKind::Exists:
            case FKind::Forall:
                return 1 + depth(f->children[0]);
            default: {
                int d = 0;
                for (const auto& c : f->children) d = std::max(d, depth(c));
                return d;
            }
            }
        }
    };
    return Rec::depth(f);
}

// --- printing ---

inline void render_to(const FormulaPtr& f, std::ostream& os) {
    switch (f->kind) {
    case FKind::Atom:
        os << '(' << f->sym;
        for (const auto& v : f->vars) os << ' ' << v;
        os << ')';
        break;
    case FKind::Eq:
        os << "(= " << f->vars[0] << ' ' << f->vars[1] << ')';
        break;
    case FKind::Not:
        os << "(not ";
        render_to(f->children[0], os);
        os << ')';
        break;
    case FKind::And:
    case FKind::Or: {
        os << (f->kind == FKind::And ? "(and" : "(or");
        for (const auto& c : f->children) {
            os << ' ';
            render_to(c, os);
        }
        os << ')';
        break;
    }
    case FKind::Implies:
    case FKind::Iff: {
        os << (f->kind == FKind::Implies ? "(implies " : "(iff ");
        render_to(f->children[0], os);
        os << ' ';
        render_to(f->children[1], os);
        os << ')';
        break;
    }
    case FKind::Exists:
    case FKind::Forall:
    case FKind::ExistsUnique: {
        const char* kw = f->kind == FKind::Exists   ? "exists"
                         : f->kind == FKind::Forall ? "forall"
                                                    : "exists1";
        os << '(' << kw << ' ' << f->sym << ' ';
        render_to(f->children[0], os);
        os << ')';
        break;
    }
    }
}

inline std::string render(const FormulaPtr& f) {
    std::ostringstream os;
    render_to(f, os);
    return os.str();
}

// --- parsing (prefix s-expressions) ---

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

namespace detail_parse {

struct Lexer {
    const std::string& text;
    std::size_t pos = 0;

    explicit Lexer(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    void expect(char c) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c)
            throw ParseError(std::string("expected '") + c + "'", pos);
        ++pos;
    }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '-';
    }
    std::string token() {
        skip_ws();
        std::size_t start = pos;
        if (pos < text.size() && text[pos] == '=') {
            ++pos;
            return "=";
        }
        while (pos < text.size() && ident_char(text[pos])) ++pos;
        if (pos == start) throw ParseError("expected identifier", pos);
        return text.substr(start, pos - start);
    }
};

inline FormulaPtr parse_expr(Lexer& lx, const Signature& sig) {
    lx.expect('(');
    std::size_t head_pos = lx.pos;
    std::string head = lx.token();
    FormulaPtr out;
    if (head == "not") {
        out = lnot(parse_expr(lx, sig));
    } else if (head == "and" || head == "or") {
        std::vector<FormulaPtr> ch;
        while (lx.peek() == '(') ch.push_back(parse_expr(lx, sig));
        if (ch.empty()) throw ParseError(head + " needs at least one operand", head_pos);
        out = ch.size() == 1 ? ch[0] : mk(head == "and" ? FKind::And : FKind::Or, "", {}, ch);
    } else if (head == "implies" || head == "iff") {
        FormulaPtr a = parse_expr(lx, sig);
        FormulaPtr b = parse_expr(lx, sig);
        out = head == "implies" ? implies(a, b) : iff(a, b);
    } else if (head == "forall" || head == "exists" || head == "exists1") {
        std::string v = lx.token();
        FormulaPtr body = parse_expr(lx, sig);
        out = mk(head == "forall"   ? FKind::Forall
                 : head == "exists" ? FKind::Exists
                                    : FKind::ExistsUnique,
                 v, {}, {body});
    } else if (head == "=") {
        std::string a = lx.token();
        std::string b = lx.token();
        out = eq(a, b);
    } else {
        int si = sig.index_of(head);
        if (si < 0) throw ParseError("unknown relation symbol '" + head + "'", head_pos);
        std::vector<std::string> vs;
        while (lx.peek() != ')') vs.push_back(lx.token());
        if (static_cast<int>(vs.size()) != sig.at(si).arity)
            throw ParseError("arity mismatch for '" + head + "': expected " +
                                 std::to_string(sig.at(si).arity) + ", got " +
                                 std::to_string(vs.size()),
                             head_pos);
        out = atom(head, vs);
    }
    lx.expect(')');
    return out;
}

} // namespace detail_parse

inline FormulaPtr parse(const std::string& text, const Signature& sig) {
    detail_parse::Lexer lx(text);
    FormulaPtr f = detail_parse::parse_expr(lx, sig);
    if (!lx.eof()) throw ParseError("trailing input", lx.pos);
    return f;
}

// --- predicate substitution ---

// Defining formula for one target symbol: body over the source signature
// with exactly arity(P) designated parameter variables.
struct PredicateDef {
    std::vector<std::string> params;
    FormulaPtr body;
};

// Replaces every atom P(v...) by its defining formula with parameters bound
// to v..., renaming the definition's bound variables to avoid capture.
inline FormulaPtr substitute_predicates(const FormulaPtr& f,
                                        const std::map<std::string, PredicateDef>& defs) {
    std::set<std::string> taken;
    collect_all_names(f, taken);
    for (const auto& [name, def] : defs) {
        collect_all_names(def.body, taken);
        for (const auto& p : def.params) taken.insert(p);
    }
    FreshNames names(taken);

    struct Rec {
        const std::map<std::string, PredicateDef>& defs;
        FreshNames& names;

        FormulaPtr run(const FormulaPtr& f) {
            switch (f->kind) {
            case FKind::Eq:
                return f;
            case FKind::Atom: {
                auto it = defs.find(f->sym);
                if (it == defs.end())
                    throw std::invalid_argument("no defining formula for symbol: " + f->sym);
                const PredicateDef& def = it->second;
                if (def.params.size() != f->vars.size())
                    throw std::invalid_argument("parameter count mismatch for symbol: " + f->sym);
                // rename every bound variable of the definition to a fresh
                // name, then plug in the arguments
                std::map<std::string, std::string> sub;
                FormulaPtr body = freshen_bound(def.body);
                for (std::size_t i = 0; i < def.params.size(); ++i)
                    sub[def.params[i]] = f->vars[i];
                return subst_vars(body, sub, names);
            }
            default: {
                std::vector<FormulaPtr> ch;
                ch.reserve(f->children.size());
                for (const auto& c : f->children) ch.push_back(run(c));
                return mk(f->kind, f->sym, f->vars, std::move(ch));
            }
            }
        }

        FormulaPtr freshen_bound(const FormulaPtr& f) {
            switch (f->kind) {
            case FKind::Atom:
            case FKind::Eq:
                return f;
            case FKind::Exists:
            case FKind::Forall:
            case FKind::ExistsUnique: {
                std::string nv = names.fresh(f->sym);
                FormulaPtr body = freshen_bound(f->children[0]);
                body = subst_vars(body, {{f->sym, nv}}, names);
                return mk(f->kind, nv, {}, {body});
            }
            default: {
                std::vector<FormulaPtr> ch;
                ch.reserve(f->children.size());
                for (const auto& c : f->children) ch.push_back(freshen_bound(c));
                return mk(f->kind, f->sym, f->vars, std::move(ch));
            }
            }
        }
    };

    Rec rec{defs, names};
    return rec.run(f);
}

// Used by the quotient constructions: rewrites equality and adjacency atoms
// themselves (applied to a desugared formula so sugar-introduced equalities
// are rewritten too).
inline FormulaPtr replace_atoms(const FormulaPtr& f,
                                const std::function<FormulaPtr(const Formula&)>& repl) {
    switch (f->kind) {
    case FKind::Atom:
    case FKind::Eq: {
        FormulaPtr r = repl(*f);
        return r ? r : f;
    }
    default: {
        std::vector<FormulaPtr> ch;
        ch.reserve(f->children.size());
        for (const auto& c : f->children) ch.push_back(replace_atoms(c, repl));
        return mk(f->kind, f->sym, f->vars, std::move(ch));
    }
    }
}

} // namespace relic
