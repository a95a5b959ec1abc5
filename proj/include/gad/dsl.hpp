#ifndef GAD_DSL_HPP
#define GAD_DSL_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gad/boolean_dynamics.hpp"
#include "gad/errors.hpp"
#include "gad/grading.hpp"
#include "gad/groupoid.hpp"
#include "gad/ring.hpp"
#include "gad/selfsimilar.hpp"

namespace gad {

// ---------------------------------------------------------------------------
// source text, spans, diagnostics

struct SourceDocument {
    std::string path;
    std::string text;
};

struct Span {
    std::size_t line = 1, col = 1;  // 1-based start position
    std::size_t end_line = 1, end_col = 1;
};

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string message;
    Span span;

    std::string str() const {
        return std::to_string(span.line) + ":" + std::to_string(span.col) + ": " +
               (severity == Severity::Error ? "error: " : "warning: ") + message;
    }
};

// ---------------------------------------------------------------------------
// AST: blocks of entries; an entry is a `key args... ;` statement or a
// `key args... { entries }` sub-block

struct AstEntry {
    std::string key;
    std::vector<std::string> args;
    bool is_block = false;
    std::vector<AstEntry> children;
    Span span;

    friend bool operator==(const AstEntry& a, const AstEntry& b) {
        return a.key == b.key && a.args == b.args && a.is_block == b.is_block &&
               a.children == b.children;
    }
};

struct AstBlock {
    std::string kind;
    std::string name;  // optional in the source; defaulted during elaboration
    std::vector<AstEntry> entries;
    Span span;

    friend bool operator==(const AstBlock& a, const AstBlock& b) {
        return a.kind == b.kind && a.name == b.name && a.entries == b.entries;
    }
};

struct Ast {
    std::vector<AstBlock> blocks;
    friend bool operator==(const Ast& a, const Ast& b) { return a.blocks == b.blocks; }
};

struct ParseResult {
    Ast ast;
    std::vector<Diagnostic> diagnostics;
    bool ok() const {
        for (const auto& d : diagnostics)
            if (d.severity == Diagnostic::Severity::Error) return false;
        return true;
    }
};

// ---------------------------------------------------------------------------
// lexer

namespace detail_dsl {

struct Token {
    enum class Kind { Word, LBrace, RBrace, Semi, End };
    Kind kind = Kind::End;
    std::string text;
    Span span;
};

inline std::vector<Token> lex(const SourceDocument& doc) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1;
    const std::string& s = doc.text;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (s[i + k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };
    while (i < s.size()) {
        char c = s[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') advance(1);
            continue;
        }
        Span sp{line, col, line, col};
        if (c == '{' || c == '}' || c == ';') {
            Token t;
            t.kind = c == '{' ? Token::Kind::LBrace
                              : (c == '}' ? Token::Kind::RBrace : Token::Kind::Semi);
            t.text = std::string(1, c);
            t.span = sp;
            out.push_back(std::move(t));
            advance(1);
            continue;
        }
        // a word runs to whitespace, punctuation, or a comment
        std::size_t start = i;
        while (i < s.size()) {
            char d = s[i];
            if (d == ' ' || d == '\t' || d == '\r' || d == '\n' || d == '{' || d == '}' ||
                d == ';' || d == '#')
                break;
            advance(1);
        }
        Token t;
        t.kind = Token::Kind::Word;
        t.text = s.substr(start, i - start);
        sp.end_line = line;
        sp.end_col = col > 1 ? col - 1 : col;
        t.span = sp;
        out.push_back(std::move(t));
    }
    Token end;
    end.span = {line, col, line, col};
    out.push_back(std::move(end));
    return out;
}

inline bool known_kind(const std::string& w) {
    return w == "ring" || w == "group" || w == "groupoid" || w == "cocycle" ||
           w == "selfsimilar" || w == "bds" || w == "assert";
}

}  // namespace detail_dsl

// ---------------------------------------------------------------------------
// parser: recursive descent with recovery at block boundaries

namespace detail_dsl {

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    ParseResult run() {
        ParseResult res;
        while (peek().kind != Token::Kind::End) {
            if (peek().kind != Token::Kind::Word || !known_kind(peek().text)) {
                error("expected a block keyword (ring, group, groupoid, cocycle, "
                      "selfsimilar, bds, assert), found '" +
                          peek().text + "'",
                      peek().span);
                next();
                continue;
            }
            if (auto b = parse_block()) res.ast.blocks.push_back(std::move(*b));
        }
        res.diagnostics = std::move(diags_);
        return res;
    }

private:
    std::optional<AstBlock> parse_block() {
        AstBlock block;
        block.kind = next().text;
        block.span = prev().span;
        if (peek().kind == Token::Kind::Word) block.name = next().text;
        if (peek().kind != Token::Kind::LBrace) {
            error("expected '{' after '" + block.kind + "'", peek().span);
            recover_to_next_block();
            return std::nullopt;
        }
        Span open = next().span;  // '{'
        parse_entries(block.entries, open);
        return block;
    }

    // entries until the matching '}'.  On EOF, or when a new top-level block
    // header shows up while this one is still open, cite the opening brace
    // and hand the position back so the next block is parsed normally.
    bool parse_entries(std::vector<AstEntry>& out, Span open) {
        for (;;) {
            switch (peek().kind) {
                case Token::Kind::RBrace:
                    next();
                    return true;
                case Token::Kind::End:
                    error("unclosed '{'", open);
                    return false;
                case Token::Kind::Semi:
                    next();  // stray separator, harmless
                    continue;
                case Token::Kind::LBrace:
                    error("entry must start with a keyword", peek().span);
                    skip_balanced();
                    continue;
                case Token::Kind::Word:
                    if (!parse_entry(out)) {
                        error("unclosed '{'", open);
                        return false;
                    }
                    continue;
            }
        }
    }

    // false = the tokens turned out to be the header of a new top-level block;
    // the position has been rewound to its keyword
    bool parse_entry(std::vector<AstEntry>& out) {
        std::size_t start = pos_;
        AstEntry e;
        e.key = next().text;
        e.span = prev().span;
        for (;;) {
            switch (peek().kind) {
                case Token::Kind::Word:
                    e.args.push_back(next().text);
                    continue;
                case Token::Kind::Semi:
                    next();
                    out.push_back(std::move(e));
                    return true;
                case Token::Kind::LBrace: {
                    // `kind [name] {` can only be a block header
                    if (known_kind(e.key) && e.args.size() <= 1) {
                        pos_ = start;
                        return false;
                    }
                    e.is_block = true;
                    Span open = next().span;
                    if (!parse_entries(e.children, open)) {
                        out.push_back(std::move(e));
                        return false;
                    }
                    out.push_back(std::move(e));
                    return true;
                }
                case Token::Kind::RBrace:
                case Token::Kind::End:
                    error("entry '" + e.key + "' is missing its ';'", e.span);
                    out.push_back(std::move(e));
                    return true;
            }
        }
    }

    void recover_to_next_block() {
        while (peek().kind != Token::Kind::End &&
               !(peek().kind == Token::Kind::Word && known_kind(peek().text))) {
            if (peek().kind == Token::Kind::LBrace) {
                skip_balanced();
            } else {
                next();
            }
        }
    }

    void skip_balanced() {
        std::size_t depth = 0;
        do {
            if (peek().kind == Token::Kind::LBrace) ++depth;
            if (peek().kind == Token::Kind::RBrace) --depth;
            if (peek().kind == Token::Kind::End) return;
            next();
        } while (depth > 0);
    }

    const Token& peek() const { return toks_[pos_]; }
    const Token& prev() const { return toks_[pos_ - 1]; }
    const Token& next() { return toks_[pos_++]; }

    void error(const std::string& msg, Span sp) {
        diags_.push_back({Diagnostic::Severity::Error, msg, sp});
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<Diagnostic> diags_;
};

}  // namespace detail_dsl

inline ParseResult parse(const SourceDocument& doc) {
    return detail_dsl::Parser(detail_dsl::lex(doc)).run();
}

// ---------------------------------------------------------------------------
// pretty printer; parse(pretty_print(ast)) is structurally equal to ast

namespace detail_dsl {

inline void print_entry(const AstEntry& e, std::string& out, std::size_t indent) {
    out.append(indent, ' ');
    out += e.key;
    for (const auto& a : e.args) out += " " + a;
    if (e.is_block) {
        out += " {\n";
        for (const auto& c : e.children) print_entry(c, out, indent + 2);
        out.append(indent, ' ');
        out += "}\n";
    } else {
        out += ";\n";
    }
}

}  // namespace detail_dsl

inline std::string pretty_print(const Ast& ast) {
    std::string out;
    for (const auto& b : ast.blocks) {
        out += b.kind;
        if (!b.name.empty()) out += " " + b.name;
        out += " {\n";
        for (const auto& e : b.entries) detail_dsl::print_entry(e, out, 2);
        out += "}\n\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// elaboration: construct the actual objects, running every module validator

struct Elaborated {
    std::map<std::string, RingSpec> rings;
    std::map<std::string, GroupPtr> groups;
    std::map<std::string, GroupoidPtr> groupoids;
    std::map<std::string, Cocycle> cocycles;
    std::map<std::string, SystemPtr> systems;
    std::map<std::string, BdsPtr> bds;
    std::vector<AstEntry> asserts;
};

namespace detail_dsl {

struct Elaborator {
    std::vector<Diagnostic> diags;

    void error(const std::string& msg, Span sp) {
        diags.push_back({Diagnostic::Severity::Error, msg, sp});
    }
    void warn(const std::string& msg, Span sp) {
        diags.push_back({Diagnostic::Severity::Warning, msg, sp});
    }

    static std::optional<long long> to_int(const std::string& s) {
        if (s.empty()) return std::nullopt;
        std::size_t at = s[0] == '-' ? 1 : 0;
        if (at == s.size()) return std::nullopt;
        for (std::size_t i = at; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return std::nullopt;
        return std::stoll(s);
    }

    std::optional<long long> want_int(const AstEntry& e, std::size_t arg) {
        if (arg < e.args.size())
            if (auto v = to_int(e.args[arg])) return v;
        error("'" + e.key + "' needs an integer argument", e.span);
        return std::nullopt;
    }

    std::optional<RingSpec> make_ring(const AstBlock& b) {
        for (const auto& e : b.entries) {
            if (e.key != "kind") {
                warn("unknown ring entry '" + e.key + "'", e.span);
                continue;
            }
            if (e.args.empty()) break;
            const std::string& k = e.args[0];
            if (k == "Z") return RingSpec::integers();
            if (k == "Q") return RingSpec::rationals();
            if (k == "GF" && e.args.size() == 2) {
                if (auto p = to_int(e.args[1]))
                    return RingSpec::prime_field(mpz_class(static_cast<long>(*p)));
            }
            if (k == "Zn" && e.args.size() == 2) {
                if (auto n = to_int(e.args[1]))
                    return RingSpec::integers_mod(mpz_class(static_cast<long>(*n)));
            }
            error("unknown ring kind '" + k + "' (use Z, Q, GF p, Zn n)", e.span);
            return std::nullopt;
        }
        error("ring block needs a 'kind' entry", b.span);
        return std::nullopt;
    }

    GroupPtr make_group(const AstBlock& b) {
        for (const auto& e : b.entries) {
            if (e.key == "trivial") return Group::trivial();
            if (e.key == "cyclic") {
                if (auto n = want_int(e, 0)) {
                    if (*n >= 1) return Group::cyclic(static_cast<std::size_t>(*n));
                    error("cyclic group order must be positive", e.span);
                }
                return nullptr;
            }
            if (e.key == "free") {
                if (auto r = want_int(e, 0)) {
                    if (*r >= 0) return Group::free_abelian(static_cast<std::size_t>(*r));
                    error("free abelian rank must be non-negative", e.span);
                }
                return nullptr;
            }
            warn("unknown group entry '" + e.key + "'", e.span);
        }
        error("group block needs 'trivial', 'cyclic n', or 'free r'", b.span);
        return nullptr;
    }

    GroupoidPtr make_groupoid(const AstBlock& b) {
        GroupoidData data;
        for (const auto& e : b.entries) {
            if (e.key == "units") {
                data.units.insert(data.units.end(), e.args.begin(), e.args.end());
            } else if (e.key == "arrow") {
                if (e.args.size() != 3) {
                    error("'arrow' needs: id source range", e.span);
                    continue;
                }
                data.arrows.push_back({e.args[0], e.args[1], e.args[2]});
            } else if (e.key == "compose") {
                if (e.args.size() != 3) {
                    error("'compose' needs: first second result", e.span);
                    continue;
                }
                data.compose[{e.args[0], e.args[1]}] = e.args[2];
            } else {
                warn("unknown groupoid entry '" + e.key + "'", e.span);
            }
        }
        try {
            return FiniteGroupoid::create(data);
        } catch (const Error& ex) {
            error(std::string("invalid groupoid: ") + ex.what(), b.span);
            return nullptr;
        }
    }

    // element of grp from integer arguments starting at `at`
    std::optional<GroupElem> make_element(const GroupPtr& grp, const AstEntry& e,
                                          std::size_t at) {
        std::vector<long long> vals;
        for (std::size_t i = at; i < e.args.size(); ++i) {
            auto v = to_int(e.args[i]);
            if (!v) {
                error("'" + e.key + "': expected integers after the name", e.span);
                return std::nullopt;
            }
            vals.push_back(*v);
        }
        try {
            if (grp->kind() == Group::Kind::FreeAbelian) {
                if (vals.size() != grp->rank()) {
                    error("'" + e.key + "': expected " + std::to_string(grp->rank()) +
                              " exponents",
                          e.span);
                    return std::nullopt;
                }
                return GroupElem(grp, vals);
            }
            if (vals.size() != 1) {
                error("'" + e.key + "': expected one element index", e.span);
                return std::nullopt;
            }
            if (vals[0] < 0 || static_cast<std::size_t>(vals[0]) >= grp->order()) {
                error("'" + e.key + "': element index out of range", e.span);
                return std::nullopt;
            }
            return GroupElem(grp, static_cast<std::size_t>(vals[0]));
        } catch (const Error& ex) {
            error(std::string("'") + e.key + "': " + ex.what(), e.span);
            return std::nullopt;
        }
    }

    void make_cocycle(const AstBlock& b, Elaborated& out) {
        GroupoidPtr gpd;
        GroupPtr grp;
        std::map<std::string, GroupElem> degrees;
        std::vector<const AstEntry*> pending;
        for (const auto& e : b.entries) {
            if (e.key == "groupoid" && e.args.size() == 1) {
                auto it = out.groupoids.find(e.args[0]);
                if (it == out.groupoids.end())
                    error("unknown groupoid '" + e.args[0] + "'", e.span);
                else
                    gpd = it->second;
            } else if (e.key == "group" && e.args.size() == 1) {
                auto it = out.groups.find(e.args[0]);
                if (it == out.groups.end())
                    error("unknown group '" + e.args[0] + "'", e.span);
                else
                    grp = it->second;
            } else if (e.key == "degree") {
                pending.push_back(&e);
            } else {
                warn("unknown cocycle entry '" + e.key + "'", e.span);
            }
        }
        if (!gpd || !grp) {
            error("cocycle block needs 'groupoid' and 'group' references", b.span);
            return;
        }
        for (const auto* e : pending) {
            if (e->args.empty()) {
                error("'degree' needs: arrow value...", e->span);
                continue;
            }
            if (auto el = make_element(grp, *e, 1)) degrees.emplace(e->args[0], *el);
        }
        try {
            out.cocycles.emplace(b.name, Cocycle::from_map(gpd, grp, degrees));
        } catch (const Error& ex) {
            error(std::string("invalid cocycle: ") + ex.what(), b.span);
        }
    }

    void make_selfsimilar(const AstBlock& b, Elaborated& out) {
        std::vector<std::string> vertices;
        std::vector<EdgeData> edges;
        GroupPtr grp;
        struct RawAction {
            const AstEntry* entry;
            std::size_t index;
        };
        std::vector<RawAction> actions;
        for (const auto& e : b.entries) {
            if (e.key == "vertices") {
                vertices.insert(vertices.end(), e.args.begin(), e.args.end());
            } else if (e.key == "edge") {
                if (e.args.size() != 3) {
                    error("'edge' needs: id source range", e.span);
                    continue;
                }
                edges.push_back({e.args[0], e.args[1], e.args[2]});
            } else if (e.key == "group") {
                if (e.args.empty()) {
                    error("'group' needs a kind", e.span);
                } else if (e.args[0] == "trivial") {
                    grp = Group::trivial();
                } else if (e.args[0] == "cyclic" && e.args.size() == 2) {
                    if (auto n = to_int(e.args[1]); n && *n >= 1)
                        grp = Group::cyclic(static_cast<std::size_t>(*n));
                    else
                        error("'group cyclic' needs a positive order", e.span);
                } else if (e.args[0] == "free" && e.args.size() == 2) {
                    if (auto r = to_int(e.args[1]); r && *r >= 1)
                        grp = Group::free_abelian(static_cast<std::size_t>(*r));
                    else
                        error("'group free' needs a positive rank", e.span);
                } else {
                    error("unknown group kind in selfsimilar block", e.span);
                }
            } else if (e.key == "action" && e.is_block) {
                if (e.args.size() != 1) {
                    error("'action' needs one index argument", e.span);
                    continue;
                }
                if (auto idx = to_int(e.args[0]); idx && *idx >= 0)
                    actions.push_back({&e, static_cast<std::size_t>(*idx)});
                else
                    error("'action' index must be a non-negative integer", e.span);
            } else {
                warn("unknown selfsimilar entry '" + e.key + "'", e.span);
            }
        }
        if (!grp) {
            error("selfsimilar block needs a 'group' entry", b.span);
            return;
        }
        GraphPtr graph;
        try {
            graph = Graph::create(vertices, edges);
        } catch (const Error& ex) {
            error(std::string("invalid graph: ") + ex.what(), b.span);
            return;
        }
        const std::size_t slots =
            grp->kind() == Group::Kind::FreeAbelian ? grp->rank() : grp->order();
        // identity defaults everywhere; action sub-blocks override
        std::vector<ActionSlice> slices(slots);
        for (auto& sl : slices) {
            for (std::size_t v = 0; v < graph->num_vertices(); ++v) sl.vertex.push_back(v);
            for (std::size_t a = 0; a < graph->num_edges(); ++a) {
                sl.edge.push_back(a);
                sl.phi.push_back(GroupElem::identity(grp));
            }
        }
        bool bad = false;
        for (const auto& act : actions) {
            if (act.index >= slots) {
                error("action index " + std::to_string(act.index) + " out of range",
                      act.entry->span);
                bad = true;
                continue;
            }
            ActionSlice& sl = slices[act.index];
            for (const auto& c : act.entry->children) {
                try {
                    if (c.key == "vertex" && c.args.size() == 2) {
                        sl.vertex[graph->vertex_index(c.args[0])] =
                            graph->vertex_index(c.args[1]);
                    } else if (c.key == "edge" && c.args.size() == 2) {
                        sl.edge[graph->edge_index(c.args[0])] = graph->edge_index(c.args[1]);
                    } else if (c.key == "phi" && c.args.size() >= 2) {
                        if (auto el = make_element(grp, c, 1))
                            sl.phi[graph->edge_index(c.args[0])] = *el;
                        else
                            bad = true;
                    } else {
                        error("action entries are 'vertex a b', 'edge a b', 'phi a g'",
                              c.span);
                        bad = true;
                    }
                } catch (const Error& ex) {
                    error(ex.what(), c.span);
                    bad = true;
                }
            }
        }
        if (bad) return;
        try {
            if (grp->kind() == Group::Kind::FreeAbelian && grp->rank() > 0)
                out.systems.emplace(b.name,
                                    SelfSimilarSystem::create_free_abelian(graph, grp, slices));
            else if (grp->kind() == Group::Kind::FreeAbelian)  // rank 0: trivial group
                out.systems.emplace(b.name, SelfSimilarSystem::trivial(graph));
            else
                out.systems.emplace(b.name,
                                    SelfSimilarSystem::create_table(graph, grp, slices));
        } catch (const Error& ex) {
            error(std::string("invalid self-similar action: ") + ex.what(), b.span);
        }
    }

    void make_bds(const AstBlock& b, Elaborated& out) {
        std::vector<std::string> atoms, labels;
        std::vector<const AstEntry*> thetas;
        for (const auto& e : b.entries) {
            if (e.key == "atoms") {
                atoms.insert(atoms.end(), e.args.begin(), e.args.end());
            } else if (e.key == "labels") {
                labels.insert(labels.end(), e.args.begin(), e.args.end());
            } else if (e.key == "theta" && e.is_block && e.args.size() == 1) {
                thetas.push_back(&e);
            } else {
                warn("unknown bds entry '" + e.key + "'", e.span);
            }
        }
        std::vector<std::string> sorted_atoms = atoms, sorted_labels = labels;
        std::sort(sorted_atoms.begin(), sorted_atoms.end());
        std::sort(sorted_labels.begin(), sorted_labels.end());
        auto atom_at = [&](const std::string& s) -> std::optional<std::size_t> {
            auto it = std::lower_bound(sorted_atoms.begin(), sorted_atoms.end(), s);
            if (it == sorted_atoms.end() || *it != s) return std::nullopt;
            return static_cast<std::size_t>(it - sorted_atoms.begin());
        };
        std::vector<std::vector<AtomMask>> images(sorted_labels.size(),
                                                  std::vector<AtomMask>(sorted_atoms.size(), 0));
        bool bad = false;
        for (const auto* e : thetas) {
            auto lit = std::lower_bound(sorted_labels.begin(), sorted_labels.end(),
                                        e->args[0]);
            if (lit == sorted_labels.end() || *lit != e->args[0]) {
                error("theta refers to unknown label '" + e->args[0] + "'", e->span);
                bad = true;
                continue;
            }
            std::size_t l = static_cast<std::size_t>(lit - sorted_labels.begin());
            for (const auto& c : e->children) {
                // `atom -> image atoms...`
                auto src = atom_at(c.key);
                if (!src || c.args.empty() || c.args[0] != "->") {
                    error("theta entries look like 'atom -> atoms...'", c.span);
                    bad = true;
                    continue;
                }
                AtomMask m = 0;
                for (std::size_t i = 1; i < c.args.size(); ++i) {
                    auto t = atom_at(c.args[i]);
                    if (!t) {
                        error("unknown atom '" + c.args[i] + "'", c.span);
                        bad = true;
                    } else {
                        m |= AtomMask(1) << *t;
                    }
                }
                images[l][*src] = m;
            }
        }
        if (bad) return;
        try {
            out.bds.emplace(b.name, BooleanDynSystem::create(atoms, labels, images));
        } catch (const Error& ex) {
            error(std::string("invalid Boolean dynamical system: ") + ex.what(), b.span);
        }
    }
};

}  // namespace detail_dsl

// Builds every object a parsed document describes; module validators run as
// part of construction.  Diagnostics are appended to *diags when given; any
// error raises ElaborationFailed with the bundled messages.
inline Elaborated elaborate(const Ast& ast, std::vector<Diagnostic>* diags = nullptr) {
    detail_dsl::Elaborator el;
    Elaborated out;
    std::map<std::string, std::size_t> counters;
    for (const auto& b : ast.blocks) {
        AstBlock named = b;
        if (named.name.empty())
            named.name = named.kind + std::to_string(++counters[named.kind]);
        if (named.kind == "ring") {
            if (auto r = el.make_ring(named)) out.rings.emplace(named.name, *r);
        } else if (named.kind == "group") {
            if (auto g = el.make_group(named)) out.groups.emplace(named.name, g);
        } else if (named.kind == "groupoid") {
            if (auto g = el.make_groupoid(named)) out.groupoids.emplace(named.name, g);
        } else if (named.kind == "cocycle") {
            el.make_cocycle(named, out);
        } else if (named.kind == "selfsimilar") {
            el.make_selfsimilar(named, out);
        } else if (named.kind == "bds") {
            el.make_bds(named, out);
        } else if (named.kind == "assert") {
            for (const auto& e : named.entries) out.asserts.push_back(e);
        }
    }
    if (diags) diags->insert(diags->end(), el.diags.begin(), el.diags.end());
    std::string bundle;
    std::size_t errors = 0;
    for (const auto& d : el.diags)
        if (d.severity == Diagnostic::Severity::Error) {
            ++errors;
            if (!bundle.empty()) bundle += "; ";
            bundle += d.str();
        }
    if (errors) throw ElaborationFailed(std::to_string(errors) + " elaboration error" +
                                        (errors > 1 ? "s" : "") + ": " + bundle);
    return out;
}

inline Elaborated elaborate_document(const SourceDocument& doc,
                                     std::vector<Diagnostic>* diags = nullptr) {
    ParseResult pr = parse(doc);
    if (diags) diags->insert(diags->end(), pr.diagnostics.begin(), pr.diagnostics.end());
    if (!pr.ok()) {
        std::string bundle;
        for (const auto& d : pr.diagnostics)
            if (d.severity == Diagnostic::Severity::Error) {
                if (!bundle.empty()) bundle += "; ";
                bundle += d.str();
            }
        throw ElaborationFailed("parse errors: " + bundle);
    }
    return elaborate(pr.ast, diags);
}

}  // namespace gad

#endif
