#include "hyperbc/guard.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace hyperbc {

Guard Guard::t() { return Guard{Kind::True, {}, true, {}}; }
Guard Guard::f() { return Guard{Kind::False, {}, true, {}}; }
Guard Guard::lit(AtomRef a, bool positive) { return Guard{Kind::Lit, std::move(a), positive, {}}; }

Guard Guard::conj(std::vector<Guard> ks) {
    std::vector<Guard> flat;
    for (auto& k : ks) {
        if (k.kind == Kind::False) return f();
        if (k.kind == Kind::True) continue;
        if (k.kind == Kind::And)
            for (auto& kk : k.kids) flat.push_back(std::move(kk));
        else
            flat.push_back(std::move(k));
    }
    if (flat.empty()) return t();
    if (flat.size() == 1) return flat[0];
    return Guard{Kind::And, {}, true, std::move(flat)};
}

Guard Guard::disj(std::vector<Guard> ks) {
    std::vector<Guard> flat;
    for (auto& k : ks) {
        if (k.kind == Kind::True) return t();
        if (k.kind == Kind::False) continue;
        if (k.kind == Kind::Or)
            for (auto& kk : k.kids) flat.push_back(std::move(kk));
        else
            flat.push_back(std::move(k));
    }
    if (flat.empty()) return f();
    if (flat.size() == 1) return flat[0];
    return Guard{Kind::Or, {}, true, std::move(flat)};
}

Guard guard_and(const Guard& a, const Guard& b) { return Guard::conj({a, b}); }
Guard guard_or(const Guard& a, const Guard& b) { return Guard::disj({a, b}); }

Guard guard_negate(const Guard& g) {
    switch (g.kind) {
        case Guard::Kind::True: return Guard::f();
        case Guard::Kind::False: return Guard::t();
        case Guard::Kind::Lit: return Guard::lit(g.atom, !g.positive);
        case Guard::Kind::And: {
            std::vector<Guard> ks;
            for (const auto& k : g.kids) ks.push_back(guard_negate(k));
            return Guard::disj(std::move(ks));
        }
        case Guard::Kind::Or: {
            std::vector<Guard> ks;
            for (const auto& k : g.kids) ks.push_back(guard_negate(k));
            return Guard::conj(std::move(ks));
        }
    }
    return Guard::f();
}

bool Guard::eval(const Letter& letter) const {
    switch (kind) {
        case Kind::True: return true;
        case Kind::False: return false;
        case Kind::Lit: return (letter.count(atom.key()) > 0) == positive;
        case Kind::And:
            return std::all_of(kids.begin(), kids.end(),
                               [&](const Guard& k) { return k.eval(letter); });
        case Kind::Or:
            return std::any_of(kids.begin(), kids.end(),
                               [&](const Guard& k) { return k.eval(letter); });
    }
    return false;
}

void Guard::collect_atoms(std::vector<AtomRef>& out) const {
    if (kind == Kind::Lit) out.push_back(atom);
    for (const auto& k : kids) k.collect_atoms(out);
}

std::vector<AtomRef> Guard::atoms() const {
    std::vector<AtomRef> out;
    collect_atoms(out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string Guard::str() const {
    switch (kind) {
        case Kind::True: return "true";
        case Kind::False: return "false";
        case Kind::Lit: return (positive ? "" : "!") + atom.key();
        case Kind::And: {
            std::string s;
            for (std::size_t i = 0; i < kids.size(); ++i) {
                if (i) s += " & ";
                bool paren = kids[i].kind == Kind::Or;
                s += paren ? "(" + kids[i].str() + ")" : kids[i].str();
            }
            return s;
        }
        case Kind::Or: {
            std::string s;
            for (std::size_t i = 0; i < kids.size(); ++i) {
                if (i) s += " | ";
                s += kids[i].str();
            }
            return s;
        }
    }
    return "?";
}

bool Guard::operator==(const Guard& o) const {
    if (kind != o.kind || kids.size() != o.kids.size()) return false;
    if (kind == Kind::Lit && (atom != o.atom || positive != o.positive)) return false;
    for (std::size_t i = 0; i < kids.size(); ++i)
        if (!(kids[i] == o.kids[i])) return false;
    return true;
}

namespace {

// partial evaluation under an assignment; unassigned atoms stay symbolic
enum class Tri { False, True, Unknown };

Tri eval_partial(const Guard& g, const std::map<std::string, bool>& assign) {
    switch (g.kind) {
        case Guard::Kind::True: return Tri::True;
        case Guard::Kind::False: return Tri::False;
        case Guard::Kind::Lit: {
            auto it = assign.find(g.atom.key());
            if (it == assign.end()) return Tri::Unknown;
            return it->second == g.positive ? Tri::True : Tri::False;
        }
        case Guard::Kind::And: {
            bool unknown = false;
            for (const auto& k : g.kids) {
                Tri t = eval_partial(k, assign);
                if (t == Tri::False) return Tri::False;
                if (t == Tri::Unknown) unknown = true;
            }
            return unknown ? Tri::Unknown : Tri::True;
        }
        case Guard::Kind::Or: {
            bool unknown = false;
            for (const auto& k : g.kids) {
                Tri t = eval_partial(k, assign);
                if (t == Tri::True) return Tri::True;
                if (t == Tri::Unknown) unknown = true;
            }
            return unknown ? Tri::Unknown : Tri::False;
        }
    }
    return Tri::Unknown;
}

bool sat_rec(const Guard& g, std::vector<std::string>& keys, std::size_t i,
             std::map<std::string, bool>& assign) {
    Tri t = eval_partial(g, assign);
    if (t == Tri::True) return true;
    if (t == Tri::False) return false;
    if (i >= keys.size()) return false;
    assign[keys[i]] = true;
    if (sat_rec(g, keys, i + 1, assign)) return true;
    assign[keys[i]] = false;
    bool r = sat_rec(g, keys, i + 1, assign);
    assign.erase(keys[i]);
    return r;
}

bool sat_over(const Guard& g, const std::vector<AtomRef>& atoms) {
    std::vector<std::string> keys;
    for (const auto& a : atoms) keys.push_back(a.key());
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    if (keys.size() <= 20) {
        // valuation enumeration with early exit via the same recursion
        std::map<std::string, bool> assign;
        return sat_rec(g, keys, 0, assign);
    }
    std::map<std::string, bool> assign;
    return sat_rec(g, keys, 0, assign);  // branch-and-prune handles larger sets
}

}  // namespace

bool satisfiable(const Guard& g) { return sat_over(g, g.atoms()); }

bool jointly_satisfiable(const Guard& a, const Guard& b) {
    Guard both = guard_and(a, b);
    return sat_over(both, both.atoms());
}

bool equivalent(const Guard& a, const Guard& b) {
    // a xor b unsatisfiable
    Guard diff = guard_or(guard_and(a, guard_negate(b)), guard_and(guard_negate(a), b));
    return !sat_over(diff, diff.atoms());
}

std::vector<GuardCube> to_dnf(const Guard& g) {
    switch (g.kind) {
        case Guard::Kind::True: return {GuardCube{}};
        case Guard::Kind::False: return {};
        case Guard::Kind::Lit: return {GuardCube{{{g.atom, g.positive}}}};
        case Guard::Kind::Or: {
            std::vector<GuardCube> out;
            for (const auto& k : g.kids) {
                auto sub = to_dnf(k);
                out.insert(out.end(), sub.begin(), sub.end());
            }
            return out;
        }
        case Guard::Kind::And: {
            std::vector<GuardCube> acc{GuardCube{}};
            for (const auto& k : g.kids) {
                auto sub = to_dnf(k);
                std::vector<GuardCube> next;
                for (const auto& a : acc) {
                    for (const auto& b : sub) {
                        GuardCube c = a;
                        bool clash = false;
                        for (const auto& [atom, pos] : b.lits) {
                            auto it = std::find_if(c.lits.begin(), c.lits.end(),
                                                   [&](const auto& l) { return l.first == atom; });
                            if (it != c.lits.end()) {
                                if (it->second != pos) {
                                    clash = true;
                                    break;
                                }
                            } else {
                                c.lits.emplace_back(atom, pos);
                            }
                        }
                        if (!clash) next.push_back(std::move(c));
                    }
                }
                acc = std::move(next);
            }
            return acc;
        }
    }
    return {};
}

namespace {

struct GuardLexer {
    std::string_view src;
    std::size_t pos = 0;
    void skip() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    char peek() {
        skip();
        return pos < src.size() ? src[pos] : '\0';
    }
};

// identifier possibly followed by [p1,p2]
AtomRef parse_atom_ref(GuardLexer& lx) {
    lx.skip();
    std::size_t start = lx.pos;
    while (lx.pos < lx.src.size() &&
           (std::isalnum(static_cast<unsigned char>(lx.src[lx.pos])) || lx.src[lx.pos] == '_' ||
            lx.src[lx.pos] == ',' || lx.src[lx.pos] == '(' || lx.src[lx.pos] == ')')) {
        // names like "(a,b)" are only consumed when they started with '('
        if ((lx.src[lx.pos] == '(' || lx.src[lx.pos] == ')') && lx.src[start] != '(') break;
        ++lx.pos;
        if (lx.src[lx.pos - 1] == ')' && lx.src[start] == '(') break;
    }
    std::string name(lx.src.substr(start, lx.pos - start));
    if (name.empty()) throw FormulaError("expected atom", start);
    AtomRef ref;
    if (lx.peek() == '[') {
        ++lx.pos;
        std::string idx;
        std::vector<std::string> traces;
        while (lx.pos < lx.src.size() && lx.src[lx.pos] != ']') {
            if (lx.src[lx.pos] == ',') {
                traces.push_back(idx);
                idx.clear();
            } else if (!std::isspace(static_cast<unsigned char>(lx.src[lx.pos]))) {
                idx += lx.src[lx.pos];
            }
            ++lx.pos;
        }
        if (lx.pos >= lx.src.size()) throw FormulaError("expected ']'", lx.pos);
        ++lx.pos;
        if (!idx.empty()) traces.push_back(idx);
        ref = AtomRef{name, traces};
    } else {
        ref = AtomRef{name, {}};
    }
    return ref;
}

Guard parse_or(GuardLexer& lx);

Guard parse_unit(GuardLexer& lx) {
    char c = lx.peek();
    if (c == '!') {
        ++lx.pos;
        return guard_negate(parse_unit(lx));
    }
    if (c == '(') {
        // lookahead: "(a,b)" is an opaque atom name, "(x & y)" is grouping
        std::size_t depth = 0, j = lx.pos;
        bool oper = false;
        for (; j < lx.src.size(); ++j) {
            if (lx.src[j] == '(') ++depth;
            if (lx.src[j] == ')' && --depth == 0) break;
            if (lx.src[j] == '&' || lx.src[j] == '|' || lx.src[j] == '!') oper = true;
        }
        if (oper) {
            ++lx.pos;
            Guard g = parse_or(lx);
            if (lx.peek() != ')') throw FormulaError("expected ')'", lx.pos);
            ++lx.pos;
            return g;
        }
        return Guard::lit(parse_atom_ref(lx));
    }
    std::size_t save = lx.pos;
    AtomRef a = parse_atom_ref(lx);
    if (a.traces.empty()) {
        if (a.name == "true" || a.name == "t") return Guard::t();
        if (a.name == "false" || a.name == "f") return Guard::f();
    }
    (void)save;
    return Guard::lit(std::move(a));
}

Guard parse_and(GuardLexer& lx) {
    Guard g = parse_unit(lx);
    while (lx.peek() == '&') {
        ++lx.pos;
        g = guard_and(g, parse_unit(lx));
    }
    return g;
}

Guard parse_or(GuardLexer& lx) {
    Guard g = parse_and(lx);
    while (lx.peek() == '|') {
        ++lx.pos;
        g = guard_or(g, parse_and(lx));
    }
    return g;
}

}  // namespace

Guard parse_guard(std::string_view src) {
    GuardLexer lx{src};
    Guard g = parse_or(lx);
    lx.skip();
    if (lx.pos != src.size()) throw FormulaError("unexpected trailing input in guard", lx.pos);
    return g;
}

}  // namespace hyperbc
