#include "hyperbc/formula.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace hyperbc {

std::string AtomRef::key() const {
    if (traces.empty()) return name;
    std::string k = name + "[";
    for (std::size_t i = 0; i < traces.size(); ++i) {
        if (i) k += ",";
        k += traces[i];
    }
    return k + "]";
}

namespace {
LtlPtr node(LtlOp op, std::vector<LtlPtr> kids = {}, AtomRef atom = {}) {
    return std::make_shared<const LtlNode>(LtlNode{op, std::move(atom), std::move(kids)});
}
}  // namespace

LtlPtr mk_atom(AtomRef a) { return node(LtlOp::Atom, {}, std::move(a)); }
LtlPtr mk_true() { return node(LtlOp::True); }
LtlPtr mk_false() { return node(LtlOp::False); }
LtlPtr mk_not(LtlPtr a) { return node(LtlOp::Not, {std::move(a)}); }
LtlPtr mk_and(LtlPtr a, LtlPtr b) { return node(LtlOp::And, {std::move(a), std::move(b)}); }
LtlPtr mk_or(LtlPtr a, LtlPtr b) { return node(LtlOp::Or, {std::move(a), std::move(b)}); }
LtlPtr mk_implies(LtlPtr a, LtlPtr b) {
    return node(LtlOp::Implies, {std::move(a), std::move(b)});
}
LtlPtr mk_next(LtlPtr a) { return node(LtlOp::Next, {std::move(a)}); }
LtlPtr mk_until(LtlPtr a, LtlPtr b) { return node(LtlOp::Until, {std::move(a), std::move(b)}); }
LtlPtr mk_release(LtlPtr a, LtlPtr b) {
    return node(LtlOp::Release, {std::move(a), std::move(b)});
}
LtlPtr mk_globally(LtlPtr a) { return node(LtlOp::Globally, {std::move(a)}); }
LtlPtr mk_eventually(LtlPtr a) { return node(LtlOp::Eventually, {std::move(a)}); }

bool ast_equal(const LtlPtr& a, const LtlPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->op != b->op || a->atom != b->atom || a->kids.size() != b->kids.size()) return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!ast_equal(a->kids[i], b->kids[i])) return false;
    return true;
}

std::string to_string(const LtlPtr& b) {
    switch (b->op) {
        case LtlOp::Atom: return b->atom.key();
        case LtlOp::True: return "true";
        case LtlOp::False: return "false";
        case LtlOp::Not: return "!" + to_string(b->kids[0]);
        case LtlOp::And: return "(" + to_string(b->kids[0]) + " & " + to_string(b->kids[1]) + ")";
        case LtlOp::Or: return "(" + to_string(b->kids[0]) + " | " + to_string(b->kids[1]) + ")";
        case LtlOp::Implies:
            return "(" + to_string(b->kids[0]) + " -> " + to_string(b->kids[1]) + ")";
        case LtlOp::Next: return "X " + to_string(b->kids[0]);
        case LtlOp::Until:
            return "(" + to_string(b->kids[0]) + " U " + to_string(b->kids[1]) + ")";
        case LtlOp::Release:
            return "(" + to_string(b->kids[0]) + " R " + to_string(b->kids[1]) + ")";
        case LtlOp::Globally: return "G " + to_string(b->kids[0]);
        case LtlOp::Eventually: return "F " + to_string(b->kids[0]);
    }
    return "?";
}

int HyperLTLFormula::copy_index(const std::string& trace_var) const {
    for (std::size_t i = 0; i < prefix.size(); ++i)
        if (prefix[i].second == trace_var) return static_cast<int>(i) + 1;
    throw FormulaError("unbound trace variable: " + trace_var);
}

std::string HyperLTLFormula::str() const {
    std::string s;
    for (const auto& [q, v] : prefix)
        s += (q == Quant::Forall ? "forall " : "exists ") + v + ". ";
    return s + to_string(body);
}

// ---------------------------------------------------------------------------
// parser

namespace {

struct Tok {
    enum Kind { Ident, LPar, RPar, LBrk, RBrk, Comma, Dot, Bang, Amp, Bar, Arrow, End } kind;
    std::string text;
    std::size_t pos;
};

std::vector<Tok> tokenize(std::string_view src) {
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), i});
            i = j;
            continue;
        }
        switch (c) {
            case '(': out.push_back({Tok::LPar, "(", i}); break;
            case ')': out.push_back({Tok::RPar, ")", i}); break;
            case '[': out.push_back({Tok::LBrk, "[", i}); break;
            case ']': out.push_back({Tok::RBrk, "]", i}); break;
            case ',': out.push_back({Tok::Comma, ",", i}); break;
            case '.': out.push_back({Tok::Dot, ".", i}); break;
            case '!': out.push_back({Tok::Bang, "!", i}); break;
            case '&': out.push_back({Tok::Amp, "&", i}); break;
            case '|': out.push_back({Tok::Bar, "|", i}); break;
            case '-':
                if (i + 1 < src.size() && src[i + 1] == '>') {
                    out.push_back({Tok::Arrow, "->", i});
                    ++i;
                    break;
                }
                throw FormulaError("stray '-'", i);
            default: throw FormulaError(std::string("unexpected character '") + c + "'", i);
        }
        ++i;
    }
    out.push_back({Tok::End, "", src.size()});
    return out;
}

class FormulaParser {
public:
    FormulaParser(std::string_view src, const std::map<std::string, AtomDecl>& decls)
        : toks_(tokenize(src)), decls_(decls) {}

    HyperLTLFormula parse() {
        HyperLTLFormula f;
        while (at().kind == Tok::Ident && (at().text == "forall" || at().text == "exists")) {
            Quant q = at().text == "forall" ? Quant::Forall : Quant::Exists;
            next();
            if (at().kind != Tok::Ident) throw FormulaError("expected trace variable", at().pos);
            std::string var = at().text;
            for (const auto& [q2, v2] : f.prefix)
                if (v2 == var)
                    throw FormulaError("duplicate trace variable '" + var + "'", at().pos);
            next();
            if (at().kind != Tok::Dot) throw FormulaError("expected '.' after quantifier", at().pos);
            next();
            f.prefix.emplace_back(q, var);
        }
        bound_.clear();
        for (const auto& [q, v] : f.prefix) bound_.insert(v);
        f.body = implies_level();
        if (at().kind != Tok::End) throw FormulaError("unexpected trailing input", at().pos);
        return f;
    }

private:
    std::vector<Tok> toks_;
    std::size_t i_ = 0;
    const std::map<std::string, AtomDecl>& decls_;
    std::set<std::string> bound_;

    const Tok& at() const { return toks_[i_]; }
    void next() { ++i_; }

    LtlPtr implies_level() {
        LtlPtr lhs = or_level();
        if (at().kind == Tok::Arrow) {
            next();
            return mk_implies(lhs, implies_level());  // right associative
        }
        return lhs;
    }

    LtlPtr or_level() {
        LtlPtr lhs = and_level();
        while (at().kind == Tok::Bar) {
            next();
            lhs = mk_or(lhs, and_level());
        }
        return lhs;
    }

    LtlPtr and_level() {
        LtlPtr lhs = until_level();
        while (at().kind == Tok::Amp) {
            next();
            lhs = mk_and(lhs, until_level());
        }
        return lhs;
    }

    LtlPtr until_level() {
        LtlPtr lhs = unary();
        if (at().kind == Tok::Ident && (at().text == "U" || at().text == "R")) {
            bool is_u = at().text == "U";
            next();
            LtlPtr rhs = until_level();  // right associative
            return is_u ? mk_until(lhs, rhs) : mk_release(lhs, rhs);
        }
        return lhs;
    }

    LtlPtr unary() {
        if (at().kind == Tok::Bang) {
            next();
            return mk_not(unary());
        }
        if (at().kind == Tok::LPar) {
            next();
            LtlPtr inner = implies_level();
            if (at().kind != Tok::RPar) throw FormulaError("expected ')'", at().pos);
            next();
            return inner;
        }
        if (at().kind != Tok::Ident)
            throw FormulaError("expected formula", at().pos);
        const std::string word = at().text;
        const std::size_t pos = at().pos;
        if (word == "X" || word == "G" || word == "F") {
            next();
            LtlPtr inner = unary();
            if (word == "X") return mk_next(inner);
            if (word == "G") return mk_globally(inner);
            return mk_eventually(inner);
        }
        if (word == "true") {
            next();
            return mk_true();
        }
        if (word == "false") {
            next();
            return mk_false();
        }
        if (word == "forall" || word == "exists")
            throw FormulaError("quantifiers are only allowed in the prenex prefix", pos);
        // atom application a[p] / a[p1,p2]
        auto decl = decls_.find(word);
        if (decl == decls_.end())
            throw FormulaError("undeclared atom '" + word + "'", pos);
        next();
        if (at().kind != Tok::LBrk)
            throw FormulaError("atom '" + word + "' needs trace indices", at().pos);
        next();
        std::vector<std::string> traces;
        for (;;) {
            if (at().kind != Tok::Ident)
                throw FormulaError("expected trace variable in atom indices", at().pos);
            if (!bound_.count(at().text))
                throw FormulaError("unbound trace variable '" + at().text + "'", at().pos);
            traces.push_back(at().text);
            next();
            if (at().kind == Tok::Comma) {
                next();
                continue;
            }
            break;
        }
        if (at().kind != Tok::RBrk) throw FormulaError("expected ']'", at().pos);
        next();
        const int want = decl->second.scope == AtomDecl::Scope::Single ? 1 : decl->second.arity;
        if (static_cast<int>(traces.size()) != want)
            throw FormulaError("atom '" + word + "' expects " + std::to_string(want) +
                                   " trace index(es), got " + std::to_string(traces.size()),
                               pos);
        return mk_atom(AtomRef{word, std::move(traces)});
    }
};

}  // namespace

HyperLTLFormula parse_hyperltl(std::string_view src,
                               const std::map<std::string, AtomDecl>& decls) {
    return FormulaParser(src, decls).parse();
}

FragmentClass classify(const HyperLTLFormula& f) {
    FragmentClass out{};
    int alternations = 0;
    for (std::size_t i = 1; i < f.prefix.size(); ++i)
        if (f.prefix[i].first != f.prefix[i - 1].first) ++alternations;
    out.alternations = alternations;

    const int p = f.trace_count();
    int l = 0;
    while (l < p && f.prefix[l].first == Quant::Forall) ++l;
    out.leading_foralls = l;
    bool fe = true;
    for (int i = l; i < p; ++i) fe &= f.prefix[i].first == Quant::Exists;

    if (l == p)
        out.kind = FragmentClass::Kind::AllUniversal;
    else if (l == 0 && fe && p > 0)
        out.kind = FragmentClass::Kind::AllExistential;
    else if (fe)
        out.kind = FragmentClass::Kind::ForallStarExistsStar;
    else
        out.kind = FragmentClass::Kind::General;
    return out;
}

std::string FragmentClass::str() const {
    switch (kind) {
        case Kind::AllUniversal: return "all-universal";
        case Kind::AllExistential: return "all-existential";
        case Kind::ForallStarExistsStar:
            return "forall^" + std::to_string(leading_foralls) + " exists^*";
        case Kind::General: return "general(" + std::to_string(alternations) + " alternations)";
    }
    return "?";
}

LtlPtr negate_to_nnf(const LtlPtr& b) {
    switch (b->op) {
        case LtlOp::Atom: return mk_not(b);
        case LtlOp::True: return mk_false();
        case LtlOp::False: return mk_true();
        case LtlOp::Not: {
            // push down: nnf of the operand itself
            const LtlPtr& k = b->kids[0];
            if (k->op == LtlOp::Atom) return k;
            return negate_to_nnf(negate_to_nnf(k));  // ¬¬k, normalized
        }
        case LtlOp::And: return mk_or(negate_to_nnf(b->kids[0]), negate_to_nnf(b->kids[1]));
        case LtlOp::Or: return mk_and(negate_to_nnf(b->kids[0]), negate_to_nnf(b->kids[1]));
        case LtlOp::Implies: {
            // ¬(a -> b) = a ∧ ¬b, with a normalized too
            LtlPtr a = negate_to_nnf(negate_to_nnf(b->kids[0]));
            return mk_and(a, negate_to_nnf(b->kids[1]));
        }
        case LtlOp::Next: return mk_next(negate_to_nnf(b->kids[0]));
        case LtlOp::Until:
            return mk_release(negate_to_nnf(b->kids[0]), negate_to_nnf(b->kids[1]));
        case LtlOp::Release:
            return mk_until(negate_to_nnf(b->kids[0]), negate_to_nnf(b->kids[1]));
        case LtlOp::Globally: return mk_eventually(negate_to_nnf(b->kids[0]));
        case LtlOp::Eventually: return mk_globally(negate_to_nnf(b->kids[0]));
    }
    throw FormulaError("unreachable");
}

LtlPtr to_minimal_basis(const LtlPtr& b) {
    switch (b->op) {
        case LtlOp::Atom:
        case LtlOp::True:
        case LtlOp::False: return b;
        case LtlOp::Not: {
            const LtlPtr& k = b->kids[0];
            if (k->op == LtlOp::Atom) return b;
            return to_minimal_basis(negate_to_nnf(k));
        }
        case LtlOp::And: return mk_and(to_minimal_basis(b->kids[0]), to_minimal_basis(b->kids[1]));
        case LtlOp::Or: return mk_or(to_minimal_basis(b->kids[0]), to_minimal_basis(b->kids[1]));
        case LtlOp::Implies:
            return mk_or(to_minimal_basis(negate_to_nnf(b->kids[0])),
                         to_minimal_basis(b->kids[1]));
        case LtlOp::Next: return mk_next(to_minimal_basis(b->kids[0]));
        case LtlOp::Until:
            return mk_until(to_minimal_basis(b->kids[0]), to_minimal_basis(b->kids[1]));
        case LtlOp::Release:
            return mk_release(to_minimal_basis(b->kids[0]), to_minimal_basis(b->kids[1]));
        case LtlOp::Globally: return mk_release(mk_false(), to_minimal_basis(b->kids[0]));
        case LtlOp::Eventually: return mk_until(mk_true(), to_minimal_basis(b->kids[0]));
    }
    throw FormulaError("unreachable");
}

// ---------------------------------------------------------------------------
// lasso-word semantics

namespace {

// positions 0..S+C-1; successor wraps from the last cycle position to S
struct LassoShape {
    std::size_t stem, cycle;
    std::size_t total() const { return stem + cycle; }
    std::size_t next(std::size_t i) const { return i + 1 < total() ? i + 1 : stem; }
};

std::vector<char> eval_positions(const LtlPtr& b, const LassoWord& w, const LassoShape& sh) {
    const std::size_t n = sh.total();
    auto letter = [&](std::size_t i) -> const Letter& {
        return i < sh.stem ? w.stem[i] : w.cycle[i - sh.stem];
    };
    std::vector<char> out(n, 0);
    switch (b->op) {
        case LtlOp::True: std::fill(out.begin(), out.end(), 1); return out;
        case LtlOp::False: return out;
        case LtlOp::Atom: {
            const std::string k = b->atom.key();
            for (std::size_t i = 0; i < n; ++i) out[i] = letter(i).count(k) ? 1 : 0;
            return out;
        }
        case LtlOp::Not: {
            auto a = eval_positions(b->kids[0], w, sh);
            for (std::size_t i = 0; i < n; ++i) out[i] = !a[i];
            return out;
        }
        case LtlOp::And: {
            auto a = eval_positions(b->kids[0], w, sh);
            auto c = eval_positions(b->kids[1], w, sh);
            for (std::size_t i = 0; i < n; ++i) out[i] = a[i] && c[i];
            return out;
        }
        case LtlOp::Or: {
            auto a = eval_positions(b->kids[0], w, sh);
            auto c = eval_positions(b->kids[1], w, sh);
            for (std::size_t i = 0; i < n; ++i) out[i] = a[i] || c[i];
            return out;
        }
        case LtlOp::Implies: {
            auto a = eval_positions(b->kids[0], w, sh);
            auto c = eval_positions(b->kids[1], w, sh);
            for (std::size_t i = 0; i < n; ++i) out[i] = !a[i] || c[i];
            return out;
        }
        case LtlOp::Next: {
            auto a = eval_positions(b->kids[0], w, sh);
            for (std::size_t i = 0; i < n; ++i) out[i] = a[sh.next(i)];
            return out;
        }
        case LtlOp::Until: {
            auto a = eval_positions(b->kids[0], w, sh);
            auto c = eval_positions(b->kids[1], w, sh);
            // least fixpoint of sat = c | (a & X sat)
            for (std::size_t round = 0; round <= n; ++round) {
                bool changed = false;
                for (std::size_t ii = n; ii-- > 0;) {
                    char v = c[ii] || (a[ii] && out[sh.next(ii)]);
                    if (v != out[ii]) {
                        out[ii] = v;
                        changed = true;
                    }
                }
                if (!changed) break;
            }
            return out;
        }
        case LtlOp::Release: {
            auto a = eval_positions(b->kids[0], w, sh);
            auto c = eval_positions(b->kids[1], w, sh);
            // greatest fixpoint of sat = c & (a | X sat)
            std::fill(out.begin(), out.end(), 1);
            for (std::size_t round = 0; round <= n; ++round) {
                bool changed = false;
                for (std::size_t ii = n; ii-- > 0;) {
                    char v = c[ii] && (a[ii] || out[sh.next(ii)]);
                    if (v != out[ii]) {
                        out[ii] = v;
                        changed = true;
                    }
                }
                if (!changed) break;
            }
            return out;
        }
        case LtlOp::Globally: return eval_positions(mk_release(mk_false(), b->kids[0]), w, sh);
        case LtlOp::Eventually: return eval_positions(mk_until(mk_true(), b->kids[0]), w, sh);
    }
    throw FormulaError("unreachable");
}

}  // namespace

bool eval_on_lasso_word(const LtlPtr& body, const LassoWord& word) {
    if (word.cycle.empty()) throw FormulaError("lasso word needs a nonempty cycle");
    LassoShape sh{word.stem.size(), word.cycle.size()};
    return eval_positions(body, word, sh)[0] != 0;
}

LassoWord zip_traces(const std::vector<LassoWord>& traces,
                     const std::vector<std::string>& trace_vars) {
    if (traces.size() != trace_vars.size())
        throw FormulaError("one trace per trace variable required");
    std::size_t stem = 0, cyc = 1;
    for (const auto& t : traces) {
        if (t.cycle.empty()) throw FormulaError("each trace needs a nonempty cycle");
        stem = std::max(stem, t.stem.size());
        cyc = std::lcm(cyc, t.cycle.size());
    }
    auto letter_at = [](const LassoWord& t, std::size_t i) -> const Letter& {
        return i < t.stem.size() ? t.stem[i]
                                 : t.cycle[(i - t.stem.size()) % t.cycle.size()];
    };
    LassoWord out;
    for (std::size_t i = 0; i < stem + cyc; ++i) {
        Letter joint;
        for (std::size_t k = 0; k < traces.size(); ++k)
            for (const auto& a : letter_at(traces[k], i))
                joint.insert(AtomRef{a, {trace_vars[k]}}.key());
        (i < stem ? out.stem : out.cycle).push_back(std::move(joint));
    }
    return out;
}

}  // namespace hyperbc
