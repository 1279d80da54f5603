#include "hyperbc/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace hyperbc {

bool GradedLex::operator()(const Exponents& a, const Exponents& b) const {
    unsigned da = 0, db = 0;
    for (auto e : a) da += e;
    for (auto e : b) db += e;
    if (da != db) return da < db;
    // same total degree: lexicographic, earlier variable more significant
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] != b[i]) return a[i] > b[i];
    return a.size() < b.size();
}

Polynomial Polynomial::constant(double c) {
    Polynomial p;
    if (c != 0.0) p.terms_[{}] = c;
    return p;
}

Polynomial Polynomial::variable(const std::string& name) {
    Polynomial p;
    p.vars_ = {name};
    p.terms_[{1}] = 1.0;
    return p;
}

bool Polynomial::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_.begin()->first == Exponents(vars_.size(), 0);
}

double Polynomial::constant_term() const {
    auto it = terms_.find(Exponents(vars_.size(), 0));
    return it == terms_.end() ? 0.0 : it->second;
}

unsigned Polynomial::degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
        unsigned t = 0;
        for (auto x : e) t += x;
        d = std::max(d, t);
    }
    return d;
}

bool Polynomial::mentions(const std::string& var) const {
    return std::find(vars_.begin(), vars_.end(), var) != vars_.end();
}

void Polynomial::add_term(const Exponents& e, double c) {
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    } else if (c == 0.0) {
        terms_.erase(it);
    }
}

void Polynomial::normalize() {
    // drop variables with no occurrence, remapping exponent vectors
    std::vector<bool> used(vars_.size(), false);
    for (const auto& [e, c] : terms_)
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) used[i] = true;
    if (std::all_of(used.begin(), used.end(), [](bool b) { return b; })) return;
    std::vector<std::string> nv;
    std::vector<int> remap(vars_.size(), -1);
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (used[i]) {
            remap[i] = static_cast<int>(nv.size());
            nv.push_back(vars_[i]);
        }
    TermMap nt;
    for (const auto& [e, c] : terms_) {
        Exponents ne(nv.size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) ne[remap[i]] = e[i];
        nt[ne] = c;
    }
    vars_ = std::move(nv);
    terms_ = std::move(nt);
}

// a + sb * b over the merged variable list
Polynomial align_add(const Polynomial& a, const Polynomial& b, double sb) {
    std::vector<std::string> vars;
    std::merge(a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end(),
               std::back_inserter(vars));
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    auto index_of = [&](const std::string& v) {
        return static_cast<std::size_t>(
            std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
    };
    Polynomial out;
    out.vars_ = vars;
    auto push = [&](const Polynomial& p, double scale) {
        std::vector<std::size_t> map(p.vars_.size());
        for (std::size_t i = 0; i < p.vars_.size(); ++i) map[i] = index_of(p.vars_[i]);
        for (const auto& [e, c] : p.terms_) {
            Exponents ne(vars.size(), 0);
            for (std::size_t i = 0; i < e.size(); ++i) ne[map[i]] = e[i];
            out.add_term(ne, scale * c);
        }
    };
    push(a, 1.0);
    push(b, sb);
    out.normalize();
    return out;
}

Polynomial Polynomial::operator-() const {
    Polynomial p = *this;
    for (auto& [e, c] : p.terms_) c = -c;
    return p;
}

Polynomial Polynomial::operator+(const Polynomial& o) const { return align_add(*this, o, 1.0); }
Polynomial Polynomial::operator-(const Polynomial& o) const { return align_add(*this, o, -1.0); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
    std::vector<std::string> vars;
    std::merge(vars_.begin(), vars_.end(), o.vars_.begin(), o.vars_.end(),
               std::back_inserter(vars));
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    auto index_of = [&](const std::string& v) {
        return static_cast<std::size_t>(
            std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
    };
    std::vector<std::size_t> ma(vars_.size()), mb(o.vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) ma[i] = index_of(vars_[i]);
    for (std::size_t i = 0; i < o.vars_.size(); ++i) mb[i] = index_of(o.vars_[i]);
    Polynomial out;
    out.vars_ = vars;
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            Exponents ne(vars.size(), 0);
            for (std::size_t i = 0; i < ea.size(); ++i) ne[ma[i]] += ea[i];
            for (std::size_t i = 0; i < eb.size(); ++i) ne[mb[i]] += eb[i];
            out.add_term(ne, ca * cb);
        }
    }
    out.normalize();
    return out;
}

Polynomial Polynomial::operator*(double c) const {
    if (c == 0.0) return {};
    Polynomial p = *this;
    for (auto& [e, v] : p.terms_) v *= c;
    return p;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial r = Polynomial::constant(1.0);
    Polynomial b = *this;
    while (e > 0) {
        if (e & 1u) r = r * b;
        b = b * b;
        e >>= 1u;
    }
    return r;
}

double Polynomial::eval(const std::map<std::string, double>& point) const {
    std::vector<double> x(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = point.find(vars_[i]);
        if (it == point.end())
            throw PolynomialError("missing variable in evaluation point: " + vars_[i]);
        x[i] = it->second;
    }
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = c;
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::uint32_t k = 0; k < e[i]; ++k) t *= x[i];
        sum += t;
    }
    return sum;
}

Polynomial Polynomial::substitute(const std::map<std::string, Polynomial>& sub) const {
    Polynomial out;
    for (const auto& [e, c] : terms_) {
        Polynomial term = Polynomial::constant(c);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            auto it = sub.find(vars_[i]);
            Polynomial base =
                it == sub.end() ? Polynomial::variable(vars_[i]) : it->second;
            term = term * base.pow(e[i]);
        }
        out = out + term;
    }
    return out;
}

Polynomial Polynomial::renamed(const std::map<std::string, std::string>& names) const {
    std::map<std::string, Polynomial> sub;
    for (const auto& [from, to] : names) sub.emplace(from, Polynomial::variable(to));
    return substitute(sub);
}

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

}  // namespace

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // descending graded-lex
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        double c = it->second;
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        double a = std::abs(c);
        bool has_vars = false;
        for (auto e : it->first) has_vars |= e > 0;
        bool printed_coef = false;
        if (!has_vars || a != 1.0) {
            os << format_double(a);
            printed_coef = true;
        }
        bool first_factor = !printed_coef;
        for (std::size_t i = 0; i < it->first.size(); ++i) {
            if (it->first[i] == 0) continue;
            if (!first_factor) os << "*";
            first_factor = false;
            os << vars_[i];
            if (it->first[i] > 1) os << "^" << it->first[i];
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// expression parser

namespace {

struct Lexer {
    std::string_view src;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
};

class ExprParser {
public:
    ExprParser(std::string_view src, const std::vector<std::string>& vars)
        : lex_{src}, vars_(vars) {}

    Polynomial parse() {
        Polynomial p = expr();
        lex_.skip_ws();
        if (lex_.pos != lex_.src.size())
            throw PolynomialError("unexpected trailing input", lex_.pos);
        return p;
    }

private:
    Lexer lex_;
    const std::vector<std::string>& vars_;

    Polynomial expr() {
        Polynomial p = lex_.eat('-') ? -term() : term();
        for (;;) {
            if (lex_.eat('+')) {
                p = p + term();
            } else if (lex_.eat('-')) {
                p = p - term();
            } else {
                return p;
            }
        }
    }

    Polynomial term() {
        Polynomial p = factor();
        while (lex_.eat('*')) p = p * factor();
        return p;
    }

    Polynomial factor() {
        Polynomial p = base();
        if (lex_.eat('^')) {
            std::size_t at = lex_.pos;
            lex_.skip_ws();
            unsigned e = 0;
            bool any = false;
            while (lex_.pos < lex_.src.size() &&
                   std::isdigit(static_cast<unsigned char>(lex_.src[lex_.pos]))) {
                e = e * 10 + static_cast<unsigned>(lex_.src[lex_.pos] - '0');
                ++lex_.pos;
                any = true;
            }
            if (!any) throw PolynomialError("expected nonnegative integer exponent", at);
            p = p.pow(e);
        }
        return p;
    }

    Polynomial base() {
        char c = lex_.peek();
        std::size_t at = lex_.pos;
        if (c == '(') {
            lex_.eat('(');
            Polynomial p = expr();
            if (!lex_.eat(')')) throw PolynomialError("expected ')'", lex_.pos);
            return p;
        }
        if (c == '-') {
            lex_.eat('-');
            return -factor();
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t end = lex_.pos;
            while (end < lex_.src.size() &&
                   (std::isdigit(static_cast<unsigned char>(lex_.src[end])) ||
                    lex_.src[end] == '.' || lex_.src[end] == 'e' || lex_.src[end] == 'E' ||
                    ((lex_.src[end] == '+' || lex_.src[end] == '-') && end > lex_.pos &&
                     (lex_.src[end - 1] == 'e' || lex_.src[end - 1] == 'E'))))
                ++end;
            double value = 0.0;
            auto res = std::from_chars(lex_.src.data() + lex_.pos, lex_.src.data() + end, value);
            if (res.ec != std::errc() || res.ptr != lex_.src.data() + end)
                throw PolynomialError("malformed numeric literal", at);
            lex_.pos = end;
            return Polynomial::constant(value);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = lex_.pos;
            while (end < lex_.src.size() &&
                   (std::isalnum(static_cast<unsigned char>(lex_.src[end])) ||
                    lex_.src[end] == '_'))
                ++end;
            std::string name(lex_.src.substr(lex_.pos, end - lex_.pos));
            if (std::find(vars_.begin(), vars_.end(), name) == vars_.end())
                throw PolynomialError("unknown variable '" + name + "'", at);
            lex_.pos = end;
            return Polynomial::variable(name);
        }
        throw PolynomialError("unexpected character in expression", at);
    }
};

}  // namespace

Polynomial parse_polynomial(std::string_view src, const std::vector<std::string>& vars) {
    return ExprParser(src, vars).parse();
}

Polynomial negate_inequality(const Polynomial& g, double gap) {
    if (!(gap > 0.0)) throw PolynomialError("negation gap must be positive");
    return -g - Polynomial::constant(gap);
}

CompiledPoly::CompiledPoly(const Polynomial& p, const std::vector<std::string>& space) {
    std::vector<int> map(p.variables().size(), -1);
    for (std::size_t i = 0; i < p.variables().size(); ++i) {
        auto it = std::find(space.begin(), space.end(), p.variables()[i]);
        if (it == space.end())
            throw PolynomialError("variable '" + p.variables()[i] +
                                  "' missing from evaluation space");
        map[i] = static_cast<int>(it - space.begin());
    }
    for (const auto& [e, c] : p.terms()) {
        Term t;
        t.coef = c;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) t.factors.emplace_back(map[i], e[i]);
        terms_.push_back(std::move(t));
    }
}

double CompiledPoly::operator()(std::span<const double> point) const {
    double sum = 0.0;
    for (const auto& t : terms_) {
        double v = t.coef;
        for (const auto& [idx, exp] : t.factors) {
            double x = point[idx];
            for (std::uint32_t k = 0; k < exp; ++k) v *= x;
        }
        sum += v;
    }
    return sum;
}

}  // namespace hyperbc
