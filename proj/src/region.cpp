#include "hyperbc/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hyperbc {

std::vector<double> Box::center() const {
    std::vector<double> c(range.size());
    for (std::size_t i = 0; i < range.size(); ++i) c[i] = 0.5 * (range[i].first + range[i].second);
    return c;
}

bool Box::contains(std::span<const double> point) const {
    for (std::size_t i = 0; i < range.size(); ++i)
        if (point[i] < range[i].first || point[i] > range[i].second) return false;
    return true;
}

BasicSet BasicSet::over(std::vector<std::string> vars) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    BasicSet b;
    b.dim_vars = std::move(vars);
    return b;
}

BasicSet BasicSet::trivially_true(std::vector<std::string> vars) { return over(std::move(vars)); }

void BasicSet::add(Polynomial g) {
    for (const auto& v : g.variables())
        if (!std::binary_search(dim_vars.begin(), dim_vars.end(), v))
            throw PolynomialError("constraint mentions variable outside the set's dimension: " + v);
    for (const auto& existing : gs)
        if (existing == g) return;
    gs.push_back(std::move(g));
}

bool BasicSet::contains(const std::map<std::string, double>& point, double slack) const {
    for (const auto& g : gs)
        if (g.eval(point) < -slack) return false;
    return true;
}

namespace {

// recognize a*x + b (single variable, degree one); returns (a, b)
std::optional<std::pair<double, double>> as_univariate_affine(const Polynomial& g,
                                                              std::string* var) {
    if (g.variables().size() != 1 || g.degree() != 1) return std::nullopt;
    *var = g.variables()[0];
    double a = 0.0, b = 0.0;
    for (const auto& [e, c] : g.terms()) {
        if (e[0] == 0)
            b = c;
        else if (e[0] == 1)
            a = c;
        else
            return std::nullopt;
    }
    return std::make_pair(a, b);
}

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

std::map<std::string, Interval> interval_relaxation(const BasicSet& b) {
    std::map<std::string, Interval> iv;
    for (const auto& v : b.dim_vars) iv[v];
    for (const auto& g : b.gs) {
        std::string var;
        auto ab = as_univariate_affine(g, &var);
        if (!ab) continue;
        auto [a, c] = *ab;
        if (a > 0)
            iv[var].lo = std::max(iv[var].lo, -c / a);
        else if (a < 0)
            iv[var].hi = std::min(iv[var].hi, -c / a);
        // a == 0 cannot happen: degree-one polynomial
    }
    return iv;
}

}  // namespace

std::optional<Box> BasicSet::bounding_box() const {
    auto iv = interval_relaxation(*this);
    Box box;
    for (const auto& v : dim_vars) {
        const auto& i = iv.at(v);
        if (!std::isfinite(i.lo) || !std::isfinite(i.hi) || i.lo > i.hi) return std::nullopt;
        box.vars.push_back(v);
        box.range.emplace_back(i.lo, i.hi);
    }
    return box;
}

bool BasicSet::provably_empty() const {
    for (const auto& g : gs)
        if (g.is_constant() && g.constant_term() < 0.0) return true;
    auto iv = interval_relaxation(*this);
    for (const auto& [v, i] : iv)
        if (i.lo > i.hi) return true;
    return false;
}

BasicSet BasicSet::renamed(const std::map<std::string, std::string>& names) const {
    std::vector<std::string> nv;
    for (const auto& v : dim_vars) {
        auto it = names.find(v);
        nv.push_back(it == names.end() ? v : it->second);
    }
    BasicSet out = BasicSet::over(nv);
    for (const auto& g : gs) out.add(g.renamed(names));
    return out;
}

BasicSet BasicSet::merged_with(const BasicSet& other) const {
    std::vector<std::string> vars = dim_vars;
    vars.insert(vars.end(), other.dim_vars.begin(), other.dim_vars.end());
    BasicSet out = BasicSet::over(vars);
    for (const auto& g : gs) out.add(g);
    for (const auto& g : other.gs) out.add(g);
    return out;
}

SemialgebraicRegion SemialgebraicRegion::of(BasicSet b) {
    SemialgebraicRegion r;
    r.clauses.push_back(std::move(b));
    return r;
}

SemialgebraicRegion SemialgebraicRegion::empty(std::vector<std::string> vars) {
    BasicSet never = BasicSet::over(std::move(vars));
    never.add(Polynomial::constant(-1.0));
    return of(std::move(never));
}

const std::vector<std::string>& SemialgebraicRegion::dim_vars() const {
    static const std::vector<std::string> none;
    return clauses.empty() ? none : clauses.front().dim_vars;
}

bool SemialgebraicRegion::contains(const std::map<std::string, double>& point,
                                   double slack) const {
    for (const auto& c : clauses)
        if (c.contains(point, slack)) return true;
    return false;
}

SemialgebraicRegion SemialgebraicRegion::intersect(const SemialgebraicRegion& o) const {
    SemialgebraicRegion out;
    for (const auto& a : clauses)
        for (const auto& b : o.clauses) out.clauses.push_back(a.merged_with(b));
    return out;
}

SemialgebraicRegion SemialgebraicRegion::unite(const SemialgebraicRegion& o) const {
    SemialgebraicRegion out = *this;
    out.clauses.insert(out.clauses.end(), o.clauses.begin(), o.clauses.end());
    return out;
}

SemialgebraicRegion SemialgebraicRegion::pruned() const {
    SemialgebraicRegion out;
    for (const auto& c : clauses)
        if (!c.provably_empty()) out.clauses.push_back(c);
    return out;
}

SemialgebraicRegion complement(const BasicSet& b, double gap) {
    SemialgebraicRegion out;
    if (b.gs.empty()) return SemialgebraicRegion::empty(b.dim_vars);
    for (const auto& g : b.gs) {
        BasicSet clause = BasicSet::over(b.dim_vars);
        clause.add(negate_inequality(g, gap));
        out.clauses.push_back(std::move(clause));
    }
    return out;
}

}  // namespace hyperbc
