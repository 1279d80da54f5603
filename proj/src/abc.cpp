#include "hyperbc/abc.hpp"

#include <algorithm>
#include <cmath>

namespace hyperbc {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

std::map<std::string, double> to_point(const std::vector<std::string>& vars,
                                       std::span<const double> x) {
    std::map<std::string, double> pt;
    for (std::size_t i = 0; i < vars.size(); ++i) pt[vars[i]] = x[i];
    return pt;
}

// shared driver for conditions (5) and (6): extremize B over a region
CheckReport check_sign(const char* condition, const CertificateCandidate& c,
                       const SemialgebraicRegion& region, bool want_nonpositive,
                       double threshold, const SampleConfig& cfg) {
    CheckReport rep;
    rep.condition = condition;
    rep.seed = cfg.seed;
    rep.tol = cfg.tol;
    rep.worst_violation = -std::numeric_limits<double>::infinity();

    long total = 0;
    for (const auto& clause : region.clauses) {
        if (clause.provably_empty()) continue;
        auto box = clause.bounding_box();
        if (!box) {
            rep.verdict = Verdict::Inconclusive;
            rep.note = "region clause is unbounded; declare explicit bounds";
            return rep;
        }
        CompiledPoly B(c.B, box->vars);
        ClauseSampler sampler(clause, *box, cfg.seed);
        total += sampler.run(cfg.grid_per_dim, cfg.random_samples,
                             [&](std::span<const double> x) {
                                 double v = B(x);
                                 double violation =
                                     want_nonpositive ? v : threshold - v;
                                 if (violation > rep.worst_violation) {
                                     rep.worst_violation = violation;
                                     rep.witness = to_point(box->vars, x);
                                 }
                                 return true;
                             });
    }
    rep.samples = total;
    if (total == 0) {
        rep.verdict = Verdict::Inconclusive;
        rep.note = "no samples landed in the region (it may be empty)";
        return rep;
    }
    rep.verdict = rep.worst_violation <= cfg.tol ? Verdict::Pass : Verdict::Fail;
    return rep;
}

}  // namespace

CheckReport check_initial(const CertificateCandidate& c, const ConditionalInvariance& ci,
                          const SampleConfig& cfg) {
    return check_sign("initial(5)", c, ci.set_A, /*want_nonpositive=*/true, 0.0, cfg);
}

CheckReport check_unsafe(const CertificateCandidate& c, const ConditionalInvariance& ci,
                         const SampleConfig& cfg) {
    return check_sign("unsafe(6)", c, ci.set_B, /*want_nonpositive=*/false, c.epsilon, cfg);
}

CheckReport check_decrease(const CertificateCandidate& c, const ConditionalInvariance& ci,
                           const AugmentedSystem& aug, const SampleConfig& cfg) {
    CheckReport rep;
    rep.condition = "decrease(7)";
    rep.seed = cfg.seed;
    rep.tol = cfg.tol;
    rep.worst_violation = -std::numeric_limits<double>::infinity();
    rep.worst_strategy_violation = -std::numeric_limits<double>::infinity();

    // sampling space: augmented state plus universal inputs
    std::vector<std::string> univ_inputs;
    std::vector<std::string> exist_inputs;
    for (int i = 1; i <= aug.p; ++i) {
        Quant q = i - 1 < static_cast<int>(ci.prefix.size()) ? ci.prefix[i - 1] : Quant::Forall;
        for (const auto& w : aug.copy_input_vars(i))
            (q == Quant::Forall ? univ_inputs : exist_inputs).push_back(w);
    }
    for (const auto& w : exist_inputs)
        if (!c.strategies.count(w)) {
            rep.verdict = Verdict::Inconclusive;
            rep.note = "missing strategy for existential input " + w;
            return rep;
        }

    auto state_box = aug.state_set.bounding_box();
    auto input_box = aug.input_set.bounding_box();
    if (!state_box || (!aug.input_vars.empty() && !input_box)) {
        rep.verdict = Verdict::Inconclusive;
        rep.note = "state or input set lacks box bounds";
        return rep;
    }

    std::vector<std::string> space = aug.state_vars;
    BasicSet domain = aug.state_set;
    Box box = *state_box;
    for (const auto& w : univ_inputs) {
        space.push_back(w);
        auto it = std::find(input_box->vars.begin(), input_box->vars.end(), w);
        box.vars.push_back(w);
        box.range.push_back(input_box->range[it - input_box->vars.begin()]);
    }
    domain = BasicSet::over(space);
    for (const auto& g : aug.state_set.gs) domain.add(g);
    for (const auto& g : aug.input_set.gs) {
        bool only_univ = true;
        for (const auto& v : g.variables())
            only_univ &= std::find(univ_inputs.begin(), univ_inputs.end(), v) != univ_inputs.end();
        if (only_univ) domain.add(g);
    }

    // one-step value of B with strategies substituted symbolically
    std::map<std::string, Polynomial> step;
    for (std::size_t i = 0; i < aug.state_vars.size(); ++i) {
        Polynomial fi = aug.f[i];
        step[aug.state_vars[i]] = fi.substitute(c.strategies);
    }
    Polynomial Bnext = c.B.substitute(step);
    Polynomial diff = Bnext - c.B;  // over state vars + universal inputs
    CompiledPoly diff_c(diff, space);

    // strategy feasibility: each h value must stay inside the input set
    struct StrategyCheck {
        std::string var;
        CompiledPoly h;
        std::vector<CompiledPoly> membership;  // input_set constraints on this input
    };
    std::vector<StrategyCheck> strategies;
    for (const auto& w : exist_inputs) {
        StrategyCheck sc;
        sc.var = w;
        sc.h = CompiledPoly(c.strategies.at(w), space);
        // input-set constraints mentioning w, rewritten as functions of h:
        // evaluated by substituting the strategy for w
        for (const auto& g : aug.input_set.gs)
            if (g.mentions(w)) {
                std::map<std::string, Polynomial> sub;
                sub[w] = c.strategies.at(w);
                sc.membership.emplace_back(g.substitute(sub), space);
            }
        strategies.push_back(std::move(sc));
    }

    ClauseSampler sampler(domain, box, cfg.seed);
    long feasible_samples = 0;
    rep.samples = 0;
    sampler.run(cfg.grid_per_dim, cfg.random_samples, [&](std::span<const double> x) {
        ++rep.samples;
        double w_violation = -std::numeric_limits<double>::infinity();
        for (const auto& sc : strategies)
            for (const auto& m : sc.membership) w_violation = std::max(w_violation, -m(x));
        if (!strategies.empty() && w_violation > rep.worst_strategy_violation) {
            rep.worst_strategy_violation = w_violation;
            rep.strategy_witness = to_point(space, x);
        }
        if (w_violation > cfg.tol) {
            ++rep.strategy_infeasible;
            return true;  // decrease is not certified here; tracked separately
        }
        ++feasible_samples;
        double v = diff_c(x);
        if (v > rep.worst_violation) {
            rep.worst_violation = v;
            rep.witness = to_point(space, x);
        }
        return true;
    });

    if (feasible_samples == 0) {
        rep.verdict = Verdict::Inconclusive;
        rep.note = strategies.empty() ? "no samples landed in the domain"
                                      : "strategy left the input set at every sample";
        return rep;
    }
    rep.verdict = rep.worst_violation <= cfg.tol ? Verdict::Pass : Verdict::Fail;
    if (rep.strategy_infeasible > 0)
        rep.note = "strategy left the input set at " + std::to_string(rep.strategy_infeasible) +
                   "/" + std::to_string(rep.samples) + " samples; decrease checked on the rest";
    return rep;
}

std::array<CheckReport, 3> check_ci(const CertificateCandidate& c,
                                    const ConditionalInvariance& ci, const AugmentedSystem& aug,
                                    const SampleConfig& cfg) {
    return {check_initial(c, ci, cfg), check_unsafe(c, ci, cfg),
            check_decrease(c, ci, aug, cfg)};
}

std::array<CheckReport, 3> check_classic_bc(const Polynomial& B, const DynamicalSystem& sys,
                                            const BasicSet& A, const BasicSet& Bset,
                                            double epsilon, const SampleConfig& cfg) {
    AugmentedSystem aug = self_compose(sys, 1);
    std::map<std::string, std::string> rename;
    for (const auto& v : sys.state_vars) rename[v] = copy_name(v, 1);
    for (const auto& v : sys.input_vars) rename[v] = copy_name(v, 1);

    CertificateCandidate cand;
    cand.B = B.renamed(rename);
    cand.epsilon = epsilon;
    ConditionalInvariance ci;
    ci.prefix = {Quant::Forall};
    ci.set_A = SemialgebraicRegion::of(A.renamed(rename).merged_with(aug.state_set));
    ci.set_B = SemialgebraicRegion::of(Bset.renamed(rename).merged_with(aug.state_set));
    ci.provenance = "classic barrier certificate";
    return check_ci(cand, ci, aug, cfg);
}

std::map<std::string, double> simulate_step(const AugmentedSystem& aug,
                                            const CertificateCandidate& c,
                                            const std::vector<Quant>& prefix,
                                            const std::map<std::string, double>& state,
                                            const std::map<std::string, double>& universal_inputs) {
    std::map<std::string, double> full = state;
    for (const auto& [k, v] : universal_inputs) full[k] = v;
    // resolve existential inputs in quantifier order (earlier strategies may
    // feed later ones through the accumulated assignment)
    for (int i = 1; i <= aug.p; ++i) {
        Quant q = i - 1 < static_cast<int>(prefix.size()) ? prefix[i - 1] : Quant::Forall;
        if (q != Quant::Exists) continue;
        for (const auto& w : aug.copy_input_vars(i)) {
            auto it = c.strategies.find(w);
            if (it == c.strategies.end())
                throw PolynomialError("missing strategy for existential input " + w);
            full[w] = it->second.eval(full);
        }
    }
    std::map<std::string, double> next;
    for (std::size_t i = 0; i < aug.state_vars.size(); ++i)
        next[aug.state_vars[i]] = aug.f[i].eval(full);
    return next;
}

}  // namespace hyperbc
