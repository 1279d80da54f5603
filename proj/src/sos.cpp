#include "hyperbc/sos.hpp"

#include <algorithm>

#include "hyperbc/sdpa.hpp"

namespace hyperbc {

int MonomialBasis::index_of(const Exponents& e) const {
    auto it = std::lower_bound(monos.begin(), monos.end(), e, GradedLex{});
    if (it == monos.end() || *it != e) return -1;
    return static_cast<int>(it - monos.begin());
}

Polynomial MonomialBasis::monomial(std::size_t i) const {
    Polynomial p = Polynomial::constant(1.0);
    for (std::size_t k = 0; k < vars.size(); ++k)
        for (std::uint32_t e = 0; e < monos[i][k]; ++e) p = p * Polynomial::variable(vars[k]);
    return p;
}

MonomialBasis make_basis(const std::vector<std::string>& vars, unsigned maxdeg) {
    MonomialBasis b;
    b.vars = vars;
    Exponents cur(vars.size(), 0);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
        if (i == vars.size()) {
            b.monos.push_back(cur);
            return;
        }
        for (unsigned e = 0; e <= left; ++e) {
            cur[i] = e;
            rec(i + 1, left - e);
        }
        cur[i] = 0;
    };
    rec(0, maxdeg);
    std::sort(b.monos.begin(), b.monos.end(), GradedLex{});
    return b;
}

void AffineExpr::add(int var, double coef) {
    if (coef == 0.0) return;
    auto [it, fresh] = terms.try_emplace(var, coef);
    if (!fresh) {
        it->second += coef;
        if (it->second == 0.0) terms.erase(it);
    }
}

void DecisionPoly::accumulate(const Polynomial& known, int var, double scale,
                              const std::vector<std::string>& space) {
    std::vector<int> map(known.variables().size());
    for (std::size_t i = 0; i < known.variables().size(); ++i) {
        auto it = std::find(space.begin(), space.end(), known.variables()[i]);
        if (it == space.end())
            throw SosError("polynomial variable outside the program space: " +
                           known.variables()[i]);
        map[i] = static_cast<int>(it - space.begin());
    }
    for (const auto& [e, c] : known.terms()) {
        Exponents ne(space.size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) ne[map[i]] = e[i];
        auto& cell = coeffs_[ne];
        if (var < 0)
            cell.constant += scale * c;
        else
            cell.add(var, scale * c);
    }
}

int GramBlock::var_of(int i, int j) const {
    // 0-based upper triangle, row-major
    const int n = dim();
    return first_var + i * n - i * (i - 1) / 2 + (j - i);
}

int SosProgram::add_free() {
    if (!blocks.empty()) throw SosError("free variables must be allocated before Gram blocks");
    ++total_vars;
    return n_free++;
}

GramBlock& SosProgram::add_gram(const std::string& name, MonomialBasis basis) {
    GramBlock blk;
    blk.name = name;
    blk.basis = std::move(basis);
    blk.first_var = total_vars;
    total_vars += blk.dim() * (blk.dim() + 1) / 2;
    blocks.push_back(std::move(blk));
    return blocks.back();
}

GramBlock& SosProgram::coefficient_match(const DecisionPoly& expr, MonomialBasis basis,
                                         const std::string& name) {
    GramBlock& blk = add_gram(name, std::move(basis));
    const auto& bs = blk.basis;

    // every monomial reachable as a product of basis monomials, plus the
    // expression's own support
    std::map<Exponents, AffineExpr, GradedLex> rows;
    for (std::size_t i = 0; i < bs.size(); ++i) {
        for (std::size_t j = i; j < bs.size(); ++j) {
            Exponents prod(bs.vars.size());
            for (std::size_t k = 0; k < prod.size(); ++k)
                prod[k] = bs.monos[i][k] + bs.monos[j][k];
            rows[prod].add(blk.var_of(static_cast<int>(i), static_cast<int>(j)),
                           i == j ? 1.0 : 2.0);
        }
    }
    for (const auto& [mono, aff] : expr.coeffs()) {
        auto it = rows.find(mono);
        if (it == rows.end()) {
            if (aff.terms.empty() && aff.constant == 0.0) continue;
            unsigned deg = 0;
            for (auto e : mono) deg += e;
            throw SosError("monomial of degree " + std::to_string(deg) +
                           " in '" + name + "' is not representable; raise the degree bounds");
        }
        // row: gram expansion - expression = 0
        for (const auto& [v, c] : aff.terms) it->second.add(v, -c);
        it->second.constant -= aff.constant;
    }
    for (auto& [mono, row] : rows) equalities.push_back(std::move(row));
    return blk;
}

namespace {

// z-space image of a known polynomial: substitute x_i = c_i + r_i * z_i
Polynomial to_z(const Polynomial& p, const SosProgram& prog) {
    std::map<std::string, Polynomial> sub;
    for (const auto& v : p.variables()) {
        auto itc = prog.center.find(v);
        if (itc == prog.center.end()) throw SosError("no box for variable " + v);
        sub[v] = Polynomial::constant(itc->second) +
                 Polynomial::variable("z_" + v) * prog.radius.at(v);
    }
    return p.substitute(sub);
}

// multiplier-expanded subtraction: expr -= sum_i lambda_i * g_i with fresh
// degree-d SOS multipliers over `mult_vars`
void subtract_multipliers(SosProgram& prog, DecisionPoly& expr,
                          const std::vector<Polynomial>& gs_z,
                          const std::vector<std::string>& mult_vars, unsigned mult_deg,
                          const std::vector<std::string>& space, const std::string& name) {
    MonomialBasis mb = make_basis(mult_vars, mult_deg / 2);
    int idx = 0;
    for (const auto& g : gs_z) {
        GramBlock& blk = prog.add_gram(name + "_mult" + std::to_string(idx++), mb);
        for (std::size_t i = 0; i < mb.size(); ++i)
            for (std::size_t j = i; j < mb.size(); ++j) {
                Polynomial known = mb.monomial(i) * mb.monomial(j) * g;
                double w = i == j ? 1.0 : 2.0;
                expr.accumulate(known, blk.var_of(static_cast<int>(i), static_cast<int>(j)), -w,
                                space);
            }
    }
}

unsigned decision_poly_degree(const DecisionPoly& p) {
    unsigned d = 0;
    for (const auto& [mono, aff] : p.coeffs()) {
        unsigned t = 0;
        for (auto e : mono) t += e;
        d = std::max(d, t);
    }
    return d;
}

}  // namespace

SosProgram build_sos_program(const std::vector<ConditionalInvariance>& cis,
                             const AugmentedSystem& aug, const std::vector<Quant>& prefix,
                             const Degrees& degrees, double epsilon) {
    if (degrees.multiplier % 2 != 0) throw SosError("multiplier degree must be even");
    SosProgram prog;
    prog.epsilon = epsilon;

    // normalization from the state/input boxes
    auto sbox = aug.state_set.bounding_box();
    if (!sbox) throw SosError("state set needs box bounds for synthesis");
    std::optional<Box> ibox;
    if (!aug.input_vars.empty()) {
        ibox = aug.input_set.bounding_box();
        if (!ibox) throw SosError("input set needs box bounds for synthesis");
    }
    auto note_box = [&](const Box& b) {
        for (std::size_t i = 0; i < b.vars.size(); ++i) {
            double lo = b.range[i].first, hi = b.range[i].second;
            if (!(hi > lo)) throw SosError("degenerate box for variable " + b.vars[i]);
            prog.center[b.vars[i]] = 0.5 * (lo + hi);
            prog.radius[b.vars[i]] = 0.5 * (hi - lo);
        }
    };
    note_box(*sbox);
    if (ibox) note_box(*ibox);

    std::vector<std::string> zstate, zinput;
    for (const auto& v : aug.state_vars) zstate.push_back("z_" + v);
    for (const auto& v : aug.input_vars) zinput.push_back("z_" + v);
    std::vector<std::string> zall = zstate;
    zall.insert(zall.end(), zinput.begin(), zinput.end());
    prog.zvars = zall;

    // decision polynomials: B over the state copy variables
    prog.b_basis = make_basis(zstate, degrees.certificate);
    prog.b_first = prog.total_vars;
    for (std::size_t i = 0; i < prog.b_basis.size(); ++i) prog.add_free();

    // strategies for existential inputs: full state plus inputs of earlier
    // quantifier indices
    std::vector<std::string> exist_inputs;
    for (int i = 1; i <= aug.p; ++i) {
        Quant q = i - 1 < static_cast<int>(prefix.size()) ? prefix[i - 1] : Quant::Forall;
        if (q != Quant::Exists) continue;
        for (const auto& w : aug.copy_input_vars(i)) {
            std::vector<std::string> args = zstate;
            for (int k = 1; k < i; ++k)
                for (const auto& wk : aug.copy_input_vars(k)) args.push_back("z_" + wk);
            MonomialBasis hb = make_basis(args, degrees.strategy);
            int first = prog.total_vars;
            for (std::size_t j = 0; j < hb.size(); ++j) prog.add_free();
            prog.h_bases.emplace("z_" + w, std::make_pair(std::move(hb), first));
            exist_inputs.push_back(w);
        }
    }

    auto add_b = [&](DecisionPoly& expr, double scale) {
        for (std::size_t i = 0; i < prog.b_basis.size(); ++i)
            expr.accumulate(prog.b_basis.monomial(i), prog.b_first + static_cast<int>(i), scale,
                            prog.zvars);
    };

    auto master_basis = [&](const DecisionPoly& expr,
                            const std::vector<std::string>& vars) {
        unsigned deg = decision_poly_degree(expr);
        return make_basis(vars, (deg + 1) / 2);
    };

    // (5)/(6) per conditional invariance and clause
    int ci_idx = 0;
    for (const auto& ci : cis) {
        int clause_idx = 0;
        for (const auto& clause : ci.set_A.clauses) {
            if (clause.provably_empty()) continue;
            std::string name =
                "ci" + std::to_string(ci_idx) + "_init" + std::to_string(clause_idx++);
            DecisionPoly expr;
            add_b(expr, -1.0);  // -B
            std::vector<Polynomial> gs_z;
            for (const auto& g : clause.gs) gs_z.push_back(to_z(g, prog));
            subtract_multipliers(prog, expr, gs_z, zstate, degrees.multiplier, prog.zvars, name);
            prog.coefficient_match(expr, master_basis(expr, zstate), name);
        }
        clause_idx = 0;
        for (const auto& clause : ci.set_B.clauses) {
            if (clause.provably_empty()) continue;
            std::string name =
                "ci" + std::to_string(ci_idx) + "_unsafe" + std::to_string(clause_idx++);
            DecisionPoly expr;
            add_b(expr, 1.0);  // B - eps
            expr.accumulate(Polynomial::constant(epsilon), -1, -1.0, prog.zvars);
            std::vector<Polynomial> gs_z;
            for (const auto& g : clause.gs) gs_z.push_back(to_z(g, prog));
            subtract_multipliers(prog, expr, gs_z, zstate, degrees.multiplier, prog.zvars, name);
            prog.coefficient_match(expr, master_basis(expr, zstate), name);
        }
        ++ci_idx;
    }

    // (7), shared across all invariances: -B(f^p) + B - lambda g - lambda_in g_in
    //      - sum over existential inputs of (w - h)
    {
        DecisionPoly expr;
        add_b(expr, 1.0);  // +B

        // z-space dynamics: z_i' = (f_i(x(z), w(z)) - c_i) / r_i
        std::map<std::string, Polynomial> zdyn;
        for (std::size_t i = 0; i < aug.state_vars.size(); ++i) {
            const std::string& xv = aug.state_vars[i];
            Polynomial fz = to_z(aug.f[i], prog);
            fz = (fz - Polynomial::constant(prog.center.at(xv))) * (1.0 / prog.radius.at(xv));
            zdyn["z_" + xv] = std::move(fz);
        }
        // -B(f): each B basis monomial composed with the dynamics
        for (std::size_t i = 0; i < prog.b_basis.size(); ++i) {
            Polynomial composed = prog.b_basis.monomial(i).substitute(zdyn);
            expr.accumulate(composed, prog.b_first + static_cast<int>(i), -1.0, prog.zvars);
        }

        std::vector<Polynomial> g_z, gin_z;
        for (const auto& g : aug.state_set.gs) g_z.push_back(to_z(g, prog));
        for (const auto& g : aug.input_set.gs) gin_z.push_back(to_z(g, prog));
        subtract_multipliers(prog, expr, g_z, zall, degrees.multiplier, prog.zvars, "dec_state");
        if (!gin_z.empty())
            subtract_multipliers(prog, expr, gin_z, zall, degrees.multiplier, prog.zvars,
                                 "dec_input");

        // -(w - h) per existential input, fixed unit multiplier
        for (const auto& w : exist_inputs) {
            const auto& [hb, first] = prog.h_bases.at("z_" + w);
            expr.accumulate(Polynomial::variable("z_" + w), -1, -1.0, prog.zvars);
            for (std::size_t j = 0; j < hb.size(); ++j)
                expr.accumulate(hb.monomial(j), first + static_cast<int>(j), 1.0, prog.zvars);
        }
        prog.coefficient_match(expr, master_basis(expr, zall), "dec_master");
    }
    return prog;
}

CertificateCandidate reconstruct_certificate(const SdpSolution& sol, const SosProgram& prog) {
    // free values live in the trailing diagonal block as (u, v) pairs
    if (sol.blocks.size() != prog.blocks.size() + 1)
        throw SosError("solution block count mismatch");
    const Eigen::MatrixXd& diag = sol.blocks.back();
    auto free_value = [&](int idx) {
        return diag(2 * idx, 2 * idx) - diag(2 * idx + 1, 2 * idx + 1);
    };

    // back-substitution z -> (x - c)/r
    std::map<std::string, Polynomial> unz;
    for (const auto& [xv, c] : prog.center) {
        Polynomial z = (Polynomial::variable(xv) - Polynomial::constant(c)) *
                       (1.0 / prog.radius.at(xv));
        unz["z_" + xv] = std::move(z);
    }

    CertificateCandidate cand;
    cand.epsilon = prog.epsilon;
    Polynomial Bz;
    for (std::size_t i = 0; i < prog.b_basis.size(); ++i)
        Bz = Bz + prog.b_basis.monomial(i) * free_value(prog.b_first + static_cast<int>(i));
    cand.B = Bz.substitute(unz);

    for (const auto& [zw, hb_first] : prog.h_bases) {
        const auto& [hb, first] = hb_first;
        Polynomial hz;
        for (std::size_t j = 0; j < hb.size(); ++j)
            hz = hz + hb.monomial(j) * free_value(first + static_cast<int>(j));
        // w = c_w + r_w * h_z(z(x))
        std::string w = zw.substr(2);
        Polynomial hx = Polynomial::constant(prog.center.at(w)) +
                        hz.substitute(unz) * prog.radius.at(w);
        cand.strategies.emplace(w, std::move(hx));
    }
    return cand;
}

}  // namespace hyperbc
