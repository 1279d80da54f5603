#include "hyperbc/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

namespace hyperbc {

using nlohmann::json;

// ---------------------------------------------------------------------------
// spec loading

namespace {

std::vector<Polynomial> parse_gs(const json& arr, const std::vector<std::string>& vars,
                                 const std::string& where) {
    std::vector<Polynomial> out;
    for (const auto& e : arr) {
        try {
            out.push_back(parse_polynomial(e.get<std::string>(), vars));
        } catch (const PolynomialError& err) {
            throw SpecError(where + ": " + err.what());
        }
    }
    return out;
}

}  // namespace

ProblemSpec ProblemSpec::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw SpecError("cannot open problem spec: " + file.string());
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw SpecError("malformed JSON in " + file.string() + ": " + e.what());
    }
    return from_json(j, file.parent_path());
}

ProblemSpec ProblemSpec::from_json(const json& j, const std::filesystem::path& base_dir) {
    ProblemSpec spec;
    spec.base_dir = base_dir;
    spec.name = j.value("name", "unnamed");
    spec.schema_version = j.value("schema_version", 1);
    if (spec.schema_version != 1) throw SpecError("unsupported schema_version");

    const json& sys = j.at("system");
    spec.system.state_vars = sys.at("state_vars").get<std::vector<std::string>>();
    spec.system.input_vars = sys.value("input_vars", std::vector<std::string>{});
    std::vector<std::string> all = spec.system.state_vars;
    all.insert(all.end(), spec.system.input_vars.begin(), spec.system.input_vars.end());
    const json& dyn = sys.at("dynamics");
    for (const auto& v : spec.system.state_vars) {
        if (!dyn.contains(v)) throw SpecError("dynamics missing component for " + v);
        spec.system.f.push_back(parse_polynomial(dyn.at(v).get<std::string>(), all));
    }
    spec.system.state_set = BasicSet::over(spec.system.state_vars);
    for (auto& g : parse_gs(sys.at("state_set"), spec.system.state_vars, "state_set"))
        spec.system.state_set.add(std::move(g));
    spec.system.input_set = BasicSet::over(spec.system.input_vars);
    if (sys.contains("input_set"))
        for (auto& g : parse_gs(sys.at("input_set"), spec.system.input_vars, "input_set"))
            spec.system.input_set.add(std::move(g));
    spec.system.validate();

    std::map<std::string, AtomDecl> decls;
    for (const auto& [name, a] : j.at("atoms").items()) {
        AtomSpec as;
        std::string scope = a.value("scope", "single");
        if (scope == "single") {
            as.decl.scope = AtomDecl::Scope::Single;
            as.decl.arity = 1;
            as.gs = parse_gs(a.at("gs"), spec.system.state_vars, "atom " + name);
        } else if (scope == "joint") {
            as.decl.scope = AtomDecl::Scope::Joint;
            as.decl.arity = a.value("arity", 2);
            std::vector<std::string> slot_vars;
            for (int k = 1; k <= as.decl.arity; ++k)
                for (const auto& v : spec.system.state_vars)
                    slot_vars.push_back(copy_name(v, k));
            as.gs = parse_gs(a.at("gs"), slot_vars, "atom " + name);
        } else {
            throw SpecError("atom " + name + ": scope must be single or joint");
        }
        decls[name] = as.decl;
        spec.atoms.emplace(name, std::move(as));
    }

    spec.formula_src = j.at("formula").get<std::string>();
    try {
        spec.formula = parse_hyperltl(spec.formula_src, decls);
    } catch (const FormulaError& e) {
        throw SpecError(std::string("formula: ") + e.what());
    }

    if (j.contains("options")) {
        const json& o = j.at("options");
        if (o.contains("degrees")) {
            spec.options.degrees.certificate = o.at("degrees").value("B", 2u);
            spec.options.degrees.multiplier = o.at("degrees").value("lambda", 2u);
            spec.options.degrees.strategy = o.at("degrees").value("h", 2u);
        }
        spec.options.epsilon = o.value("epsilon", 1e-2);
        spec.options.negation_gap = o.value("negation_gap", 1e-2);
        spec.options.synth_tol = o.value("synthesis_tolerance", 1e-6);
        spec.options.samples.grid_per_dim = o.value("grid_points_per_dim", 20);
        spec.options.samples.random_samples = o.value("random_samples", 10000L);
        spec.options.samples.seed = o.value("seed", std::uint64_t{0x5eed});
        spec.options.samples.tol = o.value("check_tolerance", 1e-8);
        spec.options.overlap_budget = o.value("overlap_budget", 4000L);
        spec.options.oracle_budget = o.value("oracle_budget", 64);
        spec.options.sdp_solver = o.value("sdp_solver", "");
        spec.options.assumed_unreachable_initial_guards =
            o.value("assumed_unreachable_initial_guards", std::vector<std::string>{});
        spec.options.automaton_override = o.value("automaton_override", "");
    }
    return spec;
}

std::string ProblemSpec::resolved_solver() const {
    if (!options.sdp_solver.empty()) {
        std::filesystem::path p = options.sdp_solver;
        if (p.is_relative() && std::filesystem::exists(base_dir / p))
            return (base_dir / p).string();
        return options.sdp_solver;
    }
    if (const char* env = std::getenv("HYPERBC_SDP_SOLVER")) return env;
    return "";
}

// ---------------------------------------------------------------------------
// instance

Instance::Instance(const ProblemSpec& s) : spec(s) {
    const int p = spec.formula.trace_count();
    if (p < 1) throw SpecError("formula needs at least one trace quantifier");
    aug = self_compose(spec.system, p);
    for (const auto& [q, v] : spec.formula.prefix) prefix.push_back(q);
    negated_body = negate_to_nnf(spec.formula.body);

    if (!spec.options.automaton_override.empty()) {
        std::filesystem::path path = spec.base_dir / spec.options.automaton_override;
        std::ifstream in(path);
        if (!in) throw SpecError("cannot open automaton override: " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        override_aut = hoa_import(buf.str());
        // every AP must resolve against the declared atoms
        const std::vector<Edge>* edges =
            std::holds_alternative<BuchiAutomaton>(*override_aut)
                ? &std::get<BuchiAutomaton>(*override_aut).edges
                : &std::get<RabinAutomaton>(*override_aut).edges;
        for (const auto& e : *edges)
            for (const auto& a : e.guard.atoms()) atom_basic_set(a);
    }
}

bool Instance::has_rabin_override() const {
    return override_aut && std::holds_alternative<RabinAutomaton>(*override_aut);
}

const RabinAutomaton& Instance::rabin_override() const {
    return std::get<RabinAutomaton>(*override_aut);
}

BuchiAutomaton Instance::negation_automaton() const {
    if (override_aut) {
        if (!std::holds_alternative<BuchiAutomaton>(*override_aut))
            throw SpecError("automaton override is not a Büchi automaton");
        return std::get<BuchiAutomaton>(*override_aut);
    }
    return ltl_to_nba(negated_body);
}

BasicSet Instance::atom_basic_set(const AtomRef& a) const {
    auto it = spec.atoms.find(a.name);
    if (it == spec.atoms.end()) throw SpecError("undeclared atom in guard: " + a.key());
    const AtomSpec& as = it->second;
    std::map<std::string, std::string> rename;
    if (as.decl.scope == AtomDecl::Scope::Single) {
        if (a.traces.size() != 1)
            throw SpecError("atom " + a.name + " is single-trace; got " + a.key());
        int copy = spec.formula.copy_index(a.traces[0]);
        for (const auto& v : spec.system.state_vars) rename[v] = copy_name(v, copy);
    } else {
        if (static_cast<int>(a.traces.size()) != as.decl.arity)
            throw SpecError("atom " + a.name + " expects arity " +
                            std::to_string(as.decl.arity) + "; got " + a.key());
        for (int slot = 1; slot <= as.decl.arity; ++slot) {
            int copy = spec.formula.copy_index(a.traces[slot - 1]);
            for (const auto& v : spec.system.state_vars)
                rename[copy_name(v, slot)] = copy_name(v, copy);
        }
    }
    BasicSet out = BasicSet::over(aug.state_vars);
    for (const auto& g : as.gs) out.add(g.renamed(rename));
    return out;
}

SemialgebraicRegion Instance::region_of_atom(const AtomRef& a, bool positive) const {
    BasicSet base = atom_basic_set(a);
    if (positive) return SemialgebraicRegion::of(std::move(base));
    return complement(base, spec.options.negation_gap);
}

SemialgebraicRegion Instance::region_of_guard(const Guard& g) const {
    SemialgebraicRegion box = SemialgebraicRegion::of(aug.state_set);
    auto cubes = to_dnf(g);
    SemialgebraicRegion out = SemialgebraicRegion::empty(aug.state_vars);
    out.clauses.clear();
    for (const auto& cube : cubes) {
        SemialgebraicRegion r = box;
        for (const auto& [atom, positive] : cube.lits)
            r = r.intersect(region_of_atom(atom, positive));
        out = out.unite(r);
    }
    if (cubes.empty()) return SemialgebraicRegion::empty(aug.state_vars);
    return out.pruned();
}

ConditionalInvariance Instance::make_ci(const TransitionPair& tp) const {
    ConditionalInvariance ci;
    ci.prefix = prefix;
    ci.set_A = region_of_guard(tp.s_A);
    ci.set_B = region_of_guard(tp.s_B);
    ci.provenance = tp.str();
    return ci;
}

// ---------------------------------------------------------------------------
// report serialization

namespace {

json witness_json(const std::map<std::string, double>& w) {
    json j = json::object();
    for (const auto& [k, v] : w) j[k] = v;
    return j;
}

json check_json(const CheckReport& r) {
    json j;
    j["condition"] = r.condition;
    j["verdict"] = verdict_name(r.verdict);
    j["samples"] = r.samples;
    j["worst_violation"] = r.worst_violation;
    j["witness"] = witness_json(r.witness);
    j["seed"] = r.seed;
    j["tolerance"] = r.tol;
    if (!r.note.empty()) j["note"] = r.note;
    if (r.strategy_infeasible > 0 || !r.strategy_witness.empty()) {
        j["strategy_infeasible_samples"] = r.strategy_infeasible;
        j["worst_strategy_violation"] = r.worst_strategy_violation;
        j["strategy_witness"] = witness_json(r.strategy_witness);
    }
    return j;
}

}  // namespace

json VerificationReport::to_json(bool include_timing) const {
    json j;
    j["verdict"] = verdict == Verdict::Satisfied ? "SATISFIED" : "INCONCLUSIVE";
    j["algorithm"] = algorithm;
    if (!cause.empty()) j["cause"] = cause;
    j["flags"] = flags;
    j["seed"] = seed;
    j["automaton"] = {{"states", automaton_states},
                      {"deterministic", automaton_deterministic},
                      {"source", automaton_source}};
    json ls = json::array();
    for (const auto& l : lassos) {
        json lj;
        lj["id"] = l.id;
        lj["states"] = l.states;
        lj["resolution"] = l.resolution;
        if (l.certificate >= 0) lj["certificate"] = l.certificate;
        json ps = json::array();
        for (const auto& p : l.pairs) {
            json pj;
            pj["s_A"] = p.s_A;
            pj["s_B"] = p.s_B;
            pj["status"] = p.status;
            if (!p.witness.empty()) pj["witness"] = witness_json(p.witness);
            ps.push_back(pj);
        }
        lj["pairs"] = ps;
        ls.push_back(lj);
    }
    j["lassos"] = ls;
    json cs = json::array();
    for (const auto& c : certificates) {
        json cj;
        cj["B"] = c.candidate.B.str();
        json st = json::object();
        for (const auto& [w, h] : c.candidate.strategies) st[w] = h.str();
        cj["strategies"] = st;
        cj["epsilon"] = c.candidate.epsilon;
        cj["pairs"] = c.pair_keys;
        cj["gram"] = {{"ok", c.gram.ok},
                      {"min_eigenvalue", c.gram.min_eigenvalue},
                      {"max_equality_residual", c.gram.max_equality_residual}};
        json ch = json::array();
        for (const auto& r : c.checks) ch.push_back(check_json(r));
        cj["checks"] = ch;
        cj["all_passed"] = c.all_passed;
        cs.push_back(cj);
    }
    j["certificates"] = cs;
    j["oracle_calls"] = oracle_calls;
    if (include_timing) j["timing"] = {{"wall_seconds", wall_seconds}};
    return j;
}

// ---------------------------------------------------------------------------
// shared verification machinery

namespace {

struct PairWork {
    TransitionPair tp;
    std::string key;  // canonical identity for memoization
    ConditionalInvariance ci;
    std::string status;  // eligible | overlap-witness | vacuous-empty-region
    std::map<std::string, double> witness;
};

struct Engine {
    const Instance& inst;
    VerificationReport& report;
    std::string solver;
    std::map<std::string, PairWork> pair_cache;       // key -> work item
    std::map<std::string, std::optional<int>> oracle_memo;  // selection key -> cert idx
    long oracle_calls = 0;

    Engine(const Instance& i, VerificationReport& r) : inst(i), report(r) {
        solver = i.spec.resolved_solver();
    }

    static std::string pair_key(const TransitionPair& tp) {
        return tp.s_A.str() + " => " + tp.s_B.str();
    }

    PairWork& classify_pair(const TransitionPair& tp) {
        std::string key = pair_key(tp);
        auto it = pair_cache.find(key);
        if (it != pair_cache.end()) return it->second;
        PairWork w;
        w.tp = tp;
        w.key = key;
        w.ci = inst.make_ci(tp);
        if (w.ci.set_A.clauses.empty() || w.ci.set_B.clauses.empty()) {
            // an empty guard region makes the conditional invariance hold
            // trivially; the pair denies its lassos for free
            w.status = "vacuous-empty-region";
        } else {
            auto witness = region_overlap_witness(w.ci.set_A, w.ci.set_B,
                                                  inst.spec.options.overlap_budget,
                                                  inst.spec.options.samples.seed);
            if (witness) {
                w.status = "overlap-witness";
                w.witness = *witness;
            } else {
                w.status = "eligible";
            }
        }
        return pair_cache.emplace(key, std::move(w)).first->second;
    }

    // feasibility oracle: one SOS program for a joint set of pairs; returns
    // the certificate index on success
    std::optional<int> common_certificate(const std::set<std::string>& keys) {
        std::string memo_key;
        for (const auto& k : keys) memo_key += k + " ;; ";
        auto it = oracle_memo.find(memo_key);
        if (it != oracle_memo.end()) return it->second;
        if (oracle_calls >= inst.spec.options.oracle_budget) return std::nullopt;
        ++oracle_calls;

        std::vector<ConditionalInvariance> cis;
        std::vector<std::string> pair_keys(keys.begin(), keys.end());
        for (const auto& k : keys) cis.push_back(pair_cache.at(k).ci);

        std::optional<int> result;
        try {
            SosProgram prog = build_sos_program(cis, inst.aug, inst.prefix,
                                                inst.spec.options.degrees,
                                                inst.spec.options.epsilon);
            SdpProblem sdp = to_sdp_problem(prog);
            SolveOutcome solved = solve_sdp(sdp, solver);
            if (solved.status == SolveOutcome::Status::Unavailable) {
                report.cause = "solver-missing";
            } else if (solved.status == SolveOutcome::Status::Feasible) {
                GramValidation gram = validate_gram(*solved.solution, prog,
                                                    inst.spec.options.synth_tol);
                CertificateCandidate cand = reconstruct_certificate(*solved.solution, prog);
                CertificateRecord rec;
                rec.candidate = cand;
                rec.pair_keys = pair_keys;
                rec.gram = gram;
                SampleConfig cfg = inst.spec.options.samples;
                cfg.tol = inst.spec.options.synth_tol;
                bool ok = gram.ok;
                for (const auto& ci : cis) {
                    auto checks = check_ci(cand, ci, inst.aug, cfg);
                    for (auto& c : checks) {
                        ok = ok && c.passed();
                        rec.checks.push_back(std::move(c));
                    }
                }
                rec.all_passed = ok;
                if (ok) {
                    report.certificates.push_back(std::move(rec));
                    result = static_cast<int>(report.certificates.size()) - 1;
                } else {
                    // numerically rejected solutions still land in the report
                    report.certificates.push_back(std::move(rec));
                }
            }
        } catch (const SosError&) {
            // degree-deficit or unbounded-set conditions: infeasible for us
        }
        oracle_memo[memo_key] = result;
        return result;
    }
};

// guard of the first stem edge (the label read at the initial position)
const Guard* first_guard(const Lasso& l) {
    if (!l.stem_guards.empty()) return &l.stem_guards.front();
    if (!l.cycle_guards.empty()) return &l.cycle_guards.front();
    return nullptr;
}

bool assumed_unreachable(const Instance& inst, const Lasso& l) {
    const Guard* g = first_guard(l);
    if (!g) return false;
    for (const auto& s : inst.spec.options.assumed_unreachable_initial_guards) {
        Guard assumed = parse_guard(s);
        if (equivalent(*g, assumed)) return true;
    }
    return false;
}

}  // namespace

std::optional<std::vector<int>> selection_search(
    const std::vector<std::vector<std::string>>& pair_keys_per_lasso,
    const std::function<bool(const std::set<std::string>&)>& oracle, int budget) {
    for (const auto& choices : pair_keys_per_lasso)
        if (choices.empty()) return std::nullopt;

    // enumerate index tuples, order by distinct-pair count
    struct Candidate {
        std::vector<int> pick;
        std::set<std::string> keys;
    };
    std::vector<Candidate> cands;
    std::vector<int> pick(pair_keys_per_lasso.size(), 0);
    const std::size_t cap = 4096;
    for (;;) {
        Candidate c;
        c.pick = pick;
        for (std::size_t i = 0; i < pick.size(); ++i)
            c.keys.insert(pair_keys_per_lasso[i][pick[i]]);
        cands.push_back(std::move(c));
        if (cands.size() >= cap) break;
        std::size_t i = 0;
        while (i < pick.size() &&
               ++pick[i] >= static_cast<int>(pair_keys_per_lasso[i].size()))
            pick[i++] = 0;
        if (i == pick.size()) break;
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return a.keys.size() < b.keys.size();
    });
    std::set<std::set<std::string>> seen;
    int calls = 0;
    for (const auto& c : cands) {
        if (!seen.insert(c.keys).second) continue;
        if (calls++ >= budget) return std::nullopt;
        if (oracle(c.keys)) return c.pick;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Algorithm 1 shape: one common certificate for a selection of pairs

VerificationReport verify_general(const ProblemSpec& spec) {
    auto t0 = std::chrono::steady_clock::now();
    Instance inst(spec);
    VerificationReport report;
    report.algorithm = "general";
    report.seed = spec.options.samples.seed;
    report.automaton_source = spec.options.automaton_override.empty() ? "constructed" : "override";

    BuchiAutomaton aut = prune(inst.negation_automaton());
    report.automaton_states = aut.num_states;
    report.automaton_deterministic = aut.empty() ? true : is_deterministic(aut);
    if (aut.empty()) {
        report.verdict = VerificationReport::Verdict::Satisfied;
        report.flags.push_back("vacuous-empty-automaton");
        report.wall_seconds = std::chrono::duration<double>(
            std::chrono::steady_clock::now() - t0).count();
        return report;
    }

    auto lassos = enumerate_lassos(aut);
    Engine eng(inst, report);

    // classify pairs; collect eligible choices per lasso
    std::vector<std::vector<std::string>> eligible(lassos.size());
    std::vector<int> undischarged;
    for (std::size_t li = 0; li < lassos.size(); ++li) {
        LassoLedger ledger;
        ledger.id = static_cast<int>(li);
        ledger.states = lassos[li].str();
        bool vacuous = false;
        for (const auto& tp : transition_pairs(lassos[li], static_cast<int>(li))) {
            PairWork& w = eng.classify_pair(tp);
            PairLedger pl;
            pl.s_A = tp.s_A.str();
            pl.s_B = tp.s_B.str();
            pl.states = tp.states;
            pl.status = w.status;
            pl.witness = w.witness;
            ledger.pairs.push_back(std::move(pl));
            if (w.status == "vacuous-empty-region") vacuous = true;
            if (w.status == "eligible") eligible[li].push_back(w.key);
        }
        if (vacuous) {
            ledger.resolution = "vacuous-empty-region";
        } else if (assumed_unreachable(inst, lassos[li])) {
            ledger.resolution = "assumed-unreachable-initial";
        } else {
            ledger.resolution = "undischarged";
            undischarged.push_back(static_cast<int>(li));
        }
        report.lassos.push_back(std::move(ledger));
    }

    std::vector<std::vector<std::string>> need;
    for (int li : undischarged) need.push_back(eligible[li]);

    bool no_pair = std::any_of(need.begin(), need.end(),
                               [](const auto& v) { return v.empty(); });
    if (no_pair) {
        report.verdict = VerificationReport::Verdict::Inconclusive;
        report.cause = "no-pair";
        for (std::size_t i = 0; i < need.size(); ++i)
            if (need[i].empty())
                report.flags.push_back("lasso " + std::to_string(undischarged[i]) +
                                       " has no eligible pair");
    } else if (!undischarged.empty()) {
        std::optional<int> cert;
        auto pick = selection_search(
            need,
            [&](const std::set<std::string>& keys) {
                auto r = eng.common_certificate(keys);
                if (r) cert = r;
                return r.has_value();
            },
            spec.options.oracle_budget);
        if (pick && cert) {
            for (std::size_t i = 0; i < undischarged.size(); ++i) {
                report.lassos[undischarged[i]].resolution = "certificate";
                report.lassos[undischarged[i]].certificate = *cert;
            }
            report.verdict = VerificationReport::Verdict::Satisfied;
        } else {
            report.verdict = VerificationReport::Verdict::Inconclusive;
            if (report.cause.empty()) report.cause = "sdp-infeasible";
        }
    } else {
        report.verdict = VerificationReport::Verdict::Satisfied;
    }

    report.oracle_calls = eng.oracle_calls;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

// ---------------------------------------------------------------------------
// Algorithms 2-3 shape: breadth-first per-state certificate discovery

ScheduleOutcome forall_exists_schedule(
    int num_states, int initial, const std::vector<Edge>& edges,
    const std::vector<Lasso>& lassos,
    const std::function<SchedulePairInfo(const TransitionPair&)>& classify_pair,
    const std::function<std::optional<int>(const std::set<std::string>&)>& oracle,
    const std::vector<bool>& pre_denied) {
    ScheduleOutcome out;
    out.lasso_resolution.assign(lassos.size(), "undischarged");
    out.lasso_certificate.assign(lassos.size(), -1);
    std::vector<bool> denied(lassos.size(), false);
    for (std::size_t i = 0; i < lassos.size() && i < pre_denied.size(); ++i)
        if (pre_denied[i]) {
            denied[i] = true;
            out.lasso_resolution[i] = "assumed-unreachable-initial";
        }

    auto any_remaining = [&]() {
        return std::any_of(denied.begin(), denied.end(), [](bool d) { return !d; });
    };

    auto abc_find = [&](int r) {
        for (const auto& e : edges) {
            if (e.src != r) continue;
            int r1 = e.dst;
            struct Item {
                std::string key;
                std::array<int, 3> states;
            };
            std::vector<Item> S;
            for (const auto& e2 : edges) {
                if (e2.src != r1) continue;
                TransitionPair tp;
                tp.s_A = e.guard;
                tp.s_B = e2.guard;
                tp.states = {r, r1, e2.dst};
                bool on_remaining = false;
                for (std::size_t li = 0; li < lassos.size(); ++li)
                    if (!denied[li] && lassos[li].has_triple(r, r1, e2.dst))
                        on_remaining = true;
                if (!on_remaining) continue;
                SchedulePairInfo info = classify_pair(tp);
                if (info.status == SchedulePairInfo::Status::Vacuous) {
                    for (std::size_t li = 0; li < lassos.size(); ++li)
                        if (!denied[li] && lassos[li].has_triple(r, r1, e2.dst)) {
                            denied[li] = true;
                            out.lasso_resolution[li] = "vacuous-empty-region";
                        }
                } else if (info.status == SchedulePairInfo::Status::Eligible) {
                    bool dup = std::any_of(S.begin(), S.end(),
                                           [&](const Item& it) { return it.key == info.key; });
                    if (!dup) S.push_back({info.key, tp.states});
                }
            }
            if (S.empty()) continue;
            // greedy shrink: all of S first, then subsets dropping pairs
            std::vector<std::vector<int>> subsets;
            for (std::size_t size = S.size(); size >= 1; --size) {
                std::vector<bool> mask(S.size(), false);
                std::fill(mask.begin(), mask.begin() + size, true);
                do {
                    std::vector<int> sub;
                    for (std::size_t i = 0; i < S.size(); ++i)
                        if (mask[i]) sub.push_back(static_cast<int>(i));
                    subsets.push_back(std::move(sub));
                } while (std::prev_permutation(mask.begin(), mask.end()));
            }
            for (const auto& sub : subsets) {
                std::set<std::string> keys;
                for (int i : sub) keys.insert(S[i].key);
                ++out.oracle_calls;
                auto cert = oracle(keys);
                if (!cert) continue;
                for (int i : sub) {
                    for (std::size_t li = 0; li < lassos.size(); ++li) {
                        if (!denied[li] && lassos[li].has_triple(S[i].states[0], S[i].states[1],
                                                                 S[i].states[2])) {
                            denied[li] = true;
                            out.lasso_resolution[li] = "certificate";
                            out.lasso_certificate[li] = *cert;
                        }
                    }
                }
                break;
            }
        }
    };

    std::vector<int> visited(num_states, 0);
    std::vector<int> frontier{initial};
    if (initial < num_states) visited[initial] = 1;
    while (!frontier.empty() && any_remaining()) {
        std::vector<int> next;
        for (int r : frontier) {
            abc_find(r);
            if (!any_remaining()) break;
            for (const auto& e : edges) {
                if (e.src != r || visited[e.dst]) continue;
                bool live = false;
                for (std::size_t li = 0; li < lassos.size(); ++li)
                    if (!denied[li] && lassos[li].has_edge(r, e.dst)) live = true;
                if (live) {
                    visited[e.dst] = 1;
                    next.push_back(e.dst);
                }
            }
        }
        frontier = std::move(next);
    }
    return out;
}

namespace {

template <typename Automaton>
VerificationReport forall_exists_core(const ProblemSpec& spec, Instance& inst,
                                      const Automaton& aut, std::vector<Lasso> lassos,
                                      const char* algorithm) {
    auto t0 = std::chrono::steady_clock::now();
    VerificationReport report;
    report.algorithm = algorithm;
    report.seed = spec.options.samples.seed;
    report.automaton_source = spec.options.automaton_override.empty() ? "constructed" : "override";
    report.automaton_states = aut.num_states;

    FragmentClass frag = classify(spec.formula);
    if (!frag.forall_exists_shaped()) {
        report.verdict = VerificationReport::Verdict::Inconclusive;
        report.cause = "not-forall-exists";
        return report;
    }
    report.automaton_deterministic = is_deterministic(aut);
    if (!report.automaton_deterministic) {
        report.verdict = VerificationReport::Verdict::Inconclusive;
        report.cause = "nondeterministic-automaton";
        report.flags.push_back(
            "per-lasso certificates need a deterministic automaton; use the general "
            "algorithm or supply a deterministic override");
        return report;
    }

    Engine eng(inst, report);
    for (std::size_t li = 0; li < lassos.size(); ++li) {
        LassoLedger ledger;
        ledger.id = static_cast<int>(li);
        ledger.states = lassos[li].str();
        ledger.resolution = "undischarged";
        report.lassos.push_back(std::move(ledger));
    }
    std::vector<bool> pre_denied(lassos.size(), false);
    for (std::size_t li = 0; li < lassos.size(); ++li)
        pre_denied[li] = assumed_unreachable(inst, lassos[li]);

    auto classify_pair = [&](const TransitionPair& tp) {
        PairWork& w = eng.classify_pair(tp);
        // ledger bookkeeping on every lasso carrying the triple
        for (std::size_t li = 0; li < lassos.size(); ++li) {
            if (!lassos[li].has_triple(tp.states[0], tp.states[1], tp.states[2])) continue;
            auto& pairs = report.lassos[li].pairs;
            bool known = std::any_of(pairs.begin(), pairs.end(), [&](const PairLedger& p) {
                return p.s_A == tp.s_A.str() && p.s_B == tp.s_B.str();
            });
            if (!known) {
                PairLedger pl;
                pl.s_A = tp.s_A.str();
                pl.s_B = tp.s_B.str();
                pl.states = tp.states;
                pl.status = w.status;
                pl.witness = w.witness;
                pairs.push_back(std::move(pl));
            }
        }
        SchedulePairInfo info;
        info.tp = tp;
        info.key = w.key;
        info.status = w.status == "eligible" ? SchedulePairInfo::Status::Eligible
                      : w.status == "vacuous-empty-region" ? SchedulePairInfo::Status::Vacuous
                                                           : SchedulePairInfo::Status::Ineligible;
        return info;
    };
    auto oracle = [&](const std::set<std::string>& keys) { return eng.common_certificate(keys); };

    ScheduleOutcome sched = forall_exists_schedule(aut.num_states, aut.initial, aut.edges,
                                                   lassos, classify_pair, oracle, pre_denied);

    bool all_denied = true;
    for (std::size_t li = 0; li < lassos.size(); ++li) {
        report.lassos[li].resolution = sched.lasso_resolution[li];
        report.lassos[li].certificate = sched.lasso_certificate[li];
        if (sched.lasso_resolution[li] == "undischarged") {
            all_denied = false;
            report.flags.push_back("lasso " + std::to_string(li) + " " + lassos[li].str() +
                                   " could not be denied");
        }
    }
    if (all_denied) {
        report.verdict = VerificationReport::Verdict::Satisfied;
    } else {
        report.verdict = VerificationReport::Verdict::Inconclusive;
        if (report.cause.empty())
            report.cause = eng.solver.empty() ? "solver-missing" : "sdp-infeasible";
    }
    report.oracle_calls = eng.oracle_calls;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace

VerificationReport verify_forall_exists(const ProblemSpec& spec) {
    Instance inst(spec);
    BuchiAutomaton aut = prune(inst.negation_automaton());
    if (aut.empty()) {
        VerificationReport report;
        report.algorithm = "forall-exists";
        report.seed = spec.options.samples.seed;
        report.verdict = VerificationReport::Verdict::Satisfied;
        report.flags.push_back("vacuous-empty-automaton");
        report.automaton_source =
            spec.options.automaton_override.empty() ? "constructed" : "override";
        return report;
    }
    auto lassos = enumerate_lassos(aut);
    return forall_exists_core(spec, inst, aut, std::move(lassos), "forall-exists");
}

VerificationReport verify_rabin(const ProblemSpec& spec) {
    Instance inst(spec);
    if (!inst.has_rabin_override())
        throw SpecError("verify_rabin needs a deterministic Rabin automaton override");
    const RabinAutomaton& aut = inst.rabin_override();
    auto lassos = enumerate_lassos_rabin(aut);
    if (lassos.empty()) {
        VerificationReport report;
        report.algorithm = "rabin";
        report.seed = spec.options.samples.seed;
        report.verdict = VerificationReport::Verdict::Satisfied;
        report.flags.push_back("vacuous-no-accepting-lasso");
        report.automaton_source = "override";
        report.automaton_states = aut.num_states;
        report.automaton_deterministic = is_deterministic(aut);
        return report;
    }
    return forall_exists_core(spec, inst, aut, std::move(lassos), "rabin");
}

VerificationReport verify_auto(const ProblemSpec& spec) {
    Instance inst(spec);
    if (inst.has_rabin_override()) return verify_rabin(spec);
    FragmentClass frag = classify(spec.formula);
    if (frag.forall_exists_shaped()) {
        BuchiAutomaton aut = prune(inst.negation_automaton());
        if (aut.empty() || is_deterministic(aut)) return verify_forall_exists(spec);
    }
    return verify_general(spec);
}

}  // namespace hyperbc
