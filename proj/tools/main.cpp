// hyperbc command-line front end: parse specs, inspect automata and lasso
// decompositions, synthesize certificates, check candidates, run the full
// verification pipeline, and replay the checks recorded in a report.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hyperbc/pipeline.hpp"

using namespace hyperbc;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        out << j.dump(2) << "\n";
    }
}

json lasso_json(const BuchiAutomaton&, const std::vector<Lasso>& lassos) {
    json out = json::array();
    for (std::size_t i = 0; i < lassos.size(); ++i) {
        json lj;
        lj["id"] = i;
        lj["states"] = lassos[i].str();
        if (lassos[i].rabin_pair >= 0) lj["rabin_pair"] = lassos[i].rabin_pair;
        json pairs = json::array();
        for (const auto& tp : transition_pairs(lassos[i], static_cast<int>(i)))
            pairs.push_back({{"s_A", tp.s_A.str()}, {"s_B", tp.s_B.str()}});
        lj["pairs"] = pairs;
        out.push_back(lj);
    }
    return out;
}

CertificateCandidate candidate_from_json(const json& j, const AugmentedSystem& aug) {
    CertificateCandidate cand;
    std::vector<std::string> vars = aug.state_vars;
    vars.insert(vars.end(), aug.input_vars.begin(), aug.input_vars.end());
    cand.B = parse_polynomial(j.at("B").get<std::string>(), aug.state_vars);
    cand.epsilon = j.value("epsilon", 0.0);
    if (j.contains("strategies"))
        for (const auto& [w, h] : j.at("strategies").items())
            cand.strategies.emplace(w, parse_polynomial(h.get<std::string>(), vars));
    return cand;
}

// eligible conditional invariances of a spec, in lasso/pair order
std::vector<std::pair<std::string, ConditionalInvariance>> eligible_cis(const Instance& inst) {
    BuchiAutomaton aut = prune(inst.negation_automaton());
    std::vector<std::pair<std::string, ConditionalInvariance>> out;
    std::set<std::string> seen;
    for (const auto& lasso : enumerate_lassos(aut)) {
        for (const auto& tp : transition_pairs(lasso)) {
            std::string key = tp.str();
            if (!seen.insert(key).second) continue;
            ConditionalInvariance ci = inst.make_ci(tp);
            if (ci.set_A.clauses.empty() || ci.set_B.clauses.empty()) continue;
            if (region_overlap_witness(ci.set_A, ci.set_B, inst.spec.options.overlap_budget,
                                       inst.spec.options.samples.seed))
                continue;
            out.emplace_back(key, std::move(ci));
        }
    }
    return out;
}

int exit_code_of(const VerificationReport& rep) {
    return rep.verdict == VerificationReport::Verdict::Satisfied ? kExitOk : kExitInconclusive;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HyperLTL verification for polynomial systems via augmented barrier certificates"};
    app.require_subcommand(1);

    std::string spec_path, hoa_path, out_path, report_path, candidate_path, algorithm = "auto";
    int lasso_idx = -1, pair_idx = -1;
    bool solve_flag = false;

    auto* cmd_parse = app.add_subcommand("parse", "parse a problem spec and echo AST + fragment");
    cmd_parse->add_option("spec", spec_path, "problem spec JSON")->required();

    auto* cmd_aut = app.add_subcommand("automaton", "emit HOA for the negated-body automaton");
    cmd_aut->add_option("spec", spec_path, "problem spec JSON")->required();
    cmd_aut->add_option("-o,--output", out_path, "output file (default stdout)");

    auto* cmd_lassos = app.add_subcommand("lassos", "list lassos and transition-pair sets");
    cmd_lassos->add_option("input", hoa_path, "HOA file or problem spec JSON")->required();

    auto* cmd_dec = app.add_subcommand("decompose", "conditional invariances with regions");
    cmd_dec->add_option("spec", spec_path, "problem spec JSON")->required();

    auto* cmd_syn = app.add_subcommand("synthesize", "emit SDPA program / solve one invariance");
    cmd_syn->add_option("spec", spec_path, "problem spec JSON")->required();
    cmd_syn->add_option("--pair", pair_idx, "eligible-pair index (default: all jointly)");
    cmd_syn->add_option("-o,--output", out_path, "write the SDPA program here");
    cmd_syn->add_flag("--solve", solve_flag, "run the configured solver and report");

    auto* cmd_check = app.add_subcommand("check", "check a candidate JSON against a spec");
    cmd_check->add_option("candidate", candidate_path, "candidate JSON")->required();
    cmd_check->add_option("spec", spec_path, "problem spec JSON")->required();

    auto* cmd_run = app.add_subcommand("run", "full verification pipeline");
    cmd_run->add_option("spec", spec_path, "problem spec JSON")->required();
    cmd_run->add_option("--report", report_path, "write the report JSON here");
    cmd_run->add_option("--algorithm", algorithm, "auto | general | forall-exists | rabin")
        ->check(CLI::IsMember({"auto", "general", "forall-exists", "rabin"}));

    auto* cmd_audit = app.add_subcommand("audit", "replay every check recorded in a report");
    cmd_audit->add_option("report", report_path, "report JSON")->required();
    cmd_audit->add_option("spec", spec_path, "problem spec JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_parse->parsed()) {
            ProblemSpec spec = ProblemSpec::load(spec_path);
            json j;
            j["name"] = spec.name;
            j["formula"] = spec.formula.str();
            j["fragment"] = classify(spec.formula).str();
            j["traces"] = spec.formula.trace_count();
            j["negated_nnf"] = to_string(negate_to_nnf(spec.formula.body));
            emit(j, "");
            return kExitOk;
        }
        if (cmd_aut->parsed()) {
            ProblemSpec spec = ProblemSpec::load(spec_path);
            Instance inst(spec);
            BuchiAutomaton aut = ltl_to_nba(inst.negated_body);
            if (out_path.empty())
                std::cout << hoa_export(aut);
            else
                std::ofstream(out_path) << hoa_export(aut);
            return kExitOk;
        }
        if (cmd_lassos->parsed()) {
            std::string text = slurp(hoa_path);
            BuchiAutomaton aut;
            if (text.rfind("HOA:", 0) == 0) {
                HoaAutomaton h = hoa_import(text);
                if (std::holds_alternative<RabinAutomaton>(h)) {
                    const auto& ra = std::get<RabinAutomaton>(h);
                    json out = json::array();
                    auto ls = enumerate_lassos_rabin(ra);
                    emit(lasso_json(BuchiAutomaton{}, ls), "");
                    return kExitOk;
                }
                aut = std::get<BuchiAutomaton>(h);
            } else {
                ProblemSpec spec = ProblemSpec::load(hoa_path);
                Instance inst(spec);
                aut = inst.negation_automaton();
            }
            aut = prune(aut);
            emit(lasso_json(aut, enumerate_lassos(aut)), "");
            return kExitOk;
        }
        if (cmd_dec->parsed()) {
            ProblemSpec spec = ProblemSpec::load(spec_path);
            Instance inst(spec);
            BuchiAutomaton aut = prune(inst.negation_automaton());
            json out = json::array();
            for (const auto& lasso : enumerate_lassos(aut)) {
                for (const auto& tp : transition_pairs(lasso)) {
                    ConditionalInvariance ci = inst.make_ci(tp);
                    json cj;
                    cj["pair"] = {{"s_A", tp.s_A.str()}, {"s_B", tp.s_B.str()}};
                    auto region_json = [](const SemialgebraicRegion& r) {
                        json clauses = json::array();
                        for (const auto& c : r.clauses) {
                            json gs = json::array();
                            for (const auto& g : c.gs) gs.push_back(g.str());
                            clauses.push_back(gs);
                        }
                        return clauses;
                    };
                    cj["set_A"] = region_json(ci.set_A);
                    cj["set_B"] = region_json(ci.set_B);
                    out.push_back(cj);
                }
            }
            emit(out, "");
            return kExitOk;
        }
        if (cmd_syn->parsed()) {
            ProblemSpec spec = ProblemSpec::load(spec_path);
            Instance inst(spec);
            auto cis = eligible_cis(inst);
            if (cis.empty()) {
                std::cerr << "no eligible conditional invariance to synthesize for\n";
                return kExitError;
            }
            std::vector<ConditionalInvariance> chosen;
            if (pair_idx >= 0) {
                if (pair_idx >= static_cast<int>(cis.size())) {
                    std::cerr << "pair index out of range (have " << cis.size() << ")\n";
                    return kExitError;
                }
                chosen.push_back(cis[pair_idx].second);
            } else {
                for (auto& [k, ci] : cis) chosen.push_back(ci);
            }
            SosProgram prog = build_sos_program(chosen, inst.aug, inst.prefix,
                                                spec.options.degrees, spec.options.epsilon);
            SdpProblem sdp = to_sdp_problem(prog);
            if (!out_path.empty()) std::ofstream(out_path) << export_sdpa(sdp);
            if (!solve_flag) {
                if (out_path.empty()) std::cout << export_sdpa(sdp);
                return kExitOk;
            }
            SolveOutcome solved = solve_sdp(sdp, spec.resolved_solver());
            if (solved.status != SolveOutcome::Status::Feasible) {
                std::cerr << "synthesis unavailable: " << solved.detail << "\n";
                return solved.status == SolveOutcome::Status::Infeasible ? kExitInconclusive
                                                                         : kExitError;
            }
            GramValidation gram = validate_gram(*solved.solution, prog, spec.options.synth_tol);
            CertificateCandidate cand = reconstruct_certificate(*solved.solution, prog);
            json out;
            out["B"] = cand.B.str();
            json st = json::object();
            for (const auto& [w, h] : cand.strategies) st[w] = h.str();
            out["strategies"] = st;
            out["epsilon"] = cand.epsilon;
            out["gram"] = {{"ok", gram.ok},
                           {"min_eigenvalue", gram.min_eigenvalue},
                           {"max_equality_residual", gram.max_equality_residual}};
            emit(out, "");
            return gram.ok ? kExitOk : kExitError;
        }
        if (cmd_check->parsed()) {
            ProblemSpec spec = ProblemSpec::load(spec_path);
            Instance inst(spec);
            json cj = json::parse(slurp(candidate_path));
            CertificateCandidate cand = candidate_from_json(cj, inst.aug);
            auto cis = eligible_cis(inst);
            if (cis.empty()) {
                std::cerr << "no eligible conditional invariance to check against\n";
                return kExitError;
            }
            SampleConfig cfg = spec.options.samples;
            json out = json::array();
            bool all_pass = true;
            for (const auto& [key, ci] : cis) {
                auto checks = check_ci(cand, ci, inst.aug, cfg);
                json entry;
                entry["pair"] = key;
                json rs = json::array();
                for (const auto& r : checks) {
                    all_pass = all_pass && r.passed();
                    json rj;
                    rj["condition"] = r.condition;
                    rj["verdict"] = verdict_name(r.verdict);
                    rj["samples"] = r.samples;
                    rj["worst_violation"] = r.worst_violation;
                    if (!r.witness.empty()) {
                        json w = json::object();
                        for (const auto& [k, v] : r.witness) w[k] = v;
                        rj["witness"] = w;
                    }
                    if (!r.note.empty()) rj["note"] = r.note;
                    rs.push_back(rj);
                }
                entry["checks"] = rs;
                out.push_back(entry);
            }
            emit(out, "");
            return all_pass ? kExitOk : kExitInconclusive;
        }
        if (cmd_run->parsed()) {
            ProblemSpec spec = ProblemSpec::load(spec_path);
            VerificationReport rep;
            if (algorithm == "general")
                rep = verify_general(spec);
            else if (algorithm == "forall-exists")
                rep = verify_forall_exists(spec);
            else if (algorithm == "rabin")
                rep = verify_rabin(spec);
            else
                rep = verify_auto(spec);
            json j = rep.to_json();
            if (!report_path.empty()) std::ofstream(report_path) << j.dump(2) << "\n";
            std::cout << j.dump(2) << "\n";
            return exit_code_of(rep);
        }
        if (cmd_audit->parsed()) {
            ProblemSpec spec = ProblemSpec::load(spec_path);
            Instance inst(spec);
            json rep = json::parse(slurp(report_path));
            auto cis = eligible_cis(inst);
            SampleConfig cfg = spec.options.samples;
            cfg.tol = spec.options.synth_tol;
            bool ok = true;
            int idx = 0;
            for (const auto& cj : rep.at("certificates")) {
                CertificateCandidate cand = candidate_from_json(cj, inst.aug);
                for (const auto& key : cj.at("pairs")) {
                    auto it = std::find_if(cis.begin(), cis.end(), [&](const auto& kv) {
                        return kv.first == key.get<std::string>();
                    });
                    if (it == cis.end()) {
                        std::cerr << "certificate " << idx << ": pair not found in spec: "
                                  << key << "\n";
                        ok = false;
                        continue;
                    }
                    auto checks = check_ci(cand, it->second, inst.aug, cfg);
                    for (const auto& r : checks) {
                        bool pass = r.passed();
                        ok = ok && pass;
                        std::cout << "certificate " << idx << " " << r.condition << " "
                                  << verdict_name(r.verdict) << " (worst "
                                  << r.worst_violation << ")\n";
                    }
                }
                ++idx;
            }
            std::cout << (ok ? "audit: all checks replayed clean" : "audit: FAILURES") << "\n";
            return ok ? kExitOk : kExitInconclusive;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
