#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hyperbc/pipeline.hpp"

using namespace hyperbc;

TEST_SUITE_BEGIN("sos");

namespace {

std::string solver_path() {
    if (const char* env = std::getenv("HYPERBC_SDP_SOLVER")) return env;
    std::string bundled = std::string(HYPERBC_TOOLS_DIR) + "/sdpa_solve.py";
    if (std::ifstream(bundled).good()) return bundled;
    return "";
}

bool solver_works() {
    static int cached = -1;
    if (cached < 0)
        cached = std::system("python3 -c 'import cvxopt' > /dev/null 2>&1") == 0 ? 1 : 0;
    return cached == 1 && !solver_path().empty();
}

std::string fixture_text(const std::string& name) {
    std::ifstream in(std::string(HYPERBC_FIXTURE_DIR) + "/" + name);
    REQUIRE(in);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// (x+1)^2 as a one-block SOS membership program over basis {1, x}
SosProgram square_program() {
    SosProgram prog;
    prog.zvars = {"x"};
    DecisionPoly expr;
    expr.accumulate(parse_polynomial("x^2 + 2*x + 1", {"x"}), -1, 1.0, prog.zvars);
    prog.coefficient_match(expr, make_basis({"x"}, 1), "square");
    return prog;
}

// Motzkin x^4 y^2 + x^2 y^4 - 3 x^2 y^2 + 1 over its minimal basis
SosProgram motzkin_program() {
    SosProgram prog;
    prog.zvars = {"x", "y"};
    DecisionPoly expr;
    expr.accumulate(parse_polynomial("x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1", {"x", "y"}), -1, 1.0,
                    prog.zvars);
    MonomialBasis basis;
    basis.vars = {"x", "y"};
    basis.monos = {{0, 0}, {1, 1}, {2, 1}, {1, 2}};
    prog.coefficient_match(expr, basis, "motzkin");
    return prog;
}

}  // namespace

TEST_CASE("graded-lex monomial bases start at the constant") {
    MonomialBasis b = make_basis({"x", "y"}, 2);
    REQUIRE(b.size() == 6);
    CHECK(b.monos.front() == Exponents{0, 0});
    CHECK(b.index_of({1, 1}) >= 0);
    CHECK(b.index_of({3, 0}) == -1);
    // degree increases along the basis
    unsigned prev = 0;
    for (const auto& m : b.monos) {
        unsigned d = m[0] + m[1];
        CHECK(d >= prev);
        prev = d;
    }
}

TEST_CASE("(x+1)^2 admits the explicit PSD Gram [[1,1],[1,1]]") {
    if (!solver_works()) {
        MESSAGE("skipping: no SDP solver available");
        return;
    }
    SosProgram prog = square_program();
    SdpProblem sdp = to_sdp_problem(prog);
    SolveOutcome out = solve_sdp(sdp, solver_path());
    REQUIRE(out.status == SolveOutcome::Status::Feasible);
    const auto& Q = out.solution->blocks[0];
    CHECK(Q(0, 0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(Q(0, 1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(Q(1, 1) == doctest::Approx(1.0).epsilon(1e-6));
    GramValidation v = validate_gram(*out.solution, prog, 1e-6);
    CHECK(v.ok);
    CHECK(v.min_eigenvalue >= -1e-6);
}

TEST_CASE("Motzkin polynomial is rejected as infeasible") {
    if (!solver_works()) {
        MESSAGE("skipping: no SDP solver available");
        return;
    }
    SosProgram prog = motzkin_program();
    SolveOutcome out = solve_sdp(to_sdp_problem(prog), solver_path());
    CHECK(out.status == SolveOutcome::Status::Infeasible);
}

TEST_CASE("negative constants cannot be sums of squares") {
    if (!solver_works()) {
        MESSAGE("skipping: no SDP solver available");
        return;
    }
    SosProgram prog;
    prog.zvars = {"x"};
    DecisionPoly expr;
    expr.accumulate(Polynomial::constant(-1.0), -1, 1.0, prog.zvars);
    prog.coefficient_match(expr, make_basis({"x"}, 1), "neg");
    SolveOutcome out = solve_sdp(to_sdp_problem(prog), solver_path());
    CHECK(out.status == SolveOutcome::Status::Infeasible);
}

TEST_CASE("export matches the golden bytes and is deterministic") {
    // toy with an objective: minimize trace subject to X11 = 1
    SdpProblem toy;
    toy.block_sizes = {2};
    toy.rhs = {1.0};
    toy.entries.push_back({0, 1, 1, 1, -1.0});
    toy.entries.push_back({0, 1, 2, 2, -1.0});
    toy.entries.push_back({1, 1, 1, 1, 1.0});
    std::string text = export_sdpa(toy);
    CHECK(text == fixture_text("golden/toy_min_trace.dat-s"));

    SosProgram prog = motzkin_program();
    std::string a = export_sdpa(to_sdp_problem(prog));
    std::string b = export_sdpa(to_sdp_problem(motzkin_program()));
    CHECK(a == b);
    CHECK(a == fixture_text("golden/motzkin.dat-s"));
}

TEST_CASE("solution import recovers blocks from both text formats") {
    SdpProblem p;
    p.block_sizes = {2, -2};
    p.rhs = {1.0, 2.0};

    // CSDP style
    const char* csdp =
        "0.5 -0.25\n"
        "1 1 1 1 9.0\n"
        "2 1 1 1 1.5\n"
        "2 1 1 2 0.25\n"
        "2 2 1 1 3.0\n"
        "2 2 2 2 0.5\n";
    SdpSolution s1 = import_solution(csdp, p);
    CHECK(s1.y == std::vector<double>{0.5, -0.25});
    CHECK(s1.blocks[0](0, 1) == doctest::Approx(0.25));
    CHECK(s1.blocks[0](1, 0) == doctest::Approx(0.25));
    CHECK(s1.blocks[1](1, 1) == doctest::Approx(0.5));

    // SDPA output style: yMat carries our solution blocks
    const char* sdpa =
        "objValPrimal = 1.0\n"
        "xVec = \n{0.5, -0.25}\n"
        "xMat = \n{\n{ {9.0, 0.0}, {0.0, 9.0} }\n{1.0, 1.0}\n}\n"
        "yMat = \n{\n{ {1.5, 0.25}, {0.25, 2.0} }\n{3.0, 0.5}\n}\n";
    SdpSolution s2 = import_solution(sdpa, p);
    CHECK(s2.blocks[0](0, 1) == doctest::Approx(0.25));
    CHECK(s2.blocks[0](1, 1) == doctest::Approx(2.0));
    CHECK(s2.blocks[1](0, 0) == doctest::Approx(3.0));

    CHECK_THROWS_AS(import_solution("0.0\n2 9 1 1 1.0\n", p), SosError);
}

TEST_CASE("validate_gram flags negative blocks and residuals") {
    SosProgram prog = square_program();
    SdpSolution sol;
    sol.blocks.push_back(Eigen::MatrixXd::Zero(2, 2));
    sol.blocks[0] << 1.0, 1.0, 1.0, 1.0;
    GramValidation ok = validate_gram(sol, prog, 0.0);
    CHECK(ok.ok);

    SdpSolution bad = sol;
    bad.blocks[0](1, 1) = 1.0 - 1e-3;
    bad.blocks[0](0, 1) = bad.blocks[0](1, 0) = 1.0;
    GramValidation v = validate_gram(bad, prog, 1e-6);
    CHECK(!v.ok);  // residual on the x^2 coefficient
}

TEST_CASE("room program: build, solve, reconstruct, and re-check") {
    if (!solver_works()) {
        MESSAGE("skipping: no SDP solver available");
        return;
    }
    ProblemSpec spec =
        ProblemSpec::load(std::string(HYPERBC_FIXTURE_DIR) + "/room_robustness.json");
    Instance inst(spec);
    BuchiAutomaton aut = prune(inst.negation_automaton());
    std::optional<ConditionalInvariance> ci;
    for (const auto& lasso : enumerate_lassos(aut))
        for (const auto& tp : transition_pairs(lasso)) {
            ConditionalInvariance c = inst.make_ci(tp);
            if (c.set_A.clauses.empty() || c.set_B.clauses.empty()) continue;
            if (!region_overlap_witness(c.set_A, c.set_B, 2000, 1)) {
                ci = c;
                break;
            }
        }
    REQUIRE(ci);
    SosProgram prog =
        build_sos_program({*ci}, inst.aug, inst.prefix, spec.options.degrees, 0.001);
    SolveOutcome out = solve_sdp(to_sdp_problem(prog), solver_path());
    REQUIRE(out.status == SolveOutcome::Status::Feasible);
    GramValidation gram = validate_gram(*out.solution, prog, 1e-6);
    CHECK(gram.ok);
    CertificateCandidate cand = reconstruct_certificate(*out.solution, prog);
    CHECK(cand.B.degree() <= 2);

    SampleConfig cfg;
    cfg.grid_per_dim = 50;
    cfg.random_samples = 4000;
    cfg.seed = 5;
    cfg.tol = 1e-6;
    auto checks = check_ci(cand, *ci, inst.aug, cfg);
    for (const auto& r : checks) {
        CAPTURE(r.condition);
        CAPTURE(r.worst_violation);
        CHECK(r.passed());
    }
}

TEST_CASE("degree deficit raises an explicit error") {
    ProblemSpec spec =
        ProblemSpec::load(std::string(HYPERBC_FIXTURE_DIR) + "/room_robustness.json");
    Instance inst(spec);
    BuchiAutomaton aut = prune(inst.negation_automaton());
    auto lassos = enumerate_lassos(aut);
    REQUIRE(!lassos.empty());
    auto pairs = transition_pairs(lassos[0], 0);
    REQUIRE(!pairs.empty());
    ConditionalInvariance ci = inst.make_ci(pairs[0]);
    Degrees d;
    d.multiplier = 3;  // odd multiplier degree is rejected up front
    CHECK_THROWS_AS(build_sos_program({ci}, inst.aug, inst.prefix, d, 0.001), SosError);
}

TEST_CASE("empty invariance list yields a trivially feasible program") {
    if (!solver_works()) {
        MESSAGE("skipping: no SDP solver available");
        return;
    }
    ProblemSpec spec =
        ProblemSpec::load(std::string(HYPERBC_FIXTURE_DIR) + "/room_robustness.json");
    Instance inst(spec);
    SosProgram prog =
        build_sos_program({}, inst.aug, inst.prefix, spec.options.degrees, 0.001);
    SolveOutcome out = solve_sdp(to_sdp_problem(prog), solver_path());
    CHECK(out.status == SolveOutcome::Status::Feasible);
}

TEST_CASE("substituted decrease expression equals the program's view") {
    // expression (7) built from a candidate by symbolic substitution agrees
    // with direct evaluation at random points
    ProblemSpec spec =
        ProblemSpec::load(std::string(HYPERBC_FIXTURE_DIR) + "/vehicle_opacity.json");
    Instance inst(spec);
    std::ifstream in(std::string(HYPERBC_FIXTURE_DIR) + "/vehicle_candidate.json");
    nlohmann::json j;
    in >> j;
    std::vector<std::string> vars = inst.aug.state_vars;
    vars.insert(vars.end(), inst.aug.input_vars.begin(), inst.aug.input_vars.end());
    Polynomial B = parse_polynomial(j.at("B").get<std::string>(), inst.aug.state_vars);
    Polynomial h = parse_polynomial(j.at("strategies").at("w__2").get<std::string>(), vars);

    std::map<std::string, Polynomial> step;
    for (std::size_t i = 0; i < inst.aug.state_vars.size(); ++i)
        step[inst.aug.state_vars[i]] = inst.aug.f[i].substitute({{"w__2", h}});
    Polynomial composed = B.substitute(step);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ds(0, 8), dv(0, 0.6), dw(-0.04, 0.04);
    for (int t = 0; t < 100; ++t) {
        std::map<std::string, double> pt{{"s__1", ds(rng)}, {"v__1", dv(rng)},
                                         {"s__2", ds(rng)}, {"v__2", dv(rng)},
                                         {"w__1", dw(rng)}};
        double w2 = h.eval(pt);
        std::map<std::string, double> full = pt;
        full["w__2"] = w2;
        std::map<std::string, double> next;
        for (std::size_t i = 0; i < inst.aug.state_vars.size(); ++i)
            next[inst.aug.state_vars[i]] = inst.aug.f[i].eval(full);
        CHECK(composed.eval(pt) == doctest::Approx(B.eval(next)).epsilon(1e-9));
    }
}

TEST_SUITE_END();
