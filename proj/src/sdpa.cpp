#include "hyperbc/sdpa.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace hyperbc {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

struct VarLocation {
    bool free = false;
    int free_index = 0;   // when free
    int block = 0;        // gram block index otherwise
    int i = 0, j = 0;     // 0-based upper triangle
};

VarLocation locate(const SosProgram& prog, int var) {
    VarLocation loc;
    if (var < prog.n_free) {
        loc.free = true;
        loc.free_index = var;
        return loc;
    }
    for (std::size_t b = 0; b < prog.blocks.size(); ++b) {
        const auto& blk = prog.blocks[b];
        int count = blk.dim() * (blk.dim() + 1) / 2;
        if (var < blk.first_var + count) {
            int off = var - blk.first_var;
            // invert row-major upper-triangle indexing
            int i = 0;
            int row_len = blk.dim();
            while (off >= row_len) {
                off -= row_len;
                --row_len;
                ++i;
            }
            loc.block = static_cast<int>(b);
            loc.i = i;
            loc.j = i + off;
            return loc;
        }
    }
    throw SosError("decision variable out of range");
}

}  // namespace

SdpProblem to_sdp_problem(const SosProgram& prog) {
    SdpProblem p;
    for (const auto& blk : prog.blocks) p.block_sizes.push_back(blk.dim());
    if (prog.n_free > 0) p.block_sizes.push_back(-2 * prog.n_free);
    const int diag_block = static_cast<int>(prog.blocks.size()) + 1;

    int row = 1;
    for (const auto& eq : prog.equalities) {
        p.rhs.push_back(-eq.constant);
        for (const auto& [var, coef] : eq.terms) {
            VarLocation loc = locate(prog, var);
            if (loc.free) {
                p.entries.push_back({row, diag_block, 2 * loc.free_index + 1,
                                     2 * loc.free_index + 1, coef});
                p.entries.push_back({row, diag_block, 2 * loc.free_index + 2,
                                     2 * loc.free_index + 2, -coef});
            } else {
                // row coefficients carry the symmetry factor already;
                // tr(F Y) doubles off-diagonal entries, so halve them here
                double v = loc.i == loc.j ? coef : coef / 2.0;
                p.entries.push_back({row, loc.block + 1, loc.i + 1, loc.j + 1, v});
            }
        }
        ++row;
    }
    std::stable_sort(p.entries.begin(), p.entries.end(), [](const auto& a, const auto& b) {
        return std::tie(a.matno, a.blkno, a.i, a.j) < std::tie(b.matno, b.blkno, b.i, b.j);
    });
    return p;
}

std::string export_sdpa(const SdpProblem& p) {
    std::ostringstream os;
    os << p.rhs.size() << "\n";
    os << p.block_sizes.size() << "\n";
    for (std::size_t i = 0; i < p.block_sizes.size(); ++i)
        os << (i ? " " : "") << p.block_sizes[i];
    os << "\n";
    for (std::size_t i = 0; i < p.rhs.size(); ++i)
        os << (i ? " " : "") << format_double(p.rhs[i]);
    os << "\n";
    for (const auto& e : p.entries)
        os << e.matno << " " << e.blkno << " " << e.i << " " << e.j << " "
           << format_double(e.value) << "\n";
    return os.str();
}

namespace {

std::vector<Eigen::MatrixXd> empty_blocks(const SdpProblem& p) {
    std::vector<Eigen::MatrixXd> blocks;
    for (int s : p.block_sizes) {
        int n = std::abs(s);
        blocks.push_back(Eigen::MatrixXd::Zero(n, n));
    }
    return blocks;
}

SdpSolution import_csdp(std::string_view text, const SdpProblem& p) {
    std::istringstream in{std::string(text)};
    SdpSolution sol;
    sol.blocks = empty_blocks(p);
    std::string line;
    // first non-comment line: the y vector
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '*') continue;
        std::istringstream ls(line);
        double v;
        while (ls >> v) sol.y.push_back(v);
        break;
    }
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '*') continue;
        std::istringstream ls(line);
        int matno, blk, i, j;
        double v;
        if (!(ls >> matno >> blk >> i >> j >> v)) continue;
        if (matno != 2) continue;  // 1 = dual slack Z, 2 = primal X
        if (blk < 1 || blk > static_cast<int>(sol.blocks.size()))
            throw SosError("solution block index out of range");
        auto& M = sol.blocks[blk - 1];
        if (i < 1 || j < 1 || i > M.rows() || j > M.cols())
            throw SosError("solution entry out of range");
        M(i - 1, j - 1) = v;
        M(j - 1, i - 1) = v;
    }
    return sol;
}

// SDPA binary output style: xVec / yMat sections with brace-nested numbers
SdpSolution import_sdpa_style(std::string_view text, const SdpProblem& p) {
    SdpSolution sol;
    sol.blocks = empty_blocks(p);
    auto read_numbers_until_balanced = [&](std::size_t start, std::vector<double>& out) {
        int depth = 0;
        std::size_t i = start;
        std::string num;
        auto flush = [&]() {
            if (!num.empty()) {
                out.push_back(std::strtod(num.c_str(), nullptr));
                num.clear();
            }
        };
        for (; i < text.size(); ++i) {
            char c = text[i];
            if (c == '{') {
                ++depth;
            } else if (c == '}') {
                flush();
                if (--depth == 0) return i + 1;
            } else if ((c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.' || c == 'e' ||
                       c == 'E') {
                num += c;
            } else {
                flush();
            }
        }
        return i;
    };
    auto section = [&](const char* key) -> std::vector<double> {
        std::vector<double> nums;
        auto at = text.find(key);
        if (at == std::string_view::npos) return nums;
        auto brace = text.find('{', at);
        if (brace == std::string_view::npos) return nums;
        read_numbers_until_balanced(brace, nums);
        return nums;
    };
    sol.y = section("xVec");
    std::vector<double> ymat = section("yMat");
    std::size_t k = 0;
    for (std::size_t b = 0; b < p.block_sizes.size(); ++b) {
        int s = p.block_sizes[b];
        auto& M = sol.blocks[b];
        if (s < 0) {
            for (int d = 0; d < -s; ++d) {
                if (k >= ymat.size()) throw SosError("truncated yMat section");
                M(d, d) = ymat[k++];
            }
        } else {
            for (int i = 0; i < s; ++i)
                for (int j = 0; j < s; ++j) {
                    if (k >= ymat.size()) throw SosError("truncated yMat section");
                    M(i, j) = ymat[k++];
                }
        }
    }
    return sol;
}

}  // namespace

SdpSolution import_solution(std::string_view text, const SdpProblem& p) {
    if (text.find("xVec") != std::string_view::npos) return import_sdpa_style(text, p);
    return import_csdp(text, p);
}

GramValidation validate_gram(const SdpSolution& sol, const SosProgram& prog, double tol) {
    GramValidation out;
    out.min_eigenvalue = std::numeric_limits<double>::infinity();
    if (sol.blocks.size() != prog.blocks.size() + (prog.n_free > 0 ? 1 : 0)) {
        out.failures.push_back("block count mismatch");
        return out;
    }
    for (std::size_t b = 0; b < prog.blocks.size(); ++b) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sol.blocks[b]);
        double mn = es.eigenvalues().minCoeff();
        out.min_eigenvalue = std::min(out.min_eigenvalue, mn);
        if (mn < -tol)
            out.failures.push_back("block '" + prog.blocks[b].name + "' min eigenvalue " +
                                   std::to_string(mn));
    }
    if (prog.n_free > 0) {
        const auto& diag = sol.blocks.back();
        for (int d = 0; d < diag.rows(); ++d) {
            double v = diag(d, d);
            out.min_eigenvalue = std::min(out.min_eigenvalue, v);
            if (v < -tol) {
                out.failures.push_back("diagonal entry " + std::to_string(d) + " negative");
                break;
            }
        }
    }

    auto value_of = [&](int var) {
        VarLocation loc = locate(prog, var);
        if (loc.free) {
            const auto& diag = sol.blocks.back();
            return diag(2 * loc.free_index, 2 * loc.free_index) -
                   diag(2 * loc.free_index + 1, 2 * loc.free_index + 1);
        }
        return sol.blocks[loc.block](loc.i, loc.j);
    };
    double worst = 0.0;
    for (const auto& eq : prog.equalities) {
        double r = eq.constant;
        for (const auto& [var, coef] : eq.terms) r += coef * value_of(var);
        worst = std::max(worst, std::abs(r));
    }
    out.max_equality_residual = worst;
    if (worst > tol) out.failures.push_back("equality residual " + std::to_string(worst));
    out.ok = out.failures.empty();
    return out;
}

SolveOutcome solve_sdp(const SdpProblem& p, const std::string& solver_path) {
    SolveOutcome out;
    if (solver_path.empty()) {
        out.status = SolveOutcome::Status::Unavailable;
        out.detail = "no sdp_solver configured";
        return out;
    }
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / ("hyperbc-" + std::to_string(::getpid()));
    std::error_code ec;
    fs::create_directories(dir, ec);
    static int counter = 0;
    fs::path prob = dir / ("problem" + std::to_string(counter) + ".dat-s");
    fs::path solf = dir / ("problem" + std::to_string(counter) + ".sol");
    fs::path logf = dir / ("problem" + std::to_string(counter) + ".log");
    ++counter;
    {
        std::ofstream f(prob);
        f << export_sdpa(p);
    }
    std::string cmd;
    if (solver_path.size() > 3 && solver_path.substr(solver_path.size() - 3) == ".py")
        cmd = "python3 ";
    cmd += "\"" + solver_path + "\" \"" + prob.string() + "\" \"" + solf.string() + "\" > \"" +
           logf.string() + "\" 2>&1";
    int rc = std::system(cmd.c_str());
    int code = rc < 0 ? 127 : (rc & 0x7f ? 128 : (rc >> 8) & 0xff);

    if (code == 1 || code == 2) {
        out.status = SolveOutcome::Status::Infeasible;
        out.detail = "solver reported infeasibility (exit " + std::to_string(code) + ")";
        return out;
    }
    if (code != 0) {
        out.status = SolveOutcome::Status::Failed;
        out.detail = "solver exit code " + std::to_string(code);
        return out;
    }
    std::ifstream f(solf);
    if (!f) {
        out.status = SolveOutcome::Status::Failed;
        out.detail = "solver produced no solution file";
        return out;
    }
    std::stringstream buf;
    buf << f.rdbuf();
    try {
        out.solution = import_solution(buf.str(), p);
    } catch (const std::exception& e) {
        out.status = SolveOutcome::Status::Failed;
        out.detail = std::string("unparseable solution: ") + e.what();
        return out;
    }
    out.status = SolveOutcome::Status::Feasible;
    return out;
}

}  // namespace hyperbc
