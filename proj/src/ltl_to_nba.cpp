#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "hyperbc/automata.hpp"

// Tableau construction in the Gerth-Peled-Vardi-Wolper style: graph nodes
// carry New/Old/Next obligation sets, until-formulas induce generalized
// Büchi acceptance sets, and a counter product degeneralizes the result.

namespace hyperbc {

namespace {

// structural ordering so obligation sets can live in std::set
struct LtlLess {
    bool operator()(const LtlPtr& a, const LtlPtr& b) const { return cmp(a, b) < 0; }
    static int cmp(const LtlPtr& a, const LtlPtr& b) {
        if (a == b) return 0;
        if (static_cast<int>(a->op) != static_cast<int>(b->op))
            return static_cast<int>(a->op) < static_cast<int>(b->op) ? -1 : 1;
        if (a->atom != b->atom) return a->atom < b->atom ? -1 : 1;
        if (a->kids.size() != b->kids.size()) return a->kids.size() < b->kids.size() ? -1 : 1;
        for (std::size_t i = 0; i < a->kids.size(); ++i)
            if (int c = cmp(a->kids[i], b->kids[i]); c != 0) return c;
        return 0;
    }
};

using FormulaSet = std::set<LtlPtr, LtlLess>;

bool is_literal(const LtlPtr& f) {
    return f->op == LtlOp::Atom || (f->op == LtlOp::Not && f->kids[0]->op == LtlOp::Atom) ||
           f->op == LtlOp::True || f->op == LtlOp::False;
}

LtlPtr negate_literal(const LtlPtr& f) {
    if (f->op == LtlOp::Atom) return mk_not(f);
    if (f->op == LtlOp::Not) return f->kids[0];
    return f->op == LtlOp::True ? mk_false() : mk_true();
}

struct Node {
    int id;
    std::set<int> incoming;  // -1 marks the virtual initial node
    FormulaSet new_, old_, next_;
};

class Tableau {
public:
    explicit Tableau(const LtlPtr& body) {
        Node init;
        init.id = fresh_++;
        init.incoming.insert(-1);
        init.new_.insert(body);
        expand(std::move(init));
    }

    std::vector<Node> nodes;

private:
    int fresh_ = 0;

    void expand(Node n) {
        if (n.new_.empty()) {
            for (auto& done : nodes) {
                if (done.old_ == n.old_ && done.next_ == n.next_) {
                    done.incoming.insert(n.incoming.begin(), n.incoming.end());
                    return;
                }
            }
            nodes.push_back(n);
            Node succ;
            succ.id = fresh_++;
            succ.incoming.insert(n.id);
            succ.new_ = n.next_;
            expand(std::move(succ));
            return;
        }
        LtlPtr f = *n.new_.begin();
        n.new_.erase(n.new_.begin());
        if (is_literal(f)) {
            if (f->op == LtlOp::False) return;  // inconsistent node
            if (f->op != LtlOp::True) {
                if (n.old_.count(negate_literal(f))) return;  // contradiction
                n.old_.insert(f);
            }
            expand(std::move(n));
            return;
        }
        switch (f->op) {
            case LtlOp::And: {
                for (const auto& k : f->kids)
                    if (!n.old_.count(k)) n.new_.insert(k);
                n.old_.insert(f);
                expand(std::move(n));
                return;
            }
            case LtlOp::Next: {
                n.old_.insert(f);
                n.next_.insert(f->kids[0]);
                expand(std::move(n));
                return;
            }
            case LtlOp::Or: {
                Node n2 = n;
                n2.id = fresh_++;
                n.old_.insert(f);
                n2.old_.insert(f);
                if (!n.old_.count(f->kids[0])) n.new_.insert(f->kids[0]);
                if (!n2.old_.count(f->kids[1])) n2.new_.insert(f->kids[1]);
                expand(std::move(n));
                expand(std::move(n2));
                return;
            }
            case LtlOp::Until: {
                // f = a U b: (a and X f) or (b)
                Node n2 = n;
                n2.id = fresh_++;
                n.old_.insert(f);
                n2.old_.insert(f);
                if (!n.old_.count(f->kids[0])) n.new_.insert(f->kids[0]);
                n.next_.insert(f);
                if (!n2.old_.count(f->kids[1])) n2.new_.insert(f->kids[1]);
                expand(std::move(n));
                expand(std::move(n2));
                return;
            }
            case LtlOp::Release: {
                // f = a R b: (b and X f) or (a and b)
                Node n2 = n;
                n2.id = fresh_++;
                n.old_.insert(f);
                n2.old_.insert(f);
                if (!n.old_.count(f->kids[1])) n.new_.insert(f->kids[1]);
                n.next_.insert(f);
                if (!n2.old_.count(f->kids[0])) n2.new_.insert(f->kids[0]);
                if (!n2.old_.count(f->kids[1])) n2.new_.insert(f->kids[1]);
                expand(std::move(n));
                expand(std::move(n2));
                return;
            }
            default: break;
        }
        throw FormulaError("ltl_to_nba expects the minimal {X,U,R,and,or} basis");
    }
};

void collect_untils(const LtlPtr& f, FormulaSet& out) {
    if (f->op == LtlOp::Until) out.insert(f);
    for (const auto& k : f->kids) collect_untils(k, out);
}

Guard node_guard(const Node& n) {
    std::vector<Guard> lits;
    for (const auto& f : n.old_) {
        if (f->op == LtlOp::Atom)
            lits.push_back(Guard::lit(f->atom, true));
        else if (f->op == LtlOp::Not)
            lits.push_back(Guard::lit(f->kids[0]->atom, false));
    }
    return Guard::conj(std::move(lits));
}

}  // namespace

BuchiAutomaton ltl_to_nba(const LtlPtr& body) {
    LtlPtr min = to_minimal_basis(body);
    Tableau tab(min);

    FormulaSet untils;
    collect_untils(min, untils);
    const int k = static_cast<int>(untils.size());

    // GBA over tableau nodes; acceptance set per until u: nodes where u is
    // not pending (u not in Old, or its right argument already in Old)
    std::vector<std::vector<bool>> in_F(tab.nodes.size(), std::vector<bool>(std::max(k, 1), true));
    {
        int ui = 0;
        for (const auto& u : untils) {
            for (std::size_t ni = 0; ni < tab.nodes.size(); ++ni) {
                const auto& n = tab.nodes[ni];
                bool pending = n.old_.count(u) && !n.old_.count(u->kids[1]);
                in_F[ni][ui] = !pending;
            }
            ++ui;
        }
    }

    // map node ids to dense indices
    std::map<int, int> dense;
    for (std::size_t i = 0; i < tab.nodes.size(); ++i) dense[tab.nodes[i].id] = static_cast<int>(i);

    const int layers = std::max(k, 1);
    const int n_nodes = static_cast<int>(tab.nodes.size());
    BuchiAutomaton out;
    // state numbering: 0 = initial, then (node, layer) pairs
    auto state_id = [&](int node_idx, int layer) { return 1 + node_idx * layers + layer; };
    out.num_states = 1 + n_nodes * layers;
    out.initial = 0;

    auto advance = [&](int node_idx, int layer) {
        if (k == 0) return 0;
        return in_F[node_idx][layer] ? (layer + 1) % k : layer;
    };

    for (int ni = 0; ni < n_nodes; ++ni) {
        const Guard g = node_guard(tab.nodes[ni]);
        for (int inc : tab.nodes[ni].incoming) {
            if (inc == -1) {
                out.edges.push_back({0, state_id(ni, 0), g});
            } else {
                int src_idx = dense.at(inc);
                for (int layer = 0; layer < layers; ++layer)
                    out.edges.push_back(
                        {state_id(src_idx, layer), state_id(ni, advance(src_idx, layer)), g});
            }
        }
    }
    if (k == 0) {
        for (int ni = 0; ni < n_nodes; ++ni) out.accepting.insert(state_id(ni, 0));
    } else {
        for (int ni = 0; ni < n_nodes; ++ni)
            if (in_F[ni][0]) out.accepting.insert(state_id(ni, 0));
    }
    return prune(out);
}

}  // namespace hyperbc
