#include "hyperbc/automata.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace hyperbc {

std::string BuchiAutomaton::name_of(int s) const {
    if (s < static_cast<int>(state_names.size()) && !state_names[s].empty())
        return state_names[s];
    return "q" + std::to_string(s);
}

std::string RabinAutomaton::name_of(int s) const {
    if (s < static_cast<int>(state_names.size()) && !state_names[s].empty())
        return state_names[s];
    return "q" + std::to_string(s);
}

std::vector<const Edge*> BuchiAutomaton::out_edges(int s) const {
    std::vector<const Edge*> out;
    for (const auto& e : edges)
        if (e.src == s) out.push_back(&e);
    return out;
}

bool Lasso::has_triple(int r, int r1, int r2) const {
    // states along the unrolling: stem, then cycle repeated
    std::vector<int> seq = stem_states;
    for (int rep = 0; rep < 2; ++rep)
        seq.insert(seq.end(), cycle_states.begin() + 1, cycle_states.end());
    for (std::size_t i = 0; i + 2 < seq.size(); ++i)
        if (seq[i] == r && seq[i + 1] == r1 && seq[i + 2] == r2) return true;
    return false;
}

bool Lasso::has_edge(int r, int r1) const {
    std::vector<int> seq = stem_states;
    seq.insert(seq.end(), cycle_states.begin() + 1, cycle_states.end());
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (seq[i] == r && seq[i + 1] == r1) return true;
    return false;
}

std::string Lasso::str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < stem_states.size(); ++i) {
        if (i) s += ",";
        s += "q" + std::to_string(stem_states[i]);
    }
    for (std::size_t i = 1; i < cycle_states.size(); ++i)
        s += ",q" + std::to_string(cycle_states[i]);
    return s + ")";
}

std::string TransitionPair::str() const { return "(" + s_A.str() + ", " + s_B.str() + ")"; }

namespace {

std::vector<std::vector<int>> adjacency(int n, const std::vector<Edge>& edges, bool reverse) {
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : edges) {
        if (reverse)
            adj[e.dst].push_back(e.src);
        else
            adj[e.src].push_back(e.dst);
    }
    return adj;
}

std::vector<bool> reach_from(const std::vector<std::vector<int>>& adj, std::vector<int> seeds) {
    std::vector<bool> seen(adj.size(), false);
    std::queue<int> q;
    for (int s : seeds)
        if (!seen[s]) {
            seen[s] = true;
            q.push(s);
        }
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = true;
                q.push(v);
            }
    }
    return seen;
}

// accepting states lying on some cycle
std::set<int> cyclic_accepting(const BuchiAutomaton& aut, const std::vector<Edge>& edges) {
    auto fwd = adjacency(aut.num_states, edges, false);
    std::set<int> out;
    for (int a : aut.accepting) {
        // a reaches itself through at least one edge
        std::vector<int> starts;
        for (const auto& e : edges)
            if (e.src == a) starts.push_back(e.dst);
        auto seen = reach_from(fwd, starts);
        if (a < static_cast<int>(seen.size()) && seen[a]) out.insert(a);
    }
    return out;
}

}  // namespace

BuchiAutomaton prune(const BuchiAutomaton& aut) {
    if (aut.empty()) return aut;
    std::vector<Edge> live_edges;
    for (const auto& e : aut.edges)
        if (satisfiable(e.guard)) live_edges.push_back(e);

    auto targets = cyclic_accepting(aut, live_edges);
    auto fwd = adjacency(aut.num_states, live_edges, false);
    auto bwd = adjacency(aut.num_states, live_edges, true);
    auto from_init = reach_from(fwd, {aut.initial});
    auto to_target = reach_from(bwd, std::vector<int>(targets.begin(), targets.end()));

    std::vector<int> remap(aut.num_states, -1);
    BuchiAutomaton out;
    for (int s = 0; s < aut.num_states; ++s) {
        if (from_init[s] && to_target[s]) {
            remap[s] = out.num_states++;
            out.state_names.push_back(aut.name_of(s));
        }
    }
    if (remap[aut.initial] < 0) return BuchiAutomaton{};  // no lasso at all
    out.initial = remap[aut.initial];
    for (const auto& e : live_edges)
        if (remap[e.src] >= 0 && remap[e.dst] >= 0)
            out.edges.push_back({remap[e.src], remap[e.dst], e.guard});
    for (int a : aut.accepting)
        if (remap[a] >= 0) out.accepting.insert(remap[a]);
    return out;
}

namespace {

template <typename EdgeList>
bool deterministic_edges(int num_states, const EdgeList& edges) {
    for (int s = 0; s < num_states; ++s) {
        std::vector<const Edge*> out;
        for (const auto& e : edges)
            if (e.src == s) out.push_back(&e);
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = i + 1; j < out.size(); ++j)
                if (jointly_satisfiable(out[i]->guard, out[j]->guard)) return false;
    }
    return true;
}

}  // namespace

bool is_deterministic(const BuchiAutomaton& aut) {
    return deterministic_edges(aut.num_states, aut.edges);
}

bool is_deterministic(const RabinAutomaton& aut) {
    return deterministic_edges(aut.num_states, aut.edges);
}

namespace {

// edge indices sorted for deterministic traversal order
std::vector<std::vector<int>> sorted_out_edges(int n, const std::vector<Edge>& edges) {
    std::vector<std::vector<int>> out(n);
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) out[edges[i].src].push_back(i);
    for (auto& v : out)
        std::sort(v.begin(), v.end(), [&](int a, int b) {
            if (edges[a].dst != edges[b].dst) return edges[a].dst < edges[b].dst;
            return edges[a].guard.str() < edges[b].guard.str();
        });
    return out;
}

// all simple edge-paths src -> dst (src may equal dst: simple cycles)
void simple_paths(const std::vector<Edge>& edges, const std::vector<std::vector<int>>& out,
                  int src, int dst, std::vector<int>& path, std::vector<bool>& visited,
                  const std::function<void(const std::vector<int>&)>& emit) {
    int here = path.empty() ? src : edges[path.back()].dst;
    for (int ei : out[here]) {
        int nxt = edges[ei].dst;
        if (nxt == dst) {
            path.push_back(ei);
            emit(path);
            path.pop_back();
            continue;
        }
        if (visited[nxt]) continue;
        visited[nxt] = true;
        path.push_back(ei);
        simple_paths(edges, out, src, dst, path, visited, emit);
        path.pop_back();
        visited[nxt] = false;
    }
}

std::vector<std::vector<int>> collect_simple_paths(const BuchiAutomaton& aut,
                                                   const std::vector<std::vector<int>>& out,
                                                   int src, int dst) {
    std::vector<std::vector<int>> paths;
    std::vector<int> path;
    std::vector<bool> visited(aut.num_states, false);
    visited[src] = true;
    simple_paths(aut.edges, out, src, dst, path, visited,
                 [&](const std::vector<int>& p) { paths.push_back(p); });
    return paths;
}

Lasso assemble(const BuchiAutomaton& aut, const std::vector<int>& stem,
               const std::vector<int>& cycle) {
    Lasso l;
    l.stem_states.push_back(aut.initial);
    for (int ei : stem) {
        l.stem_states.push_back(aut.edges[ei].dst);
        l.stem_guards.push_back(aut.edges[ei].guard);
    }
    int acc = l.stem_states.back();
    l.cycle_states.push_back(acc);
    for (int ei : cycle) {
        l.cycle_states.push_back(aut.edges[ei].dst);
        l.cycle_guards.push_back(aut.edges[ei].guard);
    }
    return l;
}

}  // namespace

std::vector<Lasso> enumerate_lassos(const BuchiAutomaton& aut) {
    std::vector<Lasso> out;
    if (aut.empty()) return out;
    auto adj = sorted_out_edges(aut.num_states, aut.edges);
    std::vector<int> acc(aut.accepting.begin(), aut.accepting.end());
    std::sort(acc.begin(), acc.end());
    for (int a : acc) {
        std::vector<std::vector<int>> stems;
        if (a == aut.initial)
            stems.push_back({});  // only the empty stem is simple here
        else
            stems = collect_simple_paths(aut, adj, aut.initial, a);
        auto cycles = collect_simple_paths(aut, adj, a, a);
        for (const auto& s : stems)
            for (const auto& c : cycles) out.push_back(assemble(aut, s, c));
    }
    std::sort(out.begin(), out.end(), [](const Lasso& x, const Lasso& y) {
        if (x.stem_states != y.stem_states) return x.stem_states < y.stem_states;
        if (x.cycle_states != y.cycle_states) return x.cycle_states < y.cycle_states;
        return x.str() < y.str();
    });
    return out;
}

std::vector<Lasso> enumerate_lassos_rabin(const RabinAutomaton& aut) {
    std::vector<Lasso> out;
    for (int j = 0; j < static_cast<int>(aut.pairs.size()); ++j) {
        BuchiAutomaton view;
        view.num_states = aut.num_states;
        view.initial = aut.initial;
        view.edges = aut.edges;
        view.state_names = aut.state_names;
        view.accepting = aut.pairs[j].G;
        for (auto& l : enumerate_lassos(view)) {
            l.rabin_pair = j;
            out.push_back(std::move(l));
        }
    }
    return out;
}

std::vector<TransitionPair> transition_pairs(const Lasso& l, int lasso_id) {
    std::vector<Guard> seq = l.stem_guards;
    seq.insert(seq.end(), l.cycle_guards.begin(), l.cycle_guards.end());
    std::vector<int> states = l.stem_states;
    states.insert(states.end(), l.cycle_states.begin() + 1, l.cycle_states.end());

    std::vector<TransitionPair> out;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        TransitionPair tp;
        tp.s_A = seq[i];
        tp.s_B = seq[i + 1];
        tp.lasso_id = lasso_id;
        tp.position = static_cast<int>(i);
        tp.states = {states[i], states[i + 1], states[i + 2]};
        out.push_back(std::move(tp));
    }
    if (l.cycle_guards.size() >= 2) {
        // wrap pair: cutting the unrolled cycle also needs (last, first)
        TransitionPair tp;
        tp.s_A = l.cycle_guards.back();
        tp.s_B = l.cycle_guards.front();
        tp.lasso_id = lasso_id;
        tp.position = static_cast<int>(seq.size() - 1);
        tp.states = {l.cycle_states[l.cycle_states.size() - 2], l.cycle_states.back(),
                     l.cycle_states[1]};
        out.push_back(std::move(tp));
    }
    return out;
}

bool accepts_lasso_word(const BuchiAutomaton& aut, const LassoWord& word) {
    if (aut.empty() || word.cycle.empty()) return false;
    const std::size_t S = word.stem.size(), C = word.cycle.size();
    const std::size_t P = S + C;
    auto letter = [&](std::size_t i) -> const Letter& {
        return i < S ? word.stem[i] : word.cycle[i - S];
    };
    auto next_pos = [&](std::size_t i) { return i + 1 < P ? i + 1 : S; };
    auto id = [&](std::size_t pos, int q) { return pos * aut.num_states + q; };

    // reachable product nodes
    std::vector<bool> seen(P * aut.num_states, false);
    std::queue<std::pair<std::size_t, int>> bfs;
    seen[id(0, aut.initial)] = true;
    bfs.push({0, aut.initial});
    std::vector<std::vector<const Edge*>> outs(aut.num_states);
    for (const auto& e : aut.edges) outs[e.src].push_back(&e);
    while (!bfs.empty()) {
        auto [pos, q] = bfs.front();
        bfs.pop();
        for (const Edge* e : outs[q])
            if (e->guard.eval(letter(pos))) {
                std::size_t np = next_pos(pos);
                if (!seen[id(np, e->dst)]) {
                    seen[id(np, e->dst)] = true;
                    bfs.push({np, e->dst});
                }
            }
    }

    // cycle-layer graph: positions S..P-1; accepting run exists iff some
    // reachable node in an SCC with an internal cycle through an accepting
    // state. In this layered product every nontrivial SCC cycles through
    // all its nodes' positions, so it suffices that the SCC contains an
    // accepting automaton state and at least one internal edge.
    std::vector<int> comp(P * aut.num_states, -1);
    std::vector<int> low(P * aut.num_states, 0), disc(P * aut.num_states, -1);
    std::vector<int> stack_;
    std::vector<bool> on_stack(P * aut.num_states, false);
    int timer = 0, ncomp = 0;
    std::vector<std::vector<int>> succ(P * aut.num_states);
    for (std::size_t pos = S; pos < P; ++pos)
        for (int q = 0; q < aut.num_states; ++q) {
            if (!seen[id(pos, q)]) continue;
            for (const Edge* e : outs[q])
                if (e->guard.eval(letter(pos))) succ[id(pos, q)].push_back(
                    static_cast<int>(id(next_pos(pos), e->dst)));
        }
    std::function<void(int)> tarjan = [&](int u) {
        disc[u] = low[u] = timer++;
        stack_.push_back(u);
        on_stack[u] = true;
        for (int v : succ[u]) {
            if (disc[v] < 0) {
                tarjan(v);
                low[u] = std::min(low[u], low[v]);
            } else if (on_stack[v]) {
                low[u] = std::min(low[u], disc[v]);
            }
        }
        if (low[u] == disc[u]) {
            for (;;) {
                int v = stack_.back();
                stack_.pop_back();
                on_stack[v] = false;
                comp[v] = ncomp;
                if (v == u) break;
            }
            ++ncomp;
        }
    };
    for (std::size_t pos = S; pos < P; ++pos)
        for (int q = 0; q < aut.num_states; ++q) {
            int u = static_cast<int>(id(pos, q));
            if (seen[u] && disc[u] < 0) tarjan(u);
        }
    // an SCC with an internal edge puts every member on a cycle
    std::vector<bool> comp_cyclic(ncomp, false);
    for (std::size_t pos = S; pos < P; ++pos)
        for (int q = 0; q < aut.num_states; ++q) {
            int u = static_cast<int>(id(pos, q));
            if (!seen[u]) continue;
            for (int v : succ[u])
                if (comp[u] == comp[v]) comp_cyclic[comp[u]] = true;
        }
    for (std::size_t pos = S; pos < P; ++pos)
        for (int q = 0; q < aut.num_states; ++q) {
            int u = static_cast<int>(id(pos, q));
            if (seen[u] && comp[u] >= 0 && comp_cyclic[comp[u]] && aut.accepting.count(q))
                return true;
        }
    return false;
}

}  // namespace hyperbc
