#include "hyperbc/hoa.hpp"

#include <cctype>
#include <functional>
#include <sstream>

namespace hyperbc {

AtomRef atom_ref_from_ap(const std::string& ap) {
    auto lb = ap.find('[');
    if (lb == std::string::npos || ap.back() != ']') return AtomRef{ap, {}};
    AtomRef ref;
    ref.name = ap.substr(0, lb);
    std::string inner = ap.substr(lb + 1, ap.size() - lb - 2);
    std::string cur;
    for (char c : inner) {
        if (c == ',') {
            ref.traces.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) ref.traces.push_back(cur);
    return ref;
}

namespace {

struct LabelParser {
    std::string_view src;
    std::size_t pos = 0;
    const std::vector<AtomRef>& aps;

    char peek() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
        return pos < src.size() ? src[pos] : '\0';
    }

    Guard parse() {
        Guard g = or_level();
        if (peek() != '\0') throw HoaError("trailing input in label: " + std::string(src));
        return g;
    }

    Guard or_level() {
        Guard g = and_level();
        while (peek() == '|') {
            ++pos;
            g = guard_or(g, and_level());
        }
        return g;
    }

    Guard and_level() {
        Guard g = unit();
        while (peek() == '&') {
            ++pos;
            g = guard_and(g, unit());
        }
        return g;
    }

    Guard unit() {
        char c = peek();
        if (c == '!') {
            ++pos;
            return guard_negate(unit());
        }
        if (c == '(') {
            ++pos;
            Guard g = or_level();
            if (peek() != ')') throw HoaError("expected ')' in label");
            ++pos;
            return g;
        }
        if (c == 't') {
            ++pos;
            return Guard::t();
        }
        if (c == 'f') {
            ++pos;
            return Guard::f();
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) throw HoaError("bad label syntax");
        std::size_t v = 0;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
            v = v * 10 + static_cast<std::size_t>(src[pos++] - '0');
        if (v >= aps.size()) throw HoaError("AP index out of range in label");
        return Guard::lit(aps[v]);
    }
};

struct HeaderInfo {
    int num_states = -1;
    int start = 0;
    std::vector<std::string> ap_names;
    std::string acc_name;
    int rabin_pairs = 0;
    std::string acceptance;
};

std::vector<std::string> split_quoted(const std::string& line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while ((i = line.find('"', i)) != std::string::npos) {
        std::size_t j = line.find('"', i + 1);
        if (j == std::string::npos) throw HoaError("unterminated AP string");
        out.push_back(line.substr(i + 1, j - i - 1));
        i = j + 1;
    }
    return out;
}

}  // namespace

HoaAutomaton hoa_import(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    HeaderInfo hdr;
    bool saw_hoa = false;

    while (std::getline(in, line)) {
        if (line.rfind("--BODY--", 0) == 0) break;
        if (line.rfind("HOA:", 0) == 0) {
            saw_hoa = true;
        } else if (line.rfind("States:", 0) == 0) {
            hdr.num_states = std::stoi(line.substr(7));
        } else if (line.rfind("Start:", 0) == 0) {
            hdr.start = std::stoi(line.substr(6));
        } else if (line.rfind("AP:", 0) == 0) {
            hdr.ap_names = split_quoted(line);
        } else if (line.rfind("acc-name:", 0) == 0) {
            std::istringstream ls(line.substr(9));
            ls >> hdr.acc_name >> hdr.rabin_pairs;
        } else if (line.rfind("Acceptance:", 0) == 0) {
            hdr.acceptance = line.substr(11);
        }
    }
    if (!saw_hoa) throw HoaError("missing HOA: header");
    if (hdr.num_states < 0) throw HoaError("missing States: header");
    if (hdr.acc_name != "Buchi" && hdr.acc_name != "Rabin")
        throw HoaError("unsupported acceptance: " +
                       (hdr.acc_name.empty() ? std::string("<none>") : hdr.acc_name));

    std::vector<AtomRef> aps;
    for (const auto& n : hdr.ap_names) aps.push_back(atom_ref_from_ap(n));

    struct RawEdge {
        int src, dst;
        Guard guard;
    };
    std::vector<RawEdge> edges;
    std::vector<std::set<int>> state_sets(hdr.num_states);

    int current = -1;
    while (std::getline(in, line)) {
        if (line.rfind("--END--", 0) == 0) break;
        // strip comments and whitespace
        std::string s = line;
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        std::size_t b = 0;
        while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        s = s.substr(b);
        if (s.empty()) continue;
        if (s.rfind("State:", 0) == 0) {
            std::string rest = s.substr(6);
            std::set<int> marks;
            auto lb = rest.find('{');
            if (lb != std::string::npos) {
                auto rb = rest.find('}', lb);
                std::istringstream ms(rest.substr(lb + 1, rb - lb - 1));
                int m;
                while (ms >> m) marks.insert(m);
                rest = rest.substr(0, lb);
            }
            current = std::stoi(rest);
            if (current < 0 || current >= hdr.num_states) throw HoaError("state id out of range");
            state_sets[current] = marks;
            continue;
        }
        if (current < 0) throw HoaError("edge before any State: line");
        // edge: [label] dest
        if (s[0] != '[') throw HoaError("expected labeled edge: " + s);
        auto rb = s.find(']');
        if (rb == std::string::npos) throw HoaError("unterminated label");
        LabelParser lp{std::string_view(s).substr(1, rb - 1), 0, aps};
        Guard g = lp.parse();
        int dst = std::stoi(s.substr(rb + 1));
        if (dst < 0 || dst >= hdr.num_states) throw HoaError("edge target out of range");
        edges.push_back({current, dst, std::move(g)});
    }

    if (hdr.acc_name == "Buchi") {
        BuchiAutomaton aut;
        aut.num_states = hdr.num_states;
        aut.initial = hdr.start;
        for (auto& e : edges) aut.edges.push_back({e.src, e.dst, e.guard});
        for (int s = 0; s < hdr.num_states; ++s)
            if (state_sets[s].count(0)) aut.accepting.insert(s);
        return aut;
    }
    RabinAutomaton aut;
    aut.num_states = hdr.num_states;
    aut.initial = hdr.start;
    for (auto& e : edges) aut.edges.push_back({e.src, e.dst, e.guard});
    aut.pairs.resize(hdr.rabin_pairs);
    for (int s = 0; s < hdr.num_states; ++s)
        for (int m : state_sets[s]) {
            int pair = m / 2;
            if (pair >= hdr.rabin_pairs) throw HoaError("acceptance mark out of range");
            // Fin(2i) & Inf(2i+1): even marks are B_i, odd are G_i
            if (m % 2 == 0)
                aut.pairs[pair].B.insert(s);
            else
                aut.pairs[pair].G.insert(s);
        }
    return aut;
}

namespace {

std::vector<AtomRef> collect_aps(const std::vector<Edge>& edges) {
    std::vector<AtomRef> aps;
    for (const auto& e : edges)
        for (const auto& a : e.guard.atoms()) aps.push_back(a);
    std::sort(aps.begin(), aps.end());
    aps.erase(std::unique(aps.begin(), aps.end()), aps.end());
    return aps;
}

std::string label_of(const Guard& g, const std::vector<AtomRef>& aps) {
    auto index_of = [&](const AtomRef& a) {
        return std::find(aps.begin(), aps.end(), a) - aps.begin();
    };
    switch (g.kind) {
        case Guard::Kind::True: return "t";
        case Guard::Kind::False: return "f";
        case Guard::Kind::Lit:
            return (g.positive ? "" : "!") + std::to_string(index_of(g.atom));
        case Guard::Kind::And: {
            std::string s;
            for (std::size_t i = 0; i < g.kids.size(); ++i) {
                if (i) s += "&";
                bool paren = g.kids[i].kind == Guard::Kind::Or;
                s += paren ? "(" + label_of(g.kids[i], aps) + ")" : label_of(g.kids[i], aps);
            }
            return s;
        }
        case Guard::Kind::Or: {
            std::string s;
            for (std::size_t i = 0; i < g.kids.size(); ++i) {
                if (i) s += " | ";
                s += label_of(g.kids[i], aps);
            }
            return s;
        }
    }
    return "t";
}

void write_body(std::ostream& os, int num_states, const std::vector<Edge>& edges,
                const std::vector<AtomRef>& aps,
                const std::function<std::string(int)>& marks) {
    os << "--BODY--\n";
    for (int s = 0; s < num_states; ++s) {
        os << "State: " << s << marks(s) << "\n";
        for (const auto& e : edges)
            if (e.src == s) os << "  [" << label_of(e.guard, aps) << "] " << e.dst << "\n";
    }
    os << "--END--\n";
}

}  // namespace

std::string hoa_export(const BuchiAutomaton& aut) {
    auto aps = collect_aps(aut.edges);
    std::ostringstream os;
    os << "HOA: v1\n";
    os << "States: " << aut.num_states << "\n";
    os << "Start: " << aut.initial << "\n";
    os << "AP: " << aps.size();
    for (const auto& a : aps) os << " \"" << a.key() << "\"";
    os << "\n";
    os << "acc-name: Buchi\n";
    os << "Acceptance: 1 Inf(0)\n";
    write_body(os, aut.num_states, aut.edges, aps, [&](int s) {
        return aut.accepting.count(s) ? std::string(" {0}") : std::string();
    });
    return os.str();
}

std::string hoa_export(const RabinAutomaton& aut) {
    auto aps = collect_aps(aut.edges);
    std::ostringstream os;
    os << "HOA: v1\n";
    os << "States: " << aut.num_states << "\n";
    os << "Start: " << aut.initial << "\n";
    os << "AP: " << aps.size();
    for (const auto& a : aps) os << " \"" << a.key() << "\"";
    os << "\n";
    os << "acc-name: Rabin " << aut.pairs.size() << "\n";
    os << "Acceptance: " << 2 * aut.pairs.size();
    if (aut.pairs.empty()) {
        os << " f";
    } else {
        for (std::size_t i = 0; i < aut.pairs.size(); ++i) {
            if (i) os << " |";
            os << " (Fin(" << 2 * i << ")&Inf(" << 2 * i + 1 << "))";
        }
    }
    os << "\n";
    write_body(os, aut.num_states, aut.edges, aps, [&](int s) {
        std::string m;
        for (std::size_t i = 0; i < aut.pairs.size(); ++i) {
            if (aut.pairs[i].B.count(s)) m += m.empty() ? "" : " ", m += std::to_string(2 * i);
            if (aut.pairs[i].G.count(s)) m += m.empty() ? "" : " ", m += std::to_string(2 * i + 1);
        }
        return m.empty() ? std::string() : " {" + m + "}";
    });
    return os.str();
}

}  // namespace hyperbc
