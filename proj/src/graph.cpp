#include "lingraph/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace lingraph {

std::vector<Word> ConcreteGraph::name_set() const {
    std::vector<Word> out;
    out.reserve(vertices.size() + edges.size());
    out.insert(out.end(), vertices.begin(), vertices.end());
    out.insert(out.end(), edges.begin(), edges.end());
    std::sort(out.begin(), out.end());
    return out;
}

int ConcreteGraph::layer() const {
    size_t len = 0;
    bool seen = false;
    for (const auto& w : vertices) {
        if (!seen) { len = w.size(); seen = true; }
        else if (w.size() != len) return -1;
    }
    for (const auto& w : edges) {
        if (!seen) { len = w.size(); seen = true; }
        else if (w.size() != len) return -1;
    }
    return static_cast<int>(len);
}

Diagnostics validate_graph(const ConcreteGraph& g, const Alphabets& al) {
    Diagnostics d;
    auto bad = [&d](const std::string& m) { d.push_back({m}); };

    std::set<Word> vseen;
    for (size_t i = 0; i < g.vertices.size(); ++i) {
        const Word& w = g.vertices[i];
        for (Sym s : w)
            if (al.is_edge_name(s))
                bad("vertex word contains an edge name: " + al.word_str(w));
        if (!vseen.insert(w).second) bad("duplicate vertex word: " + al.word_str(w));
        if (i >= g.vlabel.size() || !al.vlabels.contains(g.vlabel[i]))
            bad("vertex without a label: " + al.word_str(w));
    }

    std::set<Word> eseen;
    for (const Word& w : g.edges) {
        if (w.empty()) { bad("empty edge word"); continue; }
        if (!al.is_edge_name(w.back()))
            bad("edge word does not end with an edge name: " + al.word_str(w));
        bool in_suffix = false;
        for (Sym s : w) {
            if (al.is_edge_name(s)) in_suffix = true;
            else if (in_suffix)
                bad("edge word has a vertex name after an edge name: " + al.word_str(w));
        }
        if (!eseen.insert(w).second) bad("duplicate edge word: " + al.word_str(w));
    }

    if (g.incidences.size() != g.edges.size())
        bad("incidence count " + std::to_string(g.incidences.size()) +
            " differs from edge count " + std::to_string(g.edges.size()));
    std::set<int> used_edges;
    for (const Incidence& inc : g.incidences) {
        if (inc.src < 0 || inc.src >= static_cast<int>(g.vertices.size()) ||
            inc.dst < 0 || inc.dst >= static_cast<int>(g.vertices.size())) {
            bad("incidence endpoint is not a vertex of the graph");
            continue;
        }
        if (inc.edge < 0 || inc.edge >= static_cast<int>(g.edges.size())) {
            bad("incidence references an unknown edge");
            continue;
        }
        if (!used_edges.insert(inc.edge).second)
            bad("edge word used by two incidences: " + al.word_str(g.edges[inc.edge]));
        if (!al.elabels.contains(inc.label)) bad("incidence with unknown edge label");
    }

    // Uniform layer length (only meaningful for nonempty graphs).
    if (g.layer() < 0) bad("vertex/edge words have differing lengths");
    return d;
}

namespace {

struct IsoContext {
    const ConcreteGraph* g1;
    const ConcreteGraph* g2;
    std::vector<int> map12;     // vertex -> vertex or -1
    std::vector<int> map21;
    std::vector<std::vector<std::pair<int, int>>> inc_at1; // vertex -> (incidence idx, role 0=src 1=dst)
    std::vector<std::vector<std::pair<int, int>>> inc_at2;
};

// Multiset of (label, src-mapped?, dst-mapped?) incidence signatures must stay
// consistent; full check is done at the end by matching incidences.
bool extend(IsoContext& c, size_t next);

bool incidences_match(const IsoContext& c, std::vector<int>* edge_map) {
    // Group incidences of g1 by (label, mapped src, mapped dst) and match with g2.
    std::map<std::tuple<Sym, int, int>, std::vector<int>> grp1, grp2;
    for (size_t i = 0; i < c.g1->incidences.size(); ++i) {
        const auto& in = c.g1->incidences[i];
        grp1[{in.label, c.map12[in.src], c.map12[in.dst]}].push_back(static_cast<int>(i));
    }
    for (size_t i = 0; i < c.g2->incidences.size(); ++i) {
        const auto& in = c.g2->incidences[i];
        grp2[{in.label, in.src, in.dst}].push_back(static_cast<int>(i));
    }
    if (grp1.size() != grp2.size()) return false;
    edge_map->assign(c.g1->edges.size(), -1);
    for (auto& [key, v1] : grp1) {
        auto it = grp2.find(key);
        if (it == grp2.end() || it->second.size() != v1.size()) return false;
        for (size_t k = 0; k < v1.size(); ++k)
            (*edge_map)[c.g1->incidences[v1[k]].edge] = c.g2->incidences[it->second[k]].edge;
    }
    return true;
}

bool consistent(const IsoContext& c, int v1, int v2) {
    if (c.g1->vlabel[v1] != c.g2->vlabel[v2]) return false;
    if (c.inc_at1[v1].size() != c.inc_at2[v2].size()) return false;
    // Check incidences between already-mapped vertices.
    for (auto [ii, role] : c.inc_at1[v1]) {
        const auto& in = c.g1->incidences[ii];
        int os = c.map12[in.src] != -1 || in.src == v1 ? 0 : 1;
        (void)os;
        int ms = in.src == v1 ? v2 : c.map12[in.src];
        int md = in.dst == v1 ? v2 : c.map12[in.dst];
        if (ms == -1 || md == -1) continue;
        // Count matching incidences in g2 with same label and endpoints.
        int need = 0, have = 0;
        for (auto [jj, r2] : c.inc_at1[v1]) {
            const auto& jn = c.g1->incidences[jj];
            int js = jn.src == v1 ? v2 : c.map12[jn.src];
            int jd = jn.dst == v1 ? v2 : c.map12[jn.dst];
            if (jn.label == in.label && js == ms && jd == md) ++need;
        }
        for (auto [jj, r2] : c.inc_at2[v2]) {
            const auto& jn = c.g2->incidences[jj];
            if (jn.label == in.label && jn.src == ms && jn.dst == md) ++have;
        }
        if (need != have) return false;
    }
    return true;
}

bool extend(IsoContext& c, size_t next) {
    if (next == c.g1->vertices.size()) return true;
    for (size_t v2 = 0; v2 < c.g2->vertices.size(); ++v2) {
        if (c.map21[v2] != -1) continue;
        if (!consistent(c, static_cast<int>(next), static_cast<int>(v2))) continue;
        c.map12[next] = static_cast<int>(v2);
        c.map21[v2] = static_cast<int>(next);
        if (extend(c, next + 1)) return true;
        c.map12[next] = -1;
        c.map21[v2] = -1;
    }
    return false;
}

} // namespace

std::optional<GraphBijection> graph_isomorphic(const ConcreteGraph& g1, const ConcreteGraph& g2) {
    if (g1.vertices.size() != g2.vertices.size() || g1.edges.size() != g2.edges.size())
        return std::nullopt;
    IsoContext c;
    c.g1 = &g1;
    c.g2 = &g2;
    c.map12.assign(g1.vertices.size(), -1);
    c.map21.assign(g2.vertices.size(), -1);
    c.inc_at1.resize(g1.vertices.size());
    c.inc_at2.resize(g2.vertices.size());
    for (size_t i = 0; i < g1.incidences.size(); ++i) {
        c.inc_at1[g1.incidences[i].src].push_back({static_cast<int>(i), 0});
        if (g1.incidences[i].dst != g1.incidences[i].src)
            c.inc_at1[g1.incidences[i].dst].push_back({static_cast<int>(i), 1});
    }
    for (size_t i = 0; i < g2.incidences.size(); ++i) {
        c.inc_at2[g2.incidences[i].src].push_back({static_cast<int>(i), 0});
        if (g2.incidences[i].dst != g2.incidences[i].src)
            c.inc_at2[g2.incidences[i].dst].push_back({static_cast<int>(i), 1});
    }
    if (!extend(c, 0)) return std::nullopt;
    GraphBijection b;
    b.vertex_map = c.map12;
    if (!incidences_match(c, &b.edge_map)) {
        // The greedy vertex search found a degree-consistent map that fails on
        // incidences; fall back to exhaustive search over label classes.
        std::function<bool(size_t)> full = [&](size_t next) -> bool {
            if (next == g1.vertices.size()) {
                return incidences_match(c, &b.edge_map);
            }
            for (size_t v2 = 0; v2 < g2.vertices.size(); ++v2) {
                if (c.map21[v2] != -1) continue;
                if (g1.vlabel[next] != g2.vlabel[v2]) continue;
                c.map12[next] = static_cast<int>(v2);
                c.map21[v2] = static_cast<int>(next);
                if (full(next + 1)) return true;
                c.map12[next] = -1;
                c.map21[v2] = -1;
            }
            return false;
        };
        std::fill(c.map12.begin(), c.map12.end(), -1);
        std::fill(c.map21.begin(), c.map21.end(), -1);
        if (!full(0)) return std::nullopt;
        b.vertex_map = c.map12;
    }
    return b;
}

UndirectedView undirected_view(const ConcreteGraph& g) {
    UndirectedView v;
    v.n = static_cast<int>(g.vertices.size());
    v.adj.assign(v.n, std::vector<int>(v.n, 0));
    v.degree.assign(v.n, 0);

    // Pair each directed incidence u->w with a reverse one w->u of the same label.
    std::map<std::tuple<Sym, int, int>, std::vector<int>> by_key;
    for (size_t i = 0; i < g.incidences.size(); ++i) {
        const auto& in = g.incidences[i];
        by_key[{in.label, in.src, in.dst}].push_back(static_cast<int>(i));
    }
    std::vector<char> used(g.incidences.size(), false);
    for (size_t i = 0; i < g.incidences.size(); ++i) {
        if (used[i]) continue;
        const auto& in = g.incidences[i];
        if (in.src == in.dst) {
            // Directed loops must pair among themselves (twin of a loop is a loop).
            auto& pool = by_key[{in.label, in.src, in.dst}];
            std::vector<int> avail;
            for (int j : pool)
                if (!used[j]) avail.push_back(j);
            if (avail.size() < 2) {
                v.problem = "unpaired loop incidence";
                return v;
            }
            used[avail[0]] = used[avail[1]] = true;
            v.twins.push_back({avail[0], avail[1]});
            v.adj[in.src][in.src] += 1;
            v.degree[in.src] += 2;
            continue;
        }
        auto it = by_key.find({in.label, in.dst, in.src});
        int partner = -1;
        if (it != by_key.end())
            for (int j : it->second)
                if (!used[j]) { partner = j; break; }
        if (partner < 0) {
            v.problem = "incidence without a reverse twin";
            return v;
        }
        used[i] = used[partner] = true;
        v.twins.push_back({static_cast<int>(i), partner});
        v.adj[in.src][in.dst] += 1;
        v.adj[in.dst][in.src] += 1;
        v.degree[in.src] += 1;
        v.degree[in.dst] += 1;
    }
    v.valid = true;
    return v;
}

bool UndirectedView::regular(int* deg_out) const {
    if (!valid || n == 0) return false;
    for (int d : degree)
        if (d != degree[0]) return false;
    if (deg_out) *deg_out = degree[0];
    return true;
}

std::string to_dot(const ConcreteGraph& g, const Alphabets& al) {
    std::ostringstream os;
    os << "digraph G {\n";
    for (size_t i = 0; i < g.vertices.size(); ++i) {
        os << "  \"" << al.word_str(g.vertices[i]) << "\" [label=\""
           << al.vlabels.name(g.vlabel[i]) << "\\n" << al.word_str(g.vertices[i]) << "\"];\n";
    }
    for (const auto& in : g.incidences) {
        os << "  \"" << al.word_str(g.vertices[in.src]) << "\" -> \""
           << al.word_str(g.vertices[in.dst]) << "\" [label=\""
           << al.elabels.name(in.label) << ":" << al.word_str(g.edges[in.edge]) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace lingraph
