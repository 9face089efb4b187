#ifndef LINGRAPH_GRAPH_HPP
#define LINGRAPH_GRAPH_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lingraph/symbols.hpp"

namespace lingraph {

// Shared naming context for graphs and grammars. Vertex names and edge names
// live in one table (words mix them); vertex labels and edge labels in another.
struct Alphabets {
    SymbolTable names;   // vertex names (Theta) and edge names (Omega)
    SymbolTable vlabels; // Gamma plus possible axiom label
    SymbolTable elabels; // Sigma

    std::vector<char> name_is_edge; // indexed by name Sym; true if in Omega

    Sym intern_vertex_name(const std::string& s) {
        Sym id = names.intern(s);
        ensure(id);
        if (name_is_edge[static_cast<size_t>(id)])
            throw ParseError("name used as both vertex and edge name: " + s);
        return id;
    }
    Sym intern_edge_name(const std::string& s) {
        Sym id = names.intern(s);
        ensure(id);
        name_is_edge[static_cast<size_t>(id)] = true;
        return id;
    }
    bool is_edge_name(Sym id) const {
        return id >= 0 && static_cast<size_t>(id) < name_is_edge.size() &&
               name_is_edge[static_cast<size_t>(id)];
    }

    std::string word_str(const Word& w) const {
        std::string out;
        for (size_t i = 0; i < w.size(); ++i) {
            if (i) out += '.';
            out += names.name(w[i]);
        }
        return out;
    }

private:
    void ensure(Sym id) {
        if (static_cast<size_t>(id) >= name_is_edge.size())
            name_is_edge.resize(static_cast<size_t>(id) + 1, false);
    }
};

struct Incidence {
    Sym label;  // in Sigma
    int src;    // index into vertices
    int edge;   // index into edges
    int dst;    // index into vertices
    bool operator==(const Incidence&) const = default;
};

// Incidence structure (V, E, l, I). Vertices are words over Theta, edges words
// over Theta* Omega+, and the incidence-to-edge map is a bijection.
struct ConcreteGraph {
    std::vector<Word> vertices;
    std::vector<Sym> vlabel; // parallel to vertices
    std::vector<Word> edges;
    std::vector<Incidence> incidences;

    int find_vertex(const Word& w) const {
        for (size_t i = 0; i < vertices.size(); ++i)
            if (vertices[i] == w) return static_cast<int>(i);
        return -1;
    }
    int find_edge(const Word& w) const {
        for (size_t i = 0; i < edges.size(); ++i)
            if (edges[i] == w) return static_cast<int>(i);
        return -1;
    }
    int add_vertex(const Word& w, Sym label) {
        vertices.push_back(w);
        vlabel.push_back(label);
        return static_cast<int>(vertices.size()) - 1;
    }
    // Adds edge word and its unique incidence together.
    void add_incidence(Sym label, int src, const Word& edge_word, int dst) {
        edges.push_back(edge_word);
        incidences.push_back(Incidence{label, src, static_cast<int>(edges.size()) - 1, dst});
    }
    bool empty() const { return vertices.empty() && edges.empty(); }

    // All vertex and edge words, sorted; identity of a derived graph.
    std::vector<Word> name_set() const;
    // Uniform word length, or -1 when words disagree (or graph is empty: 0).
    int layer() const;
};

struct Diagnostic {
    std::string message;
};
using Diagnostics = std::vector<Diagnostic>;

Diagnostics validate_graph(const ConcreteGraph& g, const Alphabets& al);

struct GraphBijection {
    std::vector<int> vertex_map; // index in g1 -> index in g2
    std::vector<int> edge_map;
};

// Label-, direction- and incidence-preserving bijection, or nullopt.
// Deterministic for fixed input ordering.
std::optional<GraphBijection> graph_isomorphic(const ConcreteGraph& g1, const ConcreteGraph& g2);

// Undirected reading of a graph stored as twin directed incidences.
struct UndirectedView {
    bool valid = false;             // every directed incidence has a reverse twin
    std::string problem;            // set when not valid
    int n = 0;                      // vertex count
    std::vector<std::vector<int>> adj; // adj[u][v] = undirected multiplicity; loops counted once here
    std::vector<int> degree;        // port-counting degree (loops add 2)
    std::vector<std::pair<int, int>> twins; // paired incidence indices (fwd, bwd)

    bool regular(int* deg_out = nullptr) const;
};

UndirectedView undirected_view(const ConcreteGraph& g);

std::string to_dot(const ConcreteGraph& g, const Alphabets& al);

} // namespace lingraph

#endif
