#ifndef LINGRAPH_TEST_ORACLES_HPP
#define LINGRAPH_TEST_ORACLES_HPP

#include <map>
#include <set>

#include "lingraph/derivation.hpp"
#include "lingraph/tuple_automaton.hpp"

namespace lingraph::oracles {

// Brute-force interpretation of the word structure underlying a grammar's
// language, restricted to words of length <= depth, built from enumerated
// layers. Used as the independent reference for the presentation automata.
struct StructureOracle {
    std::set<Word> vertices;
    std::set<Word> edges;
    std::map<Sym, std::set<Word>> by_vlabel;
    std::map<Sym, std::set<WordTuple>> by_elabel; // triples (src, edge, dst)
    std::set<WordTuple> prefix_pairs;
    std::set<WordTuple> same_layer_pairs;
    std::set<WordTuple> eq_pairs;
    std::set<WordTuple> compat_pairs;

    std::set<Word> domain() const {
        std::set<Word> d = vertices;
        d.insert(edges.begin(), edges.end());
        return d;
    }
};

inline StructureOracle structure_oracle(const Grammar& g, int depth, bool with_compat = true) {
    StructureOracle o;
    auto layers = derive_layers(g, depth);
    std::vector<std::set<Word>> layer_elems(static_cast<size_t>(depth) + 1);
    for (const auto& ls : layers) {
        for (const auto& gr : ls.graphs) {
            for (size_t i = 0; i < gr.vertices.size(); ++i) {
                o.vertices.insert(gr.vertices[i]);
                o.by_vlabel[gr.vlabel[i]].insert(gr.vertices[i]);
                layer_elems[static_cast<size_t>(ls.depth)].insert(gr.vertices[i]);
            }
            for (const auto& w : gr.edges) {
                o.edges.insert(w);
                layer_elems[static_cast<size_t>(ls.depth)].insert(w);
            }
            for (const auto& in : gr.incidences)
                o.by_elabel[in.label].insert({gr.vertices[static_cast<size_t>(in.src)],
                                              gr.edges[static_cast<size_t>(in.edge)],
                                              gr.vertices[static_cast<size_t>(in.dst)]});
        }
    }
    std::set<Word> dom = o.domain();
    for (const Word& u : dom) {
        o.eq_pairs.insert({u, u});
        for (const Word& v : dom) {
            if (is_prefix(u, v)) o.prefix_pairs.insert({u, v});
            if (u.size() == v.size()) o.same_layer_pairs.insert({u, v});
        }
    }
    if (with_compat) {
        for (int l = 1; l <= depth; ++l) {
            auto chi = incompatibility(g, l);
            for (const Word& u : layer_elems[static_cast<size_t>(l)])
                for (const Word& v : layer_elems[static_cast<size_t>(l)])
                    if (!chi.count({u, v}) || u == v) o.compat_pairs.insert({u, v});
        }
    }
    return o;
}

inline std::set<WordTuple> unary_to_tuples(const std::set<Word>& s) {
    std::set<WordTuple> out;
    for (const Word& w : s) out.insert({w});
    return out;
}

} // namespace lingraph::oracles

#endif
