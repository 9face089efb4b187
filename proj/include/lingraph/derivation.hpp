#ifndef LINGRAPH_DERIVATION_HPP
#define LINGRAPH_DERIVATION_HPP

#include <atomic>
#include <cstdint>
#include <set>

#include "lingraph/grammar.hpp"

namespace lingraph {

constexpr uint64_t kDefaultLayerCap = 10000;
constexpr uint64_t kDefaultCompatCap = 200000;

// Assignment of a vertex production to every vertex and an edge production to
// every edge of a source graph; indices are parallel to the graph's arrays.
struct Homomorphism {
    std::vector<int> vassign; // vertex index -> vertex production index
    std::vector<int> eassign; // edge index -> edge production index
};

ConcreteGraph axiom_graph(const Grammar& g);

std::vector<Homomorphism> enumerate_homomorphisms(const ConcreteGraph& src, const Grammar& g,
                                                  uint64_t cap = kDefaultLayerCap);

ConcreteGraph derive_step(const ConcreteGraph& src, const Homomorphism& h, const Grammar& g);

struct LayerSet {
    int depth = 0;
    std::vector<ConcreteGraph> graphs;
};

// Layers 1..depth; layer l holds the graphs reachable in exactly l steps from
// the axiom graph, deduplicated by name set and sorted for stable output.
std::vector<LayerSet> derive_layers(const Grammar& g, int depth, uint64_t cap = kDefaultLayerCap,
                                    const std::atomic<bool>* cancel = nullptr);

LayerSet filter_nonterminals(const LayerSet& layer, const Grammar& g,
                             const std::set<Sym>& nv, const std::set<Sym>& ne);

// Prop 4.2 completion with fresh non-terminal labels "i" and "!".
Grammar complete_grammar(const Grammar& g);

// Brute-force incompatibility relation restricted to layer l, from enumerated
// layers. Symmetric and irreflexive.
std::set<std::pair<Word, Word>> incompatibility(const Grammar& g, int l,
                                                uint64_t cap = kDefaultLayerCap);

// All subset-maximal pairwise-compatible subsets of layer l's names.
std::vector<std::vector<Word>> maximal_compatible_sets(const Grammar& g, int l,
                                                       uint64_t cap = kDefaultCompatCap);

struct UnixVerdict {
    bool is_unix = true;
    int violating_layer = -1; // first layer with >= 2 derivations
    size_t layer_size = 0;
};

UnixVerdict unix_check_bounded(const Grammar& g, int depth, uint64_t cap = kDefaultLayerCap);

} // namespace lingraph

#endif
