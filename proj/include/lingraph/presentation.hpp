#ifndef LINGRAPH_PRESENTATION_HPP
#define LINGRAPH_PRESENTATION_HPP

#include <map>
#include <string>

#include "lingraph/derivation.hpp"
#include "lingraph/tuple_automaton.hpp"

namespace lingraph {

// Injective automatic presentation of the structure gathering all vertices
// and edges generated by a complete grammar, with identity coding.
struct Presentation {
    Grammar grammar;

    TupleAutomaton domain;                 // words of V(G) u E(G)
    TupleAutomaton eq;                     // identity pairs
    TupleAutomaton vrt;
    TupleAutomaton edg;
    std::map<Sym, TupleAutomaton> vlabels; // unary, one per vertex label
    std::map<Sym, TupleAutomaton> erels;   // ternary, one per edge label
    TupleAutomaton prefix;                 // u is a prefix of v
    TupleAutomaton same_layer;             // equal-length domain pairs
    TupleAutomaton chi0;
    TupleAutomaton chi;
    TupleAutomaton compat;                 // layerwise complement of chi

    // Predicate lookup by surface name; arity implied by the table.
    struct Pred {
        const TupleAutomaton* aut;
        int arity;
    };
    Pred find_predicate(const std::string& name) const;

    std::vector<Sym> domain_alphabet() const; // Theta u Omega as used by the automata
};

TupleAutomaton build_vrt(const Grammar& g);
TupleAutomaton build_vertex_label(const Grammar& g, Sym label);

// Auxiliary incidence automaton: ternary, direction tagged. Forward-tagged
// final states claim a(c1,c2,c3), backward-tagged ones a(c3,c2,c1).
struct IncidenceAutomaton {
    TupleAutomaton aut; // finals = all tagged states
    // Per-state tag: -1 for untagged (start/diamond), else edge label.
    std::vector<Sym> tag_label;
    std::vector<char> tag_backward;
};
IncidenceAutomaton build_incidence(const Grammar& g);

TupleAutomaton build_edge_relation(const Grammar& g, Sym label);
// Returns (edg, domain).
std::pair<TupleAutomaton, TupleAutomaton> build_edg_delta(const Grammar& g);
// Returns (eq, prefix, same_layer).
std::tuple<TupleAutomaton, TupleAutomaton, TupleAutomaton> build_order_relations(const Grammar& g);
TupleAutomaton build_chi0(const Grammar& g);
// chi from the first-order definition over chi0, the incidence relations and
// the prefix order; compat as the complement of chi within same_layer.
std::pair<TupleAutomaton, TupleAutomaton> build_compat(const Grammar& g);

// auto_complete: pass non-complete grammars through complete_grammar first.
Presentation build_presentation(const Grammar& g, bool auto_complete = true);

} // namespace lingraph

#endif
