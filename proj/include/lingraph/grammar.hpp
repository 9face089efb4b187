#ifndef LINGRAPH_GRAMMAR_HPP
#define LINGRAPH_GRAMMAR_HPP

#include <iosfwd>
#include <memory>
#include <set>
#include <string>

#include "lingraph/graph.hpp"

namespace lingraph {

struct VertexProduction {
    std::string name;   // production identifier from the grammar file
    Sym lhs;            // label in Gamma or the axiom label
    ConcreteGraph rhs;  // layer-1 graph
    bool erasing() const { return rhs.vertices.empty(); }
};

// One right-hand-side incidence of an edge production, stored canonically:
// src_name belongs to the lhs source production's rhs, dst_name to the target
// production's rhs. reversed=false creates b(u.src, w.edge, v.dst) from a
// matched incidence a(u,w,v); reversed=true creates b(v.dst, w.edge, u.src).
struct EdgeRhsIncidence {
    Sym label;    // b in Sigma
    Sym src_name; // in rhs(P1)
    Sym edge_name;
    Sym dst_name; // in rhs(P2)
    bool reversed;
};

struct EdgeProduction {
    std::string name;
    int p1;          // index of lhs source vertex production
    Sym label;       // a in Sigma
    int p2;          // index of lhs target vertex production
    std::vector<EdgeRhsIncidence> rhs;
    bool erasing() const { return rhs.empty(); }
};

// Where a name is produced: in a vertex production's rhs (vertex or innate
// edge name), or in an edge production's rhs.
struct NameOrigin {
    enum Kind { kNone, kVertexProd, kEdgeProd } kind = kNone;
    int index = -1;
};

struct Grammar {
    std::shared_ptr<Alphabets> al;
    Sym axiom = kNoSym;                  // in vlabels; may or may not be in gamma
    std::vector<Sym> gamma;              // vertex labels (excludes axiom when external)
    std::vector<Sym> sigma;              // edge labels
    std::vector<VertexProduction> vprods;
    std::vector<EdgeProduction> eprods;
    std::set<Sym> nonterminal_vlabels;
    std::set<Sym> nonterminal_elabels;

    // Synthetic labels recorded by complete_grammar.
    Sym synth_isolated = kNoSym; // vertex label "i"
    Sym synth_bang = kNoSym;     // edge label "!"

    bool axiom_in_gamma() const {
        for (Sym g : gamma)
            if (g == axiom) return true;
        return false;
    }
    bool has_nonterminals() const {
        return !nonterminal_vlabels.empty() || !nonterminal_elabels.empty();
    }

    // name -> producing production; valid only after validate_grammar passes.
    std::vector<NameOrigin> name_origins() const;

    std::vector<int> vprods_with_lhs(Sym label) const {
        std::vector<int> out;
        for (size_t i = 0; i < vprods.size(); ++i)
            if (vprods[i].lhs == label) out.push_back(static_cast<int>(i));
        return out;
    }
    std::vector<int> eprods_with_lhs(int p1, Sym label, int p2) const {
        std::vector<int> out;
        for (size_t i = 0; i < eprods.size(); ++i)
            if (eprods[i].p1 == p1 && eprods[i].label == label && eprods[i].p2 == p2)
                out.push_back(static_cast<int>(i));
        return out;
    }

    // Label of the rhs vertex carrying the given vertex name (kNoSym if none).
    Sym rhs_vertex_label(Sym name) const;
};

Diagnostics validate_grammar(const Grammar& g);

struct GrammarClass {
    bool complete = false;
    bool edge_deterministic = false;   // lhs of E_G are pairwise distinct
    bool vertex_deterministic = false; // one vertex production per label
    bool deterministic = false;
    bool non_erasing = false;
};

// Precondition: g validates.
GrammarClass classify_grammar(const Grammar& g);

// Text format (.0lg). See README for the syntax.
Grammar parse_grammar(std::istream& in);
Grammar parse_grammar_file(const std::string& path);
Grammar parse_grammar_text(const std::string& text);
std::string print_grammar(const Grammar& g);

} // namespace lingraph

#endif
