#ifndef LINGRAPH_TUPLE_AUTOMATON_HPP
#define LINGRAPH_TUPLE_AUTOMATON_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lingraph/symbols.hpp"

namespace lingraph {

// Blank padding slot inside a tuple letter.
constexpr Sym kBlank = -1;

// A letter is an X-tuple over the base alphabet extended with the blank.
using Letter = std::vector<Sym>;

// Tuple of words indexed by component position.
using WordTuple = std::vector<Word>;

// Convolution: letter-wise zip with blank padding; length = max component length.
std::vector<Letter> convolve(const WordTuple& t);
// Inverse; rejects words with holes (blank followed by a non-blank in a component).
WordTuple deconvolve(const std::vector<Letter>& w, size_t arity);

// Finite automaton over tuple letters. All values are kept canonical: the
// accepted words are hole-free and contain no all-blank letter, so each tuple
// has exactly one accepted encoding.
struct TupleAutomaton {
    std::vector<std::string> comps; // component names; arity == comps.size()
    int num_states = 0;
    int initial = 0;
    std::vector<char> finals;
    struct Tr {
        int from;
        int to;
        Letter letter;
    };
    std::vector<Tr> trans;

    size_t arity() const { return comps.size(); }
    int add_state(bool fin = false) {
        finals.push_back(fin ? 1 : 0);
        return num_states++;
    }
    void add_tr(int from, const Letter& l, int to) { trans.push_back({from, to, l}); }
    bool is_final(int q) const { return finals[static_cast<size_t>(q)] != 0; }

    std::vector<std::vector<int>> out_index() const; // state -> transition indices
    std::vector<std::vector<int>> in_index() const;
};

// Single-state automaton accepting all words over the given symbols (unary).
TupleAutomaton universe_star(const std::vector<Sym>& alphabet, const std::string& comp = "1");
// Automaton accepting nothing over the given components.
TupleAutomaton empty_automaton(const std::vector<std::string>& comps);

TupleAutomaton rename_comps(const TupleAutomaton& a, const std::vector<std::string>& comps);

// Reachable/co-reachable trimming. Keeps canonicity.
TupleAutomaton trim(const TupleAutomaton& a);

// Restores canonicity: accepts states reaching a final via all-blank letters,
// drops all-blank transitions, and re-imposes hole-freedom via finished masks.
TupleAutomaton canonicalize(const TupleAutomaton& a);

// Boolean operations over identical component lists.
TupleAutomaton union_same(const TupleAutomaton& a, const TupleAutomaton& b);
TupleAutomaton difference(const TupleAutomaton& a, const TupleAutomaton& b);

// Conjunctive product over the union of the two component lists; shared
// components synchronize, private ones are constrained by their own side.
TupleAutomaton intersect_conjoin(const TupleAutomaton& a, const TupleAutomaton& b);

// Subset construction restricted to letters present in the automaton.
TupleAutomaton determinize(const TupleAutomaton& a);

// universe^comps minus a. The universe is given by its unary automaton; every
// component runs an independent copy (the free product of |comps| copies).
TupleAutomaton complement_within(const TupleAutomaton& a, const TupleAutomaton& unary_universe,
                                 uint64_t max_transitions = 50000000);

// Explicit free power of a unary automaton (for tests and small arities).
TupleAutomaton free_power(const TupleAutomaton& unary, const std::vector<std::string>& comps);

// {(u,u) : u accepted}; component names doubled with the given suffix.
TupleAutomaton diagonal(const TupleAutomaton& b, const std::string& suffix = "'");

// Synchronous pairing of equal-length words. Component lists must be disjoint.
TupleAutomaton loose_product(const TupleAutomaton& a, const TupleAutomaton& b);

// (Q1 u Q2, D1 u switch u D2, I1, F2); switch transitions are given with state
// ids local to a and b respectively.
struct SwitchTr {
    int from_a;
    Letter letter;
    int to_b;
};
TupleAutomaton concat_via(const TupleAutomaton& a, const std::vector<SwitchTr>& sw,
                          const TupleAutomaton& b);

// The upturn along a partial map sigma: result comps -> source comps. Source
// components not referenced by sigma are projected out (existentially);
// unconstrained result components run the given unary universe.
TupleAutomaton upturn(const TupleAutomaton& a, const std::vector<std::string>& result_comps,
                      const std::map<std::string, std::string>& sigma,
                      const TupleAutomaton& unary_universe);

// Pullback for atoms: sigma maps each source component position to a result
// component name; repeated targets impose equality of the source components.
// Result components outside the image run the universe.
TupleAutomaton pullback(const TupleAutomaton& a, const std::vector<std::string>& result_comps,
                        const std::vector<std::string>& sigma_by_position,
                        const TupleAutomaton& unary_universe);

TupleAutomaton project_onto(const TupleAutomaton& a, const std::vector<std::string>& kept);
TupleAutomaton project_out(const TupleAutomaton& a, const std::vector<std::string>& dropped);

bool is_empty(const TupleAutomaton& a);
bool accepts(const TupleAutomaton& a, const WordTuple& t);

// All accepted tuples whose convolution length is at most max_len.
std::set<WordTuple> enumerate_relation(const TupleAutomaton& a, size_t max_len);

// Shortest accepted tuple in length-lexicographic order, if any.
std::optional<WordTuple> shortest_witness(const TupleAutomaton& a, size_t search_limit = 64);

// Intersects with the canonical hole-free universe over the automaton's own letters.
TupleAutomaton hole_free_filter(const TupleAutomaton& a);

} // namespace lingraph

#endif
