#ifndef LINGRAPH_TEST_FIXTURES_HPP
#define LINGRAPH_TEST_FIXTURES_HPP

#include <string>

#include "lingraph/grammar.hpp"

namespace lingraph::fixtures {

// The running two-production example: one vertex label A, one edge label a,
// an axiom chain of three vertices, and two loop edge productions with
// opposite orientations.
inline std::string ex43_text() {
    return R"(labels v: A Ax
labels e: a
names v: 0 1 2 3 4
names e: al be ga de
axiom Ax
vprod P0: Ax -> { v: 0:A 1:A 2:A ; i: a(0,al,1) a(1,be,2) }
vprod P1: A -> { v: 3:A }
vprod P2: A -> { v: 4:A }
eprod E1: P1 -a-> P1 { >a(3,ga,3) }
eprod E2: P2 -a-> P2 { <a(4,de,4) }
)";
}

// ex43 extended with a cross production P1 -a-> P2.
inline std::string ex44_text() {
    return R"(labels v: A Ax
labels e: a
names v: 0 1 2 3 4
names e: al be ga de ze
axiom Ax
vprod P0: Ax -> { v: 0:A 1:A 2:A ; i: a(0,al,1) a(1,be,2) }
vprod P1: A -> { v: 3:A }
vprod P2: A -> { v: 4:A }
eprod E1: P1 -a-> P1 { >a(3,ga,3) }
eprod E2: P2 -a-> P2 { <a(4,de,4) }
eprod E3: P1 -a-> P2 { >a(3,ze,4) }
)";
}

// D0L grammar of 2^n x 2^n directed grids; a points east, b points south.
// Layout of the quad: 1 2 / 3 4. The axiom carries the unique label A.
inline std::string grid_text() {
    return R"(labels v: A
labels e: a b
names v: 1 2 3 4
names e: e1 e2 e3 e4 f1 f2 f3 f4
axiom A
vprod PA: A -> { v: 1:A 2:A 3:A 4:A ; i: a(1,e1,2) a(3,e2,4) b(1,e3,3) b(2,e4,4) }
eprod EA: PA -a-> PA { >a(2,f1,1) >a(4,f2,3) }
eprod EB: PA -b-> PA { >b(3,f3,1) >b(4,f4,2) }
)";
}

// D0L grammar of hypercubes as undirected (twin-incidence) graphs; the
// vertex production doubles each vertex and links the two copies.
inline std::string hypercube_text() {
    return R"(labels v: A
labels e: s
names v: h0 h1
names e: c d0 d1
axiom A
vprod PA: A -> { v: h0:A h1:A ; u: s(h0,c,h1) }
eprod ES: PA -s-> PA { >s(h0,d0,h0) >s(h1,d1,h1) }
)";
}

// Finite language: the single A vertex turns into a B vertex, which erases.
inline std::string extinction_text() {
    return R"(labels v: A B Ax
labels e:
names v: n1 n2
names e:
axiom Ax
vprod P0: Ax -> { v: n1:A }
vprod P1: A -> { v: n2:B }
vprod P2: B -> { }
)";
}

// No axiom production at all: empty language.
inline std::string no_axiom_text() {
    return R"(labels v: A Ax
labels e:
names v: n1
names e:
axiom Ax
vprod P1: A -> { v: n1:A }
)";
}

inline Grammar ex43() { return parse_grammar_text(ex43_text()); }
inline Grammar ex44() { return parse_grammar_text(ex44_text()); }
inline Grammar grid() { return parse_grammar_text(grid_text()); }
inline Grammar hypercube() { return parse_grammar_text(hypercube_text()); }
inline Grammar extinction() { return parse_grammar_text(extinction_text()); }
inline Grammar no_axiom() { return parse_grammar_text(no_axiom_text()); }

} // namespace lingraph::fixtures

#endif
