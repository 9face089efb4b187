#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "lingraph/presentation.hpp"
#include "oracles.hpp"

using namespace lingraph;

namespace {

// Drop tuples whose components exceed the length bound (enumerate_relation
// bounds the convolution length, which equals the max component length).
std::set<WordTuple> bounded(const std::set<WordTuple>& s, size_t len) {
    std::set<WordTuple> out;
    for (const auto& t : s) {
        bool ok = true;
        for (const auto& w : t) ok = ok && w.size() <= len;
        if (ok) out.insert(t);
    }
    return out;
}

} // namespace

TEST_CASE("A(vrt) matches the generated vertices (Lemma 7.1 oracle)") {
    for (auto base : {fixtures::grid(), fixtures::hypercube()}) {
        Grammar g = classify_grammar(base).complete ? base : complete_grammar(base);
        auto o = oracles::structure_oracle(g, 3, false);
        TupleAutomaton vrt = build_vrt(g);
        CHECK(enumerate_relation(vrt, 3) == oracles::unary_to_tuples(o.vertices));
    }
}

TEST_CASE("A(vrt) shape: |Theta|+1 states, deterministic") {
    Grammar g = fixtures::grid();
    TupleAutomaton vrt = trim(build_vrt(g));
    size_t theta = 0;
    for (size_t n = 0; n < g.al->names.size(); ++n)
        if (!g.al->is_edge_name(static_cast<Sym>(n))) ++theta;
    CHECK(static_cast<size_t>(vrt.num_states) == theta + 1);
    std::set<std::pair<int, Letter>> seen;
    for (const auto& t : vrt.trans) CHECK(seen.insert({t.from, t.letter}).second);
}

TEST_CASE("grammar with no axiom production has empty vertex language") {
    Grammar g = complete_grammar(fixtures::no_axiom());
    CHECK(is_empty(trim(build_vrt(g))));
}

TEST_CASE("vertex label automata partition A(vrt)") {
    Grammar g = complete_grammar(fixtures::extinction());
    auto o = oracles::structure_oracle(g, 3, false);
    std::set<WordTuple> unioned;
    for (Sym a : g.gamma) {
        auto rel = enumerate_relation(build_vertex_label(g, a), 3);
        CHECK(rel == oracles::unary_to_tuples(o.by_vlabel.count(a) ? o.by_vlabel[a]
                                                                   : std::set<Word>{}));
        unioned.insert(rel.begin(), rel.end());
    }
    CHECK(unioned == enumerate_relation(trim(build_vrt(g)), 3));
}

TEST_CASE("incidence automaton is deterministic with one state per edge name") {
    Grammar g = complete_grammar(fixtures::ex43());
    IncidenceAutomaton inc = build_incidence(g);
    std::set<std::pair<int, Letter>> seen;
    for (const auto& t : inc.aut.trans) CHECK(seen.insert({t.from, t.letter}).second);
    // Reachable tagged states carry pairwise distinct edge-name registers.
    TupleAutomaton trimmed = trim(inc.aut);
    std::map<Sym, int> omega_states;
    for (const auto& t : trimmed.trans) {
        Sym mid = t.letter[1];
        if (g.al->is_edge_name(mid)) omega_states[mid]++;
    }
    for (auto& [om, cnt] : omega_states) CHECK(cnt >= 1);
    size_t omega = 0;
    for (size_t n = 0; n < g.al->names.size(); ++n)
        if (g.al->is_edge_name(static_cast<Sym>(n))) ++omega;
    CHECK(omega_states.size() <= omega);
}

TEST_CASE("edge relations match the generated incidences (Lemma 7.3 oracle)") {
    for (auto base : {fixtures::ex43(), fixtures::grid()}) {
        Grammar g = classify_grammar(base).complete ? base : complete_grammar(base);
        auto o = oracles::structure_oracle(g, 3, false);
        for (Sym a : g.sigma) {
            auto rel = enumerate_relation(build_edge_relation(g, a), 3);
            auto want = o.by_elabel.count(a) ? o.by_elabel[a] : std::set<WordTuple>{};
            CHECK(rel == bounded(want, 3));
        }
    }
}

TEST_CASE("the completed running example accepts its layer-2 incidence") {
    Grammar g = complete_grammar(fixtures::ex43());
    const Alphabets& al = *g.al;
    Word w03{al.names.find("0"), al.names.find("3")};
    Word walga{al.names.find("al"), al.names.find("ga")};
    Word w13{al.names.find("1"), al.names.find("3")};
    TupleAutomaton rel = build_edge_relation(g, al.elabels.find("a"));
    CHECK(accepts(rel, {w03, walga, w13}));
    // The all-P2 child is stored reversed: a(14, al.de, 04).
    Word w14{al.names.find("1"), al.names.find("4")};
    Word walde{al.names.find("al"), al.names.find("de")};
    Word w04{al.names.find("0"), al.names.find("4")};
    CHECK(accepts(rel, {w14, walde, w04}));
    CHECK(!accepts(rel, {w04, walde, w14}));
}

TEST_CASE("edg and the domain automaton") {
    Grammar g = complete_grammar(fixtures::ex43());
    auto o = oracles::structure_oracle(g, 3, false);
    auto [edg, delta] = build_edg_delta(g);
    CHECK(enumerate_relation(edg, 3) == oracles::unary_to_tuples(o.edges));
    CHECK(enumerate_relation(delta, 3) == oracles::unary_to_tuples(o.domain()));
    // vrt and edg are disjoint.
    auto ve = enumerate_relation(trim(build_vrt(g)), 3);
    for (const auto& t : enumerate_relation(edg, 3)) CHECK(!ve.count(t));
}

TEST_CASE("order relations: equality, prefix, same layer") {
    Grammar g = fixtures::grid();
    auto o = oracles::structure_oracle(g, 3, false);
    auto [eq, pre, sl] = build_order_relations(g);
    CHECK(enumerate_relation(eq, 3) == bounded(o.eq_pairs, 3));
    CHECK(enumerate_relation(pre, 3) == bounded(o.prefix_pairs, 3));
    CHECK(enumerate_relation(sl, 3) == bounded(o.same_layer_pairs, 3));
}

TEST_CASE("chi0: D0L grammars give the empty relation") {
    CHECK(is_empty(build_chi0(fixtures::grid())));
    CHECK(is_empty(build_chi0(fixtures::hypercube())));
}

TEST_CASE("chi0 on the completed running example (Lemma 7.6 oracle)") {
    Grammar g = complete_grammar(fixtures::ex43());
    const Alphabets& al = *g.al;
    TupleAutomaton chi0 = build_chi0(g);
    Word w03{al.names.find("0"), al.names.find("3")};
    Word w04{al.names.find("0"), al.names.find("4")};
    CHECK(accepts(chi0, {w03, w04}));

    // Against the brute-force first-divergence definition, layers 1..3.
    auto got = enumerate_relation(chi0, 3);
    std::set<WordTuple> want;
    auto org = g.name_origins();
    auto layers = derive_layers(g, 3);
    for (const auto& ls : layers) {
        std::set<Word> elems;
        for (const auto& gr : ls.graphs) {
            for (const auto& w : gr.vertices) elems.insert(w);
            for (const auto& w : gr.edges) elems.insert(w);
        }
        for (const Word& x : elems)
            for (const Word& y : elems) {
                if (x == y) continue;
                size_t d = 0;
                while (d < x.size() && x[d] == y[d]) ++d;
                if (d == x.size()) continue;
                const auto& a = org[static_cast<size_t>(x[d])];
                const auto& b = org[static_cast<size_t>(y[d])];
                bool same_lhs = false;
                if (a.kind == b.kind && a.kind == NameOrigin::kVertexProd)
                    same_lhs = g.vprods[static_cast<size_t>(a.index)].lhs ==
                               g.vprods[static_cast<size_t>(b.index)].lhs;
                else if (a.kind == b.kind && a.kind == NameOrigin::kEdgeProd) {
                    const auto& ea = g.eprods[static_cast<size_t>(a.index)];
                    const auto& eb = g.eprods[static_cast<size_t>(b.index)];
                    same_lhs = ea.p1 == eb.p1 && ea.label == eb.label && ea.p2 == eb.p2;
                }
                bool distinct = !(a.kind == b.kind && a.index == b.index);
                if (same_lhs && distinct) want.insert({x, y});
            }
    }
    CHECK(got == want);
}

TEST_CASE("compat automaton equals the compatibility oracle") {
    Grammar g = complete_grammar(fixtures::ex43());
    auto o = oracles::structure_oracle(g, 3, true);
    auto [chi, compat] = build_compat(g);
    (void)chi;
    CHECK(enumerate_relation(compat, 3) == bounded(o.compat_pairs, 3));
}

TEST_CASE("full presentation: containment in the domain") {
    Presentation p = build_presentation(fixtures::ex43());
    auto dom = enumerate_relation(p.domain, 3);
    std::set<Word> dwords;
    for (const auto& t : dom) dwords.insert(t[0]);
    auto contained = [&](const TupleAutomaton& a) {
        for (const auto& t : enumerate_relation(a, 3))
            for (const auto& w : t) CHECK(dwords.count(w));
    };
    contained(p.vrt);
    contained(p.edg);
    contained(p.eq);
    contained(p.prefix);
    contained(p.same_layer);
    contained(p.compat);
    for (auto& [s, a] : p.vlabels) contained(a);
    for (auto& [s, a] : p.erels) contained(a);
}
