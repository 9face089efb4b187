#include "lingraph/presentation.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

namespace lingraph {

namespace {

const std::vector<std::string> kUnary{"1"};
const std::vector<std::string> kTernary{"1", "2", "3"};

// State layout of A(vrt): 0 = initial, 1 + name.
int vrt_state(Sym name) { return 1 + name; }

} // namespace

TupleAutomaton build_vrt(const Grammar& g) {
    auto org = g.name_origins();
    TupleAutomaton a;
    a.comps = kUnary;
    // One state per name id (most stay unreachable and get trimmed) plus the
    // initial state; keeps transitions O(|Theta|^2) to fill, as in the paper.
    a.add_state(false);
    for (size_t n = 0; n < g.al->names.size(); ++n)
        a.add_state(!g.al->is_edge_name(static_cast<Sym>(n)));
    a.initial = 0;
    for (size_t j = 0; j < g.al->names.size(); ++j) {
        Sym jn = static_cast<Sym>(j);
        if (g.al->is_edge_name(jn)) continue;
        const NameOrigin& o = org[j];
        if (o.kind != NameOrigin::kVertexProd) continue;
        Sym lhs = g.vprods[static_cast<size_t>(o.index)].lhs;
        if (lhs == g.axiom) a.add_tr(0, {jn}, vrt_state(jn));
        for (size_t i = 0; i < g.al->names.size(); ++i) {
            Sym in = static_cast<Sym>(i);
            if (g.al->is_edge_name(in)) continue;
            if (g.rhs_vertex_label(in) == lhs) a.add_tr(vrt_state(in), {jn}, vrt_state(jn));
        }
    }
    return a; // not trimmed: callers relying on state layout trim themselves
}

TupleAutomaton build_vertex_label(const Grammar& g, Sym label) {
    bool known = false;
    for (Sym s : g.gamma) known = known || s == label;
    if (!known) throw std::invalid_argument("unknown vertex label");
    TupleAutomaton a = build_vrt(g);
    for (size_t n = 0; n < g.al->names.size(); ++n) {
        Sym nm = static_cast<Sym>(n);
        if (g.al->is_edge_name(nm)) continue;
        a.finals[static_cast<size_t>(vrt_state(nm))] = g.rhs_vertex_label(nm) == label ? 1 : 0;
    }
    return trim(a);
}

IncidenceAutomaton build_incidence(const Grammar& g) {
    GrammarClass cls = classify_grammar(g);
    if (!cls.complete) throw UnsupportedClass("incidence automaton requires a complete grammar");

    IncidenceAutomaton res;
    TupleAutomaton& a = res.aut;
    a.comps = kTernary;

    // Reachable-state exploration. States:
    //   start            (the initial state)
    //   diamond(i)       vertex-mimicking phase, register i in Theta
    //   tagged(lbl, back, c1, omega, c2)  one per omega by uniqueness of names
    struct TaggedKey {
        Sym label;
        bool back;
        Sym c1, om, c2;
        bool operator<(const TaggedKey& o) const {
            return std::tie(label, back, c1, om, c2) < std::tie(o.label, o.back, o.c1, o.om, o.c2);
        }
    };
    std::map<Sym, int> diamond;
    std::map<TaggedKey, int> tagged;
    auto new_state = [&](bool fin, Sym tag, bool back) {
        int id = a.add_state(fin);
        res.tag_label.push_back(tag);
        res.tag_backward.push_back(back ? 1 : 0);
        return id;
    };
    int start = new_state(false, kNoSym, false);
    a.initial = start;
    auto get_diamond = [&](Sym i) {
        auto it = diamond.find(i);
        if (it != diamond.end()) return it->second;
        int id = new_state(false, kNoSym, false);
        diamond.emplace(i, id);
        return id;
    };
    auto get_tagged = [&](const TaggedKey& k) {
        auto it = tagged.find(k);
        if (it != tagged.end()) return it->second;
        int id = new_state(true, k.label, k.back);
        tagged.emplace(k, id);
        return id;
    };

    // Vertex-phase expansion from a state whose register carries label `lhs`
    // (or from the initial state when lhs is the axiom).
    std::deque<int> work;
    std::set<int> queued;
    auto enqueue = [&](int q) {
        if (queued.insert(q).second) work.push_back(q);
    };
    auto expand_vertex_phase = [&](int from, Sym lhs) {
        for (int p : g.vprods_with_lhs(lhs)) {
            const auto& vp = g.vprods[static_cast<size_t>(p)];
            for (const Word& w : vp.rhs.vertices) {
                int to = get_diamond(w[0]);
                a.add_tr(from, {w[0], w[0], w[0]}, to);
                enqueue(to);
            }
            for (const auto& in : vp.rhs.incidences) {
                Sym x = vp.rhs.vertices[static_cast<size_t>(in.src)][0];
                Sym y = vp.rhs.edges[static_cast<size_t>(in.edge)][0];
                Sym z = vp.rhs.vertices[static_cast<size_t>(in.dst)][0];
                int to = get_tagged({in.label, false, x, y, z});
                a.add_tr(from, {x, y, z}, to);
                enqueue(to);
            }
        }
    };

    expand_vertex_phase(start, g.axiom);
    queued.insert(start);
    std::set<int> expanded{start};
    while (!work.empty()) {
        int q = work.front();
        work.pop_front();
        if (!expanded.insert(q).second) continue;
        // diamond states mimic vertices.
        for (auto& [reg, id] : diamond)
            if (id == q) {
                expand_vertex_phase(q, g.rhs_vertex_label(reg));
            }
        for (auto& [key, id] : tagged)
            if (id == q) {
                // Inherited extension: the previous tag fixes the parent
                // incidence's orientation across the tape components.
                bool src_is_c1 = !key.back;
                Sym src_reg = src_is_c1 ? key.c1 : key.c2;
                Sym dst_reg = src_is_c1 ? key.c2 : key.c1;
                for (const auto& ep : g.eprods) {
                    if (ep.label != key.label) continue;
                    if (g.vprods[static_cast<size_t>(ep.p1)].lhs != g.rhs_vertex_label(src_reg))
                        continue;
                    if (g.vprods[static_cast<size_t>(ep.p2)].lhs != g.rhs_vertex_label(dst_reg))
                        continue;
                    for (const auto& r : ep.rhs) {
                        // r.src_name extends the parent source, r.dst_name the
                        // parent target; map back to tape components.
                        Sym l1, l3;
                        bool new_back;
                        if (src_is_c1) {
                            l1 = r.src_name;
                            l3 = r.dst_name;
                            new_back = r.reversed;
                        } else {
                            l1 = r.dst_name;
                            l3 = r.src_name;
                            new_back = !r.reversed;
                        }
                        int to = get_tagged({r.label, new_back, l1, r.edge_name, l3});
                        a.add_tr(q, {l1, r.edge_name, l3}, to);
                        enqueue(to);
                    }
                }
            }
    }
    return res;
}

TupleAutomaton build_edge_relation(const Grammar& g, Sym label) {
    bool known = false;
    for (Sym s : g.sigma) known = known || s == label;
    if (!known) throw std::invalid_argument("unknown edge label");
    IncidenceAutomaton inc = build_incidence(g);

    // Forward part: finals restricted to forward tags with this label.
    TupleAutomaton fwd = inc.aut;
    for (int q = 0; q < fwd.num_states; ++q)
        fwd.finals[static_cast<size_t>(q)] =
            (inc.tag_label[static_cast<size_t>(q)] == label && !inc.tag_backward[static_cast<size_t>(q)]) ? 1 : 0;

    // Backward part with components 1 and 3 swapped.
    TupleAutomaton bwd = inc.aut;
    for (int q = 0; q < bwd.num_states; ++q)
        bwd.finals[static_cast<size_t>(q)] =
            (inc.tag_label[static_cast<size_t>(q)] == label && inc.tag_backward[static_cast<size_t>(q)]) ? 1 : 0;
    for (auto& t : bwd.trans) std::swap(t.letter[0], t.letter[2]);

    return union_same(trim(fwd), trim(bwd));
}

std::pair<TupleAutomaton, TupleAutomaton> build_edg_delta(const Grammar& g) {
    IncidenceAutomaton inc = build_incidence(g);
    TupleAutomaton edg = inc.aut;
    edg.comps = kUnary;
    for (auto& t : edg.trans) t.letter = {t.letter[1]};
    TupleAutomaton delta = edg;
    for (int q = 0; q < delta.num_states; ++q)
        if (q != delta.initial) delta.finals[static_cast<size_t>(q)] = 1;
    return {trim(edg), trim(delta)};
}

std::tuple<TupleAutomaton, TupleAutomaton, TupleAutomaton> build_order_relations(const Grammar& g) {
    auto [edg, delta] = build_edg_delta(g);
    (void)edg;
    TupleAutomaton eq = diagonal(delta);
    eq.comps = {"1", "2"};

    // prefix: run delta on component 2; component 1 mirrors it, then blanks.
    TupleAutomaton pre;
    pre.comps = {"1", "2"};
    // state = delta state + phase (0 both running, 1 first component done)
    for (int phase = 0; phase < 2; ++phase)
        for (int q = 0; q < delta.num_states; ++q) pre.add_state(delta.is_final(q));
    auto id = [&](int q, int phase) { return phase * delta.num_states + q; };
    pre.initial = id(delta.initial, 0);
    for (const auto& t : delta.trans) {
        pre.add_tr(id(t.from, 0), {t.letter[0], t.letter[0]}, id(t.to, 0));
        pre.add_tr(id(t.from, 1), {kBlank, t.letter[0]}, id(t.to, 1));
        // Switching is allowed once the prefix itself is a domain word.
        if (delta.is_final(t.from))
            pre.add_tr(id(t.from, 0), {kBlank, t.letter[0]}, id(t.to, 1));
    }
    pre = trim(pre);

    TupleAutomaton sl = loose_product(delta, rename_comps(delta, {"2"}));
    sl.comps = {"1", "2"};
    return {eq, pre, sl};
}

TupleAutomaton build_chi0(const Grammar& g) {
    auto [edg, delta] = build_edg_delta(g);
    (void)edg;
    auto org = g.name_origins();

    TupleAutomaton b1 = diagonal(delta);
    b1.comps = {"1", "2"};
    // Loose product built inline so state ids stay (q1 * n + q2).
    TupleAutomaton b2;
    b2.comps = {"1", "2"};
    int n = delta.num_states;
    for (int q1 = 0; q1 < n; ++q1)
        for (int q2 = 0; q2 < n; ++q2) b2.add_state(delta.is_final(q1) && delta.is_final(q2));
    b2.initial = delta.initial * n + delta.initial;
    for (const auto& t1 : delta.trans)
        for (const auto& t2 : delta.trans)
            b2.add_tr(t1.from * n + t2.from, {t1.letter[0], t2.letter[0]}, t1.to * n + t2.to);

    // Switch: two distinct productions with a common left hand side applied on
    // the same state.
    auto same_lhs_distinct = [&](Sym i, Sym j) {
        const NameOrigin& a = org[static_cast<size_t>(i)];
        const NameOrigin& b = org[static_cast<size_t>(j)];
        if (a.kind == NameOrigin::kNone || b.kind == NameOrigin::kNone) return false;
        if (a.kind != b.kind) return false;
        if (a.index == b.index) return false;
        if (a.kind == NameOrigin::kVertexProd)
            return g.vprods[static_cast<size_t>(a.index)].lhs ==
                   g.vprods[static_cast<size_t>(b.index)].lhs;
        const auto& ea = g.eprods[static_cast<size_t>(a.index)];
        const auto& eb = g.eprods[static_cast<size_t>(b.index)];
        return ea.p1 == eb.p1 && ea.label == eb.label && ea.p2 == eb.p2;
    };
    std::vector<SwitchTr> sw;
    auto out = delta.out_index();
    for (int p = 0; p < delta.num_states; ++p)
        for (int ti : out[static_cast<size_t>(p)])
            for (int tj : out[static_cast<size_t>(p)]) {
                const auto& a = delta.trans[static_cast<size_t>(ti)];
                const auto& b = delta.trans[static_cast<size_t>(tj)];
                if (!same_lhs_distinct(a.letter[0], b.letter[0])) continue;
                sw.push_back({p, {a.letter[0], b.letter[0]}, a.to * n + b.to});
            }
    return trim(concat_via(b1, sw, b2));
}

namespace {

// Union over edge labels of the ternary incidence relations, renamed.
TupleAutomaton incidence_union(const Grammar& g, const std::vector<std::string>& comps) {
    TupleAutomaton acc = empty_automaton(comps);
    for (Sym a : g.sigma) {
        TupleAutomaton r = rename_comps(build_edge_relation(g, a), comps);
        acc = union_same(acc, r);
    }
    return acc;
}

} // namespace

std::pair<TupleAutomaton, TupleAutomaton> build_compat(const Grammar& g) {
    TupleAutomaton chi0 = build_chi0(g);
    auto [eq, pre, sl] = build_order_relations(g);
    (void)eq;

    TupleAutomaton jx = incidence_union(g, {"x1", "x2", "x3"});
    TupleAutomaton jy = incidence_union(g, {"y1", "y2", "y3"});

    const std::vector<std::string> xt{"x1", "x2", "x3"};
    const std::vector<std::string> yt{"y1", "y2", "y3"};

    TupleAutomaton chi = rename_comps(chi0, {"x", "y"});
    // The existential body distributed over the clash positions i,j in {1,3},
    // the prefix witness k in [3] and the side of the edge-prefix conjunct.
    for (int side = 0; side < 2; ++side)
        for (int i : {0, 2})
            for (int j : {0, 2})
                for (int k = 0; k < 3; ++k) {
                    TupleAutomaton clash = rename_comps(chi0, {xt[static_cast<size_t>(i)],
                                                               yt[static_cast<size_t>(j)]});
                    TupleAutomaton px, py;
                    if (side == 0) {
                        px = rename_comps(pre, {xt[static_cast<size_t>(k)], "x"});
                        py = rename_comps(pre, {"y2", "y"});
                    } else {
                        px = rename_comps(pre, {"x2", "x"});
                        py = rename_comps(pre, {yt[static_cast<size_t>(k)], "y"});
                    }
                    TupleAutomaton tx = intersect_conjoin(intersect_conjoin(jx, clash), px);
                    tx = project_onto(tx, {yt[static_cast<size_t>(j)], "x"});
                    TupleAutomaton ty = intersect_conjoin(jy, py);
                    ty = project_onto(ty, {yt[static_cast<size_t>(j)], "y"});
                    TupleAutomaton d = project_onto(intersect_conjoin(tx, ty), {"x", "y"});
                    chi = union_same(chi, rename_comps(d, {"x", "y"}));
                }
    chi = rename_comps(chi, {"1", "2"});
    TupleAutomaton compat = difference(sl, chi);
    return {chi, compat};
}

Presentation build_presentation(const Grammar& g, bool auto_complete) {
    Grammar src = g;
    if (!classify_grammar(src).complete) {
        if (!auto_complete)
            throw UnsupportedClass("presentation requires a complete grammar");
        src = complete_grammar(src);
    }
    Presentation p;
    p.grammar = src;
    auto [edg, delta] = build_edg_delta(src);
    p.edg = edg;
    p.domain = delta;
    p.vrt = trim(build_vrt(src));
    for (Sym a : src.gamma) p.vlabels.emplace(a, build_vertex_label(src, a));
    for (Sym a : src.sigma) p.erels.emplace(a, build_edge_relation(src, a));
    auto [eq, pre, sl] = build_order_relations(src);
    p.eq = eq;
    p.prefix = pre;
    p.same_layer = sl;
    p.chi0 = build_chi0(src);
    auto [chi, compat] = build_compat(src);
    p.chi = chi;
    p.compat = compat;
    return p;
}

Presentation::Pred Presentation::find_predicate(const std::string& name) const {
    if (name == "vrt") return {&vrt, 1};
    if (name == "edg") return {&edg, 1};
    if (name == "=") return {&eq, 2};
    if (name == "pre") return {&prefix, 2};
    if (name == "sl") return {&same_layer, 2};
    if (name == "cp") return {&compat, 2};
    Sym v = grammar.al->vlabels.find(name);
    if (v != kNoSym) {
        auto it = vlabels.find(v);
        if (it != vlabels.end()) return {&it->second, 1};
    }
    Sym e = grammar.al->elabels.find(name);
    if (e != kNoSym) {
        auto it = erels.find(e);
        if (it != erels.end()) return {&it->second, 3};
    }
    return {nullptr, 0};
}

std::vector<Sym> Presentation::domain_alphabet() const {
    std::set<Sym> syms;
    for (const auto& t : domain.trans) syms.insert(t.letter[0]);
    return std::vector<Sym>(syms.begin(), syms.end());
}

} // namespace lingraph
