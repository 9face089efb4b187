#include "lingraph/derivation.hpp"

#include <algorithm>
#include <map>
#include <functional>
#include <numeric>

namespace lingraph {

ConcreteGraph axiom_graph(const Grammar& g) {
    ConcreteGraph a;
    a.add_vertex(Word{}, g.axiom);
    return a;
}

std::vector<Homomorphism> enumerate_homomorphisms(const ConcreteGraph& src, const Grammar& g,
                                                  uint64_t cap) {
    // Candidate productions per vertex, in grammar order; then per edge given
    // the endpoint choices. Vertices and edges are visited in index order,
    // which derive_layers keeps sorted, so the output order is stable.
    std::vector<std::vector<int>> vcand(src.vertices.size());
    for (size_t i = 0; i < src.vertices.size(); ++i) {
        vcand[i] = g.vprods_with_lhs(src.vlabel[i]);
        if (vcand[i].empty()) return {};
    }
    std::vector<const Incidence*> inc_of_edge(src.edges.size(), nullptr);
    for (const auto& in : src.incidences) inc_of_edge[static_cast<size_t>(in.edge)] = &in;

    std::vector<Homomorphism> out;
    Homomorphism h;
    h.vassign.assign(src.vertices.size(), -1);
    h.eassign.assign(src.edges.size(), -1);

    // Depth-first over vertices, then edges.
    std::vector<size_t> vpos;
    std::vector<size_t> epos;
    std::function<void(size_t)> edges_from = [&](size_t e) {
        if (out.size() >= cap)
            throw CapExceeded("homomorphism count exceeds cap " + std::to_string(cap));
        if (e == src.edges.size()) {
            out.push_back(h);
            return;
        }
        const Incidence* in = inc_of_edge[e];
        for (int ep : g.eprods_with_lhs(h.vassign[static_cast<size_t>(in->src)], in->label,
                                        h.vassign[static_cast<size_t>(in->dst)])) {
            h.eassign[e] = ep;
            edges_from(e + 1);
        }
        h.eassign[e] = -1;
    };
    std::function<void(size_t)> vertices_from = [&](size_t v) {
        if (v == src.vertices.size()) {
            edges_from(0);
            return;
        }
        for (int vp : vcand[v]) {
            h.vassign[v] = vp;
            vertices_from(v + 1);
        }
        h.vassign[v] = -1;
    };
    vertices_from(0);
    return out;
}

ConcreteGraph derive_step(const ConcreteGraph& src, const Homomorphism& h, const Grammar& g) {
    if (h.vassign.size() != src.vertices.size() || h.eassign.size() != src.edges.size())
        throw std::invalid_argument("homomorphism does not fit the source graph");
    for (size_t i = 0; i < src.vertices.size(); ++i)
        if (g.vprods[static_cast<size_t>(h.vassign[i])].lhs != src.vlabel[i])
            throw std::invalid_argument("homomorphism is not label preserving");

    ConcreteGraph out;
    std::map<Word, int> vertex_index;
    auto child_vertex = [&out, &vertex_index](const Word& parent, Sym name, Sym label) {
        Word w = parent;
        w.push_back(name);
        auto it = vertex_index.find(w);
        if (it != vertex_index.end()) return it->second;
        int idx = out.add_vertex(w, label);
        vertex_index.emplace(std::move(w), idx);
        return idx;
    };

    // l' and V': children of every vertex.
    for (size_t v = 0; v < src.vertices.size(); ++v) {
        const auto& vp = g.vprods[static_cast<size_t>(h.vassign[v])];
        for (size_t i = 0; i < vp.rhs.vertices.size(); ++i)
            child_vertex(src.vertices[v], vp.rhs.vertices[i][0], vp.rhs.vlabel[i]);
    }

    auto extend = [](const Word& parent, Sym name) {
        Word w = parent;
        w.push_back(name);
        return w;
    };

    // Innate incidences.
    for (size_t v = 0; v < src.vertices.size(); ++v) {
        const auto& vp = g.vprods[static_cast<size_t>(h.vassign[v])];
        for (const auto& in : vp.rhs.incidences) {
            int si = vertex_index.at(extend(src.vertices[v], vp.rhs.vertices[in.src][0]));
            int di = vertex_index.at(extend(src.vertices[v], vp.rhs.vertices[in.dst][0]));
            out.add_incidence(in.label, si, extend(src.vertices[v], vp.rhs.edges[in.edge][0]), di);
        }
    }

    // Inherited incidences.
    for (const auto& in : src.incidences) {
        int ep = h.eassign[static_cast<size_t>(in.edge)];
        if (ep < 0) throw std::invalid_argument("edge without an assigned production");
        const auto& eprod = g.eprods[static_cast<size_t>(ep)];
        if (eprod.p1 != h.vassign[static_cast<size_t>(in.src)] ||
            eprod.label != in.label ||
            eprod.p2 != h.vassign[static_cast<size_t>(in.dst)])
            throw std::invalid_argument("edge production does not match endpoint assignment");
        const Word& u = src.vertices[static_cast<size_t>(in.src)];
        const Word& v = src.vertices[static_cast<size_t>(in.dst)];
        const Word& w = src.edges[static_cast<size_t>(in.edge)];
        for (const auto& r : eprod.rhs) {
            int ui = vertex_index.at(extend(u, r.src_name));
            int vk = vertex_index.at(extend(v, r.dst_name));
            if (!r.reversed)
                out.add_incidence(r.label, ui, extend(w, r.edge_name), vk);
            else
                out.add_incidence(r.label, vk, extend(w, r.edge_name), ui);
        }
    }
    return out;
}

namespace {

void sort_graph(ConcreteGraph& g) {
    std::vector<size_t> vidx(g.vertices.size());
    std::iota(vidx.begin(), vidx.end(), 0);
    std::sort(vidx.begin(), vidx.end(),
              [&g](size_t a, size_t b) { return g.vertices[a] < g.vertices[b]; });
    std::vector<int> vmap(g.vertices.size());
    ConcreteGraph out;
    for (size_t k = 0; k < vidx.size(); ++k) {
        vmap[vidx[k]] = static_cast<int>(k);
        out.add_vertex(g.vertices[vidx[k]], g.vlabel[vidx[k]]);
    }
    std::vector<size_t> eidx(g.incidences.size());
    std::iota(eidx.begin(), eidx.end(), 0);
    std::sort(eidx.begin(), eidx.end(), [&g](size_t a, size_t b) {
        return g.edges[static_cast<size_t>(g.incidences[a].edge)] <
               g.edges[static_cast<size_t>(g.incidences[b].edge)];
    });
    for (size_t k : eidx) {
        const auto& in = g.incidences[k];
        out.add_incidence(in.label, vmap[static_cast<size_t>(in.src)],
                          g.edges[static_cast<size_t>(in.edge)],
                          vmap[static_cast<size_t>(in.dst)]);
    }
    g = std::move(out);
}

} // namespace

std::vector<LayerSet> derive_layers(const Grammar& g, int depth, uint64_t cap,
                                    const std::atomic<bool>* cancel) {
    std::vector<LayerSet> out;
    std::vector<ConcreteGraph> frontier{axiom_graph(g)};
    for (int l = 1; l <= depth; ++l) {
        if (cancel && cancel->load()) throw Cancelled();
        std::map<std::vector<Word>, ConcreteGraph> next;
        for (const auto& src : frontier) {
            for (const auto& h : enumerate_homomorphisms(src, g, cap)) {
                ConcreteGraph child = derive_step(src, h, g);
                sort_graph(child);
                next.emplace(child.name_set(), std::move(child));
                if (next.size() > cap)
                    throw CapExceeded("layer " + std::to_string(l) + " exceeds cap " +
                                      std::to_string(cap));
            }
        }
        LayerSet ls;
        ls.depth = l;
        for (auto& [key, gr] : next) ls.graphs.push_back(std::move(gr));
        frontier = ls.graphs;
        out.push_back(std::move(ls));
    }
    return out;
}

LayerSet filter_nonterminals(const LayerSet& layer, const Grammar& g,
                             const std::set<Sym>& nv, const std::set<Sym>& ne) {
    (void)g;
    LayerSet out;
    out.depth = layer.depth;
    for (const auto& gr : layer.graphs) {
        bool keep = true;
        for (Sym l : gr.vlabel)
            if (nv.count(l)) { keep = false; break; }
        if (keep)
            for (const auto& in : gr.incidences)
                if (ne.count(in.label)) { keep = false; break; }
        if (keep) out.graphs.push_back(gr);
    }
    return out;
}

Grammar complete_grammar(const Grammar& g) {
    Grammar out = g;
    out.al = std::make_shared<Alphabets>(*g.al); // private copy; new names get added
    Alphabets& al = *out.al;

    // Labels occurring on rhs vertices without any production. The paper's
    // construction covers isolated occurrences; we also cover attached ones so
    // that no derivable graph ever gets stuck for lack of a vertex production.
    std::set<Sym> unproduced;
    for (const auto& vp : out.vprods)
        for (Sym l : vp.rhs.vlabel)
            if (out.vprods_with_lhs(l).empty()) unproduced.insert(l);

    Sym iso_label = kNoSym;
    if (!unproduced.empty()) {
        iso_label = al.vlabels.fresh("i");
        out.gamma.push_back(iso_label);
        out.nonterminal_vlabels.insert(iso_label);
        for (Sym l : unproduced) {
            VertexProduction vp;
            vp.name = "VI_" + al.vlabels.name(l);
            vp.lhs = l;
            Sym nm = al.names.fresh("ti_" + al.vlabels.name(l));
            al.intern_vertex_name(al.names.name(nm));
            vp.rhs.add_vertex({nm}, iso_label);
            out.vprods.push_back(std::move(vp));
        }
        // The i-labelled vertices are isolated; give i its own production so
        // that condition (2) holds for them as well.
        VertexProduction vp;
        vp.name = "VI_self";
        vp.lhs = iso_label;
        Sym nm = al.names.fresh("ti_self");
        al.intern_vertex_name(al.names.name(nm));
        vp.rhs.add_vertex({nm}, iso_label);
        out.vprods.push_back(std::move(vp));
    }
    out.synth_isolated = iso_label;

    Sym bang = al.elabels.fresh("!");
    out.sigma.push_back(bang);
    out.nonterminal_elabels.insert(bang);
    out.synth_bang = bang;

    // f: production -> one of its rhs vertex names (for nonempty rhs).
    auto f_name = [&out](int p) -> Sym {
        const auto& rhs = out.vprods[static_cast<size_t>(p)].rhs;
        return rhs.vertices.empty() ? kNoSym : rhs.vertices[0][0];
    };

    bool axiom_external = !out.axiom_in_gamma();
    auto exempt = [&](int p) {
        return axiom_external && out.vprods[static_cast<size_t>(p)].lhs == out.axiom;
    };

    // M: missing lhs triples matched by an occurring incidence pattern.
    std::set<std::tuple<int, Sym, int>> lhs_set;
    for (const auto& ep : out.eprods) lhs_set.insert({ep.p1, ep.label, ep.p2});
    struct Pat { Sym a, sl, dl; };
    std::vector<Pat> pats;
    for (const auto& vp : out.vprods)
        for (const auto& in : vp.rhs.incidences)
            pats.push_back({in.label, vp.rhs.vlabel[static_cast<size_t>(in.src)],
                            vp.rhs.vlabel[static_cast<size_t>(in.dst)]});
    for (const auto& ep : out.eprods)
        for (const auto& r : ep.rhs) {
            Sym sl = out.rhs_vertex_label(r.src_name);
            Sym dl = out.rhs_vertex_label(r.dst_name);
            if (r.reversed) std::swap(sl, dl);
            pats.push_back({r.label, sl, dl});
        }

    int counter = 0;
    auto add_edge_prod = [&](int p1, Sym a, int p2) {
        if (lhs_set.count({p1, a, p2})) return;
        lhs_set.insert({p1, a, p2});
        EdgeProduction ep;
        ep.name = "EC" + std::to_string(counter++);
        ep.p1 = p1;
        ep.label = a;
        ep.p2 = p2;
        Sym s = f_name(p1), d = f_name(p2);
        if (s != kNoSym && d != kNoSym) {
            Sym w = al.intern_edge_name(al.names.name(al.names.fresh("om" + std::to_string(counter))));
            ep.rhs.push_back({bang, s, w, d, false});
        }
        out.eprods.push_back(std::move(ep));
    };

    size_t nprods = out.vprods.size();
    for (const Pat& p : pats)
        for (size_t i = 0; i < nprods; ++i) {
            if (out.vprods[i].lhs != p.sl || exempt(static_cast<int>(i))) continue;
            for (size_t j = 0; j < nprods; ++j) {
                if (out.vprods[j].lhs != p.dl || exempt(static_cast<int>(j))) continue;
                add_edge_prod(static_cast<int>(i), p.a, static_cast<int>(j));
            }
        }

    // E_!: a !-production for every pair of vertex productions. The patterns
    // introduced above and here are all !-labelled and covered by this set.
    for (size_t i = 0; i < nprods; ++i)
        for (size_t j = 0; j < nprods; ++j)
            add_edge_prod(static_cast<int>(i), bang, static_cast<int>(j));

    // The fresh !-incidences may mention labels (such as i) whose production
    // pairs were not covered by the pattern pass; iterate to a fixpoint.
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Pat> extra;
        for (const auto& ep : out.eprods)
            for (const auto& r : ep.rhs) {
                Sym sl = out.rhs_vertex_label(r.src_name);
                Sym dl = out.rhs_vertex_label(r.dst_name);
                if (r.reversed) std::swap(sl, dl);
                extra.push_back({r.label, sl, dl});
            }
        for (const Pat& p : extra)
            for (size_t i = 0; i < nprods; ++i) {
                if (out.vprods[i].lhs != p.sl || exempt(static_cast<int>(i))) continue;
                for (size_t j = 0; j < nprods; ++j) {
                    if (out.vprods[j].lhs != p.dl || exempt(static_cast<int>(j))) continue;
                    if (!lhs_set.count({static_cast<int>(i), p.a, static_cast<int>(j)})) {
                        add_edge_prod(static_cast<int>(i), p.a, static_cast<int>(j));
                        changed = true;
                    }
                }
            }
    }
    return out;
}

namespace {

struct LayerData {
    std::vector<Word> elems;                        // V_l union E_l, sorted
    std::map<Word, std::pair<Word, Word>> inc_of;   // edge word -> (src, dst)
};

std::vector<LayerData> layer_data(const Grammar& g, int depth, uint64_t cap) {
    std::vector<LayerData> out(static_cast<size_t>(depth) + 1);
    auto layers = derive_layers(g, depth, cap);
    for (const auto& ls : layers) {
        LayerData& ld = out[static_cast<size_t>(ls.depth)];
        std::set<Word> elems;
        for (const auto& gr : ls.graphs) {
            for (const auto& w : gr.vertices) elems.insert(w);
            for (const auto& w : gr.edges) elems.insert(w);
            for (const auto& in : gr.incidences)
                ld.inc_of[gr.edges[static_cast<size_t>(in.edge)]] = {
                    gr.vertices[static_cast<size_t>(in.src)],
                    gr.vertices[static_cast<size_t>(in.dst)]};
        }
        ld.elems.assign(elems.begin(), elems.end());
    }
    return out;
}

// lhs comparison across production kinds: vertex lhs is a label, edge lhs a
// triple; the two never coincide.
bool same_lhs(const Grammar& g, const NameOrigin& a, const NameOrigin& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == NameOrigin::kVertexProd)
        return g.vprods[static_cast<size_t>(a.index)].lhs ==
               g.vprods[static_cast<size_t>(b.index)].lhs;
    const auto& ea = g.eprods[static_cast<size_t>(a.index)];
    const auto& eb = g.eprods[static_cast<size_t>(b.index)];
    return ea.p1 == eb.p1 && ea.label == eb.label && ea.p2 == eb.p2;
}

bool chi0_names(const Grammar& g, const std::vector<NameOrigin>& org, Sym i, Sym j) {
    if (i == j) return false;
    const NameOrigin& a = org[static_cast<size_t>(i)];
    const NameOrigin& b = org[static_cast<size_t>(j)];
    if (a.kind == NameOrigin::kNone || b.kind == NameOrigin::kNone) return false;
    if (a.kind == b.kind && a.index == b.index) return false;
    return same_lhs(g, a, b);
}

bool chi0_words(const Grammar& g, const std::vector<NameOrigin>& org, const Word& x, const Word& y) {
    if (x.size() != y.size()) return false;
    for (size_t d = 0; d < x.size(); ++d) {
        if (x[d] == y[d]) continue;
        return chi0_names(g, org, x[d], y[d]);
    }
    return false;
}

} // namespace

std::set<std::pair<Word, Word>> incompatibility(const Grammar& g, int l, uint64_t cap) {
    auto layers = layer_data(g, l, cap);
    auto org = g.name_origins();

    // chi0 per layer is derivable from words alone; chi1 and chi2 need the
    // incidence maps of all layers up to l.
    std::vector<std::set<std::pair<Word, Word>>> chi1(static_cast<size_t>(l) + 1);
    for (int m = 1; m <= l; ++m) {
        const LayerData& ld = layers[static_cast<size_t>(m)];
        for (const Word& x : ld.elems)
            for (const Word& y : ld.elems) {
                // (x, y) in chi1 iff some prefix edge of y has an endpoint
                // chi0-incompatible with the matching prefix of x.
                for (size_t mm = 1; mm <= x.size(); ++mm) {
                    Word w = prefix_of(y, mm);
                    auto it = layers[mm].inc_of.find(w);
                    if (it == layers[mm].inc_of.end()) continue;
                    Word u = prefix_of(x, mm);
                    if (chi0_words(g, org, u, it->second.first) ||
                        chi0_words(g, org, u, it->second.second)) {
                        chi1[static_cast<size_t>(m)].insert({x, y});
                        break;
                    }
                }
            }
    }

    std::set<std::pair<Word, Word>> chi;
    const LayerData& ld = layers[static_cast<size_t>(l)];
    for (const Word& x : ld.elems)
        for (const Word& y : ld.elems) {
            if (x == y) continue;
            bool incompat = chi0_words(g, org, x, y);
            if (!incompat &&
                (chi1[static_cast<size_t>(l)].count({x, y}) ||
                 chi1[static_cast<size_t>(l)].count({y, x})))
                incompat = true;
            if (!incompat) {
                // chi2: both are edges extending edges w, w' where an endpoint
                // of w is chi1-incompatible with w'.
                for (size_t m = 1; m <= x.size() && !incompat; ++m) {
                    auto ix = layers[m].inc_of.find(prefix_of(x, m));
                    if (ix == layers[m].inc_of.end()) continue;
                    Word wp = prefix_of(y, m);
                    if (!layers[m].inc_of.count(wp)) continue;
                    if (chi1[m].count({ix->second.first, wp}) ||
                        chi1[m].count({ix->second.second, wp}))
                        incompat = true;
                }
                for (size_t m = 1; m <= y.size() && !incompat; ++m) { // inverse of chi2
                    auto iy = layers[m].inc_of.find(prefix_of(y, m));
                    if (iy == layers[m].inc_of.end()) continue;
                    Word wp = prefix_of(x, m);
                    if (!layers[m].inc_of.count(wp)) continue;
                    if (chi1[m].count({iy->second.first, wp}) ||
                        chi1[m].count({iy->second.second, wp}))
                        incompat = true;
                }
            }
            if (incompat) {
                chi.insert({x, y});
                chi.insert({y, x});
            }
        }
    return chi;
}

std::vector<std::vector<Word>> maximal_compatible_sets(const Grammar& g, int l, uint64_t cap) {
    auto layers = layer_data(g, l, kDefaultLayerCap);
    const auto& elems = layers[static_cast<size_t>(l)].elems;
    auto chi = incompatibility(g, l);

    size_t n = elems.size();
    std::vector<std::vector<char>> compat(n, std::vector<char>(n, true));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (i != j && chi.count({elems[i], elems[j]})) compat[i][j] = false;

    // Bron-Kerbosch with pivoting over the compatibility graph.
    std::vector<std::vector<int>> cliques;
    std::vector<int> R;
    uint64_t count = 0;
    auto adjacent = [&compat](int a, int b) {
        return a != b && compat[static_cast<size_t>(a)][static_cast<size_t>(b)];
    };
    std::function<void(std::vector<int>, std::vector<int>)> bk = [&](std::vector<int> P,
                                                                     std::vector<int> X) {
        if (P.empty() && X.empty()) {
            if (++count > cap) throw CapExceeded("compatible set count exceeds cap");
            cliques.push_back(R);
            return;
        }
        int pivot = -1;
        size_t best = 0;
        for (const auto& pool : {P, X})
            for (int u : pool) {
                size_t deg = 0;
                for (int w : P)
                    if (adjacent(u, w)) ++deg;
                if (pivot == -1 || deg > best) { pivot = u; best = deg; }
            }
        std::vector<int> branch;
        for (int v : P)
            if (!adjacent(pivot, v)) branch.push_back(v);
        for (int v : branch) {
            std::vector<int> P2, X2;
            for (int u : P)
                if (adjacent(v, u)) P2.push_back(u);
            for (int u : X)
                if (adjacent(v, u)) X2.push_back(u);
            R.push_back(v);
            bk(P2, X2);
            R.pop_back();
            P.erase(std::find(P.begin(), P.end(), v));
            X.push_back(v);
        }
    };
    std::vector<int> P(n);
    std::iota(P.begin(), P.end(), 0);
    if (n > 0) bk(P, {});

    std::vector<std::vector<Word>> out;
    for (auto& c : cliques) {
        std::vector<Word> s;
        for (int i : c) s.push_back(elems[static_cast<size_t>(i)]);
        std::sort(s.begin(), s.end());
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

UnixVerdict unix_check_bounded(const Grammar& g, int depth, uint64_t cap) {
    UnixVerdict v;
    auto layers = derive_layers(g, depth, cap);
    for (const auto& ls : layers)
        if (ls.graphs.size() > 1) {
            v.is_unix = false;
            v.violating_layer = ls.depth;
            v.layer_size = ls.graphs.size();
            return v;
        }
    return v;
}

} // namespace lingraph
