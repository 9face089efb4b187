#include "lingraph/grammar.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace lingraph {

std::vector<NameOrigin> Grammar::name_origins() const {
    std::vector<NameOrigin> org(al->names.size());
    auto put = [&](Sym name, NameOrigin o) {
        if (static_cast<size_t>(name) >= org.size()) org.resize(static_cast<size_t>(name) + 1);
        org[static_cast<size_t>(name)] = o;
    };
    for (size_t p = 0; p < vprods.size(); ++p) {
        for (const Word& w : vprods[p].rhs.vertices)
            put(w[0], {NameOrigin::kVertexProd, static_cast<int>(p)});
        for (const Word& w : vprods[p].rhs.edges)
            put(w[0], {NameOrigin::kVertexProd, static_cast<int>(p)});
    }
    for (size_t p = 0; p < eprods.size(); ++p)
        for (const auto& r : eprods[p].rhs)
            put(r.edge_name, {NameOrigin::kEdgeProd, static_cast<int>(p)});
    return org;
}

Sym Grammar::rhs_vertex_label(Sym name) const {
    for (const auto& vp : vprods)
        for (size_t i = 0; i < vp.rhs.vertices.size(); ++i)
            if (vp.rhs.vertices[i].size() == 1 && vp.rhs.vertices[i][0] == name)
                return vp.rhs.vlabel[i];
    return kNoSym;
}

Diagnostics validate_grammar(const Grammar& g) {
    Diagnostics d;
    auto bad = [&d](const std::string& m) { d.push_back({m}); };
    const Alphabets& al = *g.al;

    // rhs graphs are layer-1 and individually valid.
    std::map<Sym, std::string> owner; // name -> production that introduced it
    for (const auto& vp : g.vprods) {
        Diagnostics gd = validate_graph(vp.rhs, al);
        for (auto& x : gd) bad("vprod " + vp.name + ": " + x.message);
        for (const Word& w : vp.rhs.vertices) {
            if (w.size() != 1) { bad("vprod " + vp.name + ": rhs vertex word not of length 1"); continue; }
            auto [it, fresh] = owner.emplace(w[0], vp.name);
            if (!fresh)
                bad("name " + al.names.name(w[0]) + " appears in rhs of both " +
                    it->second + " and " + vp.name);
        }
        for (const Word& w : vp.rhs.edges) {
            if (w.size() != 1) { bad("vprod " + vp.name + ": rhs edge word not of length 1"); continue; }
            auto [it, fresh] = owner.emplace(w[0], vp.name);
            if (!fresh)
                bad("name " + al.names.name(w[0]) + " appears in rhs of both " +
                    it->second + " and " + vp.name);
        }
        bool lhs_ok = vp.lhs == g.axiom;
        for (Sym s : g.gamma) lhs_ok = lhs_ok || s == vp.lhs;
        if (!lhs_ok) bad("vprod " + vp.name + ": lhs label not in Gamma or axiom");
    }

    for (const auto& ep : g.eprods) {
        if (ep.p1 < 0 || ep.p1 >= static_cast<int>(g.vprods.size()) ||
            ep.p2 < 0 || ep.p2 >= static_cast<int>(g.vprods.size())) {
            bad("eprod " + ep.name + ": lhs references unknown vertex production");
            continue;
        }
        const auto& r1 = g.vprods[static_cast<size_t>(ep.p1)].rhs;
        const auto& r2 = g.vprods[static_cast<size_t>(ep.p2)].rhs;
        auto in_rhs = [](const ConcreteGraph& gr, Sym name) {
            for (const Word& w : gr.vertices)
                if (w.size() == 1 && w[0] == name) return true;
            return false;
        };
        for (const auto& r : ep.rhs) {
            if (!in_rhs(r1, r.src_name))
                bad("eprod " + ep.name + ": incidence source name " + al.names.name(r.src_name) +
                    " is not a vertex of rhs(" + g.vprods[static_cast<size_t>(ep.p1)].name + ")");
            if (!in_rhs(r2, r.dst_name))
                bad("eprod " + ep.name + ": incidence target name " + al.names.name(r.dst_name) +
                    " is not a vertex of rhs(" + g.vprods[static_cast<size_t>(ep.p2)].name + ")");
            if (!al.is_edge_name(r.edge_name))
                bad("eprod " + ep.name + ": " + al.names.name(r.edge_name) + " is not an edge name");
            auto [it, fresh] = owner.emplace(r.edge_name, ep.name);
            if (!fresh)
                bad("name " + al.names.name(r.edge_name) + " appears in rhs of both " +
                    it->second + " and " + ep.name);
        }
    }
    return d;
}

namespace {

// Incidence pattern (a, src label, dst label) occurring in any rhs.
struct Pattern {
    Sym elabel, src_label, dst_label;
    bool operator<(const Pattern& o) const {
        return std::tie(elabel, src_label, dst_label) <
               std::tie(o.elabel, o.src_label, o.dst_label);
    }
};

std::set<Pattern> occurring_patterns(const Grammar& g) {
    std::set<Pattern> pats;
    for (const auto& vp : g.vprods)
        for (const auto& in : vp.rhs.incidences)
            pats.insert({in.label, vp.rhs.vlabel[static_cast<size_t>(in.src)],
                         vp.rhs.vlabel[static_cast<size_t>(in.dst)]});
    for (const auto& ep : g.eprods)
        for (const auto& r : ep.rhs) {
            Sym sl = g.rhs_vertex_label(r.src_name);
            Sym dl = g.rhs_vertex_label(r.dst_name);
            if (r.reversed) std::swap(sl, dl);
            pats.insert({r.label, sl, dl});
        }
    return pats;
}

} // namespace

GrammarClass classify_grammar(const Grammar& g) {
    GrammarClass c;

    // vD0L: at most one vertex production per label (the axiom label counts
    // as a label here; several axiom productions also break vD0L).
    c.vertex_deterministic = true;
    {
        std::map<Sym, int> cnt;
        for (const auto& vp : g.vprods)
            if (++cnt[vp.lhs] > 1) c.vertex_deterministic = false;
    }

    // eD0L: left hand sides of edge productions are pairwise distinct. This is
    // the reading Prop 4.2's proof relies on (completion preserves it).
    c.edge_deterministic = true;
    {
        std::set<std::tuple<int, Sym, int>> seen;
        for (const auto& ep : g.eprods)
            if (!seen.insert({ep.p1, ep.label, ep.p2}).second) c.edge_deterministic = false;
    }
    c.deterministic = c.vertex_deterministic && c.edge_deterministic;

    c.non_erasing = true;
    for (const auto& vp : g.vprods)
        if (vp.erasing()) c.non_erasing = false;
    for (const auto& ep : g.eprods)
        if (ep.erasing()) c.non_erasing = false;

    // Completeness condition (1): every occurring pattern (a, A1, A2) has a
    // matching edge production for every pair of productions of A1 and A2.
    // Productions with the external axiom label on the lhs are exempt.
    c.complete = true;
    bool axiom_external = !g.axiom_in_gamma();
    std::set<std::tuple<int, Sym, int>> lhs_set;
    for (const auto& ep : g.eprods) lhs_set.insert({ep.p1, ep.label, ep.p2});
    for (const Pattern& p : occurring_patterns(g)) {
        for (size_t i = 0; i < g.vprods.size() && c.complete; ++i) {
            if (g.vprods[i].lhs != p.src_label) continue;
            if (axiom_external && g.vprods[i].lhs == g.axiom) continue;
            for (size_t j = 0; j < g.vprods.size() && c.complete; ++j) {
                if (g.vprods[j].lhs != p.dst_label) continue;
                if (axiom_external && g.vprods[j].lhs == g.axiom) continue;
                if (!lhs_set.count({static_cast<int>(i), p.elabel, static_cast<int>(j)}))
                    c.complete = false;
            }
        }
    }

    // Condition (2): isolated rhs vertices have a production for their label.
    for (const auto& vp : g.vprods) {
        std::set<int> touched;
        for (const auto& in : vp.rhs.incidences) {
            touched.insert(in.src);
            touched.insert(in.dst);
        }
        for (size_t i = 0; i < vp.rhs.vertices.size(); ++i) {
            if (touched.count(static_cast<int>(i))) continue;
            if (g.vprods_with_lhs(vp.rhs.vlabel[i]).empty()) c.complete = false;
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// Text format.

namespace {

struct Tokenizer {
    std::string text;
    size_t pos = 0;
    int line = 1;

    void skip_ws() {
        while (pos < text.size()) {
            char ch = text[pos];
            if (ch == '#') {
                while (pos < text.size() && text[pos] != '\n') ++pos;
            } else if (ch == '\n') {
                ++line;
                ++pos;
            } else if (isspace(static_cast<unsigned char>(ch))) {
                ++pos;
            } else {
                break;
            }
        }
    }
    bool eof() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool eat(char ch) {
        skip_ws();
        if (pos < text.size() && text[pos] == ch) { ++pos; return true; }
        return false;
    }
    void expect(char ch) {
        if (!eat(ch))
            throw ParseError("line " + std::to_string(line) + ": expected '" + std::string(1, ch) + "'");
    }
    bool eat_word(const std::string& w) {
        skip_ws();
        if (pos >= text.size() || !(isalnum(static_cast<unsigned char>(text[pos])) ||
                                    text[pos] == '_' || text[pos] == '!'))
            return false;
        size_t save = pos;
        std::string t = word();
        if (t == w) return true;
        pos = save;
        return false;
    }
    std::string word() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size()) {
            char ch = text[pos];
            if (isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.' || ch == '!' ||
                ch == '*' || ch == '\'' || ch == '+')
                ++pos;
            else
                break;
        }
        if (pos == start)
            throw ParseError("line " + std::to_string(line) + ": expected an identifier");
        return text.substr(start, pos - start);
    }
};

} // namespace

Grammar parse_grammar(std::istream& in) {
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_grammar_text(ss.str());
}

Grammar parse_grammar_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open grammar file: " + path);
    return parse_grammar(f);
}

Grammar parse_grammar_text(const std::string& text) {
    Tokenizer tk{text};
    Grammar g;
    g.al = std::make_shared<Alphabets>();
    Alphabets& al = *g.al;
    std::map<std::string, int> prod_index;

    auto vlabel_of = [&](const std::string& s) {
        Sym id = al.vlabels.find(s);
        if (id == kNoSym) throw ParseError("unknown vertex label: " + s);
        return id;
    };
    auto elabel_of = [&](const std::string& s) {
        Sym id = al.elabels.find(s);
        if (id == kNoSym) throw ParseError("unknown edge label: " + s);
        return id;
    };

    while (!tk.eof()) {
        size_t save = tk.pos;
        std::string kw = tk.word();
        if (kw == "labels") {
            std::string section = tk.word();
            tk.expect(':');
            bool vertexes = section == "v";
            if (!vertexes && section != "e") throw ParseError("labels section must be 'v' or 'e'");
            while (tk.peek() != '\0') {
                if (tk.peek() == ';') { tk.expect(';'); break; }
                size_t before = tk.pos;
                std::string name = tk.word();
                if (name == "labels" || name == "names" || name == "axiom" || name == "vprod" ||
                    name == "eprod" || name == "nonterminals") {
                    tk.pos = before;
                    break;
                }
                if (vertexes) {
                    Sym id = al.vlabels.intern(name);
                    if (std::find(g.gamma.begin(), g.gamma.end(), id) == g.gamma.end())
                        g.gamma.push_back(id);
                } else {
                    Sym id = al.elabels.intern(name);
                    if (std::find(g.sigma.begin(), g.sigma.end(), id) == g.sigma.end())
                        g.sigma.push_back(id);
                }
            }
        } else if (kw == "names") {
            std::string section = tk.word();
            tk.expect(':');
            bool vertexes = section == "v";
            if (!vertexes && section != "e") throw ParseError("names section must be 'v' or 'e'");
            while (tk.peek() != '\0') {
                if (tk.peek() == ';') { tk.expect(';'); break; }
                size_t before = tk.pos;
                std::string name = tk.word();
                if (name == "labels" || name == "names" || name == "axiom" || name == "vprod" ||
                    name == "eprod" || name == "nonterminals") {
                    tk.pos = before;
                    break;
                }
                if (vertexes) al.intern_vertex_name(name);
                else al.intern_edge_name(name);
            }
        } else if (kw == "axiom") {
            g.axiom = al.vlabels.intern(tk.word());
        } else if (kw == "vprod") {
            VertexProduction vp;
            vp.name = tk.word();
            tk.expect(':');
            std::string lhs = tk.word();
            Sym lhs_id = al.vlabels.find(lhs);
            if (lhs_id == kNoSym) throw ParseError("vprod " + vp.name + ": unknown lhs label " + lhs);
            vp.lhs = lhs_id;
            tk.expect('-');
            tk.expect('>');
            tk.expect('{');
            if (tk.eat_word("v")) {
                tk.expect(':');
                while (tk.peek() != ';' && tk.peek() != '}') {
                    std::string nm = tk.word();
                    tk.expect(':');
                    std::string lb = tk.word();
                    Sym name_id = al.names.find(nm);
                    if (name_id == kNoSym || al.is_edge_name(name_id))
                        throw ParseError("vprod " + vp.name + ": unknown vertex name " + nm);
                    vp.rhs.add_vertex({name_id}, vlabel_of(lb));
                }
            }
            if (tk.eat(';')) {
                bool undirected = false;
                if (tk.eat_word("i")) {
                    undirected = false;
                } else if (tk.eat_word("u")) {
                    undirected = true;
                } else if (tk.peek() != '}') {
                    throw ParseError("vprod " + vp.name + ": expected 'i:' or 'u:' section");
                }
                if (tk.peek() == ':') tk.expect(':');
                while (tk.peek() != '}' && tk.peek() != ';') {
                    std::string lb = tk.word();
                    tk.expect('(');
                    std::string src = tk.word();
                    tk.expect(',');
                    std::string ed = tk.word();
                    tk.expect(',');
                    std::string dst = tk.word();
                    tk.expect(')');
                    Sym s = al.names.find(src), d = al.names.find(dst);
                    if (s == kNoSym || d == kNoSym)
                        throw ParseError("vprod " + vp.name + ": unknown vertex name in incidence");
                    int si = vp.rhs.find_vertex({s}), di = vp.rhs.find_vertex({d});
                    if (si < 0 || di < 0)
                        throw ParseError("vprod " + vp.name + ": incidence endpoint not among rhs vertices");
                    if (undirected) {
                        Sym ef = al.intern_edge_name(ed + ".f");
                        Sym eb = al.intern_edge_name(ed + ".b");
                        vp.rhs.add_incidence(elabel_of(lb), si, {ef}, di);
                        vp.rhs.add_incidence(elabel_of(lb), di, {eb}, si);
                    } else {
                        Sym e = al.names.find(ed);
                        if (e == kNoSym || !al.is_edge_name(e))
                            throw ParseError("vprod " + vp.name + ": unknown edge name " + ed);
                        vp.rhs.add_incidence(elabel_of(lb), si, {e}, di);
                    }
                }
            }
            tk.expect('}');
            prod_index[vp.name] = static_cast<int>(g.vprods.size());
            g.vprods.push_back(std::move(vp));
        } else if (kw == "eprod") {
            EdgeProduction ep;
            ep.name = tk.word();
            tk.expect(':');
            std::string p1 = tk.word();
            tk.expect('-');
            std::string lb = tk.word();
            tk.expect('-');
            tk.expect('>');
            std::string p2 = tk.word();
            auto i1 = prod_index.find(p1), i2 = prod_index.find(p2);
            if (i1 == prod_index.end()) throw ParseError("eprod " + ep.name + ": unknown production " + p1);
            if (i2 == prod_index.end()) throw ParseError("eprod " + ep.name + ": unknown production " + p2);
            ep.p1 = i1->second;
            ep.label = elabel_of(lb);
            ep.p2 = i2->second;
            tk.expect('{');
            while (tk.peek() == '>' || tk.peek() == '<') {
                bool fwd = tk.eat('>');
                if (!fwd) tk.expect('<');
                std::string bl = tk.word();
                tk.expect('(');
                std::string src = tk.word();
                tk.expect(',');
                std::string ed = tk.word();
                tk.expect(',');
                std::string dst = tk.word();
                tk.expect(')');
                EdgeRhsIncidence r;
                r.label = elabel_of(bl);
                Sym s = al.names.find(src), d = al.names.find(dst), e = al.names.find(ed);
                if (s == kNoSym || d == kNoSym || e == kNoSym)
                    throw ParseError("eprod " + ep.name + ": unknown name in rhs incidence");
                r.src_name = s;
                r.dst_name = d;
                r.edge_name = e;
                r.reversed = !fwd;
                ep.rhs.push_back(r);
            }
            tk.expect('}');
            g.eprods.push_back(std::move(ep));
        } else if (kw == "nonterminals") {
            while (tk.peek() != '\0') {
                size_t before = tk.pos;
                std::string name = tk.word();
                if (name == "labels" || name == "names" || name == "axiom" || name == "vprod" ||
                    name == "eprod") {
                    tk.pos = before;
                    break;
                }
                Sym v = al.vlabels.find(name);
                Sym e = al.elabels.find(name);
                if (v != kNoSym) g.nonterminal_vlabels.insert(v);
                else if (e != kNoSym) g.nonterminal_elabels.insert(e);
                else throw ParseError("nonterminals: unknown label " + name);
            }
        } else {
            tk.pos = save;
            throw ParseError("line " + std::to_string(tk.line) + ": unknown section '" + kw + "'");
        }
    }
    if (g.axiom == kNoSym) throw ParseError("grammar has no axiom");
    return g;
}

std::string print_grammar(const Grammar& g) {
    const Alphabets& al = *g.al;
    std::ostringstream os;
    os << "labels v:";
    for (Sym s : g.gamma) os << ' ' << al.vlabels.name(s);
    os << "\nlabels e:";
    for (Sym s : g.sigma) os << ' ' << al.elabels.name(s);
    os << "\nnames v:";
    for (size_t i = 0; i < al.names.size(); ++i)
        if (!al.is_edge_name(static_cast<Sym>(i))) os << ' ' << al.names.name(static_cast<Sym>(i));
    os << "\nnames e:";
    for (size_t i = 0; i < al.names.size(); ++i)
        if (al.is_edge_name(static_cast<Sym>(i))) os << ' ' << al.names.name(static_cast<Sym>(i));
    os << "\naxiom " << al.vlabels.name(g.axiom) << "\n";
    for (const auto& vp : g.vprods) {
        os << "vprod " << vp.name << ": " << al.vlabels.name(vp.lhs) << " -> { v:";
        for (size_t i = 0; i < vp.rhs.vertices.size(); ++i)
            os << ' ' << al.word_str(vp.rhs.vertices[i]) << ':'
               << al.vlabels.name(vp.rhs.vlabel[i]);
        if (!vp.rhs.incidences.empty()) {
            os << " ; i:";
            for (const auto& in : vp.rhs.incidences)
                os << ' ' << al.elabels.name(in.label) << '(' << al.word_str(vp.rhs.vertices[in.src])
                   << ',' << al.word_str(vp.rhs.edges[in.edge]) << ','
                   << al.word_str(vp.rhs.vertices[in.dst]) << ')';
        }
        os << " }\n";
    }
    for (const auto& ep : g.eprods) {
        os << "eprod " << ep.name << ": " << g.vprods[static_cast<size_t>(ep.p1)].name << " -"
           << al.elabels.name(ep.label) << "-> " << g.vprods[static_cast<size_t>(ep.p2)].name
           << " {";
        for (const auto& r : ep.rhs)
            os << ' ' << (r.reversed ? '<' : '>') << al.elabels.name(r.label) << '('
               << al.names.name(r.src_name) << ',' << al.names.name(r.edge_name) << ','
               << al.names.name(r.dst_name) << ')';
        os << " }\n";
    }
    if (g.has_nonterminals()) {
        os << "nonterminals";
        for (Sym s : g.nonterminal_vlabels) os << ' ' << al.vlabels.name(s);
        for (Sym s : g.nonterminal_elabels) os << ' ' << al.elabels.name(s);
        os << "\n";
    }
    return os.str();
}

} // namespace lingraph
