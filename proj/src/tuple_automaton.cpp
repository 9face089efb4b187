#include "lingraph/tuple_automaton.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

namespace lingraph {

namespace {

bool all_blank(const Letter& l) {
    for (Sym s : l)
        if (s != kBlank) return false;
    return true;
}

struct LetterHash {
    size_t operator()(const Letter& l) const { return WordHash{}(l); }
};

} // namespace

std::vector<Letter> convolve(const WordTuple& t) {
    size_t len = 0;
    for (const Word& w : t) len = std::max(len, w.size());
    std::vector<Letter> out(len, Letter(t.size(), kBlank));
    for (size_t c = 0; c < t.size(); ++c)
        for (size_t i = 0; i < t[c].size(); ++i) out[i][c] = t[c][i];
    return out;
}

WordTuple deconvolve(const std::vector<Letter>& w, size_t arity) {
    WordTuple t(arity);
    std::vector<char> finished(arity, false);
    for (size_t i = 0; i < w.size(); ++i) {
        if (w[i].size() != arity) throw std::invalid_argument("letter arity mismatch");
        for (size_t c = 0; c < arity; ++c) {
            if (w[i][c] == kBlank) {
                finished[c] = true;
            } else {
                if (finished[c])
                    throw std::invalid_argument("hole at position " + std::to_string(i) +
                                                ", component " + std::to_string(c));
                t[c].push_back(w[i][c]);
            }
        }
    }
    return t;
}

std::vector<std::vector<int>> TupleAutomaton::out_index() const {
    std::vector<std::vector<int>> idx(static_cast<size_t>(num_states));
    for (size_t i = 0; i < trans.size(); ++i) idx[static_cast<size_t>(trans[i].from)].push_back(static_cast<int>(i));
    return idx;
}

std::vector<std::vector<int>> TupleAutomaton::in_index() const {
    std::vector<std::vector<int>> idx(static_cast<size_t>(num_states));
    for (size_t i = 0; i < trans.size(); ++i) idx[static_cast<size_t>(trans[i].to)].push_back(static_cast<int>(i));
    return idx;
}

TupleAutomaton universe_star(const std::vector<Sym>& alphabet, const std::string& comp) {
    TupleAutomaton a;
    a.comps = {comp};
    int q = a.add_state(true);
    a.initial = q;
    for (Sym s : alphabet) a.add_tr(q, {s}, q);
    return a;
}

TupleAutomaton empty_automaton(const std::vector<std::string>& comps) {
    TupleAutomaton a;
    a.comps = comps;
    a.initial = a.add_state(false);
    return a;
}

TupleAutomaton rename_comps(const TupleAutomaton& a, const std::vector<std::string>& comps) {
    if (comps.size() != a.comps.size()) throw std::invalid_argument("arity mismatch in rename");
    TupleAutomaton out = a;
    out.comps = comps;
    return out;
}

TupleAutomaton trim(const TupleAutomaton& a) {
    std::vector<char> reach(static_cast<size_t>(a.num_states), false);
    std::deque<int> bfs{a.initial};
    reach[static_cast<size_t>(a.initial)] = true;
    auto out = a.out_index();
    while (!bfs.empty()) {
        int q = bfs.front();
        bfs.pop_front();
        for (int ti : out[static_cast<size_t>(q)]) {
            int t = a.trans[static_cast<size_t>(ti)].to;
            if (!reach[static_cast<size_t>(t)]) {
                reach[static_cast<size_t>(t)] = true;
                bfs.push_back(t);
            }
        }
    }
    std::vector<char> coreach(static_cast<size_t>(a.num_states), false);
    auto in = a.in_index();
    for (int q = 0; q < a.num_states; ++q)
        if (a.is_final(q)) {
            coreach[static_cast<size_t>(q)] = true;
            bfs.push_back(q);
        }
    while (!bfs.empty()) {
        int q = bfs.front();
        bfs.pop_front();
        for (int ti : in[static_cast<size_t>(q)]) {
            int f = a.trans[static_cast<size_t>(ti)].from;
            if (!coreach[static_cast<size_t>(f)]) {
                coreach[static_cast<size_t>(f)] = true;
                bfs.push_back(f);
            }
        }
    }
    std::vector<int> remap(static_cast<size_t>(a.num_states), -1);
    TupleAutomaton r;
    r.comps = a.comps;
    for (int q = 0; q < a.num_states; ++q)
        if (reach[static_cast<size_t>(q)] && coreach[static_cast<size_t>(q)])
            remap[static_cast<size_t>(q)] = r.add_state(a.is_final(q));
    if (remap[static_cast<size_t>(a.initial)] == -1) {
        // Empty language; keep a lone initial state.
        TupleAutomaton e = empty_automaton(a.comps);
        return e;
    }
    r.initial = remap[static_cast<size_t>(a.initial)];
    for (const auto& t : a.trans)
        if (remap[static_cast<size_t>(t.from)] != -1 && remap[static_cast<size_t>(t.to)] != -1)
            r.add_tr(remap[static_cast<size_t>(t.from)], t.letter, remap[static_cast<size_t>(t.to)]);
    return r;
}

TupleAutomaton canonicalize(const TupleAutomaton& a) {
    // 1. Close finals under all-blank paths, then drop all-blank transitions.
    std::vector<char> fin(a.finals.begin(), a.finals.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& t : a.trans)
            if (all_blank(t.letter) && fin[static_cast<size_t>(t.to)] && !fin[static_cast<size_t>(t.from)]) {
                fin[static_cast<size_t>(t.from)] = true;
                changed = true;
            }
    }
    // 2. Re-impose hole-freedom with finished masks per component.
    size_t ar = a.arity();
    TupleAutomaton r;
    r.comps = a.comps;
    std::map<std::pair<int, uint32_t>, int> states;
    std::function<int(int, uint32_t)> get = [&](int q, uint32_t mask) {
        auto it = states.find({q, mask});
        if (it != states.end()) return it->second;
        int id = r.add_state(fin[static_cast<size_t>(q)]);
        states.emplace(std::make_pair(q, mask), id);
        return id;
    };
    r.initial = get(a.initial, 0);
    auto out = a.out_index();
    std::deque<std::pair<int, uint32_t>> work{{a.initial, 0}};
    std::set<std::pair<int, uint32_t>> seen{{a.initial, 0}};
    while (!work.empty()) {
        auto [q, mask] = work.front();
        work.pop_front();
        int from = get(q, mask);
        for (int ti : out[static_cast<size_t>(q)]) {
            const auto& t = a.trans[static_cast<size_t>(ti)];
            if (all_blank(t.letter)) continue;
            uint32_t next = mask;
            bool ok = true;
            for (size_t c = 0; c < ar; ++c) {
                bool blank = t.letter[c] == kBlank;
                if (blank) next |= (1u << c);
                else if (mask & (1u << c)) { ok = false; break; }
            }
            if (!ok) continue;
            int to = get(t.to, next);
            r.add_tr(from, t.letter, to);
            if (seen.insert({t.to, next}).second) work.push_back({t.to, next});
        }
    }
    return trim(r);
}

TupleAutomaton union_same(const TupleAutomaton& a, const TupleAutomaton& b) {
    if (a.comps != b.comps) throw std::invalid_argument("union requires identical components");
    TupleAutomaton r;
    r.comps = a.comps;
    // Fresh initial simulating both initials.
    int init = r.add_state(a.is_final(a.initial) || b.is_final(b.initial));
    r.initial = init;
    int offa = r.num_states;
    for (int q = 0; q < a.num_states; ++q) r.add_state(a.is_final(q));
    int offb = r.num_states;
    for (int q = 0; q < b.num_states; ++q) r.add_state(b.is_final(q));
    for (const auto& t : a.trans) {
        r.add_tr(offa + t.from, t.letter, offa + t.to);
        if (t.from == a.initial) r.add_tr(init, t.letter, offa + t.to);
    }
    for (const auto& t : b.trans) {
        r.add_tr(offb + t.from, t.letter, offb + t.to);
        if (t.from == b.initial) r.add_tr(init, t.letter, offb + t.to);
    }
    return trim(r);
}

namespace {

// Subset move of automaton a on an exact letter.
std::set<int> subset_move(const TupleAutomaton& a, const std::vector<std::vector<int>>& out,
                          const std::set<int>& s, const Letter& l) {
    std::set<int> r;
    for (int q : s)
        for (int ti : out[static_cast<size_t>(q)]) {
            const auto& t = a.trans[static_cast<size_t>(ti)];
            if (t.letter == l) r.insert(t.to);
        }
    return r;
}

} // namespace

TupleAutomaton difference(const TupleAutomaton& a, const TupleAutomaton& b) {
    if (a.comps != b.comps) throw std::invalid_argument("difference requires identical components");
    auto outb = b.out_index();
    TupleAutomaton r;
    r.comps = a.comps;
    std::map<std::pair<int, std::set<int>>, int> states;
    std::function<int(int, const std::set<int>&)> get = [&](int qa, const std::set<int>& s) {
        auto it = states.find({qa, s});
        if (it != states.end()) return it->second;
        bool bfinal = false;
        for (int q : s) bfinal = bfinal || b.is_final(q);
        int id = r.add_state(a.is_final(qa) && !bfinal);
        states.emplace(std::make_pair(qa, s), id);
        return id;
    };
    std::set<int> s0{b.initial};
    r.initial = get(a.initial, s0);
    auto outa = a.out_index();
    std::deque<std::pair<int, std::set<int>>> work{{a.initial, s0}};
    std::set<std::pair<int, std::set<int>>> seen{{a.initial, s0}};
    while (!work.empty()) {
        auto [qa, s] = work.front();
        work.pop_front();
        int from = get(qa, s);
        for (int ti : outa[static_cast<size_t>(qa)]) {
            const auto& t = a.trans[static_cast<size_t>(ti)];
            std::set<int> s2 = subset_move(b, outb, s, t.letter);
            int to = get(t.to, s2);
            r.add_tr(from, t.letter, to);
            if (seen.insert({t.to, s2}).second) work.push_back({t.to, s2});
        }
    }
    return trim(r);
}

TupleAutomaton intersect_conjoin(const TupleAutomaton& a, const TupleAutomaton& b) {
    // Result components: a's, then b's new ones.
    std::vector<std::string> comps = a.comps;
    std::vector<int> bpos; // for each b comp, index into comps
    for (const auto& c : b.comps) {
        auto it = std::find(comps.begin(), comps.end(), c);
        if (it == comps.end()) {
            comps.push_back(c);
            bpos.push_back(static_cast<int>(comps.size()) - 1);
        } else {
            bpos.push_back(static_cast<int>(it - comps.begin()));
        }
    }
    size_t ar = comps.size();
    // Each side is run in padded view: once final, it may read blanks forever
    // on its own components (state -1 = done).
    TupleAutomaton r;
    r.comps = comps;
    std::map<std::pair<int, int>, int> states;
    auto fin_side = [](const TupleAutomaton& x, int q) {
        return q == -2 || (q >= 0 && x.is_final(q));
    };
    std::function<int(int, int)> get = [&](int qa, int qb) {
        auto it = states.find({qa, qb});
        if (it != states.end()) return it->second;
        int id = r.add_state(fin_side(a, qa) && fin_side(b, qb));
        states.emplace(std::make_pair(qa, qb), id);
        return id;
    };
    auto outa = a.out_index();
    auto outb = b.out_index();
    r.initial = get(a.initial, b.initial);
    std::deque<std::pair<int, int>> work{{a.initial, b.initial}};
    std::set<std::pair<int, int>> seen{{a.initial, b.initial}};

    // Moves of one side: list of (subletter-filled result letter constraint, next state).
    // We enumerate a's moves (plus "stay done") and join with b's compatible moves.
    auto side_moves = [&](const TupleAutomaton& x, const std::vector<std::vector<int>>& outx,
                          int q, const std::vector<int>& pos) {
        // Each move: pair (letter over result comps with kNoSym = unconstrained, next)
        std::vector<std::pair<Letter, int>> moves;
        if (q >= 0) {
            for (int ti : outx[static_cast<size_t>(q)]) {
                const auto& t = x.trans[static_cast<size_t>(ti)];
                Letter l(ar, kNoSym - 1); // sentinel: unconstrained
                for (size_t c = 0; c < t.letter.size(); ++c)
                    l[static_cast<size_t>(pos[c])] = t.letter[c];
                moves.push_back({l, t.to});
            }
        }
        if (fin_side(x, q)) {
            // All-blank on own components, state becomes done (-2).
            Letter l(ar, kNoSym - 1);
            for (size_t c = 0; c < pos.size(); ++c) l[static_cast<size_t>(pos[c])] = kBlank;
            moves.push_back({l, -2});
        }
        return moves;
    };
    std::vector<int> apos(a.comps.size());
    std::iota(apos.begin(), apos.end(), 0);

    const Sym kFree = kNoSym - 1;
    while (!work.empty()) {
        auto [qa, qb] = work.front();
        work.pop_front();
        int from = get(qa, qb);
        auto amoves = side_moves(a, outa, qa, apos);
        auto bmoves = side_moves(b, outb, qb, bpos);
        for (const auto& [la, na] : amoves)
            for (const auto& [lb, nb] : bmoves) {
                Letter l(ar);
                bool ok = true;
                for (size_t c = 0; c < ar && ok; ++c) {
                    Sym sa = la[c], sb = lb[c];
                    if (sa == kFree && sb == kFree) ok = false; // unreachable: comps span both sides
                    else if (sa == kFree) l[c] = sb;
                    else if (sb == kFree) l[c] = sa;
                    else if (sa == sb) l[c] = sa;
                    else ok = false;
                }
                if (!ok) continue;
                if (all_blank(l)) continue;
                int to = get(na, nb);
                r.add_tr(from, l, to);
                if (seen.insert({na, nb}).second) work.push_back({na, nb});
            }
    }
    return canonicalize(r);
}

TupleAutomaton determinize(const TupleAutomaton& a) {
    auto out = a.out_index();
    TupleAutomaton r;
    r.comps = a.comps;
    std::map<std::set<int>, int> states;
    std::function<int(const std::set<int>&)> get = [&](const std::set<int>& s) {
        auto it = states.find(s);
        if (it != states.end()) return it->second;
        bool fin = false;
        for (int q : s) fin = fin || a.is_final(q);
        int id = r.add_state(fin);
        states.emplace(s, id);
        return id;
    };
    std::set<int> s0{a.initial};
    r.initial = get(s0);
    std::deque<std::set<int>> work{s0};
    std::set<std::set<int>> seen{s0};
    while (!work.empty()) {
        std::set<int> s = work.front();
        work.pop_front();
        int from = get(s);
        std::map<Letter, std::set<int>> moves;
        for (int q : s)
            for (int ti : out[static_cast<size_t>(q)]) {
                const auto& t = a.trans[static_cast<size_t>(ti)];
                moves[t.letter].insert(t.to);
            }
        for (auto& [l, s2] : moves) {
            int to = get(s2);
            r.add_tr(from, l, to);
            if (seen.insert(s2).second) work.push_back(s2);
        }
    }
    return trim(r);
}

namespace {

// Padded (delta-box) view of a unary automaton: state -2 means "finished".
struct PaddedUnary {
    const TupleAutomaton* u;
    std::vector<std::vector<int>> out;

    explicit PaddedUnary(const TupleAutomaton& a) : u(&a), out(a.out_index()) {}
    bool final_or_done(int q) const { return q == -2 || u->is_final(q); }
    // Enabled symbol moves from q: (symbol, next); blank move to -2 if final/done.
    void moves(int q, std::vector<std::pair<Sym, int>>& out_moves) const {
        out_moves.clear();
        if (q >= 0)
            for (int ti : out[static_cast<size_t>(q)]) {
                const auto& t = u->trans[static_cast<size_t>(ti)];
                out_moves.push_back({t.letter[0], t.to});
            }
        if (final_or_done(q)) out_moves.push_back({kBlank, -2});
    }
};

} // namespace

TupleAutomaton complement_within(const TupleAutomaton& a, const TupleAutomaton& unary_universe,
                                 uint64_t max_transitions) {
    size_t ar = a.arity();
    PaddedUnary uni(unary_universe);
    auto outa = a.out_index();

    // State: (per-component universe states, subset of a's states).
    using UState = std::vector<int>;
    using Key = std::pair<UState, std::set<int>>;
    TupleAutomaton r;
    r.comps = a.comps;
    std::map<Key, int> states;
    std::function<int(const Key&)> get = [&](const Key& k) {
        auto it = states.find(k);
        if (it != states.end()) return it->second;
        bool ufin = true;
        for (int q : k.first) ufin = ufin && uni.final_or_done(q);
        bool afin = false;
        for (int q : k.second) afin = afin || a.is_final(q);
        int id = r.add_state(ufin && !afin);
        states.emplace(k, id);
        return id;
    };
    Key k0{UState(ar, unary_universe.initial), {a.initial}};
    r.initial = get(k0);
    if (ar == 0) return r; // language is {()} or {}; finality was decided by get()
    std::deque<Key> work{k0};
    std::set<Key> seen{k0};
    std::vector<std::vector<std::pair<Sym, int>>> cm(ar);
    while (!work.empty()) {
        Key k = work.front();
        work.pop_front();
        int from = get(k);
        bool stuck = false;
        for (size_t c = 0; c < ar; ++c) {
            uni.moves(k.first[c], cm[c]);
            if (cm[c].empty()) stuck = true;
        }
        if (stuck) continue;
        // Enumerate the product of per-component moves.
        std::vector<size_t> idx(ar, 0);
        while (true) {
            Letter l(ar);
            UState next(ar);
            for (size_t c = 0; c < ar; ++c) {
                l[c] = cm[c][idx[c]].first;
                next[c] = cm[c][idx[c]].second;
            }
            if (!all_blank(l)) {
                std::set<int> s2 = subset_move(a, outa, k.second, l);
                Key k2{next, s2};
                int to = get(k2);
                r.add_tr(from, l, to);
                if (r.trans.size() > max_transitions)
                    throw CapExceeded("complement automaton exceeds transition cap");
                if (seen.insert(k2).second) work.push_back(k2);
            }
            size_t c = 0;
            while (c < ar && ++idx[c] == cm[c].size()) idx[c++] = 0;
            if (c == ar) break;
        }
    }
    return trim(r);
}

TupleAutomaton free_power(const TupleAutomaton& unary, const std::vector<std::string>& comps) {
    TupleAutomaton none = empty_automaton(comps);
    // universe^comps = universe^comps \ empty.
    TupleAutomaton r = complement_within(none, unary);
    r.comps = comps;
    return r;
}

TupleAutomaton diagonal(const TupleAutomaton& b, const std::string& suffix) {
    TupleAutomaton r;
    r.comps = b.comps;
    for (const auto& c : b.comps) r.comps.push_back(c + suffix);
    r.num_states = b.num_states;
    r.finals = b.finals;
    r.initial = b.initial;
    for (const auto& t : b.trans) {
        Letter l = t.letter;
        l.insert(l.end(), t.letter.begin(), t.letter.end());
        r.add_tr(t.from, l, t.to);
    }
    return r;
}

TupleAutomaton loose_product(const TupleAutomaton& a, const TupleAutomaton& b) {
    for (const auto& c : b.comps)
        if (std::find(a.comps.begin(), a.comps.end(), c) != a.comps.end())
            throw std::invalid_argument("loose product requires disjoint components");
    TupleAutomaton r;
    r.comps = a.comps;
    r.comps.insert(r.comps.end(), b.comps.begin(), b.comps.end());
    auto id = [&](int qa, int qb) { return qa * b.num_states + qb; };
    for (int qa = 0; qa < a.num_states; ++qa)
        for (int qb = 0; qb < b.num_states; ++qb)
            r.add_state(a.is_final(qa) && b.is_final(qb));
    r.initial = id(a.initial, b.initial);
    for (const auto& ta : a.trans)
        for (const auto& tb : b.trans) {
            Letter l = ta.letter;
            l.insert(l.end(), tb.letter.begin(), tb.letter.end());
            r.add_tr(id(ta.from, tb.from), l, id(ta.to, tb.to));
        }
    return trim(r);
}

TupleAutomaton concat_via(const TupleAutomaton& a, const std::vector<SwitchTr>& sw,
                          const TupleAutomaton& b) {
    if (a.comps != b.comps) throw std::invalid_argument("concat requires identical components");
    TupleAutomaton r;
    r.comps = a.comps;
    for (int q = 0; q < a.num_states; ++q) r.add_state(false);
    int offb = r.num_states;
    for (int q = 0; q < b.num_states; ++q) r.add_state(b.is_final(q));
    r.initial = a.initial;
    for (const auto& t : a.trans) r.add_tr(t.from, t.letter, t.to);
    for (const auto& t : b.trans) r.add_tr(offb + t.from, t.letter, offb + t.to);
    for (const auto& s : sw) r.add_tr(s.from_a, s.letter, offb + s.to_b);
    return trim(r);
}

TupleAutomaton upturn(const TupleAutomaton& a, const std::vector<std::string>& result_comps,
                      const std::map<std::string, std::string>& sigma,
                      const TupleAutomaton& unary_universe) {
    // Positions of referenced source comps, in a's order.
    std::vector<int> src_pos_of_result(result_comps.size(), -1);
    std::vector<char> src_referenced(a.comps.size(), false);
    for (size_t i = 0; i < result_comps.size(); ++i) {
        auto it = sigma.find(result_comps[i]);
        if (it == sigma.end()) continue;
        auto jt = std::find(a.comps.begin(), a.comps.end(), it->second);
        if (jt == a.comps.end()) throw std::invalid_argument("sigma references unknown source comp");
        src_pos_of_result[i] = static_cast<int>(jt - a.comps.begin());
        src_referenced[static_cast<size_t>(src_pos_of_result[i])] = true;
    }
    // Project out unreferenced source comps first.
    std::vector<std::string> kept;
    for (size_t c = 0; c < a.comps.size(); ++c)
        if (src_referenced[c]) kept.push_back(a.comps[c]);
    TupleAutomaton base = a;
    if (kept.size() != a.comps.size()) {
        // Drop letters' unreferenced positions, then canonicalize.
        TupleAutomaton p;
        p.comps = kept;
        p.num_states = a.num_states;
        p.finals = a.finals;
        p.initial = a.initial;
        for (const auto& t : a.trans) {
            Letter l;
            for (size_t c = 0; c < a.comps.size(); ++c)
                if (src_referenced[c]) l.push_back(t.letter[c]);
            p.add_tr(t.from, l, t.to);
        }
        base = canonicalize(p);
        // Recompute positions against the trimmed comp list.
        for (size_t i = 0; i < result_comps.size(); ++i) {
            if (src_pos_of_result[i] < 0) continue;
            const std::string& name = a.comps[static_cast<size_t>(src_pos_of_result[i])];
            auto jt = std::find(base.comps.begin(), base.comps.end(), name);
            src_pos_of_result[i] = static_cast<int>(jt - base.comps.begin());
        }
    }

    // Expand: constrained result comps copy base letters; free comps run the
    // universe in padded view; the base itself runs in padded view too.
    size_t ar = result_comps.size();
    PaddedUnary uni(unary_universe);
    auto outb = base.out_index();
    std::vector<size_t> free_comps;
    for (size_t i = 0; i < ar; ++i)
        if (src_pos_of_result[i] < 0) free_comps.push_back(i);

    using Key = std::pair<int, std::vector<int>>; // base state (-2 done), universe states
    TupleAutomaton r;
    r.comps = result_comps;
    std::map<Key, int> states;
    auto base_fin = [&](int q) { return q == -2 || base.is_final(q); };
    std::function<int(const Key&)> get = [&](const Key& k) {
        auto it = states.find(k);
        if (it != states.end()) return it->second;
        bool fin = base_fin(k.first);
        for (int q : k.second) fin = fin && uni.final_or_done(q);
        int id = r.add_state(fin);
        states.emplace(k, id);
        return id;
    };
    Key k0{base.initial, std::vector<int>(free_comps.size(), unary_universe.initial)};
    r.initial = get(k0);
    std::deque<Key> work{k0};
    std::set<Key> seen{k0};
    while (!work.empty()) {
        Key k = work.front();
        work.pop_front();
        int from = get(k);
        // Base moves: real transitions plus the all-blank stay once final.
        std::vector<std::pair<const Letter*, int>> bmoves;
        if (k.first >= 0)
            for (int ti : outb[static_cast<size_t>(k.first)])
                bmoves.push_back({&base.trans[static_cast<size_t>(ti)].letter,
                                  base.trans[static_cast<size_t>(ti)].to});
        if (base_fin(k.first)) bmoves.push_back({nullptr, -2});
        std::vector<std::vector<std::pair<Sym, int>>> fm(free_comps.size());
        bool stuck = false;
        for (size_t j = 0; j < free_comps.size(); ++j) {
            uni.moves(k.second[j], fm[j]);
            if (fm[j].empty()) stuck = true;
        }
        if (stuck) continue;
        for (const auto& [bl, bnext] : bmoves) {
            Letter templ(ar, kBlank);
            if (bl)
                for (size_t i = 0; i < ar; ++i)
                    if (src_pos_of_result[i] >= 0)
                        templ[i] = (*bl)[static_cast<size_t>(src_pos_of_result[i])];
            // Product over free comp moves.
            std::vector<size_t> idx(free_comps.size(), 0);
            while (true) {
                Letter l = templ;
                std::vector<int> unext(free_comps.size());
                bool have_free = !free_comps.empty();
                for (size_t j = 0; j < free_comps.size(); ++j) {
                    l[free_comps[j]] = fm[j][idx[j]].first;
                    unext[j] = fm[j][idx[j]].second;
                }
                if (!all_blank(l)) {
                    Key k2{bnext, unext};
                    int to = get(k2);
                    r.add_tr(from, l, to);
                    if (seen.insert(k2).second) work.push_back(k2);
                }
                if (!have_free) break;
                size_t j = 0;
                while (j < free_comps.size() && ++idx[j] == fm[j].size()) idx[j++] = 0;
                if (j == free_comps.size()) break;
            }
        }
    }
    return canonicalize(r);
}

TupleAutomaton pullback(const TupleAutomaton& a, const std::vector<std::string>& result_comps,
                        const std::vector<std::string>& sigma_by_position,
                        const TupleAutomaton& unary_universe) {
    if (sigma_by_position.size() != a.comps.size())
        throw std::invalid_argument("pullback sigma arity mismatch");
    std::vector<int> target(a.comps.size(), -1);
    std::vector<char> covered(result_comps.size(), false);
    for (size_t p = 0; p < sigma_by_position.size(); ++p) {
        auto it = std::find(result_comps.begin(), result_comps.end(), sigma_by_position[p]);
        if (it == result_comps.end())
            throw std::invalid_argument("pullback sigma targets unknown result comp");
        target[p] = static_cast<int>(it - result_comps.begin());
        covered[static_cast<size_t>(target[p])] = true;
    }
    // Constrained part: translate each transition if its letter is consistent.
    TupleAutomaton mid;
    std::vector<std::string> mid_comps;
    std::vector<int> mid_pos(result_comps.size(), -1);
    for (size_t i = 0; i < result_comps.size(); ++i)
        if (covered[i]) {
            mid_pos[i] = static_cast<int>(mid_comps.size());
            mid_comps.push_back(result_comps[i]);
        }
    mid.comps = mid_comps;
    mid.num_states = a.num_states;
    mid.finals = a.finals;
    mid.initial = a.initial;
    for (const auto& t : a.trans) {
        Letter l(mid_comps.size(), kNoSym - 1);
        bool ok = true;
        for (size_t p = 0; p < t.letter.size() && ok; ++p) {
            int rc = target[p];
            int mc = mid_pos[static_cast<size_t>(rc)];
            Sym& slot = l[static_cast<size_t>(mc)];
            if (slot == kNoSym - 1) slot = t.letter[p];
            else if (slot != t.letter[p]) ok = false;
        }
        if (!ok) continue;
        mid.add_tr(t.from, l, t.to);
    }
    mid = canonicalize(mid);
    // Free result comps (not covered) via an identity upturn.
    std::map<std::string, std::string> sigma;
    for (const auto& c : mid.comps) sigma[c] = c;
    return upturn(mid, result_comps, sigma, unary_universe);
}

TupleAutomaton project_onto(const TupleAutomaton& a, const std::vector<std::string>& kept) {
    std::map<std::string, std::string> sigma;
    for (const auto& c : kept) sigma[c] = c;
    // No free comps, so the universe is irrelevant; pass a trivial one.
    TupleAutomaton triv = universe_star({});
    return upturn(a, kept, sigma, triv);
}

TupleAutomaton project_out(const TupleAutomaton& a, const std::vector<std::string>& dropped) {
    std::vector<std::string> kept;
    for (const auto& c : a.comps)
        if (std::find(dropped.begin(), dropped.end(), c) == dropped.end()) kept.push_back(c);
    return project_onto(a, kept);
}

bool is_empty(const TupleAutomaton& a) {
    TupleAutomaton t = trim(a);
    if (t.is_final(t.initial)) return false;
    return t.trans.empty() && !t.is_final(t.initial);
}

bool accepts(const TupleAutomaton& a, const WordTuple& t) {
    if (t.size() != a.arity()) return false;
    auto w = convolve(t);
    std::set<int> s{a.initial};
    auto out = a.out_index();
    for (const auto& l : w) {
        s = subset_move(a, out, s, l);
        if (s.empty()) return false;
    }
    for (int q : s)
        if (a.is_final(q)) return true;
    return false;
}

std::set<WordTuple> enumerate_relation(const TupleAutomaton& a, size_t max_len) {
    TupleAutomaton t = trim(a);
    std::set<WordTuple> out;
    if (t.is_final(t.initial)) out.insert(WordTuple(t.arity()));
    auto oi = t.out_index();
    // DFS over state sets; each node = distinct letter word.
    std::vector<Letter> word;
    std::function<void(const std::set<int>&)> rec = [&](const std::set<int>& s) {
        for (int q : s)
            if (t.is_final(q) && !word.empty()) {
                out.insert(deconvolve(word, t.arity()));
                break;
            }
        if (word.size() == max_len) return;
        std::map<Letter, std::set<int>> moves;
        for (int q : s)
            for (int ti : oi[static_cast<size_t>(q)]) {
                const auto& tr = t.trans[static_cast<size_t>(ti)];
                moves[tr.letter].insert(tr.to);
            }
        for (auto& [l, s2] : moves) {
            word.push_back(l);
            rec(s2);
            word.pop_back();
        }
    };
    if (t.num_states > 0) rec({t.initial});
    return out;
}

std::optional<WordTuple> shortest_witness(const TupleAutomaton& a, size_t search_limit) {
    TupleAutomaton t = trim(a);
    if (t.num_states == 0) return std::nullopt;
    if (t.is_final(t.initial)) return WordTuple(t.arity());
    if (t.trans.empty()) return std::nullopt;
    auto oi = t.out_index();
    for (size_t len = 1; len <= search_limit; ++len) {
        // Iterative deepening over lexicographically sorted letters.
        std::vector<Letter> word;
        std::function<bool(const std::set<int>&)> rec = [&](const std::set<int>& s) -> bool {
            if (word.size() == len) {
                for (int q : s)
                    if (t.is_final(q)) return true;
                return false;
            }
            std::map<Letter, std::set<int>> moves;
            for (int q : s)
                for (int ti : oi[static_cast<size_t>(q)]) {
                    const auto& tr = t.trans[static_cast<size_t>(ti)];
                    moves[tr.letter].insert(tr.to);
                }
            for (auto& [l, s2] : moves) {
                word.push_back(l);
                if (rec(s2)) return true;
                word.pop_back();
            }
            return false;
        };
        if (rec({t.initial})) return deconvolve(word, t.arity());
    }
    return std::nullopt;
}

TupleAutomaton hole_free_filter(const TupleAutomaton& a) { return canonicalize(a); }

} // namespace lingraph
