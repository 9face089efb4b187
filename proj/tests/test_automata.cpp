#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lingraph/tuple_automaton.hpp"

using namespace lingraph;

namespace {

// Small fixed alphabet {0=a, 1=b}.
const std::vector<Sym> kAB{0, 1};

TupleAutomaton singleton(const WordTuple& t, const std::vector<std::string>& comps) {
    TupleAutomaton a;
    a.comps = comps;
    auto w = convolve(t);
    int q = a.add_state(w.empty());
    a.initial = q;
    int cur = q;
    for (size_t i = 0; i < w.size(); ++i) {
        int nxt = a.add_state(i + 1 == w.size());
        a.add_tr(cur, w[i], nxt);
        cur = nxt;
    }
    return a;
}

// Equality-pair automaton over {a,b}: {(w,w)}.
TupleAutomaton equality_pairs() {
    TupleAutomaton a;
    a.comps = {"1", "2"};
    int q = a.add_state(true);
    a.initial = q;
    for (Sym s : kAB) a.add_tr(q, {s, s}, q);
    return a;
}

std::mt19937 rng(20240525);

TupleAutomaton random_automaton(size_t arity) {
    std::uniform_int_distribution<int> nstates(1, 4);
    std::uniform_int_distribution<int> ntrans(0, 10);
    std::uniform_int_distribution<int> sym(-1, 1); // -1 = blank
    TupleAutomaton a;
    for (size_t i = 0; i < arity; ++i) a.comps.push_back("c" + std::to_string(i));
    int n = nstates(rng);
    std::uniform_int_distribution<int> st(0, n - 1);
    std::bernoulli_distribution fin(0.5);
    for (int i = 0; i < n; ++i) a.add_state(fin(rng));
    a.initial = 0;
    int m = ntrans(rng);
    for (int i = 0; i < m; ++i) {
        Letter l(arity);
        for (auto& s : l) s = sym(rng);
        a.add_tr(st(rng), l, st(rng));
    }
    return canonicalize(a); // keep values canonical like the real pipeline
}

} // namespace

TEST_CASE("convolution basics") {
    // ("ab","a") -> [(a,a),(b,blank)]
    WordTuple t{{0, 1}, {0}};
    auto w = convolve(t);
    REQUIRE(w.size() == 2);
    CHECK(w[0] == Letter{0, 0});
    CHECK(w[1] == Letter{1, kBlank});
    CHECK(deconvolve(w, 2) == t);

    CHECK(convolve(WordTuple{{}, {}}).empty());

    std::vector<Letter> holed{{kBlank, 0}, {1, 1}};
    CHECK_THROWS(deconvolve(holed, 2));
}

TEST_CASE("convolve/deconvolve round trip on random tuples") {
    std::uniform_int_distribution<int> len(0, 5);
    std::uniform_int_distribution<int> sym(0, 1);
    std::uniform_int_distribution<size_t> ar(1, 3);
    for (int it = 0; it < 1000; ++it) {
        size_t arity = ar(rng);
        WordTuple t(arity);
        for (auto& w : t) {
            int n = len(rng);
            for (int i = 0; i < n; ++i) w.push_back(sym(rng));
        }
        CHECK(deconvolve(convolve(t), arity) == t);
    }
}

TEST_CASE("boolean identities") {
    TupleAutomaton a = singleton({{0, 1}}, {"1"});
    TupleAutomaton none = empty_automaton({"1"});
    CHECK(enumerate_relation(union_same(a, none), 4) == enumerate_relation(a, 4));
    CHECK(enumerate_relation(intersect_conjoin(a, a), 4) == enumerate_relation(a, 4));

    // (L1 u L2) \ L2 == L1 \ L2 at bounded length, on random automata.
    for (int it = 0; it < 25; ++it) {
        TupleAutomaton x = random_automaton(1);
        TupleAutomaton y = random_automaton(1);
        auto lhs = enumerate_relation(difference(union_same(x, y), y), 6);
        auto rhs = enumerate_relation(difference(x, y), 6);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("complement within a universe") {
    TupleAutomaton u = universe_star(kAB);
    TupleAutomaton none = empty_automaton({"1"});
    auto all = enumerate_relation(complement_within(none, u), 3);
    CHECK(all.size() == 1 + 2 + 4 + 8); // eps, a, b, aa...
    // Double complement restores the relation.
    TupleAutomaton a = singleton({{0, 1}}, {"1"});
    TupleAutomaton c1 = complement_within(a, u);
    TupleAutomaton c2 = complement_within(c1, u);
    CHECK(enumerate_relation(c2, 4) == enumerate_relation(a, 4));
}

TEST_CASE("free product admits unequal lengths, loose product does not") {
    TupleAutomaton u = universe_star(kAB);
    TupleAutomaton fp = free_power(u, {"1", "2"});
    auto rel = enumerate_relation(fp, 2);
    bool unequal = false;
    for (const auto& t : rel)
        if (t[0].size() != t[1].size()) unequal = true;
    CHECK(unequal);

    TupleAutomaton lp = loose_product(u, rename_comps(u, {"2"}));
    for (const auto& t : enumerate_relation(lp, 3)) CHECK(t[0].size() == t[1].size());
}

TEST_CASE("diagonal") {
    TupleAutomaton w = singleton({{0, 1, 1}}, {"1"});
    TupleAutomaton d = diagonal(w);
    auto rel = enumerate_relation(d, 4);
    REQUIRE(rel.size() == 1);
    CHECK(*rel.begin() == WordTuple{{0, 1, 1}, {0, 1, 1}});

    CHECK(is_empty(diagonal(empty_automaton({"1"}))));

    // Projecting the diagonal onto the first half restores the language.
    auto back = project_onto(d, {"1"});
    CHECK(enumerate_relation(back, 4) == enumerate_relation(w, 4));
}

TEST_CASE("loose product pairs letters") {
    TupleAutomaton ab = singleton({{0, 1}}, {"1"});
    TupleAutomaton cd = singleton({{1, 0}}, {"2"});
    auto rel = enumerate_relation(loose_product(ab, cd), 3);
    REQUIRE(rel.size() == 1);
    CHECK(*rel.begin() == WordTuple{{0, 1}, {1, 0}});

    // Length mismatch gives the empty relation.
    TupleAutomaton c = singleton({{1}}, {"2"});
    CHECK(is_empty(loose_product(ab, c)));
}

TEST_CASE("concatenation via a switch set") {
    TupleAutomaton a = singleton({{0}}, {"1"});
    TupleAutomaton b = singleton({{1}}, {"1"});
    // No switch: empty language.
    CHECK(is_empty(concat_via(a, {}, b)));
    // Switch from a's final region into b's initial on letter a.
    std::vector<SwitchTr> sw{{1, {0}, 0}};
    auto rel = enumerate_relation(concat_via(a, sw, b), 5);
    REQUIRE(rel.size() == 1);
    CHECK(*rel.begin() == WordTuple{{0, 0, 1}});
}

TEST_CASE("accepts and shortest witness") {
    TupleAutomaton eq = equality_pairs();
    CHECK(accepts(eq, {{0, 1}, {0, 1}}));
    CHECK(!accepts(eq, {{0, 1}, {1, 0}}));
    auto w = shortest_witness(eq);
    REQUIRE(w.has_value());
    CHECK(*w == WordTuple{{}, {}});
    CHECK(!shortest_witness(empty_automaton({"1"})).has_value());
    CHECK(is_empty(empty_automaton({"1"})));
}

TEST_CASE("upturn specializations") {
    TupleAutomaton u = universe_star(kAB);
    TupleAutomaton a = singleton({{0, 1}}, {"x"});

    // Identity upturn leaves the language unchanged.
    auto same = upturn(a, {"x"}, {{"x", "x"}}, u);
    CHECK(enumerate_relation(same, 4) == enumerate_relation(a, 4));

    // Cylindrification: pairs whose x component is in L, y arbitrary.
    auto cyl = upturn(a, {"x", "y"}, {{"x", "x"}}, u);
    for (const auto& t : enumerate_relation(cyl, 3)) CHECK(t[0] == Word{0, 1});
    CHECK(enumerate_relation(cyl, 3).size() == 1 + 2 + 4 + 8); // all y with |y| <= 3

    // Projecting the equality automaton out of one component gives its domain.
    TupleAutomaton eq = equality_pairs();
    auto dom = project_out(rename_comps(eq, {"x", "y"}), {"y"});
    CHECK(enumerate_relation(dom, 2) == enumerate_relation(universe_star(kAB, "x"), 2));
}

TEST_CASE("pullback merges repeated positions") {
    // Ternary relation {(a,b,a), (a,b,b)} pulled back along r(y,x,y).
    TupleAutomaton r3 = union_same(singleton({{0}, {1}, {0}}, {"1", "2", "3"}),
                                   singleton({{0}, {1}, {1}}, {"1", "2", "3"}));
    TupleAutomaton u = universe_star(kAB);
    auto atom = pullback(r3, {"x", "y"}, {"y", "x", "y"}, u);
    auto rel = enumerate_relation(atom, 3);
    // Only (a,b,a) satisfies positions 1 and 3 equal; result (x,y) = (b,a).
    REQUIRE(rel.size() == 1);
    CHECK(*rel.begin() == WordTuple{{1}, {0}});
}

TEST_CASE("hole-free filter and canonical projections") {
    TupleAutomaton eq = equality_pairs();
    auto p = project_onto(rename_comps(eq, {"x", "y"}), {"x"});
    for (const auto& t : enumerate_relation(p, 3)) CHECK(t.size() == 1);
    // No accepted word of a canonical automaton contains a hole: deconvolve
    // would throw inside enumerate_relation if one did.
    for (int it = 0; it < 50; ++it) {
        TupleAutomaton a = random_automaton(2);
        auto rel = enumerate_relation(project_onto(a, {a.comps[0]}), 4);
        (void)rel;
    }
}

// Lemma 2.1: the upturn of the automaton matches the upturn of the relation.
TEST_CASE("upturn law on randomized automata") {
    const size_t kLen = 5;
    std::uniform_int_distribution<size_t> ar(1, 3);
    std::uniform_int_distribution<int> coin(0, 2);
    TupleAutomaton u = universe_star(kAB);

    // Enumerate all words over {a,b} up to kLen for the free components.
    std::vector<Word> words;
    for (size_t n = 0; n <= kLen; ++n) {
        std::vector<Word> cur{Word{}};
        for (size_t i = 0; i < n; ++i) {
            std::vector<Word> nxt;
            for (const auto& w : cur)
                for (Sym s : kAB) {
                    Word e = w;
                    e.push_back(s);
                    nxt.push_back(e);
                }
            cur = nxt;
        }
        if (n == 0) words.push_back(Word{});
        else words.insert(words.end(), cur.begin(), cur.end());
    }

    int cases = 0;
    while (cases < 100) {
        size_t src_ar = ar(rng);
        size_t res_ar = ar(rng);
        TupleAutomaton a = random_automaton(src_ar);
        // Random partial map sigma: result comp -> source comp.
        std::vector<std::string> rcomps;
        std::map<std::string, std::string> sigma;
        for (size_t i = 0; i < res_ar; ++i) {
            rcomps.push_back("r" + std::to_string(i));
            int c = coin(rng);
            if (c < 2) sigma[rcomps.back()] = a.comps[static_cast<size_t>(rng() % src_ar)];
        }
        ++cases;

        TupleAutomaton up = upturn(a, rcomps, sigma, u);
        auto got = enumerate_relation(up, kLen);

        // Reference: sigma^{-1} of the enumerated source relation, restricted
        // to component length <= kLen.
        auto src = enumerate_relation(a, kLen);
        std::set<WordTuple> want;
        std::function<void(WordTuple&, size_t, const WordTuple&)> fill =
            [&](WordTuple& t, size_t i, const WordTuple& s) {
                if (i == res_ar) {
                    want.insert(t);
                    return;
                }
                auto it = sigma.find(rcomps[i]);
                if (it != sigma.end()) {
                    size_t sc = 0;
                    while (a.comps[sc] != it->second) ++sc;
                    t[i] = s[sc];
                    fill(t, i + 1, s);
                } else {
                    for (const auto& w : words) {
                        t[i] = w;
                        fill(t, i + 1, s);
                    }
                }
            };
        for (const auto& s : src) {
            WordTuple t(res_ar);
            fill(t, 0, s);
        }
        // Both sides bounded by convolution length kLen: drop tuples whose
        // max component exceeds it (the reference can't produce them).
        std::set<WordTuple> got_b;
        for (const auto& t : got) {
            size_t mx = 0;
            for (const auto& w : t) mx = std::max(mx, w.size());
            if (mx <= kLen) got_b.insert(t);
        }
        CHECK(got_b == want);
        if (got_b != want) break;
    }
}

TEST_CASE("determinize preserves the language") {
    for (int it = 0; it < 30; ++it) {
        TupleAutomaton a = random_automaton(2);
        CHECK(enumerate_relation(determinize(a), 4) == enumerate_relation(a, 4));
    }
}
