#include <doctest.h>

#include <functional>
#include <map>
#include <set>

#include "decsynth/error.hpp"
#include "support.hpp"

using namespace decsynth;
using testsupport::EventSpec;

namespace {

Automaton fig2_plant()
{
    AutomatonBuilder b("P1");
    b.add_state("q1", true);
    b.add_state("q2");
    b.add_state("q3", true);
    b.add_event("a", true);
    b.add_event("b", true);
    b.add_transition("q1", "a", "q2");
    b.add_transition("q2", "b", "q1");
    b.add_transition("q2", "a", "q3");
    b.add_transition("q3", "b", "q2");
    b.set_initial("q1");
    return std::move(b).build();
}

// Simulates a string on g1 || g2 directly from the three cases of the
// synchronous product definition. Returns the pair of local states or
// nothing when the string is not generated.
std::optional<std::pair<std::string, std::string>> simulate_pair(const Automaton& g1,
                                                                 const Automaton& g2,
                                                                 const std::vector<std::string>& s)
{
    std::string x = g1.state_name(g1.initial()), y = g2.state_name(g2.initial());
    for (const auto& ev : s) {
        bool in1 = g1.has_event(ev), in2 = g2.has_event(ev);
        if (in1 && in2) {
            auto nx = g1.step(x, ev), ny = g2.step(y, ev);
            if (!nx || !ny)
                return std::nullopt;
            x = *nx;
            y = *ny;
        } else if (in1) {
            auto nx = g1.step(x, ev);
            if (!nx)
                return std::nullopt;
            x = *nx;
        } else if (in2) {
            auto ny = g2.step(y, ev);
            if (!ny)
                return std::nullopt;
            y = *ny;
        } else {
            return std::nullopt;
        }
    }
    return std::make_pair(x, y);
}

std::optional<std::string> run(const Automaton& a, const std::vector<std::string>& s)
{
    std::string q = a.state_name(a.initial());
    for (const auto& ev : s) {
        if (!a.has_event(ev))
            return std::nullopt;
        auto n = a.step(q, ev);
        if (!n)
            return std::nullopt;
        q = *n;
    }
    return q;
}

void for_each_string(const std::vector<std::string>& events, std::size_t max_len,
                     const std::function<void(const std::vector<std::string>&)>& f)
{
    std::vector<std::string> cur;
    std::function<void()> rec = [&] {
        f(cur);
        if (cur.size() == max_len)
            return;
        for (const auto& e : events) {
            cur.push_back(e);
            rec();
            cur.pop_back();
        }
    };
    rec();
}

std::vector<EventSpec> random_alphabet(std::mt19937_64& rng, const std::vector<EventSpec>& pool)
{
    std::vector<EventSpec> out;
    std::bernoulli_distribution take(0.6);
    for (const auto& e : pool)
        if (take(rng))
            out.push_back(e);
    if (out.empty())
        out.push_back(pool[0]);
    return out;
}

} // namespace

TEST_CASE("step follows transitions and reports absence")
{
    auto p = fig2_plant();
    CHECK(p.step("q1", "a") == std::optional<std::string>("q2"));
    CHECK(p.step("q2", "b") == std::optional<std::string>("q1"));
    CHECK_FALSE(p.step("q1", "b").has_value());
    CHECK_THROWS_AS(p.step("nope", "a"), Error);
    CHECK_THROWS_AS(p.step("q1", "zz"), Error);
    CHECK(p.transition_count() == 4);
    CHECK(p.marked_states() == std::vector<StateIndex>{0, 2});
}

TEST_CASE("builder rejects malformed automata")
{
    SUBCASE("nondeterminism")
    {
        AutomatonBuilder b("G");
        b.add_state("x");
        b.add_state("y");
        b.add_event("a", true);
        b.add_transition("x", "a", "x");
        CHECK_THROWS_AS(b.add_transition("x", "a", "y"), Error);
    }
    SUBCASE("duplicate state")
    {
        AutomatonBuilder b("G");
        b.add_state("x");
        CHECK_THROWS_AS(b.add_state("x"), Error);
    }
    SUBCASE("empty alphabet")
    {
        AutomatonBuilder b("G");
        b.add_state("x");
        b.set_initial("x");
        CHECK_THROWS_AS(std::move(b).build(), Error);
    }
    SUBCASE("no states")
    {
        AutomatonBuilder b("G");
        CHECK_THROWS_AS(std::move(b).build(), Error);
    }
}

TEST_CASE("composition agrees with the case-wise product definition on all short strings")
{
    std::mt19937_64 rng(20240601);
    std::vector<EventSpec> pool{{"a", true}, {"b", false}, {"c", true}, {"d", false}};
    std::vector<std::string> names{"a", "b", "c", "d"};
    std::uniform_int_distribution<std::size_t> size(1, 4);
    for (int round = 0; round < 60; ++round) {
        auto g1 = testsupport::random_automaton(rng, "G1", size(rng), random_alphabet(rng, pool), 0.5);
        auto g2 = testsupport::random_automaton(rng, "G2", size(rng), random_alphabet(rng, pool), 0.5);
        auto g = compose(g1, g2);
        for_each_string(names, 5, [&](const std::vector<std::string>& s) {
            auto expect = simulate_pair(g1, g2, s);
            auto got = run(g, s);
            REQUIRE(expect.has_value() == got.has_value());
            if (!expect)
                return;
            auto parts = split_tuple(*got);
            REQUIRE(parts.has_value());
            CHECK((*parts)[0] == expect->first);
            CHECK((*parts)[1] == expect->second);
            bool marked = g1.is_marked(*g1.find_state(expect->first)) &&
                          g2.is_marked(*g2.find_state(expect->second));
            CHECK(g.is_marked(*g.find_state(*got)) == marked);
        });
        // only reachable states are built
        auto mask = reachable_mask(g);
        for (bool m : mask)
            CHECK(m);
    }
}

TEST_CASE("composition is commutative and associative up to language")
{
    std::mt19937_64 rng(7);
    std::vector<EventSpec> pool{{"a", true}, {"b", false}, {"c", true}};
    for (int round = 0; round < 40; ++round) {
        auto g1 = testsupport::random_automaton(rng, "A", 3, random_alphabet(rng, pool), 0.6);
        auto g2 = testsupport::random_automaton(rng, "B", 3, random_alphabet(rng, pool), 0.6);
        auto g3 = testsupport::random_automaton(rng, "C", 2, random_alphabet(rng, pool), 0.6);
        CHECK(language_equal(compose(g1, g2), compose(g2, g1)));
        CHECK(language_equal(compose(compose(g1, g2), g3), compose(g1, compose(g2, g3))));
        std::vector<Automaton> all{g1, g2, g3};
        CHECK(language_equal(compose_all(all), compose(compose(g1, g2), g3)));
    }
}

TEST_CASE("compose_all flattens names and returns a single input unchanged")
{
    auto p = fig2_plant();
    std::vector<Automaton> one{p};
    CHECK(compose_all(one) == p);

    auto q = fig2_plant();
    AutomatonBuilder b("P2");
    b.add_state("r1", true);
    b.add_event("c", false);
    b.add_transition("r1", "c", "r1");
    b.set_initial("r1");
    std::vector<Automaton> three{p, std::move(b).build(), q};
    auto g = compose_all(three);
    CHECK(g.has_state("(q1,r1,q1)"));
    CHECK(g.step("(q1,r1,q1)", "a") == std::optional<std::string>("(q2,r1,q2)"));
    CHECK(g.step("(q1,r1,q1)", "c") == std::optional<std::string>("(q1,r1,q1)"));
    CHECK(g.state_count() == 3);
}

TEST_CASE("compose_all honours the size bound")
{
    std::vector<Automaton> ps;
    for (int i = 0; i < 4; ++i) {
        AutomatonBuilder b("P" + std::to_string(i));
        b.add_state("x", true);
        b.add_state("y");
        auto e = b.add_event("e" + std::to_string(i), true);
        b.add_transition(0, e, 1);
        b.add_transition(1, e, 0);
        b.set_initial(0);
        ps.push_back(std::move(b).build());
    }
    CHECK(compose_all(ps).state_count() == 16);
    CHECK_THROWS_AS(compose_all(ps, 15), Error);
    try {
        compose_all(ps, 15);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SizeBoundExceeded);
    }
}

TEST_CASE("shared events with different controllability are rejected")
{
    AutomatonBuilder b1("G1"), b2("G2");
    b1.add_state("x", true);
    b1.add_event("a", true);
    b1.set_initial("x");
    b2.add_state("y", true);
    b2.add_event("a", false);
    b2.set_initial("y");
    try {
        compose(std::move(b1).build(), std::move(b2).build());
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ControllabilityConflict);
    }
}

TEST_CASE("reachability and coreachability")
{
    AutomatonBuilder b("G");
    b.add_state("s0");
    b.add_state("s1", true);
    b.add_state("s2");
    b.add_state("s3"); // unreachable
    b.add_event("a", true);
    b.add_transition("s0", "a", "s1");
    b.add_transition("s3", "a", "s1");
    b.add_event("b", false);
    b.add_transition("s1", "b", "s2");
    b.set_initial("s0");
    auto g = std::move(b).build();
    CHECK(reachable_states(g) == std::vector<std::string>{"s0", "s1", "s2"});
    CHECK(coreachable_states(g) == std::vector<std::string>{"s0", "s1", "s3"});
    CHECK_FALSE(is_nonblocking(g));
    CHECK_FALSE(is_trim(g));
    CHECK(reachable_part(g).state_count() == 3);
    CHECK(language_equal(reachable_part(g), g));
}

TEST_CASE("reachability is monotone in the transition relation")
{
    std::mt19937_64 rng(99);
    std::vector<EventSpec> ev{{"a", true}, {"b", false}};
    for (int round = 0; round < 100; ++round) {
        auto g = testsupport::random_automaton(rng, "G", 5, ev, 0.3);
        AutomatonBuilder b("G");
        for (StateIndex s = 0; s < g.state_count(); ++s)
            b.add_state(g.state_name(s), g.is_marked(s));
        for (const auto& e : g.alphabet())
            b.add_event(e);
        for (StateIndex s = 0; s < g.state_count(); ++s)
            for (const auto& e : g.out(s))
                b.add_transition(s, e.event, e.target);
        b.add_event("extra", true);
        std::uniform_int_distribution<StateIndex> pick(0, 4);
        b.add_transition(pick(rng), 2, pick(rng));
        b.set_initial(g.initial());
        auto h = std::move(b).build();
        auto r1 = reachable_mask(g), r2 = reachable_mask(h);
        auto c1 = coreachable_mask(g), c2 = coreachable_mask(h);
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK((!r1[i] || r2[i]));
            CHECK((!c1[i] || c2[i]));
        }
    }
}

TEST_CASE("strong connectivity")
{
    CHECK(is_strongly_connected(fig2_plant()));
    AutomatonBuilder b("G");
    b.add_state("x", true);
    b.add_state("y");
    b.add_event("a", true);
    b.add_transition("x", "a", "y");
    b.set_initial("x");
    CHECK_FALSE(is_strongly_connected(std::move(b).build()));

    AutomatonBuilder one("H");
    one.add_state("x", true);
    one.add_event("a", true);
    one.set_initial("x");
    CHECK(is_strongly_connected(std::move(one).build()));
}

TEST_CASE("controllability of a sublanguage")
{
    auto g = fig2_plant();
    CHECK(is_controllable(g, g));

    // disabling the controllable b at q2 keeps controllability
    AutomatonBuilder kb("K");
    kb.add_state("q1", true);
    kb.add_state("q2");
    kb.add_state("q3", true);
    kb.add_event("a", true);
    kb.add_event("b", true);
    kb.add_transition("q1", "a", "q2");
    kb.add_transition("q2", "a", "q3");
    kb.add_transition("q3", "b", "q2");
    kb.set_initial("q1");
    CHECK(is_controllable(std::move(kb).build(), g));

    // same with an uncontrollable event
    AutomatonBuilder gb("G"), ub("K");
    for (auto* b : {&gb, &ub}) {
        b->add_state("x", true);
        b->add_state("y", true);
        b->add_event("u", false);
        b->set_initial("x");
    }
    gb.add_transition("x", "u", "y");
    CHECK_FALSE(is_controllable(std::move(ub).build(), std::move(gb).build()));

    AutomatonBuilder mb("M");
    mb.add_state("x", true);
    mb.add_event("zz", true);
    mb.set_initial("x");
    CHECK_THROWS_AS(is_controllable(std::move(mb).build(), g), Error);
}

TEST_CASE("single-state all-marked automaton over a private event is a unit for composition")
{
    std::mt19937_64 rng(5);
    std::vector<EventSpec> ev{{"a", true}, {"b", false}};
    AutomatonBuilder b("I");
    b.add_state("i", true);
    b.add_event("unused", true);
    b.set_initial("i");
    auto unit = std::move(b).build();
    for (int round = 0; round < 30; ++round) {
        auto g = testsupport::random_automaton(rng, "G", 4, ev, 0.5);
        CHECK(language_equal(compose(g, unit), g));
    }
}

TEST_CASE("tuple names round trip through split_tuple")
{
    std::vector<std::string> parts{"a", "(b,c)", "d"};
    auto name = make_tuple_name(parts);
    CHECK(name == "(a,(b,c),d)");
    auto back = split_tuple(name);
    REQUIRE(back.has_value());
    CHECK(*back == parts);
    CHECK_FALSE(split_tuple("plain").has_value());
}
