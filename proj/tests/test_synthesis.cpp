#include <doctest.h>

#include <algorithm>

#include "decsynth/error.hpp"
#include "decsynth/oracle.hpp"
#include "decsynth/synthesis.hpp"
#include "support.hpp"

using namespace decsynth;
using testsupport::load_fixture;

namespace {

Automaton plant_with_requirements(const ControlProblem& cp)
{
    auto names = cp.plant_names();
    return compose_plant_with_requirements(compose_all(cp.plants()), cp.requirements(), names);
}

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidModel;
}

} // namespace

TEST_CASE("Fig. 5 CP1 supervisor is the initial state only")
{
    auto r = sup_cn(load_fixture("fig5_cp1.dcp"));
    CHECK(r.supervisor.state_count() == 1);
    CHECK(r.supervisor.state_name(r.supervisor.initial()) == "(q1,q3)");
    CHECK(r.supervisor.transition_count() == 0);
    CHECK(r.uncontrolled_size == 4);
    CHECK(r.closed_loop_size == 4);
    CHECK(r.controlled_size == 1);
    CHECK(r.removed_transitions ==
          std::vector<RemovedTransition>{{"(q1,q3)", "a"}, {"(q1,q3)", "c"}});
    CHECK(r.pruned());
}

TEST_CASE("Fig. 5 CP2 needs no pruning")
{
    auto cp = load_fixture("fig5_cp2.dcp");
    auto r = sup_cn(cp);
    CHECK_FALSE(r.pruned());
    CHECK(language_equal(r.supervisor, plant_with_requirements(cp)));
}

TEST_CASE("Fig. 6 supervisor disables i")
{
    auto cp = load_fixture("fig6.dcp");
    auto r = sup_cn(cp);
    CHECK(r.uncontrolled_size == 64);
    CHECK(r.controlled_size == 2);
    REQUIRE_FALSE(r.removed_transitions.empty());
    for (const auto& t : r.removed_transitions)
        CHECK(t.event == "i");
}

TEST_CASE("no requirements and a trim plant: nothing to prune")
{
    auto cp = load_fixture("fig4.dcp");
    ControlProblem bare(cp.plants(), {});
    auto r = sup_cn(bare);
    CHECK_FALSE(r.pruned());
    CHECK(language_equal(r.supervisor, compose_all(bare.plants())));
}

TEST_CASE("empty supervisor")
{
    AutomatonBuilder b("P");
    b.add_state("x", true);
    b.add_state("dead");
    b.add_event("u", false);
    b.add_transition("x", "u", "dead");
    b.set_initial("x");
    ControlProblem cp({std::move(b).build()}, {});
    CHECK(code_of([&] { sup_cn(cp); }) == ErrorCode::EmptySupervisor);
}

TEST_CASE("requirement blocking an uncontrollable event forces pruning")
{
    AutomatonBuilder b("P");
    b.add_state("x", true);
    b.add_state("y", true);
    b.add_state("z", true);
    b.add_event("go", true);
    b.add_event("u", false);
    b.add_transition("x", "go", "y");
    b.add_transition("y", "u", "z");
    b.add_transition("z", "go", "x");
    b.set_initial("x");
    ControlProblem cp({std::move(b).build()}, {{"R", {"u", false}, Condition({{Literal::falsity()}})}});
    auto r = sup_cn(cp);
    CHECK(r.controlled_size == 1);
    CHECK(r.removed_transitions == std::vector<RemovedTransition>{{"x", "go"}});
}

TEST_CASE("size bound")
{
    auto cp = load_fixture("fig6.dcp");
    SynthesisOptions o;
    o.bound = 10;
    CHECK(code_of([&] { sup_cn(cp, o); }) == ErrorCode::SizeBoundExceeded);
}

TEST_CASE("supervisor invariants on random instances")
{
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        CAPTURE(seed);
        auto cp = generate_small_instance(seed, 10);
        std::optional<SynthesisResult> maybe;
        try {
            maybe = sup_cn(cp);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::EmptySupervisor);
            continue;
        }
        const auto& r = *maybe;
        auto plant = compose_all(cp.plants());
        CHECK(is_nonblocking(r.supervisor));
        CHECK(is_controllable(r.supervisor, plant));
        CHECK(r.controlled_size <= r.closed_loop_size);
        CHECK(r.controlled_size == r.supervisor.state_count());
        for (const auto& t : r.removed_transitions)
            CHECK(plant.event(*plant.find_event(t.event)).controllable);

        auto again = sup_cn(cp);
        CHECK(again.iterations == r.iterations);
        CHECK(again.removed_transitions == r.removed_transitions);
        CHECK(again.supervisor == r.supervisor);
    }
}

TEST_CASE("modular synthesis")
{
    SUBCASE("single requirement equals monolithic")
    {
        auto cp = load_fixture("fig2.dcp");
        auto m = sup_cn_modular(cp);
        REQUIRE(m.size() == 1);
        CHECK(m[0].label == "R1");
        CHECK(language_equal(m[0].supervisor, sup_cn(cp).supervisor));
    }
    SUBCASE("CNMS: each modular supervisor is P || R_j")
    {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto cp = generate_cnms_instance(seed, 3, 3);
            auto m = sup_cn_modular(cp);
            REQUIRE(m.size() == cp.requirements().size());
            for (std::size_t j = 0; j < m.size(); ++j) {
                ControlProblem one(cp.plants(), {cp.requirements()[j]});
                CHECK(language_equal(m[j].supervisor, plant_with_requirements(one)));
            }
        }
    }
}

TEST_CASE("plan verdicts")
{
    CHECK(plan_reduction(load_fixture("distribution_station.dcp")).verdict == Verdict::SkipByCNMS);
    CHECK(plan_reduction(load_fixture("fig3.dcp")).verdict == Verdict::SkipByCNMS);
    auto fig4 = plan_reduction(load_fixture("fig4.dcp"));
    CHECK(fig4.verdict == Verdict::SkipByAcyclic);
    CHECK(fig4.partial_problems.empty());
    CHECK(fig4.residual == VertexSet{0, 1, 2, 3, 4});

    auto fig6 = plan_reduction(load_fixture("fig6.dcp"));
    CHECK(fig6.verdict == Verdict::Sectionalize);
    REQUIRE(fig6.partial_problems.size() == 1);
    CHECK(fig6.partial_problems[0].plant_count() == 6);
    CHECK(fig6.residual.empty());

    auto festo = plan_reduction(load_fixture("festo_shape.dcp"));
    CHECK(festo.partial_problems.size() == 5);
    CHECK(std::string(to_string(festo.verdict)) == "Sectionalize");

    auto shared = ControlProblem({load_fixture("fig2.dcp").plant(0)},
                                 {{"R", {"b", true}, Condition({{Literal::falsity()}})}});
    CHECK(code_of([&] { plan_reduction(shared); }) == ErrorCode::NotApplicable);
}

TEST_CASE("plan execution")
{
    auto skip = load_fixture("fig4.dcp");
    CHECK(execute_plan(skip, plan_reduction(skip)).empty());

    auto festo = load_fixture("festo_shape.dcp");
    auto plan = plan_reduction(festo);
    SynthesisOptions seq;
    seq.parallel = false;
    auto a = execute_plan(festo, plan);
    auto b = execute_plan(festo, plan, seq);
    REQUIRE(a.size() == 5);
    REQUIRE(b.size() == 5);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].label == "S" + std::to_string(i + 1));
        CHECK(a[i].supervisor == b[i].supervisor);
        CHECK(a[i].removed_transitions == b[i].removed_transitions);
    }
}

TEST_CASE("sectionalized supervisors match monolithic synthesis on fixtures")
{
    for (const char* name : {"fig6.dcp", "cycle_in_context.dcp", "fig5_cp1.dcp", "festo_shape.dcp"}) {
        CAPTURE(name);
        auto cp = load_fixture(name);
        auto plan = plan_reduction(cp);
        auto results = execute_plan(cp, plan);
        std::vector<Automaton> sups;
        for (const auto& r : results)
            sups.push_back(r.supervisor);
        CHECK(language_equal(closed_loop(cp, sups), sup_cn(cp).supervisor));
    }
}
