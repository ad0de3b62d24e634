#include "doctest.h"
#include "fixtures.hpp"
#include "pvk/model.hpp"

#include <random>

using namespace pvk;
using namespace pvk::fixtures;

TEST_CASE("validate_model accepts the figure-1 model and flags bad edges") {
    Pvass m = fig1_left();
    CHECK(validate_model(m).empty());
    CHECK(m.states.size() == 4);
    CHECK(m.edges.size() == 6);

    SUBCASE("zerotest above the dimension") {
        Pvass bad = m;
        bad.edges[0].zerotest = 4;
        CHECK(validate_model(bad).size() == 1);
    }
    SUBCASE("unknown state id") {
        Pvass bad = m;
        bad.edges[2].to = 17;
        CHECK(validate_model(bad).size() == 1);
    }
}

TEST_CASE("step semantics") {
    Pvass m = fig1_left();

    SUBCASE("failed zero test gives no successor") {
        Configuration c{m.state_id("q_t"), {1, 0, 1}};
        CHECK_FALSE(step(m, c, 5).has_value()); // x == 0 edge
    }
    SUBCASE("self-loop increments x") {
        Configuration c{m.state_id("q_1"), {2, 0, 0}};
        auto next = step(m, c, 1);
        REQUIRE(next.has_value());
        CHECK(next->state == m.state_id("q_1"));
        CHECK(next->counters == Vec{3, 0, 0});
    }
    SUBCASE("identity update moves the state only") {
        Configuration c{m.state_id("q_s"), {0, 2, 1}};
        auto next = step(m, c, 0);
        REQUIRE(next.has_value());
        CHECK(next->state == m.state_id("q_1"));
        CHECK(next->counters == Vec{0, 2, 1});
    }
    SUBCASE("unknown edge id is an error") {
        Configuration c{0, {0, 0, 0}};
        CHECK_THROWS_AS((void)step(m, c, 42), Error);
    }
    SUBCASE("monotone on untested coordinates") {
        auto rng = seeded_rng(1);
        std::uniform_int_distribution<long long> val(0, 3);
        for (int trial = 0; trial < 300; ++trial) {
            const Edge& e = m.edges[trial % m.edges.size()];
            Configuration c{e.from, {val(rng), val(rng), val(rng)}};
            auto next = step(m, c, e.id);
            if (!next) continue;
            Vec u(3, 0);
            for (int j = e.zerotest; j < 3; ++j) u[j] = val(rng);
            auto lifted = step(m, Configuration{c.state, vec_add(c.counters, u)}, e.id);
            REQUIRE(lifted.has_value());
            CHECK(lifted->counters == vec_add(next->counters, u));
        }
    }
}

TEST_CASE("run_from_word") {
    Pvass m = fig1_left();
    Configuration start{m.state_id("q_s"), {0, 0, 0}};

    SUBCASE("empty word") {
        Run r = run_from_word(m, start, {});
        CHECK(r.configs.size() == 1);
        CHECK(r.source() == start);
        CHECK(r.target() == start);
    }
    SUBCASE("one pass through the cycle") {
        Run r = run_from_word(m, start, {0, 1, 2, 3, 4});
        CHECK(r.target() == Configuration{m.state_id("q_t"), {0, 1, 1}});
        CHECK(validate_run(m, r));
    }
    SUBCASE("state mismatch reports the failing index") {
        try {
            run_from_word(m, start, {4});
            FAIL("expected RunError");
        } catch (const RunError& e) {
            CHECK(e.index == 0);
            CHECK(e.reason == StepFailure::StateMismatch);
        }
    }
    SUBCASE("negativity and zero-test failures are distinguished") {
        try {
            run_from_word(m, Configuration{m.state_id("q_2"), {0, 0, 0}}, {3});
            FAIL("expected RunError");
        } catch (const RunError& e) {
            CHECK(e.reason == StepFailure::Negativity);
        }
        try {
            run_from_word(m, Configuration{m.state_id("q_t"), {1, 0, 0}}, {5});
            FAIL("expected RunError");
        } catch (const RunError& e) {
            CHECK(e.reason == StepFailure::FailedZeroTest);
        }
    }
}

TEST_CASE("bounded reachability oracle") {
    Pvass m = fig1_left();
    Configuration start{m.state_id("q_s"), {0, 0, 0}};

    SUBCASE("members at q_s match the outer-loop analysis") {
        auto reach = reach_set_bounded(m, start, 2);
        std::set<Vec> at_qs;
        for (const auto& c : reach)
            if (c.state == m.state_id("q_s")) at_qs.insert(c.counters);
        std::set<Vec> expected{{0, 0, 0}};
        for (long long y = 0; y <= 2; ++y)
            for (long long z = 1; z <= 2; ++z) expected.insert({0, y, z});
        CHECK(at_qs == expected);
    }
    SUBCASE("edgeless model reaches only the start") {
        Pvass e = edgeless(2);
        Configuration c{0, {1, 1}};
        auto reach = reach_set_bounded(e, c, 2);
        CHECK(reach == std::set<Configuration>{c});
    }
    SUBCASE("a small bound disables the loop target") {
        auto reach = reach_set_bounded(m, start, 0);
        // x++ can never fire, neither can z++ land within bound
        for (const auto& c : reach) CHECK(c.counters[2] == 0);
    }
    SUBCASE("monotone in the bound and stable as a fixpoint") {
        auto r2 = reach_set_bounded(m, start, 2);
        auto r3 = reach_set_bounded(m, start, 3);
        for (const auto& c : r2) CHECK(r3.count(c));
        for (const auto& c : r2)
            for (const auto& d : reach_set_bounded(m, c, 2)) CHECK(r2.count(d));
    }
}

TEST_CASE("bounded section evaluation") {
    SUBCASE("free input, output pinned to zero") {
        Section s = make_section(incdec1(), "s", "s", {}, {0});
        BoundedRel r = section_eval_bounded(s, 2);
        BoundedRel expected(1, 0);
        for (long long x = 0; x <= 2; ++x) expected.insert({x}, {});
        CHECK(r == expected);
    }
    SUBCASE("input pinned to one, free output") {
        Section s = make_section(incdec1(), "s", "s", {1}, {});
        BoundedRel r = section_eval_bounded(s, 2);
        BoundedRel expected(0, 1);
        for (long long y = 0; y <= 2; ++y) expected.insert({}, {y});
        CHECK(r == expected);
    }
    SUBCASE("edgeless two-dimensional section forces the composition point") {
        Section s = make_section(edgeless(2), "s", "s", {}, {0});
        BoundedRel r = section_eval_bounded(s, 2);
        BoundedRel expected(2, 1);
        for (long long y = 0; y <= 2; ++y) expected.insert({0, y}, {y});
        CHECK(r == expected);
    }
    SUBCASE("bound below the fixed entries is an error") {
        Section s = make_section(incdec1(), "s", "s", {2}, {});
        CHECK_THROWS_AS((void)section_eval_bounded(s, 1), Error);
    }
    SUBCASE("VASS sections are monotone in free coordinates within bound") {
        auto rng = seeded_rng(2);
        for (int trial = 0; trial < 20; ++trial) {
            Pvass m = random_vass(rng, 2, 3, 4);
            Section s = make_section(m, m.states.front(), m.states.back(), {}, {});
            BoundedRel r = section_eval_bounded(s, 2);
            for (const auto& [x, y] : r.pairs()) {
                for (size_t j = 0; j < 2; ++j) {
                    Vec x2 = x, y2 = y;
                    ++x2[j];
                    ++y2[j];
                    if (vec_within(x2, 2) && vec_within(y2, 2)) CHECK(r.contains(x2, y2));
                }
            }
        }
    }
}

TEST_CASE("zero-test normalization") {
    SUBCASE("already-normalized model is unchanged") {
        Pvass m = fig1_left();
        REQUIRE(m.is_normalized());
        Pvass n = normalize_zero_tests(m);
        CHECK(n.states == m.states);
        CHECK(n.edges.size() == m.edges.size());
        for (size_t i = 0; i < n.edges.size(); ++i) {
            CHECK(n.edges[i].update == m.edges[i].update);
            CHECK(n.edges[i].zerotest == m.edges[i].zerotest);
        }
    }
    SUBCASE("an edge updating a tested counter is split through a fresh state") {
        Pvass m;
        m.dim = 2;
        StateId a = m.add_state("a");
        StateId b = m.add_state("b");
        m.add_edge(a, b, {-1, 0}, 1);
        Pvass n = normalize_zero_tests(m);
        REQUIRE(n.states.size() == 3);
        REQUIRE(n.edges.size() == 2);
        CHECK(n.edges[0].update == Vec{0, 0});
        CHECK(n.edges[0].zerotest == 1);
        CHECK(n.edges[1].update == Vec{-1, 0});
        CHECK(n.edges[1].zerotest == 0);
        CHECK(n.is_normalized());
    }
    SUBCASE("normalization preserves the bounded section relation") {
        Pvass m;
        m.dim = 2;
        StateId a = m.add_state("a");
        StateId b = m.add_state("b");
        m.add_edge(a, b, {1, 1}, 1);  // tests x == 0 then bumps it
        m.add_edge(b, a, {0, -1}, 0);
        Pvass n = normalize_zero_tests(m);
        REQUIRE_FALSE(m.is_normalized());
        REQUIRE(n.is_normalized());
        for (long long bound = 1; bound <= 3; ++bound) {
            Section sm = make_section(m, "a", "b", {}, {});
            Section sn = make_section(n, "a", "b", {}, {});
            CHECK(section_eval_bounded(sm, bound) == section_eval_bounded(sn, bound));
        }
    }
}

TEST_CASE("state elimination") {
    Pvass m = fig1_left();
    StateElimination elim = eliminate_states(m);
    REQUIRE(validate_model(elim.model).empty());
    CHECK(elim.model.states.size() == 1);
    // 3 data counters plus one one-hot counter per state after splitting the
    // two self-loops
    CHECK(elim.model.dim == 9);
    CHECK(elim.model.max_zerotest() == 1);

    Section orig = make_section(m, "q_s", "q_t", {0}, {0});
    Section mapped = elim.map_section(orig);
    for (long long bound = 1; bound <= 2; ++bound)
        CHECK(section_eval_bounded(orig, bound) == section_eval_bounded(mapped, bound));

    SUBCASE("sections must fix the zero-tested prefix") {
        Section free_x = make_section(m, "q_s", "q_t", {}, {});
        CHECK_THROWS_AS((void)elim.map_section(free_x), Error);
    }
    SUBCASE("normalize with both toggles yields a normalized single-state model") {
        Pvass n = normalize(m, NormalizeOptions{true, true});
        CHECK(n.states.size() == 1);
        CHECK(n.is_normalized());
    }
}
