#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "cryosim/kernel.hpp"

using namespace cryosim;

TEST_CASE("domain periods are exact for the shipped frequencies") {
    CHECK(make_domain("board", 2'000'000'000).period == 500);
    CHECK(make_domain("mem", 800'000'000).period == 1250);
    CHECK(make_domain("cryo", 4'000'000'000).period == 250);
    CHECK(make_domain("super", 100'000'000'000).period == 10);
}

TEST_CASE("non-integral periods are rejected") {
    CHECK_THROWS_AS(make_domain("odd", 3), NonIntegralPeriodError);
    CHECK_THROWS_AS(make_domain("odd", 3'000'000'001), NonIntegralPeriodError);
    CHECK_THROWS_AS(make_domain("zero", 0), InvalidParamError);
}

TEST_CASE("cycles_to_ticks") {
    const ClockDomain cryo = make_domain("cryo", 4'000'000'000);
    const ClockDomain super_dom = make_domain("super", 100'000'000'000);
    CHECK(cycles_to_ticks(cryo, 8) == 2000);
    CHECK(cycles_to_ticks(super_dom, 21) == 210);
    CHECK(cycles_to_ticks(cryo, 0) == 0);
    CHECK_THROWS_AS(cycles_to_ticks(make_domain("mem", 800'000'000), ~0ULL), OverflowError);
}

TEST_CASE("next_edge rounds up to the consumer edge, inclusive") {
    const ClockDomain cryo = make_domain("cryo", 4'000'000'000);
    const ClockDomain super_dom = make_domain("super", 100'000'000'000);
    const ClockDomain mem = make_domain("mem", 800'000'000);
    CHECK(next_edge(cryo, 1001) == 1250);
    CHECK(next_edge(super_dom, 1000) == 1000);
    CHECK(next_edge(mem, 1) == 1250);
}

TEST_CASE("next_edge properties") {
    std::mt19937_64 rng(123);
    const ClockDomain doms[] = {
        make_domain("a", 2'000'000'000),
        make_domain("b", 800'000'000),
        make_domain("c", 4'000'000'000),
        make_domain("d", 100'000'000'000),
    };
    for (int i = 0; i < 2000; ++i) {
        const ClockDomain &d = doms[rng() % 4];
        const Tick t = rng() % 1'000'000'000;
        const Tick e = next_edge(d, t);
        CHECK(e >= t);
        CHECK(e % d.period == 0);
        CHECK(e - t < d.period);
        CHECK(next_edge(d, e) == e); // idempotent
    }
}

TEST_CASE("event queue fires in (tick, insertion) order") {
    EventQueue q;
    std::vector<int> fired;
    q.schedule(100, [&] { fired.push_back(100); });
    q.schedule(50, [&] { fired.push_back(50); });
    q.schedule(50, [&] { fired.push_back(51); }); // same tick, inserted later
    while (q.advance()) {
    }
    CHECK(fired == std::vector<int>{50, 51, 100});
    CHECK(q.now() == 100);
}

TEST_CASE("scheduling into the past is rejected") {
    EventQueue q;
    q.schedule(20, [] {});
    CHECK(q.advance());
    CHECK(q.now() == 20);
    CHECK_THROWS_AS(q.schedule(10, [] {}), SchedulePastError);
    CHECK_NOTHROW(q.schedule(20, [] {})); // current tick is allowed
}

TEST_CASE("dispatch order is a deterministic function of the schedule calls") {
    auto run = [] {
        EventQueue q;
        std::vector<int> order;
        std::mt19937_64 rng(7);
        int id = 0;
        for (int i = 0; i < 200; ++i) {
            const int me = id++;
            q.schedule(rng() % 1000, [&order, me] { order.push_back(me); });
        }
        while (q.advance()) {
        }
        return order;
    };
    CHECK(run() == run());
}

TEST_CASE("events may schedule follow-up events") {
    EventQueue q;
    int count = 0;
    std::function<void()> tick = [&] {
        if (++count < 5)
            q.schedule(q.now() + 10, tick);
    };
    q.schedule(0, tick);
    while (q.advance()) {
    }
    CHECK(count == 5);
    CHECK(q.now() == 40);
}
