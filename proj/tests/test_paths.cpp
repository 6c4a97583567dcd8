#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "ctinfo/paths.hpp"
#include "ctinfo/rng.hpp"

using namespace ctinfo;
using paths::EventPath;
using paths::InfoTrace;
using paths::IntensityTrace;
using paths::TimeWindow;

TEST_CASE("time window invariants") {
    CHECK_THROWS_AS(TimeWindow(1.0, 0.0, 2.0), std::invalid_argument);   // tau > t0
    CHECK_THROWS_AS(TimeWindow(0.0, 1.0, 1.0), std::invalid_argument);   // t0 == t_end
    const TimeWindow w(-1.0, 0.0, 10.0);
    CHECK(w.horizon() == doctest::Approx(10.0));
}

TEST_CASE("event path validation and queries") {
    const TimeWindow w(0.0, 0.0, 10.0);
    CHECK_THROWS_AS(EventPath(w, {2.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(EventPath(w, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(EventPath(w, {11.0}), std::invalid_argument);
    const EventPath p(w, {1.0, 3.0});
    CHECK(p.count_in(0.0, 3.0) == 2);
    CHECK(p.count_in(1.0, 2.0) == 0);

    CHECK(paths::time_since_last_event(p, 3.5) == doctest::Approx(0.5));
    CHECK(paths::time_since_last_event(p, 3.0) == doctest::Approx(0.0));  // event at query time
    CHECK(paths::time_since_last_event(EventPath(w, {}), 2.0) == paths::infinite_duration);
    CHECK_THROWS_AS(paths::time_since_last_event(p, 10.5), std::invalid_argument);
}

TEST_CASE("event times strictly increasing for random constructions") {
    rng::Stream s(99);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> ev;
        double t = 0.0;
        const int n = static_cast<int>(s.uniform() * 20);
        for (int i = 0; i < n; ++i) {
            t += s.exponential(1.0);
            ev.push_back(t);
        }
        const EventPath p(TimeWindow(0.0, 0.0, t + 1.0), ev);
        for (std::size_t i = 1; i < p.events.size(); ++i) CHECK(p.events[i] > p.events[i - 1]);
    }
}

TEST_CASE("state path left limits") {
    paths::StatePath sp(TimeWindow(0.0, 0.0, 10.0), 0, {{1.0, 1}, {2.0, 0}});
    CHECK(sp.state_before(0.5) == 0);
    CHECK(sp.state_before(1.0) == 0);  // pre-transition state at the transition time
    CHECK(sp.state_before(1.5) == 1);
    CHECK(sp.state_before(2.5) == 0);
    CHECK_THROWS_AS(paths::StatePath(TimeWindow(0, 0, 1), 0, {{0.5, 0}}), std::invalid_argument);
}

TEST_CASE("intensity trace evaluation and integration") {
    IntensityTrace tr;
    tr.append(0.0, 2.0, 2.0);
    tr.append(1.0, 2.0, 0.0);  // drop at t = 1
    tr.append(2.0, 0.0, 1.0);  // jump up at t = 2
    tr.append(4.0, 3.0, 3.0);  // linear 1 -> 3 on [2, 4]
    CHECK(tr.eval_left(1.0) == doctest::Approx(2.0));
    CHECK(tr.eval_right(1.0) == doctest::Approx(0.0));
    CHECK(tr.eval_left(3.0) == doctest::Approx(2.0));
    CHECK(tr.integral(0.0, 4.0) == doctest::Approx(2.0 + 0.0 + 4.0));
    CHECK(tr.integral(0.5, 1.5) == doctest::Approx(1.0));
    CHECK(tr.integral(2.5, 3.5) == doctest::Approx(2.0));
    CHECK_THROWS_AS(tr.integral(-1.0, 2.0), std::invalid_argument);
}

TEST_CASE("constant trace") {
    const auto tr = IntensityTrace::constant(0.0, 5.0, 0.7);
    CHECK(tr.eval_left(2.5) == doctest::Approx(0.7));
    CHECK(tr.integral(1.0, 4.0) == doctest::Approx(2.1));
}

namespace {
InfoTrace simple_trace() {
    InfoTrace tr;
    tr.times = {0.0, 1.0, 1.0, 2.0};
    tr.rate_m = {0.0, 0.0, 0.0, 0.0};
    tr.rate_t = {0.5, 0.5, 0.5, 0.5};
    tr.jumps = {{1.0, std::log(2.0), 0.0}};
    tr.cumulative_m = {0.0, 0.0, std::log(2.0), std::log(2.0)};
    tr.cumulative_t = {0.0, 0.5, 0.5, 1.0};
    return tr;
}
}  // namespace

TEST_CASE("info trace consistency check") {
    CHECK(paths::verify_trace_consistency(simple_trace(), 1e-9));

    auto all_zero = simple_trace();
    all_zero.jumps.clear();
    all_zero.rate_t = {0, 0, 0, 0};
    all_zero.cumulative_m = {0, 0, 0, 0};
    all_zero.cumulative_t = {0, 0, 0, 0};
    CHECK(paths::verify_trace_consistency(all_zero, 1e-12));

    auto bad = simple_trace();
    bad.cumulative_m.back() += 10.0 * 1e-6;  // perturbed by 10x the tolerance
    CHECK_FALSE(paths::verify_trace_consistency(bad, 1e-6));
}

TEST_CASE("csv round trip for events") {
    const std::string file = std::filesystem::temp_directory_path() / "ctinfo_ev_test.csv";
    const TimeWindow w(0.0, 0.0, 10.0);
    const EventPath p(w, {0.5, 2.25, 9.75});
    paths::write_events_csv(file, p, "test preamble");
    const auto q = paths::read_events_csv(file, w);
    REQUIRE(q.events.size() == 3);
    CHECK(q.events[1] == doctest::Approx(2.25));
    std::remove(file.c_str());
}
