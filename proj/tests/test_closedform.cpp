#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ctinfo/closedform.hpp"
#include "ctinfo/common.hpp"
#include "ctinfo/rng.hpp"
#include "ctinfo/simulate.hpp"

using namespace ctinfo;
using namespace ctinfo::closedform;
using paths::EventPath;
using paths::TimeWindow;

TEST_CASE("refractory closed forms") {
    const double e = std::exp(1.0);
    auto f = refractory_closed_forms(1.0, e - 1.0);
    CHECK(f.memory_rate == doctest::Approx(1.0 / e).epsilon(1e-14));
    CHECK(f.max_rate == doctest::Approx(1.0 / e).epsilon(1e-14));
    CHECK(f.argmax_delta_x == doctest::Approx(e - 1.0).epsilon(1e-14));

    CHECK(refractory_closed_forms(2.0, 0.0).memory_rate == 0.0);

    f = refractory_closed_forms(1.0, 1.0);
    CHECK(f.lambda0 == doctest::Approx(0.5));
    CHECK(f.memory_rate == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("event-driven rate density") {
    CHECK(event_driven_mdot(0.5, 0.1, 1.0, 3.0) == doctest::Approx(0.0));  // window start
    CHECK(event_driven_mdot(0.5, 0.1, 1.0, 3.5) == 0.0);                   // outside the window
    CHECK(event_driven_mdot(0.5, 1.0, 3.0, 7.0) ==
          doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));  // one window-length in
}

TEST_CASE("rate density integrates to the ergodic rate over one period") {
    const double c = 0.5, dx = 0.1, dy = 1.0;
    const std::size_t n = 200000;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = dx * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        acc += event_driven_mdot(c, dx, dy, t);
    }
    acc *= dx / static_cast<double>(n) / dy;
    const double m_ring = (c + (1.0 - c) * std::log(1.0 - c)) / dy;
    CHECK(acc == doctest::Approx(m_ring).epsilon(1e-8));
}

TEST_CASE("event-driven report fields and the c -> 1 limit") {
    simulate::EventDrivenParams p;
    p.c = 0.5;
    p.delta_x = 0.1;
    p.delta_y = 1.0;
    p.phase_dist = simulate::PhaseDist::delta_at(0.0);
    auto rep = event_driven_report(p);
    CHECK(rep.m_ring == doctest::Approx(0.15342640972).epsilon(1e-9));
    CHECK(rep.overestimate == doctest::Approx(0.5 * std::log(10.0)).epsilon(1e-12));
    CHECK(rep.xi == 0.0);
    CHECK(rep.m_st == doctest::Approx(rep.m_ring + rep.overestimate));

    p.phase_dist = simulate::PhaseDist::uniform_phase();
    rep = event_driven_report(p);
    CHECK(rep.xi == doctest::Approx(-rep.overestimate));
    CHECK(rep.m_st == doctest::Approx(rep.m_ring));

    simulate::EventDrivenParams p1;
    p1.c = 1.0;
    p1.delta_x = 0.5;
    p1.delta_y = 2.0;
    CHECK(event_driven_report(p1).m_ring == doctest::Approx(0.5));  // (1-c)ln(1-c) -> 0
}

TEST_CASE("report evaluators match the free functions") {
    simulate::EventDrivenParams p;
    p.c = 0.5;
    p.delta_x = 0.1;
    p.delta_y = 1.0;
    const auto rep = event_driven_report(p);
    for (double t : {0.0, 0.05, 0.3, 1.04, 2.71}) {
        CHECK(rep.lambda0_of_t(t) == event_driven_lambda0(p, 0.0, t));
        CHECK(rep.mdot_of_t(t) == event_driven_mdot(p.c, p.delta_x, p.delta_y, t));
    }
}

TEST_CASE("tiny c: vanishing rate") {
    simulate::EventDrivenParams p;
    p.c = 1e-9;
    p.delta_x = 0.1;
    p.delta_y = 1.0;
    CHECK(event_driven_report(p).m_ring < 1e-9);
}

TEST_CASE("xi bounds hold for random tabulated densities") {
    simulate::EventDrivenParams p;
    p.c = 0.5;
    p.delta_x = 0.1;
    p.delta_y = 1.0;
    const double overest = (p.c / p.delta_y) * std::log(p.delta_y / p.delta_x);
    rng::Stream s(123);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> dens(128);
        for (auto& d : dens) d = 0.02 + s.uniform() * s.uniform() * 4.0;
        const double xi = xi_phase_correction(p, simulate::PhaseDist::tabulated(dens));
        CHECK(xi <= 1e-9);
        CHECK(xi >= -overest - 1e-9);
    }
}

TEST_CASE("xi quadrature refinement is stable") {
    simulate::EventDrivenParams p;
    p.c = 0.5;
    p.delta_x = 0.1;
    p.delta_y = 1.0;
    std::vector<double> dens(64);
    rng::Stream s(5);
    for (auto& d : dens) d = 0.1 + s.uniform();
    const auto dist = simulate::PhaseDist::tabulated(dens);
    const double a = xi_phase_correction(p, dist, 1000);
    const double b = xi_phase_correction(p, dist, 2000);
    CHECK(std::abs(a - b) <= 1e-4 * (1.0 + std::abs(b)));
}

TEST_CASE("phase recovery inverts the construction and is periodic") {
    const double dx = 0.1, dy = 1.0, phi = 0.3;
    // minimal-gap pair: end of one window, start of the next
    const EventPath x(TimeWindow(0.0, 0.0, 10.0), {1.0 + dx + phi, 2.0 + phi});
    CHECK(phase_recovery(x, dx, dy) == doctest::Approx(phi).epsilon(1e-12));

    // input phase beyond one period wraps
    const EventPath x2(TimeWindow(0.0, 0.0, 10.0), {1.0 + dx + phi, 2.0 + phi + dy});
    CHECK(phase_recovery(x2, dx, dy) == doctest::Approx(phi).epsilon(1e-9));

    CHECK_THROWS_AS(phase_recovery(EventPath(TimeWindow(0.0, 0.0, 1.0), {0.5}), dx, dy),
                    insufficient_data);
}

TEST_CASE("phase recovery: bias is high and shrinks with the horizon") {
    simulate::EventDrivenParams p;
    p.c = 0.4;
    p.delta_x = 0.1;
    p.delta_y = 1.0;
    const double phi = 0.3;
    p.phase_dist = simulate::PhaseDist::delta_at(phi);
    double short_err = 0.0, long_err = 0.0;
    int short_ok = 0, long_ok = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const auto a = simulate::simulate_event_driven(p, TimeWindow(0.0, 0.0, 100.0), 900 + rep);
        if (a.x.events.size() >= 2) {
            const double e = phase_recovery(a.x, p.delta_x, p.delta_y) - phi;
            CHECK(e >= -1e-9);  // estimator overshoots the true phase
            short_err += e;
            ++short_ok;
        }
        const auto b =
            simulate::simulate_event_driven(p, TimeWindow(0.0, 0.0, 10000.0), 950 + rep);
        if (b.x.events.size() >= 2) {
            const double e = phase_recovery(b.x, p.delta_x, p.delta_y) - phi;
            long_err += e;
            ++long_ok;
        }
    }
    REQUIRE(short_ok > 0);
    REQUIRE(long_ok > 0);
    CHECK(long_err / long_ok < short_err / short_ok);
}

TEST_CASE("uniform-phase simulated rate matches the closed-form stationary value") {
    // the phase-conditioned ergodic rate equals m_ring for every drawn phase
    simulate::EventDrivenParams p;
    p.c = 0.5;
    p.delta_x = 0.1;
    p.delta_y = 1.0;
    p.phase_dist = simulate::PhaseDist::uniform_phase();
    const auto r = simulate::simulate_event_driven(p, TimeWindow(0.0, 0.0, 5e4), 321);
    double acc = 0.0;
    for (double e : r.x.events) {
        const double u = std::fmod(e - r.phase + 10.0 * p.delta_y, p.delta_y);
        acc += std::log(p.delta_x / (p.delta_x - p.c * u));
    }
    const double rate = acc / 5e4;
    CHECK(rate == doctest::Approx(event_driven_report(p).m_ring).epsilon(0.02));
}

TEST_CASE("coupled-model stationary rate quadrature") {
    simulate::CoupledSpikingParams p;
    CHECK(coupled_markov_rate(p) == doctest::Approx(1.2697).epsilon(0.01));
    // dependence removed: rate collapses to the base rate
    p.m = 1e-12;
    CHECK(coupled_markov_rate(p) == doctest::Approx(p.lambda_base).epsilon(1e-9));
}
