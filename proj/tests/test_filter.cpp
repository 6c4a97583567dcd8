#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ctinfo/closedform.hpp"
#include "ctinfo/common.hpp"
#include "ctinfo/ensemble.hpp"
#include "ctinfo/filter.hpp"
#include "ctinfo/rng.hpp"
#include "ctinfo/simulate.hpp"

using namespace ctinfo;
using filter::FilterState;
using paths::TimeWindow;
using simulate::CoupledSpikingParams;

TEST_CASE("predict: constant intensity leaves lambda_bar at the constant") {
    auto st = filter::make_stationary_state(1.0, 6.0, 0.01);
    const auto [st2, lam] = filter::filter_predict(st, 0.01, 1.0, [](double) { return 0.5; });
    CHECK(lam == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::abs(st2.total_mass() - 1.0) <= 1e-9);
}

TEST_CASE("predict: pure advection moves a point mass") {
    auto st = filter::make_point_mass_state(1.0, 6.0, 0.01);
    const auto [st2, lam] = filter::filter_predict(st, 0.01, 0.0, [](double) { return 0.0; });
    (void)lam;
    // the mass moved one bin up
    const auto j_new = static_cast<std::size_t>(1.0 / 0.01) + 1;
    double mass = 0.0;
    for (std::size_t j = 0; j < st2.bins(); ++j)
        if (st2.density[j] > 0.0) {
            CHECK(j == j_new);
            mass += st2.density[j] * st2.h;
        }
    CHECK(mass == doctest::Approx(1.0));
}

TEST_CASE("predict: renewal-only filter converges to the exponential density") {
    // never reweighting by X survival: the stationary law of the time since the
    // last renewal is Exponential(lambda_y)
    const double lam_y = 2.0, h = 0.005, s_max = 4.0;
    auto st = filter::make_point_mass_state(3.9, s_max, h);
    for (int k = 0; k < 4000; ++k)
        st = filter::filter_predict(st, h, lam_y, [](double) { return 0.0; }).first;
    double worst = 0.0;
    for (std::size_t j = 0; j + 1 < st.bins(); ++j) {
        const double s = st.center(j);
        if (s > 2.5) break;  // tail bins feed mass_beyond, compare the bulk
        const double expect = lam_y * std::exp(-lam_y * s);
        worst = std::max(worst, std::abs(st.density[j] - expect) / expect);
    }
    CHECK(worst < 0.02);
}

TEST_CASE("spike update: constant intensity leaves the state unchanged") {
    auto st = filter::make_stationary_state(1.0, 6.0, 0.01);
    const auto st2 = filter::filter_update_at_x_spike(st, [](double) { return 0.7; });
    for (std::size_t j = 0; j < st.bins(); ++j)
        CHECK(st2.density[j] == doctest::Approx(st.density[j]).epsilon(1e-12));
}

TEST_CASE("spike update: support clipping under a windowed intensity") {
    auto st = filter::make_stationary_state(1.0, 6.0, 0.01);
    const auto st2 = filter::filter_update_at_x_spike(
        st, [](double s) { return (s >= 1.0 && s <= 2.0) ? 1.0 : 0.0; });
    for (std::size_t j = 0; j < st2.bins(); ++j) {
        const double s = st2.center(j);
        if (s < 1.0 || s > 2.0) CHECK(st2.density[j] == 0.0);
    }
    CHECK(std::abs(st2.total_mass() - 1.0) <= 1e-9);
}

TEST_CASE("spike update: impossible event raises") {
    auto st = filter::make_point_mass_state(0.5, 6.0, 0.01);
    CHECK_THROWS_AS(filter::filter_update_at_x_spike(st, [](double) { return 0.0; }),
                    numerical_error);
}

TEST_CASE("optimized runner agrees with the reference ops") {
    CoupledSpikingParams p;
    const TimeWindow w(-1.0, 0.0, 30.0);
    const auto real = simulate::simulate_coupled_spiking(p, w, 31);
    const auto fast = filter::marginal_intensity_trace(real.x, p, 0.01);
    const auto ref = filter::filter_run_reference(real.x, p, 0.01);
    REQUIRE(fast.times.size() == ref.times.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < fast.times.size(); ++i) {
        CHECK(fast.times[i] == ref.times[i]);
        worst = std::max(worst, std::abs(fast.right[i] - ref.right[i]));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("filter average matches the trace average") {
    CoupledSpikingParams p;
    const TimeWindow w(-1.0, 0.0, 20.0);
    const auto real = simulate::simulate_coupled_spiking(p, w, 32);
    const auto tr = filter::marginal_intensity_trace(real.x, p, 0.01);
    const double avg = filter::filter_average_intensity(real.x, p, 0.01);
    CHECK(tr.integral(0.0, 20.0) / 20.0 == doctest::Approx(avg).epsilon(1e-10));
}

TEST_CASE("probe extraction matches the trace") {
    CoupledSpikingParams p;
    const TimeWindow w(-1.0, 0.0, 10.0);
    const auto real = simulate::simulate_coupled_spiking(p, w, 33);
    const auto tr = filter::marginal_intensity_trace(real.x, p, 0.01);
    const std::vector<double> probes = {1.0, 2.5, 7.25};
    const auto vals = filter::filter_intensity_at(real.x, p, 0.01, probes);
    for (std::size_t i = 0; i < probes.size(); ++i)
        CHECK(vals[i] == doctest::Approx(tr.eval_right(probes[i])).epsilon(1e-9));
}

TEST_CASE("long-run filter average approaches the stationary rate") {
    CoupledSpikingParams p;
    const TimeWindow w(-1.0, 0.0, 2e4);
    const auto real = simulate::simulate_coupled_spiking(p, w, 34);
    const double avg = filter::filter_average_intensity(real.x, p, 0.005);
    CHECK(avg == doctest::Approx(closedform::coupled_markov_rate(p)).epsilon(0.01));
}

TEST_CASE("grid refinement: halving h moves the long-run average by < 0.2%") {
    CoupledSpikingParams p;
    const TimeWindow w(-1.0, 0.0, 2000.0);
    const auto real = simulate::simulate_coupled_spiking(p, w, 35);
    const double a = filter::filter_average_intensity(real.x, p, 0.002);
    const double b = filter::filter_average_intensity(real.x, p, 0.001);
    CHECK(std::abs(a - b) / b < 0.002);
}

TEST_CASE("ensemble mean of the filtered intensity equals the marginal rate") {
    CoupledSpikingParams p;
    const double lam0 = closedform::coupled_markov_rate(p);
    const std::size_t n_paths = 300;
    const std::vector<double> probes = {4.0, 8.0};
    const auto vals = ensemble::map(n_paths, ensemble::policy::parallel, [&](std::size_t i) {
        const auto real = simulate::simulate_coupled_spiking(
            p, TimeWindow(0.0, 0.0, 9.0), 36, simulate::YHistory::stationary(), i);
        return filter::filter_intensity_at(real.x, p, 0.005, probes);
    });
    for (std::size_t j = 0; j < probes.size(); ++j) {
        std::vector<double> v(n_paths);
        for (std::size_t i = 0; i < n_paths; ++i) v[i] = vals[i][j];
        const auto s = ensemble::summarize(v);
        CHECK(std::abs(s.mean - lam0) <= 3.5 * s.se);
    }
}

TEST_CASE("deterministic drive through a point-mass filter reproduces the closed form") {
    // known periodic drive, lambda_y = 0: the posterior stays a point mass and
    // lambda_bar follows the conditional intensity exactly
    simulate::EventDrivenParams ed;
    ed.c = 0.5;
    ed.delta_x = 0.2;
    ed.delta_y = 1.0;
    const double h = 0.001;
    auto st = filter::make_point_mass_state(0.5 * h, 2.0, h);  // drive spike at t = 0
    double t = 0.0;
    double worst = 0.0;
    const double t_x = -10.0;  // no X spike nearby
    for (int k = 0; k < 900; ++k) {
        // conditional intensity as a function of the time since the drive spike
        auto lam_of_ty = [&](double ty) {
            return closedform::event_driven_lambda(ed, 0.0, t_x, ty);
        };
        const auto [st2, lam] = filter::filter_predict(st, h, 0.0, lam_of_ty);
        st = st2;
        t += h;
        const double expect = closedform::event_driven_lambda(ed, 0.0, t_x, t);
        if (t < ed.delta_x - 0.01)  // inside the spiking window, away from the edge
            worst = std::max(worst, std::abs(lam - expect) / expect);
    }
    CHECK(worst < 0.02);
    CHECK(t == doctest::Approx(0.9));
}

// Independent oracle for the filtered intensity: average the conditional
// intensity over raw drive paths, importance-weighted by the likelihood of the
// observed X events. Shares no machinery with the filter.
TEST_CASE("filter agrees with a likelihood-weighted Monte Carlo marginal") {
    CoupledSpikingParams p;
    const TimeWindow w(0.0, 0.0, 3.0);
    const paths::EventPath x(w, {1.0, 2.2});
    const std::vector<double> probes = {0.5, 1.5, 2.7};

    // cumulative of the conditional intensity in the time since the last drive
    // spike, for exact per-segment integrals
    const int n_tab = 20000;
    const double hu = p.t_cut / n_tab;
    std::vector<double> cum(n_tab + 1, 0.0);
    for (int i = 0; i < n_tab; ++i) {
        const double a = i * hu, b = (i + 1) * hu;
        cum[i + 1] = cum[i] + 0.5 * (p.intensity(a + 1e-12) + p.intensity(b)) * hu;
    }
    auto big_lambda = [&](double u) {  // integral of lambda over [0, u]
        if (u <= 0.0) return 0.0;
        if (u >= p.t_cut) return cum[n_tab] + p.lambda_base * (u - p.t_cut);
        const double pos = u / hu;
        const auto j = static_cast<std::size_t>(pos);
        return cum[j] + (pos - j) * (cum[j + 1] - cum[j]);
    };

    const std::size_t n_mc = 400000;
    std::vector<double> num(probes.size(), 0.0);
    std::vector<double> den(probes.size(), 0.0);
    rng::Stream stream(4242);
    for (std::size_t trial = 0; trial < n_mc; ++trial) {
        // stationary drive history, then a fresh Poisson train over the window
        std::vector<double> y;
        y.push_back(-stream.exponential(p.lambda_y));
        while (true) {
            const double t = std::max(y.back(), 0.0) + stream.exponential(p.lambda_y);
            if (t > w.t_end) break;
            y.push_back(t);
        }
        auto last_y = [&](double t) {
            double last = y.front();
            for (double ty : y)
                if (ty < t) last = ty;
            return last;
        };
        auto integral_to = [&](double t) {
            double acc = 0.0;
            double seg_start = 0.0;
            double seg_y = y.front();
            for (std::size_t k = 1; k <= y.size(); ++k) {
                const double seg_end = (k < y.size()) ? std::min(y[k], t) : t;
                if (seg_end > seg_start) {
                    acc += big_lambda(seg_end - seg_y) - big_lambda(seg_start - seg_y);
                    seg_start = seg_end;
                }
                if (k < y.size() && y[k] < t) seg_y = y[k];
                if (seg_start >= t) break;
            }
            return acc;
        };
        for (std::size_t j = 0; j < probes.size(); ++j) {
            const double t = probes[j];
            double log_l = -integral_to(t);
            for (double e : x.events)
                if (e < t) log_l += std::log(p.intensity(e - last_y(e)));
            const double lik = std::exp(log_l);
            den[j] += lik;
            num[j] += lik * p.intensity(t - last_y(t));
        }
    }

    const auto filt = filter::filter_intensity_at(x, p, 1e-3, probes);
    for (std::size_t j = 0; j < probes.size(); ++j) {
        const double oracle = num[j] / den[j];
        CHECK(filt[j] == doctest::Approx(oracle).epsilon(0.03));
    }
}
