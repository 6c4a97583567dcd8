#include "ctinfo/acceptance.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "ctinfo/closedform.hpp"
#include "ctinfo/common.hpp"
#include "ctinfo/filter.hpp"
#include "ctinfo/icap.hpp"
#include "ctinfo/infomeasures.hpp"
#include "ctinfo/oudyn.hpp"
#include "ctinfo/paths.hpp"
#include "ctinfo/rng.hpp"
#include "ctinfo/simulate.hpp"

namespace ctinfo::acceptance {

namespace {

using paths::EventPath;
using paths::TimeWindow;

constexpr double kLn2Over2 = 0.34657359027997264;
constexpr double kInvE = 0.36787944117144233;
// (c + (1-c)ln(1-c))/delta_y and (c/delta_y)ln(delta_y/delta_x) at the pinned params
constexpr double kMRing = 0.15342640972002736;
constexpr double kOverestimate = 1.1512925464970228;
constexpr double kCoupledAnchor = 1.2697;  // reported mean Markov spike rate
// independently re-derived closed-form targets at A=-5, B=5, C=1, D=-2, Vx=Vy=1, rho=0
const double kTeDemo = std::sqrt(7.25) - 1.0;
constexpr double kKappaEff = 35.0 / 34.0;
constexpr double kSumRate = 1625.0 / 952.0;

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

struct Checks {
    bool pass = true;
    std::string detail;
    void add(bool ok, const std::string& line) {
        pass = pass && ok;
        detail += (ok ? "  ok   " : "  FAIL ") + line + "\n";
    }
};

simulate::CoupledSpikingParams coupled_demo_params() {
    simulate::CoupledSpikingParams p;
    p.lambda_y = 1.0;
    p.lambda_base = 0.5;
    p.m = 5.0;
    p.sigma = 0.1;
    p.t_cut = 1.0;
    return p;
}

oudyn::OUParams ou_demo_params() {
    oudyn::OUParams p;  // defaults are the demo drift constants
    p.rho = 0.0;
    p.V_y = 1.0;
    return p;
}

std::uint64_t sub_seed(std::uint64_t seed, int id) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(id + 1));
    return rng::splitmix64(x);
}

struct Ctx {
    std::uint64_t seed;
    ensemble::policy pol;
    double tol_scale;
    double tol(double x) const { return x * tol_scale; }
};

// --- criterion bodies --------------------------------------------------------

CriterionResult c1_refractory_rate(const Ctx& ctx) {
    CriterionResult r;
    r.id = 1;
    r.name = "refractory memory rate (mu=1, dx=1)";
    r.budget_seconds = 10.0;
    simulate::RefractoryParams p{1.0, 1.0};
    const auto x = simulate::simulate_refractory(p, TimeWindow(-1000.0, 0.0, 1e5),
                                                 sub_seed(ctx.seed, 1));
    const auto full = infomeasures::refractory_intensity(x, p);
    const auto markov = infomeasures::refractory_markov_intensity(x, p);
    const auto est = infomeasures::ergodic_memory_rate(x, full, markov);
    r.measured = est.value;
    r.target = kLn2Over2;
    r.tolerance = "2% relative";
    Checks ck;
    ck.add(std::abs(est.value - kLn2Over2) <= ctx.tol(0.02 * kLn2Over2),
           fmt("ergodic rate %.6f vs ln(2)/2 = %.6f (stderr %.2e)", est.value, kLn2Over2,
               est.stderr_));
    r.pass = ck.pass;
    r.detail = ck.detail;
    return r;
}

CriterionResult c2_refractory_optimum(const Ctx& ctx) {
    CriterionResult r;
    r.id = 2;
    r.name = "refractory optimum sweep";
    r.budget_seconds = 30.0;
    Checks ck;
    const double e1 = std::exp(1.0) - 1.0;
    double best_dx = 0.0, best_val = -1.0;
    const double step = (4.0 - 0.1) / 39.0;
    for (int i = 0; i < 40; ++i) {
        const double dx = 0.1 + step * static_cast<double>(i);
        const double v = closedform::refractory_closed_forms(1.0, dx).memory_rate;
        if (v > best_val) {
            best_val = v;
            best_dx = dx;
        }
    }
    ck.add(std::abs(best_dx - e1) <= (ctx.tol_scale == 0.0 ? 0.0 : step),
           fmt("grid argmax %.4f within one step (%.4f) of e-1 = %.4f", best_dx, step, e1));
    const double at_opt = closedform::refractory_closed_forms(1.0, e1).memory_rate;
    ck.add(std::abs(at_opt - kInvE) <= ctx.tol(1e-12),
           fmt("closed form at e-1: %.15f vs 1/e (|diff| %.1e <= 1e-12)", at_opt,
               std::abs(at_opt - kInvE)));
    simulate::RefractoryParams p{1.0, e1};
    const auto x = simulate::simulate_refractory(p, TimeWindow(-1000.0, 0.0, 1e5),
                                                 sub_seed(ctx.seed, 2));
    const auto est = infomeasures::ergodic_memory_rate(
        x, infomeasures::refractory_intensity(x, p),
        infomeasures::refractory_markov_intensity(x, p));
    ck.add(std::abs(est.value - kInvE) <= ctx.tol(0.02 * kInvE),
           fmt("simulated rate at argmax %.6f vs 1/e = %.6f", est.value, kInvE));
    r.measured = best_dx;
    r.target = e1;
    r.tolerance = "grid step / 1e-12 / 2%";
    r.pass = ck.pass;
    r.detail = ck.detail;
    return r;
}

CriterionResult c3_event_driven(const Ctx& ctx) {
    CriterionResult r;
    r.id = 3;
    r.name = "event-driven rates (uniform phase)";
    r.budget_seconds = 20.0;
    Checks ck;
    simulate::EventDrivenParams p;
    p.c = 0.5;
    p.delta_x = 0.1;
    p.delta_y = 1.0;
    p.phase_dist = simulate::PhaseDist::uniform_phase();
    const auto real = simulate::simulate_event_driven(p, TimeWindow(0.0, 0.0, 1e5),
                                                      sub_seed(ctx.seed, 3));
    const auto& ev = real.x.events;
    auto prev_event = [&ev](double t) {
        auto it = std::lower_bound(ev.begin(), ev.end(), t);
        return (it == ev.begin()) ? -paths::infinite_duration : *(it - 1);
    };
    const auto est = infomeasures::ergodic_jump_rate(
        real.x,
        [&](double t) { return closedform::event_driven_lambda(p, real.phase, prev_event(t), t); },
        [&](double t) { return closedform::event_driven_lambda0(p, real.phase, t); });
    ck.add(std::abs(est.value - kMRing) <= ctx.tol(0.02 * kMRing),
           fmt("simulated phase-conditioned rate %.6f vs %.6f (stderr %.2e)", est.value, kMRing,
               est.stderr_));

    simulate::EventDrivenParams pd = p;
    pd.phase_dist = simulate::PhaseDist::delta_at(0.0);
    const auto rep = closedform::event_driven_report(pd);
    const double identity = (rep.m_st - rep.m_ring) - kOverestimate;
    ck.add(std::abs(identity) <= ctx.tol(1e-12),
           fmt("M_st - M_ring = %.15f vs (c/dy)ln(dy/dx) = %.15f", rep.m_st - rep.m_ring,
               kOverestimate));
    r.measured = est.value;
    r.target = kMRing;
    r.tolerance = "2% / 1e-12";
    r.pass = ck.pass;
    r.detail = ck.detail;
    return r;
}

CriterionResult c4_xi_bounds(const Ctx& ctx) {
    CriterionResult r;
    r.id = 4;
    r.name = "xi bounds over phase densities";
    r.budget_seconds = 10.0;
    Checks ck;
    simulate::EventDrivenParams p;
    p.c = 0.5;
    p.delta_x = 0.1;
    p.delta_y = 1.0;

    const double xi_delta = closedform::xi_phase_correction(p, simulate::PhaseDist::delta_at(0.3));
    ck.add(std::abs(xi_delta) <= ctx.tol(1e-4), fmt("delta endpoint: xi = %.2e (target 0)", xi_delta));
    const double xi_unif =
        closedform::xi_phase_correction(p, simulate::PhaseDist::uniform_phase());
    ck.add(std::abs(xi_unif + kOverestimate) <= ctx.tol(1e-4),
           fmt("uniform endpoint: xi = %.6f vs -overestimate = %.6f", xi_unif, -kOverestimate));
    const double xi_tab_unif = closedform::xi_phase_correction(
        p, simulate::PhaseDist::tabulated(std::vector<double>(512, 1.0)));
    ck.add(std::abs(xi_tab_unif + kOverestimate) <= ctx.tol(1e-4),
           fmt("tabulated-uniform endpoint: xi = %.6f vs %.6f", xi_tab_unif, -kOverestimate));

    rng::Stream stream(sub_seed(ctx.seed, 4));
    bool bounds_ok = true;
    double worst_lo = 0.0, worst_hi = -kOverestimate;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> dens(256);
        for (auto& d : dens) {
            const double u = stream.uniform();
            d = 0.05 + u * u * 3.0;
        }
        const double xi = closedform::xi_phase_correction(p, simulate::PhaseDist::tabulated(dens));
        bounds_ok = bounds_ok && xi <= 1e-9 && xi >= -kOverestimate - 1e-9;
        worst_lo = std::min(worst_lo, xi);
        worst_hi = std::max(worst_hi, xi);
    }
    ck.add(bounds_ok, fmt("20 random tabulated densities: xi in [%.4f, %.2e], bound -%.4f",
                          worst_lo, worst_hi, kOverestimate));
    r.measured = worst_lo;
    r.target = -kOverestimate;
    r.tolerance = "bounds + 1e-4 endpoints";
    r.pass = ck.pass;
    r.detail = ck.detail;
    return r;
}

CriterionResult c5_coupled_anchor(const Ctx& ctx) {
    CriterionResult r;
    r.id = 5;
    r.name = "coupled-spiking mean-rate anchor";
    r.budget_seconds = 120.0;
    Checks ck;
    const auto p = coupled_demo_params();
    const TimeWindow w(-1.0, 0.0, 1e6);
    const auto real = simulate::simulate_coupled_spiking(p, w, sub_seed(ctx.seed, 5),
                                                         simulate::YHistory::silent(p.t_cut));
    const double emp_rate =
        static_cast<double>(real.x.count_in(0.0, w.t_end)) / w.horizon();
    ck.add(std::abs(emp_rate - kCoupledAnchor) <= ctx.tol(0.01 * kCoupledAnchor),
           fmt("empirical X rate %.5f vs %.5f", emp_rate, kCoupledAnchor));
    const double favg = filter::filter_average_intensity(real.x, p, 0.005);
    ck.add(std::abs(favg - kCoupledAnchor) <= ctx.tol(0.01 * kCoupledAnchor),
           fmt("long-run filter average %.5f vs %.5f", favg, kCoupledAnchor));
    ck.add(true, fmt("stationary quadrature rate %.5f (reference)",
                     closedform::coupled_markov_rate(p)));
    r.measured = favg;
    r.target = kCoupledAnchor;
    r.tolerance = "1% relative";
    r.pass = ck.pass;
    r.detail = ck.detail;
    return r;
}

CriterionResult c6_zero_mean_waiting(const Ctx& ctx) {
    CriterionResult r;
    r.id = 6;
    r.name = "zero-mean waiting-time contribution";
    r.budget_seconds = 120.0;
    Checks ck;
    const auto p = coupled_demo_params();
    const double lam0 = closedform::coupled_markov_rate(p);
    const std::size_t n_paths = 500;
    std::vector<double> probes;
    for (int i = 1; i <= 10; ++i) probes.push_back(5.0 * i);
    const TimeWindow w(0.0, 0.0, 51.0);

    const auto all = ensemble::map(n_paths, ctx.pol, [&](std::size_t i) {
        const auto real = simulate::simulate_coupled_spiking(
            p, w, sub_seed(ctx.seed, 6), simulate::YHistory::stationary(), i);
        return filter::filter_intensity_at(real.x, p, 0.005, probes);
    });

    bool all_ok = true;
    double worst_z = 0.0;
    for (std::size_t j = 0; j < probes.size(); ++j) {
        std::vector<double> vals(n_paths);
        for (std::size_t i = 0; i < n_paths; ++i) vals[i] = lam0 - all[i][j];
        const auto s = ensemble::summarize(vals);
        const double z = (s.se > 0.0) ? std::abs(s.mean) / s.se : 0.0;
        worst_z = std::max(worst_z, z);
        all_ok = all_ok && std::abs(s.mean) <= ctx.tol(3.0) * s.se;
    }
    ck.add(all_ok, fmt("mean waiting-rate at 10 probes: worst |mean|/SE = %.2f (<= 3)", worst_z));
    r.measured = worst_z;
    r.target = 0.0;
    r.tolerance = "3 standard errors";
    r.pass = ck.pass;
    r.detail = ck.detail;
    return r;
}

CriterionResult c7_chain_rule(const Ctx& ctx) {
    CriterionResult r;
    r.id = 7;
    r.name = "measure chain rule per path";
    r.budget_seconds = 60.0;
    Checks ck;
    const auto p = coupled_demo_params();
    const TimeWindow w(-1.0, 0.0, 20.0);
    const std::size_t n_paths = 50;
    const auto errs = ensemble::map(n_paths, ctx.pol, [&](std::size_t i) {
        const auto real = simulate::simulate_coupled_spiking(
            p, w, sub_seed(ctx.seed, 7), simulate::YHistory::silent(p.t_cut), i);
        const auto cond = filter::conditional_intensity_trace(real, p, 0.005);
        const auto full = filter::marginal_intensity_trace(real.x, p, 0.005);
        const auto markov =
            paths::IntensityTrace::constant(w.tau, w.t_end, closedform::coupled_markov_rate(p));
        const auto combined =
            infomeasures::pathwise_ratio(real.x, cond, markov, infomeasures::Channel::memory);
        const auto mem = infomeasures::pathwise_memory(real.x, full, markov);
        const auto tra = infomeasures::pathwise_transfer(real.x, cond, full);
        return std::abs(combined.final_m() - (mem.final_m() + tra.final_t()));
    });
    const double worst = *std::max_element(errs.begin(), errs.end());
    ck.add(worst <= ctx.tol(1e-6), fmt("worst per-path identity error %.2e (<= 1e-6 nats)", worst));
    r.measured = worst;
    r.target = 0.0;
    r.tolerance = "1e-6 nats on 50 paths";
    r.pass = ck.pass;
    r.detail = ck.detail;
    return r;
}

CriterionResult c8_ou_closed_forms(const Ctx& ctx) {
    CriterionResult r;
    r.id = 8;
    r.name = "coupled-OU closed forms";
    r.budget_seconds = 1.0;
    Checks ck;
    const auto p = ou_demo_params();
    const double te = oudyn::te_rate_coupled_ou(p);
    ck.add(std::abs(te - 1.6926) <= ctx.tol(1e-4),
           fmt("transfer rate %.7f vs 1.6926 +- 1e-4 (derived %.7f)", te, kTeDemo));
    ck.add(std::abs(te - kTeDemo) <= ctx.tol(1e-12), fmt("transfer rate matches the Riccati-filter route, |diff| = %.1e",
               std::abs(te - kTeDemo)));
    const double ke = oudyn::kappa_eff(p);
    ck.add(std::abs(ke - kKappaEff) <= ctx.tol(1e-12),
           fmt("kappa_eff %.15f vs 35/34 (|diff| %.1e)", ke, std::abs(ke - kKappaEff)));
    const auto sr = oudyn::sum_rate_coupled_ou(p);
    ck.add(std::abs(sr.sum - kSumRate) <= ctx.tol(1e-12),
           fmt("memory+transfer %.15f vs 1625/952 (|diff| %.1e)", sr.sum,
               std::abs(sr.sum - kSumRate)));
    ck.add(sr.memory >= 0.0, fmt("memory rate %.7f nonnegative", sr.memory));
    r.measured = sr.sum;
    r.target = kSumRate;
    r.tolerance = "1e-12 (te: 1e-4)";
    r.pass = ck.pass;
    r.detail = ck.detail;
    return r;
}

CriterionResult c9_girsanov_mc(const Ctx& ctx) {
    CriterionResult r;
    r.id = 9;
    r.name = "Girsanov Monte Carlo and martingale";
    r.budget_seconds = 180.0;
    Checks ck;
    const auto p = ou_demo_params();
    const double dt = 1e-3, horizon = 50.0;
    const std::size_t n_paths = 200;
    const std::vector<double> z_report = {1.0, 2.0, 5.0};

    struct PathStats {
        double rate;
        double step_factor_sum;  // per-step exp(-f dW - f^2 dt / 2), summed
        double z[3];
    };
    const auto stats = ensemble::map(n_paths, ctx.pol, [&](std::size_t i) {
        const auto path = oudyn::simulate_coupled_ou(p, dt, horizon, sub_seed(ctx.seed, 9), i);
        const auto g = oudyn::girsanov_accumulator(path, p);
        PathStats s{};
        s.rate = g.trace.final_m() / horizon;
        for (std::size_t j = 0; j < path.steps(); ++j)
            s.step_factor_sum += std::exp(-g.trace.rate_m[j] * dt);
        for (std::size_t k = 0; k < z_report.size(); ++k) {
            const auto idx = static_cast<std::size_t>(std::llround(z_report[k] / dt));
            s.z[k] = g.z[idx];
        }
        return s;
    });

    std::vector<double> rates(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) rates[i] = stats[i].rate;
    const auto rs = ensemble::summarize(rates);
    ck.add(std::abs(rs.mean - kSumRate) <= ctx.tol(0.03 * kSumRate),
           fmt("mean accumulator/t %.5f vs 1625/952 = %.5f (SE %.4f)", rs.mean, kSumRate, rs.se));

    // E[Z_t] = 1. Z_t is heavy-tailed, so the plain 3-SE test is only sound at
    // modest horizons; it is asserted at t = 0.05 and 0.1 over a dedicated
    // 1000-path ensemble, backed by the sharp pooled per-step form of the same
    // identity, while the long-horizon probes are reported with their
    // effective sample sizes.
    const std::vector<double> z_assert = {0.05, 0.1, 0.25, 0.5};
    const std::size_t n_mart = 1000;
    const auto zshort = ensemble::map(n_mart, ctx.pol, [&](std::size_t i) {
        const auto path = oudyn::simulate_coupled_ou(p, dt, 0.5, sub_seed(ctx.seed, 90), i);
        const auto g = oudyn::girsanov_accumulator(path, p);
        std::array<double, 4> z{};
        for (std::size_t k = 0; k < z_assert.size(); ++k)
            z[k] = g.z[static_cast<std::size_t>(std::llround(z_assert[k] / dt))];
        return z;
    });
    for (std::size_t k = 0; k < z_assert.size(); ++k) {
        std::vector<double> zs(n_mart);
        for (std::size_t i = 0; i < n_mart; ++i) zs[i] = zshort[i][k];
        const auto s = ensemble::summarize(zs);
        double sum = 0.0, sumsq = 0.0;
        for (double z : zs) {
            sum += z;
            sumsq += z * z;
        }
        const double ess = (sumsq > 0.0) ? sum * sum / sumsq : 0.0;
        if (z_assert[k] <= 0.1)
            ck.add(std::abs(s.mean - 1.0) <= ctx.tol(3.0) * s.se,
                   fmt("E[Z] at t=%.2f: %.4f +- %.4f (ESS %.0f, asserted)", z_assert[k], s.mean,
                       s.se, ess));
        else
            ck.add(true, fmt("E[Z] at t=%.2f: %.3f +- %.3f (ESS %.0f, heavy tail: "
                             "reported only)",
                             z_assert[k], s.mean, s.se, ess));
    }
    {
        // pooled per-step factors: uncorrelated martingale increments, so the
        // identity is testable at a few-1e-5 standard error
        double sum = 0.0;
        const double n_steps = horizon / dt;
        for (std::size_t i = 0; i < n_paths; ++i) sum += stats[i].step_factor_sum;
        const double pooled = sum / (static_cast<double>(n_paths) * n_steps);
        const double se = std::sqrt(kSumRate * 2.0 * dt / (static_cast<double>(n_paths) * n_steps));
        ck.add(std::abs(pooled - 1.0) <= ctx.tol(4.0) * se,
               fmt("pooled per-step martingale factor %.7f +- %.1e", pooled, se));
    }
    for (std::size_t k = 0; k < z_report.size(); ++k) {
        std::vector<double> zs(n_paths);
        for (std::size_t i = 0; i < n_paths; ++i) zs[i] = stats[i].z[k];
        const auto s = ensemble::summarize(zs);
        double sum = 0.0, sumsq = 0.0;
        for (double z : zs) {
            sum += z;
            sumsq += z * z;
        }
        const double ess = (sumsq > 0.0) ? sum * sum / sumsq : 0.0;
        ck.add(true, fmt("E[Z] at t=%.0f: %.3f +- %.3f (ESS %.0f, heavy tail: reported only)",
                         z_report[k], s.mean, s.se, ess));
    }
    r.measured = rs.mean;
    r.target = kSumRate;
    r.tolerance = "3% (Z: 3 SE)";
    r.pass = ck.pass;
    r.detail = ck.detail;
    return r;
}

CriterionResult c10_regime_boundaries(const Ctx& ctx) {
    CriterionResult r;
    r.id = 10;
    r.name = "regime boundaries at |rho| = 1";
    r.budget_seconds = 10.0;
    Checks ck;
    auto p = ou_demo_params();
    p.rho = -1.0;  // the correlation sign exhibiting the onset with these formula signs
    const auto crit = oudyn::critical_noise(p);
    ck.add(std::abs(crit.first - 0.4) <= ctx.tol(1e-12) && std::abs(crit.second - 0.2) <= ctx.tol(1e-12),
           fmt("critical magnitudes (%.3f, %.3f) vs (0.4, 0.2)", crit.first, crit.second));

    bool zero_below = true, positive_above = true, finite = true;
    for (int i = 1; i <= 50; ++i) {
        p.V_y = 0.02 * static_cast<double>(i);
        const double te = oudyn::te_rate_coupled_ou(p);
        const double mem = oudyn::sum_rate_coupled_ou(p).memory;
        finite = finite && std::isfinite(mem) && mem < 1e3;
        if (p.V_y <= 0.4 + 1e-12)
            zero_below = zero_below && te <= 1e-12;
        else
            positive_above = positive_above && te > 1e-6;
    }
    ck.add(zero_below && positive_above,
           "transfer rate 0 for V_y <= 0.4 and positive above (grid resolution 0.02)");

    const double d = 1e-4;
    auto mem_at = [&](double vy) {
        auto q = p;
        q.V_y = vy;
        return oudyn::sum_rate_coupled_ou(q).memory;
    };
    const double m0 = mem_at(0.4);
    const double slope_l = (m0 - mem_at(0.4 - d)) / d;
    const double slope_r = (mem_at(0.4 + d) - m0) / d;
    ck.add(std::abs(slope_r - slope_l) > 1.0 && finite,
           fmt("memory-rate slope break at V_y = 0.4: %.3f -> %.3f (peak value %.5f, finite)",
               slope_l, slope_r, m0));
    r.measured = slope_r - slope_l;
    r.target = -5.0;
    r.tolerance = "|slope break| > 1, finite peak";
    r.pass = ck.pass;
    r.detail = ck.detail;
    return r;
}

CriterionResult c11_coefficient_recovery(const Ctx& ctx) {
    CriterionResult r;
    r.id = 11;
    r.name = "asymptotic coefficient recovery";
    r.budget_seconds = 5.0;
    Checks ck;
    auto samples = [](const std::function<double(double)>& f) {
        std::vector<std::pair<double, double>> s;
        const int n = 24;
        for (int i = 0; i < n; ++i) {
            const double dt = 1e-5 * std::pow(100.0, static_cast<double>(i) / (n - 1));
            s.emplace_back(dt, f(dt));
        }
        return s;
    };

    // two-state chain, k+ = 1, k- = 2
    const double c00 = std::log(3.0) - (2.0 / 3.0) * std::log(2.0);
    const double c10 = (2.0 / 3.0) * (std::log(2.0) - 2.0);
    const double c11 = 4.0 / 3.0;
    const auto fit2 = icap::fit_asymptotic_coeffs(
        samples([](double dt) { return icap::parametric_ix_two_state(1.0, 2.0, dt); }));
    const double e00 = std::abs(*fit2.coeffs.c00 - c00) / std::abs(c00);
    const double e10 = std::abs(*fit2.coeffs.c10 - c10) / std::abs(c10);
    const double e11 = std::abs(*fit2.coeffs.c11 - c11) / std::abs(c11);
    ck.add(e00 <= ctx.tol(1e-3) && e10 <= ctx.tol(1e-3) && e11 <= ctx.tol(1e-3) && std::abs(*fit2.coeffs.c01) <= ctx.tol(1e-3),
           fmt("two-state rel errors: c00 %.1e, c10 %.1e, c11 %.1e (c01 %.1e)", e00, e10, e11,
               std::abs(*fit2.coeffs.c01)));

    // single OU at kappa = 1
    const auto fito = icap::fit_asymptotic_coeffs(
        samples([](double dt) { return oudyn::ou_parametric_ais(1.0, dt); }));
    const double o00 = std::abs(*fito.coeffs.c00 - (-kLn2Over2)) / kLn2Over2;
    const double o01 = std::abs(*fito.coeffs.c01 - (-0.5)) / 0.5;
    const double o10 = std::abs(*fito.coeffs.c10 - 0.5) / 0.5;
    ck.add(o00 <= ctx.tol(0.01) && o01 <= ctx.tol(0.01) && o10 <= ctx.tol(0.01) && std::abs(*fito.coeffs.c11) <= ctx.tol(0.01),
           fmt("OU rel errors: c00 %.1e, c01 %.1e, c10 %.1e (c11 %.1e)", o00, o01, o10,
               std::abs(*fito.coeffs.c11)));
    r.measured = std::max({e00, e10, e11});
    r.target = 0.0;
    r.tolerance = "1e-3 rel (two-state), 1% (OU)";
    r.pass = ck.pass;
    r.detail = ck.detail;
    return r;
}

CriterionResult c12_binned_caution(const Ctx& ctx) {
    CriterionResult r;
    r.id = 12;
    r.name = "naive binned estimate approaches the memory rate";
    r.budget_seconds = 180.0;
    Checks ck;
    simulate::RefractoryParams p{1.0, 1.0};
    const auto x = simulate::simulate_refractory(p, TimeWindow(-1000.0, 0.0, 1e6),
                                                 sub_seed(ctx.seed, 12));
    const std::vector<double> dts = {0.2, 0.1, 0.05, 0.02};
    std::string trend;
    double last = 0.0;
    for (double dt : dts) {
        const auto k = static_cast<std::size_t>(std::llround(2.0 / dt));
        const auto rows = infomeasures::binned_storage_demo(x, {dt}, k);
        last = rows[0].estimate;
        trend += fmt("dt=%.2f -> %.4f; ", dt, last);
    }
    const double target = 0.3466;
    ck.add(std::abs(last - target) <= ctx.tol(0.10 * target),
           trend + fmt("final vs %.4f within 10%%", target));
    r.measured = last;
    r.target = target;
    r.tolerance = "10% at dt = 0.02";
    r.pass = ck.pass;
    r.detail = ck.detail;
    return r;
}

}  // namespace

CriterionResult run_one(int id, std::uint64_t seed, ensemble::policy pol, double tol_scale) {
    const auto start = std::chrono::steady_clock::now();
    const Ctx ctx{seed, pol, tol_scale};
    CriterionResult r;
    switch (id) {
        case 1: r = c1_refractory_rate(ctx); break;
        case 2: r = c2_refractory_optimum(ctx); break;
        case 3: r = c3_event_driven(ctx); break;
        case 4: r = c4_xi_bounds(ctx); break;
        case 5: r = c5_coupled_anchor(ctx); break;
        case 6: r = c6_zero_mean_waiting(ctx); break;
        case 7: r = c7_chain_rule(ctx); break;
        case 8: r = c8_ou_closed_forms(ctx); break;
        case 9: r = c9_girsanov_mc(ctx); break;
        case 10: r = c10_regime_boundaries(ctx); break;
        case 11: r = c11_coefficient_recovery(ctx); break;
        case 12: r = c12_binned_caution(ctx); break;
        default: throw std::invalid_argument("run_one: unknown criterion id");
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > r.budget_seconds) {
        r.pass = false;
        r.detail += fmt("  FAIL runtime %.1f s over the %.0f s budget\n", r.seconds,
                        r.budget_seconds);
    }
    return r;
}

std::vector<CriterionResult> run_all(std::uint64_t seed, ensemble::policy pol, double tol_scale) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 12; ++id) out.push_back(run_one(id, seed, pol, tol_scale));
    return out;
}

}  // namespace ctinfo::acceptance
