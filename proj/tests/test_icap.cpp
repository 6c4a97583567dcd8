#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ctinfo/common.hpp"
#include "ctinfo/icap.hpp"
#include "ctinfo/oudyn.hpp"

using namespace ctinfo;
using namespace ctinfo::icap;

TEST_CASE("stationary distribution of small chains") {
    // A -> B at 1, B -> A at 2: P = (2/3, 1/3)
    auto p = stationary_distribution(MasterEqModel::two_state(1.0, 2.0));
    CHECK(p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(p[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

    p = stationary_distribution(MasterEqModel::two_state(1.5, 1.5));
    CHECK(p[0] == doctest::Approx(0.5));

    // 3-state ring with equal rates: uniform
    MasterEqModel ring(3, {0, 1, 0, 0, 0, 1, 1, 0, 0});
    p = stationary_distribution(ring);
    for (double v : p) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // disconnected chain is rejected
    MasterEqModel split(3, {0, 1, 0, 1, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(stationary_distribution(split), std::invalid_argument);
}

TEST_CASE("master-equation coefficients reduce to the two-state closed form") {
    // symmetric rates
    auto c = master_eq_coeffs(MasterEqModel::two_state(1.0, 1.0));
    CHECK(*c.c00 == doctest::Approx(std::log(2.0)).epsilon(1e-13));
    CHECK(*c.c10 == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(*c.c11 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(*c.c01 == 0.0);
    CHECK(c.rate_divergent);  // dt*ln(dt) term present

    // general rates against the closed form (k-k+/(k-+k+))(ln(k-k+)-2), 2k-k+/S
    const double kp = 1.0, km = 2.0, s = kp + km;
    c = master_eq_coeffs(MasterEqModel::two_state(kp, km));
    const double pa = km / s, pb = kp / s;
    CHECK(*c.c00 == doctest::Approx(-pa * std::log(pa) - pb * std::log(pb)).epsilon(1e-13));
    CHECK(*c.c10 == doctest::Approx(km * kp / s * (std::log(km * kp) - 2.0)).epsilon(1e-13));
    CHECK(*c.c11 == doctest::Approx(2.0 * km * kp / s).epsilon(1e-13));
}

TEST_CASE("coefficient scaling: rates scaled by alpha scale c11, not c00") {
    const auto base = master_eq_coeffs(MasterEqModel::two_state(1.0, 2.0));
    const double alpha = 3.7;
    const auto scaled = master_eq_coeffs(MasterEqModel::two_state(alpha * 1.0, alpha * 2.0));
    CHECK(*scaled.c00 == doctest::Approx(*base.c00).epsilon(1e-13));
    CHECK(*scaled.c11 == doctest::Approx(alpha * *base.c11).epsilon(1e-13));
}

TEST_CASE("spiking limit coefficients") {
    auto c = spiking_coeffs(1.2697);
    CHECK(*c.c00 == 0.0);
    CHECK(c.c10_divergent);
    CHECK_FALSE(c.c10.has_value());
    CHECK(*c.c11 == doctest::Approx(2.5394).epsilon(1e-12));
    CHECK(c.rate_divergent);
    CHECK(*spiking_coeffs(0.0).c11 == 0.0);
    CHECK(*spiking_coeffs(77.0).c00 == 0.0);
}

TEST_CASE("two-state lagged information: limits and monotonicity") {
    // dt -> 0 recovers the Shannon entropy of the stationary law
    const double kp = 1.0, km = 2.0;
    const auto c = master_eq_coeffs(MasterEqModel::two_state(kp, km));
    CHECK(parametric_ix_two_state(kp, km, 1e-9) == doctest::Approx(*c.c00).epsilon(1e-6));
    // dt -> infinity decorrelates
    CHECK(parametric_ix_two_state(kp, km, 50.0) < 1e-12);
    // interior point within (0, ln 2) for symmetric rates, decreasing in dt
    const double v = parametric_ix_two_state(1.0, 1.0, 0.5);
    CHECK(v > 0.0);
    CHECK(v < std::log(2.0));
    for (double kp2 : {0.5, 1.0, 2.0}) {
        for (double km2 : {0.5, 1.3}) {
            double prev = parametric_ix_two_state(kp2, km2, 0.01);
            for (double dt : {0.05, 0.2, 0.8, 3.0}) {
                const double cur = parametric_ix_two_state(kp2, km2, dt);
                CHECK(cur >= 0.0);
                CHECK(cur <= prev + 1e-12);
                prev = cur;
            }
        }
    }
}

TEST_CASE("one-transition expansion residual vanishes faster than dt") {
    const double kp = 1.0, km = 2.0;
    const auto c = master_eq_coeffs(MasterEqModel::two_state(kp, km));
    double prev_ratio = 1e30;
    for (double dt : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const double expansion = *c.c00 + *c.c10 * dt + *c.c11 * dt * std::log(dt);
        const double residual = std::abs(parametric_ix_two_state(kp, km, dt) - expansion);
        const double ratio = residual / dt;
        CHECK(ratio < prev_ratio + 1e-12);
        prev_ratio = ratio;
    }
    CHECK(prev_ratio < 1e-3);  // o(dt)
}

namespace {
std::vector<std::pair<double, double>> log_spaced_samples(
    const std::function<double(double)>& f, double lo, double hi, int n) {
    std::vector<std::pair<double, double>> s;
    for (int i = 0; i < n; ++i) {
        const double dt = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
        s.emplace_back(dt, f(dt));
    }
    return s;
}
}  // namespace

TEST_CASE("fit: exact basis input is recovered to machine precision") {
    auto f = [](double dt) {
        return 0.7 - 0.5 * std::log(dt) + 2.0 * dt - 1.25 * dt * std::log(dt);
    };
    const auto fit = fit_asymptotic_coeffs(log_spaced_samples(f, 1e-5, 1e-3, 16));
    CHECK(*fit.coeffs.c00 == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(*fit.coeffs.c01 == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(*fit.coeffs.c10 == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(*fit.coeffs.c11 == doctest::Approx(-1.25).epsilon(1e-8));
    CHECK(fit.residual_rms < 1e-12);
    CHECK_FALSE(fit.basis_warning);
}

TEST_CASE("fit: order permutation leaves the coefficients unchanged") {
    auto f = [](double dt) { return icap::parametric_ix_two_state(1.0, 2.0, dt); };
    auto samples = log_spaced_samples(f, 1e-5, 1e-3, 12);
    const auto a = fit_asymptotic_coeffs(samples);
    std::reverse(samples.begin(), samples.end());
    std::swap(samples[2], samples[7]);
    const auto b = fit_asymptotic_coeffs(samples);
    CHECK(*a.coeffs.c00 == doctest::Approx(*b.coeffs.c00).epsilon(1e-12));
    CHECK(*a.coeffs.c10 == doctest::Approx(*b.coeffs.c10).epsilon(1e-9));
}

TEST_CASE("fit recovers the two-state coefficients") {
    auto f = [](double dt) { return icap::parametric_ix_two_state(1.0, 2.0, dt); };
    const auto fit = fit_asymptotic_coeffs(log_spaced_samples(f, 1e-5, 1e-3, 24));
    const auto c = master_eq_coeffs(MasterEqModel::two_state(1.0, 2.0));
    CHECK(std::abs(*fit.coeffs.c00 - *c.c00) / std::abs(*c.c00) < 1e-3);
    CHECK(std::abs(*fit.coeffs.c10 - *c.c10) / std::abs(*c.c10) < 1e-3);
    CHECK(std::abs(*fit.coeffs.c11 - *c.c11) / std::abs(*c.c11) < 1e-3);
    CHECK(std::abs(*fit.coeffs.c01) < 1e-3);
}

TEST_CASE("fit recovers the scalar-OU coefficients") {
    auto f = [](double dt) { return oudyn::ou_parametric_ais(1.0, dt); };
    const auto fit = fit_asymptotic_coeffs(log_spaced_samples(f, 1e-5, 1e-3, 24));
    CHECK(std::abs(*fit.coeffs.c00 + 0.5 * std::log(2.0)) / (0.5 * std::log(2.0)) < 0.01);
    CHECK(std::abs(*fit.coeffs.c01 + 0.5) / 0.5 < 0.01);
    CHECK(std::abs(*fit.coeffs.c10 - 0.5) / 0.5 < 0.01);
    CHECK(std::abs(*fit.coeffs.c11) < 0.01);
}

TEST_CASE("fit preconditions") {
    auto f = [](double dt) { return dt; };
    CHECK_THROWS_AS(fit_asymptotic_coeffs(log_spaced_samples(f, 1e-5, 1e-3, 5)),
                    std::invalid_argument);  // too few samples
    CHECK_THROWS_AS(fit_asymptotic_coeffs(log_spaced_samples(f, 1e-4, 5e-4, 12)),
                    std::invalid_argument);  // span below two decades
}
