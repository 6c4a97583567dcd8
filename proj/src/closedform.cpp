#include "ctinfo/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ctinfo/common.hpp"

namespace ctinfo::closedform {

RefractoryForms refractory_closed_forms(double mu, double delta_x) {
    RefractoryParams{mu, delta_x}.validate();
    RefractoryForms f;
    f.lambda0 = mu / (1.0 + mu * delta_x);
    f.memory_rate = mu * std::log(1.0 + mu * delta_x) / (1.0 + mu * delta_x);
    f.argmax_delta_x = (std::exp(1.0) - 1.0) / mu;
    f.max_rate = mu / std::exp(1.0);
    return f;
}

double event_driven_mdot(double c, double delta_x, double delta_y, double t) {
    EventDrivenParams p;
    p.c = c;
    p.delta_x = delta_x;
    p.delta_y = delta_y;
    p.validate();
    const double u = t - std::floor(t / delta_y) * delta_y;  // position in period
    if (u > delta_x) return 0.0;
    const double remaining = delta_x - c * u;
    if (remaining <= 0.0) return std::numeric_limits<double>::infinity();  // c == 1 endpoint
    return (c / delta_x) * std::log(delta_x / remaining);
}

double event_driven_lambda(const EventDrivenParams& p, double phase, double t_x, double t) {
    const double shifted = t - phase;
    const double u = shifted - std::floor(shifted / p.delta_y) * p.delta_y;
    if (u > p.delta_x) return 0.0;
    if (std::isfinite(t_x) && t - t_x < p.delta_x) return 0.0;  // refractory
    const double remaining = p.delta_x - p.c * u;
    if (remaining <= 0.0) return std::numeric_limits<double>::infinity();
    return p.c / remaining;
}

double event_driven_lambda0(const EventDrivenParams& p, double phase, double t) {
    const double shifted = t - phase;
    const double u = shifted - std::floor(shifted / p.delta_y) * p.delta_y;
    return (u <= p.delta_x) ? p.c / p.delta_x : 0.0;
}

namespace {
double m_ring_value(double c, double delta_y) {
    // c + (1-c)ln(1-c), with the c -> 1 limit taken explicitly
    const double extra = (c < 1.0) ? (1.0 - c) * std::log1p(-c) : 0.0;
    return (c + extra) / delta_y;
}
}  // namespace

EventDrivenReport event_driven_report(const EventDrivenParams& p) {
    p.validate();
    EventDrivenReport r;
    r.m_ring = m_ring_value(p.c, p.delta_y);
    r.overestimate = (p.c / p.delta_y) * std::log(p.delta_y / p.delta_x);
    r.xi = xi_phase_correction(p, p.phase_dist);
    require(r.xi <= 1e-9 && r.xi >= -r.overestimate - 1e-9,
            "event_driven_report: xi outside its analytic bounds");
    r.m_st = r.m_ring + r.overestimate + r.xi;
    r.lambda0_of_t = [p](double t) { return event_driven_lambda0(p, 0.0, t); };
    r.mdot_of_t = [p](double t) { return event_driven_mdot(p.c, p.delta_x, p.delta_y, t); };
    return r;
}

namespace {
double xi_tabulated(const EventDrivenParams& p, const PhaseDist& dist, std::size_t grid_points);
}  // namespace

double xi_phase_correction(const EventDrivenParams& p, const PhaseDist& dist,
                           std::size_t grid_points) {
    p.validate();
    switch (dist.type) {
        case PhaseDist::kind::delta:
            // the window (t-delta_x, t] always contains the point mass
            return 0.0;
        case PhaseDist::kind::uniform:
            return -(p.c / p.delta_y) * std::log(p.delta_y / p.delta_x);
        case PhaseDist::kind::tabulated:
            break;
    }
    const double fine = xi_tabulated(p, dist, grid_points);
    const double coarse = xi_tabulated(p, dist, grid_points / 2);
    if (std::abs(fine - coarse) > 1e-4 * (1.0 + std::abs(fine)))
        throw numerical_error("xi_phase_correction: quadrature not converged; "
                              "refine the tabulated density");
    return fine;
}

namespace {
double xi_tabulated(const EventDrivenParams& p, const PhaseDist& dist,
                    std::size_t grid_points) {

    // xi = c/(dy*dx) * Int_0^dy p(phi) Int_phi^{phi+dx} ln[Int_{t-dx}^t p] dt dphi,
    // with p extended periodically and normalised on [0, dy). Nested trapezoid
    // on a uniform phase grid.
    const std::size_t n = grid_points;
    const double dy = p.delta_y, dx = p.delta_x;
    const double h = dy / static_cast<double>(n);

    // resample the tabulated density onto the working grid and normalise
    std::vector<double> pphi(n + 1);
    const std::size_t m = dist.density.size();
    for (std::size_t i = 0; i <= n; ++i) {
        const double phi = static_cast<double>(i % n) * h;
        const double pos = phi / dy * static_cast<double>(m);
        const std::size_t j0 = std::min(static_cast<std::size_t>(pos), m - 1);
        const std::size_t j1 = (j0 + 1) % m;
        const double w = pos - static_cast<double>(j0);
        pphi[i] = (1.0 - w) * dist.density[j0] + w * dist.density[j1];
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += 0.5 * (pphi[i] + pphi[i + 1]) * h;
    require(norm > 0.0, "xi_phase_correction: zero-mass density");
    for (auto& v : pphi) v /= norm;

    // periodic cumulative, so Int_{t-dx}^t p = C(t) - C(t-dx) with wraparound
    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + 0.5 * (pphi[i] + pphi[i + 1]) * h;
    auto cum_at = [&](double t) {
        const double wrapped = t - std::floor(t / dy) * dy;
        const double turns = std::floor(t / dy);
        const double pos = wrapped / h;
        const std::size_t j = std::min(static_cast<std::size_t>(pos), n - 1);
        const double w = pos - static_cast<double>(j);
        return turns * cum[n] + (1.0 - w) * cum[j] + w * cum[j + 1];
    };
    auto window_mass = [&](double t) { return std::max(cum_at(t) - cum_at(t - dx), 1e-300); };

    // inner integral over t in [phi, phi+dx] on a grid aligned with h
    const std::size_t nt = std::max<std::size_t>(2, static_cast<std::size_t>(dx / h) + 1);
    const double ht = dx / static_cast<double>(nt);
    double outer = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double phi = static_cast<double>(i) * h;
        double inner = 0.0;
        double prev = std::log(window_mass(phi));
        for (std::size_t k = 1; k <= nt; ++k) {
            const double t = phi + static_cast<double>(k) * ht;
            const double curr = std::log(window_mass(t));
            inner += 0.5 * (prev + curr) * ht;
            prev = curr;
        }
        const double weight = (i == 0 || i == n) ? 0.5 : 1.0;
        outer += weight * pphi[i] * inner * h;
    }
    return p.c / (p.delta_y * p.delta_x) * outer;
}
}  // namespace

double coupled_markov_rate(const simulate::CoupledSpikingParams& p) {
    p.validate();
    // lambda_base + Int_0^tcut lambda_y e^{-lambda_y s} (lambda(s) - lambda_base) ds;
    // the integrand vanishes beyond t_cut
    const std::size_t n = 4096;  // Simpson intervals (even)
    const double h = p.t_cut / static_cast<double>(n);
    auto f = [&p](double s) {
        return p.lambda_y * std::exp(-p.lambda_y * s) * (p.intensity(s) - p.lambda_base);
    };
    double acc = f(0.0) + f(p.t_cut);
    for (std::size_t i = 1; i < n; ++i)
        acc += f(static_cast<double>(i) * h) * ((i % 2 == 1) ? 4.0 : 2.0);
    return p.lambda_base + acc * h / 3.0;
}

double phase_recovery(const EventPath& x, double delta_x, double delta_y) {
    (void)delta_x;  // the estimator needs only the period; kept for the model signature
    if (x.events.size() < 2)
        throw insufficient_data("phase_recovery: need at least two spikes");
    std::size_t best = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < x.events.size(); ++i) {
        const double gap = x.events[i + 1] - x.events[i];
        if (gap < best_gap) {
            best_gap = gap;
            best = i;
        }
    }
    const double t = x.events[best + 1];
    return t - std::floor(t / delta_y) * delta_y;
}

}  // namespace ctinfo::closedform
