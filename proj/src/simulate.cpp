#include "ctinfo/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "ctinfo/common.hpp"

namespace ctinfo::simulate {

void RefractoryParams::validate() const {
    require(mu > 0.0, "RefractoryParams: mu must be positive");
    require(delta_x >= 0.0, "RefractoryParams: delta_x must be nonnegative");
}

PhaseDist PhaseDist::delta_at(double a) {
    PhaseDist p;
    p.type = kind::delta;
    p.a = a;
    return p;
}

PhaseDist PhaseDist::uniform_phase() {
    PhaseDist p;
    p.type = kind::uniform;
    return p;
}

PhaseDist PhaseDist::tabulated(std::vector<double> density) {
    PhaseDist p;
    p.type = kind::tabulated;
    p.density = std::move(density);
    require(p.density.size() >= 2, "PhaseDist: tabulated density needs >= 2 points");
    double total = 0.0;
    for (double d : p.density) {
        require(d >= 0.0, "PhaseDist: density must be nonnegative");
        total += d;
    }
    require(total > 0.0, "PhaseDist: density must have positive mass");
    return p;
}

void EventDrivenParams::validate() const {
    require(c >= 0.0 && c <= 1.0, "EventDrivenParams: c must be in [0,1]");
    require(delta_x > 0.0 && delta_y > 0.0, "EventDrivenParams: durations must be positive");
    require(2.0 * delta_x < delta_y, "EventDrivenParams: need 2*delta_x < delta_y");
}

void CoupledSpikingParams::validate() const {
    require(lambda_y > 0.0 && lambda_base > 0.0 && m > 0.0 && sigma > 0.0 && t_cut > 0.0,
            "CoupledSpikingParams: all parameters must be positive");
    // the bump is nonnegative on (0, t_cut] by construction; scan anyway
    for (int i = 0; i <= 512; ++i) {
        const double s = t_cut * static_cast<double>(i) / 512.0;
        require(intensity(s) >= 0.0, "CoupledSpikingParams: intensity negative");
    }
}

double CoupledSpikingParams::intensity(double t_since_y) const {
    if (!(t_since_y > 0.0) || t_since_y > t_cut) return lambda_base;
    const double mid = 0.5 * t_cut;
    const double bump = std::exp(-(t_since_y - mid) * (t_since_y - mid) / (2.0 * sigma * sigma));
    const double offset = std::exp(-mid * mid / (2.0 * sigma * sigma));
    return lambda_base + m * (bump - offset);
}

YHistory YHistory::silent(double length) {
    require(length >= 0.0, "YHistory: silent length must be nonnegative");
    YHistory h;
    h.type = kind::silent;
    h.silent_length = length;
    return h;
}

YHistory YHistory::stationary() {
    YHistory h;
    h.type = kind::stationary;
    return h;
}

EventPath simulate_thinning(
    const std::function<double(double, std::span<const double>)>& intensity, double bound,
    TimeWindow window, rng::Stream& stream) {
    require(bound > 0.0, "simulate_thinning: bound must be positive");
    std::vector<double> events;
    double t = window.tau;
    while (true) {
        t += stream.exponential(bound);
        if (t > window.t_end) break;
        const double u = stream.uniform();
        const double lam = intensity(t, std::span<const double>(events));
        if (lam > bound * (1.0 + 1e-12))
            throw numerical_error("simulate_thinning: intensity exceeds dominating bound");
        if (u * bound < lam) events.push_back(t);
    }
    return EventPath(window, std::move(events));
}

EventPath simulate_thinning(
    const std::function<double(double, std::span<const double>)>& intensity, double bound,
    TimeWindow window, std::uint64_t seed, std::uint64_t stream) {
    rng::Stream s(seed, stream);
    return simulate_thinning(intensity, bound, window, s);
}

EventPath simulate_refractory(const RefractoryParams& p, TimeWindow window, std::uint64_t seed,
                               std::uint64_t stream) {
    p.validate();
    auto lam = [&p](double t, std::span<const double> past) {
        if (past.empty()) return p.mu;
        return (t - past.back() >= p.delta_x) ? p.mu : 0.0;
    };
    return simulate_thinning(lam, p.mu, window, seed, stream);
}

namespace {
double draw_phase(const PhaseDist& dist, double delta_y, rng::Stream& stream) {
    switch (dist.type) {
        case PhaseDist::kind::delta:
            return dist.a - std::floor(dist.a / delta_y) * delta_y;
        case PhaseDist::kind::uniform:
            return stream.uniform() * delta_y;
        case PhaseDist::kind::tabulated: {
            double total = 0.0;
            for (double d : dist.density) total += d;
            const double u = stream.uniform() * total;
            double acc = 0.0;
            const std::size_t n = dist.density.size();
            for (std::size_t j = 0; j < n; ++j) {
                const double next = acc + dist.density[j];
                if (u < next || j + 1 == n) {
                    const double frac = (dist.density[j] > 0.0) ? (u - acc) / dist.density[j] : 0.0;
                    return (static_cast<double>(j) + frac) * delta_y / static_cast<double>(n);
                }
                acc = next;
            }
            return 0.0;
        }
    }
    return 0.0;
}
}  // namespace

EventDrivenRealisation simulate_event_driven(const EventDrivenParams& p, TimeWindow window,
                                             std::uint64_t seed, std::uint64_t stream_idx) {
    p.validate();
    rng::Stream stream(seed, stream_idx);
    EventDrivenRealisation out;
    out.phase = draw_phase(p.phase_dist, p.delta_y, stream);

    std::vector<double> y_events, x_events;
    const long long n_lo =
        static_cast<long long>(std::ceil((window.tau - out.phase) / p.delta_y));
    const long long n_hi =
        static_cast<long long>(std::floor((window.t_end - out.phase) / p.delta_y));
    for (long long n = n_lo; n <= n_hi; ++n) {
        const double ty = out.phase + static_cast<double>(n) * p.delta_y;
        y_events.push_back(ty);
        // one Bernoulli(c) spike per drive window, uniform inside it; the
        // refractory rule never binds across windows because 2*delta_x < delta_y
        if (stream.uniform() < p.c) {
            const double tx = ty + stream.uniform() * p.delta_x;
            if (tx >= window.tau && tx <= window.t_end) x_events.push_back(tx);
        }
    }
    out.y = EventPath(window, std::move(y_events));
    out.x = EventPath(window, std::move(x_events));
    return out;
}

CoupledRealisation simulate_coupled_spiking(const CoupledSpikingParams& p, TimeWindow window,
                                            std::uint64_t seed, YHistory history,
                                            std::uint64_t stream_idx) {
    p.validate();
    rng::Stream stream(seed, stream_idx);
    CoupledRealisation out;

    out.y_last_pre_window = (history.type == YHistory::kind::silent)
                                ? window.tau - history.silent_length
                                : window.tau - stream.exponential(p.lambda_y);

    std::vector<double> y_events;
    double t = window.tau;
    while (true) {
        t += stream.exponential(p.lambda_y);
        if (t > window.t_end) break;
        y_events.push_back(t);
    }
    out.y = EventPath(window, std::move(y_events));

    // history-conditional intensity queried at nondecreasing times
    std::size_t yi = 0;
    const auto& ye = out.y.events;
    auto lam = [&](double tq, std::span<const double>) {
        while (yi < ye.size() && ye[yi] <= tq) ++yi;
        const double last_y = (yi == 0) ? out.y_last_pre_window : ye[yi - 1];
        return p.intensity(tq - last_y);
    };
    out.x = simulate_thinning(lam, p.intensity_bound(), window, stream);
    return out;
}

}  // namespace ctinfo::simulate
