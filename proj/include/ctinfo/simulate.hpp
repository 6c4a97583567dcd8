#pragma once
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ctinfo/paths.hpp"
#include "ctinfo/rng.hpp"

namespace ctinfo::simulate {

using paths::EventPath;
using paths::TimeWindow;

struct RefractoryParams {
    double mu = 1.0;       // base rate outside the refractory period (1/s)
    double delta_x = 0.0;  // refractory duration (s)
    void validate() const;
    double markov_rate() const { return mu / (1.0 + mu * delta_x); }
};

// Phase distribution for the periodic drive: a point mass, uniform on its
// period, or a tabulated density on [0, delta_y).
struct PhaseDist {
    enum class kind { delta, uniform, tabulated } type = kind::delta;
    double a = 0.0;                 // delta location
    std::vector<double> density;    // tabulated values on a uniform grid over [0, delta_y)
    static PhaseDist delta_at(double a);
    static PhaseDist uniform_phase();
    static PhaseDist tabulated(std::vector<double> density);
};

struct EventDrivenParams {
    double c = 0.5;        // spike probability per drive window
    double delta_x = 0.1;  // spike window length == refractory length (s)
    double delta_y = 1.0;  // drive period (s)
    PhaseDist phase_dist = PhaseDist::delta_at(0.0);
    void validate() const;  // needs 0 <= c <= 1 and 2*delta_x < delta_y
};

struct CoupledSpikingParams {
    double lambda_y = 1.0;     // drive rate (1/s)
    double lambda_base = 0.5;  // baseline X rate (1/s)
    double m = 5.0;            // bump amplitude (1/s)
    double sigma = 0.1;        // bump width (s)
    double t_cut = 1.0;        // dependence cutoff (s)

    void validate() const;
    // conditional X rate as a function of the time since the last Y spike;
    // continuous at 0 and t_cut by construction of the offset term
    double intensity(double t_since_y) const;
    double intensity_bound() const { return lambda_base + m; }
};

// How the Y history before the window start is fixed for the coupled model.
struct YHistory {
    enum class kind { silent, stationary } type = kind::silent;
    double silent_length = 1.0;  // no Y spike in [t0 - L, t0)
    static YHistory silent(double length);
    static YHistory stationary();
};

// Ogata-style thinning under a constant dominating rate. `intensity(t, past)`
// receives the accepted events so far (ascending); it is queried at
// nondecreasing times. Throws numerical_error if it ever exceeds `bound`.
EventPath simulate_thinning(
    const std::function<double(double, std::span<const double>)>& intensity, double bound,
    TimeWindow window, rng::Stream& stream);

EventPath simulate_thinning(
    const std::function<double(double, std::span<const double>)>& intensity, double bound,
    TimeWindow window, std::uint64_t seed, std::uint64_t stream = 0);

EventPath simulate_refractory(const RefractoryParams& p, TimeWindow window, std::uint64_t seed,
                               std::uint64_t stream = 0);

struct EventDrivenRealisation {
    EventPath x;
    EventPath y;
    double phase = 0.0;
};

// Y is the deterministic periodic train shifted by a phase drawn from
// phase_dist; X spikes at most once per period, uniformly inside the window,
// by direct inverse-CDF sampling (exact, and well defined at c = 1 where the
// conditional rate is unbounded).
EventDrivenRealisation simulate_event_driven(const EventDrivenParams& p, TimeWindow window,
                                             std::uint64_t seed, std::uint64_t stream = 0);

struct CoupledRealisation {
    EventPath x;
    EventPath y;               // Y spikes on [tau, t_end]
    double y_last_pre_window;  // most recent Y spike before tau, fixed by YHistory
};

CoupledRealisation simulate_coupled_spiking(const CoupledSpikingParams& p, TimeWindow window,
                                            std::uint64_t seed,
                                            YHistory history = YHistory::silent(1.0),
                                            std::uint64_t stream = 0);

}  // namespace ctinfo::simulate
