#pragma once
#include <functional>

#include "ctinfo/paths.hpp"
#include "ctinfo/simulate.hpp"

namespace ctinfo::closedform {

using paths::EventPath;
using simulate::EventDrivenParams;
using simulate::PhaseDist;
using simulate::RefractoryParams;

struct RefractoryForms {
    double lambda0;         // mean spike rate mu/(1+mu*delta_x)
    double memory_rate;     // mu*ln(1+mu*delta_x)/(1+mu*delta_x)
    double argmax_delta_x;  // (e-1)/mu
    double max_rate;        // mu/e
};

RefractoryForms refractory_closed_forms(double mu, double delta_x);

// Memory-utilisation rate density of the periodic event-driven model at time t
// (phase 0 drive): (c/delta_x)*ln(delta_x/(delta_x - c*(t - n*delta_y))) inside
// the spiking window, 0 outside.
double event_driven_mdot(double c, double delta_x, double delta_y, double t);

// Conditional and Markov-marginal intensities of the event-driven model with a
// known drive phase; t_x is the time of the last X spike (-inf when none).
double event_driven_lambda(const EventDrivenParams& p, double phase, double t_x, double t);
double event_driven_lambda0(const EventDrivenParams& p, double phase, double t);

struct EventDrivenReport {
    double m_ring;        // ergodic rate, phase-conditioned: (c + (1-c)ln(1-c))/delta_y
    double m_st;          // stationary-assumption rate: m_ring + overestimate + xi
    double overestimate;  // (c/delta_y)*ln(delta_y/delta_x)
    double xi;            // phase-density correction in [-overestimate, 0]
    std::function<double(double)> lambda0_of_t;  // periodic marginal intensity (phase 0)
    std::function<double(double)> mdot_of_t;     // periodic memory-rate density (phase 0)
};

EventDrivenReport event_driven_report(const EventDrivenParams& p);

// xi for an explicit phase density (delta and uniform handled analytically,
// tabulated by nested trapezoid on a grid of `grid_points` phase nodes with a
// half-grid convergence check at 1e-4 relative).
double xi_phase_correction(const EventDrivenParams& p, const PhaseDist& dist,
                           std::size_t grid_points = 2000);

// Drive-phase estimate from the minimal observed inter-spike interval: the
// second spike of the minimal pair marks the start of a spiking window, so the
// estimate is that time mod delta_y. Biased high on short paths.
double phase_recovery(const EventPath& x, double delta_x, double delta_y);

// Stationary mean spike rate of the coupled-spiking model: the conditional
// intensity averaged over the exponential law of the time since the last
// drive spike (Simpson over the bump, exact flat tail).
double coupled_markov_rate(const simulate::CoupledSpikingParams& p);

}  // namespace ctinfo::closedform
