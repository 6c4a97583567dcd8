#pragma once
#include <functional>
#include <utility>
#include <vector>

#include "ctinfo/paths.hpp"
#include "ctinfo/simulate.hpp"

namespace ctinfo::filter {

using paths::EventPath;
using paths::IntensityTrace;
using simulate::CoupledSpikingParams;

// Discretised posterior over the time since the last (unobserved) Y spike.
// density holds per-unit values on bins [j*h, (j+1)*h); intensities are
// evaluated at bin centers. mass_beyond is P(t^y > s_max), where the
// conditional X intensity must be flat.
struct FilterState {
    double h = 0.0;
    double s_max = 0.0;
    std::vector<double> density;
    double mass_beyond = 0.0;

    std::size_t bins() const { return density.size(); }
    double center(std::size_t j) const { return (static_cast<double>(j) + 0.5) * h; }
    double total_mass() const;
    void validate() const;  // total mass 1 +- 1e-6, density >= 0
};

using IntensityGivenTy = std::function<double(double)>;

// Stationary renewal prior: t^y ~ Exp(lambda_y), exact per bin.
FilterState make_stationary_state(double lambda_y, double s_max, double h);

FilterState make_point_mass_state(double s0, double s_max, double h);

// One between-event step in the fixed order advect / renew / survive with
// renormalisation; dt_step is forced equal to h (index-shift advection).
// Returns the updated state and lambda_bar = E[lambda(t^y)] evaluated after
// the renewal relocation, before the no-spike reweighting.
std::pair<FilterState, double> filter_predict(const FilterState& state, double dt_step,
                                              double lambda_y,
                                              const IntensityGivenTy& intensity_given_ty);

// Bayes reweighting at an observed X spike: density <- lambda * density / Z.
FilterState filter_update_at_x_spike(const FilterState& state,
                                     const IntensityGivenTy& intensity_given_ty);

double lambda_bar(const FilterState& state, const IntensityGivenTy& intensity_given_ty);

// Default grid extent: beyond t_cut the intensity is flat, so the posterior
// tail only matters through its mass.
double default_s_max(const CoupledSpikingParams& p);

// Full-history conditional intensity of X for the coupled-spiking model,
// obtained by filtering over the X path. Knots at every grid node; jump
// markers (and left/right values) at the X events. The optimized runner;
// filter_run_reference computes the same trace through the plain ops.
IntensityTrace marginal_intensity_trace(const EventPath& x, const CoupledSpikingParams& model,
                                        double grid_step);
IntensityTrace filter_run_reference(const EventPath& x, const CoupledSpikingParams& model,
                                    double grid_step);

// Source-conditioned intensity lambda(t - last Y spike) along a realisation:
// grid nodes every grid_step plus exact double-valued knots at Y spikes and
// exact values at X spikes (the jump-evaluation points).
IntensityTrace conditional_intensity_trace(const simulate::CoupledRealisation& r,
                                           const CoupledSpikingParams& model, double grid_step);

// Streaming variants for horizons where the dense trace would not fit:
// time-average of the filtered intensity over [t0, t_end], and its value at
// given probe times (ascending).
double filter_average_intensity(const EventPath& x, const CoupledSpikingParams& model,
                                double grid_step);
std::vector<double> filter_intensity_at(const EventPath& x, const CoupledSpikingParams& model,
                                        double grid_step, const std::vector<double>& probes);

}  // namespace ctinfo::filter
