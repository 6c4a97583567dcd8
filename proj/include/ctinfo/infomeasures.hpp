#pragma once
#include <cstddef>
#include <functional>
#include <vector>

#include "ctinfo/paths.hpp"
#include "ctinfo/simulate.hpp"

namespace ctinfo::infomeasures {

using paths::EventPath;
using paths::InfoTrace;
using paths::IntensityTrace;
using simulate::RefractoryParams;

struct RateEstimate {
    double value = 0.0;   // nats/s
    double stderr_ = 0.0; // batch-means standard error
    std::size_t n_events = 0;
    double horizon = 0.0;
};

enum class Channel { memory, transfer };

// Pathwise log-likelihood-ratio functional of the numerator measure against
// the denominator one, on [t0, t_end]: jump ln(num/den) at each event (left
// limits; pre-event history), continuous rate den - num in between. Traces
// must cover the window; the output grid is the union of both knot sets and
// the event times, with duplicated nodes at discontinuities.
InfoTrace pathwise_ratio(const EventPath& x, const IntensityTrace& num,
                         const IntensityTrace& den, Channel channel);

// Memory: num = full-history intensity, den = Markov-marginal intensity.
InfoTrace pathwise_memory(const EventPath& x, const IntensityTrace& lambda_full,
                          const IntensityTrace& lambda_markov);

// Transfer: num = source-conditioned intensity, den = full (marginal) one.
InfoTrace pathwise_transfer(const EventPath& x, const IntensityTrace& lambda_cond,
                            const IntensityTrace& lambda_full);

// Ergodic rate of the jump terms ln(num/den) over (t0, t_end]. The waiting-time
// integral has zero mean, so it is omitted by default (variance reduction);
// include_integral retains it for the zero-mean check itself. Standard error by
// batch means over 20 equal batches with the first discarded.
RateEstimate ergodic_jump_rate(const EventPath& x, const IntensityTrace& num,
                               const IntensityTrace& den, bool include_integral = false);

// Same estimator with pre-event intensities supplied as functions of the event
// time (queried in ascending order), for horizons where a dense trace would
// not fit in memory. Jump terms only.
RateEstimate ergodic_jump_rate(const EventPath& x,
                               const std::function<double(double)>& num_left,
                               const std::function<double(double)>& den_left);

RateEstimate ergodic_memory_rate(const EventPath& x, const IntensityTrace& lambda_full,
                                 const IntensityTrace& lambda_markov,
                                 bool include_integral = false);

RateEstimate ergodic_transfer_rate(const EventPath& x, const IntensityTrace& lambda_cond,
                                   const IntensityTrace& lambda_full,
                                   bool include_integral = false);

// Rate of the ln(lambda^(s)/lambda^0) jump terms, lambda^(s) conditioning on
// the last s seconds of history only.
RateEstimate truncated_memory_rate(const EventPath& x, const IntensityTrace& lambda_trunc_s,
                                   const IntensityTrace& lambda_markov);

// --- analytic intensity traces for renewal models ---------------------------

// Full-history intensity of the refractory model along a path: mu outside the
// refractory windows, 0 inside. Exact piecewise-constant trace.
IntensityTrace refractory_intensity(const EventPath& x, const RefractoryParams& p);

// Markov-marginal (constant) intensity of the refractory model.
IntensityTrace refractory_markov_intensity(const EventPath& x, const RefractoryParams& p);

// Truncated-history intensity: with no event visible in the trailing window of
// length s the renewal posterior gives mu/(1 + mu*max(delta_x - s, 0)); a
// visible last event pins the refractory state exactly.
IntensityTrace refractory_truncated_intensity(const EventPath& x, const RefractoryParams& p,
                                              double s);

struct ElusiveResult {
    double value = 0.0;           // integral of (Mdot - Mdot^(s)) over s
    double integrand_at_cut = 0.0;
    bool divergence_warning = false;
};

// Numeric integral of the truncated-rate deficit over s in [0, s*], where
// s* = delta_x is the model's memory depth; the integrand must vanish there.
ElusiveResult elusive_information(const EventPath& x, const IntensityTrace& lambda_full,
                                  const RefractoryParams& model, std::size_t s_grid = 64);

struct BinnedRow {
    double dt = 0.0;
    std::size_t k = 0;
    double estimate = 0.0;  // plug-in binned estimate divided by dt
};

// The naive time-binned storage-rate scheme: 0/1 bins of width dt, plug-in
// probabilities over k-bin histories, estimate divided by dt. Demonstrates
// that the scheme approximates the memory-utilisation rate, not a storage
// rate. Errors if any bin holds two events.
std::vector<BinnedRow> binned_storage_demo(const EventPath& x, const std::vector<double>& dt_bins,
                                           std::size_t k);

}  // namespace ctinfo::infomeasures
