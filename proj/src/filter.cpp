#include "ctinfo/filter.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "ctinfo/common.hpp"

namespace ctinfo::filter {

double FilterState::total_mass() const {
    double s = 0.0;
    for (double d : density) s += d;
    return s * h + mass_beyond;
}

void FilterState::validate() const {
    require(h > 0.0 && s_max > 0.0 && !density.empty(), "FilterState: malformed grid");
    for (double d : density)
        if (!(d >= 0.0)) throw numerical_error("FilterState: negative density");
    if (!(mass_beyond >= 0.0)) throw numerical_error("FilterState: negative tail mass");
    if (std::abs(total_mass() - 1.0) > 1e-6)
        throw numerical_error("FilterState: mass not conserved");
}

FilterState make_stationary_state(double lambda_y, double s_max, double h) {
    require(lambda_y > 0.0 && s_max > h && h > 0.0, "make_stationary_state: bad arguments");
    FilterState st;
    st.h = h;
    st.s_max = s_max;
    const auto n = static_cast<std::size_t>(std::llround(s_max / h));
    st.density.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double a = static_cast<double>(j) * h;
        const double mass = std::exp(-lambda_y * a) - std::exp(-lambda_y * (a + h));
        st.density[j] = mass / h;
    }
    st.mass_beyond = std::exp(-lambda_y * static_cast<double>(n) * h);
    st.validate();
    return st;
}

FilterState make_point_mass_state(double s0, double s_max, double h) {
    require(h > 0.0 && s_max > h, "make_point_mass_state: bad arguments");
    FilterState st;
    st.h = h;
    st.s_max = s_max;
    const auto n = static_cast<std::size_t>(std::llround(s_max / h));
    st.density.assign(n, 0.0);
    if (s0 >= s_max) {
        st.mass_beyond = 1.0;
    } else {
        st.mass_beyond = 0.0;
        const auto j = std::min(static_cast<std::size_t>(s0 / h), n - 1);
        st.density[j] = 1.0 / h;
    }
    st.validate();
    return st;
}

double lambda_bar(const FilterState& state, const IntensityGivenTy& intensity_given_ty) {
    double acc = 0.0;
    for (std::size_t j = 0; j < state.bins(); ++j)
        acc += state.density[j] * state.h * intensity_given_ty(state.center(j));
    acc += state.mass_beyond * intensity_given_ty(state.s_max + 0.5 * state.h);
    return acc / state.total_mass();
}

std::pair<FilterState, double> filter_predict(const FilterState& state, double dt_step,
                                              double lambda_y,
                                              const IntensityGivenTy& intensity_given_ty) {
    state.validate();
    require(lambda_y >= 0.0, "filter_predict: negative lambda_y");
    require(std::abs(dt_step - state.h) <= 1e-12 * state.h,
            "filter_predict: dt_step is forced equal to the grid step");
    const double dt = state.h;
    FilterState st = state;
    const std::size_t n = st.bins();

    // advect by one bin; the last bin ages into the flat tail
    st.mass_beyond += st.density[n - 1] * st.h;
    for (std::size_t j = n - 1; j > 0; --j) st.density[j] = st.density[j - 1];
    st.density[0] = 0.0;

    // Y renewal: mass lambda_y*dt of every bin relocates to t^y = 0
    const double total_before = st.total_mass();
    for (auto& d : st.density) d *= (1.0 - lambda_y * dt);
    st.mass_beyond *= (1.0 - lambda_y * dt);
    st.density[0] += lambda_y * dt * total_before / st.h;

    const double lam_bar = lambda_bar(st, intensity_given_ty);

    // no-spike survival reweighting, then renormalise
    for (std::size_t j = 0; j < n; ++j)
        st.density[j] *= std::exp(-intensity_given_ty(st.center(j)) * dt);
    st.mass_beyond *= std::exp(-intensity_given_ty(st.s_max + 0.5 * st.h) * dt);
    const double total = st.total_mass();
    if (!(total > 0.0)) throw numerical_error("filter_predict: posterior mass vanished");
    for (auto& d : st.density) d /= total;
    st.mass_beyond /= total;
    st.validate();
    return {std::move(st), lam_bar};
}

FilterState filter_update_at_x_spike(const FilterState& state,
                                     const IntensityGivenTy& intensity_given_ty) {
    state.validate();
    FilterState st = state;
    for (std::size_t j = 0; j < st.bins(); ++j) st.density[j] *= intensity_given_ty(st.center(j));
    st.mass_beyond *= intensity_given_ty(st.s_max + 0.5 * st.h);
    const double total = st.total_mass();
    if (!(total > 0.0))
        throw numerical_error("filter_update_at_x_spike: spike observed where the model "
                              "assigns zero intensity");
    for (auto& d : st.density) d /= total;
    st.mass_beyond /= total;
    st.validate();
    return st;
}

double default_s_max(const CoupledSpikingParams& p) { return p.t_cut + 5.0 / p.lambda_y; }

namespace {

// Long-run filter over a path. The sink receives (t, left, right) nodes in
// order: the start node, a node per grid step, and a double-valued node at
// each X event (pre-Bayes left, post-Bayes right).
//
// The optimized route keeps raw bin masses in a sliding block (head pointer
// instead of shifting), folds every uniform factor (renewal scaling, the flat
// exp(-lambda_base*dt) survival, renormalisation) into one scalar, and only
// touches the bins under the bump each step. The plain-ops route below it is
// the reference it is tested against.
template <class Sink>
void run_filter_reference(const EventPath& x, const CoupledSpikingParams& p, double h,
                          Sink&& sink) {
    const double t_begin = x.window.tau;
    const double t_end = x.window.t_end;
    const auto n_steps = static_cast<std::size_t>(std::ceil((t_end - t_begin) / h - 1e-9));
    auto eval = [&p](double s) { return p.intensity(s); };

    FilterState st = make_stationary_state(p.lambda_y, default_s_max(p), h);
    const double lam0 = lambda_bar(st, eval);
    sink(t_begin, lam0, lam0);
    std::size_t ev = 0;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t_next = t_begin + static_cast<double>(k + 1) * h;
        auto [st2, lam] = filter_predict(st, h, p.lambda_y, eval);
        st = std::move(st2);
        const double t_close =
            (k + 1 == n_steps) ? std::numeric_limits<double>::infinity() : t_next + 1e-9;
        double left = lam;
        while (ev < x.events.size() && x.events[ev] <= t_close) {
            st = filter_update_at_x_spike(st, eval);
            const double post = lambda_bar(st, eval);
            sink(std::min(x.events[ev], t_next), left, post);
            left = post;
            ++ev;
        }
        sink(t_next, left, left);
    }
}

template <class Sink>
void run_filter_fast(const EventPath& x, const CoupledSpikingParams& p, double h, Sink&& sink) {
    const double t_begin = x.window.tau;
    const double t_end = x.window.t_end;
    const auto n_steps = static_cast<std::size_t>(std::ceil((t_end - t_begin) / h - 1e-9));
    const double s_max = default_s_max(p);
    const auto n = static_cast<std::size_t>(std::llround(s_max / h));
    const auto m = std::min(n, static_cast<std::size_t>(std::llround(p.t_cut / h)));
    const std::size_t chunk = 4096;

    // per-bin tables over the bump region (centers below t_cut)
    std::vector<double> dl(m), surv(m), ratio(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double lam = p.intensity((static_cast<double>(j) + 0.5) * h);
        dl[j] = lam - p.lambda_base;
        surv[j] = std::exp(-dl[j] * h);
        ratio[j] = lam / p.lambda_base;
    }

    std::vector<double> w(n + chunk, 0.0);
    std::size_t head = chunk;
    double beyond = 0.0;   // raw tail mass (same scale as w)
    double scale = 1.0;    // true mass of bin j is w[head+j]*scale
    double raw_sum = 0.0;  // active bins plus `beyond`, tracked incrementally
    {
        const FilterState st = make_stationary_state(p.lambda_y, s_max, h);
        for (std::size_t j = 0; j < n; ++j) w[head + j] = st.density[j] * h;
        beyond = st.mass_beyond;
        raw_sum = st.total_mass();
    }

    auto lam_bar_now = [&]() {
        double acc = 0.0;
        const double* ww = &w[head];
        for (std::size_t j = 0; j < m; ++j) acc += ww[j] * dl[j];
        return p.lambda_base + acc / raw_sum;
    };

    sink(t_begin, lam_bar_now(), lam_bar_now());
    std::size_t ev = 0;
    const double renew = p.lambda_y * h;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t_next = t_begin + static_cast<double>(k + 1) * h;

        // advect: tail bin joins the flat region, head moves down one slot;
        // renewal: the uniform (1-renew) factor folds into the scale, the
        // relocated mass becomes the fresh front bin
        beyond += w[head + n - 1];
        --head;
        scale *= (1.0 - renew);
        const double front = renew / scale;
        w[head] = front;
        raw_sum += front;

        const double lam = lam_bar_now();

        // survival: only the bump region differs from the flat factor, which
        // cancels against the renormalisation
        double delta = 0.0;
        double* ww = &w[head];
        for (std::size_t j = 0; j < m; ++j) {
            const double before = ww[j];
            const double after = before * surv[j];
            ww[j] = after;
            delta += after - before;
        }
        raw_sum += delta;
        if (!(raw_sum > 0.0)) throw numerical_error("marginal_intensity_trace: mass vanished");
        scale = 1.0 / raw_sum;  // renormalise: true total = scale*raw_sum = 1

        const double t_close =
            (k + 1 == n_steps) ? std::numeric_limits<double>::infinity() : t_next + 1e-9;
        double left = lam;
        while (ev < x.events.size() && x.events[ev] <= t_close) {
            // Bayes: multiply by lambda(s); the flat-region factor lambda_base
            // cancels in the renormalisation
            if (!(lam_bar_now() > 0.0))
                throw numerical_error("marginal_intensity_trace: spike observed where the "
                                      "model assigns zero intensity");
            double bdelta = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double before = w[head + j];
                const double after = before * ratio[j];
                w[head + j] = after;
                bdelta += after - before;
            }
            raw_sum += bdelta;
            if (!(raw_sum > 0.0))
                throw numerical_error("marginal_intensity_trace: mass vanished");
            scale = 1.0 / raw_sum;
            const double post = lam_bar_now();
            sink(std::min(x.events[ev], t_next), left, post);
            left = post;
            ++ev;
        }
        sink(t_next, left, left);

        if (head == 0 || ((k & (chunk - 1)) == chunk - 1)) {
            // slide the block back, refresh the scale, recompute the raw sum
            if (head == 0) {
                std::memmove(&w[chunk], &w[0], n * sizeof(double));
                std::fill(&w[0], &w[chunk], 0.0);
                head = chunk;
            }
            for (std::size_t j = 0; j < n; ++j) w[head + j] *= scale;
            beyond *= scale;
            scale = 1.0;
            raw_sum = beyond;
            for (std::size_t j = 0; j < n; ++j) raw_sum += w[head + j];
        }
    }
}

struct TraceSink {
    IntensityTrace* tr;
    void operator()(double t, double l, double r) const { tr->append(t, l, r); }
};

struct AverageSink {
    double from;  // averaging starts here (burn-in before it is skipped)
    double prev_t = 0.0, prev_right = 0.0;
    double acc = 0.0;
    bool started = false;
    void operator()(double t, double l, double r) {
        if (started && t > prev_t) {
            double a = prev_t, va = prev_right;
            if (t > from && a < from) {  // clip the segment at `from`
                va = prev_right + (l - prev_right) * (from - prev_t) / (t - prev_t);
                a = from;
            }
            if (t > from) acc += 0.5 * (va + l) * (t - a);
        }
        started = true;
        prev_t = t;
        prev_right = r;
    }
};

struct ProbeSink {
    const std::vector<double>* probes;
    std::vector<double>* out;
    std::size_t idx = 0;
    double prev_t = 0.0, prev_right = 0.0;
    bool started = false;
    void operator()(double t, double l, double r) {
        if (started) {
            while (idx < probes->size() && (*probes)[idx] <= t) {
                const double tp = (*probes)[idx];
                double v = l;
                if (t > prev_t && tp < t)
                    v = prev_right + (l - prev_right) * (tp - prev_t) / (t - prev_t);
                (*out)[idx] = v;
                ++idx;
            }
        }
        started = true;
        prev_t = t;
        prev_right = r;
    }
};

void check_run_args(const CoupledSpikingParams& p, double grid_step) {
    p.validate();
    require(grid_step > 0.0 && grid_step < p.t_cut, "filter run: bad grid step");
}

}  // namespace

IntensityTrace marginal_intensity_trace(const EventPath& x, const CoupledSpikingParams& model,
                                        double grid_step) {
    check_run_args(model, grid_step);
    IntensityTrace tr;
    tr.jump_markers = x.events;
    run_filter_fast(x, model, grid_step, TraceSink{&tr});
    return tr;
}

IntensityTrace filter_run_reference(const EventPath& x, const CoupledSpikingParams& model,
                                    double grid_step) {
    check_run_args(model, grid_step);
    IntensityTrace tr;
    tr.jump_markers = x.events;
    run_filter_reference(x, model, grid_step, TraceSink{&tr});
    return tr;
}

IntensityTrace conditional_intensity_trace(const simulate::CoupledRealisation& r,
                                           const CoupledSpikingParams& model, double grid_step) {
    model.validate();
    require(grid_step > 0.0, "conditional_intensity_trace: bad grid step");
    const auto& w = r.x.window;
    std::vector<std::pair<double, int>> knots;  // (time, kind): 0 grid, 1 y spike, 2 x spike
    const auto n_steps = static_cast<std::size_t>(std::ceil((w.t_end - w.tau) / grid_step - 1e-9));
    for (std::size_t k = 0; k <= n_steps; ++k)
        knots.emplace_back(std::min(w.tau + static_cast<double>(k) * grid_step, w.t_end), 0);
    for (double t : r.y.events) knots.emplace_back(t, 1);
    for (double t : r.x.events) knots.emplace_back(t, 2);
    std::sort(knots.begin(), knots.end());

    IntensityTrace tr;
    tr.jump_markers = r.x.events;
    const auto& ye = r.y.events;
    auto last_y_before = [&](double t) {
        auto it = std::lower_bound(ye.begin(), ye.end(), t);
        return (it == ye.begin()) ? r.y_last_pre_window : *(it - 1);
    };
    for (const auto& [t, kind] : knots) {
        const double left = model.intensity(t - last_y_before(t));
        const double right = (kind == 1) ? model.intensity(0.0) : left;
        if (!tr.times.empty() && tr.times.back() == t && tr.right.back() == left && kind != 1)
            continue;  // duplicate grid/x knot at the same time
        tr.append(t, left, right);
    }
    return tr;
}

double filter_average_intensity(const EventPath& x, const CoupledSpikingParams& model,
                                double grid_step) {
    check_run_args(model, grid_step);
    AverageSink sink;
    sink.from = x.window.t0;
    run_filter_fast(x, model, grid_step, sink);
    return sink.acc / (x.window.t_end - x.window.t0);
}

std::vector<double> filter_intensity_at(const EventPath& x, const CoupledSpikingParams& model,
                                        double grid_step, const std::vector<double>& probes) {
    check_run_args(model, grid_step);
    for (std::size_t i = 0; i < probes.size(); ++i) {
        require(i == 0 || probes[i] > probes[i - 1],
                "filter_intensity_at: probes must be ascending");
        require(probes[i] >= x.window.tau && probes[i] <= x.window.t_end,
                "filter_intensity_at: probe outside the window");
    }
    std::vector<double> out(probes.size(), 0.0);
    ProbeSink sink;
    sink.probes = &probes;
    sink.out = &out;
    run_filter_fast(x, model, grid_step, sink);
    return out;
}

}  // namespace ctinfo::filter
