#include "ctinfo/infomeasures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "ctinfo/common.hpp"

namespace ctinfo::infomeasures {

namespace {

// union of knots and events over [t0, t_end], with nodes duplicated wherever
// either trace or an event introduces a discontinuity
struct GridNode {
    double t;
    bool post;  // second copy of a duplicated node
};

std::vector<GridNode> union_grid(const EventPath& x, const IntensityTrace& a,
                                 const IntensityTrace& b) {
    const double t0 = x.window.t0, t1 = x.window.t_end;
    std::vector<double> ts;
    ts.push_back(t0);
    ts.push_back(t1);
    auto add = [&](const std::vector<double>& src) {
        for (double t : src)
            if (t > t0 && t < t1) ts.push_back(t);
    };
    add(a.times);
    add(b.times);
    add(x.events);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    std::vector<GridNode> nodes;
    nodes.reserve(ts.size() * 2);
    std::size_t ev = 0;
    for (double t : ts) {
        while (ev < x.events.size() && x.events[ev] < t) ++ev;
        const bool is_event = ev < x.events.size() && x.events[ev] == t;
        const bool jump_a = t > t0 && t < t1 && a.eval_left(t) != a.eval_right(t);
        const bool jump_b = t > t0 && t < t1 && b.eval_left(t) != b.eval_right(t);
        nodes.push_back({t, false});
        if (is_event || jump_a || jump_b) nodes.push_back({t, true});
    }
    return nodes;
}

}  // namespace

InfoTrace pathwise_ratio(const EventPath& x, const IntensityTrace& num,
                         const IntensityTrace& den, Channel channel) {
    num.validate();
    den.validate();
    const double t0 = x.window.t0, t1 = x.window.t_end;
    require(num.t_begin() <= t0 && num.t_end() >= t1 && den.t_begin() <= t0 && den.t_end() >= t1,
            "pathwise_ratio: traces must cover the observation window");

    const auto nodes = union_grid(x, num, den);
    const std::size_t n = nodes.size();
    InfoTrace tr;
    tr.times.resize(n);
    tr.rate_m.assign(n, 0.0);
    tr.rate_t.assign(n, 0.0);
    tr.cumulative_m.assign(n, 0.0);
    tr.cumulative_t.assign(n, 0.0);

    auto& rate = (channel == Channel::memory) ? tr.rate_m : tr.rate_t;
    auto& cum = (channel == Channel::memory) ? tr.cumulative_m : tr.cumulative_t;

    std::size_t ev = 0;
    while (ev < x.events.size() && x.events[ev] <= t0) ++ev;  // functional lives on (t0, t1]
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = nodes[i].t;
        tr.times[i] = t;
        const double vn = nodes[i].post ? num.eval_right(t) : num.eval_left(t);
        const double vd = nodes[i].post ? den.eval_right(t) : den.eval_left(t);
        rate[i] = vd - vn;
        if (i > 0) {
            const double dt = t - nodes[i - 1].t;
            acc += 0.5 * (rate[i] + rate[i - 1]) * dt;
        }
        if (nodes[i].post && ev < x.events.size() && x.events[ev] == t) {
            const double ln_num = num.eval_left(t);
            const double ln_den = den.eval_left(t);
            if (!(ln_num > 0.0))
                throw numerical_error("pathwise_ratio: event observed where the conditioned "
                                      "intensity vanishes");
            if (!(ln_den > 0.0))
                throw numerical_error("pathwise_ratio: divergent per-event contribution; "
                                      "the measures are not equivalent");
            const double d = std::log(ln_num / ln_den);
            tr.jumps.push_back({t, channel == Channel::memory ? d : 0.0,
                                channel == Channel::transfer ? d : 0.0});
            acc += d;
            ++ev;
        }
        cum[i] = acc;
    }
    return tr;
}

InfoTrace pathwise_memory(const EventPath& x, const IntensityTrace& lambda_full,
                          const IntensityTrace& lambda_markov) {
    return pathwise_ratio(x, lambda_full, lambda_markov, Channel::memory);
}

InfoTrace pathwise_transfer(const EventPath& x, const IntensityTrace& lambda_cond,
                            const IntensityTrace& lambda_full) {
    return pathwise_ratio(x, lambda_cond, lambda_full, Channel::transfer);
}

namespace {
RateEstimate jump_rate_core(const EventPath& x,
                            const std::function<double(double)>& num_left,
                            const std::function<double(double)>& den_left,
                            const IntensityTrace* num_tr, const IntensityTrace* den_tr,
                            bool include_integral) {
    const double t0 = x.window.t0, t1 = x.window.t_end;
    constexpr std::size_t n_batches = 20;
    const double batch_len = (t1 - t0) / static_cast<double>(n_batches);

    RateEstimate out;
    out.horizon = t1 - t0;
    std::vector<double> batch_sum(n_batches, 0.0);
    for (double e : x.events) {
        if (e <= t0 || e > t1) continue;
        ++out.n_events;
        const double vn = num_left(e);
        const double vd = den_left(e);
        if (!(vn > 0.0))
            throw numerical_error("ergodic_jump_rate: event observed where the conditioned "
                                  "intensity vanishes");
        if (!(vd > 0.0))
            throw numerical_error("ergodic_jump_rate: divergent per-event contribution; "
                                  "the measures are not equivalent");
        auto b = static_cast<std::size_t>((e - t0) / batch_len);
        if (b >= n_batches) b = n_batches - 1;
        batch_sum[b] += std::log(vn / vd);
    }
    if (out.n_events < n_batches)
        throw insufficient_data("ergodic_jump_rate: horizon too short for 20 batches");

    if (include_integral) {
        for (std::size_t b = 0; b < n_batches; ++b) {
            const double a = t0 + static_cast<double>(b) * batch_len;
            batch_sum[b] -= num_tr->integral(a, a + batch_len) - den_tr->integral(a, a + batch_len);
        }
    }

    // first batch is burn-in
    double mean = 0.0;
    for (std::size_t b = 1; b < n_batches; ++b) mean += batch_sum[b] / batch_len;
    mean /= static_cast<double>(n_batches - 1);
    double ss = 0.0;
    for (std::size_t b = 1; b < n_batches; ++b) {
        const double r = batch_sum[b] / batch_len;
        ss += (r - mean) * (r - mean);
    }
    out.value = mean;
    out.stderr_ = std::sqrt(ss / static_cast<double>((n_batches - 1) * (n_batches - 2)));
    return out;
}
}  // namespace

RateEstimate ergodic_jump_rate(const EventPath& x, const IntensityTrace& num,
                               const IntensityTrace& den, bool include_integral) {
    num.validate();
    den.validate();
    require(num.t_begin() <= x.window.t0 && num.t_end() >= x.window.t_end &&
                den.t_begin() <= x.window.t0 && den.t_end() >= x.window.t_end,
            "ergodic_jump_rate: traces must cover the observation window");
    return jump_rate_core(
        x, [&num](double t) { return num.eval_left(t); },
        [&den](double t) { return den.eval_left(t); }, &num, &den, include_integral);
}

RateEstimate ergodic_jump_rate(const EventPath& x,
                               const std::function<double(double)>& num_left,
                               const std::function<double(double)>& den_left) {
    return jump_rate_core(x, num_left, den_left, nullptr, nullptr, false);
}

RateEstimate ergodic_memory_rate(const EventPath& x, const IntensityTrace& lambda_full,
                                 const IntensityTrace& lambda_markov, bool include_integral) {
    return ergodic_jump_rate(x, lambda_full, lambda_markov, include_integral);
}

RateEstimate ergodic_transfer_rate(const EventPath& x, const IntensityTrace& lambda_cond,
                                   const IntensityTrace& lambda_full, bool include_integral) {
    return ergodic_jump_rate(x, lambda_cond, lambda_full, include_integral);
}

RateEstimate truncated_memory_rate(const EventPath& x, const IntensityTrace& lambda_trunc_s,
                                   const IntensityTrace& lambda_markov) {
    return ergodic_jump_rate(x, lambda_trunc_s, lambda_markov, false);
}

IntensityTrace refractory_intensity(const EventPath& x, const RefractoryParams& p) {
    p.validate();
    IntensityTrace tr;
    tr.jump_markers = x.events;
    const double t0 = x.window.tau, t1 = x.window.t_end;
    tr.append(t0, p.mu, p.mu);
    double cur = p.mu;
    for (std::size_t i = 0; i < x.events.size(); ++i) {
        const double e = x.events[i];
        const double stop = (i + 1 < x.events.size()) ? std::min(x.events[i + 1], t1) : t1;
        tr.append(e, cur, 0.0);
        cur = 0.0;
        const double resume = e + p.delta_x;
        if (resume < stop) {
            tr.append(resume, 0.0, p.mu);
            cur = p.mu;
        }
    }
    tr.append(t1, cur, cur);
    return tr;
}

IntensityTrace refractory_markov_intensity(const EventPath& x, const RefractoryParams& p) {
    p.validate();
    return IntensityTrace::constant(x.window.tau, x.window.t_end, p.markov_rate());
}

IntensityTrace refractory_truncated_intensity(const EventPath& x, const RefractoryParams& p,
                                              double s) {
    p.validate();
    require(s >= 0.0, "refractory_truncated_intensity: s must be nonnegative");
    // With no event in [t-s, t) the renewal posterior over the age gives
    // mu/(1 + mu*(delta_x - s)); a visible last event pins the phase: 0 while
    // its age is below delta_x, mu afterwards. Once it leaves the window the
    // intensity reverts to the blind value even if the true age is < delta_x.
    const double blind = p.mu / (1.0 + p.mu * std::max(p.delta_x - s, 0.0));
    IntensityTrace tr;
    tr.jump_markers = x.events;
    const double t0 = x.window.tau, t1 = x.window.t_end;
    tr.append(t0, blind, blind);
    if (s == 0.0) {
        tr.append(t1, blind, blind);
        return tr;
    }
    double cur = blind;
    for (std::size_t i = 0; i < x.events.size(); ++i) {
        const double e = x.events[i];
        const double stop = (i + 1 < x.events.size()) ? std::min(x.events[i + 1], t1) : t1;
        tr.append(e, cur, 0.0);
        cur = 0.0;
        const double refr_end = e + std::min(s, p.delta_x);
        const double vis_end = e + s;
        if (refr_end < stop) {
            const double after = (s >= p.delta_x) ? p.mu : blind;
            tr.append(refr_end, 0.0, after);
            cur = after;
            if (s > p.delta_x && vis_end < stop) {
                tr.append(vis_end, p.mu, blind);
                cur = blind;
            }
        }
    }
    tr.append(t1, cur, cur);
    return tr;
}

ElusiveResult elusive_information(const EventPath& x, const IntensityTrace& lambda_full,
                                  const RefractoryParams& model, std::size_t s_grid) {
    model.validate();
    require(s_grid >= 2, "elusive_information: need at least two quadrature nodes");
    const IntensityTrace markov = refractory_markov_intensity(x, model);
    const double full_rate = ergodic_jump_rate(x, lambda_full, markov).value;

    ElusiveResult out;
    const double s_cut = model.delta_x;  // memory depth: the integrand vanishes beyond it
    if (s_cut == 0.0) return out;

    const double hs = s_cut / static_cast<double>(s_grid);
    double prev = full_rate;  // integrand at s = 0 (Mdot^(0) = 0)
    double integral = 0.0;
    for (std::size_t i = 1; i <= s_grid; ++i) {
        const double s = static_cast<double>(i) * hs;
        const auto trunc = refractory_truncated_intensity(x, model, s);
        const double def = full_rate - ergodic_jump_rate(x, trunc, markov).value;
        integral += 0.5 * (prev + def) * hs;
        prev = def;
        if (i == s_grid) out.integrand_at_cut = def;
    }
    out.value = integral;
    const double tol = 1e-9 * (1.0 + std::abs(full_rate));
    out.divergence_warning = std::abs(out.integrand_at_cut) > tol;
    return out;
}

std::vector<BinnedRow> binned_storage_demo(const EventPath& x, const std::vector<double>& dt_bins,
                                           std::size_t k) {
    require(k >= 1 && k <= 255, "binned_storage_demo: k must be in [1, 255]");
    std::vector<BinnedRow> rows;
    const double t0 = x.window.t0, t1 = x.window.t_end;
    for (double dt : dt_bins) {
        require(dt > 0.0, "binned_storage_demo: bin width must be positive");
        const auto n_bins = static_cast<std::size_t>((t1 - t0) / dt);
        require(n_bins > k + 1, "binned_storage_demo: horizon too short for the bin width");

        // 0/1 per bin; histories keyed by the offsets of spiking bins inside
        // the trailing k-bin window (at most 8 of them packed into 64 bits)
        std::vector<std::uint8_t> bits(n_bins, 0);
        for (double e : x.events) {
            if (e < t0 || e >= t0 + static_cast<double>(n_bins) * dt) continue;
            const auto b = static_cast<std::size_t>((e - t0) / dt);
            if (bits[b]) throw numerical_error("binned_storage_demo: two events in one bin");
            bits[b] = 1;
        }

        std::unordered_map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> counts;
        std::uint64_t total = 0, total_spike = 0;
        std::vector<std::size_t> window_spikes;
        for (std::size_t i = k; i < n_bins; ++i) {
            window_spikes.clear();
            for (std::size_t j = i - k; j < i; ++j)
                if (bits[j]) window_spikes.push_back(i - j);  // offset back from the target bin
            require(window_spikes.size() <= 8,
                    "binned_storage_demo: more than 8 events per history window");
            std::uint64_t key = 0;
            for (std::size_t off : window_spikes) key = (key << 8) | (off & 0xff);
            auto& c = counts[key];
            if (bits[i]) {
                ++c.second;
                ++total_spike;
            } else {
                ++c.first;
            }
            ++total;
        }

        const double p1 = static_cast<double>(total_spike) / static_cast<double>(total);
        const double p0 = 1.0 - p1;
        double info = 0.0;
        for (const auto& [key, c] : counts) {
            const double nh = static_cast<double>(c.first + c.second);
            if (c.first > 0) {
                const double pc = static_cast<double>(c.first) / nh;
                info += static_cast<double>(c.first) * std::log(pc / p0);
            }
            if (c.second > 0) {
                const double pc = static_cast<double>(c.second) / nh;
                info += static_cast<double>(c.second) * std::log(pc / p1);
            }
        }
        info /= static_cast<double>(total);
        rows.push_back({dt, k, info / dt});
    }
    return rows;
}

}  // namespace ctinfo::infomeasures
