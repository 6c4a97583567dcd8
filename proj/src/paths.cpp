#include "ctinfo/paths.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ctinfo/common.hpp"

namespace ctinfo::paths {

TimeWindow::TimeWindow(double tau_, double t0_, double t_end_)
    : tau(tau_), t0(t0_), t_end(t_end_) {
    require(std::isfinite(tau) && std::isfinite(t0) && std::isfinite(t_end),
            "TimeWindow: times must be finite");
    require(tau <= t0 && t0 < t_end, "TimeWindow: need tau <= t0 < t_end");
}

EventPath::EventPath(TimeWindow w, std::vector<double> ev)
    : window(w), events(std::move(ev)) {
    for (std::size_t i = 0; i < events.size(); ++i) {
        require(events[i] >= window.tau && events[i] <= window.t_end,
                "EventPath: event outside [tau, t_end]");
        require(i == 0 || events[i] > events[i - 1],
                "EventPath: event times must be strictly increasing");
    }
}

std::size_t EventPath::count_in(double a, double b) const {
    auto lo = std::upper_bound(events.begin(), events.end(), a);
    auto hi = std::upper_bound(events.begin(), events.end(), b);
    return static_cast<std::size_t>(hi - lo);
}

StatePath::StatePath(TimeWindow w, int s0, std::vector<std::pair<double, int>> tr)
    : window(w), initial_state(s0), transitions(std::move(tr)) {
    int prev = initial_state;
    double prev_t = window.tau;
    bool first = true;
    for (const auto& [t, s] : transitions) {
        require(t >= window.tau && t <= window.t_end, "StatePath: transition outside window");
        require(first ? t >= prev_t : t > prev_t, "StatePath: times must be strictly increasing");
        require(s != prev, "StatePath: consecutive states must differ");
        prev = s;
        prev_t = t;
        first = false;
    }
}

int StatePath::state_before(double t) const {
    require(t >= window.tau && t <= window.t_end, "StatePath: query outside window");
    int s = initial_state;
    for (const auto& [tt, ss] : transitions) {
        if (tt >= t) break;  // x_t^- ignores a transition at exactly t
        s = ss;
    }
    return s;
}

SamplePath::SamplePath(TimeWindow w, double dt_, std::vector<double> x, std::vector<double> y)
    : window(w), dt(dt_), values_x(std::move(x)), values_y(std::move(y)) {
    require(dt > 0.0, "SamplePath: dt must be positive");
    require(values_x.size() == values_y.size(), "SamplePath: x/y length mismatch");
    require(!values_x.empty(), "SamplePath: empty sample vector");
    const double implied = window.t0 + static_cast<double>(values_x.size() - 1) * dt;
    require(std::abs(implied - window.t_end) <= 1e-9 * (1.0 + std::abs(window.t_end)),
            "SamplePath: sample count inconsistent with window/dt");
}

IntensityTrace IntensityTrace::constant(double t_begin, double t_end, double value) {
    IntensityTrace tr;
    tr.append(t_begin, value, value);
    tr.append(t_end, value, value);
    return tr;
}

void IntensityTrace::append(double t, double left_value, double right_value) {
    require(times.empty() || t >= times.back(), "IntensityTrace: knots must be sorted");
    times.push_back(t);
    left.push_back(left_value);
    right.push_back(right_value);
}

void IntensityTrace::validate() const {
    require(times.size() >= 2, "IntensityTrace: need at least two knots");
    require(times.size() == left.size() && times.size() == right.size(),
            "IntensityTrace: ragged arrays");
}

namespace {
// index of the last knot with time <= t (ties resolved to the last duplicate)
std::size_t knot_at_or_before(const std::vector<double>& times, double t) {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    require(it != times.begin(), "IntensityTrace: query before first knot");
    return static_cast<std::size_t>(it - times.begin()) - 1;
}
}  // namespace

double IntensityTrace::eval_left(double t) const {
    require(t >= times.front() && t <= times.back(), "IntensityTrace: query outside trace");
    auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it != times.end() && *it == t) return left[static_cast<std::size_t>(it - times.begin())];
    std::size_t i = knot_at_or_before(times, t);
    const double t0 = times[i], t1 = times[i + 1];
    const double w = (t1 == t0) ? 0.0 : (t - t0) / (t1 - t0);
    return right[i] + w * (left[i + 1] - right[i]);
}

double IntensityTrace::eval_right(double t) const {
    require(t >= times.front() && t <= times.back(), "IntensityTrace: query outside trace");
    std::size_t i = knot_at_or_before(times, t);
    if (times[i] == t) return right[i];
    const double t0 = times[i], t1 = times[i + 1];
    const double w = (t1 == t0) ? 0.0 : (t - t0) / (t1 - t0);
    return right[i] + w * (left[i + 1] - right[i]);
}

double IntensityTrace::integral(double a, double b) const {
    require(b >= a, "IntensityTrace: inverted integration range");
    require(a >= times.front() && b <= times.back(), "IntensityTrace: range outside trace");
    if (a == b) return 0.0;
    double acc = 0.0;
    std::size_t i = knot_at_or_before(times, a);
    double t_cur = a;
    double v_cur = eval_right(a);
    while (t_cur < b) {
        while (i + 1 < times.size() && times[i + 1] <= t_cur) ++i;
        const double t_next = std::min(times[i + 1], b);
        const double v_next = (t_next == times[i + 1]) ? left[i + 1] : eval_left(t_next);
        acc += 0.5 * (v_cur + v_next) * (t_next - t_cur);
        t_cur = t_next;
        v_cur = (t_next == times[i + 1]) ? right[i + 1] : v_next;
        if (t_next == times[i + 1]) ++i;
    }
    return acc;
}

double time_since_last_event(const EventPath& path, double t) {
    require(t >= path.window.tau && t <= path.window.t_end,
            "time_since_last_event: t outside window");
    auto it = std::upper_bound(path.events.begin(), path.events.end(), t);
    if (it == path.events.begin()) return infinite_duration;
    return t - *(it - 1);
}

namespace {
double reconstruct(const std::vector<double>& times, const std::vector<double>& rate,
                   const std::vector<InfoTrace::Jump>& jumps, bool memory_channel,
                   InfoTrace::quadrature conv, std::size_t upto) {
    double cum = 0.0;
    std::size_t j = 0;
    // jumps at or before times[upto]; a jump at exactly times[upto] counts only if
    // this is the post-jump duplicate (i.e. not the first node at that time)
    for (std::size_t i = 1; i <= upto; ++i) {
        const double dt = times[i] - times[i - 1];
        if (conv == InfoTrace::quadrature::trapezoid)
            cum += 0.5 * (rate[i] + rate[i - 1]) * dt;
        else
            cum += rate[i - 1] * dt;
        while (j < jumps.size() && jumps[j].time <= times[i] && jumps[j].time > times[i - 1]) {
            cum += memory_channel ? jumps[j].dm : jumps[j].dt;
            ++j;
        }
        // jump exactly at a duplicated node boundary: attribute to the zero-width step
        while (j < jumps.size() && jumps[j].time == times[i] && dt == 0.0) {
            cum += memory_channel ? jumps[j].dm : jumps[j].dt;
            ++j;
        }
    }
    return cum;
}
}  // namespace

bool verify_trace_consistency(const InfoTrace& trace, double tol) {
    const std::size_t n = trace.times.size();
    require(n >= 1 && trace.cumulative_m.size() == n && trace.cumulative_t.size() == n &&
                trace.rate_m.size() == n && trace.rate_t.size() == n,
            "verify_trace_consistency: malformed trace");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(trace.cumulative_m[i]) || !std::isfinite(trace.cumulative_t[i]))
            return false;
    }
    const double m = reconstruct(trace.times, trace.rate_m, trace.jumps, true,
                                 trace.convention, n - 1);
    const double t = reconstruct(trace.times, trace.rate_t, trace.jumps, false,
                                 trace.convention, n - 1);
    const double base_m = trace.cumulative_m.front();
    const double base_t = trace.cumulative_t.front();
    return std::abs(base_m + m - trace.final_m()) <= tol &&
           std::abs(base_t + t - trace.final_t()) <= tol;
}

// --- CSV -------------------------------------------------------------------

namespace {
std::ofstream open_out(const std::string& file) {
    std::ofstream out(file);
    require(out.good(), "cannot open output file: " + file);
    out.precision(17);
    return out;
}

void put_preamble(std::ofstream& out, const std::string& preamble) {
    if (!preamble.empty()) out << "# " << preamble << "\n";
}
}  // namespace

void write_events_csv(const std::string& file, const EventPath& path,
                      const std::string& preamble) {
    auto out = open_out(file);
    put_preamble(out, preamble);
    out << "t\n";
    for (double t : path.events) out << t << "\n";
}

EventPath read_events_csv(const std::string& file, TimeWindow window) {
    std::ifstream in(file);
    require(in.good(), "cannot open input file: " + file);
    std::vector<double> events;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line == "t") continue;
        events.push_back(std::stod(line));
    }
    return EventPath(window, std::move(events));
}

void write_samples_csv(const std::string& file, const SamplePath& path,
                       const std::string& preamble) {
    auto out = open_out(file);
    put_preamble(out, preamble);
    out << "t,x,y\n";
    for (std::size_t i = 0; i < path.values_x.size(); ++i) {
        const double t = path.window.t0 + static_cast<double>(i) * path.dt;
        out << t << "," << path.values_x[i] << "," << path.values_y[i] << "\n";
    }
}

void write_info_csv(const std::string& file, const std::string& jump_file,
                    const InfoTrace& trace, const std::string& preamble) {
    auto out = open_out(file);
    put_preamble(out, preamble);
    out << "t,M_cum,T_cum,M_rate_cont,T_rate_cont\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        out << trace.times[i] << "," << trace.cumulative_m[i] << "," << trace.cumulative_t[i]
            << "," << trace.rate_m[i] << "," << trace.rate_t[i] << "\n";
    }
    auto jout = open_out(jump_file);
    put_preamble(jout, preamble);
    jout << "t,dM_jump,dT_jump\n";
    for (const auto& j : trace.jumps) jout << j.time << "," << j.dm << "," << j.dt << "\n";
}

void write_intensity_csv(const std::string& file, const IntensityTrace& trace,
                         const std::string& column, const std::string& preamble) {
    auto out = open_out(file);
    put_preamble(out, preamble);
    out << "t," << column << "\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        if (trace.left[i] != trace.right[i])
            out << trace.times[i] << "," << trace.left[i] << "\n";
        out << trace.times[i] << "," << trace.right[i] << "\n";
    }
}

}  // namespace ctinfo::paths
