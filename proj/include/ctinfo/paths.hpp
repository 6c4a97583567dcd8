#pragma once
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace ctinfo::paths {

inline constexpr double infinite_duration = std::numeric_limits<double>::infinity();

// Observation interval [t0, t_end] with history available back to tau <= t0.
struct TimeWindow {
    double tau = 0.0;
    double t0 = 0.0;
    double t_end = 0.0;

    TimeWindow() = default;
    TimeWindow(double tau_, double t0_, double t_end_);
    double horizon() const { return t_end - t0; }
};

// A point-process realisation: strictly increasing event times within [tau, t_end].
struct EventPath {
    TimeWindow window;
    std::vector<double> events;

    EventPath() = default;
    EventPath(TimeWindow w, std::vector<double> ev);
    std::size_t count_in(double a, double b) const;  // events in (a, b]
};

// Piecewise-constant trajectory on a discrete state space.
struct StatePath {
    TimeWindow window;
    int initial_state = 0;
    std::vector<std::pair<double, int>> transitions;  // (time, new state)

    StatePath() = default;
    StatePath(TimeWindow w, int s0, std::vector<std::pair<double, int>> tr);
    int state_before(double t) const;  // left limit x_t^-
};

// Uniform-grid samples of a coupled diffusion. values hold x_{t0 + i*dt}.
struct SamplePath {
    TimeWindow window;
    double dt = 0.0;
    std::vector<double> values_x;
    std::vector<double> values_y;

    SamplePath() = default;
    SamplePath(TimeWindow w, double dt_, std::vector<double> x, std::vector<double> y);
    std::size_t steps() const { return values_x.empty() ? 0 : values_x.size() - 1; }
};

// Conditional intensity as a piecewise-linear function with explicit left/right
// values at each knot, so discontinuities (at events, window edges) are exact.
// Between knots the value interpolates linearly from right[i] to left[i+1].
struct IntensityTrace {
    std::vector<double> times;
    std::vector<double> left;
    std::vector<double> right;
    std::vector<double> jump_markers;  // event times of the conditioning path, if any

    static IntensityTrace constant(double t_begin, double t_end, double value);

    void append(double t, double left_value, double right_value);
    double eval_left(double t) const;   // limit from below (pre-event value at knots)
    double eval_right(double t) const;  // limit from above
    double integral(double a, double b) const;
    double t_begin() const { return times.front(); }
    double t_end() const { return times.back(); }
    void validate() const;
};

// Time-indexed cumulative memory/transfer functionals with the jump and
// continuous contributions kept separate. Nodes are duplicated at jump times:
// the first copy carries the pre-jump cumulative/rate, the second the post-jump
// one, so the stored arrays reconstruct the cumulative exactly.
struct InfoTrace {
    enum class quadrature { trapezoid, left_step };

    std::vector<double> times;
    std::vector<double> cumulative_m;
    std::vector<double> cumulative_t;
    std::vector<double> rate_m;  // continuous-part rate sampled on the grid
    std::vector<double> rate_t;
    struct Jump {
        double time;
        double dm;
        double dt;
    };
    std::vector<Jump> jumps;
    quadrature convention = quadrature::trapezoid;

    double final_m() const { return cumulative_m.empty() ? 0.0 : cumulative_m.back(); }
    double final_t() const { return cumulative_t.empty() ? 0.0 : cumulative_t.back(); }
};

// t - (largest event time <= t); infinite_duration when no prior event exists.
double time_since_last_event(const EventPath& path, double t);

// True iff jump sums plus the quadrature of the continuous rates reproduce the
// stored cumulatives within tol, for both channels.
bool verify_trace_consistency(const InfoTrace& trace, double tol);

// --- CSV formats -----------------------------------------------------------
// EventPath: header "t", one event per row. SamplePath: "t,x,y".
// InfoTrace: "t,M_cum,T_cum,M_rate_cont,T_rate_cont" plus a companion jump file
// "t,dM_jump,dT_jump". Lines starting with '#' are metadata and are skipped.

void write_events_csv(const std::string& file, const EventPath& path,
                      const std::string& preamble = "");
EventPath read_events_csv(const std::string& file, TimeWindow window);
void write_samples_csv(const std::string& file, const SamplePath& path,
                       const std::string& preamble = "");
void write_info_csv(const std::string& file, const std::string& jump_file,
                    const InfoTrace& trace, const std::string& preamble = "");
void write_intensity_csv(const std::string& file, const IntensityTrace& trace,
                         const std::string& column, const std::string& preamble = "");

}  // namespace ctinfo::paths
