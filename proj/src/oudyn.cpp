#include "ctinfo/oudyn.hpp"

#include <cmath>

#include "ctinfo/common.hpp"
#include "ctinfo/rng.hpp"

namespace ctinfo::oudyn {

void OUParams::validate() const {
    require(V_x > 0.0, "OUParams: V_x must be positive");
    require(V_y >= 0.0, "OUParams: V_y must be nonnegative");
    require(rho >= -1.0 && rho <= 1.0, "OUParams: rho must be in [-1,1]");
    require(stable(), "OUParams: drift matrix must be stable (Hurwitz)");
}

bool OUParams::stable() const {
    // 2x2 Hurwitz criterion: trace < 0 and det > 0
    return (A + D) < 0.0 && (A * D - B * C) > 0.0;
}

OUParams OUParams::swapped() const {
    OUParams q = *this;
    std::swap(q.A, q.D);
    std::swap(q.B, q.C);
    std::swap(q.V_x, q.V_y);
    return q;
}

Covariance stationary_covariance(const OUParams& p) {
    p.validate();
    // Lyapunov equation M S + S M^T + Q = 0 in the unknowns (sxx, sxy, syy):
    //   2A sxx + 2B sxy           = -Vx^2
    //   C sxx + (A+D) sxy + B syy = -rho Vx Vy
    //           2C sxy + 2D syy   = -Vy^2
    double m[3][4] = {
        {2.0 * p.A, 2.0 * p.B, 0.0, -p.V_x * p.V_x},
        {p.C, p.A + p.D, p.B, -p.rho * p.V_x * p.V_y},
        {0.0, 2.0 * p.C, 2.0 * p.D, -p.V_y * p.V_y},
    };
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (m[piv][col] == 0.0)
            throw numerical_error("stationary_covariance: singular Lyapunov system");
        if (piv != col)
            for (int c = 0; c < 4; ++c) std::swap(m[piv][c], m[col][c]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    Covariance s;
    s.xx = m[0][3] / m[0][0];
    s.xy = m[1][3] / m[1][1];
    s.yy = m[2][3] / m[2][2];
    if (s.xx <= 0.0) throw numerical_error("stationary_covariance: non-positive variance");
    return s;
}

SamplePath simulate_coupled_ou(const OUParams& p, double dt, double horizon, std::uint64_t seed,
                               std::uint64_t stream_idx, const double* x0y0, double burn_in) {
    p.validate();
    require(dt > 0.0 && horizon > dt, "simulate_coupled_ou: bad dt/horizon");
    require(burn_in >= 0.0, "simulate_coupled_ou: negative burn-in");
    rng::Stream stream(seed, stream_idx);

    double x, y;
    if (x0y0) {
        x = x0y0[0];
        y = x0y0[1];
    } else {
        // stationary start: Cholesky of the Lyapunov covariance
        const Covariance s = stationary_covariance(p);
        const double z1 = stream.normal(), z2 = stream.normal();
        const double lxx = std::sqrt(s.xx);
        const double lyx = s.xy / lxx;
        const double lyy = std::sqrt(std::max(s.yy - lyx * lyx, 0.0));
        x = lxx * z1;
        y = lyx * z1 + lyy * z2;
    }

    const auto n = static_cast<std::size_t>(std::llround(horizon / dt));
    const auto n_burn = static_cast<std::size_t>(std::llround(burn_in / dt));
    std::vector<double> xs, ys;
    xs.reserve(n + 1);
    ys.reserve(n + 1);
    const double sq = std::sqrt(dt);
    const double rc = std::sqrt(std::max(1.0 - p.rho * p.rho, 0.0));
    for (std::size_t i = 0; i < n_burn + n; ++i) {
        if (i == n_burn) {
            xs.push_back(x);
            ys.push_back(y);
        }
        const double z1 = stream.normal(), z2 = stream.normal();
        const double dwx = sq * z1;
        const double dwy = sq * (p.rho * z1 + rc * z2);
        const double nx = x + (p.A * x + p.B * y) * dt + p.V_x * dwx;
        const double ny = y + (p.C * x + p.D * y) * dt + p.V_y * dwy;
        x = nx;
        y = ny;
        if (std::abs(x) > 1e8 || std::abs(y) > 1e8)
            throw numerical_error("simulate_coupled_ou: trajectory diverged");
        if (i >= n_burn) {
            xs.push_back(x);
            ys.push_back(y);
        }
    }
    const TimeWindow w(0.0, 0.0, static_cast<double>(n) * dt);
    return SamplePath(w, dt, std::move(xs), std::move(ys));
}

double ou_parametric_ais(double kappa, double delta_t) {
    require(kappa > 0.0 && delta_t > 0.0, "ou_parametric_ais: kappa, delta_t must be positive");
    return -0.5 * std::log1p(-std::exp(-2.0 * kappa * delta_t));
}

icap::CoefficientSet ou_asymptotic_coeffs(double kappa) {
    require(kappa > 0.0, "ou_asymptotic_coeffs: kappa must be positive");
    icap::CoefficientSet c;
    c.c00 = 0.5 * std::log(1.0 / (2.0 * kappa));
    c.c01 = -0.5;
    c.c10 = 0.5 * kappa;
    c.c11 = 0.0;
    c.instantaneous_divergent = true;  // c01 != 0: no finite limit at dt -> 0
    c.rate_divergent = false;
    return c;
}

double te_rate_coupled_ou(const OUParams& p) {
    p.validate();
    if (p.V_y == 0.0)
        throw numerical_error("te_rate_coupled_ou: rate diverges as V_y -> 0");
    const double eta = p.B * p.V_y / (p.D * p.V_x);
    const double ad = std::abs(p.D);
    const double val =
        0.5 * ad * (std::sqrt(1.0 + eta * (eta - 2.0 * p.rho)) -
                    (1.0 + p.rho * p.B * p.V_y / (ad * p.V_x)));
    return (val < 0.0 && val > -1e-12) ? 0.0 : val;
}

SumRate sum_rate_coupled_ou(const OUParams& p) {
    p.validate();
    const double A = p.A, B = p.B, C = p.C, D = p.D;
    const double vx = p.V_x, vy = p.V_y, rho = p.rho;
    const double den1 = 4.0 * (A + D) * vx * vx;
    const double den2 = B * B * vy * vy + D * (A + D) * vx * vx -
                        B * vx * (2.0 * D * rho * vy + C * vx);
    if (den1 == 0.0 || den2 == 0.0)
        throw numerical_error("sum_rate_coupled_ou: singular parameters");
    const double inner = -B * B * vy * vy * vy * vy +
                         2.0 * B * (D - A) * rho * vy * vy * vy * vx -
                         ((A + D) * (A + D) - 2.0 * B * C - 4.0 * A * D * rho * rho) * vx * vx * vy * vy -
                         2.0 * C * (D - A) * rho * vy * vx * vx * vx - C * C * vx * vx * vx * vx;
    SumRate r;
    r.sum = B * B * inner / (den1 * den2);
    if (r.sum < 0.0 && r.sum > -1e-12) r.sum = 0.0;
    r.memory = r.sum - te_rate_coupled_ou(p);
    if (r.memory < 0.0 && r.memory > -1e-12) r.memory = 0.0;
    return r;
}

double kappa_eff(const OUParams& p) {
    p.validate();
    const double num = (p.A + p.D) * (p.B * p.C - p.A * p.D) * p.V_x * p.V_x;
    const double den = p.D * (p.A + p.D) * p.V_x * p.V_x + p.B * p.B * p.V_y * p.V_y -
                       p.B * p.V_x * (p.C * p.V_x + 2.0 * p.rho * p.D * p.V_y);
    if (den == 0.0) throw numerical_error("kappa_eff: singular denominator");
    return num / den;
}

GirsanovResult girsanov_accumulator(const SamplePath& path, const OUParams& p) {
    p.validate();
    require(path.dt > 0.0 && path.values_x.size() >= 2,
            "girsanov_accumulator: path grid mismatch");
    const double kap = kappa_eff(p);
    const double dt = path.dt;
    const std::size_t n = path.steps();

    GirsanovResult out;
    auto& tr = out.trace;
    tr.convention = InfoTrace::quadrature::left_step;
    tr.times.resize(n + 1);
    tr.cumulative_m.assign(n + 1, 0.0);
    tr.cumulative_t.assign(n + 1, 0.0);
    tr.rate_m.assign(n + 1, 0.0);
    tr.rate_t.assign(n + 1, 0.0);
    out.z.assign(n + 1, 1.0);

    double cum = 0.0;
    tr.times[0] = path.window.t0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = path.values_x[i];
        const double y = path.values_y[i];
        const double dx = path.values_x[i + 1] - x;
        const double dwx = (dx - (p.A * x + p.B * y) * dt) / p.V_x;
        const double f = ((p.A + kap) * x + p.B * y) / p.V_x;
        const double inc = 0.5 * f * f * dt + f * dwx;
        cum += inc;
        tr.rate_m[i] = inc / dt;
        tr.times[i + 1] = path.window.t0 + static_cast<double>(i + 1) * dt;
        tr.cumulative_m[i + 1] = cum;
        out.z[i + 1] = std::exp(-cum);
    }
    tr.rate_m[n] = tr.rate_m[n - 1];
    return out;
}

std::pair<double, double> critical_noise(const OUParams& p) {
    require(p.B != 0.0 && p.A != 0.0, "critical_noise: needs A != 0 and B != 0");
    return {std::abs(p.D) * p.V_x / std::abs(p.B), std::abs(p.C) * p.V_x / std::abs(p.A)};
}

}  // namespace ctinfo::oudyn
