#include "ctinfo/icap.hpp"

#include <algorithm>
#include <cmath>

#include "ctinfo/common.hpp"

namespace ctinfo::icap {

MasterEqModel::MasterEqModel(std::size_t n, std::vector<double> rates_)
    : n_states(n), rates(std::move(rates_)) {
    require(n >= 2, "MasterEqModel: need at least two states");
    require(rates.size() == n * n, "MasterEqModel: rate matrix size mismatch");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) require(rates[i * n + j] >= 0.0, "MasterEqModel: negative rate");
}

double MasterEqModel::escape_rate(std::size_t i) const {
    double s = 0.0;
    for (std::size_t j = 0; j < n_states; ++j)
        if (j != i) s += rate(i, j);
    return s;
}

MasterEqModel MasterEqModel::two_state(double k_plus, double k_minus) {
    return MasterEqModel(2, {0.0, k_plus, k_minus, 0.0});
}

namespace {
bool irreducible(const MasterEqModel& m) {
    const std::size_t n = m.n_states;
    // reachability from state 0 and to state 0 along positive rates
    auto reach = [&](bool forward) {
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n; ++j) {
                const double r = forward ? m.rate(i, j) : m.rate(j, i);
                if (i != j && r > 0.0 && !seen[j]) {
                    seen[j] = true;
                    stack.push_back(j);
                }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    };
    return reach(true) && reach(false);
}
}  // namespace

std::vector<double> stationary_distribution(const MasterEqModel& model) {
    require(irreducible(model), "stationary_distribution: chain is reducible");
    const std::size_t n = model.n_states;

    // Solve Q^T P = 0 with sum(P) = 1; replace the last balance equation by the
    // normalisation to get a square system, Gaussian elimination with pivoting.
    std::vector<long double> a(n * (n + 1), 0.0L);
    for (std::size_t j = 0; j < n; ++j) {      // balance of state j: sum_i Q_ij P_i = 0
        for (std::size_t i = 0; i < n; ++i) {
            const long double qij = (i == j) ? -static_cast<long double>(model.escape_rate(i))
                                             : static_cast<long double>(model.rate(i, j));
            if (j < n - 1) a[j * (n + 1) + i] = qij;
        }
    }
    for (std::size_t i = 0; i < n; ++i) a[(n - 1) * (n + 1) + i] = 1.0L;
    a[(n - 1) * (n + 1) + n] = 1.0L;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(static_cast<double>(a[r * (n + 1) + col])) >
                std::abs(static_cast<double>(a[piv * (n + 1) + col])))
                piv = r;
        if (a[piv * (n + 1) + col] == 0.0L)
            throw numerical_error("stationary_distribution: singular balance system");
        if (piv != col)
            for (std::size_t k = 0; k <= n; ++k) std::swap(a[piv * (n + 1) + k], a[col * (n + 1) + k]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const long double f = a[r * (n + 1) + col] / a[col * (n + 1) + col];
            for (std::size_t k = col; k <= n; ++k) a[r * (n + 1) + k] -= f * a[col * (n + 1) + k];
        }
    }
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i)
        p[i] = static_cast<double>(a[i * (n + 1) + n] / a[i * (n + 1) + i]);

    for (double v : p)
        if (!(v >= -1e-14)) throw numerical_error("stationary_distribution: negative probability");
    for (auto& v : p) v = std::max(v, 0.0);

    // balance residual check
    for (std::size_t j = 0; j < n; ++j) {
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            res += (i == j) ? -model.escape_rate(i) * p[i] : model.rate(i, j) * p[i];
        if (std::abs(res) > 1e-12)
            throw numerical_error("stationary_distribution: balance residual too large");
    }
    return p;
}

CoefficientSet master_eq_coeffs(const MasterEqModel& model) {
    const auto p = stationary_distribution(model);
    const std::size_t n = model.n_states;
    CoefficientSet c;
    double c00 = 0.0, c10 = 0.0, c11 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (p[i] > 0.0) c00 -= p[i] * std::log(p[i]);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double w = model.rate(i, j);
            if (w <= 0.0) continue;
            c10 += p[i] * w * (std::log(w * p[i] / p[j]) - 1.0);
            c11 += p[i] * w;
        }
    }
    c.c00 = c00;
    c.c01 = 0.0;
    c.c10 = c10;
    c.c11 = c11;
    c.instantaneous_divergent = false;
    c.rate_divergent = (c11 != 0.0);
    return c;
}

CoefficientSet spiking_coeffs(double lambda0) {
    require(lambda0 >= 0.0, "spiking_coeffs: lambda0 must be nonnegative");
    CoefficientSet c;
    c.c00 = 0.0;
    c.c01 = 0.0;
    c.c10_divergent = true;
    c.c11 = 2.0 * lambda0;
    c.instantaneous_divergent = false;  // limiting instantaneous capacity is 0
    c.rate_divergent = true;
    return c;
}

double parametric_ix_two_state(double k_plus, double k_minus, double delta_t) {
    require(k_plus > 0.0 && k_minus > 0.0, "parametric_ix_two_state: rates must be positive");
    require(delta_t > 0.0, "parametric_ix_two_state: delta_t must be positive");
    const double s = k_plus + k_minus;
    const double pa = k_minus / s, pb = k_plus / s;
    const double q = std::exp(-s * delta_t);
    const double paa = pa + pb * q, pba = pb * (1.0 - q);
    const double pbb = pb + pa * q, pab = pa * (1.0 - q);
    auto term = [](double pcond, double pmarg) {
        return (pcond > 0.0) ? pcond * std::log(pcond / pmarg) : 0.0;
    };
    return pa * (term(paa, pa) + term(pba, pb)) + pb * (term(pbb, pb) + term(pab, pa));
}

FitResult fit_asymptotic_coeffs(const std::vector<std::pair<double, double>>& samples) {
    require(samples.size() >= 8, "fit_asymptotic_coeffs: need >= 8 samples");
    double lo = samples[0].first, hi = samples[0].first;
    for (const auto& [dt, v] : samples) {
        require(dt > 0.0, "fit_asymptotic_coeffs: delta_t must be positive");
        lo = std::min(lo, dt);
        hi = std::max(hi, dt);
    }
    require(hi / lo >= 99.0, "fit_asymptotic_coeffs: samples must span >= 2 decades");

    // Weighted least squares, weights 1/dt; normal equations in long double
    // with column scaling to tame the conditioning of the log basis. The
    // reported basis is {1, ln dt, dt, dt ln dt}; the next asymptotic order
    // {dt^2, dt^2 ln dt} is fitted as nuisance terms and discarded, otherwise
    // its projection onto the near-collinear dt columns corrupts the linear
    // coefficients by orders of magnitude more than the fit tolerance.
    const std::size_t n = samples.size();
    constexpr std::size_t k = 6;
    auto basis = [](double dt, std::size_t j) -> long double {
        const long double l = std::log(static_cast<long double>(dt));
        switch (j) {
            case 0: return 1.0L;
            case 1: return l;
            case 2: return dt;
            case 3: return dt * l;
            case 4: return static_cast<long double>(dt) * dt;
            default: return static_cast<long double>(dt) * dt * l;
        }
    };
    long double scale[k] = {0.0L, 0.0L, 0.0L, 0.0L};
    for (std::size_t j = 0; j < k; ++j) {
        for (const auto& [dt, v] : samples) scale[j] = std::max(scale[j], std::abs(basis(dt, j)));
        if (scale[j] == 0.0L) scale[j] = 1.0L;
    }
    long double ata[k][k] = {};
    long double atb[k] = {};
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = samples[i].first;
        const long double w = 1.0L / dt;
        long double row[k];
        for (std::size_t j = 0; j < k; ++j) row[j] = basis(dt, j) / scale[j];
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) ata[a][b] += w * row[a] * row[b];
            atb[a] += w * row[a] * samples[i].second;
        }
    }
    // solve the 4x4 system by Gaussian elimination with partial pivoting
    long double m[k][k + 1];
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) m[a][b] = ata[a][b];
        m[a][k] = atb[a];
    }
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::abs(static_cast<double>(m[r][col])) >
                std::abs(static_cast<double>(m[piv][col])))
                piv = r;
        if (m[piv][col] == 0.0L)
            throw numerical_error("fit_asymptotic_coeffs: ill-conditioned design matrix");
        if (piv != col)
            for (std::size_t cc = 0; cc <= k; ++cc) std::swap(m[piv][cc], m[col][cc]);
        const double diag = static_cast<double>(m[col][col]);
        if (std::abs(diag) < 1e-30)
            throw numerical_error("fit_asymptotic_coeffs: ill-conditioned design matrix");
        for (std::size_t r = 0; r < k; ++r) {
            if (r == col) continue;
            const long double f = m[r][col] / m[col][col];
            for (std::size_t cc = col; cc <= k; ++cc) m[r][cc] -= f * m[col][cc];
        }
    }
    long double beta[k];
    for (std::size_t j = 0; j < k; ++j) beta[j] = m[j][k] / m[j][j] / scale[j];

    FitResult out;
    out.coeffs.c00 = static_cast<double>(beta[0]);
    out.coeffs.c01 = static_cast<double>(beta[1]);
    out.coeffs.c10 = static_cast<double>(beta[2]);
    out.coeffs.c11 = static_cast<double>(beta[3]);

    long double wss = 0.0L, wtot = 0.0L, ymax = 0.0L;
    for (const auto& [dt, v] : samples) {
        long double fit = 0.0L;
        for (std::size_t j = 0; j < k; ++j) fit += beta[j] * basis(dt, j);
        const long double w = 1.0L / dt;
        wss += w * (fit - v) * (fit - v);
        wtot += w;
        ymax = std::max(ymax, std::abs(static_cast<long double>(v)));
    }
    out.residual_rms = static_cast<double>(std::sqrt(static_cast<double>(wss / wtot)));
    out.basis_warning = out.residual_rms > 1e-4 * (1.0 + static_cast<double>(ymax));
    return out;
}

}  // namespace ctinfo::icap
