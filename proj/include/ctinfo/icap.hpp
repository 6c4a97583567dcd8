#pragma once
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ctinfo::icap {

// Coefficients of the small-lag expansion
//   I(dt) ~ c00 + c01*ln(dt) + c10*dt + c11*dt*ln(dt).
// Divergent entries carry a flag instead of a numeric value.
struct CoefficientSet {
    std::optional<double> c00, c01, c10, c11;
    bool c00_divergent = false;
    bool c01_divergent = false;
    bool c10_divergent = false;
    bool c11_divergent = false;
    // derived diagnoses: the dt->0 limit has no finite value (c01 != 0 or a
    // divergent c00), or the underlying rate is undefined (c11 != 0)
    bool instantaneous_divergent = false;
    bool rate_divergent = false;
};

// Continuous-time Markov chain given by off-diagonal transition rates.
struct MasterEqModel {
    std::size_t n_states = 0;
    std::vector<double> rates;  // row-major W[j|i] at (i, j), i != j; diagonal ignored

    MasterEqModel() = default;
    MasterEqModel(std::size_t n, std::vector<double> rates_);
    double rate(std::size_t from, std::size_t to) const { return rates[from * n_states + to]; }
    double escape_rate(std::size_t i) const;
    static MasterEqModel two_state(double k_plus, double k_minus);  // A->B at k+, B->A at k-
};

// Stationary distribution (null space of the rate matrix); requires
// irreducibility, balance residual below 1e-12.
std::vector<double> stationary_distribution(const MasterEqModel& model);

// Expansion coefficients of the chain's predictive capacity at small lags;
// c01 = 0 for jump dynamics.
CoefficientSet master_eq_coeffs(const MasterEqModel& model);

// Point-process limit: c00 = 0, c10 divergent, c11 = 2*lambda0.
CoefficientSet spiking_coeffs(double lambda0);

// Exact lagged mutual information of the stationary two-state chain via its
// closed-form transition probabilities.
double parametric_ix_two_state(double k_plus, double k_minus, double delta_t);

struct FitResult {
    CoefficientSet coeffs;
    double residual_rms = 0.0;      // weighted RMS residual of the fit
    bool basis_warning = false;     // large residual suggests missing basis terms
};

// Weighted least squares on the basis {1, ln(dt), dt, dt*ln(dt)} with weights
// 1/dt, which balances the log-dominated small-dt region. Needs >= 8 samples
// spanning >= 2 decades.
FitResult fit_asymptotic_coeffs(const std::vector<std::pair<double, double>>& samples);

}  // namespace ctinfo::icap
