#pragma once
#include <array>
#include <cstdint>
#include <vector>

#include "ctinfo/icap.hpp"
#include "ctinfo/paths.hpp"

namespace ctinfo::oudyn {

using paths::InfoTrace;
using paths::SamplePath;
using paths::TimeWindow;

// dx = (A x + B y) dt + V_x dW^x,  dy = (C x + D y) dt + V_y dW^y,
// with E[dW^x dW^y] = rho dt. Stability requires the drift matrix to be Hurwitz.
struct OUParams {
    double A = -5.0, B = 5.0, C = 1.0, D = -2.0;
    double V_x = 1.0, V_y = 1.0;
    double rho = 0.0;

    void validate() const;
    bool stable() const;       // both drift eigenvalues have negative real part
    OUParams swapped() const;  // A<->D, B<->C, V_x<->V_y: the Y-side roles
};

struct Covariance {  // stationary second moments
    double xx = 0.0, xy = 0.0, yy = 0.0;
};

// Stationary covariance from the 2x2 Lyapunov equation M S + S M^T + Q = 0.
Covariance stationary_covariance(const OUParams& p);

// Euler-Maruyama path with per-step noise correlation rho; initial state drawn
// from the stationary covariance unless x0y0 is supplied. burn_in seconds are
// integrated and discarded before recording starts (the alternative to the
// stationary draw).
SamplePath simulate_coupled_ou(const OUParams& p, double dt, double horizon, std::uint64_t seed,
                               std::uint64_t stream = 0, const double* x0y0 = nullptr,
                               double burn_in = 0.0);

// Predictive capacity of a single OU(kappa) at lag delta_t:
// 0.5*ln(e^{k dt}/(e^{k dt}-e^{-k dt})) = -0.5*ln(1-e^{-2 k dt}).
double ou_parametric_ais(double kappa, double delta_t);

// Small-lag expansion of the above: c00 = -ln(2 kappa)/2, c01 = -1/2,
// c10 = kappa/2; the instantaneous part diverges (c01 != 0).
icap::CoefficientSet ou_asymptotic_coeffs(double kappa);

double te_rate_coupled_ou(const OUParams& p);  // steady-state transfer rate Y->X

struct SumRate {
    double sum = 0.0;     // memory + transfer rate for X
    double memory = 0.0;  // sum - transfer
};
SumRate sum_rate_coupled_ou(const OUParams& p);

double kappa_eff(const OUParams& p);  // drift coefficient of the Markov marginal of x

struct GirsanovResult {
    InfoTrace trace;        // combined memory+transfer accumulator in the M channel
    std::vector<double> z;  // Z_t = exp(-accumulator), one per grid node
};

// Pathwise accumulator 0.5*f^2 dt + f dW^x with f = (A x + B y - phi(x))/V_x and
// phi(x) = -kappa_eff x; dW^x is reconstructed from the path increments.
GirsanovResult girsanov_accumulator(const SamplePath& path, const OUParams& p);

// Noise-strength magnitudes where the transfer rates switch on/off at |rho|=1.
std::pair<double, double> critical_noise(const OUParams& p);

}  // namespace ctinfo::oudyn
