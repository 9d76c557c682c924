#ifndef TUMORLIN_STABILITY_HPP
#define TUMORLIN_STABILITY_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tumorlin/evolution.hpp"
#include "tumorlin/harmonics.hpp"

namespace tumorlin {

// Analytic spectral constants of the linearization, empirical per-mode decay
// surveys over (k, gamma), the empirical surface-tension threshold, and the
// composite multi-mode verdict.

struct SpectralConstants {
    double nu0 = 0.0;      // max{f_p*(0), f_p*(R_s)}
    double mu0_star = 0.0; // max{g*(0), f_p*(R_s)}
    double kappa0 = 0.0;   // decay constant of the J functional
    double mu_star = 0.0;  // max{mu0_star, -kappa0}
    double lambda2 = 0.0;  // max(g* + f_p*)
    double mu1_star = 0.0; // max(f_p* + g*)
    double mu2_star = 0.0; // max(f_p* + g*/2)
    std::vector<double> mu_k; // max{a_k(0), a_k(R_s)}, k = 0..k_max
};

// throws ConditionViolated when a sign invariant that the parameter
// conditions guarantee fails on the solved profiles
SpectralConstants spectral_constants(const StationarySolution& sol, int k_max);

// kappa0 alone (shared with the J-decay check)
double decay_kappa0(const StationarySolution& sol);

struct DecayCell {
    int k = 0;
    double gamma = 0.0;
    int trial = 0;
    double rate_sup = 0.0, rate_l1 = 0.0, rate_l2 = 0.0, rate_eta = 0.0;
    double r2 = 0.0;
    double alpha_tilde = 0.0;
    bool flagged = false; // fit quality below 0.98
};

struct DecayReport {
    std::vector<DecayCell> rows;
};

// Empirical decay rates per (gamma, k, trial). Trials 0 and 1 are the
// deterministic candidates (flat profile; p_s'-shaped profile), the rest are
// random smooth Chebyshev data. k=1 cells measure the deviation from the
// translation limit (eta_inf from the integrated coupling with a geometric
// tail estimate). Cells are independent and run on `threads` workers;
// the output ordering and all numbers are independent of the thread count.
DecayReport decay_survey(const StationarySolution& sol, std::span<const double> gammas,
                         std::span<const int> ks, double T, double dt, int trials,
                         std::uint64_t seed, int threads = 1);

struct GammaStarEstimate {
    double gamma_hat = 0.0;
    std::vector<int> k_range;
    double lambda_target = 0.0;
    double margin = 0.0; // min over modes of |fitted rate| - lambda_target
    bool alpha_tilde_all_negative = false;
    int binding_k = -1;  // mode with the smallest margin at gamma_hat
};

// Smallest surveyed gamma (log-bisection over the monotone verdict) at which
// every surveyed mode decays at rate <= -lambda_target. Throws NoThreshold
// when even the top of the bracket fails.
GammaStarEstimate find_gamma_star(const StationarySolution& sol, std::span<const int> ks,
                                  double lambda_target, std::pair<double, double> gamma_bracket,
                                  double T, double dt, int threads = 1);

struct Theorem81Report {
    double alpha = 2.0, beta = 2.0;
    double global_rate = 0.0;
    double r2 = 0.0;
    double C_estimate = 0.0;
    double dev_total_0 = 0.0, dev_total_T = 0.0; // X deviation + Y deviation
    double dev_X22_0 = 0.0, dev_X22_T = 0.0;     // fixed (2,2) norm pair
    std::vector<double> c_l;                     // degree-1 limit coefficients
    double T = 0.0;
};

// Evolves every (k,l) channel of the given multi-mode field independently,
// subtracts the degree-1 translation limit, and composes the coefficient
// space norms of the deviation over time. phi0 holds the plain (untilde)
// radial coefficients; eta0 the surface coefficients.
Theorem81Report theorem81_field_report(const StationarySolution& sol, double gamma, double alpha,
                                       double beta, const RadialCoefficientField& phi0,
                                       const SphereCoefficientField& eta0, double T, double dt,
                                       int threads = 1);

// Random-field convenience: smooth Chebyshev radial data and uniform sphere
// coefficients on every (k,l) with k <= k_max, deterministic in the seed.
Theorem81Report theorem81_report(const StationarySolution& sol, double gamma, double alpha,
                                 double beta, int k_max, double T, double dt, std::uint64_t seed,
                                 int threads = 1);

// the random field the convenience overload uses (exposed for tests)
std::pair<RadialCoefficientField, SphereCoefficientField>
theorem81_random_field(const StationarySolution& sol, int k_max, std::uint64_t seed);

// CSV with header k,gamma,trial,rate_sup,rate_l1,rate_l2,rate_eta,r2
std::string decay_csv(const DecayReport& report);

} // namespace tumorlin

#endif
