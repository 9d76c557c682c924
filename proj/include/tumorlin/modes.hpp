#ifndef TUMORLIN_MODES_HPP
#define TUMORLIN_MODES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tumorlin/stationary.hpp"

namespace tumorlin {

// Radial objects of the degree-k reduction of the linearized system, and the
// mode operators acting on radial profiles over the stationary grid.
//
// All integral kernels carry powers like (r/rho)^k that overflow if the two
// factors are accumulated separately; every cumulative integral here is kept
// in scaled form (kernel ratios <= 1 between adjacent nodes), so any k the
// coefficient assembly accepts is evaluated without ever forming r^{+-k}.

enum class OperatorTag { L0, L_k, Ltilde_k, K_k, Lhat_plus_k, Lhat_k };

// Transport-term differencing. Upwind (right-biased, matching v_s <= 0) is
// the evolution scheme; Central is the sharper choice for static identity
// residuals and is used only by diagnostics.
enum class DerivScheme { Upwind, Central };

struct ModeData {
    int k = 0;
    double gamma = 0.0;
    double theta_k = 0.0;       // k/(n+2(k-1))
    std::int64_t lambda_k = 0;  // (n+k-2)k

    std::vector<double> u_k, du_k; // harmonic-weighted nutrient profile
    std::vector<double> v_k;       // surface-coupling density
    std::vector<double> c_k;       // eta-coupling of the tilde system
    std::vector<double> b_k;       // eta-coupling of the plain system
    std::vector<double> a_k;       // transport potential, limits taken at both ends
    std::vector<double> e_k;       // (1-theta_k)[1-(r/R)^{n+2(k-1)}]
    std::vector<double> s_k;       // (r/R)^{k-1} p_s', the tilde-transform weight

    double a_k0 = 0.0, a_kR = 0.0;
    double mu_k = 0.0;             // max{a_k(0), a_k(R_s)}
    double alpha_k = 0.0;          // eta coefficient of the plain system
    double alpha_tilde_k = 0.0;    // eta coefficient of the tilde system

    // cached apply machinery (adjacent-node kernel ratios, <= 1)
    std::vector<double> ratio_T;   // (r_i/r_{i+1})^{k-1}
    std::vector<double> ratio_U;   // (r_{i-1}/r_i)^{n+k-1}
    std::vector<double> ratio_M;   // (r_i/r_{i+1})^{m}, m = n+2(k-1)
    std::vector<double> pow_rR_m;  // (r_i/R)^m
    std::vector<double> w_Jk;      // (r_i/R)^{n+k-1} g_p*(r_i)
};

// u_k through the closed Bessel-type form: the radial profile of
// the harmonic extension in dimension n+2k, normalized to u_k(R_s)=1.
std::vector<double> solve_uk(const StationarySolution& sol, int k);

// inverse Laplacian at fixed harmonic degree: radial part of G(f Y_k),
// vanishing at r=R_s. Trapezoid quadrature on the grid.
std::vector<double> green_apply(const StationarySolution& sol, int k, std::span<const double> f);

ModeData assemble_mode(const StationarySolution& sol, int k, double gamma);

struct ApplyScratch {
    std::vector<double> t1, t2, t3, t4;
};

void apply_operator_into(const StationarySolution& sol, const ModeData& mode, OperatorTag tag,
                         std::span<const double> phi, std::span<double> out, ApplyScratch& scratch,
                         DerivScheme scheme = DerivScheme::Upwind);

std::vector<double> apply_operator(const StationarySolution& sol, const ModeData& mode,
                                   OperatorTag tag, std::span<const double> phi,
                                   DerivScheme scheme = DerivScheme::Upwind);

// J(phi) = int g_p* p_s' phi dr (plain dr weight)
double functional_J(const StationarySolution& sol, std::span<const double> phi);

// J_k(phi) = R^{-(n+k-1)} int rho^{n+k-1} g_p* phi drho
double functional_Jk(const StationarySolution& sol, int k, std::span<const double> phi);

struct TranslationResidual {
    double res_c1 = 0.0;         // sup |c_1|
    double res_alpha1 = 0.0;     // |alpha_tilde_1|
    double res_stationary = 0.0; // sup residual of the mode-1 system at (-p_s', 1)
};

// How exactly the translation family (-c p_s', c) annihilates the k=1 system.
// Static diagnostic; uses central differencing for the transport term.
TranslationResidual translation_mode_residual(const StationarySolution& sol, double gamma);

// CSV: k,theta_k,lambda_k,alpha_k,alpha_tilde_k,a_k_0,a_k_Rs,mu_k
std::string modes_csv(std::span<const ModeData> modes);

} // namespace tumorlin

#endif
