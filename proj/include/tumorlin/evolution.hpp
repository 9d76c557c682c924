#ifndef TUMORLIN_EVOLUTION_HPP
#define TUMORLIN_EVOLUTION_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tumorlin/modes.hpp"

namespace tumorlin {

// Time integration of the mono-mode systems and of the bare semigroup flows,
// the resolvent of the transport operator, the second-kind Volterra solver,
// and exponential-rate fitting.
//
// Scheme: two-stage second-order SSP with first-order right-biased upwind
// transport (characteristics point inward, both endpoints are fixed points of
// v_s, so no boundary condition is imposed). Explicit stepping under the CFL
// bound dt <= 0.9 h / max|v_s|; the upwind+SSP pair keeps nonnegative data
// nonnegative for the positivity-preserving operators.

struct ModeState {
    int k = 0;
    std::vector<double> phi;
    double eta = 0.0;
    double t = 0.0;
};

struct TrajectorySample {
    double t = 0.0;
    double sup = 0.0; // max_i |phi_i|
    double l1 = 0.0;  // int |phi| r^{n-1} dr
    double l2 = 0.0;  // (int phi^2 r^{n-1} dr)^{1/2}
    double eta = 0.0;
    double Jk = 0.0;
};

struct ModeTrajectory {
    int k = 0;
    double gamma = 0.0;
    double dt = 0.0;
    int stride = 1;
    std::vector<TrajectorySample> samples;
};

enum class CoupledFrame { Tilde, Plain };

enum class NormChoice { Sup, L1, L2, Eta, Jk };

// largest stable step at the given Courant number
double cfl_dt(const StationarySolution& sol, double cfl);

// unique bounded solution of lambda phi + v_s phi' - a phi = h; requires
// lambda above the endpoint spectral bound max{a(0), a(R_s)}. Backward
// implicit-trapezoid sweep from the boundary values the equation forces.
std::vector<double> resolvent_L0(const StationarySolution& sol, std::span<const double> a,
                                 double lambda, std::span<const double> h_rhs);

// observer invoked at every sample instant
using Observer = std::function<void(double t, std::span<const double> phi, double eta)>;

ModeTrajectory evolve_semigroup(const StationarySolution& sol, const ModeData& mode,
                                OperatorTag tag, std::span<const double> phi0, double T, double dt,
                                int stride = 0, const Observer& observer = {});

ModeTrajectory evolve_coupled(const StationarySolution& sol, const ModeData& mode, double gamma,
                              std::span<const double> phi0, double eta0, double T, double dt,
                              CoupledFrame frame = CoupledFrame::Tilde, int stride = 0,
                              const Observer& observer = {});

// final state of the last evolve_* call on this thread is not retained;
// callers needing the end state attach an observer (the last call sees t=T).

struct VolterraProblem {
    std::vector<double> K;         // kernel samples on the uniform time grid
    std::vector<double> Psi_tilde; // forcing samples
    double dt = 0.0;
    double sigma = 0.0;            // decay constant of the kernel bound
    bool kernel_nonnegative = false;
    bool kernel_exp_decreasing = false; // e^{sigma t} K(t) nonincreasing
};

// Psi + int_0^t Psi(tau) K(t-tau) dtau = Psi_tilde, trapezoid discretization.
std::vector<double> solve_volterra(const VolterraProblem& problem);

// largest violation of |Psi - Psi_tilde| <= K(0) int e^{-sigma(t-tau)}|Psi_tilde|
// over the grid (meaningful when the kernel hypotheses hold).
double volterra_bound_gap(const VolterraProblem& problem, std::span<const double> psi);

struct JDecayResult {
    double kappa0 = 0.0;        // -max of the decay functional coefficient
    double max_violation = 0.0; // worst (dJ/dt + kappa0 J)/J(0) over samples
    std::vector<double> t;
    std::vector<double> J;
};

// kappa0 > 0 from the pointwise coefficient bound, then the flow under
// Lhat_plus_k checked against dJ/dt <= -kappa0 J sample-wise.
JDecayResult j_decay_check(const StationarySolution& sol, const ModeData& mode,
                           std::span<const double> psi0, double T, double dt);

struct DecayFit {
    double rate = 0.0;
    double r2 = 0.0;
    bool ok = false; // false when the norm is nonpositive somewhere in-window
};

DecayFit fit_decay(const ModeTrajectory& traj, NormChoice norm, double t_lo, double t_hi);

// CSV with header t,sup,l1,l2,eta,Jk
std::string trajectory_csv(const ModeTrajectory& traj);

} // namespace tumorlin

#endif
