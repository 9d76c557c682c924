#include "tumorlin/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "tumorlin/errors.hpp"
#include "tumorlin/fit.hpp"
#include "tumorlin/quadrature.hpp"

namespace tumorlin {

namespace {

double sup_abs(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s = std::max(s, std::abs(v));
    return s;
}

TrajectorySample make_sample(const StationarySolution& sol, const ModeData& mode, double t,
                             std::span<const double> phi, double eta) {
    TrajectorySample s;
    s.t = t;
    s.eta = eta;
    const int N = sol.grid.N;
    const double h = sol.h();
    double l1 = 0.0, l2 = 0.0, jk = 0.0, sup = 0.0;
    for (int i = 0; i <= N; ++i) {
        double w = 1.0;
        for (int j = 0; j < sol.params.n - 1; ++j) w *= sol.grid.r(i);
        const double trap = (i == 0 || i == N) ? 0.5 : 1.0;
        l1 += trap * w * std::abs(phi[i]);
        l2 += trap * w * phi[i] * phi[i];
        jk += trap * mode.w_Jk[i] * phi[i];
        sup = std::max(sup, std::abs(phi[i]));
    }
    s.l1 = l1 * h;
    s.l2 = std::sqrt(l2 * h);
    s.Jk = jk * h;
    s.sup = sup;
    return s;
}

void check_cfl(const StationarySolution& sol, double dt) {
    const double lim = cfl_dt(sol, 0.9);
    if (!(dt > 0.0) || dt > lim * (1.0 + 1e-12))
        throw CFLViolation("time step " + std::to_string(dt) + " exceeds CFL limit " +
                           std::to_string(lim));
}

int auto_stride(long steps, int stride) {
    if (stride > 0) return stride;
    return static_cast<int>(std::max(1L, steps / 2000));
}

double jk_cached(const StationarySolution& sol, const ModeData& mode, std::span<const double> phi) {
    const int N = sol.grid.N;
    double jk = 0.0;
    for (int i = 1; i < N; ++i) jk += mode.w_Jk[i] * phi[i];
    return sol.h() * (jk + 0.5 * (mode.w_Jk[0] * phi[0] + mode.w_Jk[N] * phi[N]));
}

} // namespace

double cfl_dt(const StationarySolution& sol, double cfl) {
    double vmax = 0.0;
    for (double v : sol.v) vmax = std::max(vmax, std::abs(v));
    return cfl * sol.h() / vmax;
}

std::vector<double> resolvent_L0(const StationarySolution& sol, std::span<const double> a,
                                 double lambda, std::span<const double> h_rhs) {
    const int N = sol.grid.N;
    if (static_cast<int>(a.size()) != N + 1 || static_cast<int>(h_rhs.size()) != N + 1)
        throw std::invalid_argument("resolvent_L0: size mismatch");
    const double lambda1 = std::max(a[0], a[N]);
    if (!(lambda > lambda1))
        throw SpectralViolation("resolvent_L0: lambda must exceed the endpoint bound " +
                                std::to_string(lambda1));
    const double h = sol.h();
    std::vector<double> phi(N + 1, 0.0);
    phi[N] = h_rhs[N] / (lambda - a[N]);
    {
        // order-2 series start off the boundary (the sweep is contracting, so
        // the seed error only damps); derivatives of the data by one-sided FD
        const double dh = (3.0 * h_rhs[N] - 4.0 * h_rhs[N - 1] + h_rhs[N - 2]) / (2 * h);
        const double da = (3.0 * a[N] - 4.0 * a[N - 1] + a[N - 2]) / (2 * h);
        const double ddh = (2.0 * h_rhs[N] - 5.0 * h_rhs[N - 1] + 4.0 * h_rhs[N - 2] - h_rhs[N - 3]) / (h * h);
        const double dda = (2.0 * a[N] - 5.0 * a[N - 1] + 4.0 * a[N - 2] - a[N - 3]) / (h * h);
        const double ddv = (3.0 * sol.dv[N] - 4.0 * sol.dv[N - 1] + sol.dv[N - 2]) / (2 * h);
        const double dphiR = (dh + da * phi[N]) / (lambda - a[N] + sol.dv[N]);
        const double ddphiR =
            (ddh + dda * phi[N] + 2.0 * da * dphiR - ddv * dphiR) / (lambda - a[N] + 2.0 * sol.dv[N]);
        phi[N - 1] = phi[N] - h * dphiR + 0.5 * h * h * ddphiR;
    }
    // implicit trapezoid on phi' = alpha(r) phi + beta(r), alpha = -(lambda-a)/v
    auto alpha_at = [&](int i) { return -(lambda - a[i]) / sol.v[i]; };
    auto beta_at = [&](int i) { return h_rhs[i] / sol.v[i]; };
    for (int i = N - 2; i >= 1; --i) {
        const double am_ = alpha_at(i + 1), bm = beta_at(i + 1);
        const double ai = alpha_at(i), bi = beta_at(i);
        phi[i] = (phi[i + 1] - 0.5 * h * (am_ * phi[i + 1] + bm + bi)) / (1.0 + 0.5 * h * ai);
    }
    phi[0] = h_rhs[0] / (lambda - a[0]);
    return phi;
}

namespace {

// shared SSP2 loop; rhs(phi, eta, out_phi) returns d(eta)/dt
template <typename Rhs>
void ssp2_loop(const StationarySolution& sol, const ModeData& mode, std::span<const double> phi0,
               double eta0, double T, double dt, int stride, const Observer& observer,
               ModeTrajectory* traj, Rhs&& rhs) {
    check_cfl(sol, dt);
    const long steps = std::lround(std::ceil(T / dt - 1e-12));
    const double dt_eff = T / static_cast<double>(steps);
    const int s = auto_stride(steps, stride);
    if (traj) {
        traj->k = mode.k;
        traj->gamma = mode.gamma;
        traj->dt = dt_eff;
        traj->stride = s;
    }

    std::vector<double> phi(phi0.begin(), phi0.end());
    double eta = eta0;
    const std::size_t n = phi.size();
    std::vector<double> k1(n), k2(n), phi1(n);
    const double sup0 = sup_abs(phi) + std::abs(eta0);

    auto record = [&](double t) {
        if (traj) traj->samples.push_back(make_sample(sol, mode, t, phi, eta));
        if (observer) observer(t, phi, eta);
    };
    record(0.0);

    for (long m = 0; m < steps; ++m) {
        const double de1 = rhs(phi, eta, k1);
        for (std::size_t i = 0; i < n; ++i) phi1[i] = phi[i] + dt_eff * k1[i];
        const double eta1 = eta + dt_eff * de1;
        const double de2 = rhs(phi1, eta1, k2);
        for (std::size_t i = 0; i < n; ++i) phi[i] = 0.5 * (phi[i] + phi1[i] + dt_eff * k2[i]);
        eta = 0.5 * (eta + eta1 + dt_eff * de2);
        const bool at_sample = ((m + 1) % s == 0) || (m + 1 == steps);
        if (at_sample) {
            const double t = dt_eff * static_cast<double>(m + 1);
            record(t);
            if (sup_abs(phi) + std::abs(eta) > 1e12 * (sup0 + 1e-300))
                throw Blowup("mode evolution exceeded 1e12 x initial magnitude");
        }
    }
}

} // namespace

ModeTrajectory evolve_semigroup(const StationarySolution& sol, const ModeData& mode,
                                OperatorTag tag, std::span<const double> phi0, double T, double dt,
                                int stride, const Observer& observer) {
    ModeTrajectory traj;
    ApplyScratch scratch;
    ssp2_loop(sol, mode, phi0, 0.0, T, dt, stride, observer, &traj,
              [&](std::span<const double> p, double, std::span<double> out) {
                  apply_operator_into(sol, mode, tag, p, out, scratch);
                  return 0.0;
              });
    return traj;
}

ModeTrajectory evolve_coupled(const StationarySolution& sol, const ModeData& mode, double gamma,
                              std::span<const double> phi0, double eta0, double T, double dt,
                              CoupledFrame frame, int stride, const Observer& observer) {
    if (std::abs(gamma - mode.gamma) > 1e-12 * std::max(1.0, std::abs(gamma)))
        throw std::invalid_argument("evolve_coupled: mode was assembled at a different gamma");
    ModeTrajectory traj;
    ApplyScratch scratch;
    const bool tilde = (frame == CoupledFrame::Tilde);
    const OperatorTag tag = tilde ? OperatorTag::Ltilde_k : OperatorTag::L_k;
    const std::vector<double>& coupling = tilde ? mode.c_k : mode.b_k;
    const double alpha = tilde ? mode.alpha_tilde_k : mode.alpha_k;
    ssp2_loop(sol, mode, phi0, eta0, T, dt, stride, observer, &traj,
              [&](std::span<const double> p, double e, std::span<double> out) {
                  apply_operator_into(sol, mode, tag, p, out, scratch);
                  for (std::size_t i = 0; i < out.size(); ++i) out[i] += coupling[i] * e;
                  return alpha * e + jk_cached(sol, mode, p);
              });
    return traj;
}

std::vector<double> solve_volterra(const VolterraProblem& problem) {
    const std::size_t M = problem.K.size();
    if (problem.Psi_tilde.size() != M || M < 2 || !(problem.dt > 0.0))
        throw std::invalid_argument("solve_volterra: inconsistent sampling");
    if (problem.kernel_nonnegative)
        for (double k : problem.K)
            if (k < 0.0) throw std::invalid_argument("solve_volterra: kernel flagged nonnegative is not");
    if (problem.kernel_exp_decreasing) {
        for (std::size_t i = 1; i < M; ++i) {
            const double prev = std::exp(problem.sigma * (i - 1) * problem.dt) * problem.K[i - 1];
            const double cur = std::exp(problem.sigma * i * problem.dt) * problem.K[i];
            if (cur > prev * (1.0 + 1e-9) + 1e-12)
                throw std::invalid_argument("solve_volterra: e^{sigma t}K(t) flagged nonincreasing is not");
        }
    }
    const double dt = problem.dt;
    std::vector<double> psi(M, 0.0);
    const double diag = 1.0 + 0.5 * dt * problem.K[0];
    if (diag == 0.0)
        throw std::invalid_argument("solve_volterra: singular diagonal 1 + dt K(0)/2 = 0");
    psi[0] = problem.Psi_tilde[0];
    for (std::size_t m = 1; m < M; ++m) {
        double conv = 0.5 * psi[0] * problem.K[m];
        for (std::size_t j = 1; j < m; ++j) conv += psi[j] * problem.K[m - j];
        psi[m] = (problem.Psi_tilde[m] - dt * conv) / diag;
    }
    return psi;
}

double volterra_bound_gap(const VolterraProblem& problem, std::span<const double> psi) {
    const std::size_t M = problem.K.size();
    const double dt = problem.dt;
    double worst = -1e300;
    // cumulative e^{-sigma(t-tau)} |Psi_tilde| by trapezoid, rescaled per step
    double integral = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        if (m > 0) {
            const double decay = std::exp(-problem.sigma * dt);
            integral = decay * integral +
                       0.5 * dt * (decay * std::abs(problem.Psi_tilde[m - 1]) +
                                   std::abs(problem.Psi_tilde[m]));
        }
        const double bound = problem.K[0] * integral;
        worst = std::max(worst, std::abs(psi[m] - problem.Psi_tilde[m]) - bound);
    }
    return worst;
}

JDecayResult j_decay_check(const StationarySolution& sol, const ModeData& mode,
                           std::span<const double> psi0, double T, double dt) {
    for (double x : psi0)
        if (x < 0.0) throw std::invalid_argument("j_decay_check: initial data must be nonnegative");
    JDecayResult out;
    {
        // coefficient bound: f_p* + g* + int_0^r g_p* p_s'
        std::vector<double> integrand(sol.nodes());
        for (int i = 0; i < sol.nodes(); ++i) integrand[i] = sol.gp_star[i] * sol.dp[i];
        const std::vector<double> cum = cumulative_trapezoid(integrand, sol.h());
        double worst = -1e300;
        for (int i = 0; i < sol.nodes(); ++i)
            worst = std::max(worst, sol.fp_star[i] + sol.g_star[i] + cum[i]);
        if (!(worst < 0.0))
            throw ConditionViolated("j_decay_check: the decay coefficient bound is nonnegative");
        out.kappa0 = -worst;
    }
    const double J0 = functional_J(sol, psi0);
    evolve_semigroup(sol, mode, OperatorTag::Lhat_plus_k, psi0, T, dt, 0,
                     [&](double t, std::span<const double> phi, double) {
                         out.t.push_back(t);
                         out.J.push_back(functional_J(sol, phi));
                     });
    double worst = -1e300;
    for (std::size_t m = 0; m + 1 < out.t.size(); ++m) {
        const double dt_m = out.t[m + 1] - out.t[m];
        const double dJ = (out.J[m + 1] - out.J[m]) / dt_m;
        worst = std::max(worst, (dJ + out.kappa0 * out.J[m]) / std::max(J0, 1e-300));
    }
    out.max_violation = worst;
    return out;
}

DecayFit fit_decay(const ModeTrajectory& traj, NormChoice norm, double t_lo, double t_hi) {
    std::vector<double> t, y;
    for (const TrajectorySample& s : traj.samples) {
        if (s.t < t_lo - 1e-12 || s.t > t_hi + 1e-12) continue;
        double v = 0.0;
        switch (norm) {
            case NormChoice::Sup: v = s.sup; break;
            case NormChoice::L1: v = s.l1; break;
            case NormChoice::L2: v = s.l2; break;
            case NormChoice::Eta: v = std::abs(s.eta); break;
            case NormChoice::Jk: v = std::abs(s.Jk); break;
        }
        t.push_back(s.t);
        y.push_back(v);
    }
    if (t.size() < 4) throw std::invalid_argument("fit_decay: window has fewer than 4 samples");
    DecayFit out;
    for (double v : y)
        if (!(v > 0.0)) {
            out.rate = -std::numeric_limits<double>::infinity();
            out.ok = false;
            return out;
        }
    for (auto& v : y) v = std::log(v);
    const LineFit lf = fit_line(t, y);
    out.rate = lf.slope;
    out.r2 = lf.r2;
    out.ok = true;
    return out;
}

std::string trajectory_csv(const ModeTrajectory& traj) {
    std::string out = "t,sup,l1,l2,eta,Jk\n";
    char buf[256];
    for (const TrajectorySample& s : traj.samples) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.sup, s.l1,
                      s.l2, s.eta, s.Jk);
        out += buf;
    }
    return out;
}

} // namespace tumorlin
