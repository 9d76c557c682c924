#ifndef TUMORLIN_STATIONARY_HPP
#define TUMORLIN_STATIONARY_HPP

#include <string>
#include <vector>

#include "tumorlin/grid.hpp"
#include "tumorlin/interp.hpp"
#include "tumorlin/kinetics.hpp"

namespace tumorlin {

// Radial stationary state of the two-species model on [0, R_s].
//
// The free radius R_s is the unique radius at which the cell-velocity flux
// integral int_0^R rho^{n-1} g(c,p) drho vanishes. It is located by a
// bracketed scan + bisection on that residual. For each candidate radius the
// profile pair (p, w = r^{n-1} v) is integrated INWARD from the outer
// boundary: the bounded branch of the degenerate transport equation
// v p' = f(c,p) is unique at r=R (p(R)=alpha(1)=1) and the inward direction
// is the stable one, with contraction rate f_p/v ~ theta/r near the center
// (theta > 2), so the inner boundary values come out for free. Integrating
// outward from the center is the unstable direction for exactly the same
// reason and is not used.
//
// After bisection the velocity is rebuilt from the quadrature form
// v(r) = r^{1-n} int_0^r rho^{n-1} g* drho (clean through r=0) and p is
// re-integrated against it once, which removes the O(bisect_tol) flux
// contamination that the raw inward sweep leaves in v near the center.

struct SolverOptions {
    int grid_n = 4096;            // segments; nodes = grid_n+1
    double shoot_tol = 1e-8;      // require |v(R_s)| <= shoot_tol * R_s
    double bracket_lo = 0.1;      // scan range in units of lambda^{-1/2}
    double bracket_hi = 50.0;
    int bracket_points = 60;      // log-spaced scan points
    double bisect_rel_tol = 1e-12;
    double inner_cut = 1e-4;      // epsilon/R: inner end of the sweep
    bool require_conditions = true;
};

// Order-2 local behavior at the center, from the solved profiles.
//   c_s(r) = c_center + c2 r^2 + O(r^4)
//   p_s(r) = p0 + (c0/2) r^2 + O(r^4)        (p_s' = (c0 + o(1)) r)
//   v_s(r) = v1 r + v3 r^3 + O(r^5)
struct LocalExpansion {
    double c_center = 0.0;
    double p0 = 0.0;       // alpha(c_center)
    double v1 = 0.0;       // v_s'(0) = g*(0)/n, negative
    double c0_coeff = 0.0; // slope coefficient of p_s'
    double c2 = 0.0;       // F(c_center)/(2n)
    double v3 = 0.0;
    double theta = 0.0;    // f_p*(0)/v1, must exceed 2
};

struct StationarySolution {
    KineticParams params;
    double R_s = 0.0;
    RadialGrid grid;

    // node arrays, size grid.nodes()
    std::vector<double> c, dc;
    std::vector<double> p, dp;
    std::vector<double> v, dv;
    std::vector<double> f_star, g_star;
    std::vector<double> fc_star, fp_star, gc_star, gp_star;

    LocalExpansion series;
    double shoot_residual = 0.0; // |v(R_s)| of the rebuilt velocity

    double h() const { return grid.h(); }
    int nodes() const { return grid.nodes(); }

    // pressure integral sigma_s(r) = sigma_s(R_s) - int of (-v); computed on
    // demand, normalized to sigma_s(R_s) = gamma*(n-1)/R_s (radial curvature).
    std::vector<double> sigma() const;

    // off-node queries (monotone cubic through the node values)
    double c_at(double r) const;
    double p_at(double r) const;
    double v_at(double r) const;

    // cached interpolants, built by solve_stationary
    MonotoneCubic interp_c, interp_p, interp_v;
};

// Closed-form nutrient profile on a fixed ball of radius R: solves
// c'' + (n-1)/r c' = lambda c, c'(0)=0, c(R)=1 through the entire Bessel-type
// series (no overflow for large sqrt(lambda)*R; everything is a Q-ratio).
void solve_c(const KineticParams& params, double R, const RadialGrid& grid,
             std::vector<double>& c_out, std::vector<double>& dc_out);

StationarySolution solve_stationary(const KineticParams& params, const SolverOptions& opts = {});

struct ValidationItem {
    std::string name;
    bool pass = false;
    int worst_node = -1;
    double worst_value = 0.0;
};

struct ValidationReport {
    std::vector<ValidationItem> items;
    double c1_fit = 0.0; // -c1 r(R-r) <= v_s <= -c2 r(R-r)
    double c2_fit = 0.0;
    bool all_pass = false;
};

// Pointwise checks of the qualitative properties of the solved state:
// 0<c<1, c'>0, 0<p<1, p'>0, p>=alpha(c) with equality at the ends, and the
// parabolic velocity envelope with fitted constants. Failures are reported,
// never thrown.
ValidationReport validate_stationary(const StationarySolution& sol);

// CSV export, header r,c_s,dc_s,p_s,dp_s,v_s,dv_s,f_star,g_star.
std::string stationary_csv(const StationarySolution& sol);

} // namespace tumorlin

#endif
