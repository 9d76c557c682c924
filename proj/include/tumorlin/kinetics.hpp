#ifndef TUMORLIN_KINETICS_HPP
#define TUMORLIN_KINETICS_HPP

#include <string>
#include <vector>

namespace tumorlin {

// Rate constants of the two-species model, all in units of 1/time, plus the
// spatial dimension n and the surface tension gamma. The affine laws are
//   F(c)    = lambda*c
//   K_B(c)  = k_B*c        K_D(c) = k_D*(1-c)
//   K_P(c)  = k_P*c        K_Q(c) = k_Q*(1-c)
struct KineticParams {
    int n = 3;
    double lambda_nutrient = 1.0;
    double k_B = 3.0;
    double k_D = 2.0;
    double k_P = 2.0;
    double k_Q = 1.0;
    double gamma = 1.0;

    // throws std::invalid_argument if positivity / n>=2 fail
    void validate() const;
};

struct RateBundle {
    double F;
    double K_B, K_D, K_P, K_Q;
    double K_M; // K_B + K_D
    double K_N; // K_P + K_Q
};

// f, g and their first partials at a point (c, p).
struct FGBundle {
    double f, g;
    double f_c, f_p;
    double g_c, g_p;
};

struct ConditionCheck {
    std::string inequality; // e.g. "k_B > k_D"
    bool pass = false;
    double lhs = 0.0, rhs = 0.0;
};

struct ConditionReport {
    std::vector<ConditionCheck> checks;
    bool satisfies_1_25 = false; // k_B>k_D>=2k_Q>0, k_B>k_P, k_B*k_Q<=k_D*k_P
    bool positivity = false;
};

RateBundle eval_rates(const KineticParams& params, double c);

FGBundle eval_fg(const KineticParams& params, double c, double p);

// Larger root of K_M(c) p^2 - [K_M(c)-K_N(c)] p - K_P(c) = 0, in [0,1].
// Uses the conjugate form when K_M-K_N < 0 so there is no cancellation.
double alpha_root(const KineticParams& params, double c);

// The generic structural conditions hold automatically for the affine laws
// above (given positivity), so only the explicit numeric inequalities are
// checked; the structural ones are reported as derived-from-form.
ConditionReport check_conditions(const KineticParams& params);

} // namespace tumorlin

#endif
