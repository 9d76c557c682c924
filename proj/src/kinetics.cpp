#include "tumorlin/kinetics.hpp"

#include <cmath>
#include <stdexcept>

namespace tumorlin {

void KineticParams::validate() const {
    if (n < 2) throw std::invalid_argument("KineticParams: n must be >= 2");
    if (!(lambda_nutrient > 0.0)) throw std::invalid_argument("KineticParams: lambda must be > 0");
    if (!(k_B > 0.0 && k_D > 0.0 && k_P > 0.0 && k_Q > 0.0))
        throw std::invalid_argument("KineticParams: rate constants must be > 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("KineticParams: gamma must be > 0");
}

RateBundle eval_rates(const KineticParams& params, double c) {
    if (c < -1e-12 || c > 1.0 + 1e-12)
        throw std::domain_error("eval_rates: concentration outside [0,1]");
    RateBundle b;
    b.F = params.lambda_nutrient * c;
    b.K_B = params.k_B * c;
    b.K_D = params.k_D * (1.0 - c);
    b.K_P = params.k_P * c;
    b.K_Q = params.k_Q * (1.0 - c);
    b.K_M = b.K_B + b.K_D;
    b.K_N = b.K_P + b.K_Q;
    return b;
}

FGBundle eval_fg(const KineticParams& params, double c, double p) {
    const RateBundle r = eval_rates(params, c);
    const double dKM = params.k_B - params.k_D; // K_M'
    const double dKN = params.k_P - params.k_Q; // K_N'
    FGBundle out;
    out.f = r.K_P + (r.K_M - r.K_N) * p - r.K_M * p * p;
    out.g = r.K_M * p - r.K_D;
    out.f_c = params.k_P + (dKM - dKN) * p - dKM * p * p;
    out.f_p = r.K_M - r.K_N - 2.0 * r.K_M * p;
    out.g_c = dKM * p + params.k_D; // K_M' p - K_D'
    out.g_p = r.K_M;
    return out;
}

double alpha_root(const KineticParams& params, double c) {
    const RateBundle r = eval_rates(params, c);
    if (!(r.K_M > 0.0)) throw std::domain_error("alpha_root: K_M(c) must be > 0");
    const double b = r.K_M - r.K_N;
    const double disc = std::sqrt(b * b + 4.0 * r.K_M * r.K_P);
    double root;
    if (b >= 0.0)
        root = (b + disc) / (2.0 * r.K_M);
    else
        root = (2.0 * r.K_P) / (disc - b);
    return root;
}

ConditionReport check_conditions(const KineticParams& params) {
    ConditionReport rep;
    rep.positivity = params.k_B > 0 && params.k_D > 0 && params.k_P > 0 && params.k_Q > 0 &&
                     params.lambda_nutrient > 0 && params.n >= 2;
    auto add = [&](const std::string& name, double lhs, double rhs, bool pass) {
        rep.checks.push_back(ConditionCheck{name, pass, lhs, rhs});
        return pass;
    };
    bool ok = rep.positivity;
    add("rates > 0 and n >= 2", 0, 0, rep.positivity);
    ok &= add("k_B > k_D", params.k_B, params.k_D, params.k_B > params.k_D);
    ok &= add("k_D >= 2 k_Q", params.k_D, 2.0 * params.k_Q, params.k_D >= 2.0 * params.k_Q);
    ok &= add("k_Q > 0", params.k_Q, 0.0, params.k_Q > 0.0);
    ok &= add("k_B > k_P", params.k_B, params.k_P, params.k_B > params.k_P);
    ok &= add("k_B k_Q <= k_D k_P", params.k_B * params.k_Q, params.k_D * params.k_P,
              params.k_B * params.k_Q <= params.k_D * params.k_P);
    // structural conditions, implied by the affine laws given the above:
    // F smooth with F(0)=0, F'>0; K_B'>0, K_D'<0, endpoints zero; and
    // K_B'+K_D' = k_B-k_D > 0 is the "k_B > k_D" row.
    add("F, K_* structural form (derived)", 0, 0, rep.positivity);
    rep.satisfies_1_25 = ok;
    return rep;
}

} // namespace tumorlin
